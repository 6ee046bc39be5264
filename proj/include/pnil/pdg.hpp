#pragma once

#include <map>
#include <string>
#include <vector>

#include "pnil/groupchain.hpp"
#include "pnil/ncomplex.hpp"
#include "pnil/polymatrix.hpp"

namespace pnil {

/// Finitely generated free p-DG module over A = k[x_1..x_n], deg(x_i) = -1:
/// generator degrees c_1..c_l and a differential matrix D with d(v_j) =
/// sum_i D_ij v_i. Entry D_ij is homogeneous of standard degree c_i + 1 - c_j
/// and D^p = 0.
struct PDGModule {
  FieldSpecPtr spec;
  int p = 2;
  int n = 1;
  std::vector<int> c;
  PolyMatrix D;

  int size() const { return static_cast<int>(c.size()); }
  int min_degree() const;
  int max_degree() const;
  bool operator==(const PDGModule& other) const {
    return p == other.p && n == other.n && c == other.c && D == other.D;
  }
};

/// Bounded N-complex of free graded A-modules: per homological degree a list
/// of internal generator degrees and a block differential.
struct FreeAComplex {
  FieldSpecPtr spec;
  int p = 2;  // the N of the N-complex
  int n = 1;
  std::map<int, std::vector<int>> gens;        // hdeg -> internal degrees
  std::map<int, PolyMatrix> diff;              // hdeg -> block gens(h-1) x gens(h)
  std::map<int, std::vector<Exponents>> labels;  // optional generator tags (Koszul exponents)

  int count(int h) const;
  PolyMatrix dmat(int h) const;
  int lowest() const;
  int highest() const;
};

struct GradedHomologyReport {
  int s = 1;
  std::map<int, int> dims;  // total degree -> dimension
  int cutoff = 0;
  bool certified = false;
  int total() const;
};

struct AComplexHomologyReport {
  int s = 1;
  std::map<int, int> dims;  // homological degree -> total dimension
  int cutoff = 0;
  bool certified = false;
};

/// Degree-0 map of p-DG modules: entries homogeneous of degree
/// c^target_i - c^source_j, commuting with the differentials.
struct PDGMorphism {
  const PDGModule* source = nullptr;
  const PDGModule* target = nullptr;
  PolyMatrix F;
};

bool pdg_validate(const PDGModule& M, std::string* why = nullptr);
bool pdg_morphism_validate(const PDGMorphism& f, std::string* why = nullptr);

/// Koszul N-complex K^N(x_{vars}): tensor product of one-variable strips
/// R ->x R ->x ... ->x R (N terms, top in homological degree N-1) with the
/// q = 1 tensor differential. Generators are labelled by exponent vectors.
FreeAComplex pdg_koszul(int N, const std::vector<int>& vars, u64 p, int n);
FreeAComplex pdg_koszul_all(int N, u64 p, int n);

/// Forgets the homological grading: generators concatenated hdeg-descending.
/// Returns the module plus each generator's (hdeg, index-within-hdeg).
PDGModule acomplex_to_pdg(const FreeAComplex& K,
                          std::vector<std::pair<int, int>>* origin = nullptr);

/// The functor beta: C (x)_k A with d(c (x) f) = d(c) (x) f + sum y_i c (x) x_i f,
/// on the k[G]-monomial basis. Generators ordered degree-descending, within a
/// degree by (free generator, monomial index). Requires d^p = 0 over k[G].
PDGModule pdg_beta(const KGComplex& C);
/// Exponent labels of beta's generators, aligned with pdg_beta's order.
std::vector<std::pair<int, Exponents>> pdg_beta_basis(const KGComplex& C);  // (degree, monomial)

/// Fiber at a point: entrywise evaluation.
Matrix pdg_fiber(const PDGModule& M, const std::vector<FieldElem>& point);

/// Fiber at 0 keeps the grading: a p-complex of k-spaces plus, per degree,
/// the list of generator indices realizing that degree.
struct Fiber0 {
  NComplexFin F;
  std::map<int, std::vector<int>> gen_ids;

  explicit Fiber0(QContext ctx) : F(std::move(ctx)) {}
};
Fiber0 pdg_fiber0(const PDGModule& M);

/// Slice homology of M by internal degree layers, exact per layer, computed
/// down to `cutoff`. The certified flag records the x_j^{p-1}-annihilation
/// check on all computed classes plus an n(p-1)-wide window of zero layers
/// just above the cutoff.
GradedHomologyReport pdg_homology(const PDGModule& M, int s, int cutoff);

/// As pdg_homology but per homological degree of an N-complex of free
/// A-modules, internal layers summed.
AComplexHomologyReport pdg_homology_acomplex(const FreeAComplex& K, int s, int cutoff);

/// Nullhomotopy witness for multiplication by x_i^{p-1} on a Koszul complex:
/// h(e_a) = e_{a + (p-1) delta_i} when a_i = 0, else 0. Verified symbolically.
struct AComplexHomotopy {
  std::map<int, PolyMatrix> mats;  // hdeg -> block gens(h + N - 1) x gens(h)
};
AComplexHomotopy pdg_nullhomotopy_xp(const FreeAComplex& K, int var);

/// Mapping cone M[p-1] (+) ... (+) M[1] (+) N with subdiagonal identities and
/// f in the last block row.
PDGModule pdg_cone(const PDGMorphism& f);

struct MinimalModel {
  PDGModule module;
  int removed_generators = 0;  // multiples of p
};

/// Quotient by the p-DG submodule spanned by the full-length strings of the
/// 0-fiber; the result has (p-1)-nilpotent 0-fiber differential and the same
/// fiber homology. Modules that are already minimal are returned unchanged.
MinimalModel pdg_minimal_model(const PDGModule& M);

struct CompStep {
  int degree = 0;  // top homology degree split at this step
  int s = 1;       // slice used (1 or p-1)
  int gens = 1;    // 1 for A-type, p-1 for string-type
  char kind = 'A';  // 'A' = shift of A, 'V' = A v (+) A dv (+) ... (+) A d^{p-2} v
};

struct CompositionSeries {
  PDGModule module;  // chain equivalent to the input, strictly upper triangular
  std::vector<CompStep> steps;
  int socle_rounds = 0;  // number of (degree, socle layer) rounds = sum of Loewy lengths
  int length() const { return static_cast<int>(steps.size()); }
};

/// Composition series for beta(iota C)-type modules: minimal model first,
/// then repeated splitting of top-degree socle classes, one class per step.
/// Throws std::runtime_error("Assumption violated: ...") when the input does
/// not satisfy the structural assumptions of that module class.
CompositionSeries pdg_composition_series(const PDGModule& M);

/// First-page operator of the x-adic filtration spectral sequence:
/// _sH_l(M/IM) -> I/I^2 (x) _{p-s}H_{l-s+1}(M/IM), one component per x_t.
std::vector<Matrix> pdg_d1(const PDGModule& M, int s, int l);

}  // namespace pnil
