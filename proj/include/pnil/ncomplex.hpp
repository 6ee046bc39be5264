#pragma once

#include <map>
#include <string>
#include <vector>

#include "pnil/matrix.hpp"
#include "pnil/qcombinat.hpp"

namespace pnil {

/// Finite-dimensional N-complex over a field: graded pieces dims(l) with a
/// degree -1 differential, d^N = 0. d.at(l) maps degree l to degree l-1 and
/// has shape dims(l-1) x dims(l); absent degrees are zero.
struct NComplexFin {
  QContext ctx;
  std::map<int, int> dims;
  std::map<int, Matrix> d;

  explicit NComplexFin(QContext c) : ctx(std::move(c)) {}

  int dim(int l) const;
  /// Differential out of degree l, materialized with the right shape.
  Matrix dmat(int l) const;
  /// Composite d^k out of degree l (shape dim(l-k) x dim(l)).
  Matrix dpow(int l, int k) const;
  int lowest() const;   // smallest degree with dim > 0 (0 when empty)
  int highest() const;  // largest degree with dim > 0
  bool empty() const;
  int total_dim() const;
  long long euler() const;  // sum (-1)^l dim(l)
  bool operator==(const NComplexFin& other) const;
};

/// Degree-0 map of N-complexes commuting with the differentials.
struct Morphism {
  const NComplexFin* source = nullptr;
  const NComplexFin* target = nullptr;
  std::map<int, Matrix> mats;  // degree l -> dim_target(l) x dim_source(l)

  Matrix mat(int l) const;
};

/// Degree N-1 map underlying a chain homotopy.
struct Homotopy {
  std::map<int, Matrix> mats;  // degree l -> dim_target(l + N - 1) x dim_source(l)

  Matrix mat(const NComplexFin& src, const NComplexFin& tgt, int l) const;
};

struct HomologySlice {
  int s = 1;
  std::map<int, Subquotient> layers;  // degree -> subquotient data

  int dim(int l) const;
  std::map<int, int> dims() const;
  bool is_zero() const;
  int total_dim() const;
};

struct StringBlock {
  int top_degree = 0;
  int length = 1;
  std::vector<std::vector<FieldElem>> vectors;  // v, dv, ..., d^{length-1} v
};

struct StringDecomposition {
  std::vector<StringBlock> strings;  // ordered: length desc, top degree desc, pivot asc
};

/// Validates shapes and d^N = 0; on failure `why` names the first offending degree.
bool ncx_validate(const NComplexFin& C, std::string* why = nullptr);

/// Slice homology _sH = ker d^s / im d^{N-s}, degree by degree.
HomologySlice ncx_homology(const NComplexFin& C, int s);

/// Kapranov's criterion: acyclicity is equivalent to the vanishing of a
/// single slice, so only _1H is computed.
bool ncx_is_acyclic(const NComplexFin& C);

NComplexFin ncx_shift(const NComplexFin& C, int l);

/// Tensor product with the q-twisted differential d(x (x) y) = dx (x) y +
/// q^{-a} x (x) dy. Degree-n basis ordering: blocks (a, b = n - a) with a
/// ascending, C-index major within a block.
NComplexFin ncx_tensor(const NComplexFin& C, const NComplexFin& D);

/// Hom-complex with differential (df)_i = d f_i - q^{-n} f_{i-1} d.
/// Degree-n basis: blocks Hom(C_i, D_{i+n}) with i ascending; within a block
/// matrix units E_{rs} ordered by target index r, then source index s.
NComplexFin ncx_hom(const NComplexFin& C, const NComplexFin& D);

bool morphism_validate(const Morphism& f, std::string* why = nullptr);

/// f (x) id_D (left = true) or id_D (x) f (left = false); the caller supplies
/// the two tensor complexes so ownership stays outside.
Morphism ncx_tensor_morphism(const Morphism& f, const NComplexFin& D, const NComplexFin& tsrc,
                             const NComplexFin& ttgt, bool left);

/// h (x) id_D (left = true) or the twisted x (x) y -> q^{-a} x (x) h(y)
/// (left = false) for a degree N-1 map h between hsrc and htgt.
Homotopy ncx_tensor_homotopy(const Homotopy& h, const NComplexFin& hsrc, const NComplexFin& htgt,
                             const NComplexFin& D, bool left);

/// Whether f - g = sum_i d^{N-1-i} h d^i. Inputs must be valid morphisms
/// between the same complexes.
bool ncx_verify_homotopy(const Morphism& f, const Morphism& g, const Homotopy& h,
                         std::string* why = nullptr);

/// Induced maps between homology slices. i_* : _sH_l -> _{s+1}H_l requires
/// 1 <= s <= N-2; d_* : _sH_l -> _{s-1}H_{l-1} requires 2 <= s <= N-1.
Matrix ncx_induced_i(const NComplexFin& C, const HomologySlice& from, const HomologySlice& to,
                     int l);
Matrix ncx_induced_d(const NComplexFin& C, const HomologySlice& from, const HomologySlice& to,
                     int l);

/// Graded nilpotent normal form: a homogeneous basis splitting C into
/// strings v -> dv -> ... -> d^{L-1}v of lengths 1..N.
StringDecomposition ncx_string_decompose(const NComplexFin& C);

/// Rebuilds an N-complex in canonical string form (for round-trip checks).
NComplexFin strings_to_complex(const QContext& ctx, const StringDecomposition& sd,
                               const std::map<int, int>& dims);

struct SesReport {
  bool exact_input = false;       // the degreewise triple is short exact
  bool hexagon_exact = false;     // every node of the six-term sequence, every s
  std::string detail;
};

/// Checks the six-term long exact sequence induced by a short exact sequence
/// 0 -> C' -> C -> C'' -> 0 for every s, verifying exactness at each node by
/// composite-vanishing plus rank counting.
SesReport ncx_ses_check(const Morphism& inclusion, const Morphism& projection);

struct HexagonReport {
  bool exact = true;
  std::string detail;
};

/// Exactness of the (i_*)^r / (d_*)^s hexagon for all admissible r, s >= 1
/// with r + s <= N-1.
HexagonReport ncx_hexagon_check(const NComplexFin& C);

}  // namespace pnil
