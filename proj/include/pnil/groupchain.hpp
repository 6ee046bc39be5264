#pragma once

#include <map>
#include <string>
#include <vector>

#include "pnil/matrix.hpp"
#include "pnil/ncomplex.hpp"
#include "pnil/poly.hpp"

namespace pnil {

/// Element of k[y_1..y_n]/(y_1^p,...,y_n^p), i.e. the group algebra k[G] of
/// G = (Z/p)^n under y_i = e_i - 1. Products drop every term in which some
/// exponent reaches p.
class TruncPoly {
 public:
  TruncPoly() = default;
  TruncPoly(FieldSpecPtr spec, int n, int p);

  static TruncPoly zero(const FieldSpecPtr& spec, int n, int p);
  static TruncPoly constant(const FieldSpecPtr& spec, int n, int p, const FieldElem& c);
  static TruncPoly variable(const FieldSpecPtr& spec, int n, int p, int i);

  const FieldSpecPtr& spec() const { return spec_; }
  int nvars() const { return n_; }
  int charp() const { return p_; }
  const std::map<Exponents, FieldElem>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  FieldElem coeff(const Exponents& e) const;
  void add_term(const Exponents& e, const FieldElem& c);

  TruncPoly operator+(const TruncPoly& b) const;
  TruncPoly operator-(const TruncPoly& b) const;
  TruncPoly operator*(const TruncPoly& b) const;
  TruncPoly operator-() const;
  bool operator==(const TruncPoly& b) const;

  std::string str() const;

 private:
  FieldSpecPtr spec_;
  int n_ = 0, p_ = 2;
  std::map<Exponents, FieldElem> terms_;
};

/// Index of a monomial y^a, a in [0,p)^n, in the flattened basis of k[G]:
/// lexicographic, first variable most significant.
int kg_mono_index(const Exponents& a, int p);
std::vector<Exponents> kg_monomials(int n, int p);

/// k-matrix of multiplication by g on k[G] in the monomial basis.
Matrix kg_action_matrix(const TruncPoly& g);

/// Dense matrix with entries in k[G].
class TruncMatrix {
 public:
  TruncMatrix() = default;
  TruncMatrix(FieldSpecPtr spec, int n, int p, int rows, int cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const TruncPoly& at(int i, int j) const { return data_[i * cols_ + j]; }
  void set(int i, int j, const TruncPoly& v) { data_[i * cols_ + j] = v; }

  static TruncMatrix identity(const FieldSpecPtr& spec, int n, int p, int m);
  TruncMatrix operator*(const TruncMatrix& b) const;
  TruncMatrix operator+(const TruncMatrix& b) const;
  TruncMatrix operator-(const TruncMatrix& b) const;
  bool is_zero() const;
  bool operator==(const TruncMatrix& b) const;

  /// Expansion as a k-linear map k[G]^cols -> k[G]^rows in the basis
  /// (generator, monomial), generator index major.
  Matrix flatten() const;

  const FieldSpecPtr& spec() const { return spec_; }
  int nvars() const { return n_; }
  int charp() const { return p_; }

 private:
  FieldSpecPtr spec_;
  int n_ = 0, p_ = 2, rows_ = 0, cols_ = 0;
  std::vector<TruncPoly> data_;
};

/// Bounded complex of finitely generated free k[G]-modules with a degree -1
/// differential satisfying d^nilpotency = 0. Perfect chain complexes carry
/// nilpotency 2; the inflation iota produces nilpotency p.
struct KGComplex {
  FieldSpecPtr spec;
  int p = 2;
  int n = 1;
  int nilpotency = 2;
  std::map<int, int> ranks;
  std::map<int, TruncMatrix> d;

  int rank(int l) const;
  TruncMatrix dmat(int l) const;
  int lowest() const;
  int highest() const;
  bool empty() const;
};

using PerfectComplex = KGComplex;  // nilpotency == 2

/// Degree-0 k[G]-linear chain map.
struct KGMorphism {
  const KGComplex* source = nullptr;
  const KGComplex* target = nullptr;
  std::map<int, TruncMatrix> mats;
  TruncMatrix mat(int l) const;
};

/// Graded k[G]-linear map of degree `shift`; homotopies carry shift
/// nilpotency - 1 (the default when shift is left negative).
struct KGHomotopy {
  std::map<int, TruncMatrix> mats;
  int shift = -1;
  TruncMatrix mat(const KGComplex& src, const KGComplex& tgt, int l) const;
};

/// Finite-dimensional k[G]-module: a k-space with commuting p-nilpotent
/// actions of y_1..y_n.
struct GModule {
  FieldSpecPtr spec;
  int n = 1, p = 2;
  int dim = 0;
  std::vector<Matrix> y_actions;  // one per variable, dim x dim
};

bool gc_validate(const KGComplex& C, std::string* why = nullptr);

/// Flattens to an N-complex of k-vector spaces (N = nilpotency; q = 1 for
/// N = p, q = -1 for N = 2).
NComplexFin gc_flatten(const KGComplex& C);
Morphism gc_flatten_morphism(const KGMorphism& f, const NComplexFin& src, const NComplexFin& tgt);

/// H_i(C) with its induced k[G]-module structure (perfect complexes only).
std::map<int, GModule> gc_homology(const KGComplex& C);

int gc_loewy_length(const GModule& M);

/// The inflation iota: p-2 identity arrows inserted at the even spots, graded
/// so that (iota C)_{p i - 1} = C_{2i-1} and C_{2i} fills degrees p i .. p i + p - 2.
KGComplex gc_iota(const KGComplex& C);
KGMorphism gc_iota_morphism(const KGMorphism& f, const KGComplex& iC, const KGComplex& iD);
int iota_degree_of_odd(int i, int p);  // degree of C_{2i-1}

/// Free rank-1 module in degree 0.
KGComplex gc_free_module(u64 p, int n);
/// Circle complex 0 -> k[G] --y_1--> k[G] -> 0 over n = 1.
KGComplex gc_circle(u64 p);
/// Chain complex of the n-torus as a free (Z/p)^n-CW complex: the Koszul
/// complex of (y_1..y_n) over k[G]; ranks binom(n, i).
KGComplex gc_torus(int n, u64 p);

long long gc_euler(const KGComplex& C);

/// Homotopy identity over k[G]: f - g = sum d^{N-1-t} h d^t.
bool kg_verify_homotopy(const KGMorphism& f, const KGMorphism& g, const KGHomotopy& h,
                        std::string* why = nullptr);

/// Given a null-homotopy h for iota(f), produces the 2-complex null-homotopy
/// for f: on even degrees d(h_{pl+p-2} + ... + h_{pl+1}) + h_{pl}, on odd
/// degrees h_{pl-1}. Throws if h fails to be a null-homotopy for iota(f).
KGHomotopy gc_iota_homotopy_transport(const KGMorphism& f, const KGHomotopy& h);

}  // namespace pnil
