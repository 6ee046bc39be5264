#pragma once

#include <map>
#include <string>
#include <vector>

#include "pnil/field.hpp"

namespace pnil {

using Exponents = std::vector<int>;

/// Sparse multivariate polynomial in n variables over a fixed field.
/// Stored as exponent vector -> nonzero coefficient; zero coefficients are
/// never kept.
class MultiPoly {
 public:
  MultiPoly() = default;
  MultiPoly(FieldSpecPtr spec, int n);

  static MultiPoly zero(const FieldSpecPtr& spec, int n);
  static MultiPoly constant(const FieldSpecPtr& spec, int n, const FieldElem& c);
  static MultiPoly variable(const FieldSpecPtr& spec, int n, int i);  // x_i, 0-based
  static MultiPoly monomial(const FieldSpecPtr& spec, int n, const Exponents& e,
                            const FieldElem& c);

  const FieldSpecPtr& spec() const { return spec_; }
  int nvars() const { return n_; }
  const std::map<Exponents, FieldElem>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  /// -1 for the zero polynomial.
  int total_degree() const;
  bool is_homogeneous(int d) const;
  /// Degree when homogeneous (zero counts as homogeneous of any degree,
  /// reported as -1); -2 when inhomogeneous.
  int homogeneous_degree() const;
  bool is_constant() const;
  FieldElem constant_term() const;

  MultiPoly operator+(const MultiPoly& b) const;
  MultiPoly operator-(const MultiPoly& b) const;
  MultiPoly operator*(const MultiPoly& b) const;
  MultiPoly operator-() const;
  MultiPoly scaled(const FieldElem& c) const;
  bool operator==(const MultiPoly& b) const;
  bool operator!=(const MultiPoly& b) const { return !(*this == b); }

  /// Coefficient of an exponent vector (zero element when absent).
  FieldElem coeff(const Exponents& e) const;
  void add_term(const Exponents& e, const FieldElem& c);

  /// Exact evaluation at a point. The point's field may be an extension of
  /// the coefficient field (coefficients are embedded).
  FieldElem eval(const std::vector<FieldElem>& point) const;

  std::string str(const std::vector<std::string>& var_names = {}) const;

 private:
  FieldSpecPtr spec_;
  int n_ = 0;
  std::map<Exponents, FieldElem> terms_;

  void check_compatible(const MultiPoly& b) const;
};

bool poly_is_homogeneous(const MultiPoly& f, int d);
FieldElem poly_eval(const MultiPoly& f, const std::vector<FieldElem>& point);

/// All exponent vectors in n variables of total degree d, lexicographically
/// ascending. n = 0 yields the empty vector for d = 0 and nothing otherwise.
std::vector<Exponents> monomials_of_degree(int n, int d);

}  // namespace pnil
