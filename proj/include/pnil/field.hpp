#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace pnil {

using u64 = std::uint64_t;

/// Description of the finite field F_{p^m}. For m = 1 elements are residues
/// mod p; for m > 1 they are residue polynomials mod the stored monic
/// irreducible modulus of degree m. The modulus is the lexicographically
/// least monic irreducible (coefficients compared low degree first), so a
/// given (p, m) always produces the same field presentation.
struct FieldSpec {
  u64 p = 0;
  int m = 1;
  std::vector<u64> modulus;  // c_0..c_m with c_m = 1; size m+1 (for m = 1: t - 0, i.e. {0,1})

  u64 order() const;  // p^m
  bool operator==(const FieldSpec& other) const = default;
  std::string describe() const;  // "F_9 = F_3[t]/(t^2 + 1)" style
};

using FieldSpecPtr = std::shared_ptr<const FieldSpec>;

bool is_prime(u64 n);

/// Builds F_{p^m}. Rejects non-prime p and m < 1.
FieldSpecPtr field_make(u64 p, int m = 1);

/// Element of F_{p^m}: coefficient vector of length m, entries in [0, p).
class FieldElem {
 public:
  FieldElem() = default;
  FieldElem(FieldSpecPtr spec, std::vector<u64> coeffs);

  static FieldElem zero(const FieldSpecPtr& spec);
  static FieldElem one(const FieldSpecPtr& spec);
  /// Embeds an integer (mod p) as a constant.
  static FieldElem from_int(const FieldSpecPtr& spec, long long v);
  /// Element with index k in the enumeration order: k written base p,
  /// digit i = coefficient of t^i.
  static FieldElem from_index(const FieldSpecPtr& spec, u64 k);

  const FieldSpecPtr& spec() const { return spec_; }
  const std::vector<u64>& coeffs() const { return coeffs_; }
  u64 index() const;  // inverse of from_index

  bool is_zero() const;
  bool is_one() const;
  /// True when all coefficients of t^i, i >= 1 vanish (element of the prime field).
  bool is_constant() const;

  FieldElem operator+(const FieldElem& b) const;
  FieldElem operator-(const FieldElem& b) const;
  FieldElem operator*(const FieldElem& b) const;
  FieldElem operator-() const;
  FieldElem inv() const;  // throws std::domain_error on zero
  FieldElem pow(u64 e) const;
  FieldElem pow_signed(long long e) const;  // negative exponents via inverse

  bool operator==(const FieldElem& b) const;
  bool operator!=(const FieldElem& b) const { return !(*this == b); }

  std::string str() const;

 private:
  FieldSpecPtr spec_;
  std::vector<u64> coeffs_;

  void check_same(const FieldElem& b) const;
};

enum class FieldOp { add, mul, inv, neg };

/// Dispatch form used by the CLI; the operators above are the library surface.
FieldElem field_arith(const FieldElem& a, const FieldElem& b, FieldOp op);

/// Embedding F_{p^ms} -> F_{p^mt}. Identity when the specs coincide;
/// constants map to constants; otherwise requires ms | mt and maps the
/// generator to the least root of the source modulus in the target field.
FieldElem embed(const FieldElem& a, const FieldSpecPtr& target);

}  // namespace pnil
