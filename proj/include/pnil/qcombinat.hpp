#pragma once

#include "pnil/field.hpp"

namespace pnil {

/// A field together with a distinguished primitive Nth root of unity q:
/// [N]_q = 0 while [1]_q .. [N-1]_q are invertible. Checked at construction.
struct QContext {
  FieldSpecPtr spec;
  FieldElem q;
  int N = 2;

  QContext(FieldSpecPtr spec, FieldElem q, int N);

  /// q = 1 in characteristic p with N = p; the standard choice for p-complexes.
  static QContext char_p(u64 p);
  /// N = 2 with q = -1, i.e. ordinary chain complexes with signs.
  static QContext chain(const FieldSpecPtr& spec);

  FieldElem q_pow(long long e) const;  // q^e, negative e via q^{-1}
  bool operator==(const QContext& other) const {
    return *spec == *other.spec && q == other.q && N == other.N;
  }
};

/// [n]_q = 1 + q + ... + q^{n-1}, with [0]_q = 0.
FieldElem q_integer(int n, const QContext& ctx);

/// [n]_q! = [1]_q [2]_q ... [n]_q.
FieldElem q_factorial(int n, const QContext& ctx);

/// Gaussian binomial by the defining recurrence
///   binom(n,0) = binom(n,n) = 1,
///   binom(n+1,m+1) = binom(n,m) + q^{m+1} binom(n,m+1).
/// Requires 0 <= m <= n; n may be as large as N.
FieldElem q_binomial(int n, int m, const QContext& ctx);

/// Factorial-formula route [n]!/([n-m]![m]!) under the convention that the
/// quotient is 1 when n = N and m in {0, N}; used to cross-check q_binomial.
FieldElem q_binomial_factorial(int n, int m, const QContext& ctx);

bool is_distinguished_root(const FieldElem& q, int N);

/// Checks q^{(s+1)t} * sum_{i=s}^{t} binom(m-1-i, m-1-t) binom(i,s) q^{-i(s+1)}
/// = binom(m, m+s-t) for 0 <= s <= t < m <= N.
bool verify_q_identity(int s, int t, int m, const QContext& ctx);

}  // namespace pnil
