#include "pnil/qcombinat.hpp"

#include <stdexcept>
#include <string>

namespace pnil {

namespace {
FieldElem q_integer_raw(int n, const FieldElem& q) {
  FieldElem acc = FieldElem::zero(q.spec());
  FieldElem pw = FieldElem::one(q.spec());
  for (int k = 0; k < n; ++k) {
    acc = acc + pw;
    pw = pw * q;
  }
  return acc;
}
}  // namespace

QContext::QContext(FieldSpecPtr spec_, FieldElem q_, int N_)
    : spec(std::move(spec_)), q(std::move(q_)), N(N_) {
  if (N < 2) throw std::invalid_argument("QContext: N must be >= 2");
  if (!(*q.spec() == *spec)) throw std::invalid_argument("QContext: q not in the given field");
  if (!is_distinguished_root(q, N))
    throw std::invalid_argument("QContext: q is not a distinguished primitive " +
                                std::to_string(N) + "th root of unity");
}

QContext QContext::char_p(u64 p) {
  auto spec = field_make(p, 1);
  return QContext(spec, FieldElem::one(spec), static_cast<int>(p));
}

QContext QContext::chain(const FieldSpecPtr& spec) {
  return QContext(spec, -FieldElem::one(spec), 2);
}

FieldElem QContext::q_pow(long long e) const { return q.pow_signed(e); }

FieldElem q_integer(int n, const QContext& ctx) {
  if (n < 0) throw std::invalid_argument("q_integer: negative n");
  return q_integer_raw(n, ctx.q);
}

FieldElem q_factorial(int n, const QContext& ctx) {
  FieldElem acc = FieldElem::one(ctx.spec);
  for (int k = 1; k <= n; ++k) acc = acc * q_integer(k, ctx);
  return acc;
}

FieldElem q_binomial(int n, int m, const QContext& ctx) {
  if (m < 0 || n < 0 || m > n)
    throw std::invalid_argument("q_binomial: need 0 <= m <= n");
  // recurrence table; sizes here are tiny (n <= N)
  std::vector<std::vector<FieldElem>> row(n + 1);
  for (int i = 0; i <= n; ++i) {
    row[i].assign(i + 1, FieldElem::zero(ctx.spec));
    row[i][0] = FieldElem::one(ctx.spec);
    row[i][i] = FieldElem::one(ctx.spec);
    for (int j = 1; j < i; ++j)
      row[i][j] = row[i - 1][j - 1] + ctx.q_pow(j) * row[i - 1][j];
  }
  return row[n][m];
}

FieldElem q_binomial_factorial(int n, int m, const QContext& ctx) {
  if (m < 0 || n < 0 || m > n)
    throw std::invalid_argument("q_binomial_factorial: need 0 <= m <= n");
  if (n > ctx.N)
    throw std::invalid_argument("q_binomial_factorial: n beyond N is not defined here");
  if (n == ctx.N && (m == 0 || m == n)) return FieldElem::one(ctx.spec);  // [N]!/[N]! = 1
  FieldElem denom = q_factorial(n - m, ctx) * q_factorial(m, ctx);
  return q_factorial(n, ctx) * denom.inv();
}

bool is_distinguished_root(const FieldElem& q, int N) {
  if (N < 2) throw std::invalid_argument("is_distinguished_root: N must be >= 2");
  if (!q_integer_raw(N, q).is_zero()) return false;
  for (int n = 1; n < N; ++n)
    if (q_integer_raw(n, q).is_zero()) return false;  // nonzero = invertible in a field
  return true;
}

bool verify_q_identity(int s, int t, int m, const QContext& ctx) {
  if (!(0 <= s && s <= t && t < m && m <= ctx.N))
    throw std::invalid_argument("verify_q_identity: need 0 <= s <= t < m <= N");
  FieldElem sum = FieldElem::zero(ctx.spec);
  for (int i = s; i <= t; ++i) {
    FieldElem term = q_binomial(m - 1 - i, m - 1 - t, ctx) * q_binomial(i, s, ctx) *
                     ctx.q_pow(-static_cast<long long>(i) * (s + 1));
    sum = sum + term;
  }
  FieldElem lhs = ctx.q_pow(static_cast<long long>(s + 1) * t) * sum;
  FieldElem rhs = q_binomial(m, m + s - t, ctx);
  return lhs == rhs;
}

}  // namespace pnil
