#include <doctest.h>

#include "pnil/qcombinat.hpp"

using namespace pnil;

TEST_CASE("q-integers") {
  QContext c3 = QContext::char_p(3);
  CHECK(q_integer(0, c3).is_zero());
  CHECK(q_integer(3, c3).is_zero());  // [N]_q = 0
  CHECK(q_integer(2, c3) == FieldElem::from_int(c3.spec, 2));

  // N = 4, q = 2 over F_5: [2]_q = 1 + 2 = 3
  auto f5 = field_make(5, 1);
  QContext c4(f5, FieldElem::from_int(f5, 2), 4);
  CHECK(q_integer(2, c4) == FieldElem::from_int(f5, 3));
  CHECK(q_integer(4, c4).is_zero());
}

TEST_CASE("distinguished roots") {
  auto f5 = field_make(5, 1);
  CHECK(is_distinguished_root(FieldElem::one(f5), 5));
  CHECK(is_distinguished_root(FieldElem::from_int(f5, 2), 4));
  CHECK_FALSE(is_distinguished_root(FieldElem::one(f5), 3));  // [3]_1 = 3 != 0 in F_5
  auto f7 = field_make(7, 1);
  CHECK(is_distinguished_root(FieldElem::one(f7), 7));
  // q = -1 is the distinguished square root for N = 2
  CHECK(is_distinguished_root(-FieldElem::one(f5), 2));
  CHECK_THROWS_AS(QContext(f5, FieldElem::one(f5), 3), std::invalid_argument);
}

TEST_CASE("q-binomials: recurrence, factorial formula, vanishing row N") {
  std::vector<QContext> ctxs;
  ctxs.push_back(QContext::char_p(3));
  ctxs.push_back(QContext::char_p(5));
  auto f5 = field_make(5, 1);
  ctxs.emplace_back(f5, FieldElem::from_int(f5, 2), 4);
  auto f7 = field_make(7, 1);
  ctxs.emplace_back(f7, FieldElem::from_int(f7, 2), 3);  // [3]_2 = 7 = 0, [2]_2 = 3 invertible

  for (const auto& ctx : ctxs) {
    for (int n = 0; n <= ctx.N; ++n) {
      CHECK(q_binomial(n, 0, ctx).is_one());
      CHECK(q_binomial(n, n, ctx).is_one());
      for (int m = 0; m <= n; ++m)
        CHECK(q_binomial(n, m, ctx) == q_binomial_factorial(n, m, ctx));
    }
    for (int m = 1; m <= ctx.N - 1; ++m) CHECK(q_binomial(ctx.N, m, ctx).is_zero());
  }

  QContext c5 = QContext::char_p(5);
  CHECK(q_binomial(5, 2, c5).is_zero());
  auto f5b = field_make(5, 1);
  QContext c4(f5b, FieldElem::from_int(f5b, 2), 4);
  CHECK(q_binomial(2, 1, c4) == FieldElem::from_int(f5b, 3));
  CHECK_THROWS_AS(q_binomial(1, 2, c4), std::invalid_argument);
  CHECK_THROWS_AS(q_binomial(2, -1, c4), std::invalid_argument);
}

TEST_CASE("homotopy-preservation identity") {
  // exhaustively over the contexts the acceptance suite pins
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL}) {
    QContext ctx = QContext::char_p(p);
    for (int m = 1; m <= ctx.N; ++m)
      for (int t = 0; t < m; ++t)
        for (int s = 0; s <= t; ++s) CHECK(verify_q_identity(s, t, m, ctx));
  }
  auto f5 = field_make(5, 1);
  QContext c4(f5, FieldElem::from_int(f5, 2), 4);
  for (int m = 1; m <= 4; ++m)
    for (int t = 0; t < m; ++t)
      for (int s = 0; s <= t; ++s) CHECK(verify_q_identity(s, t, m, c4));
  CHECK_THROWS_AS(verify_q_identity(2, 1, 3, c4), std::invalid_argument);
}
