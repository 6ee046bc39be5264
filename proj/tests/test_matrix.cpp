#include <doctest.h>

#include "pnil/matrix.hpp"
#include "pnil/rng.hpp"

using namespace pnil;

namespace {

Matrix random_matrix(const FieldSpecPtr& spec, int r, int c, Rng& rng) {
  Matrix m(spec, r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j)
      m.set(i, j, FieldElem::from_index(spec, rng.below(spec->order())));
  return m;
}

}  // namespace

TEST_CASE("rank, kernel, image agree with rank-nullity on random matrices") {
  Rng rng(1234);
  for (auto [p, m] : {std::pair<u64, int>{2, 1}, {3, 1}, {5, 1}, {2, 2}}) {
    auto spec = field_make(p, m);
    for (int trial = 0; trial < 60; ++trial) {
      int r = rng.range(0, 5), c = rng.range(0, 5);
      Matrix a = random_matrix(spec, r, c, rng);
      int rk = a.rank();
      Matrix ker = a.kernel_basis();
      Matrix img = a.image_basis();
      CHECK(rk + ker.cols() == c);
      CHECK(img.cols() == rk);
      CHECK((a * ker).is_zero());
      // image columns really lie in the column space
      for (int j = 0; j < img.cols(); ++j) CHECK(a.solve(img.column(j)).has_value());
    }
  }
}

TEST_CASE("inverse and solve") {
  Rng rng(77);
  auto spec = field_make(5, 1);
  for (int trial = 0; trial < 40; ++trial) {
    int nn = rng.range(1, 5);
    Matrix a = random_matrix(spec, nn, nn, rng);
    if (a.rank() < nn) continue;
    Matrix inv = a.inverse();
    CHECK(a * inv == Matrix::identity(spec, nn));
    CHECK(inv * a == Matrix::identity(spec, nn));
    std::vector<FieldElem> b;
    for (int i = 0; i < nn; ++i) b.push_back(FieldElem::from_index(spec, rng.below(5)));
    auto x = a.solve(b);
    REQUIRE(x.has_value());
    CHECK(a.apply(*x) == b);
  }
  Matrix sing(spec, 2, 2);
  sing.set(0, 0, FieldElem::one(spec));
  CHECK_THROWS_AS(sing.inverse(), std::domain_error);
}

TEST_CASE("solve detects inconsistency") {
  auto spec = field_make(3, 1);
  Matrix a(spec, 2, 1);
  a.set(0, 0, FieldElem::one(spec));
  std::vector<FieldElem> b{FieldElem::zero(spec), FieldElem::one(spec)};
  CHECK_FALSE(a.solve(b).has_value());
}

TEST_CASE("subquotient projection") {
  auto spec = field_make(3, 1);
  // ambient F_3^3, ker = span(e1, e2), im = span(e1)
  Matrix ker(spec, 3, 2);
  ker.set(0, 0, FieldElem::one(spec));
  ker.set(1, 1, FieldElem::one(spec));
  Matrix im(spec, 3, 1);
  im.set(0, 0, FieldElem::from_int(spec, 2));
  Subquotient q(ker, im);
  CHECK(q.dim() == 1);
  std::vector<FieldElem> v{FieldElem::from_int(spec, 1), FieldElem::from_int(spec, 2),
                           FieldElem::zero(spec)};
  auto coords = q.project(v);
  REQUIRE(coords.size() == 1);
  CHECK(coords[0] == FieldElem::from_int(spec, 2));
  std::vector<FieldElem> bad{FieldElem::zero(spec), FieldElem::zero(spec), FieldElem::one(spec)};
  CHECK_THROWS_AS(q.project(bad), std::domain_error);
}

TEST_CASE("empty shapes are first-class") {
  auto spec = field_make(2, 1);
  Matrix a(spec, 0, 3);
  CHECK(a.rank() == 0);
  CHECK(a.kernel_basis().cols() == 3);
  Matrix b(spec, 3, 0);
  CHECK(b.rank() == 0);
  CHECK(b.image_basis().cols() == 0);
  Matrix prod = b * a;
  CHECK(prod.rows() == 3);
  CHECK(prod.cols() == 3);
  CHECK(prod.is_zero());
}
