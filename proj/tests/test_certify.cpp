#include <doctest.h>

#include "pnil/certify.hpp"
#include "pnil/random_gen.hpp"

using namespace pnil;

namespace {

Certificate koszul_certificate(u64 p, int n) {
  // c = (0..0), superdiagonal x_1: the single-Jordan-block certificate
  Certificate C;
  C.spec = field_make(p, 1);
  C.p = static_cast<int>(p);
  C.n = n;
  C.c.assign(static_cast<size_t>(p), 0);
  C.D = PolyMatrix(C.spec, n, C.size(), C.size());
  for (int i = 0; i + 1 < C.size(); ++i)
    C.D.set(i, i + 1, MultiPoly::variable(C.spec, n, 0));
  return C;
}

}  // namespace

TEST_CASE("koszul certificate passes all conditions") {
  CertBudget budget;
  budget.seed = 11;
  for (u64 p : {3ULL, 5ULL}) {
    Certificate C = koszul_certificate(p, 1);
    CertReport rep = cert_check(C, budget);
    CHECK(rep.homogeneous);
    CHECK(rep.p_nilpotent);
    CHECK(rep.strictly_upper);
    CHECK(rep.zero_fiber_nilpotent);
    CHECK(rep.rank_condition);
    CHECK(rep.size_divisible);
    CHECK(rep.pass());
    CHECK(rep.rank_target == static_cast<int>((p - 1)));
    CHECK(rep.exhaustive_points > 0);
    CHECK(rep.random_points > 0);
    CHECK(rep.sz_bound_aggregate <= rep.sz_bound_per_trial);
  }
}

TEST_CASE("documented mutations flip exactly their targeted verdict") {
  CertBudget budget;
  budget.seed = 13;

  // mutation 1: add a wrong-degree term to an off-path entry -> homogeneity only
  {
    Certificate C = koszul_certificate(3, 1);
    MultiPoly x = MultiPoly::variable(C.spec, 1, 0);
    C.D.set(0, 2, C.D.at(0, 2) + x);  // forced degree is 1 here; x is fine, so use x^3
    C.D.set(0, 2, MultiPoly::monomial(C.spec, 1, {3}, FieldElem::one(C.spec)));
    CertReport rep = cert_check(C, budget);
    CHECK_FALSE(rep.homogeneous);
    CHECK(rep.p_nilpotent);
    CHECK(rep.strictly_upper);
    CHECK(rep.zero_fiber_nilpotent);
    CHECK(rep.rank_condition);
  }

  // mutation 2: constant superdiagonal with the compensating ascending degree
  // vector -> condition ii only
  {
    Certificate C;
    C.spec = field_make(3, 1);
    C.p = 3;
    C.n = 1;
    C.c = {0, 1, 2};
    C.D = PolyMatrix(C.spec, 1, 3, 3);
    MultiPoly one = MultiPoly::constant(C.spec, 1, FieldElem::one(C.spec));
    C.D.set(0, 1, one);
    C.D.set(1, 2, one);
    CertReport rep = cert_check(C, budget);
    CHECK(rep.homogeneous);
    CHECK(rep.p_nilpotent);
    CHECK(rep.strictly_upper);
    CHECK_FALSE(rep.zero_fiber_nilpotent);  // (D(0))^2 = E_13 != 0
    CHECK(rep.rank_condition);
  }

  // mutation 3: zero a needed superdiagonal entry -> condition iii only
  {
    Certificate C = koszul_certificate(3, 1);
    C.D.set(0, 1, MultiPoly::zero(C.spec, 1));
    CertReport rep = cert_check(C, budget);
    CHECK(rep.homogeneous);
    CHECK(rep.p_nilpotent);
    CHECK(rep.strictly_upper);
    CHECK(rep.zero_fiber_nilpotent);
    CHECK_FALSE(rep.rank_condition);
  }

  // size guard: l not divisible by p
  {
    Certificate C = koszul_certificate(3, 1);
    C.c.push_back(0);
    PolyMatrix D(C.spec, 1, 4, 4);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) D.set(i, j, C.D.at(i, j));
    C.D = D;
    CertReport rep = cert_check(C, budget);
    CHECK_FALSE(rep.size_divisible);
    CHECK_FALSE(rep.pass());
  }
}

TEST_CASE("rank is projectively scale invariant on random homogeneous candidates") {
  Rng rng(404);
  auto spec = field_make(3, 1);
  for (int trial = 0; trial < 30; ++trial) {
    int ell = 3;
    std::vector<int> c{rng.range(0, 2), rng.range(0, 2), rng.range(0, 2)};
    std::sort(c.rbegin(), c.rend());
    Certificate C;
    C.spec = spec;
    C.p = 3;
    C.n = 2;
    C.c = c;
    C.D = PolyMatrix(spec, 2, ell, ell);
    for (int i = 0; i < ell; ++i)
      for (int j = i + 1; j < ell; ++j) {
        int deg = c[i] + 1 - c[j];
        if (deg < 0) continue;
        for (const auto& mu : monomials_of_degree(2, deg))
          C.D.set(i, j,
                  C.D.at(i, j) + MultiPoly::monomial(spec, 2, mu,
                                                     FieldElem::from_index(spec, rng.below(3))));
      }
    auto f9 = field_make(3, 2);
    for (int t = 0; t < 10; ++t) {
      std::vector<FieldElem> pt{FieldElem::from_index(f9, rng.below(9)),
                                FieldElem::from_index(f9, rng.below(9))};
      if (pt[0].is_zero() && pt[1].is_zero()) continue;
      FieldElem lam = FieldElem::from_index(f9, 1 + rng.below(8));
      std::vector<FieldElem> scaled{pt[0] * lam, pt[1] * lam};
      CHECK(C.D.eval(pt).rank() == C.D.eval(scaled).rank());
    }
  }
}

TEST_CASE("diagonal conjugation preserves all certificate conditions") {
  Rng rng(808);
  CertBudget budget;
  budget.seed = 5;
  budget.m_exhaustive = 1;
  budget.random_trials = 8;
  Certificate C = koszul_certificate(3, 1);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<FieldElem> u;
    for (int i = 0; i < C.size(); ++i)
      u.push_back(FieldElem::from_index(C.spec, 1 + rng.below(2)));
    Certificate D = C;
    for (int i = 0; i < C.size(); ++i)
      for (int j = 0; j < C.size(); ++j)
        D.D.set(i, j, C.D.at(i, j).scaled(u[i] * u[j].inv()));
    CertReport ra = cert_check(C, budget);
    CertReport rb = cert_check(D, budget);
    CHECK(ra.pass() == rb.pass());
    CHECK(ra.homogeneous == rb.homogeneous);
    CHECK(ra.rank_condition == rb.rank_condition);
  }
}

TEST_CASE("jordan types") {
  auto spec = field_make(3, 1);
  CHECK(cert_jordan_type(Matrix(spec, 3, 3)) == std::vector<int>{1, 1, 1});
  Matrix block(spec, 3, 3);
  block.set(0, 1, FieldElem::one(spec));
  block.set(1, 2, FieldElem::one(spec));
  CHECK(cert_jordan_type(block) == std::vector<int>{3});

  // Koszul p=3, n=2 fiber at (1,0): three full blocks
  FreeAComplex K = pdg_koszul_all(3, 3, 2);
  PDGModule M = acomplex_to_pdg(K);
  std::vector<FieldElem> pt{FieldElem::one(M.spec), FieldElem::zero(M.spec)};
  CHECK(cert_jordan_type(pdg_fiber(M, pt)) == std::vector<int>{3, 3, 3});

  Matrix notnil = Matrix::identity(spec, 2);
  CHECK_THROWS_AS(cert_jordan_type(notnil), std::domain_error);
}

TEST_CASE("full-rank fibers have full Jordan type") {
  // for every tested x != 0 on a passing certificate, the Jordan type is (p,...,p)
  Certificate C = koszul_certificate(3, 1);
  auto f9 = field_make(3, 2);
  for (u64 k = 1; k < 9; ++k) {
    std::vector<FieldElem> pt{FieldElem::from_index(f9, k)};
    auto jt = cert_jordan_type(C.D.eval(pt));
    CHECK(jt == std::vector<int>{3});
  }
}

TEST_CASE("bound reports") {
  // torus n=1, p=3: dim H = 2, chi = 0, ell = 3
  BoundReport r1 = cert_bound_report(gc_torus(1, 3), true);
  CHECK(r1.ell == 3);
  CHECK(r1.chi == 0);
  CHECK(r1.chi_zero_identity);
  CHECK(r1.composition_size == 3);

  // torus n=2, p=3: ell = 6 = 2^{n-1} p
  BoundReport r2 = cert_bound_report(gc_torus(2, 3), true);
  CHECK(r2.ell == 6);
  CHECK(r2.chi == 0);
  CHECK(r2.chi_zero_identity);
  CHECK(r2.composition_size == 6);

  // k[G] in degree 0, n=1, p=3: dim H_0 = 3, chi = 3, ell = 6
  BoundReport r3 = cert_bound_report(gc_free_module(3, 1), false);
  CHECK(r3.dim_h_even == 3);
  CHECK(r3.dim_h_odd == 0);
  CHECK(r3.ell == 6);
  CHECK(r3.chi == 3);
  CHECK_FALSE(r3.chi_zero_identity);
}

TEST_CASE("torus composition-series matrices are genuine certificates") {
  CertBudget budget;
  budget.seed = 21;
  for (int n : {1, 2}) {
    CompositionSeries cs = pdg_composition_series(pdg_beta(gc_iota(gc_torus(n, 3))));
    Certificate C = certificate_from_module(cs.module);
    CertReport rep = cert_check(C, budget);
    INFO("n = ", n, " witness: ", rep.failure_witness);
    CHECK(rep.pass());
  }
}

TEST_CASE("search finds the one-variable certificates") {
  SearchBudget budget;
  budget.check.seed = 3;
  budget.check.m_exhaustive = 2;
  budget.check.random_trials = 4;
  SearchOutcome out =
      cert_search(3, 1, 3, {0, 0, 0}, field_make(3, 1), SearchMode::exhaustive, budget);
  CHECK(out.exhausted);
  CHECK(out.space_size == 27);
  CHECK(!out.found.empty());
  // the Koszul certificate survives canonicalization: both superdiagonal
  // entries normalize to x
  bool koszul_found = false;
  for (const auto& C : out.found) {
    MultiPoly x = MultiPoly::variable(C.spec, 1, 0);
    if (C.D.at(0, 1) == x && C.D.at(1, 2) == x) koszul_found = true;
  }
  CHECK(koszul_found);
}

TEST_CASE("exhaustive exclusion at p=3, n=2, l=3 over F_3") {
  SearchBudget budget;
  budget.check.seed = 7;
  budget.check.m_exhaustive = 2;
  budget.check.random_trials = 0;
  SearchOutcome out =
      cert_search(3, 2, 3, {0, 0, 0}, field_make(3, 1), SearchMode::exhaustive, budget);
  CHECK(out.exhausted);
  CHECK(out.space_size == 729);
  CHECK(out.found.empty());
}

TEST_CASE("search budget exhaustion is reported") {
  SearchBudget budget;
  budget.max_candidates = 10;
  SearchOutcome out =
      cert_search(3, 2, 3, {0, 0, 0}, field_make(3, 1), SearchMode::exhaustive, budget);
  CHECK(out.budget_exceeded);
  CHECK_FALSE(out.exhausted);
}

TEST_CASE("random search mode is reproducible") {
  SearchBudget budget;
  budget.random_candidates = 200;
  budget.seed = 99;
  budget.check.seed = 99;
  budget.check.m_exhaustive = 1;
  budget.check.random_trials = 2;
  SearchOutcome a = cert_search(3, 1, 3, {0, 0, 0}, field_make(3, 1), SearchMode::random, budget);
  SearchOutcome b = cert_search(3, 1, 3, {0, 0, 0}, field_make(3, 1), SearchMode::random, budget);
  CHECK(a.found.size() == b.found.size());
  CHECK(a.candidates == b.candidates);
}
