#include <doctest.h>

#include "pnil/groupchain.hpp"
#include "pnil/random_gen.hpp"

using namespace pnil;

namespace {

KGComplex two_step_y1_twice(u64 p) {
  // two stacked multiplications by y_1; d^2 = y_1^2 != 0 for p > 2
  KGComplex C = gc_free_module(p, 1);
  C.ranks[1] = 1;
  C.ranks[2] = 1;
  TruncMatrix m(C.spec, 1, C.p, 1, 1);
  m.set(0, 0, TruncPoly::variable(C.spec, 1, C.p, 0));
  C.d.emplace(1, m);
  C.d.emplace(2, m);
  return C;
}

}  // namespace

TEST_CASE("gc_validate") {
  CHECK(gc_validate(gc_free_module(3, 1)));
  CHECK(gc_validate(gc_circle(3)));
  std::string why;
  CHECK_FALSE(gc_validate(two_step_y1_twice(3), &why));
  CHECK(why.find("d^2") != std::string::npos);
  CHECK(gc_validate(two_step_y1_twice(2)));  // y^2 = 0 in k[Z/2]
}

TEST_CASE("gc_homology worked examples") {
  // k[G] in degree 0: H_0 = k[G], dim p^n
  auto H = gc_homology(gc_free_module(3, 2));
  REQUIRE(H.count(0) == 1);
  CHECK(H.at(0).dim == 9);
  CHECK(gc_loewy_length(H.at(0)) == 5);  // n(p-1)+1

  // circle: H_0 = H_1 = k, trivial modules
  auto Hc = gc_homology(gc_circle(3));
  REQUIRE(Hc.count(0) == 1);
  REQUIRE(Hc.count(1) == 1);
  CHECK(Hc.at(0).dim == 1);
  CHECK(Hc.at(1).dim == 1);
  for (const auto& a : Hc.at(0).y_actions) CHECK(a.is_zero());
  for (const auto& a : Hc.at(1).y_actions) CHECK(a.is_zero());

  // torus n=2: total homology dimension 4 = 2^2
  auto Ht = gc_homology(gc_torus(2, 3));
  int total = 0;
  for (const auto& [l, M] : Ht) total += M.dim;
  CHECK(total == 4);
}

TEST_CASE("torus complexes") {
  KGComplex T2 = gc_torus(2, 3);
  CHECK(gc_validate(T2));
  CHECK(T2.rank(0) == 1);
  CHECK(T2.rank(1) == 2);
  CHECK(T2.rank(2) == 1);
  CHECK(gc_euler(T2) == 0);
  KGComplex T1 = gc_torus(1, 5);
  CHECK(T1.rank(0) == 1);
  CHECK(T1.rank(1) == 1);
  CHECK(gc_euler(T1) == 0);
  KGComplex T3 = gc_torus(3, 3);
  CHECK(gc_validate(T3));
  CHECK(gc_euler(T3) == 0);
}

TEST_CASE("gc_euler") {
  CHECK(gc_euler(gc_free_module(3, 2)) == 9);
  KGComplex shifted = gc_free_module(3, 2);
  shifted.ranks.clear();
  shifted.ranks[1] = 1;
  CHECK(gc_euler(shifted) == -9);
}

TEST_CASE("loewy length") {
  // M = 0
  GModule zero;
  zero.spec = field_make(3, 1);
  zero.n = 1;
  zero.p = 3;
  zero.dim = 0;
  CHECK(gc_loewy_length(zero) == 0);
  // trivial module k
  GModule k;
  k.spec = field_make(3, 1);
  k.n = 1;
  k.p = 3;
  k.dim = 1;
  k.y_actions.push_back(Matrix(k.spec, 1, 1));
  CHECK(gc_loewy_length(k) == 1);
  // k[G] over itself, n=1, p=3: ll = 3
  auto H = gc_homology(gc_free_module(3, 1));
  CHECK(gc_loewy_length(H.at(0)) == 3);
}

TEST_CASE("iota: shapes and validity") {
  // p=3, two-term complex C_1 -> C_0: dims (2,1,0) = (rank1, rank0, rank0), maps (d, id)
  KGComplex C = gc_circle(3);
  KGComplex iC = gc_iota(C);
  CHECK(iC.nilpotency == 3);
  CHECK(iC.rank(2) == 1);
  CHECK(iC.rank(1) == 1);
  CHECK(iC.rank(0) == 1);
  CHECK(iC.dmat(2) == C.dmat(1));
  CHECK(iC.dmat(1) == TruncMatrix::identity(C.spec, 1, 3, 1));
  CHECK(gc_validate(iC));

  // p = 2: iota is the identity on shapes
  KGComplex C2 = gc_circle(2);
  KGComplex iC2 = gc_iota(C2);
  CHECK(iC2.ranks == C2.ranks);
  for (const auto& [l, m] : C2.d) CHECK(iC2.dmat(l) == m);
}

TEST_CASE("iota on random perfect complexes: d^p = 0 and regrading") {
  Rng rng(0xabcdef);
  for (u64 p : {3ULL, 5ULL}) {
    for (int trial = 0; trial < 12; ++trial) {
      int n = 1 + static_cast<int>(rng.below(2));
      KGComplex C = random_perfect_complex(p, n, rng);
      REQUIRE(gc_validate(C));
      KGComplex iC = gc_iota(C);
      CHECK(gc_validate(iC));

      auto H = gc_homology(C);
      auto dimH = [&](int i) {
        auto it = H.find(i);
        return it == H.end() ? 0 : it->second.dim;
      };

      NComplexFin F = gc_flatten(iC);
      const int ip = static_cast<int>(p);
      for (int s = 1; s <= ip - 1; ++s) {
        auto dims = ncx_homology(F, s).dims();
        std::map<int, int> expect;
        // _sH_{pi-1} = H_{2i-1}, _sH_{pi-1+s} = H_{2i}
        for (const auto& [cdeg, M] : H) {
          if (M.dim == 0) continue;
          if (((cdeg % 2) + 2) % 2 == 1) {
            int i = (cdeg + 1) / 2;
            expect[ip * i - 1] += M.dim;
          } else {
            int i = cdeg / 2;
            expect[ip * i - 1 + s] += M.dim;
          }
        }
        CHECK(dims == expect);
      }

      // i_* chains are isomorphisms in degrees = p-1 mod p, d_* chains in
      // degrees = p-2 mod p
      std::vector<HomologySlice> slices(ip);
      for (int s = 1; s <= ip - 1; ++s) slices[s] = ncx_homology(F, s);
      for (int l = F.lowest(); l <= F.highest(); ++l) {
        if (((l % ip) + ip) % ip == ip - 1) {
          for (int s = 1; s + 1 <= ip - 1; ++s) {
            Matrix m = ncx_induced_i(F, slices[s], slices[s + 1], l);
            CHECK(m.rows() == m.cols());
            CHECK(m.rank() == m.rows());
          }
        }
        if (((l % ip) + ip) % ip == ip - 2 && ip > 2) {
          for (int s = ip - 1; s >= 2; --s) {
            int deg = l - (ip - 1 - s);
            Matrix m = ncx_induced_d(F, slices[s], slices[s - 1], deg);
            CHECK(m.rows() == m.cols());
            CHECK(m.rank() == m.rows());
          }
        }
      }
    }
  }
}

TEST_CASE("iota homotopy transport") {
  Rng rng(2718);
  for (u64 p : {3ULL, 5ULL}) {
    const int ip = static_cast<int>(p);
    for (int trial = 0; trial < 8; ++trial) {
      KGComplex C = random_perfect_complex(p, 1 + static_cast<int>(rng.below(2)), rng);
      KGComplex iC = gc_iota(C);

      // 2-complex homotopy k gives f = dk + kd, null-homotopic
      KGHomotopy k = random_kg_homotopy(C, C, rng, 1);
      KGMorphism f;
      f.source = &C;
      f.target = &C;
      for (const auto& [l, r] : C.ranks) {
        if (r == 0) continue;
        TruncMatrix m = C.dmat(l + 1) * k.mat(C, C, l) + k.mat(C, C, l - 1) * C.dmat(l);
        f.mats.emplace(l, m);
      }

      // explicit p-complex null-homotopy for iota(f): h_{pl} = k_{2l},
      // h_{pl-1} = k_{2l-1}, middle copies zero; then perturb by du - ud.
      KGHomotopy h;
      for (const auto& [m, r] : iC.ranks) {
        if (r == 0) continue;
        int rm = ((m % ip) + ip) % ip;
        if (rm == ip - 1) {
          int i = (m + 1) / ip;
          TruncMatrix km = k.mat(C, C, 2 * i - 1);
          if (km.rows() > 0 && km.cols() > 0) h.mats.emplace(m, km);
        } else if (rm == 0) {
          int i = (m - rm) / ip;
          TruncMatrix km = k.mat(C, C, 2 * i);
          if (km.rows() > 0 && km.cols() > 0) h.mats.emplace(m, km);
        }
      }
      KGMorphism iF = gc_iota_morphism(f, iC, iC);
      KGMorphism zero;
      zero.source = &iC;
      zero.target = &iC;
      std::string why;
      REQUIRE(kg_verify_homotopy(iF, zero, h, &why));

      // perturbation that leaves the homotopy identity unchanged
      KGHomotopy u = random_kg_homotopy(iC, iC, rng, ip);
      KGHomotopy hp;
      for (const auto& [m, r] : iC.ranks) {
        if (r == 0) continue;
        TruncMatrix pert =
            iC.dmat(m + ip) * u.mat(iC, iC, m) - u.mat(iC, iC, m - 1) * iC.dmat(m);
        TruncMatrix base = h.mat(iC, iC, m);
        TruncMatrix sum = base + pert;
        if (!(sum.rows() == 0 || sum.cols() == 0)) hp.mats.emplace(m, sum);
      }
      REQUIRE(kg_verify_homotopy(iF, zero, hp, &why));

      // transport and verify as a 2-complex homotopy, both over k[G] and flattened
      KGHomotopy H2 = gc_iota_homotopy_transport(f, hp);
      KGMorphism zero2;
      zero2.source = &C;
      zero2.target = &C;
      CHECK(kg_verify_homotopy(f, zero2, H2, &why));

      NComplexFin FC = gc_flatten(C);
      Morphism ff = gc_flatten_morphism(f, FC, FC);
      Homotopy hh;
      for (const auto& [l, m] : H2.mats) hh.mats.emplace(l, m.flatten());
      Morphism zz;
      zz.source = &FC;
      zz.target = &FC;
      CHECK(ncx_verify_homotopy(ff, zz, hh));
    }
  }
}

TEST_CASE("transport rejects invalid input homotopies") {
  KGComplex C = gc_circle(3);
  KGMorphism id;
  id.source = &C;
  id.target = &C;
  for (const auto& [l, r] : C.ranks)
    id.mats.emplace(l, TruncMatrix::identity(C.spec, C.n, C.p, r));
  KGHomotopy empty;  // certainly not a null-homotopy for iota(id) on a circle
  CHECK_THROWS_AS(gc_iota_homotopy_transport(id, empty), std::invalid_argument);
}

TEST_CASE("transport of the zero homotopy is zero") {
  KGComplex C = gc_circle(3);
  KGMorphism zero;
  zero.source = &C;
  zero.target = &C;
  KGHomotopy h;
  KGHomotopy out = gc_iota_homotopy_transport(zero, h);
  for (const auto& [l, m] : out.mats) CHECK(m.is_zero());
}
