#pragma once

#include "pnil/groupchain.hpp"
#include "pnil/ncomplex.hpp"
#include "pnil/rng.hpp"

namespace pnil {

/// Random invertible matrix: unit lower x unit upper x invertible diagonal.
Matrix random_invertible(const FieldSpecPtr& spec, int n, Rng& rng);

struct RandomComplexOptions {
  int max_strings = 4;
  int support_width = 6;  // degrees drawn from [0, support_width)
  int max_dim = 4;        // per-degree dimension cap
  bool allow_empty = true;
};

/// Random N-complex with d^N = 0 by construction: a random string
/// decomposition conjugated by random invertible change of basis per degree.
NComplexFin random_ncomplex(const QContext& ctx, Rng& rng,
                            const RandomComplexOptions& opt = {});

/// Random degree N-1 map with arbitrary entries (used to manufacture
/// null-homotopic morphisms).
Homotopy random_homotopy(const NComplexFin& C, const NComplexFin& D, Rng& rng);

/// The morphism sum_i d^{N-1-i} h d^i associated to a raw degree N-1 map h;
/// null-homotopic with witness h by construction.
Morphism homotopy_boundary(const NComplexFin& C, const NComplexFin& D, const Homotopy& h);

struct RandomPerfectOptions {
  int support_width = 6;
  int max_rank = 3;
  int blocks = 3;
};

/// Random perfect complex over k[G]: a direct sum of shifted elementary
/// pieces (free modules, two-step y-divisibility pairs, small torus factors)
/// conjugated degreewise by random invertible k[G]-matrices.
KGComplex random_perfect_complex(u64 p, int n, Rng& rng, const RandomPerfectOptions& opt = {});

/// Random k[G]-linear degree +1 map (a chain homotopy shape) on a perfect complex.
KGHomotopy random_kg_homotopy(const KGComplex& C, const KGComplex& D, Rng& rng, int degree_shift);

TruncPoly random_truncpoly(const FieldSpecPtr& spec, int n, int p, Rng& rng, int max_terms = 3);

}  // namespace pnil
