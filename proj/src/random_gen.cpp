#include "pnil/random_gen.hpp"

#include <stdexcept>

namespace pnil {

Matrix random_invertible(const FieldSpecPtr& spec, int n, Rng& rng) {
  Matrix lower = Matrix::identity(spec, n);
  Matrix upper = Matrix::identity(spec, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) {
      lower.set(i, j, FieldElem::from_index(spec, rng.below(spec->order())));
      upper.set(j, i, FieldElem::from_index(spec, rng.below(spec->order())));
    }
  Matrix diag(spec, n, n);
  for (int i = 0; i < n; ++i)
    diag.set(i, i, FieldElem::from_index(spec, 1 + rng.below(spec->order() - 1)));
  return lower * upper * diag;
}

NComplexFin random_ncomplex(const QContext& ctx, Rng& rng, const RandomComplexOptions& opt) {
  const int N = ctx.N;
  for (int attempt = 0; attempt < 64; ++attempt) {
    StringDecomposition sd;
    std::map<int, int> dims;
    int nstrings = rng.range(opt.allow_empty ? 0 : 1, opt.max_strings);
    bool ok = true;
    for (int s = 0; s < nstrings; ++s) {
      StringBlock sb;
      sb.top_degree = rng.range(0, opt.support_width - 1);
      sb.length = rng.range(1, N);
      for (int i = 0; i < sb.length; ++i)
        if (++dims[sb.top_degree - i] > opt.max_dim) ok = false;
      sd.strings.push_back(sb);
    }
    if (!ok) continue;
    NComplexFin canon = strings_to_complex(ctx, sd, dims);
    // conjugate by a random change of basis per degree
    std::map<int, Matrix> bases;
    for (const auto& [l, n] : dims) bases[l] = random_invertible(ctx.spec, n, rng);
    NComplexFin out(ctx);
    out.dims = dims;
    for (const auto& [l, m] : canon.d) {
      auto top = bases.find(l);
      auto bot = bases.find(l - 1);
      if (top == bases.end() || bot == bases.end()) continue;
      out.d.emplace(l, bot->second * m * top->second.inverse());
    }
    return out;
  }
  throw std::runtime_error("random_ncomplex: could not satisfy the size constraints");
}

Homotopy random_homotopy(const NComplexFin& C, const NComplexFin& D, Rng& rng) {
  Homotopy h;
  const int N = C.ctx.N;
  const auto& spec = C.ctx.spec;
  for (const auto& [l, n] : C.dims) {
    if (n == 0 || D.dim(l + N - 1) == 0) continue;
    Matrix m(spec, D.dim(l + N - 1), n);
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j)
        m.set(i, j, FieldElem::from_index(spec, rng.below(spec->order())));
    h.mats.emplace(l, std::move(m));
  }
  return h;
}

Morphism homotopy_boundary(const NComplexFin& C, const NComplexFin& D, const Homotopy& h) {
  Morphism f;
  f.source = &C;
  f.target = &D;
  const int N = C.ctx.N;
  for (const auto& [l, n] : C.dims) {
    if (n == 0 || D.dim(l) == 0) continue;
    Matrix acc(C.ctx.spec, D.dim(l), n);
    for (int i = 0; i <= N - 1; ++i)
      acc = acc + D.dpow(l - i + N - 1, N - 1 - i) * h.mat(C, D, l - i) * C.dpow(l, i);
    if (!acc.is_zero()) f.mats.emplace(l, std::move(acc));
  }
  return f;
}

TruncPoly random_truncpoly(const FieldSpecPtr& spec, int n, int p, Rng& rng, int max_terms) {
  TruncPoly f(spec, n, p);
  int terms = rng.range(0, max_terms);
  for (int t = 0; t < terms; ++t) {
    Exponents e(n);
    for (int i = 0; i < n; ++i) e[i] = rng.range(0, p - 1);
    f.add_term(e, FieldElem::from_index(spec, rng.below(spec->order())));
  }
  return f;
}

namespace {

// random invertible over k[G]: invertible constant part plus arbitrary
// J-entries (J nilpotent, so the constant term decides invertibility)
TruncMatrix random_kg_invertible(const FieldSpecPtr& spec, int n, int p, int sz, Rng& rng) {
  Matrix c = random_invertible(spec, sz, rng);
  TruncMatrix out(spec, n, p, sz, sz);
  for (int i = 0; i < sz; ++i)
    for (int j = 0; j < sz; ++j) {
      TruncPoly e = TruncPoly::constant(spec, n, p, c.at(i, j));
      // a few radical terms
      if (rng.chance(1, 2)) {
        TruncPoly extra = random_truncpoly(spec, n, p, rng, 2);
        extra.add_term(Exponents(n, 0), -extra.coeff(Exponents(n, 0)));  // keep it in J
        e = e + extra;
      }
      out.set(i, j, e);
    }
  return out;
}

TruncMatrix kg_inverse(const TruncMatrix& a) {
  // Neumann series: a = c (I + r) with c the constant part, r nilpotent
  const auto& spec = a.spec();
  int n = a.nvars(), p = a.charp(), sz = a.rows();
  Matrix c(spec, sz, sz);
  for (int i = 0; i < sz; ++i)
    for (int j = 0; j < sz; ++j) c.set(i, j, a.at(i, j).coeff(Exponents(n, 0)));
  Matrix cinv = c.inverse();
  TruncMatrix cinv_t(spec, n, p, sz, sz);
  for (int i = 0; i < sz; ++i)
    for (int j = 0; j < sz; ++j)
      cinv_t.set(i, j, TruncPoly::constant(spec, n, p, cinv.at(i, j)));
  TruncMatrix r = cinv_t * a - TruncMatrix::identity(spec, n, p, sz);
  TruncMatrix acc = TruncMatrix::identity(spec, n, p, sz);
  TruncMatrix pw = TruncMatrix::identity(spec, n, p, sz);
  int bound = n * (p - 1) + 1;  // J^bound = 0
  for (int k = 1; k <= bound; ++k) {
    pw = pw * r;
    if (pw.is_zero()) break;
    acc = (k % 2 == 1) ? acc - pw : acc + pw;
  }
  return acc * cinv_t;
}

}  // namespace

KGComplex random_perfect_complex(u64 p, int n, Rng& rng, const RandomPerfectOptions& opt) {
  auto spec = field_make(p, 1);
  const int ip = static_cast<int>(p);
  KGComplex out;
  out.spec = spec;
  out.p = ip;
  out.n = n;
  out.nilpotency = 2;

  struct Piece {
    std::map<int, int> ranks;
    std::map<int, TruncPoly> entry;  // degree -> the single entry of d (rank-1 pieces)
  };

  std::vector<Piece> pieces;
  int nblocks = rng.range(1, opt.blocks);
  for (int b = 0; b < nblocks; ++b) {
    int base = rng.range(0, opt.support_width - 1);
    int kind = rng.range(0, 2);
    Piece pc;
    if (kind == 0) {
      pc.ranks[base] = 1;  // free module
    } else if (kind == 1) {
      // two-term y_i^a pair
      int var = rng.range(0, n - 1);
      int a = rng.range(1, ip - 1);
      Exponents e(n, 0);
      e[var] = a;
      TruncPoly g(spec, n, ip);
      g.add_term(e, FieldElem::from_index(spec, 1 + rng.below(p - 1)));
      pc.ranks[base] = 1;
      pc.ranks[base + 1] = 1;
      pc.entry[base + 1] = g;
    } else {
      // three-term y^a then y^{p-a} (products vanish)
      int var = rng.range(0, n - 1);
      int a = rng.range(1, ip - 1);
      Exponents e1(n, 0), e2(n, 0);
      e1[var] = a;
      e2[var] = ip - a;
      TruncPoly g1(spec, n, ip), g2(spec, n, ip);
      g1.add_term(e1, FieldElem::one(spec));
      g2.add_term(e2, FieldElem::from_index(spec, 1 + rng.below(p - 1)));
      pc.ranks[base] = 1;
      pc.ranks[base + 1] = 1;
      pc.ranks[base + 2] = 1;
      pc.entry[base + 1] = g1;
      pc.entry[base + 2] = g2;
    }
    pieces.push_back(std::move(pc));
  }

  std::map<int, int> total;
  for (const auto& pc : pieces)
    for (const auto& [deg, r] : pc.ranks) total[deg] += r;  // stays <= blocks <= max_rank
  out.ranks = total;

  // offsets of each piece inside the direct sum
  std::map<int, int> used;
  std::vector<std::map<int, int>> offset(pieces.size());
  for (size_t i = 0; i < pieces.size(); ++i)
    for (const auto& [deg, r] : pieces[i].ranks) {
      offset[i][deg] = used[deg];
      used[deg] += r;
    }

  for (const auto& [deg, r] : out.ranks) {
    if (out.rank(deg - 1) == 0) continue;
    TruncMatrix m(spec, n, ip, out.rank(deg - 1), r);
    for (size_t i = 0; i < pieces.size(); ++i) {
      auto it = pieces[i].entry.find(deg);
      if (it == pieces[i].entry.end()) continue;
      m.set(offset[i].at(deg - 1), offset[i].at(deg), it->second);
    }
    out.d.emplace(deg, std::move(m));
  }

  // conjugate by random invertible k[G]-matrices
  std::map<int, TruncMatrix> bases, inv;
  for (const auto& [deg, r] : out.ranks) {
    bases.emplace(deg, random_kg_invertible(spec, n, ip, r, rng));
    inv.emplace(deg, kg_inverse(bases.at(deg)));
  }
  std::map<int, TruncMatrix> newd;
  for (const auto& [deg, m] : out.d) {
    if (out.rank(deg) == 0 || out.rank(deg - 1) == 0) continue;
    newd.emplace(deg, bases.at(deg - 1) * m * inv.at(deg));
  }
  out.d = std::move(newd);
  return out;
}

KGHomotopy random_kg_homotopy(const KGComplex& C, const KGComplex& D, Rng& rng, int degree_shift) {
  KGHomotopy h;
  h.shift = degree_shift;
  for (const auto& [l, r] : C.ranks) {
    if (r == 0 || D.rank(l + degree_shift) == 0) continue;
    TruncMatrix m(C.spec, C.n, C.p, D.rank(l + degree_shift), r);
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j)
        m.set(i, j, random_truncpoly(C.spec, C.n, C.p, rng, 2));
    h.mats.emplace(l, std::move(m));
  }
  return h;
}

}  // namespace pnil
