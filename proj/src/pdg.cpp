#include "pnil/pdg.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace pnil {

namespace {

int vec_min(const std::vector<int>& v, int dflt) {
  return v.empty() ? dflt : *std::min_element(v.begin(), v.end());
}
int vec_max(const std::vector<int>& v, int dflt) {
  return v.empty() ? dflt : *std::max_element(v.begin(), v.end());
}

}  // namespace

int PDGModule::min_degree() const { return vec_min(c, 0); }
int PDGModule::max_degree() const { return vec_max(c, 0); }

int FreeAComplex::count(int h) const {
  auto it = gens.find(h);
  return it == gens.end() ? 0 : static_cast<int>(it->second.size());
}

PolyMatrix FreeAComplex::dmat(int h) const {
  auto it = diff.find(h);
  if (it != diff.end()) return it->second;
  return PolyMatrix(spec, n, count(h - 1), count(h));
}

int FreeAComplex::lowest() const {
  for (const auto& [h, g] : gens)
    if (!g.empty()) return h;
  return 0;
}

int FreeAComplex::highest() const {
  int best = 0;
  for (const auto& [h, g] : gens)
    if (!g.empty()) best = h;
  return best;
}

int GradedHomologyReport::total() const {
  int t = 0;
  for (const auto& [l, d] : dims) t += d;
  return t;
}

bool pdg_validate(const PDGModule& M, std::string* why) {
  const int l = M.size();
  if (M.D.rows() != l || M.D.cols() != l) {
    if (why) *why = "differential matrix is not size " + std::to_string(l);
    return false;
  }
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < l; ++j) {
      const MultiPoly& f = M.D.at(i, j);
      if (f.is_zero()) continue;
      int want = M.c[i] + 1 - M.c[j];
      if (want < 0 || !f.is_homogeneous(want)) {
        if (why) {
          std::ostringstream os;
          os << "entry (" << i + 1 << "," << j + 1 << ") is not homogeneous of degree "
             << want;
          *why = os.str();
        }
        return false;
      }
    }
  PolyMatrix pw = M.D.pow(M.p);
  if (!pw.is_zero()) {
    if (why) {
      for (int i = 0; i < l && why; ++i)
        for (int j = 0; j < l; ++j)
          if (!pw.at(i, j).is_zero()) {
            std::ostringstream os;
            os << "D^" << M.p << " != 0: entry (" << i + 1 << "," << j + 1 << ") = "
               << pw.at(i, j).str();
            *why = os.str();
            return false;
          }
    }
    return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// internal degree layers

namespace {

struct LayerBasis {
  std::vector<std::pair<int, Exponents>> items;  // (generator, monomial)
  std::map<std::pair<int, Exponents>, int> index;

  int size() const { return static_cast<int>(items.size()); }
};

LayerBasis layer_basis(const std::vector<int>& c, int n, int l) {
  LayerBasis L;
  for (int i = 0; i < static_cast<int>(c.size()); ++i) {
    int d = c[i] - l;
    if (d < 0) continue;
    for (auto& mu : monomials_of_degree(n, d)) {
      L.index.emplace(std::make_pair(i, mu), L.size());
      L.items.emplace_back(i, mu);
    }
  }
  return L;
}

// k-matrix of a polynomial matrix acting between two internal-degree layers
Matrix layer_matrix(const PolyMatrix& P, const LayerBasis& src, const LayerBasis& tgt) {
  Matrix m(P.spec(), tgt.size(), src.size());
  for (int j = 0; j < src.size(); ++j) {
    const auto& [jgen, jmu] = src.items[j];
    for (int igen = 0; igen < P.rows(); ++igen) {
      const MultiPoly& f = P.at(igen, jgen);
      for (const auto& [e, coeff] : f.terms()) {
        Exponents target = jmu;
        for (size_t t = 0; t < target.size(); ++t) target[t] += e[t];
        auto it = tgt.index.find({igen, target});
        if (it != tgt.index.end()) m.set(it->second, j, m.at(it->second, j) + coeff);
      }
    }
  }
  return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// Koszul complexes

FreeAComplex pdg_koszul(int N, const std::vector<int>& vars, u64 p, int n) {
  if (N < 2) throw std::invalid_argument("pdg_koszul: N must be >= 2");
  if (vars.empty()) throw std::invalid_argument("pdg_koszul: needs at least one variable");
  for (int v : vars)
    if (v < 0 || v >= n) throw std::invalid_argument("pdg_koszul: variable index out of range");
  FreeAComplex K;
  K.spec = field_make(p, 1);
  K.p = N;
  K.n = n;

  // exponent tuples over the chosen variables, grouped by total degree
  std::vector<Exponents> all;
  Exponents cur(n, 0);
  auto rec = [&](auto&& self, size_t pos) -> void {
    if (pos == vars.size()) {
      all.push_back(cur);
      return;
    }
    for (int v = 0; v <= N - 1; ++v) {
      cur[vars[pos]] = v;
      self(self, pos + 1);
    }
    cur[vars[pos]] = 0;
  };
  rec(rec, 0);
  std::sort(all.begin(), all.end());
  for (const auto& a : all) {
    int h = 0;
    for (int x : a) h += x;
    // d(e_a) = sum x_v e_{a - delta_v} forces equal internal degrees along
    // each strip; all generators sit in internal degree 0
    K.gens[h].push_back(0);
    K.labels[h].push_back(a);
  }
  for (int h = 1; h <= K.highest(); ++h) {
    if (K.count(h) == 0 || K.count(h - 1) == 0) continue;
    PolyMatrix m(K.spec, n, K.count(h - 1), K.count(h));
    for (int j = 0; j < K.count(h); ++j) {
      const Exponents& a = K.labels[h][j];
      for (int v : vars) {
        if (a[v] == 0) continue;
        Exponents b = a;
        b[v] -= 1;
        auto it = std::find(K.labels[h - 1].begin(), K.labels[h - 1].end(), b);
        int i = static_cast<int>(it - K.labels[h - 1].begin());
        m.set(i, j, m.at(i, j) + MultiPoly::variable(K.spec, n, v));
      }
    }
    K.diff.emplace(h, std::move(m));
  }
  return K;
}

FreeAComplex pdg_koszul_all(int N, u64 p, int n) {
  std::vector<int> vars(n);
  for (int i = 0; i < n; ++i) vars[i] = i;
  return pdg_koszul(N, vars, p, n);
}

PDGModule acomplex_to_pdg(const FreeAComplex& K, std::vector<std::pair<int, int>>* origin) {
  PDGModule M;
  M.spec = K.spec;
  M.p = K.p;
  M.n = K.n;
  std::map<std::pair<int, int>, int> pos;
  if (origin) origin->clear();
  // homological degree descending
  for (auto it = K.gens.rbegin(); it != K.gens.rend(); ++it) {
    int h = it->first;
    for (int j = 0; j < static_cast<int>(it->second.size()); ++j) {
      pos[{h, j}] = M.size();
      M.c.push_back(it->second[j]);
      if (origin) origin->emplace_back(h, j);
    }
  }
  M.D = PolyMatrix(K.spec, K.n, M.size(), M.size());
  for (const auto& [h, blk] : K.diff)
    for (int j = 0; j < blk.cols(); ++j)
      for (int i = 0; i < blk.rows(); ++i)
        if (!blk.at(i, j).is_zero()) M.D.set(pos.at({h - 1, i}), pos.at({h, j}), blk.at(i, j));
  return M;
}

// ---------------------------------------------------------------------------
// beta

std::vector<std::pair<int, Exponents>> pdg_beta_basis(const KGComplex& C) {
  std::vector<std::pair<int, Exponents>> out;
  auto monos = kg_monomials(C.n, C.p);
  for (auto it = C.ranks.rbegin(); it != C.ranks.rend(); ++it) {
    if (it->second == 0) continue;
    for (int r = 0; r < it->second; ++r)
      for (const auto& a : monos) out.emplace_back(it->first, a);
  }
  return out;
}

PDGModule pdg_beta(const KGComplex& C) {
  // the inflation iota produces nilpotency p; a zero-differential complex of
  // any nilpotency qualifies too
  {
    KGComplex probe = C;
    probe.nilpotency = C.p;
    std::string why;
    if (!gc_validate(probe, &why))
      throw std::invalid_argument("pdg_beta: input is not a p-complex over k[G]: " + why);
  }
  PDGModule M;
  M.spec = C.spec;
  M.p = C.p;
  M.n = C.n;
  int q = 1;
  for (int i = 0; i < C.n; ++i) q *= C.p;

  std::map<std::pair<int, int>, int> block;  // (degree, free generator) -> first index
  for (auto it = C.ranks.rbegin(); it != C.ranks.rend(); ++it) {
    if (it->second == 0) continue;
    for (int r = 0; r < it->second; ++r) {
      block[{it->first, r}] = M.size();
      for (int a = 0; a < q; ++a) M.c.push_back(it->first);
    }
  }
  M.D = PolyMatrix(C.spec, C.n, M.size(), M.size());

  // constant part: the k[G]-differential expanded over the monomial basis
  for (const auto& [deg, dm] : C.d) {
    if (dm.rows() == 0 || dm.cols() == 0) continue;
    Matrix flat = dm.flatten();
    for (int rj = 0; rj < dm.cols(); ++rj)
      for (int ri = 0; ri < dm.rows(); ++ri)
        for (int a = 0; a < q; ++a)
          for (int b = 0; b < q; ++b) {
            const FieldElem& coef = flat.at(ri * q + a, rj * q + b);
            if (coef.is_zero()) continue;
            int gi = block.at({deg - 1, ri}) + a;
            int gj = block.at({deg, rj}) + b;
            M.D.set(gi, gj, M.D.at(gi, gj) + MultiPoly::constant(C.spec, C.n, coef));
          }
  }

  // linear part: y_t c (x) x_t f
  auto monos = kg_monomials(C.n, C.p);
  for (const auto& [deg, rk] : C.ranks) {
    if (rk == 0) continue;
    for (int r = 0; r < rk; ++r)
      for (int a = 0; a < q; ++a) {
        for (int t = 0; t < C.n; ++t) {
          Exponents e = monos[a];
          e[t] += 1;
          if (e[t] >= C.p) continue;  // y_t^p = 0
          int gi = block.at({deg, r}) + kg_mono_index(e, C.p);
          int gj = block.at({deg, r}) + a;
          M.D.set(gi, gj, M.D.at(gi, gj) + MultiPoly::variable(C.spec, C.n, t));
        }
      }
  }
  return M;
}

// ---------------------------------------------------------------------------
// fibers

Matrix pdg_fiber(const PDGModule& M, const std::vector<FieldElem>& point) {
  if (static_cast<int>(point.size()) != M.n)
    throw std::invalid_argument("pdg_fiber: point dimension mismatch");
  return M.D.eval(point);
}

Fiber0 pdg_fiber0(const PDGModule& M) {
  QContext ctx(M.spec, FieldElem::one(M.spec), M.p);
  Fiber0 fb(ctx);
  for (int i = 0; i < M.size(); ++i) fb.gen_ids[M.c[i]].push_back(i);
  for (const auto& [l, ids] : fb.gen_ids) fb.F.dims[l] = static_cast<int>(ids.size());
  Matrix D0 = M.D.eval_zero();
  for (const auto& [l, ids] : fb.gen_ids) {
    auto below = fb.gen_ids.find(l - 1);
    if (below == fb.gen_ids.end()) continue;
    Matrix m(M.spec, static_cast<int>(below->second.size()), static_cast<int>(ids.size()));
    for (size_t j = 0; j < ids.size(); ++j)
      for (size_t i = 0; i < below->second.size(); ++i)
        m.set(static_cast<int>(i), static_cast<int>(j), D0.at(below->second[i], ids[j]));
    fb.F.d.emplace(l, std::move(m));
  }
  return fb;
}

// ---------------------------------------------------------------------------
// graded homology

GradedHomologyReport pdg_homology(const PDGModule& M, int s, int cutoff) {
  if (s < 1 || s > M.p - 1) throw std::invalid_argument("pdg_homology: s out of range");
  GradedHomologyReport rep;
  rep.s = s;
  rep.cutoff = cutoff;
  if (M.size() == 0) {
    rep.certified = true;
    return rep;
  }
  if (cutoff > M.min_degree())
    throw std::invalid_argument("pdg_homology: cutoff above the least generator degree");

  PolyMatrix Ds = M.D.pow(s);
  PolyMatrix Dc = M.D.pow(M.p - s);
  const int top = M.max_degree();

  std::map<int, LayerBasis> layers;
  auto layer = [&](int l) -> const LayerBasis& {
    auto it = layers.find(l);
    if (it == layers.end()) it = layers.emplace(l, layer_basis(M.c, M.n, l)).first;
    return it->second;
  };

  std::map<int, Subquotient> classes;
  for (int l = cutoff; l <= top; ++l) {
    Matrix A = layer_matrix(Ds, layer(l), layer(l - s));
    Matrix B = layer_matrix(Dc, layer(l + M.p - s), layer(l));
    Subquotient q(A.kernel_basis(), B.image_basis());
    if (q.dim() > 0) rep.dims[l] = q.dim();
    classes.emplace(l, std::move(q));
  }

  // certification: x_j^{p-1} annihilates every computed class, and the
  // n(p-1) layers above the cutoff are zero
  bool cert = true;
  for (int l = cutoff; l < cutoff + M.n * (M.p - 1) && cert; ++l)
    if (rep.dims.count(l)) cert = false;
  for (auto& [l, q] : classes) {
    if (!cert) break;
    if (q.dim() == 0) continue;
    int lo = l - (M.p - 1);
    const LayerBasis& src = layer(l);
    const LayerBasis& tgt = layer(lo);
    Matrix Blo = layer_matrix(Dc, layer(lo + M.p - s), layer(lo));
    ColumnEchelon im = column_echelon(Blo);
    for (int col = 0; col < q.dim() && cert; ++col) {
      auto z = q.representatives().column(col);
      for (int j = 0; j < M.n && cert; ++j) {
        std::vector<FieldElem> w(tgt.size(), FieldElem::zero(M.spec));
        for (int k = 0; k < src.size(); ++k) {
          if (z[k].is_zero()) continue;
          Exponents mu = src.items[k].second;
          mu[j] += M.p - 1;
          w[tgt.index.at({src.items[k].first, mu})] = z[k];
        }
        if (!im.contains(w)) cert = false;
      }
    }
  }
  rep.certified = cert;
  return rep;
}

AComplexHomologyReport pdg_homology_acomplex(const FreeAComplex& K, int s, int cutoff) {
  if (s < 1 || s > K.p - 1)
    throw std::invalid_argument("pdg_homology_acomplex: s out of range");
  AComplexHomologyReport rep;
  rep.s = s;
  rep.cutoff = cutoff;
  bool any = false;
  for (const auto& [h, g] : K.gens) any |= !g.empty();
  if (!any) {
    rep.certified = true;
    return rep;
  }

  int cmin = 0, cmax = 0;
  bool first = true;
  for (const auto& [h, g] : K.gens)
    for (int c : g) {
      cmin = first ? c : std::min(cmin, c);
      cmax = first ? c : std::max(cmax, c);
      first = false;
    }
  if (cutoff > cmin)
    throw std::invalid_argument("pdg_homology_acomplex: cutoff above the least generator degree");

  auto layer = [&](int h, int l) {
    auto it = K.gens.find(h);
    std::vector<int> degs = it == K.gens.end() ? std::vector<int>{} : it->second;
    return layer_basis(degs, K.n, l);
  };
  auto dpow = [&](int h, int k) {
    PolyMatrix acc = PolyMatrix::identity(K.spec, K.n, K.count(h));
    for (int i = 0; i < k; ++i) acc = K.dmat(h - i) * acc;
    return acc;
  };

  bool cert = true;
  for (int h = K.lowest(); h <= K.highest(); ++h) {
    if (K.count(h) == 0) continue;
    PolyMatrix Ds = dpow(h, s);
    PolyMatrix Dc = dpow(h + K.p - s, K.p - s);
    int total = 0;
    for (int l = cutoff; l <= cmax; ++l) {
      LayerBasis src = layer(h, l);
      if (src.size() == 0) continue;
      Matrix A = layer_matrix(Ds, src, layer(h - s, l - s));
      Matrix B = layer_matrix(Dc, layer(h + K.p - s, l + K.p - s), src);
      Subquotient q(A.kernel_basis(), B.image_basis());
      total += q.dim();
      if (q.dim() > 0 && l < cutoff + K.n * (K.p - 1)) cert = false;
      // annihilation by x_j^{p-1}
      if (q.dim() > 0 && cert) {
        int lo = l - (K.p - 1);
        LayerBasis tgt = layer(h, lo);
        Matrix Blo = layer_matrix(dpow(h + K.p - s, K.p - s), layer(h + K.p - s, lo + K.p - s),
                                  tgt);
        ColumnEchelon im = column_echelon(Blo);
        for (int col = 0; col < q.dim() && cert; ++col) {
          auto z = q.representatives().column(col);
          for (int j = 0; j < K.n && cert; ++j) {
            std::vector<FieldElem> w(tgt.size(), FieldElem::zero(K.spec));
            for (int k = 0; k < src.size(); ++k) {
              if (z[k].is_zero()) continue;
              Exponents mu = src.items[k].second;
              mu[j] += K.p - 1;
              w[tgt.index.at({src.items[k].first, mu})] = z[k];
            }
            if (!im.contains(w)) cert = false;
          }
        }
      }
    }
    if (total > 0) rep.dims[h] = total;
  }
  rep.certified = cert;
  return rep;
}

// ---------------------------------------------------------------------------
// Koszul nullhomotopy

AComplexHomotopy pdg_nullhomotopy_xp(const FreeAComplex& K, int var) {
  if (K.labels.empty())
    throw std::invalid_argument("pdg_nullhomotopy_xp: only Koszul complexes are supported");
  if (var < 0 || var >= K.n)
    throw std::invalid_argument("pdg_nullhomotopy_xp: variable index out of range");
  // the variable must actually appear as a tensor factor
  bool used = false;
  for (const auto& [h, labs] : K.labels)
    for (const auto& a : labs)
      if (a[var] > 0) used = true;
  if (!used && K.highest() > 0)
    throw std::invalid_argument("pdg_nullhomotopy_xp: variable not part of this Koszul complex");

  const int N = K.p;
  AComplexHomotopy H;
  for (const auto& [h, labs] : K.labels) {
    if (K.count(h + N - 1) == 0) continue;
    PolyMatrix m(K.spec, K.n, K.count(h + N - 1), K.count(h));
    for (int j = 0; j < static_cast<int>(labs.size()); ++j) {
      if (labs[j][var] != 0) continue;
      Exponents b = labs[j];
      b[var] = N - 1;
      const auto& tl = K.labels.at(h + N - 1);
      auto it = std::find(tl.begin(), tl.end(), b);
      if (it == tl.end()) continue;
      m.set(static_cast<int>(it - tl.begin()), j,
            MultiPoly::constant(K.spec, K.n, FieldElem::one(K.spec)));
    }
    H.mats.emplace(h, std::move(m));
  }

  // symbolic verification on the flattened module
  std::vector<std::pair<int, int>> origin;
  PDGModule M = acomplex_to_pdg(K, &origin);
  std::map<std::pair<int, int>, int> pos;
  for (int i = 0; i < M.size(); ++i) pos[origin[i]] = i;
  PolyMatrix Hfull(K.spec, K.n, M.size(), M.size());
  for (const auto& [h, m] : H.mats)
    for (int j = 0; j < m.cols(); ++j)
      for (int i = 0; i < m.rows(); ++i)
        if (!m.at(i, j).is_zero())
          Hfull.set(pos.at({h + N - 1, i}), pos.at({h, j}), m.at(i, j));
  PolyMatrix acc(K.spec, K.n, M.size(), M.size());
  for (int t = 0; t <= N - 1; ++t)
    acc = acc + M.D.pow(N - 1 - t) * Hfull * M.D.pow(t);
  MultiPoly xp = MultiPoly::variable(K.spec, K.n, var);
  MultiPoly xpow = MultiPoly::constant(K.spec, K.n, FieldElem::one(K.spec));
  for (int i = 0; i < N - 1; ++i) xpow = xpow * xp;
  PolyMatrix want(K.spec, K.n, M.size(), M.size());
  for (int i = 0; i < M.size(); ++i) want.set(i, i, xpow);
  if (!(acc == want))
    throw std::runtime_error("pdg_nullhomotopy_xp: homotopy identity failed symbolically");
  return H;
}

// ---------------------------------------------------------------------------
// cones

bool pdg_morphism_validate(const PDGMorphism& f, std::string* why) {
  if (!f.source || !f.target) {
    if (why) *why = "morphism without source/target";
    return false;
  }
  const PDGModule& M = *f.source;
  const PDGModule& N = *f.target;
  if (M.p != N.p || M.n != N.n) {
    if (why) *why = "morphism between modules over different rings";
    return false;
  }
  if (f.F.rows() != N.size() || f.F.cols() != M.size()) {
    if (why) *why = "morphism matrix has the wrong shape";
    return false;
  }
  for (int i = 0; i < N.size(); ++i)
    for (int j = 0; j < M.size(); ++j) {
      const MultiPoly& g = f.F.at(i, j);
      if (g.is_zero()) continue;
      if (!g.is_homogeneous(N.c[i] - M.c[j])) {
        if (why) *why = "morphism entry not homogeneous of the forced degree";
        return false;
      }
    }
  if (!(N.D * f.F == f.F * M.D)) {
    if (why) *why = "morphism does not commute with the differentials";
    return false;
  }
  return true;
}

PDGModule pdg_cone(const PDGMorphism& f) {
  std::string why;
  if (!pdg_morphism_validate(f, &why))
    throw std::invalid_argument("pdg_cone: not a morphism of p-DG modules: " + why);
  const PDGModule& M = *f.source;
  const PDGModule& N = *f.target;
  const int p = M.p;
  PDGModule out;
  out.spec = N.spec;
  out.p = p;
  out.n = N.n;
  const int lm = M.size(), ln = N.size();
  // blocks M[p-1], M[p-2], ..., M[1], N
  for (int b = 0; b < p - 1; ++b) {
    int shift = p - 1 - b;
    for (int i = 0; i < lm; ++i) out.c.push_back(M.c[i] + shift);
  }
  for (int i = 0; i < ln; ++i) out.c.push_back(N.c[i]);
  out.D = PolyMatrix(out.spec, out.n, out.size(), out.size());
  MultiPoly one = MultiPoly::constant(out.spec, out.n, FieldElem::one(out.spec));
  for (int b = 0; b < p - 1; ++b) {
    for (int i = 0; i < lm; ++i)
      for (int j = 0; j < lm; ++j)
        if (!M.D.at(i, j).is_zero()) out.D.set(b * lm + i, b * lm + j, M.D.at(i, j));
    if (b + 1 < p - 1)
      for (int i = 0; i < lm; ++i) out.D.set((b + 1) * lm + i, b * lm + i, one);
  }
  int noff = (p - 1) * lm;
  for (int i = 0; i < ln; ++i)
    for (int j = 0; j < ln; ++j)
      if (!N.D.at(i, j).is_zero()) out.D.set(noff + i, noff + j, N.D.at(i, j));
  if (p == 2) {
    // single M block maps straight into N via f
    for (int i = 0; i < ln; ++i)
      for (int j = 0; j < lm; ++j)
        if (!f.F.at(i, j).is_zero()) out.D.set(noff + i, j, f.F.at(i, j));
  } else {
    int last_m = (p - 2) * lm;  // the M[1] block
    for (int i = 0; i < ln; ++i)
      for (int j = 0; j < lm; ++j)
        if (!f.F.at(i, j).is_zero()) out.D.set(noff + i, last_m + j, f.F.at(i, j));
  }
  return out;
}

// ---------------------------------------------------------------------------
// graded inverse and minimal models

namespace {

// Inverse of a degree-0 change of basis: P = P0 (I + Q) with P0 invertible
// constants and Q strictly positive degree, so the Neumann series is finite.
PolyMatrix graded_inverse(const PolyMatrix& P) {
  Matrix P0 = P.eval_zero();
  Matrix P0inv = P0.inverse();
  PolyMatrix C = PolyMatrix::from_scalar(P0inv, P.nvars());
  PolyMatrix Q = C * P - PolyMatrix::identity(P.spec(), P.nvars(), P.rows());
  // entries of Q^k are homogeneous of a degree fixed by the generator
  // degrees but also lie in I^k, so the series terminates at the degree
  // spread; iterate until the power vanishes, with a hard cap as a guard
  PolyMatrix acc = PolyMatrix::identity(P.spec(), P.nvars(), P.rows());
  PolyMatrix pw = PolyMatrix::identity(P.spec(), P.nvars(), P.rows());
  for (int k = 1; k <= 4096; ++k) {
    pw = pw * Q;
    if (pw.is_zero()) break;
    acc = (k % 2 == 1) ? acc - pw : acc + pw;
  }
  PolyMatrix inv = acc * C;
  if (!(inv * P == PolyMatrix::identity(P.spec(), P.nvars(), P.rows())))
    throw std::runtime_error("graded_inverse: Neumann series did not terminate");
  return inv;
}

PolyVec constant_vector(const FieldSpecPtr& spec, int n, const std::vector<FieldElem>& v) {
  PolyVec out = poly_vec_zero(spec, n, static_cast<int>(v.size()));
  for (size_t i = 0; i < v.size(); ++i)
    if (!v[i].is_zero()) out[i] = MultiPoly::constant(spec, n, v[i]);
  return out;
}

}  // namespace

MinimalModel pdg_minimal_model(const PDGModule& M) {
  MinimalModel out;
  if (M.size() == 0) {
    out.module = M;
    return out;
  }
  Fiber0 fb = pdg_fiber0(M);
  StringDecomposition sd = ncx_string_decompose(fb.F);
  bool has_full = false;
  for (const auto& sb : sd.strings) has_full |= sb.length == M.p;
  if (!has_full) {
    out.module = M;
    return out;
  }

  // new basis: lifted string tops followed by their D-iterates
  PolyMatrix P(M.spec, M.n, M.size(), M.size());
  std::vector<int> newc(M.size(), 0);
  std::vector<bool> keep(M.size(), false);
  int col = 0;
  for (const auto& sb : sd.strings) {
    // constant lift of the top vector into global coordinates
    const auto& ids = fb.gen_ids.at(sb.top_degree);
    PolyVec v = poly_vec_zero(M.spec, M.n, M.size());
    for (size_t k = 0; k < ids.size(); ++k)
      if (!sb.vectors[0][k].is_zero())
        v[ids[k]] = MultiPoly::constant(M.spec, M.n, sb.vectors[0][k]);
    for (int step = 0; step < sb.length; ++step) {
      for (int i = 0; i < M.size(); ++i) P.set(i, col, v[i]);
      newc[col] = sb.top_degree - step;
      keep[col] = sb.length < M.p;
      ++col;
      if (step + 1 < sb.length) v = M.D.apply(v);
    }
  }
  PolyMatrix Pinv = graded_inverse(P);
  PolyMatrix Dn = Pinv * M.D * P;

  // the killed block is d-closed on the nose: full-string columns are unit
  // vectors onto the next string position, the last position maps to zero
  std::vector<int> kept_idx;
  for (int j = 0; j < M.size(); ++j)
    if (keep[j]) kept_idx.push_back(j);
  out.removed_generators = M.size() - static_cast<int>(kept_idx.size());

  PDGModule R;
  R.spec = M.spec;
  R.p = M.p;
  R.n = M.n;
  for (int j : kept_idx) R.c.push_back(newc[j]);
  R.D = PolyMatrix(M.spec, M.n, R.size(), R.size());
  for (size_t jj = 0; jj < kept_idx.size(); ++jj)
    for (size_t ii = 0; ii < kept_idx.size(); ++ii)
      R.D.set(static_cast<int>(ii), static_cast<int>(jj), Dn.at(kept_idx[ii], kept_idx[jj]));
  out.module = R;
  return out;
}

// ---------------------------------------------------------------------------
// d^1 of the x-adic filtration

namespace {

std::vector<Matrix> d1_components(const PDGModule& M, const Fiber0& fb,
                                  const HomologySlice& Hsrc, const HomologySlice& Htgt, int s,
                                  int l) {
  const Subquotient* src = nullptr;
  const Subquotient* tgt = nullptr;
  static const Subquotient empty;
  auto it = Hsrc.layers.find(l);
  src = it == Hsrc.layers.end() ? &empty : &it->second;
  auto jt = Htgt.layers.find(l - s + 1);
  tgt = jt == Htgt.layers.end() ? &empty : &jt->second;

  std::vector<Matrix> out(M.n, Matrix(M.spec, tgt->dim(), src->dim()));
  if (src->dim() == 0 || tgt->dim() == 0) return out;
  PolyMatrix Ds = M.D.pow(s);
  const auto& tgt_ids = fb.gen_ids.at(l - s + 1);
  for (int j = 0; j < src->dim(); ++j) {
    // constant lift of the class representative
    const auto& ids = fb.gen_ids.at(l);
    std::vector<FieldElem> zloc = src->representatives().column(j);
    PolyVec v = poly_vec_zero(M.spec, M.n, M.size());
    for (size_t k = 0; k < ids.size(); ++k)
      if (!zloc[k].is_zero()) v[ids[k]] = MultiPoly::constant(M.spec, M.n, zloc[k]);
    PolyVec w = Ds.apply(v);
    for (int t = 0; t < M.n; ++t) {
      Exponents e(M.n, 0);
      e[t] = 1;
      std::vector<FieldElem> comp(tgt_ids.size(), FieldElem::zero(M.spec));
      for (size_t k = 0; k < tgt_ids.size(); ++k) comp[k] = w[tgt_ids[k]].coeff(e);
      out[t].set_column(j, tgt->project(comp));
    }
  }
  return out;
}

}  // namespace

std::vector<Matrix> pdg_d1(const PDGModule& M, int s, int l) {
  if (s < 1 || s > M.p - 1) throw std::invalid_argument("pdg_d1: s out of range");
  Fiber0 fb = pdg_fiber0(M);
  HomologySlice Hs = ncx_homology(fb.F, s);
  HomologySlice Ht = (M.p - s == s) ? Hs : ncx_homology(fb.F, M.p - s);
  return d1_components(M, fb, Hs, Ht, s, l);
}

// ---------------------------------------------------------------------------
// composition series

CompositionSeries pdg_composition_series(const PDGModule& input) {
  CompositionSeries out;
  MinimalModel mm = pdg_minimal_model(input);
  PDGModule M = mm.module;
  const int p = M.p;

  int prefix = 0;
  int last_L = 0, last_lambda = -1;
  bool have_last = false;

  while (prefix < M.size()) {
    // current quotient block
    PDGModule blk;
    blk.spec = M.spec;
    blk.p = p;
    blk.n = M.n;
    blk.c.assign(M.c.begin() + prefix, M.c.end());
    blk.D = M.D.submatrix(prefix, prefix, M.size() - prefix, M.size() - prefix);

    Fiber0 fb = pdg_fiber0(blk);
    std::vector<HomologySlice> H(p);
    for (int s = 1; s <= p - 1; ++s) H[s] = ncx_homology(fb.F, s);

    int L = 0;
    bool found = false;
    for (int s = 1; s <= p - 1; ++s)
      for (const auto& [l, layer] : H[s].layers)
        if (layer.dim() > 0 && (!found || l > L)) {
          L = l;
          found = true;
        }
    if (!found) {
      // (p-1)-nilpotent and acyclic means the block must be empty
      if (blk.size() > 0)
        throw std::runtime_error(
            "Assumption violated: acyclic fiber with surviving generators (input not minimal?)");
      break;
    }

    int Lmod = ((L % p) + p) % p;
    int s;
    if (Lmod == p - 1)
      s = 1;
    else if (Lmod == p - 2)
      s = p - 1;
    else
      throw std::runtime_error(
          "Assumption violated: top homology degree not congruent to p-1 or p-2 mod p");

    // y-actions on _sH_L through the d^1 operator and the i_*/d_* chains
    const Subquotient& HL = H[s].layers.at(L);
    std::vector<Matrix> Y;
    {
      std::vector<Matrix> T = d1_components(blk, fb, H[s], H[p - s], s, L);
      Matrix chain = Matrix::identity(M.spec, HL.dim());
      if (s == 1 && p > 2) {
        for (int t = 1; t <= p - 2; ++t)
          chain = ncx_induced_i(fb.F, H[t], H[t + 1], L) * chain;
        Matrix inv = chain.inverse();
        for (auto& m : T) Y.push_back(inv * m);
      } else if (s == p - 1 && p > 2) {
        for (int t = p - 1; t >= 2; --t)
          chain = ncx_induced_d(fb.F, H[t], H[t - 1], L - (p - 1 - t)) * chain;
        Matrix inv = chain.inverse();
        for (auto& m : T)
          Y.push_back((inv * m).scaled(FieldElem::from_int(M.spec, -1)));
      } else {
        for (auto& m : T) Y.push_back(m);  // p = 2: d^1 lands back in _1H_L
      }
    }

    // Loewy length of _sH_L and its socle layer J^{lambda-1} H
    Matrix layer = Matrix::identity(M.spec, HL.dim());
    int lambda = 0;
    Matrix socle = layer;
    while (layer.cols() > 0) {
      ++lambda;
      socle = layer;
      Matrix next(M.spec, HL.dim(), 0);
      for (const auto& y : Y) next = next.hstack(y * layer);
      layer = next.image_basis();
      if (lambda > HL.dim() + 1)
        throw std::runtime_error("Assumption violated: y-action on homology not nilpotent");
    }

    if (!have_last || last_L != L || last_lambda != lambda) {
      ++out.socle_rounds;
      have_last = true;
      last_L = L;
      last_lambda = lambda;
    }

    // split the first socle class
    std::vector<FieldElem> zeta_class = socle.column(0);
    std::vector<FieldElem> z = HL.representatives().apply(zeta_class);

    // lift to a genuine cycle: d^s m = 0, m = (z + d0^{p-s} w) + higher order
    LayerBasis srcL = layer_basis(blk.c, blk.n, L);
    LayerBasis tgtL = layer_basis(blk.c, blk.n, L - s);
    PolyMatrix Ds = blk.D.pow(s);
    Matrix A = layer_matrix(Ds, srcL, tgtL);

    const auto& idsL = fb.gen_ids.at(L);
    // constant items of the layer come first per generator order; build the
    // inclusion of fiber coordinates into layer coordinates
    std::vector<int> const_slot(idsL.size(), -1);
    std::vector<int> nc_slots;
    for (int k = 0; k < srcL.size(); ++k) {
      const auto& [gen, mu] = srcL.items[k];
      bool is_const = true;
      for (int x : mu) is_const &= x == 0;
      if (is_const) {
        auto it2 = std::find(idsL.begin(), idsL.end(), gen);
        const_slot[it2 - idsL.begin()] = k;
      } else {
        nc_slots.push_back(k);
      }
    }
    int up = L + p - s;
    Matrix d0corr(M.spec, static_cast<int>(idsL.size()), fb.F.dim(up));
    if (fb.F.dim(up) > 0) d0corr = fb.F.dpow(up, p - s);

    // unknowns: w (fiber layer up), then nonconstant coefficients
    int nw = d0corr.cols();
    int nv = static_cast<int>(nc_slots.size());
    Matrix sys(M.spec, A.rows(), nw + nv);
    for (int col = 0; col < nw; ++col) {
      std::vector<FieldElem> x(srcL.size(), FieldElem::zero(M.spec));
      for (size_t k = 0; k < idsL.size(); ++k) x[const_slot[k]] = d0corr.at(static_cast<int>(k), col);
      sys.set_column(col, A.apply(x));
    }
    for (int col = 0; col < nv; ++col) {
      std::vector<FieldElem> x(srcL.size(), FieldElem::zero(M.spec));
      x[nc_slots[col]] = FieldElem::one(M.spec);
      sys.set_column(nw + col, A.apply(x));
    }
    std::vector<FieldElem> xz(srcL.size(), FieldElem::zero(M.spec));
    for (size_t k = 0; k < idsL.size(); ++k) xz[const_slot[k]] = z[k];
    std::vector<FieldElem> rhs = A.apply(xz);
    for (auto& e : rhs) e = -e;
    auto sol = sys.solve(rhs);
    if (!sol) throw std::runtime_error("Assumption violated: homology class does not lift");

    // assemble m
    std::vector<FieldElem> x = xz;
    for (int col = 0; col < nw; ++col)
      for (size_t k = 0; k < idsL.size(); ++k)
        x[const_slot[k]] = x[const_slot[k]] + d0corr.at(static_cast<int>(k), col) * (*sol)[col];
    for (int col = 0; col < nv; ++col)
      x[nc_slots[col]] = x[nc_slots[col]] + (*sol)[nw + col];
    PolyVec m = poly_vec_zero(M.spec, M.n, blk.size());
    for (int k = 0; k < srcL.size(); ++k) {
      if (x[k].is_zero()) continue;
      const auto& [gen, mu] = srcL.items[k];
      m[gen] = m[gen] + MultiPoly::monomial(M.spec, M.n, mu, x[k]);
    }

    // split columns: [D^{p-2} m, ..., D m, m] for the string type, [m] for A
    std::vector<PolyVec> split;
    int count = (s == 1) ? 1 : p - 1;
    {
      std::vector<PolyVec> tower{m};
      for (int k = 1; k < count; ++k) tower.push_back(blk.D.apply(tower.back()));
      for (int k = count - 1; k >= 0; --k) split.push_back(tower[k]);
    }

    // completion: unit columns keeping the constant parts independent
    Matrix consts(M.spec, blk.size(), count);
    for (int j = 0; j < count; ++j) {
      for (int i = 0; i < blk.size(); ++i) consts.set(i, j, split[j][i].constant_term());
    }
    if (consts.rank() != count)
      throw std::runtime_error("Assumption violated: split generators dependent at the fiber");
    std::vector<int> completion;
    Matrix acc = consts;
    for (int j = 0; j < blk.size() && static_cast<int>(completion.size()) + count < blk.size();
         ++j) {
      Matrix unit(M.spec, blk.size(), 1);
      unit.set(j, 0, FieldElem::one(M.spec));
      Matrix cand = acc.hstack(unit);
      if (cand.rank() == acc.cols() + 1) {
        completion.push_back(j);
        acc = cand;
      }
    }
    if (count + static_cast<int>(completion.size()) != blk.size())
      throw std::runtime_error("Assumption violated: could not complete the basis");

    PolyMatrix Pb(M.spec, M.n, blk.size(), blk.size());
    std::vector<int> newc_blk(blk.size(), 0);
    for (int j = 0; j < count; ++j) {
      for (int i = 0; i < blk.size(); ++i) Pb.set(i, j, split[j][i]);
      newc_blk[j] = L - (count - 1 - j);
    }
    for (size_t j = 0; j < completion.size(); ++j) {
      Pb.set(completion[j], count + static_cast<int>(j),
             MultiPoly::constant(M.spec, M.n, FieldElem::one(M.spec)));
      newc_blk[count + static_cast<int>(j)] = blk.c[completion[j]];
    }
    PolyMatrix Pbinv = graded_inverse(Pb);

    // apply the block change of basis to the full matrix
    PolyMatrix Pfull = PolyMatrix::identity(M.spec, M.n, M.size());
    PolyMatrix Pfullinv = PolyMatrix::identity(M.spec, M.n, M.size());
    for (int i = 0; i < blk.size(); ++i)
      for (int j = 0; j < blk.size(); ++j) {
        Pfull.set(prefix + i, prefix + j, Pb.at(i, j));
        Pfullinv.set(prefix + i, prefix + j, Pbinv.at(i, j));
      }
    M.D = Pfullinv * M.D * Pfull;
    for (int j = 0; j < blk.size(); ++j) M.c[prefix + j] = newc_blk[j];

    CompStep step;
    step.degree = L;
    step.s = s;
    step.gens = count;
    step.kind = (s == 1) ? 'A' : 'V';
    out.steps.push_back(step);
    prefix += count;
  }

  for (int i = 0; i < M.size(); ++i)
    for (int j = 0; j <= i; ++j)
      if (!M.D.at(i, j).is_zero())
        throw std::runtime_error("composition series: output not strictly upper triangular");
  std::string why;
  if (M.size() > 0 && !pdg_validate(M, &why))
    throw std::runtime_error("composition series: output fails validation: " + why);

  out.module = M;
  return out;
}

}  // namespace pnil
