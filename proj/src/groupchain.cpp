#include "pnil/groupchain.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace pnil {

TruncPoly::TruncPoly(FieldSpecPtr spec, int n, int p) : spec_(std::move(spec)), n_(n), p_(p) {
  if (!spec_) throw std::invalid_argument("TruncPoly: null spec");
}

TruncPoly TruncPoly::zero(const FieldSpecPtr& spec, int n, int p) { return TruncPoly(spec, n, p); }

TruncPoly TruncPoly::constant(const FieldSpecPtr& spec, int n, int p, const FieldElem& c) {
  TruncPoly f(spec, n, p);
  f.add_term(Exponents(n, 0), c);
  return f;
}

TruncPoly TruncPoly::variable(const FieldSpecPtr& spec, int n, int p, int i) {
  if (i < 0 || i >= n) throw std::invalid_argument("TruncPoly::variable: index out of range");
  TruncPoly f(spec, n, p);
  Exponents e(n, 0);
  e[i] = 1;
  f.add_term(e, FieldElem::one(spec));
  return f;
}

FieldElem TruncPoly::coeff(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? FieldElem::zero(spec_) : it->second;
}

void TruncPoly::add_term(const Exponents& e, const FieldElem& c) {
  if (static_cast<int>(e.size()) != n_)
    throw std::invalid_argument("TruncPoly::add_term: exponent length mismatch");
  for (int x : e) {
    if (x < 0) throw std::invalid_argument("TruncPoly::add_term: negative exponent");
    if (x >= p_) return;  // y_i^p = 0
  }
  if (c.is_zero()) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, c);
  } else {
    FieldElem s = it->second + c;
    if (s.is_zero())
      terms_.erase(it);
    else
      it->second = s;
  }
}

TruncPoly TruncPoly::operator+(const TruncPoly& b) const {
  TruncPoly out = *this;
  for (const auto& [e, c] : b.terms_) out.add_term(e, c);
  return out;
}

TruncPoly TruncPoly::operator-(const TruncPoly& b) const {
  TruncPoly out = *this;
  for (const auto& [e, c] : b.terms_) out.add_term(e, -c);
  return out;
}

TruncPoly TruncPoly::operator-() const {
  TruncPoly out(spec_, n_, p_);
  for (const auto& [e, c] : terms_) out.terms_.emplace(e, -c);
  return out;
}

TruncPoly TruncPoly::operator*(const TruncPoly& b) const {
  TruncPoly out(spec_, n_, p_);
  for (const auto& [ea, ca] : terms_)
    for (const auto& [eb, cb] : b.terms_) {
      Exponents e(n_);
      bool dead = false;
      for (int i = 0; i < n_; ++i) {
        e[i] = ea[i] + eb[i];
        if (e[i] >= p_) {
          dead = true;
          break;
        }
      }
      if (!dead) out.add_term(e, ca * cb);
    }
  return out;
}

bool TruncPoly::operator==(const TruncPoly& b) const {
  return n_ == b.n_ && p_ == b.p_ && terms_ == b.terms_;
}

std::string TruncPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    bool printed = false;
    if (!c.is_one()) {
      os << c.str();
      printed = true;
    }
    for (int i = 0; i < n_; ++i) {
      if (e[i] == 0) continue;
      if (printed) os << "*";
      os << "y" << (i + 1);
      if (e[i] > 1) os << "^" << e[i];
      printed = true;
    }
    if (!printed) os << "1";
  }
  return os.str();
}

int kg_mono_index(const Exponents& a, int p) {
  int idx = 0;
  for (int x : a) idx = idx * p + x;
  return idx;
}

std::vector<Exponents> kg_monomials(int n, int p) {
  std::vector<Exponents> out;
  Exponents a(n, 0);
  int total = 1;
  for (int i = 0; i < n; ++i) total *= p;
  out.reserve(total);
  for (int k = 0; k < total; ++k) {
    out.push_back(a);
    for (int i = n - 1; i >= 0; --i) {
      if (++a[i] < p) break;
      a[i] = 0;
    }
  }
  return out;
}

Matrix kg_action_matrix(const TruncPoly& g) {
  const int n = g.nvars(), p = g.charp();
  auto monos = kg_monomials(n, p);
  Matrix m(g.spec(), static_cast<int>(monos.size()), static_cast<int>(monos.size()));
  for (size_t j = 0; j < monos.size(); ++j) {
    for (const auto& [e, c] : g.terms()) {
      Exponents t(n);
      bool dead = false;
      for (int i = 0; i < n; ++i) {
        t[i] = monos[j][i] + e[i];
        if (t[i] >= p) {
          dead = true;
          break;
        }
      }
      if (!dead) m.set(kg_mono_index(t, p), static_cast<int>(j), c);
    }
  }
  return m;
}

TruncMatrix::TruncMatrix(FieldSpecPtr spec, int n, int p, int rows, int cols)
    : spec_(std::move(spec)), n_(n), p_(p), rows_(rows), cols_(cols) {
  if (!spec_) throw std::invalid_argument("TruncMatrix: null spec");
  data_.assign(static_cast<size_t>(rows) * cols, TruncPoly::zero(spec_, n, p));
}

TruncMatrix TruncMatrix::identity(const FieldSpecPtr& spec, int n, int p, int m) {
  TruncMatrix out(spec, n, p, m, m);
  for (int i = 0; i < m; ++i)
    out.set(i, i, TruncPoly::constant(spec, n, p, FieldElem::one(spec)));
  return out;
}

TruncMatrix TruncMatrix::operator*(const TruncMatrix& b) const {
  if (cols_ != b.rows_) throw std::domain_error("TruncMatrix: shape mismatch in product");
  TruncMatrix out(spec_, n_, p_, rows_, b.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      if (at(i, k).is_zero()) continue;
      for (int j = 0; j < b.cols_; ++j) {
        if (b.at(k, j).is_zero()) continue;
        out.set(i, j, out.at(i, j) + at(i, k) * b.at(k, j));
      }
    }
  return out;
}

TruncMatrix TruncMatrix::operator+(const TruncMatrix& b) const {
  if (rows_ != b.rows_ || cols_ != b.cols_) throw std::domain_error("TruncMatrix: shape mismatch");
  TruncMatrix out(spec_, n_, p_, rows_, cols_);
  for (size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] + b.data_[i];
  return out;
}

TruncMatrix TruncMatrix::operator-(const TruncMatrix& b) const {
  if (rows_ != b.rows_ || cols_ != b.cols_) throw std::domain_error("TruncMatrix: shape mismatch");
  TruncMatrix out(spec_, n_, p_, rows_, cols_);
  for (size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] - b.data_[i];
  return out;
}

bool TruncMatrix::is_zero() const {
  for (const auto& x : data_)
    if (!x.is_zero()) return false;
  return true;
}

bool TruncMatrix::operator==(const TruncMatrix& b) const {
  if (rows_ != b.rows_ || cols_ != b.cols_) return false;
  for (size_t i = 0; i < data_.size(); ++i)
    if (!(data_[i] == b.data_[i])) return false;
  return true;
}

Matrix TruncMatrix::flatten() const {
  int q = 1;
  for (int i = 0; i < n_; ++i) q *= p_;
  Matrix out(spec_, rows_ * q, cols_ * q);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) {
      if (at(i, j).is_zero()) continue;
      Matrix blk = kg_action_matrix(at(i, j));
      for (int a = 0; a < q; ++a)
        for (int b = 0; b < q; ++b) {
          const FieldElem& c = blk.at(a, b);
          if (!c.is_zero()) out.set(i * q + a, j * q + b, c);
        }
    }
  return out;
}

int KGComplex::rank(int l) const {
  auto it = ranks.find(l);
  return it == ranks.end() ? 0 : it->second;
}

TruncMatrix KGComplex::dmat(int l) const {
  auto it = d.find(l);
  if (it != d.end()) return it->second;
  return TruncMatrix(spec, n, p, rank(l - 1), rank(l));
}

int KGComplex::lowest() const {
  for (const auto& [l, r] : ranks)
    if (r > 0) return l;
  return 0;
}

int KGComplex::highest() const {
  int best = 0;
  for (const auto& [l, r] : ranks)
    if (r > 0) best = l;
  return best;
}

bool KGComplex::empty() const {
  for (const auto& [l, r] : ranks)
    if (r > 0) return false;
  return true;
}

TruncMatrix KGMorphism::mat(int l) const {
  auto it = mats.find(l);
  if (it != mats.end()) return it->second;
  return TruncMatrix(source->spec, source->n, source->p, target->rank(l), source->rank(l));
}

TruncMatrix KGHomotopy::mat(const KGComplex& src, const KGComplex& tgt, int l) const {
  auto it = mats.find(l);
  if (it != mats.end()) return it->second;
  int s = shift >= 0 ? shift : src.nilpotency - 1;
  return TruncMatrix(src.spec, src.n, src.p, tgt.rank(l + s), src.rank(l));
}

bool gc_validate(const KGComplex& C, std::string* why) {
  for (const auto& [l, m] : C.d) {
    if (m.rows() != C.rank(l - 1) || m.cols() != C.rank(l)) {
      if (why) *why = "differential at degree " + std::to_string(l) + " has wrong shape";
      return false;
    }
  }
  if (C.empty()) return true;
  for (int l = C.lowest(); l <= C.highest() + C.nilpotency; ++l) {
    TruncMatrix acc = TruncMatrix::identity(C.spec, C.n, C.p, C.rank(l));
    for (int k = 0; k < C.nilpotency; ++k) acc = C.dmat(l - k) * acc;
    if (!acc.is_zero()) {
      if (why)
        *why = "d^" + std::to_string(C.nilpotency) + " != 0 starting at degree " + std::to_string(l);
      return false;
    }
  }
  return true;
}

NComplexFin gc_flatten(const KGComplex& C) {
  QContext ctx = (C.nilpotency == 2 && C.p != 2)
                     ? QContext::chain(C.spec)
                     : QContext(C.spec, FieldElem::one(C.spec), C.nilpotency);
  NComplexFin out(ctx);
  int q = 1;
  for (int i = 0; i < C.n; ++i) q *= C.p;
  for (const auto& [l, r] : C.ranks)
    if (r > 0) out.dims[l] = r * q;
  for (const auto& [l, m] : C.d)
    if (m.rows() > 0 && m.cols() > 0) out.d.emplace(l, m.flatten());
  return out;
}

Morphism gc_flatten_morphism(const KGMorphism& f, const NComplexFin& src, const NComplexFin& tgt) {
  Morphism out;
  out.source = &src;
  out.target = &tgt;
  for (const auto& [l, m] : f.mats)
    if (m.rows() > 0 && m.cols() > 0) out.mats.emplace(l, m.flatten());
  return out;
}

std::map<int, GModule> gc_homology(const KGComplex& C) {
  if (C.nilpotency != 2)
    throw std::invalid_argument("gc_homology: ordinary homology expects a 2-complex");
  std::map<int, GModule> out;
  if (C.empty()) return out;
  NComplexFin F = gc_flatten(C);
  int q = 1;
  for (int i = 0; i < C.n; ++i) q *= C.p;
  for (int l = C.lowest(); l <= C.highest(); ++l) {
    if (F.dim(l) == 0) continue;
    Subquotient H(F.dmat(l).kernel_basis(), F.dmat(l + 1).image_basis());
    GModule M;
    M.spec = C.spec;
    M.n = C.n;
    M.p = C.p;
    M.dim = H.dim();
    for (int t = 0; t < C.n; ++t) {
      // block-diagonal multiplication by y_t on the flattened chain space
      Matrix blk = kg_action_matrix(TruncPoly::variable(C.spec, C.n, C.p, t));
      Matrix chain(C.spec, F.dim(l), F.dim(l));
      for (int r = 0; r < C.rank(l); ++r)
        for (int a = 0; a < q; ++a)
          for (int b = 0; b < q; ++b) {
            const FieldElem& c = blk.at(a, b);
            if (!c.is_zero()) chain.set(r * q + a, r * q + b, c);
          }
      M.y_actions.push_back(H.induced_map(chain, H));
    }
    out.emplace(l, std::move(M));
  }
  return out;
}

int gc_loewy_length(const GModule& M) {
  if (M.dim == 0) return 0;
  Matrix basis = Matrix::identity(M.spec, M.dim);
  int l = 0;
  while (basis.cols() > 0) {
    ++l;
    Matrix next(M.spec, M.dim, 0);
    for (const auto& act : M.y_actions) next = next.hstack(act * basis);
    basis = next.image_basis();
    if (l > M.dim + 1) throw std::runtime_error("gc_loewy_length: not nilpotent");
  }
  return l;
}

int iota_degree_of_odd(int i, int p) { return p * i - 1; }

namespace {

// floor division for the iota degree bookkeeping
int fdiv(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }
int fmod(int a, int b) { return a - b * fdiv(a, b); }

}  // namespace

KGComplex gc_iota(const KGComplex& C) {
  if (C.nilpotency != 2) throw std::invalid_argument("gc_iota: input must be a chain complex");
  KGComplex out;
  out.spec = C.spec;
  out.p = C.p;
  out.n = C.n;
  out.nilpotency = C.p;
  if (C.empty()) return out;
  const int p = C.p;
  for (const auto& [deg, r] : C.ranks) {
    if (r == 0) continue;
    if (fmod(deg, 2) != 0) {
      int i = fdiv(deg + 1, 2);  // deg = 2i - 1
      out.ranks[p * i - 1] = r;
    } else {
      int i = fdiv(deg, 2);
      for (int j = 0; j <= p - 2; ++j) out.ranks[p * i + j] = r;
    }
  }
  int lo = out.lowest(), hi = out.highest();
  for (int m = lo; m <= hi + 1; ++m) {
    int src = 0, dst = 0;
    auto it = out.ranks.find(m);
    auto jt = out.ranks.find(m - 1);
    src = it == out.ranks.end() ? 0 : it->second;
    dst = jt == out.ranks.end() ? 0 : jt->second;
    if (src == 0 || dst == 0) continue;
    int rm = fmod(m, p);
    if (rm == p - 1) {
      int i = fdiv(m + 1, p);  // m = p i - 1, source C_{2i-1}
      out.d.emplace(m, C.dmat(2 * i - 1));
    } else if (rm == 0) {
      int i = fdiv(m, p);  // bottom copy of C_{2i}
      out.d.emplace(m, C.dmat(2 * i));
    } else {
      int i = fdiv(m, p);
      out.d.emplace(m, TruncMatrix::identity(C.spec, C.n, C.p, C.rank(2 * i)));
    }
  }
  return out;
}

KGMorphism gc_iota_morphism(const KGMorphism& f, const KGComplex& iC, const KGComplex& iD) {
  const KGComplex& C = *f.source;
  const int p = C.p;
  KGMorphism out;
  out.source = &iC;
  out.target = &iD;
  for (const auto& [m, r] : iC.ranks) {
    if (r == 0) continue;
    int rm = fmod(m, p);
    int cdeg = (rm == p - 1) ? 2 * fdiv(m + 1, p) - 1 : 2 * fdiv(m, p);
    TruncMatrix fm = f.mat(cdeg);
    if (fm.rows() > 0 && fm.cols() > 0) out.mats.emplace(m, fm);
  }
  return out;
}

KGComplex gc_free_module(u64 p, int n) {
  KGComplex out;
  out.spec = field_make(p, 1);
  out.p = static_cast<int>(p);
  out.n = n;
  out.nilpotency = 2;
  out.ranks[0] = 1;
  return out;
}

KGComplex gc_circle(u64 p) { return gc_torus(1, p); }

KGComplex gc_torus(int n, u64 p) {
  if (n < 1) throw std::invalid_argument("gc_torus: rank must be >= 1");
  KGComplex out;
  out.spec = field_make(p, 1);
  out.p = static_cast<int>(p);
  out.n = n;
  out.nilpotency = 2;

  // subsets of {0..n-1} of size i, lexicographic
  std::vector<std::vector<std::vector<int>>> subsets(n + 1);
  std::vector<int> cur;
  auto rec = [&](auto&& self, int start) -> void {
    subsets[cur.size()].push_back(cur);
    for (int v = start; v < n; ++v) {
      cur.push_back(v);
      self(self, v + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  for (int i = 0; i <= n; ++i) out.ranks[i] = static_cast<int>(subsets[i].size());

  for (int i = 1; i <= n; ++i) {
    TruncMatrix m(out.spec, n, out.p, out.ranks[i - 1], out.ranks[i]);
    for (size_t col = 0; col < subsets[i].size(); ++col) {
      const auto& S = subsets[i][col];
      for (size_t pos = 0; pos < S.size(); ++pos) {
        std::vector<int> T = S;
        T.erase(T.begin() + static_cast<long>(pos));
        auto it = std::find(subsets[i - 1].begin(), subsets[i - 1].end(), T);
        int row = static_cast<int>(it - subsets[i - 1].begin());
        FieldElem sign = (pos % 2 == 0) ? FieldElem::one(out.spec) : -FieldElem::one(out.spec);
        TruncPoly entry = TruncPoly::variable(out.spec, n, out.p, S[pos]);
        TruncPoly cur_entry = m.at(row, static_cast<int>(col));
        TruncPoly scaledv(out.spec, n, out.p);
        for (const auto& [e, c] : entry.terms()) scaledv.add_term(e, c * sign);
        m.set(row, static_cast<int>(col), cur_entry + scaledv);
      }
    }
    out.d.emplace(i, std::move(m));
  }
  return out;
}

long long gc_euler(const KGComplex& C) {
  long long q = 1;
  for (int i = 0; i < C.n; ++i) q *= C.p;
  long long t = 0;
  for (const auto& [l, r] : C.ranks) t += (fmod(l, 2) == 0 ? 1 : -1) * q * r;
  return t;
}

bool kg_verify_homotopy(const KGMorphism& f, const KGMorphism& g, const KGHomotopy& h,
                        std::string* why) {
  const KGComplex& C = *f.source;
  const KGComplex& T = *f.target;
  const int N = C.nilpotency;
  int lo = std::min(C.lowest(), T.lowest()) - N;
  int hi = std::max(C.highest(), T.highest()) + N;
  for (int l = lo; l <= hi; ++l) {
    if (C.rank(l) == 0) continue;
    TruncMatrix acc(C.spec, C.n, C.p, T.rank(l), C.rank(l));
    for (int i = 0; i <= N - 1; ++i) {
      // d^{N-1-i} h d^i at degree l
      TruncMatrix term = TruncMatrix::identity(C.spec, C.n, C.p, C.rank(l));
      for (int k = 0; k < i; ++k) term = C.dmat(l - k) * term;
      term = h.mat(C, T, l - i) * term;
      for (int k = 0; k < N - 1 - i; ++k) term = T.dmat(l - i + N - 1 - k) * term;
      acc = acc + term;
    }
    TruncMatrix want = f.mat(l) - g.mat(l);
    if (!(acc == want)) {
      if (why) *why = "homotopy identity fails at degree " + std::to_string(l);
      return false;
    }
  }
  return true;
}

KGHomotopy gc_iota_homotopy_transport(const KGMorphism& f, const KGHomotopy& h) {
  const KGComplex& C = *f.source;
  const KGComplex& D = *f.target;
  if (C.nilpotency != 2 || D.nilpotency != 2)
    throw std::invalid_argument("gc_iota_homotopy_transport: f must be a chain map");
  const int p = C.p;

  // h must be a null-homotopy for iota(f); keep the inflations alive locally
  KGComplex iC = gc_iota(C), iD = gc_iota(D);
  KGMorphism iF = gc_iota_morphism(f, iC, iD);
  KGMorphism zero;
  zero.source = &iC;
  zero.target = &iD;
  std::string why;
  if (!kg_verify_homotopy(iF, zero, h, &why))
    throw std::invalid_argument("gc_iota_homotopy_transport: input is not a null-homotopy for iota(f): " + why);

  KGHomotopy out;
  int lo2 = fdiv(C.lowest(), 2) - 1, hi2 = fdiv(C.highest(), 2) + 1;
  for (int l = lo2; l <= hi2; ++l) {
    // even source C_{2l}: d (h_{pl+p-2} + ... + h_{pl+1}) + h_{pl}
    if (C.rank(2 * l) > 0 && D.rank(2 * l + 1) > 0) {
      TruncMatrix sum(C.spec, C.n, C.p, D.rank(2 * l + 2), C.rank(2 * l));
      for (int j = 1; j <= p - 2; ++j) sum = sum + h.mat(iC, iD, p * l + j);
      TruncMatrix even = D.dmat(2 * l + 2) * sum + h.mat(iC, iD, p * l);
      if (!(even.rows() == 0 || even.cols() == 0)) out.mats.emplace(2 * l, even);
    }
    // odd source C_{2l-1}: h_{pl-1}
    if (C.rank(2 * l - 1) > 0 && D.rank(2 * l) > 0)
      out.mats.emplace(2 * l - 1, h.mat(iC, iD, p * l - 1));
  }
  return out;
}

}  // namespace pnil
