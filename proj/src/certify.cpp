#include "pnil/certify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pnil {

namespace {

// projective representatives of F_q^n \ {0}: first nonzero coordinate 1.
// Rank is scale invariant for homogeneous candidates (diagonal-conjugation
// twist), a property the test suite verifies before this shortcut is relied
// on.
template <typename Fn>
bool for_each_projective_point(const FieldSpecPtr& spec, int n, Fn&& fn) {
  u64 q = spec->order();
  std::vector<FieldElem> pt(n, FieldElem::zero(spec));
  for (int lead = 0; lead < n; ++lead) {
    // coordinates before `lead` are 0, coordinate lead is 1, rest free
    int free = n - lead - 1;
    u64 count = 1;
    for (int i = 0; i < free; ++i) count *= q;
    for (u64 k = 0; k < count; ++k) {
      for (int i = 0; i < n; ++i) pt[i] = FieldElem::zero(spec);
      pt[lead] = FieldElem::one(spec);
      u64 t = k;
      for (int i = lead + 1; i < n; ++i) {
        pt[i] = FieldElem::from_index(spec, t % q);
        t /= q;
      }
      if (!fn(pt)) return false;
    }
  }
  return true;
}

std::string point_str(const std::vector<FieldElem>& pt) {
  std::string s = "(";
  for (size_t i = 0; i < pt.size(); ++i) s += (i ? "," : "") + pt[i].str();
  return s + ")";
}

// largest total degree a rank-target minor can have
long long minor_degree_bound(const Certificate& C, int target) {
  std::vector<int> rows = C.c, cols = C.c;
  std::sort(rows.rbegin(), rows.rend());
  std::sort(cols.begin(), cols.end());
  long long b = target;
  for (int i = 0; i < target && i < static_cast<int>(rows.size()); ++i) b += rows[i] - cols[i];
  return std::max<long long>(b, 0);
}

}  // namespace

CertReport cert_check(const Certificate& C, const CertBudget& budget) {
  const int l = C.size();
  if (l < 1) throw std::invalid_argument("cert_check: empty certificate");
  if (C.D.rows() != l || C.D.cols() != l)
    throw std::invalid_argument("cert_check: matrix size does not match the degree vector");
  CertReport rep;

  rep.size_divisible = l % C.p == 0;
  rep.rank_target = rep.size_divisible ? (C.p - 1) * l / C.p : -1;

  rep.homogeneous = true;
  for (int i = 0; i < l && rep.homogeneous; ++i)
    for (int j = 0; j < l && rep.homogeneous; ++j) {
      const MultiPoly& f = C.D.at(i, j);
      if (f.is_zero()) continue;
      int want = C.c[i] + 1 - C.c[j];
      if (want < 0 || !f.is_homogeneous(want)) rep.homogeneous = false;
    }

  rep.p_nilpotent = C.D.pow(C.p).is_zero();

  rep.strictly_upper = true;
  for (int i = 0; i < l && rep.strictly_upper; ++i)
    for (int j = 0; j <= i; ++j)
      if (!C.D.at(i, j).is_zero()) {
        rep.strictly_upper = false;
        break;
      }

  rep.zero_fiber_nilpotent = C.D.eval_zero().pow(C.p - 1).is_zero();

  // condition iii
  if (!rep.size_divisible) {
    rep.rank_condition = false;
    rep.failure_witness = "p does not divide the size";
    return rep;
  }
  rep.rank_condition = true;
  const int mc = C.spec->m;
  for (int m = mc; m <= budget.m_exhaustive; m += mc) {
    auto field = field_make(C.spec->p, m);
    bool ok = for_each_projective_point(field, C.n, [&](const std::vector<FieldElem>& pt) {
      ++rep.exhaustive_points;
      if (C.D.eval(pt).rank() != rep.rank_target) {
        rep.failure_witness = "rank drop at " + point_str(pt) + " over " + field->describe();
        return false;
      }
      return true;
    });
    if (!ok) {
      rep.rank_condition = false;
      return rep;
    }
    rep.fields_exhausted.push_back(m);
  }

  // randomized sampling in a larger field with the Schwartz-Zippel bound
  int mr = ((budget.m_random + mc - 1) / mc) * mc;
  if (mr > budget.m_exhaustive && budget.random_trials > 0) {
    auto field = field_make(C.spec->p, mr);
    rep.random_field_degree = mr;
    Rng rng(budget.seed);
    for (int t = 0; t < budget.random_trials; ++t) {
      std::vector<FieldElem> pt(C.n, FieldElem::zero(field));
      bool nonzero = false;
      while (!nonzero) {
        for (int i = 0; i < C.n; ++i) {
          pt[i] = FieldElem::from_index(field, rng.below(field->order()));
          nonzero |= !pt[i].is_zero();
        }
      }
      ++rep.random_points;
      if (C.D.eval(pt).rank() != rep.rank_target) {
        rep.rank_condition = false;
        rep.failure_witness = "rank drop at " + point_str(pt) + " over " + field->describe();
        return rep;
      }
    }
    double per = static_cast<double>(minor_degree_bound(C, rep.rank_target)) /
                 static_cast<double>(field->order());
    rep.sz_bound_per_trial = std::min(1.0, per);
    rep.sz_bound_aggregate = std::pow(rep.sz_bound_per_trial, rep.random_points);
  }
  return rep;
}

std::vector<int> cert_jordan_type(const Matrix& Dx) {
  if (Dx.rows() != Dx.cols()) throw std::invalid_argument("cert_jordan_type: non-square");
  const int l = Dx.rows();
  std::vector<int> ranks{l};  // rank of Dx^0
  Matrix pw = Matrix::identity(Dx.spec(), l);
  int k = 0;
  while (ranks.back() > 0) {
    ++k;
    if (k > l) throw std::domain_error("cert_jordan_type: matrix is not nilpotent");
    pw = pw * Dx;
    ranks.push_back(pw.rank());
  }
  ranks.push_back(0);
  std::vector<int> partition;
  for (int sz = 1; sz <= k; ++sz) {
    int count = (ranks[sz - 1] - ranks[sz]) - (ranks[sz] - ranks[sz + 1]);
    for (int t = 0; t < count; ++t) partition.push_back(sz);
  }
  std::sort(partition.rbegin(), partition.rend());
  return partition;
}

BoundReport cert_bound_report(const KGComplex& C, bool cross_check) {
  BoundReport rep;
  auto H = gc_homology(C);
  for (const auto& [l, M] : H) {
    if ((((l % 2) + 2) % 2) == 0)
      rep.dim_h_even += M.dim;
    else
      rep.dim_h_odd += M.dim;
  }
  rep.ell = (C.p - 1) * rep.dim_h_even + rep.dim_h_odd;
  rep.chi = gc_euler(C);
  if (rep.chi == 0)
    rep.chi_zero_identity = 2 * rep.ell == (rep.dim_h_even + rep.dim_h_odd) * C.p;
  if (cross_check) {
    CompositionSeries cs = pdg_composition_series(pdg_beta(gc_iota(C)));
    rep.composition_size = cs.module.size();
  }
  return rep;
}

Certificate certificate_from_module(const PDGModule& M) {
  Certificate out;
  out.spec = M.spec;
  out.p = M.p;
  out.n = M.n;
  out.c = M.c;
  out.D = M.D;
  return out;
}

SearchOutcome cert_search(u64 p, int n, int ell, const std::vector<int>& c,
                          const FieldSpecPtr& coeff_field, SearchMode mode,
                          const SearchBudget& budget) {
  if (static_cast<int>(c.size()) != ell)
    throw std::invalid_argument("cert_search: degree vector size mismatch");
  if (coeff_field->p != p) throw std::invalid_argument("cert_search: field characteristic mismatch");
  SearchOutcome out;
  const u64 q = coeff_field->order();
  const int ip = static_cast<int>(p);

  // coefficient slots: one per (entry above the diagonal, monomial of the
  // forced degree)
  struct Slot {
    int i, j;
    Exponents mono;
  };
  std::vector<Slot> slots;
  for (int i = 0; i < ell; ++i)
    for (int j = i + 1; j < ell; ++j) {
      int deg = c[i] + 1 - c[j];
      if (deg < 0) continue;
      for (const auto& mu : monomials_of_degree(n, deg)) slots.push_back({i, j, mu});
    }

  long double space = 1;
  for (size_t t = 0; t < slots.size(); ++t) space *= static_cast<long double>(q);
  out.space_size = space > 9e17L ? -1 : static_cast<long long>(space);

  auto build = [&](const std::vector<u64>& coeffs) {
    Certificate cand;
    cand.spec = coeff_field;
    cand.p = ip;
    cand.n = n;
    cand.c = c;
    cand.D = PolyMatrix(coeff_field, n, ell, ell);
    for (size_t t = 0; t < slots.size(); ++t) {
      if (coeffs[t] == 0) continue;
      const Slot& s = slots[t];
      cand.D.set(s.i, s.j,
                 cand.D.at(s.i, s.j) + MultiPoly::monomial(coeff_field, n, s.mono,
                                                           FieldElem::from_index(coeff_field,
                                                                                 coeffs[t])));
    }
    return cand;
  };

  // canonical form under rescaling the basis vectors: D -> diag(u) D diag(u)^{-1};
  // greedy normalization of the first coefficient of each entry
  auto is_canonical = [&](const Certificate& cand) {
    std::vector<FieldElem> u(ell, FieldElem::one(coeff_field));
    std::vector<bool> known(ell, false);
    known[0] = true;
    bool progress = true;
    while (progress) {
      progress = false;
      for (int i = 0; i < ell; ++i)
        for (int j = i + 1; j < ell; ++j) {
          const MultiPoly& f = cand.D.at(i, j);
          if (f.is_zero()) continue;
          FieldElem lc = f.terms().begin()->second;
          if (known[i] && !known[j]) {
            u[j] = u[i] * lc;
            known[j] = true;
            progress = true;
          } else if (known[j] && !known[i]) {
            u[i] = u[j] * lc.inv();
            known[i] = true;
            progress = true;
          }
        }
    }
    for (int i = 0; i < ell; ++i)
      for (int j = i + 1; j < ell; ++j) {
        const MultiPoly& f = cand.D.at(i, j);
        if (f.is_zero()) continue;
        FieldElem normalized = u[i] * f.terms().begin()->second * u[j].inv();
        FieldElem original = f.terms().begin()->second;
        if (!(normalized == original)) return false;
      }
    return true;
  };

  auto examine = [&](const Certificate& cand) {
    ++out.candidates;
    if (!cand.D.pow(ip).is_zero()) return;
    if (!cand.D.eval_zero().pow(ip - 1).is_zero()) return;  // condition ii precheck
    CertReport rep = cert_check(cand, budget.check);
    if (rep.pass()) out.found.push_back(cand);
  };

  if (mode == SearchMode::exhaustive) {
    if (out.space_size < 0 || out.space_size > budget.max_candidates) {
      out.budget_exceeded = true;
      return out;
    }
    std::vector<u64> coeffs(slots.size(), 0);
    bool done = slots.empty();
    long long seen = 0;
    if (slots.empty()) {
      examine(build(coeffs));
      out.exhausted = true;
      return out;
    }
    while (!done) {
      ++seen;
      Certificate cand = build(coeffs);
      if (is_canonical(cand)) examine(cand);
      // odometer
      size_t t = 0;
      while (t < coeffs.size()) {
        if (++coeffs[t] < q) break;
        coeffs[t] = 0;
        ++t;
      }
      done = t == coeffs.size();
    }
    out.exhausted = true;
  } else {
    Rng rng(budget.seed);
    for (long long t = 0; t < budget.random_candidates; ++t) {
      std::vector<u64> coeffs(slots.size(), 0);
      for (auto& x : coeffs) x = rng.below(q);
      examine(build(coeffs));
    }
  }
  return out;
}

}  // namespace pnil
