#include "pnil/poly.hpp"

#include <numeric>
#include <sstream>
#include <stdexcept>

namespace pnil {

MultiPoly::MultiPoly(FieldSpecPtr spec, int n) : spec_(std::move(spec)), n_(n) {
  if (!spec_) throw std::invalid_argument("MultiPoly: null spec");
  if (n < 0) throw std::invalid_argument("MultiPoly: negative variable count");
}

MultiPoly MultiPoly::zero(const FieldSpecPtr& spec, int n) { return MultiPoly(spec, n); }

MultiPoly MultiPoly::constant(const FieldSpecPtr& spec, int n, const FieldElem& c) {
  MultiPoly f(spec, n);
  f.add_term(Exponents(n, 0), c);
  return f;
}

MultiPoly MultiPoly::variable(const FieldSpecPtr& spec, int n, int i) {
  if (i < 0 || i >= n) throw std::invalid_argument("MultiPoly::variable: index out of range");
  MultiPoly f(spec, n);
  Exponents e(n, 0);
  e[i] = 1;
  f.add_term(e, FieldElem::one(spec));
  return f;
}

MultiPoly MultiPoly::monomial(const FieldSpecPtr& spec, int n, const Exponents& e,
                              const FieldElem& c) {
  MultiPoly f(spec, n);
  f.add_term(e, c);
  return f;
}

int MultiPoly::total_degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_)
    d = std::max(d, std::accumulate(e.begin(), e.end(), 0));
  return d;
}

bool MultiPoly::is_homogeneous(int d) const {
  for (const auto& [e, c] : terms_)
    if (std::accumulate(e.begin(), e.end(), 0) != d) return false;
  return true;
}

int MultiPoly::homogeneous_degree() const {
  if (terms_.empty()) return -1;
  int d = std::accumulate(terms_.begin()->first.begin(), terms_.begin()->first.end(), 0);
  return is_homogeneous(d) ? d : -2;
}

bool MultiPoly::is_constant() const {
  return terms_.empty() ||
         (terms_.size() == 1 &&
          std::accumulate(terms_.begin()->first.begin(), terms_.begin()->first.end(), 0) == 0);
}

FieldElem MultiPoly::constant_term() const { return coeff(Exponents(n_, 0)); }

void MultiPoly::check_compatible(const MultiPoly& b) const {
  if (!spec_ || !b.spec_) throw std::invalid_argument("MultiPoly: uninitialized");
  if (n_ != b.n_) throw std::domain_error("MultiPoly: variable count mismatch");
  if (spec_ != b.spec_ && !(*spec_ == *b.spec_))
    throw std::domain_error("MultiPoly: mixed field specs");
}

FieldElem MultiPoly::coeff(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? FieldElem::zero(spec_) : it->second;
}

void MultiPoly::add_term(const Exponents& e, const FieldElem& c) {
  if (static_cast<int>(e.size()) != n_)
    throw std::invalid_argument("MultiPoly::add_term: exponent length mismatch");
  for (int x : e)
    if (x < 0) throw std::invalid_argument("MultiPoly::add_term: negative exponent");
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

MultiPoly MultiPoly::operator+(const MultiPoly& b) const {
  check_compatible(b);
  MultiPoly out = *this;
  for (const auto& [e, c] : b.terms_) out.add_term(e, c);
  return out;
}

MultiPoly MultiPoly::operator-(const MultiPoly& b) const {
  check_compatible(b);
  MultiPoly out = *this;
  for (const auto& [e, c] : b.terms_) out.add_term(e, -c);
  return out;
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly out(spec_, n_);
  for (const auto& [e, c] : terms_) out.terms_.emplace(e, -c);
  return out;
}

MultiPoly MultiPoly::scaled(const FieldElem& c) const {
  MultiPoly out(spec_, n_);
  if (c.is_zero()) return out;
  for (const auto& [e, k] : terms_) {
    FieldElem v = k * c;
    if (!v.is_zero()) out.terms_.emplace(e, v);
  }
  return out;
}

MultiPoly MultiPoly::operator*(const MultiPoly& b) const {
  check_compatible(b);
  MultiPoly out(spec_, n_);
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      Exponents e(n_);
      for (int i = 0; i < n_; ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

bool MultiPoly::operator==(const MultiPoly& b) const {
  if (n_ != b.n_) return false;
  return terms_ == b.terms_;
}

FieldElem MultiPoly::eval(const std::vector<FieldElem>& point) const {
  if (static_cast<int>(point.size()) != n_)
    throw std::domain_error("MultiPoly::eval: point dimension mismatch");
  FieldSpecPtr target = spec_;
  if (n_ > 0) target = point[0].spec();
  FieldElem acc = FieldElem::zero(target);
  for (const auto& [e, c] : terms_) {
    FieldElem term = embed(c, target);
    for (int i = 0; i < n_; ++i)
      if (e[i] > 0) term = term * point[i].pow(static_cast<u64>(e[i]));
    acc = acc + term;
  }
  return acc;
}

std::string MultiPoly::str(const std::vector<std::string>& var_names) const {
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
      if (static_cast<size_t>(i) < var_names.size())
        os << var_names[i];
      else
        os << "x" << (i + 1);
      if (e[i] > 1) os << "^" << e[i];
      printed = true;
    }
    if (!printed) os << "1";
  }
  return os.str();
}

bool poly_is_homogeneous(const MultiPoly& f, int d) { return f.is_homogeneous(d); }

FieldElem poly_eval(const MultiPoly& f, const std::vector<FieldElem>& point) {
  return f.eval(point);
}

std::vector<Exponents> monomials_of_degree(int n, int d) {
  std::vector<Exponents> out;
  if (d < 0) return out;
  if (n == 0) {
    if (d == 0) out.push_back({});
    return out;
  }
  Exponents e(n, 0);
  // lexicographic walk: first coordinate most significant
  auto rec = [&](auto&& self, int pos, int rem) -> void {
    if (pos == n - 1) {
      e[pos] = rem;
      out.push_back(e);
      return;
    }
    for (int v = 0; v <= rem; ++v) {
      e[pos] = v;
      self(self, pos + 1, rem - v);
    }
  };
  rec(rec, 0, d);
  return out;
}

}  // namespace pnil
