#include "pnil/field.hpp"

#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace pnil {

namespace {

// p stays below 2^31 so products of residues fit in u64.
constexpr u64 kMaxPrime = (u64(1) << 31) - 1;
constexpr u64 kMaxOrder = u64(1) << 62;

u64 addm(u64 a, u64 b, u64 p) {
  u64 s = a + b;
  return s >= p ? s - p : s;
}
u64 subm(u64 a, u64 b, u64 p) { return a >= b ? a - b : a + p - b; }
u64 mulm(u64 a, u64 b, u64 p) { return (a * b) % p; }

// Dense coefficient arithmetic over F_p. Vectors are low-degree-first.
std::vector<u64> poly_mulm(const std::vector<u64>& a, const std::vector<u64>& b, u64 p) {
  if (a.empty() || b.empty()) return {};
  std::vector<u64> out(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j)
      out[i + j] = addm(out[i + j], mulm(a[i], b[j], p), p);
  }
  return out;
}

// Reduces in place by a monic modulus.
void poly_reduce(std::vector<u64>& a, const std::vector<u64>& mod, u64 p) {
  int m = static_cast<int>(mod.size()) - 1;
  for (int d = static_cast<int>(a.size()) - 1; d >= m; --d) {
    u64 c = a[d];
    if (c == 0) continue;
    a[d] = 0;
    for (int i = 0; i < m; ++i)
      a[d - m + i] = subm(a[d - m + i], mulm(c, mod[i], p), p);
  }
  a.resize(m, 0);
  if (a.size() < static_cast<size_t>(m)) a.resize(m, 0);
}

int poly_degree(const std::vector<u64>& a) {
  for (int d = static_cast<int>(a.size()) - 1; d >= 0; --d)
    if (a[d] != 0) return d;
  return -1;
}

// Remainder of a by monic b (used by the irreducibility trial division).
std::vector<u64> poly_remm(std::vector<u64> a, const std::vector<u64>& b, u64 p) {
  int db = poly_degree(b);
  u64 lead_inv = 1;
  {
    // b monic in our usage; keep the general division anyway
    u64 lead = b[db];
    u64 e = p - 2, base = lead, r = 1;
    while (e) {
      if (e & 1) r = mulm(r, base, p);
      base = mulm(base, base, p);
      e >>= 1;
    }
    lead_inv = r;
  }
  for (int d = poly_degree(a); d >= db; d = poly_degree(a)) {
    u64 c = mulm(a[d], lead_inv, p);
    for (int i = 0; i <= db; ++i)
      a[d - db + i] = subm(a[d - db + i], mulm(c, b[i], p), p);
  }
  return a;
}

bool poly_is_zero(const std::vector<u64>& a) { return poly_degree(a) < 0; }

// Irreducibility over F_p by trial division with every monic polynomial of
// degree 1..deg/2. Fine at the small sizes this library targets.
bool is_irreducible(const std::vector<u64>& f, u64 p) {
  int deg = poly_degree(f);
  if (deg <= 0) return false;
  if (deg == 1) return true;
  for (int d = 1; 2 * d <= deg; ++d) {
    // enumerate monic divisor candidates of degree d
    std::vector<u64> g(d + 1, 0);
    g[d] = 1;
    u64 count = 1;
    for (int i = 0; i < d; ++i) count *= p;
    for (u64 k = 0; k < count; ++k) {
      u64 t = k;
      for (int i = 0; i < d; ++i) {
        g[i] = t % p;
        t /= p;
      }
      if (poly_is_zero(poly_remm(f, g, p))) return false;
    }
  }
  return true;
}

std::mutex g_spec_cache_mutex;
std::map<std::pair<u64, int>, FieldSpecPtr> g_spec_cache;

}  // namespace

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

u64 FieldSpec::order() const {
  u64 q = 1;
  for (int i = 0; i < m; ++i) q *= p;
  return q;
}

std::string FieldSpec::describe() const {
  std::ostringstream os;
  os << "F_" << order();
  if (m > 1) {
    os << " = F_" << p << "[t]/(";
    bool first = true;
    for (int d = m; d >= 0; --d) {
      u64 c = modulus[d];
      if (c == 0) continue;
      if (!first) os << " + ";
      first = false;
      if (d == 0 || c != 1) os << c;
      if (d >= 1) os << (c != 1 ? "*t" : "t");
      if (d >= 2) os << "^" << d;
    }
    os << ")";
  }
  return os.str();
}

FieldSpecPtr field_make(u64 p, int m) {
  if (!is_prime(p)) throw std::invalid_argument("field_make: " + std::to_string(p) + " is not prime");
  if (m < 1) throw std::invalid_argument("field_make: extension degree must be >= 1");
  if (p > kMaxPrime) throw std::invalid_argument("field_make: characteristic too large");
  {
    long double ord = 1;
    for (int i = 0; i < m; ++i) ord *= static_cast<long double>(p);
    if (ord > static_cast<long double>(kMaxOrder))
      throw std::invalid_argument("field_make: field order too large");
  }
  {
    std::lock_guard<std::mutex> lock(g_spec_cache_mutex);
    auto it = g_spec_cache.find({p, m});
    if (it != g_spec_cache.end()) return it->second;
  }

  auto spec = std::make_shared<FieldSpec>();
  spec->p = p;
  spec->m = m;
  if (m == 1) {
    spec->modulus = {0, 1};  // t, i.e. the identity relation on residues
  } else {
    // lexicographically least monic irreducible, low coefficients first
    std::vector<u64> f(m + 1, 0);
    f[m] = 1;
    u64 count = 1;
    for (int i = 0; i < m; ++i) count *= p;
    bool found = false;
    for (u64 k = 0; k < count && !found; ++k) {
      u64 t = k;
      // k's base-p digits in reverse so that (c_0,...,c_{m-1}) ascends lexicographically
      for (int i = m - 1; i >= 0; --i) {
        f[i] = t % p;
        t /= p;
      }
      if (is_irreducible(f, p)) {
        spec->modulus = f;
        found = true;
      }
    }
    if (!found) throw std::runtime_error("field_make: no irreducible found (impossible)");
  }
  FieldSpecPtr out = spec;
  std::lock_guard<std::mutex> lock(g_spec_cache_mutex);
  g_spec_cache[{p, m}] = out;
  return out;
}

FieldElem::FieldElem(FieldSpecPtr spec, std::vector<u64> coeffs)
    : spec_(std::move(spec)), coeffs_(std::move(coeffs)) {
  if (!spec_) throw std::invalid_argument("FieldElem: null spec");
  if (coeffs_.size() != static_cast<size_t>(spec_->m))
    throw std::invalid_argument("FieldElem: coefficient count != extension degree");
  for (u64& c : coeffs_) c %= spec_->p;
}

FieldElem FieldElem::zero(const FieldSpecPtr& spec) {
  return FieldElem(spec, std::vector<u64>(spec->m, 0));
}

FieldElem FieldElem::one(const FieldSpecPtr& spec) {
  std::vector<u64> c(spec->m, 0);
  c[0] = 1 % spec->p;
  return FieldElem(spec, std::move(c));
}

FieldElem FieldElem::from_int(const FieldSpecPtr& spec, long long v) {
  long long r = v % static_cast<long long>(spec->p);
  if (r < 0) r += static_cast<long long>(spec->p);
  std::vector<u64> c(spec->m, 0);
  c[0] = static_cast<u64>(r);
  return FieldElem(spec, std::move(c));
}

FieldElem FieldElem::from_index(const FieldSpecPtr& spec, u64 k) {
  std::vector<u64> c(spec->m, 0);
  for (int i = 0; i < spec->m; ++i) {
    c[i] = k % spec->p;
    k /= spec->p;
  }
  return FieldElem(spec, std::move(c));
}

u64 FieldElem::index() const {
  u64 k = 0;
  for (int i = spec_->m - 1; i >= 0; --i) k = k * spec_->p + coeffs_[i];
  return k;
}

bool FieldElem::is_zero() const {
  for (u64 c : coeffs_)
    if (c != 0) return false;
  return true;
}

bool FieldElem::is_one() const {
  if (coeffs_[0] != 1 % spec_->p) return false;
  for (size_t i = 1; i < coeffs_.size(); ++i)
    if (coeffs_[i] != 0) return false;
  return true;
}

bool FieldElem::is_constant() const {
  for (size_t i = 1; i < coeffs_.size(); ++i)
    if (coeffs_[i] != 0) return false;
  return true;
}

void FieldElem::check_same(const FieldElem& b) const {
  if (!spec_ || !b.spec_) throw std::invalid_argument("FieldElem: uninitialized element");
  if (spec_ != b.spec_ && !(*spec_ == *b.spec_))
    throw std::domain_error("FieldElem: mixed field specs");
}

FieldElem FieldElem::operator+(const FieldElem& b) const {
  check_same(b);
  std::vector<u64> c(coeffs_.size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = addm(coeffs_[i], b.coeffs_[i], spec_->p);
  return FieldElem(spec_, std::move(c));
}

FieldElem FieldElem::operator-(const FieldElem& b) const {
  check_same(b);
  std::vector<u64> c(coeffs_.size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = subm(coeffs_[i], b.coeffs_[i], spec_->p);
  return FieldElem(spec_, std::move(c));
}

FieldElem FieldElem::operator-() const {
  std::vector<u64> c(coeffs_.size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = subm(0, coeffs_[i], spec_->p);
  return FieldElem(spec_, std::move(c));
}

FieldElem FieldElem::operator*(const FieldElem& b) const {
  check_same(b);
  if (spec_->m == 1) {
    std::vector<u64> c{mulm(coeffs_[0], b.coeffs_[0], spec_->p)};
    return FieldElem(spec_, std::move(c));
  }
  std::vector<u64> prod = poly_mulm(coeffs_, b.coeffs_, spec_->p);
  poly_reduce(prod, spec_->modulus, spec_->p);
  return FieldElem(spec_, std::move(prod));
}

FieldElem FieldElem::pow(u64 e) const {
  FieldElem r = one(spec_);
  FieldElem base = *this;
  while (e) {
    if (e & 1) r = r * base;
    base = base * base;
    e >>= 1;
  }
  return r;
}

FieldElem FieldElem::pow_signed(long long e) const {
  if (e >= 0) return pow(static_cast<u64>(e));
  return inv().pow(static_cast<u64>(-e));
}

FieldElem FieldElem::inv() const {
  if (is_zero()) throw std::domain_error("FieldElem: inversion of zero");
  return pow(spec_->order() - 2);
}

bool FieldElem::operator==(const FieldElem& b) const {
  if (!spec_ || !b.spec_) return spec_ == b.spec_;
  if (spec_ != b.spec_ && !(*spec_ == *b.spec_)) return false;
  return coeffs_ == b.coeffs_;
}

std::string FieldElem::str() const {
  if (spec_->m == 1) return std::to_string(coeffs_[0]);
  std::ostringstream os;
  bool first = true;
  for (int d = 0; d <= spec_->m - 1; ++d) {
    if (coeffs_[d] == 0) continue;
    if (!first) os << "+";
    first = false;
    if (d == 0 || coeffs_[d] != 1) os << coeffs_[d];
    if (d >= 1) os << (coeffs_[d] != 1 ? "*t" : "t");
    if (d >= 2) os << "^" << d;
  }
  if (first) os << "0";
  return os.str();
}

FieldElem field_arith(const FieldElem& a, const FieldElem& b, FieldOp op) {
  switch (op) {
    case FieldOp::add: return a + b;
    case FieldOp::mul: return a * b;
    case FieldOp::inv: return a.inv();
    case FieldOp::neg: return -a;
  }
  throw std::invalid_argument("field_arith: unknown op");
}

FieldElem embed(const FieldElem& a, const FieldSpecPtr& target) {
  const FieldSpecPtr& src = a.spec();
  if (src == target || *src == *target) {
    if (src->m == target->m) return FieldElem(target, a.coeffs());
  }
  if (src->p != target->p)
    throw std::domain_error("embed: different characteristics");
  if (a.is_constant()) return FieldElem::from_int(target, static_cast<long long>(a.coeffs()[0]));
  if (target->m % src->m != 0)
    throw std::domain_error("embed: source degree does not divide target degree");

  // least root of the source modulus in the target field; cached per pair
  static std::mutex mutex;
  static std::map<std::pair<std::pair<u64, int>, std::pair<u64, int>>, FieldElem> cache;
  FieldElem root = FieldElem::zero(target);
  bool have = false;
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find({{src->p, src->m}, {target->p, target->m}});
    if (it != cache.end()) {
      root = it->second;
      have = true;
    }
  }
  if (!have) {
    bool found = false;
    for (u64 k = 0; k < target->order(); ++k) {
      FieldElem cand = FieldElem::from_index(target, k);
      FieldElem val = FieldElem::zero(target);
      FieldElem powc = FieldElem::one(target);
      for (int d = 0; d <= src->m; ++d) {
        val = val + powc * FieldElem::from_int(target, static_cast<long long>(src->modulus[d]));
        powc = powc * cand;
      }
      if (val.is_zero()) {
        root = cand;
        found = true;
        break;
      }
    }
    if (!found) throw std::domain_error("embed: no root of source modulus in target (impossible for compatible degrees)");
    std::lock_guard<std::mutex> lock(mutex);
    cache.insert({{{src->p, src->m}, {target->p, target->m}}, root});
  }

  FieldElem out = FieldElem::zero(target);
  FieldElem powr = FieldElem::one(target);
  for (int d = 0; d < src->m; ++d) {
    out = out + powr * FieldElem::from_int(target, static_cast<long long>(a.coeffs()[d]));
    powr = powr * root;
  }
  return out;
}

}  // namespace pnil
