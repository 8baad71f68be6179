#include "coxwalk/field.hpp"

#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace coxwalk {

namespace {

void trim(IntPoly& p) {
  while (p.size() > 1 && p.back() == 0) p.pop_back();
}

void trim(RatPoly& p) {
  while (p.size() > 1 && p.back() == 0) p.pop_back();
}

bool is_zero_poly(const RatPoly& p) { return p.size() == 1 && p[0] == 0; }

// Exact quotient of a by monic b.
IntPoly divide_exact(IntPoly a, const IntPoly& b) {
  const std::size_t db = b.size() - 1;
  if (a.size() < b.size()) throw std::logic_error("divide_exact: degree");
  IntPoly q(a.size() - db);
  for (std::size_t i = a.size(); i-- > db;) {
    Int c = a[i];
    q[i - db] = c;
    if (c == 0) continue;
    for (std::size_t j = 0; j <= db; ++j) a[i - db + j] -= c * b[j];
  }
  for (std::size_t i = 0; i < db; ++i)
    if (a[i] != 0) throw std::logic_error("divide_exact: nonzero remainder");
  return q;
}

RatPoly to_rat(const IntPoly& p) { return RatPoly(p.begin(), p.end()); }

RatPoly rem(RatPoly a, const RatPoly& b) {
  trim(a);
  const std::size_t db = b.size() - 1;
  while (!is_zero_poly(a) && a.size() - 1 >= db) {
    Rat f = a.back() / b.back();
    std::size_t shift = a.size() - 1 - db;
    for (std::size_t j = 0; j <= db; ++j) a[shift + j] -= f * b[j];
    a.pop_back();
    trim(a);
    if (a.empty()) a.push_back(0);
  }
  return a;
}

Rat eval_rat(const RatPoly& p, const Rat& x) {
  Rat acc = 0;
  for (std::size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
  return acc;
}

int rsign(const Rat& r) { return mpq_sgn(r.get_mpq_t()); }

std::vector<RatPoly> sturm_chain(const IntPoly& p) {
  std::vector<RatPoly> chain;
  chain.push_back(to_rat(p));
  RatPoly d(p.size() > 1 ? p.size() - 1 : 1);
  for (std::size_t i = 1; i < p.size(); ++i) d[i - 1] = Rat(p[i] * static_cast<long>(i));
  trim(d);
  chain.push_back(d);
  while (!is_zero_poly(chain.back()) && chain.back().size() > 1) {
    RatPoly r = rem(chain[chain.size() - 2], chain.back());
    for (auto& c : r) c = -c;
    if (is_zero_poly(r)) break;
    chain.push_back(r);
  }
  return chain;
}

int sign_changes(const std::vector<RatPoly>& chain, const Rat& x) {
  int changes = 0, last = 0;
  for (const auto& p : chain) {
    int s = rsign(eval_rat(p, x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

std::vector<Rat> powers(const Rat& x, std::size_t n) {
  std::vector<Rat> out(n);
  if (n == 0) return out;
  out[0] = 1;
  for (std::size_t i = 1; i < n; ++i) out[i] = out[i - 1] * x;
  return out;
}

}  // namespace

int euler_phi(int n) {
  int result = n;
  for (int p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    while (n % p == 0) n /= p;
    result -= result / p;
  }
  if (n > 1) result -= result / n;
  return result;
}

IntPoly cyclotomic(int n) {
  static thread_local std::map<int, IntPoly> memo;
  if (auto it = memo.find(n); it != memo.end()) return it->second;
  IntPoly p(n + 1);
  p[0] = -1;
  p[n] = 1;
  for (int d = 1; d < n; ++d)
    if (n % d == 0) p = divide_exact(p, cyclotomic(d));
  trim(p);
  memo[n] = p;
  return p;
}

IntPoly folded_cyclotomic(int N) {
  if (N == 1) return IntPoly{2, 1};  // lambda = 2cos(pi) = -2
  IntPoly phi = cyclotomic(2 * N);
  const std::size_t d = (phi.size() - 1) / 2;
  // Laurent coefficients a_j of z^-d Phi(z), j = 0..d; z^j + z^-j = D_j(y).
  std::vector<IntPoly> D{IntPoly{2}, IntPoly{0, 1}};
  for (std::size_t j = 2; j <= d; ++j) {
    IntPoly next(j + 1);
    for (std::size_t i = 0; i < D[j - 1].size(); ++i) next[i + 1] += D[j - 1][i];
    for (std::size_t i = 0; i < D[j - 2].size(); ++i) next[i] -= D[j - 2][i];
    D.push_back(next);
  }
  IntPoly psi(d + 1);
  psi[0] = phi[d];
  for (std::size_t j = 1; j <= d; ++j)
    for (std::size_t i = 0; i < D[j].size(); ++i) psi[i] += phi[d + j] * D[j][i];
  trim(psi);
  return psi;
}

Rat eval(const IntPoly& p, const Rat& x) { return eval_rat(to_rat(p), x); }

int count_roots(const IntPoly& p, const Rat& a, const Rat& b) {
  auto chain = sturm_chain(p);
  return sign_changes(chain, a) - sign_changes(chain, b);
}

// ---------------------------------------------------------------- scalars

bool FieldScalar::is_zero() const {
  for (const auto& x : c_)
    if (x != 0) return false;
  return true;
}

bool FieldScalar::is_rational() const {
  for (std::size_t i = 1; i < c_.size(); ++i)
    if (c_[i] != 0) return false;
  return true;
}

FieldScalar& FieldScalar::operator+=(const FieldScalar& o) {
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

FieldScalar& FieldScalar::operator-=(const FieldScalar& o) {
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

FieldScalar& FieldScalar::operator*=(const Rat& r) {
  for (auto& x : c_) x *= r;
  return *this;
}

FieldScalar FieldScalar::operator-() const {
  FieldScalar out(*this);
  for (auto& x : out.c_) x = -x;
  return out;
}

std::string FieldScalar::key() const {
  std::string s;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (i) s += ',';
    s += c_[i].get_str();
  }
  return s;
}

// ------------------------------------------------------------------ field

AlgebraicField AlgebraicField::for_matrix(const CoxeterMatrix& m) {
  const std::size_t n = m.size();
  long N = 1;
  bool only_small = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (m[i].size() != n) throw std::invalid_argument("Coxeter matrix is not square");
    if (m[i][i] != 1) throw std::invalid_argument("Coxeter matrix needs m_ss = 1");
    for (std::size_t j = 0; j < n; ++j) {
      if (m[i][j] != m[j][i]) throw std::invalid_argument("Coxeter matrix is not symmetric");
      if (i == j) continue;
      int v = m[i][j];
      if (v == kInf) continue;
      if (v < 2) throw std::invalid_argument("off-diagonal m_st must be >= 2 or inf");
      if (v > 3) only_small = false;
      N = std::lcm(N, static_cast<long>(v));
    }
  }
  if (only_small || N <= 2) N = 1;
  if (N > 100000) throw std::invalid_argument("conductor too large");
  return AlgebraicField(static_cast<int>(N));
}

AlgebraicField::AlgebraicField(int conductor) : N_(conductor) {
  if (N_ < 1) throw std::invalid_argument("conductor must be positive");
  min_poly_ = folded_cyclotomic(N_);
  deg_ = min_poly_.size() - 1;
  if (deg_ == 1) {
    lo_ = hi_ = Rat(-min_poly_[0], min_poly_[1]);
    lambda_d_ = lo_.get_d();
    return;
  }
  // Isolate the largest root, then narrow by bisection.
  Rat lo = N_ >= 7 ? Rat(9, 5) : Rat(0), hi = 2;
  while (count_roots(min_poly_, lo, hi) > 1) {
    Rat mid = (lo + hi) / 2;
    if (count_roots(min_poly_, mid, hi) >= 1)
      lo = mid;
    else
      hi = mid;
  }
  if (count_roots(min_poly_, lo, hi) != 1) throw std::logic_error("root isolation failed");
  Rat width_cap(1);
  width_cap /= Rat(Int(1) << 80);
  while (hi - lo > width_cap) refine(lo, hi);
  lo_ = lo;
  hi_ = hi;
  lo_pow_ = powers(lo_, deg_);
  hi_pow_ = powers(hi_, deg_);
  lambda_d_ = Rat((lo_ + hi_) / 2).get_d();

  // Reduction table for x^deg .. x^(2deg-2).
  std::vector<Rat> cur(deg_);
  for (std::size_t i = 0; i < deg_; ++i) cur[i] = -Rat(min_poly_[i]);
  for (std::size_t k = 0; k + 1 < deg_; ++k) {
    fold_.push_back(cur);
    std::vector<Rat> next(deg_);
    for (std::size_t i = 0; i + 1 < deg_; ++i) next[i + 1] = cur[i];
    const Rat top = cur[deg_ - 1];
    for (std::size_t i = 0; i < deg_; ++i) next[i] -= top * Rat(min_poly_[i]);
    cur = next;
  }
}

// Keeps the half of (lo, hi] that holds the root; psi changes sign across it.
void AlgebraicField::refine(Rat& lo, Rat& hi) const {
  Rat mid = (lo + hi) / 2;
  int s_mid = rsign(eval(min_poly_, mid));
  if (s_mid == 0) {
    lo = hi = mid;
    return;
  }
  int s_hi = rsign(eval(min_poly_, hi));
  if (s_mid == s_hi)
    hi = mid;
  else
    lo = mid;
}

FieldScalar AlgebraicField::lambda() const {
  FieldScalar x(deg_);
  if (deg_ == 1)
    x[0] = lo_;
  else
    x[1] = 1;
  return x;
}

FieldScalar AlgebraicField::mul(const FieldScalar& a, const FieldScalar& b) const {
  if (deg_ == 1) return FieldScalar(1, a[0] * b[0]);
  std::vector<Rat> prod(2 * deg_ - 1);
  for (std::size_t i = 0; i < deg_; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < deg_; ++j)
      if (b[j] != 0) prod[i + j] += a[i] * b[j];
  }
  FieldScalar out(deg_);
  for (std::size_t i = 0; i < deg_; ++i) out[i] = prod[i];
  for (std::size_t k = 0; k + 1 < deg_; ++k) {
    const Rat& c = prod[deg_ + k];
    if (c == 0) continue;
    for (std::size_t i = 0; i < deg_; ++i)
      if (fold_[k][i] != 0) out[i] += c * fold_[k][i];
  }
  return out;
}

FieldScalar AlgebraicField::inverse(const FieldScalar& a) const {
  if (a.is_zero()) throw std::domain_error("inverse of zero");
  if (deg_ == 1) return FieldScalar(1, 1 / a[0]);
  // Extended Euclid on (min_poly, a): track s with s*a = r (mod min_poly).
  RatPoly r0 = to_rat(min_poly_), r1(a.coeffs());
  trim(r1);
  RatPoly s0{0}, s1{1};
  while (!(r1.size() == 1)) {
    // q, r = divmod(r0, r1)
    RatPoly r = r0;
    RatPoly q(r0.size() >= r1.size() ? r0.size() - r1.size() + 1 : 1);
    const std::size_t d1 = r1.size() - 1;
    while (!is_zero_poly(r) && r.size() - 1 >= d1) {
      Rat f = r.back() / r1.back();
      std::size_t shift = r.size() - 1 - d1;
      q[shift] = f;
      for (std::size_t j = 0; j <= d1; ++j) r[shift + j] -= f * r1[j];
      r.pop_back();
      if (r.empty()) r.push_back(0);
      trim(r);
    }
    // s = s0 - q*s1
    RatPoly qs(q.size() + s1.size() - 1);
    for (std::size_t i = 0; i < q.size(); ++i)
      for (std::size_t j = 0; j < s1.size(); ++j) qs[i + j] += q[i] * s1[j];
    RatPoly s(std::max(s0.size(), qs.size()));
    for (std::size_t i = 0; i < s0.size(); ++i) s[i] += s0[i];
    for (std::size_t i = 0; i < qs.size(); ++i) s[i] -= qs[i];
    trim(s);
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s);
  }
  // r1 is a nonzero constant.
  s1 = rem(s1, to_rat(min_poly_));
  FieldScalar out(deg_);
  for (std::size_t i = 0; i < s1.size() && i < deg_; ++i) out[i] = s1[i] / r1[0];
  return out;
}

FieldScalar AlgebraicField::pow(FieldScalar a, unsigned e) const {
  FieldScalar out = one();
  while (e) {
    if (e & 1) out = mul(out, a);
    e >>= 1;
    if (e) a = mul(a, a);
  }
  return out;
}

FieldScalar AlgebraicField::two_cos(int m) const {
  if (m == kInf) return from_rational(2);
  if (m < 1) throw std::invalid_argument("m must be positive or inf");
  if (deg_ == 1) {
    switch (m) {
      case 1: return from_rational(-2);
      case 2: return from_rational(0);
      case 3: return from_rational(1);
      default:
        if (N_ % m == 0) break;
        throw std::invalid_argument("m does not divide the conductor");
    }
  }
  if (N_ % m != 0) throw std::invalid_argument("m does not divide the conductor");
  const int k = N_ / m;
  FieldScalar prev = from_rational(2), cur = lambda();
  if (k == 0) return prev;
  for (int j = 1; j < k; ++j) {
    FieldScalar next = mul(lambda(), cur) - prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

FieldScalar AlgebraicField::embed_cos(int m) const { return two_cos(m) * Rat(1, 2); }

int AlgebraicField::sign_at(const FieldScalar& x, const std::vector<Rat>& lo_pow,
                            const std::vector<Rat>& hi_pow) const {
  Rat low = 0, high = 0;
  for (std::size_t i = 0; i < deg_; ++i) {
    const Rat& c = x[i];
    if (c == 0) continue;
    if (c > 0) {
      low += c * lo_pow[i];
      high += c * hi_pow[i];
    } else {
      low += c * hi_pow[i];
      high += c * lo_pow[i];
    }
  }
  if (low > 0) return 1;
  if (high < 0) return -1;
  return 0;
}

int AlgebraicField::sign(const FieldScalar& x) const {
  if (deg_ == 1) return rsign(x[0]);
  if (x.is_zero()) return 0;
  // Certified floating filter: the error bound covers conversion and
  // rounding, so any decision it makes agrees with the exact one.
  {
    double v = 0, mag = 0, p = 1;
    bool ok = true;
    for (std::size_t i = 0; i < deg_; ++i, p *= lambda_d_) {
      if (x[i] == 0) continue;
      double c = x[i].get_d();
      if (!std::isfinite(c) || std::fabs(c) < 1e-280 || std::fabs(c) > 1e280) {
        ok = false;
        break;
      }
      v += c * p;
      mag += std::fabs(c) * p;
    }
    if (ok) {
      const double err = mag * (8.0 * static_cast<double>(deg_) + 16.0) * 0x1p-52;
      if (v > 4 * err) return 1;
      if (v < -4 * err) return -1;
    }
  }
  if (int s = sign_at(x, lo_pow_, hi_pow_); s != 0) return s;
  Rat lo = lo_, hi = hi_;
  for (;;) {
    refine(lo, hi);
    if (int s = sign_at(x, powers(lo, deg_), powers(hi, deg_)); s != 0) return s;
  }
}

double AlgebraicField::to_double(const FieldScalar& x) const {
  double v = 0, p = 1;
  for (std::size_t i = 0; i < deg_; ++i, p *= lambda_d_) v += x[i].get_d() * p;
  return v;
}

std::string AlgebraicField::to_string(const FieldScalar& x) const {
  std::string s;
  for (std::size_t i = 0; i < deg_; ++i) {
    if (x[i] == 0) continue;
    if (!s.empty()) s += " + ";
    s += x[i].get_str();
    if (i == 1) s += "*L";
    if (i > 1) s += "*L^" + std::to_string(i);
  }
  return s.empty() ? "0" : s;
}

}  // namespace coxwalk
