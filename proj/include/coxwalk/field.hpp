#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace coxwalk {

using Rat = mpq_class;
using Int = mpz_class;

// Coxeter matrix entry for m = infinity.
inline constexpr int kInf = 0;

using CoxeterMatrix = std::vector<std::vector<int>>;

// Integer polynomial, coefficient i multiplies x^i.
using IntPoly = std::vector<Int>;
using RatPoly = std::vector<Rat>;

IntPoly cyclotomic(int n);
// psi with Phi_{2N}(z) = z^{deg/2} psi(z + 1/z); psi(2cos(pi/N)) = 0.
IntPoly folded_cyclotomic(int N);
int euler_phi(int n);

// Residue of Q[x]/(min_poly), coefficients low degree first.  Always reduced
// and normalized, so equality is coefficient equality.
class FieldScalar {
 public:
  FieldScalar() = default;
  explicit FieldScalar(std::size_t degree) : c_(degree) {}
  FieldScalar(std::size_t degree, const Rat& r) : c_(degree) { c_[0] = r; }

  std::size_t degree() const { return c_.size(); }
  const Rat& operator[](std::size_t i) const { return c_[i]; }
  Rat& operator[](std::size_t i) { return c_[i]; }
  const std::vector<Rat>& coeffs() const { return c_; }

  bool is_zero() const;
  bool is_rational() const;

  FieldScalar& operator+=(const FieldScalar& o);
  FieldScalar& operator-=(const FieldScalar& o);
  FieldScalar& operator*=(const Rat& r);
  friend FieldScalar operator+(FieldScalar a, const FieldScalar& b) { return a += b; }
  friend FieldScalar operator-(FieldScalar a, const FieldScalar& b) { return a -= b; }
  friend FieldScalar operator*(FieldScalar a, const Rat& r) { return a *= r; }
  FieldScalar operator-() const;
  friend bool operator==(const FieldScalar& a, const FieldScalar& b) { return a.c_ == b.c_; }

  std::string key() const;

 private:
  std::vector<Rat> c_;
};

class AlgebraicField {
 public:
  // Field generated by all 2cos(pi/m) for finite m in the matrix.
  static AlgebraicField for_matrix(const CoxeterMatrix& m);
  // Q(2cos(pi/N)); N == 1 means the rationals.
  explicit AlgebraicField(int conductor);

  int conductor() const { return N_; }
  std::size_t degree() const { return deg_; }
  bool is_rational() const { return deg_ == 1; }
  const IntPoly& min_poly() const { return min_poly_; }
  std::pair<Rat, Rat> root_bracket() const { return {lo_, hi_}; }

  FieldScalar zero() const { return FieldScalar(deg_); }
  FieldScalar one() const { return FieldScalar(deg_, Rat(1)); }
  FieldScalar from_rational(const Rat& r) const { return FieldScalar(deg_, r); }
  // lambda = 2cos(pi/N).
  FieldScalar lambda() const;

  FieldScalar mul(const FieldScalar& a, const FieldScalar& b) const;
  FieldScalar inverse(const FieldScalar& a) const;
  FieldScalar pow(FieldScalar a, unsigned e) const;

  // 2cos(pi/m) and cos(pi/m); m == kInf yields 2 and 1.
  FieldScalar two_cos(int m) const;
  FieldScalar embed_cos(int m) const;

  int sign(const FieldScalar& x) const;
  int compare(const FieldScalar& a, const FieldScalar& b) const { return sign(a - b); }

  double to_double(const FieldScalar& x) const;
  std::string to_string(const FieldScalar& x) const;

 private:
  int N_ = 1;
  std::size_t deg_ = 1;
  IntPoly min_poly_;
  Rat lo_, hi_;
  std::vector<Rat> lo_pow_, hi_pow_;
  // x^(deg+k) reduced, for k = 0 .. deg-2.
  std::vector<std::vector<Rat>> fold_;
  double lambda_d_ = 0.0;

  int sign_at(const FieldScalar& x, const std::vector<Rat>& lo_pow,
              const std::vector<Rat>& hi_pow) const;
  void refine(Rat& lo, Rat& hi) const;
};

// Sturm-sequence root count of p in (a, b].
int count_roots(const IntPoly& p, const Rat& a, const Rat& b);
Rat eval(const IntPoly& p, const Rat& x);

}  // namespace coxwalk
