#include <doctest.h>

#include "coxwalk/field.hpp"

#include <cmath>
#include <numeric>
#include <numbers>
#include <random>

using namespace coxwalk;

namespace {

// Minimal polynomial of 2cos(pi/m) from its numerically evaluated conjugates,
// rounded to integers.  Independent of the cyclotomic folding.
std::vector<long> numeric_min_poly(int m) {
  std::vector<double> p{1.0};
  for (int k = 1; k < 2 * m; k += 2) {
    if (std::gcd(k, 2 * m) != 1 || k > m) continue;
    double r = 2 * std::cos(k * std::numbers::pi / m);
    std::vector<double> q(p.size() + 1, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
      q[i + 1] += p[i];
      q[i] -= r * p[i];
    }
    p = q;
  }
  std::vector<long> out;
  for (double c : p) out.push_back(std::lround(c));
  return out;
}

FieldScalar eval_in(const AlgebraicField& F, const std::vector<long>& poly, const FieldScalar& x) {
  FieldScalar acc = F.zero(), pw = F.one();
  for (long c : poly) {
    acc += pw * Rat(c);
    pw = F.mul(pw, x);
  }
  return acc;
}

FieldScalar random_scalar(const AlgebraicField& F, std::mt19937& rng) {
  std::uniform_int_distribution<int> num(-20, 20), den(1, 9);
  FieldScalar x(F.degree());
  for (std::size_t i = 0; i < F.degree(); ++i) x[i] = Rat(num(rng), den(rng));
  for (std::size_t i = 0; i < F.degree(); ++i) x[i].canonicalize();
  return x;
}

}  // namespace

TEST_CASE("cyclotomic polynomials") {
  CHECK(cyclotomic(1) == IntPoly{-1, 1});
  CHECK(cyclotomic(12) == IntPoly{1, 0, -1, 0, 1});
  CHECK(cyclotomic(24).size() == 9);
  for (int n : {5, 7, 9, 10, 12, 15, 16, 24, 30})
    CHECK(static_cast<int>(cyclotomic(n).size()) - 1 == euler_phi(n));
}

TEST_CASE("field for small labels short-circuits to the rationals") {
  CoxeterMatrix m{{1, 3, 2}, {3, 1, 3}, {2, 3, 1}};
  auto F = AlgebraicField::for_matrix(m);
  CHECK(F.conductor() == 1);
  CHECK(F.is_rational());
  CHECK(F.embed_cos(3) == F.from_rational(Rat(1, 2)));
  CHECK(F.embed_cos(2).is_zero());
  CHECK(F.embed_cos(kInf) == F.one());
}

TEST_CASE("field for labels {2,3,4}") {
  CoxeterMatrix m{{1, 4, 3}, {4, 1, 3}, {3, 3, 1}};
  auto F = AlgebraicField::for_matrix(m);
  CHECK(F.conductor() == 12);
  CHECK(F.degree() == 4);
  auto c4 = F.two_cos(4);
  CHECK(F.mul(c4, c4) == F.from_rational(2));
  auto h = F.embed_cos(4);
  CHECK(F.mul(h, h) == F.from_rational(Rat(1, 2)));
  CHECK(F.embed_cos(3) == F.from_rational(Rat(1, 2)));
  CHECK(F.sign(F.lambda() - F.one()) == 1);
  CHECK(F.sign(F.mul(F.lambda(), F.lambda()) - F.from_rational(4)) == -1);
  CHECK(F.sign(F.zero()) == 0);
}

TEST_CASE("2cos(pi/8) satisfies x^4 - 4x^2 + 2") {
  CHECK(folded_cyclotomic(8) == IntPoly{2, 0, -4, 0, 1});
  CoxeterMatrix m{{1, 8, 3}, {8, 1, 2}, {3, 2, 1}};
  auto F = AlgebraicField::for_matrix(m);
  CHECK(F.conductor() == 24);
  CHECK(eval_in(F, {2, 0, -4, 0, 1}, F.two_cos(8)).is_zero());
}

TEST_CASE("embedded cosines are roots of independently computed minimal polynomials") {
  for (int N : {4, 5, 8, 12, 20, 24, 42}) {
    AlgebraicField F(N);
    CHECK(F.degree() == static_cast<std::size_t>(euler_phi(2 * N) / 2));
    auto [lo, hi] = F.root_bracket();
    double lam = 2 * std::cos(std::numbers::pi / N);
    CHECK(lo.get_d() <= lam + 1e-12);
    CHECK(hi.get_d() >= lam - 1e-12);
    for (int m = 2; m <= N; ++m) {
      if (N % m) continue;
      auto poly = numeric_min_poly(m);
      CHECK_MESSAGE(eval_in(F, poly, F.two_cos(m)).is_zero(), "N=" << N << " m=" << m);
      CHECK(std::fabs(F.to_double(F.embed_cos(m)) - std::cos(std::numbers::pi / m)) < 1e-12);
    }
  }
}

TEST_CASE("field axioms and sign laws on random scalars") {
  std::mt19937 rng(7);
  for (int N : {5, 12, 20}) {
    AlgebraicField F(N);
    for (int it = 0; it < 60; ++it) {
      auto a = random_scalar(F, rng), b = random_scalar(F, rng), c = random_scalar(F, rng);
      CHECK(F.mul(a + b, c) == F.mul(a, c) + F.mul(b, c));
      CHECK(F.mul(a, b) == F.mul(b, a));
      if (!a.is_zero()) CHECK(F.mul(a, F.inverse(a)) == F.one());
      CHECK(F.sign(F.mul(a, b)) == F.sign(a) * F.sign(b));
      if (F.sign(a) == F.sign(b)) CHECK(F.sign(a + b) == F.sign(a));
      double d = F.to_double(a);
      if (std::fabs(d) > 1e-9) CHECK(F.sign(a) == (d > 0 ? 1 : -1));
    }
  }
}

TEST_CASE("sign of scalars closer to zero than the stored bracket") {
  AlgebraicField F(12);
  auto lam2 = F.mul(F.lambda(), F.lambda());
  CHECK((lam2 - F.from_rational(2) - F.two_cos(6)).is_zero());
  auto [lo, hi] = F.root_bracket();
  CHECK(F.sign(F.lambda() - F.from_rational(lo)) == 1);
  CHECK(F.sign(F.lambda() - F.from_rational(hi)) == -1);
  Rat mid = (lo + hi) / 2;
  int s = F.sign(F.lambda() - F.from_rational(mid));
  CHECK(s != 0);
  CHECK(F.sign(F.mul(F.lambda() - F.from_rational(mid), F.from_rational(-3))) == -s);
}

TEST_CASE("field_for rejects malformed matrices") {
  CHECK_THROWS(AlgebraicField::for_matrix({{1, 3}, {4, 1}}));
  CHECK_THROWS(AlgebraicField::for_matrix({{2, 3}, {3, 1}}));
  CHECK_THROWS(AlgebraicField::for_matrix({{1, 1}, {1, 1}}));
  AlgebraicField F(12);
  CHECK_THROWS(F.two_cos(5));
}
