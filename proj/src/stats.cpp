#include "coxwalk/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace coxwalk {

namespace {

double sample_sd(const std::vector<double>& x) {
  const double n = static_cast<double>(x.size());
  const double m = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double ss = 0;
  for (double a : x) ss += (a - m) * (a - m);
  return std::sqrt(ss / (n - 1));
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace

Estimates estimate(const std::vector<RenewalSeries>& series, Pooling pooling) {
  Estimates e;
  e.pooling = pooling;
  std::vector<double> X, Y;
  double lag_x = 0, lag_y = 0;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // indices into X/Y
  for (const auto& s : series) {
    e.n_renewals += s.times.size();
    const long cutoff = static_cast<long>(s.horizon) - 2 * static_cast<long>(s.tail_buffer);
    for (std::size_t i = 1; i < s.increments_time.size(); ++i) {
      if (pooling == Pooling::StoppingTime && static_cast<long>(s.times[i - 1]) > cutoff) break;
      if (i > 1) pairs.emplace_back(X.size() - 1, X.size());
      X.push_back(static_cast<double>(s.increments_dist[i]));
      Y.push_back(static_cast<double>(s.increments_time[i]));
    }
  }
  const std::size_t N = X.size();
  e.n_increments = N;
  if (N < 10)
    throw EstimationError("only " + std::to_string(N) +
                          " renewal increments after the first; need at least 10 (longer horizon, more trajectories or a smaller L1)");
  const double dN = static_cast<double>(N);
  e.mean_dist = std::accumulate(X.begin(), X.end(), 0.0) / dN;
  e.mean_time = std::accumulate(Y.begin(), Y.end(), 0.0) / dN;
  const double v = e.mean_dist / e.mean_time;

  std::vector<double> D(N), D2(N), G(N);
  for (std::size_t i = 0; i < N; ++i) {
    D[i] = X[i] - v * Y[i];
    D2[i] = D[i] * D[i];
  }
  const double s2 = std::accumulate(D2.begin(), D2.end(), 0.0) / dN / e.mean_time;
  for (std::size_t i = 0; i < N; ++i) G[i] = D2[i] - s2 * Y[i];
  e.v = {v, sample_sd(D) / (std::sqrt(dN) * e.mean_time)};
  e.sigma2 = {s2, sample_sd(G) / (std::sqrt(dN) * e.mean_time)};

  double vx = 0, vy = 0;
  for (std::size_t i = 0; i < N; ++i) {
    vx += (X[i] - e.mean_dist) * (X[i] - e.mean_dist);
    vy += (Y[i] - e.mean_time) * (Y[i] - e.mean_time);
  }
  vx /= dN;
  vy /= dN;
  for (auto [i, j] : pairs) {
    lag_x += (X[i] - e.mean_dist) * (X[j] - e.mean_dist);
    lag_y += (Y[i] - e.mean_time) * (Y[j] - e.mean_time);
  }
  if (!pairs.empty()) {
    const double P = static_cast<double>(pairs.size());
    e.lag1_dist = vx > 0 ? lag_x / P / vx : 0;
    e.lag1_time = vy > 0 ? lag_y / P / vy : 0;
    e.lag1_se = 1 / std::sqrt(P);
  }
  std::vector<long> times(Y.size());
  std::transform(Y.begin(), Y.end(), times.begin(), [](double y) { return static_cast<long>(y); });
  e.tail = tail_fit(times);
  return e;
}

Estimate direct_speed(const std::vector<Trajectory>& ts) {
  if (ts.empty()) throw EstimationError("no trajectories");
  std::vector<double> r;
  for (const auto& t : ts) {
    if (t.steps() == 0) throw EstimationError("trajectory of length 0");
    r.push_back(static_cast<double>(t.lengths.back()) / static_cast<double>(t.steps()));
  }
  const double m = std::accumulate(r.begin(), r.end(), 0.0) / static_cast<double>(r.size());
  return {m, r.size() > 1 ? sample_sd(r) / std::sqrt(static_cast<double>(r.size())) : 0.0};
}

TailFit tail_fit(const std::vector<long>& increments, std::size_t min_count) {
  TailFit f;
  if (increments.empty()) return f;
  auto sorted = increments;
  std::sort(sorted.begin(), sorted.end());
  const double N = static_cast<double>(sorted.size());
  std::vector<double> xs, ys;
  for (long t = 0; t <= sorted.back(); ++t) {
    const auto above = static_cast<std::size_t>(sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), t));
    if (above < min_count) break;
    xs.push_back(static_cast<double>(t));
    ys.push_back(std::log(static_cast<double>(above) / N));
  }
  f.points = xs.size();
  if (xs.size() < 3) return f;
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0 ? sxy * sxy / (sxx * syy) : 1.0;
  return f;
}

double kolmogorov_q(double lambda) {
  if (lambda <= 0) return 1;
  double sum = 0;
  if (lambda < 1.18) {
    // the theta-function form converges fast for small lambda
    const double pi = std::acos(-1.0);
    const double c = pi * pi / (8 * lambda * lambda);
    for (int k = 1; k <= 20; ++k) sum += std::exp(-(2 * k - 1) * (2 * k - 1) * c);
    return std::clamp(1 - std::sqrt(2 * pi) / lambda * sum, 0.0, 1.0);
  }
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 ? 2 : -2) * term;
    if (term < 1e-300) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

KsResult ks_normal(std::vector<double> z) {
  if (z.empty()) throw EstimationError("empty sample");
  std::sort(z.begin(), z.end());
  const double n = static_cast<double>(z.size());
  double d = 0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double F = normal_cdf(z[i]);
    d = std::max({d, (static_cast<double>(i) + 1) / n - F, F - static_cast<double>(i) / n});
  }
  const double sn = std::sqrt(n);
  return {d, kolmogorov_q((sn + 0.12 + 0.11 / sn) * d)};
}

CltReport clt_check(const std::vector<double>& z) {
  CltReport r;
  r.samples = z.size();
  if (z.size() < 2) throw EstimationError("need at least two endpoints");
  const double n = static_cast<double>(z.size());
  r.mean = std::accumulate(z.begin(), z.end(), 0.0) / n;
  double m2 = 0, m3 = 0, m4 = 0;
  for (double x : z) {
    const double d = x - r.mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  r.variance = m2 * n / (n - 1);
  r.skew = m2 > 0 ? m3 / std::pow(m2, 1.5) : 0;
  r.excess_kurtosis = m2 > 0 ? m4 / (m2 * m2) - 3 : 0;
  r.ks = ks_normal(z);
  return r;
}

CltReport clt_check(const std::vector<Trajectory>& ts, double v, double sigma2) {
  if (!(sigma2 > 0)) throw EstimationError("sigma2 must be positive for the normal check");
  if (ts.empty()) throw EstimationError("no trajectories");
  const std::size_t n = ts.front().steps();
  std::vector<double> z;
  for (const auto& t : ts) {
    if (t.steps() != n) throw EstimationError("trajectories have different horizons");
    z.push_back((t.lengths.back() - static_cast<double>(n) * v) / std::sqrt(static_cast<double>(n) * sigma2));
  }
  auto r = clt_check(z);
  r.n = n;
  r.v = v;
  r.sigma2 = sigma2;
  return r;
}

nlohmann::json to_json(const TailFit& t) {
  return {{"slope", t.slope}, {"intercept", t.intercept}, {"r2", t.r2}, {"points", t.points}};
}

nlohmann::json to_json(const Estimates& e) {
  return {{"pooling", e.pooling == Pooling::StoppingTime ? "stopping_time" : "all_complete"},
          {"v_hat", e.v.value},
          {"v_se", e.v.se},
          {"sigma2_hat", e.sigma2.value},
          {"sigma2_se", e.sigma2.se},
          {"n_renewals", e.n_renewals},
          {"n_increments", e.n_increments},
          {"mean_dist_increment", e.mean_dist},
          {"mean_time_increment", e.mean_time},
          {"lag1_dist", e.lag1_dist},
          {"lag1_time", e.lag1_time},
          {"lag1_se", e.lag1_se},
          {"tail_fit", to_json(e.tail)}};
}

nlohmann::json to_json(const CltReport& r) {
  return {{"samples", r.samples},     {"n", r.n},
          {"v", r.v},                 {"sigma2", r.sigma2},
          {"ks_stat", r.ks.stat},     {"ks_p", r.ks.p},
          {"mean", r.mean},           {"variance", r.variance},
          {"skew", r.skew},           {"excess_kurtosis", r.excess_kurtosis}};
}

}  // namespace coxwalk
