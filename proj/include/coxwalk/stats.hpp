#pragma once

// Speed and variance estimators from renewal increments, the endpoint speed
// estimator, and the normal-approximation check on trajectory endpoints.

#include "coxwalk/renewal.hpp"

#include <json.hpp>
#include <stdexcept>

namespace coxwalk {

struct EstimationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Estimate {
  double value = 0;
  double se = 0;
};

// Least-squares line through (t, log P(R_{i+1} - R_i > t)).
struct TailFit {
  double slope = 0;
  double intercept = 0;
  double r2 = 0;
  std::size_t points = 0;
};

// Which increments R_{i+1} - R_i (i >= 1; the first one, from time 0, has
// another law) enter the pooled means.
//  StoppingTime: those with R_i <= horizon - 2 tail_buffer.  The count is then a
//    stopping time, so the pooled sums are unbiased up to increments longer than
//    tail_buffer that finish undetected.
//  AllComplete: every observed increment.  Increments that fit before the
//    detection limit are biased short, which biases v by O(1/horizon).
enum class Pooling { StoppingTime, AllComplete };

struct Estimates {
  Pooling pooling = Pooling::StoppingTime;
  Estimate v;
  Estimate sigma2;
  std::size_t n_renewals = 0;   // all renewals in all series
  std::size_t n_increments = 0;  // pooled, i >= 2 only
  double mean_dist = 0;
  double mean_time = 0;
  double lag1_dist = 0;  // autocorrelation of consecutive increments
  double lag1_time = 0;
  double lag1_se = 0;    // 1/sqrt(pairs)
  TailFit tail;
};

// Throws EstimationError with fewer than 10 pooled increments.
Estimates estimate(const std::vector<RenewalSeries>& series, Pooling pooling = Pooling::StoppingTime);

// Mean of l(X_n)/n with its batch standard error.
Estimate direct_speed(const std::vector<Trajectory>& ts);

// Fits the log-survival of the time increments over every t that at least
// `min_count` increments exceed.
TailFit tail_fit(const std::vector<long>& increments, std::size_t min_count = 10);

struct KsResult {
  double stat = 0;
  double p = 0;
};

// One-sample Kolmogorov-Smirnov test against the standard normal; the
// p-value is the asymptotic one with Stephens' small-sample correction.
KsResult ks_normal(std::vector<double> z);
double kolmogorov_q(double lambda);

struct CltReport {
  std::size_t samples = 0;
  std::size_t n = 0;
  double v = 0;
  double sigma2 = 0;
  KsResult ks;
  double mean = 0;
  double variance = 0;
  double skew = 0;
  double excess_kurtosis = 0;
};

// Z_m = (l(X_n) - n v) / sqrt(n sigma2) over the batch.  Throws
// EstimationError unless sigma2 > 0.
CltReport clt_check(const std::vector<Trajectory>& ts, double v, double sigma2);
CltReport clt_check(const std::vector<double>& z);

nlohmann::json to_json(const Estimates& e);
nlohmann::json to_json(const CltReport& r);
nlohmann::json to_json(const TailFit& t);

}  // namespace coxwalk
