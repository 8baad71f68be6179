#pragma once

// Renewal times of a simulated trajectory: times k where the walk sits at a
// root of the fixed recurrent cone type T and afterwards never leaves C(u_k),
// settling into its L1-interior.

#include "coxwalk/cones.hpp"
#include "coxwalk/sim.hpp"

#include <string>

namespace coxwalk {

enum class RenewalMode { EnterAndStay, PaperPrefix };

RenewalMode parse_mode(const std::string& s);
std::string to_string(RenewalMode m);

struct RenewalConfig {
  int cone_type = -1;
  int L1 = 0;
  RenewalMode mode = RenewalMode::EnterAndStay;
  std::size_t tail_buffer = 0;
  Word prefix_path;  // PaperPrefix only: the path pi from find_deep_subcone
};

// L0 + 2 max m_st over the finite labels.
int default_L1(const CoxeterSystem& W, const WalkSpec& walk);

// Throws ValidationError.
void validate(const RenewalConfig& cfg, const CannonAutomaton& a, const WalkSpec& walk, std::size_t horizon);

struct RenewalSeries {
  std::vector<std::size_t> times;   // R_1 < R_2 < ...
  std::vector<int> root_lengths;    // l(u_{R_i})
  // Entry i is R_{i+1} - R_i with R_0 = 0 and u_{R_0} = 1, so the sums
  // telescope to R_n and l(u_{R_n}).
  std::vector<long> increments_time;
  std::vector<long> increments_dist;
  std::size_t horizon = 0;
  std::size_t tail_buffer = 0;
  std::string diagnostic;  // set when no renewal was found
};

// Membership in C(u_k) is tracked letter by letter: u_k's word stays a prefix
// of the position's word until a length-decreasing move removes one of its
// first l(u_k) letters, which is exactly when the walk leaves C(u_k).
RenewalSeries extract_renewals(const CoxeterSystem& W, const CannonAutomaton& a, const Trajectory& t,
                               const RenewalConfig& cfg);
// Reuses depth computations across calls; the cache must match cfg.
RenewalSeries extract_renewals(const CoxeterSystem& W, const CannonAutomaton& a, const Trajectory& t,
                               const RenewalConfig& cfg, ConeDepthCache& depth);
// threads = 0 picks the hardware concurrency; each worker keeps its own cache.
std::vector<RenewalSeries> extract_renewals(const CoxeterSystem& W, const CannonAutomaton& a,
                                            const std::vector<Trajectory>& ts, const RenewalConfig& cfg,
                                            unsigned threads = 0);

}  // namespace coxwalk
