#include <doctest.h>

#include "coxwalk/cones.hpp"
#include "coxwalk/renewal.hpp"

#include <map>
#include <numeric>
#include <optional>

using namespace coxwalk;

namespace {

BuildingSpec uniform(CoxeterSystem W, int q) {
  std::vector<int> qs(W.rank(), q);
  return {std::move(W), qs};
}

// Renewal times straight from the definition, with elements compared by
// matrices and depths found by breadth-first search.
struct Brute {
  static constexpr int kMaxL1 = 3;
  const CoxeterSystem& W;
  const Trajectory& t;
  std::vector<GroupElement> x;
  std::map<std::pair<std::size_t, std::size_t>, std::optional<int>> depth;  // capped at kMaxL1

  Brute(const CoxeterSystem& W_, const Trajectory& t_) : W(W_), t(t_) {
    Replay r(t);
    x.push_back(W.word_to_element(r.word()));
    while (r.advance()) x.push_back(W.word_to_element(r.word()));
  }

  bool deep(std::size_t k, std::size_t j, int L1) {
    auto it = depth.find({k, j});
    if (it == depth.end()) it = depth.emplace(std::pair{k, j}, boundary_depth(W, x[k], x[j], kMaxL1)).first;
    return !it->second || *it->second > L1;
  }

  std::vector<std::size_t> renewals(const RenewalConfig& cfg) {
    REQUIRE(cfg.L1 <= kMaxL1);
    const std::size_t n = t.steps();
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k + cfg.tail_buffer <= n; ++k) {
      if (t.cone_types[k] != cfg.cone_type) continue;
      bool ok = true;
      for (std::size_t j = k; j <= n && ok; ++j) ok = in_cone(W, x[k], x[j]);
      if (!ok) continue;
      std::size_t j0 = k;
      if (cfg.mode == RenewalMode::PaperPrefix) {
        const auto& pi = cfg.prefix_path;
        if (k + pi.size() > n) continue;
        for (std::size_t i = 1; i <= pi.size() && ok; ++i) {
          Word p(pi.begin(), pi.begin() + i);
          ok = W.equals(x[k + i], W.multiply(x[k], W.word_to_element(p)));
        }
        if (!ok) continue;
        j0 = k + pi.size();
      } else {
        while (j0 <= n && !deep(k, j0, cfg.L1)) ++j0;
        if (j0 > n) continue;
      }
      for (std::size_t j = j0; j <= n && ok; ++j) ok = deep(k, j, cfg.L1);
      if (ok) out.push_back(k);
    }
    return out;
  }
};

int most_visited_recurrent(const CannonAutomaton& a, const Trajectory& t) {
  std::vector<int> c(a.size(), 0);
  for (int s : t.cone_types)
    if (a.recurrent[s]) ++c[s];
  return static_cast<int>(std::max_element(c.begin(), c.end()) - c.begin());
}

}  // namespace

TEST_CASE("modes") {
  CHECK(parse_mode("enter_and_stay") == RenewalMode::EnterAndStay);
  CHECK(parse_mode("paper_prefix") == RenewalMode::PaperPrefix);
  CHECK_THROWS_AS(parse_mode("prefix"), ValidationError);
  CHECK(to_string(RenewalMode::PaperPrefix) == "paper_prefix");
}

TEST_CASE("default L1 and validation") {
  auto W = CoxeterSystem::triangle(4, 3, 3);
  Simulator sim(uniform(W, 2), nearest_neighbour_walk(W));
  CHECK(default_L1(W, sim.walk()) == 9);
  CHECK(default_L1(CoxeterSystem::polygon({2, 2, 2, 2, 2}), nearest_neighbour_walk(CoxeterSystem::polygon({2, 2, 2, 2, 2}))) == 5);
  const auto& a = sim.automaton();
  int rec = -1;
  for (std::size_t s = 0; s < a.size(); ++s)
    if (a.recurrent[s]) rec = static_cast<int>(s);
  REQUIRE(rec >= 0);
  RenewalConfig cfg{rec, 1};
  CHECK_NOTHROW(validate(cfg, a, sim.walk(), 100));
  CHECK_THROWS_AS(validate(RenewalConfig{a.start, 1}, a, sim.walk(), 100), ValidationError);
  CHECK_THROWS_AS(validate(RenewalConfig{static_cast<int>(a.size()), 1}, a, sim.walk(), 100), ValidationError);
  CHECK_THROWS_AS(validate(RenewalConfig{rec, 0}, a, sim.walk(), 100), ValidationError);
  auto buf = cfg;
  buf.tail_buffer = 100;
  CHECK_THROWS_AS(validate(buf, a, sim.walk(), 100), ValidationError);
  auto pre = cfg;
  pre.mode = RenewalMode::PaperPrefix;
  CHECK_THROWS_AS(validate(pre, a, sim.walk(), 100), ValidationError);
  pre.prefix_path = find_deep_subcone(W, a, rec, 1, 2).path;
  CHECK_NOTHROW(validate(pre, a, sim.walk(), 100));
}

TEST_CASE("renewals agree with the brute-force definition") {
  struct Case {
    CoxeterSystem W;
    int q;
  };
  std::vector<Case> cases{{CoxeterSystem::triangle(4, 3, 3), 2},
                          {CoxeterSystem::triangle(4, 3, 3), 3},
                          {CoxeterSystem::triangle(4, 4, 2), 2},
                          {CoxeterSystem::polygon({2, 2, 2, 2, 2}), 2}};
  int total = 0;
  for (const auto& cs : cases) {
    Simulator sim(uniform(cs.W, cs.q), nearest_neighbour_walk(cs.W));
    const auto& W = sim.system();
    const auto& a = sim.automaton();
    for (std::uint64_t stream = 0; stream < 3; ++stream) {
      auto t = sim.simulate(60, 31, stream);
      Brute brute(W, t);
      const int T = most_visited_recurrent(a, t);
      for (int L1 : {1, 2, 3}) {
        RenewalConfig cfg{T, L1, RenewalMode::EnterAndStay, stream % 2 ? std::size_t{5} : std::size_t{0}, {}};
        auto got = extract_renewals(W, a, t, cfg);
        auto want = brute.renewals(cfg);
        INFO("L1 " << L1 << " stream " << stream);
        CHECK(got.times == want);
        total += static_cast<int>(want.size());
        if (L1 == 3) continue;
        cfg.mode = RenewalMode::PaperPrefix;
        cfg.prefix_path = find_deep_subcone(W, a, T, L1, 2).path;
        CHECK(extract_renewals(W, a, t, cfg).times == brute.renewals(cfg));
      }
    }
  }
  CHECK(total > 50);
}

TEST_CASE("renewal series structure") {
  auto W = CoxeterSystem::triangle(4, 3, 3);
  Simulator sim(uniform(W, 2), nearest_neighbour_walk(W));
  const auto& a = sim.automaton();
  auto t = sim.simulate(3000, 5, 0);
  const int T = most_visited_recurrent(a, t);
  auto s = extract_renewals(W, a, t, {T, 3});
  REQUIRE(s.times.size() > 20);
  CHECK(s.diagnostic.empty());
  CHECK(std::accumulate(s.increments_time.begin(), s.increments_time.end(), 0L) == static_cast<long>(s.times.back()));
  CHECK(std::accumulate(s.increments_dist.begin(), s.increments_dist.end(), 0L) == s.root_lengths.back());
  auto final_word = position(t, t.steps());
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    CHECK(t.cone_types[s.times[i]] == T);
    CHECK(s.root_lengths[i] == t.lengths[s.times[i]]);
    if (i > 0) {
      CHECK(s.times[i] > s.times[i - 1]);
      CHECK(s.increments_dist[i] >= 0);  // 0 when the walk stood still
      // later roots lie in the earlier cones
      CHECK(in_cone(W, W.word_to_element(position(t, s.times[i - 1])), W.word_to_element(position(t, s.times[i]))));
    }
  }
  CHECK(in_cone(W, W.word_to_element(position(t, s.times.back())), W.word_to_element(final_word)));

  auto none = extract_renewals(W, a, sim.simulate(3, 5, 0), {T, 3});
  CHECK(none.times.empty());
  CHECK_FALSE(none.diagnostic.empty());
}

TEST_CASE("prefix too shallow is refused") {
  auto W = CoxeterSystem::triangle(4, 3, 3);
  Simulator sim(uniform(W, 2), nearest_neighbour_walk(W));
  const auto& a = sim.automaton();
  auto t = sim.simulate(50, 1, 0);
  const int T = most_visited_recurrent(a, t);
  auto path = find_deep_subcone(W, a, T, 1, 2).path;
  RenewalConfig cfg{T, 40, RenewalMode::PaperPrefix, 0, path};
  CHECK_THROWS_AS(extract_renewals(W, a, t, cfg), ValidationError);
}
