#include "coxwalk/renewal.hpp"

#include "coxwalk/cones.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <thread>

namespace coxwalk {

RenewalMode parse_mode(const std::string& s) {
  if (s == "enter_and_stay") return RenewalMode::EnterAndStay;
  if (s == "paper_prefix") return RenewalMode::PaperPrefix;
  throw ValidationError("unknown renewal mode '" + s + "' (expected enter_and_stay or paper_prefix)");
}

std::string to_string(RenewalMode m) { return m == RenewalMode::EnterAndStay ? "enter_and_stay" : "paper_prefix"; }

int default_L1(const CoxeterSystem& W, const WalkSpec& walk) {
  int mx = 0;
  for (std::size_t s = 0; s < W.rank(); ++s)
    for (std::size_t t = 0; t < W.rank(); ++t)
      if (s != t && W.m(s, t) != kInf) mx = std::max(mx, W.m(s, t));
  return walk.L0 + 2 * mx;
}

void validate(const RenewalConfig& cfg, const CannonAutomaton& a, const WalkSpec& walk, std::size_t horizon) {
  if (cfg.cone_type < 0 || cfg.cone_type >= static_cast<int>(a.size()))
    throw ValidationError("cone type " + std::to_string(cfg.cone_type) + " does not exist");
  if (!a.recurrent[cfg.cone_type]) throw ValidationError("cone type " + std::to_string(cfg.cone_type) + " is transient");
  if (cfg.L1 < walk.L0)
    throw ValidationError("L1 = " + std::to_string(cfg.L1) + " is below L0 = " + std::to_string(walk.L0));
  if (cfg.tail_buffer >= horizon) throw ValidationError("tail buffer must be shorter than the horizon");
  if (cfg.mode == RenewalMode::PaperPrefix) {
    if (cfg.prefix_path.empty()) throw ValidationError("paper_prefix mode needs a prefix path");
    if (a.run(cfg.prefix_path, cfg.cone_type) != cfg.cone_type)
      throw ValidationError("prefix path does not return to the cone type");
  }
}

namespace {

struct Candidate {
  std::size_t k;
  int m;  // l(u_k)
  bool entered = false;
  int d0 = 0;          // exact depth at the last check
  long moved0 = 0;     // letter moves at the last check
};

}  // namespace

RenewalSeries extract_renewals(const CoxeterSystem& W, const CannonAutomaton& a, const Trajectory& t,
                               const RenewalConfig& cfg) {
  ConeDepthCache depth(W, a, cfg.cone_type, cfg.L1 + 32);
  return extract_renewals(W, a, t, cfg, depth);
}

RenewalSeries extract_renewals(const CoxeterSystem& W, const CannonAutomaton& a, const Trajectory& t,
                               const RenewalConfig& cfg, ConeDepthCache& depth) {
  if (depth.type() != cfg.cone_type || depth.cap() != cfg.L1 + 32)
    throw std::invalid_argument("depth cache built for another cone type or L1");
  const std::size_t n = t.steps();
  const int T = cfg.cone_type;
  const int L1 = cfg.L1;
  const int cap = L1 + 32;
  const bool prefix_mode = cfg.mode == RenewalMode::PaperPrefix;
  const auto& pi = cfg.prefix_path;
  const std::size_t last = n >= cfg.tail_buffer ? n - cfg.tail_buffer : 0;
  if (prefix_mode && cone_depth(W, a, T, pi, cap) <= L1)
    throw ValidationError("prefix path does not reach the L1-interior of its cone");

  Word word;
  long moved = 0;
  std::vector<Candidate> alive;  // ordered by k; entered ones form a prefix
  std::size_t E = 0;

  auto exact = [&](Candidate& c) {
    Word z(word.begin() + c.m, word.end());
    c.d0 = depth(z);
    c.moved0 = moved;
    return c.d0;
  };
  auto lower = [&](const Candidate& c) { return c.d0 - (moved - c.moved0); };
  auto upper = [&](const Candidate& c) {
    return c.d0 >= cap ? std::numeric_limits<long>::max() : c.d0 + (moved - c.moved0);
  };

  for (std::size_t k = 0; k <= n; ++k) {
    if (k > 0) {
      int low = std::numeric_limits<int>::max();
      for (std::uint32_t i = t.step_end[k - 1]; i < t.step_end[k]; ++i) {
        const auto& mv = t.moves[i];
        if (mv.index == Move::kAscent) {
          word.push_back(mv.letter);
          ++moved;
        } else if (mv.index >= 0) {
          word.erase(word.begin() + mv.index);
          low = std::min(low, mv.index);
          ++moved;
        }
      }
      // a removed letter inside u_k's prefix means the walk left C(u_k)
      while (!alive.empty() && alive.back().m > low) alive.pop_back();
      E = std::min(E, alive.size());

      if (prefix_mode) {
        for (std::size_t idx = E; idx < alive.size();) {
          auto& c = alive[idx];
          const std::size_t j = k - c.k;
          bool ok = word.size() == c.m + j;
          if (ok && !std::equal(pi.begin(), pi.begin() + j, word.begin() + c.m)) {
            Word z(word.begin() + c.m, word.end()), p(pi.begin(), pi.begin() + j);
            ok = W.equals(W.word_to_element(z), W.word_to_element(p));
          }
          if (!ok) {
            alive.erase(alive.begin() + idx);
            continue;
          }
          if (j == pi.size()) {
            // older candidates finished their prefix earlier, so idx == E here
            c.entered = exact(c) > L1;
            if (!c.entered) {
              alive.erase(alive.begin() + idx);
              continue;
            }
            ++E;
          }
          ++idx;
        }
      }

      // Depths are nested along the alive chain (older cones contain newer
      // ones), so scanning from the newest candidate stops at the first one
      // known to be deep enough.
      for (std::size_t idx = alive.size(); idx-- > 0;) {
        auto& c = alive[idx];
        if (!c.entered) {
          if (prefix_mode || upper(c) <= L1 || exact(c) <= L1) continue;
          for (std::size_t j = E; j <= idx; ++j) alive[j].entered = true;
          E = idx + 1;
          break;
        }
        if (lower(c) > L1 || exact(c) > L1) break;
        alive.erase(alive.begin() + idx);
        --E;
      }
    }
    if (k <= last && t.cone_types[k] == T) {
      // u_k is at distance 1 from the complement, and L1 >= L0 >= 1
      Candidate c{k, static_cast<int>(word.size())};
      exact(c);
      alive.push_back(c);
    }
  }

  RenewalSeries out;
  out.horizon = n;
  out.tail_buffer = cfg.tail_buffer;
  long prev_t = 0, prev_l = 0;
  for (std::size_t i = 0; i < E; ++i) {
    const auto& c = alive[i];
    out.times.push_back(c.k);
    out.root_lengths.push_back(c.m);
    out.increments_time.push_back(static_cast<long>(c.k) - prev_t);
    out.increments_dist.push_back(c.m - prev_l);
    prev_t = static_cast<long>(c.k);
    prev_l = c.m;
  }
  if (out.times.empty())
    out.diagnostic = "no renewal found within " + std::to_string(n) + " steps; try a longer horizon or a smaller L1";
  return out;
}

std::vector<RenewalSeries> extract_renewals(const CoxeterSystem& W, const CannonAutomaton& a,
                                            const std::vector<Trajectory>& ts, const RenewalConfig& cfg,
                                            unsigned threads) {
  std::vector<RenewalSeries> out(ts.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(ts.size(), 1)));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    ConeDepthCache depth(W, a, cfg.cone_type, cfg.L1 + 32);
    for (std::size_t i; (i = next++) < ts.size();) out[i] = extract_renewals(W, a, ts[i], cfg, depth);
  };
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < threads; ++k) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  return out;
}

}  // namespace coxwalk
