#include "coxwalk/sim.hpp"

#include <algorithm>
#include <atomic>
#include <ostream>
#include <thread>

namespace coxwalk {

namespace {

bool is_simple_root(const Root& r, int t, const FieldScalar& one) {
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (static_cast<int>(i) == t) {
      if (!(r[i] == one)) return false;
    } else if (!r[i].is_zero()) {
      return false;
    }
  }
  return true;
}

}  // namespace

int deletion_index(const CoxeterSystem& W, const Word& w, int s) {
  // s_{j+1} ... s_k applied to alpha_s until it becomes alpha_{s_j}
  const auto one = W.field().one();
  Root g = W.simple_root(s);
  for (int j = static_cast<int>(w.size()) - 1; j >= 0; --j) {
    if (is_simple_root(g, w[j], one)) return j;
    W.reflect_in_place(w[j], g);
  }
  throw std::logic_error("deletion_index: letter is not a right descent");
}

Walker::Walker(const CoxeterSystem& W, const CannonAutomaton& a, const Word& start) : W_(&W), a_(&a) {
  states_.push_back(a.start);
  for (int s : start) {
    int q = a.next[states_.back()][s];
    if (q < 0) throw std::invalid_argument("start word " + W.format_word(start) + " is not reduced");
    word_.push_back(s);
    states_.push_back(q);
  }
}

void Walker::ascend(int s) {
  states_.push_back(a_->next[states_.back()][s]);
  word_.push_back(s);
}

int Walker::descend(int s) {
  const int i = deletion_index(*W_, word_, s);
  remove(i);
  return i;
}

void Walker::remove(int index) {
  word_.erase(word_.begin() + index);
  states_.resize(index + 1);
  for (std::size_t j = index; j < word_.size(); ++j) states_.push_back(a_->next[states_.back()][word_[j]]);
}

bool Replay::advance() {
  if (k_ >= t_->steps()) return false;
  for (std::uint32_t i = t_->step_end[k_]; i < t_->step_end[k_ + 1]; ++i) {
    const auto& m = t_->moves[i];
    if (m.index == Move::kAscent)
      word_.push_back(m.letter);
    else if (m.index >= 0)
      word_.erase(word_.begin() + m.index);
  }
  ++k_;
  return true;
}

Word position(const Trajectory& t, std::size_t k) {
  Replay r(t);
  while (r.time() < k && r.advance()) {
  }
  return r.word();
}

Simulator::Simulator(BuildingSpec b, WalkSpec walk)
    : b_(std::move(b)), walk_(std::move(walk)), a_(std::make_shared<CannonAutomaton>(build_cannon(b_.system))) {
  Rat acc = 0;
  for (const auto& st : walk_.steps) {
    acc += st.p;
    cum_exact_.push_back(acc);
    cum_.push_back(acc.get_d());
  }
}

std::size_t Simulator::sample_step(Philox4x32& rng) const { return select_step(rng.next_u53()); }

std::size_t Simulator::select_step(std::uint64_t U) const {
  const double u = static_cast<double>(U) * 0x1p-53;
  std::size_t j = std::upper_bound(cum_.begin(), cum_.end(), u) - cum_.begin();
  constexpr double guard = 0x1p-40;
  const bool near = (j < cum_.size() && cum_[j] - u < guard) || (j > 0 && u - cum_[j - 1] < guard);
  if (near || j >= cum_.size()) {
    Int num;
    mpz_import(num.get_mpz_t(), 1, 1, sizeof(U), 0, 0, &U);
    Int den = 1;
    den <<= 53;
    const Rat x(num, den);
    j = std::upper_bound(cum_exact_.begin(), cum_exact_.end(), x) - cum_exact_.begin();
  }
  return j;
}

void Simulator::step(Walker& w, Philox4x32& rng, std::vector<Move>* moves) const {
  const auto& st = walk_.steps[sample_step(rng)];
  for (int s : st.word) {
    if (w.is_ascent(s)) {
      w.ascend(s);
      if (moves) moves->push_back({s, Move::kAscent});
    } else if (rng.below(static_cast<std::uint64_t>(b_.q[s])) == 0) {
      const int i = w.descend(s);
      if (moves) moves->push_back({s, i});
    } else if (moves) {
      moves->push_back({s, Move::kStay});
    }
  }
}

Trajectory Simulator::simulate(std::size_t n, std::uint64_t seed, std::uint64_t stream) const {
  Philox4x32 rng(seed, stream);
  Trajectory t;
  t.seed = seed;
  t.stream = stream;
  t.lengths.reserve(n + 1);
  t.cone_types.reserve(n + 1);
  t.step_end.reserve(n + 1);
  t.moves.reserve(n * static_cast<std::size_t>(std::max(walk_.L0, 1)));
  auto w = walker();
  t.lengths.push_back(0);
  t.cone_types.push_back(w.cone_type());
  t.step_end.push_back(0);
  for (std::size_t k = 0; k < n; ++k) {
    step(w, rng, &t.moves);
    t.lengths.push_back(w.length());
    t.cone_types.push_back(w.cone_type());
    t.step_end.push_back(static_cast<std::uint32_t>(t.moves.size()));
  }
  return t;
}

std::vector<Trajectory> Simulator::batch_simulate(std::size_t M, std::size_t n, std::uint64_t seed,
                                                  unsigned threads) const {
  std::vector<Trajectory> out(M);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(M, 1)));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next++) < M;) out[i] = simulate(n, seed, i);
  };
  if (threads <= 1) {
    work();
    return out;
  }
  std::vector<std::thread> pool;
  for (unsigned k = 0; k < threads; ++k) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  return out;
}

void write_csv(std::ostream& out, const CoxeterSystem& W, const Trajectory& t, bool words) {
  out << "step,length,cone_type" << (words ? ",word" : "") << "\n";
  Replay r(t);
  for (std::size_t k = 0; k <= t.steps(); ++k) {
    if (k > 0) r.advance();
    out << k << ',' << t.lengths[k] << ',' << t.cone_types[k];
    if (words) out << ',' << W.format_word(r.word());
    out << '\n';
  }
}

}  // namespace coxwalk
