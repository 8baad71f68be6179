#pragma once

// Simulation of the retracted walk on W by per-letter gallery sampling.

#include "coxwalk/automaton.hpp"
#include "coxwalk/hecke.hpp"
#include "coxwalk/rng.hpp"

#include <iosfwd>
#include <memory>

namespace coxwalk {

// One letter of a step.  index >= 0 is the position removed from the word by a
// length-decreasing move.
struct Move {
  static constexpr int kAscent = -1;
  static constexpr int kStay = -2;
  int letter;
  int index;
};

// Positions are not stored; they are replayed from the moves.
struct Trajectory {
  std::vector<int> lengths;      // l(u_k), k = 0..n
  std::vector<int> cone_types;   // T(u_k)
  std::vector<Move> moves;       // letters of all steps, in order
  std::vector<std::uint32_t> step_end;  // moves of step k are [step_end[k-1], step_end[k]), step_end[0] = 0
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  std::size_t steps() const { return lengths.size() - 1; }
};

// Index of the letter that disappears when w (reduced) is multiplied by s on
// the right, given that s is a right descent of w.
int deletion_index(const CoxeterSystem& W, const Word& w, int s);

// Reduced word of the current position with the automaton state of every prefix.
class Walker {
 public:
  Walker(const CoxeterSystem& W, const CannonAutomaton& a, const Word& start = {});

  bool is_ascent(int s) const { return a_->next[states_.back()][s] >= 0; }
  void ascend(int s);
  // Returns the removed index.
  int descend(int s);
  void remove(int index);

  const Word& word() const { return word_; }
  int cone_type() const { return states_.back(); }
  int length() const { return static_cast<int>(word_.size()); }

 private:
  const CoxeterSystem* W_;
  const CannonAutomaton* a_;
  Word word_;
  std::vector<int> states_;
};

// Forward replay of a trajectory's positions.
class Replay {
 public:
  explicit Replay(const Trajectory& t) : t_(&t) {}
  const Word& word() const { return word_; }
  std::size_t time() const { return k_; }
  // Applies the next step; false at the end.
  bool advance();

 private:
  const Trajectory* t_;
  Word word_;
  std::size_t k_ = 0;
};

Word position(const Trajectory& t, std::size_t k);

class Simulator {
 public:
  Simulator(BuildingSpec b, WalkSpec walk);

  const CoxeterSystem& system() const { return b_.system; }
  const BuildingSpec& building() const { return b_; }
  const WalkSpec& walk() const { return walk_; }
  const CannonAutomaton& automaton() const { return *a_; }

  Walker walker(const Word& start = {}) const { return Walker(b_.system, *a_, start); }
  // Index into walk().steps, drawn with probability p_w.
  std::size_t sample_step(Philox4x32& rng) const;
  // The step chosen by the draw U / 2^53; near a cumulative boundary the
  // decision is made with exact rationals.
  std::size_t select_step(std::uint64_t U) const;
  // One step of the walk; the letters' moves are appended to `moves` if given.
  void step(Walker& w, Philox4x32& rng, std::vector<Move>* moves = nullptr) const;

  Trajectory simulate(std::size_t n, std::uint64_t seed, std::uint64_t stream) const;
  // Trajectory i uses stream i; threads = 0 picks the hardware concurrency.
  std::vector<Trajectory> batch_simulate(std::size_t M, std::size_t n, std::uint64_t seed, unsigned threads = 0) const;

 private:
  BuildingSpec b_;
  WalkSpec walk_;
  std::shared_ptr<const CannonAutomaton> a_;
  std::vector<double> cum_;
  std::vector<Rat> cum_exact_;
};

// Columns step,length,cone_type and optionally word.
void write_csv(std::ostream& out, const CoxeterSystem& W, const Trajectory& t, bool words);

}  // namespace coxwalk
