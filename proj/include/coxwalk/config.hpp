#pragma once

// Plain-text experiment configuration: one "key = value" per line, '#' starts
// a comment.  Probabilities are exact "num/den" (or integer) literals; "inf"
// stands for an infinite Coxeter label.
//
//   triangle = 4 3 3          or  polygon = 2 2 2 2 2
//                             or  matrix = 1 4 2; 4 1 3; 2 3 1
//   generators = a b c        (optional labels, default 1..rank)
//   q = 2                     (one value for all generators, or one each)
//   walk = nn                 or one "step = <word> : <num/den>" line per step
//   horizon = 2000
//   trajectories = 1000
//   seed = 2024
//   cone_type = auto          (most visited recurrent type, or an id)
//   L1 = default
//   mode = enter_and_stay
//   tail_buffer = default     (20% of the horizon)
//   search_depth = 3          (paper_prefix certificate depth)
//   sources = e; 1; 12        (kernel rows; "e" is the identity)
//   steps = 10                (return probabilities)
//   threads = 0
//   words = no                (word column in trajectory CSV)

#include "coxwalk/renewal.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>

namespace coxwalk {

struct ExperimentConfig {
  std::optional<CoxeterSystem> system;
  std::vector<int> q;
  bool nearest_neighbour = true;
  std::vector<std::pair<Word, Rat>> steps;
  std::size_t horizon = 2000;
  std::size_t trajectories = 1000;
  std::uint64_t seed = 1;
  std::optional<int> cone_type;  // nullopt = auto
  std::optional<int> L1;         // nullopt = default_L1
  RenewalMode mode = RenewalMode::EnterAndStay;
  std::optional<std::size_t> tail_buffer;
  int search_depth = 3;
  std::vector<Word> sources;
  int return_steps = 10;
  unsigned threads = 0;
  bool words = false;
  // Every key as written, for echoing into outputs.
  std::map<std::string, std::string> raw;

  BuildingSpec building() const;
  WalkSpec walk() const;
  std::size_t effective_tail_buffer() const { return tail_buffer ? *tail_buffer : horizon / 5; }
};

// Exact rational from "num/den" or an integer; anything else (including
// decimals) throws ValidationError.
Rat parse_rational(const std::string& text);

// Throws ValidationError with the offending line.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

}  // namespace coxwalk
