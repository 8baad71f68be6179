#pragma once

#include "coxwalk/coxeter.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace coxwalk {

struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The finite set E of minimal (elementary) roots.  Simple roots come first, so
// index s is alpha_s.  step[i][s] is the index of sigma_s(beta_i) when that root
// is again minimal, kNegative when beta_i = alpha_s, kLeaves when it is not.
struct MinimalRoots {
  static constexpr int kNegative = -1;
  static constexpr int kLeaves = -2;
  std::vector<Root> roots;
  std::vector<std::vector<int>> step;
};

MinimalRoots build_minimal_roots(const CoxeterSystem& W, std::size_t cap = 20000);

// DFA whose state after reading a reduced word w is E intersected with the
// positive roots made negative by w^-1.
struct GeodesicDFA {
  int start = 0;
  std::vector<std::vector<int>> next;     // -1: no transition
  std::vector<std::vector<int>> payload;  // sorted minimal-root indices
};

GeodesicDFA build_geodesic_dfa(const CoxeterSystem& W, const MinimalRoots& E,
                               std::size_t cap = 200000);

struct CannonAutomaton {
  std::size_t rank = 0;
  int start = 0;
  std::vector<std::vector<int>> next;  // cone type x generator -> cone type, -1 if not an ascent
  std::vector<Word> representative;
  std::vector<bool> recurrent;
  std::vector<int> scc;  // component of the recurrent subgraph, -1 for transient types
  int num_scc = 0;
  // Minimal roots of one DFA state in the class (generic construction only);
  // T(w) is the set of v with v^-1(beta) > 0 for every listed beta.
  std::vector<std::vector<int>> payload;
  std::vector<Root> roots;

  std::size_t size() const { return next.size(); }
  std::size_t recurrent_count() const;
  // State reached by reading w from the start, or -1 if w is not reduced.
  int run(const Word& w, int from = -1) const;
};

// Fills representatives (ShortLex-least shortest words, unless already set),
// recurrence flags and components.
void finalize_automaton(CannonAutomaton& a);

// Nerode classes of the accepted language, numbered in BFS order from the start.
CannonAutomaton minimize(const GeodesicDFA& dfa, std::size_t rank);
CannonAutomaton build_cannon(const CoxeterSystem& W);

struct Connectivity {
  bool strongly_connected = false;
  std::optional<std::pair<int, int>> witness;  // recurrent a, b with no path a -> b
};

Connectivity is_strongly_connected(const CannonAutomaton& a);
bool reachable(const CannonAutomaton& a, int from, int to);
// Labelled-digraph isomorphism respecting start states; returns the state map.
std::optional<std::vector<int>> isomorphism(const CannonAutomaton& a, const CannonAutomaton& b);

int cone_type_of(const CannonAutomaton& a, const Word& reduced_word);
// Number of accepted words of each length 0..n (transfer-matrix count).
std::vector<std::uint64_t> sphere_counts(const CannonAutomaton& a, int n);

// DFA accepting exactly the ShortLex normal forms.  Payload is the sorted list
// of minimal-root indices for the descent set, then -1, then the roots whose
// arrival at a simple root alpha_s would let a smaller letter move left.
GeodesicDFA build_shortlex_dfa(const CoxeterSystem& W, const MinimalRoots& E,
                               std::size_t cap = 500000);
// Sphere sizes |S(1,k)|, k = 0..n, counted through the ShortLex DFA.
std::vector<std::uint64_t> growth_counts(const CoxeterSystem& W, int n);

std::string to_dot(const CoxeterSystem& W, const CannonAutomaton& a, const std::string& name);
std::string to_json(const CoxeterSystem& W, const CannonAutomaton& a);

}  // namespace coxwalk
