#pragma once

// Cannon automata built from the explicit cone-type identities known for the
// Fuchsian classes I-IV (and the affine triangle groups sharing their shape).

#include "coxwalk/automaton.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace coxwalk {

struct UnsupportedClass : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// One identity T(lhs) = T(rhs) instantiated on concrete generators.
struct ConeRule {
  Word lhs;
  Word rhs;
  std::string source;  // printed form with the role letters
};

struct RuleAutomaton {
  CannonAutomaton automaton;
  std::vector<GroupElement> vertex_elements;
  std::vector<ConeRule> rules;
  // Duplicate rules, conflicting targets, non-reduced left sides.
  std::vector<std::string> notes;
  std::optional<std::size_t> claimed_vertices;
  // Size after merging vertices with identical futures.
  std::size_t minimized_size = 0;
  // Words of the listed vertex set, when one is stated for the class.
  std::vector<Word> listed_vertices;
};

std::vector<ConeRule> class_rules(const CoxeterSystem& W);

// Closure from the identity: every ascent w*r is mapped to an existing vertex,
// resolved through the rules, or becomes a new vertex.  Throws CapExceeded if
// the vertex count passes max_vertices (the rules do not close).
RuleAutomaton class_rule_automaton(const CoxeterSystem& W, std::size_t max_vertices = 400);

}  // namespace coxwalk
