#include <doctest.h>

#include "coxwalk/class_rules.hpp"

#include <set>

using namespace coxwalk;

namespace {

int type_of_element(const CoxeterSystem& W, const CannonAutomaton& a, const Word& w) {
  return cone_type_of(a, W.shortlex_nf(W.word_to_element(w)));
}

std::size_t listed_type_count(const CoxeterSystem& W, const CannonAutomaton& a, const RuleAutomaton& r) {
  std::set<int> t;
  for (const auto& w : r.listed_vertices) t.insert(cone_type_of(a, w));
  return t.size();
}

}  // namespace

TEST_CASE("class I and class IV rules reproduce the generic automaton") {
  for (auto W : {CoxeterSystem::triangle(4, 3, 3), CoxeterSystem::triangle(3, 3, 3), CoxeterSystem::triangle(5, 4, 3),
                 CoxeterSystem::triangle(3, 4, 5), CoxeterSystem::polygon({2, 2, 2, 2, 2}),
                 CoxeterSystem::polygon({3, 2, 4, 2}), CoxeterSystem::polygon({3, 3, 3, 3, 3, 3})}) {
    INFO(W.classify().describe());
    auto g = build_cannon(W);
    auto r = class_rule_automaton(W);
    CHECK(r.automaton.size() == g.size());
    CHECK(isomorphism(g, r.automaton).has_value());
    CHECK(r.notes.empty());
    CHECK(r.listed_vertices.size() == g.size());
    CHECK(listed_type_count(W, g, r) == g.size());
  }
}

TEST_CASE("every instantiated identity holds for the generic cone types") {
  for (auto W : {CoxeterSystem::triangle(4, 3, 3), CoxeterSystem::triangle(5, 4, 2), CoxeterSystem::triangle(4, 4, 2),
                 CoxeterSystem::triangle(6, 3, 2), CoxeterSystem::triangle(8, 3, 2), CoxeterSystem::triangle(7, 3, 2),
                 CoxeterSystem::polygon({2, 2, 2, 2, 2}), CoxeterSystem::polygon({3, 2, 4, 2})}) {
    INFO(W.classify().describe());
    auto g = build_cannon(W);
    for (const auto& rule : class_rules(W)) {
      INFO(rule.source);
      CHECK(type_of_element(W, g, rule.lhs) == type_of_element(W, g, rule.rhs));
    }
  }
}

TEST_CASE("class IV: appending u after W_st with m_us infinite") {
  auto W = CoxeterSystem::polygon({3, 2, 4, 2, 2});
  auto g = build_cannon(W);
  // s=0, t=1 (m=3), u=3 has m_us = m_tu = inf
  for (Word v : {Word{}, Word{0}, Word{1}, Word{0, 1}, Word{1, 0}, Word{0, 1, 0}}) {
    auto w = v;
    w.push_back(3);
    CHECK(cone_type_of(g, w) == cone_type_of(g, {3}));
  }
  // s=0, t=1, u=2: m_tu = 2 finite, m_us = inf
  CHECK(cone_type_of(g, {0, 2}) == cone_type_of(g, {2}));
  CHECK(cone_type_of(g, {0, 1, 2}) == cone_type_of(g, {1, 2}));
}

TEST_CASE("class II: rules close on the listed vertex set") {
  struct Case {
    std::array<int, 3> t;
    std::size_t generic;
  };
  for (auto c : {Case{{4, 4, 2}, 24}, Case{{5, 4, 2}, 25}, Case{{6, 4, 2}, 27}, Case{{5, 5, 2}, 26}}) {
    auto W = CoxeterSystem::triangle(c.t[0], c.t[1], c.t[2]);
    auto g = build_cannon(W);
    auto r = class_rule_automaton(W);
    const std::size_t a = c.t[0], b = c.t[1];
    CHECK(r.listed_vertices.size() == 2 * a + 2 * b + 8);
    CHECK(r.automaton.size() == r.listed_vertices.size());
    CHECK(g.size() == c.generic);
    CHECK(listed_type_count(W, g, r) == c.generic);
    CHECK(r.minimized_size == c.generic);
    GeodesicDFA d;
    d.next = r.automaton.next;
    CHECK(isomorphism(g, minimize(d, W.rank())).has_value());
    REQUIRE(r.claimed_vertices.has_value());
    CHECK(*r.claimed_vertices == a + b + 2 + 4);
  }
}

TEST_CASE("class III: printed rules carry a duplicate and do not close") {
  auto W = CoxeterSystem::triangle(8, 3, 2);
  auto rules = class_rules(W);
  std::size_t dup = 0;
  for (std::size_t i = 0; i < rules.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) dup += rules[i].lhs == rules[j].lhs && rules[i].rhs == rules[j].rhs;
  CHECK(dup == 1);
  CHECK_THROWS_AS(class_rule_automaton(W, 200), CapExceeded);
}

TEST_CASE("unsupported systems are rejected") {
  CHECK_THROWS_AS(class_rules(CoxeterSystem::triangle(3, 3, 2)), UnsupportedClass);
  CHECK_THROWS_AS(class_rules(CoxeterSystem::polygon({2, 2, 2, 2})), UnsupportedClass);
}
