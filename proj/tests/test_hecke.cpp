#include <doctest.h>

#include "coxwalk/automaton.hpp"
#include "coxwalk/cones.hpp"
#include "coxwalk/hecke.hpp"
#include "hecke_oracle.hpp"
#include "oracles.hpp"

#include <random>
#include <set>

using namespace coxwalk;

namespace {

BuildingSpec uniform(CoxeterSystem W, int q) {
  std::vector<int> qs(W.rank(), q);
  return {std::move(W), qs};
}

Rat coeff(const ElementMap& m, const CoxeterSystem& W, const GroupElement& g) {
  auto it = m.find(W.key(g));
  return it == m.end() ? Rat(0) : it->second.coeff;
}

Rat row_sum(const ElementMap& m) {
  Rat s = 0;
  for (const auto& [k, t] : m) s += t.coeff;
  return s;
}

}  // namespace

TEST_CASE("q_w is the product over a reduced word") {
  auto b = uniform(CoxeterSystem::triangle(4, 3, 3), 2);
  const auto& W = b.system;
  CHECK(q_of(b, W.identity()) == 1);
  CHECK(q_of(b, W.generator(1)) == 2);
  CHECK(q_of(b, W.word_to_element({0, 1, 0, 1})) == 16);
  BuildingSpec mixed{CoxeterSystem::triangle(4, 4, 2), {3, 5, 7}};
  CHECK(q_of(mixed, mixed.system.word_to_element({0, 1, 2})) == 105);
  // non-reduced input words still give q of the element
  CHECK(q_of(mixed, mixed.system.word_to_element({0, 1, 1})) == 3);
}

TEST_CASE("building parameter constraints") {
  CHECK(validate_building(uniform(CoxeterSystem::triangle(4, 3, 3), 2)).empty());
  CHECK_THROWS_AS(validate_building({CoxeterSystem::triangle(4, 3, 3), {2, 3, 3}}), ValidationError);
  CHECK_NOTHROW(validate_building({CoxeterSystem::triangle(6, 3, 2), {2, 8, 8}}));
  CHECK_THROWS_AS(validate_building({CoxeterSystem::triangle(6, 3, 2), {2, 3, 3}}), ValidationError);
  CHECK_THROWS_AS(validate_building({CoxeterSystem::triangle(8, 3, 2), {2, 2, 2}}), ValidationError);
  CHECK_NOTHROW(validate_building({CoxeterSystem::triangle(8, 2, 2), {2, 4, 4}}));
  CHECK_THROWS_AS(validate_building({CoxeterSystem::triangle(4, 3, 3), {2, 2}}), ValidationError);
  CHECK_THROWS_AS(validate_building({CoxeterSystem::triangle(4, 3, 3), {0, 2, 2}}), ValidationError);
  // thin and partly thin specs are not subject to the polygon constraints
  CHECK(validate_building(uniform(CoxeterSystem::triangle(8, 3, 2), 1)).empty());
  auto warn = validate_building({CoxeterSystem::triangle(7, 3, 2), {2, 2, 2}});
  CHECK(warn.empty());
  CHECK(validate_building({CoxeterSystem::triangle(7, 3, 2), {3, 2, 2}}).size() == 1);
  CHECK_THROWS_AS(validate_building({CoxeterSystem::triangle(7, 3, 2), {2, 2, 3}}), ValidationError);
  warn = validate_building({CoxeterSystem::triangle(5, 4, 2), {2, 3, 3}});
  CHECK(warn.size() == 1);
}

TEST_CASE("triangle feasibility") {
  CHECK_FALSE(triangle_feasibility(8, 6, 6).feasible);
  CHECK(triangle_feasibility(8, 6, 4).feasible);
  CHECK(triangle_feasibility(4, 4, 4).feasible);
  CHECK_FALSE(triangle_feasibility(8, 8, 8).feasible);
  CHECK_FALSE(triangle_feasibility(7, 3, 2).feasible);
  CHECK_THROWS_AS(triangle_feasibility(4, 3, 2), ValidationError);
  CHECK_THROWS_AS(triangle_feasibility(3, 4, 2), ValidationError);
  auto all = enumerate_triangles();
  CHECK(all.size() == 28);
  std::set<std::array<int, 3>> bad;
  for (const auto& t : all)
    if (!t.verdict.feasible) bad.insert(t.triple);
  CHECK(all.size() - bad.size() == 24);
  CHECK(bad == std::set<std::array<int, 3>>{{8, 3, 3}, {8, 6, 3}, {8, 6, 6}, {8, 8, 8}});
}

TEST_CASE("feasible triangles admit a valid thickness assignment") {
  // brute force over small q confirms the verdict on every admissible triple
  for (const auto& t : enumerate_triangles()) {
    auto W = CoxeterSystem::triangle(t.triple[0], t.triple[1], t.triple[2]);
    bool any = false;
    for (int a = 2; a <= 16 && !any; ++a)
      for (int b = 2; b <= 16 && !any; ++b)
        for (int c = 2; c <= 16 && !any; ++c) {
          try {
            validate_building({W, {a, b, c}});
            any = true;
          } catch (const ValidationError&) {
          }
        }
    INFO(t.triple[0] << "," << t.triple[1] << "," << t.triple[2]);
    CHECK(any == t.verdict.feasible);
  }
}

TEST_CASE("walk validation") {
  auto W = CoxeterSystem::triangle(4, 3, 3);
  auto nn = nearest_neighbour_walk(W);
  CHECK(nn.L0 == 1);
  CHECK(nn.steps.size() == 3);
  CHECK_THROWS_AS(make_walk(W, {{{0}, Rat(1, 2)}, {{1}, Rat(1, 3)}}), ValidationError);
  CHECK_THROWS_AS(make_walk(W, {{{0, 0}, Rat(1)}}), ValidationError);
  CHECK_THROWS_AS(make_walk(W, {{{0, 1, 0, 1}, Rat(1, 2)}, {{1, 0, 1, 0}, Rat(1, 2)}}), ValidationError);
  CHECK_THROWS_AS(make_walk(W, {{{}, Rat(1)}}), ValidationError);
  CHECK_THROWS_AS(make_walk(W, {{{0}, Rat(3, 2)}, {{1}, Rat(-1, 2)}}), ValidationError);
  auto w = make_walk(W, {{{1, 0}, Rat(1, 2)}, {{}, Rat(1, 2)}});
  CHECK(w.L0 == 2);
}

TEST_CASE("hecke products: quadratic relation and length-additive products") {
  auto b = uniform(CoxeterSystem::triangle(4, 3, 3), 2);
  const auto& W = b.system;
  auto s = W.generator(0);
  auto a = hecke_product(b, s, s);
  CHECK(a.size() == 2);
  CHECK(coeff(a, W, W.identity()) == Rat(1, 2));
  CHECK(coeff(a, W, s) == Rat(1, 2));
  auto u = W.word_to_element({0, 1}), v = W.word_to_element({2, 0});
  auto uv = hecke_product(b, u, v);
  CHECK(uv.size() == 1);
  CHECK(coeff(uv, W, W.multiply(u, v)) == 1);
  auto thin = uniform(CoxeterSystem::triangle(4, 3, 3), 1);
  auto x = W.word_to_element({0, 1, 0}), y = W.word_to_element({0, 2, 1});
  auto t = hecke_product(thin, x, y);
  CHECK(t.size() == 1);
  CHECK(coeff(t, W, W.multiply(x, y)) == 1);
}

TEST_CASE("hecke products agree with the left-action T-basis oracle") {
  for (auto b : {uniform(CoxeterSystem::triangle(4, 3, 3), 2), BuildingSpec{CoxeterSystem::triangle(4, 4, 2), {2, 3, 5}},
                 uniform(CoxeterSystem::polygon({2, 2, 2, 2, 2}), 3)}) {
    const auto& W = b.system;
    auto ball = oracle::bfs_ball(W, 3);
    for (std::size_t i = 0; i < ball.elements.size(); ++i)
      for (std::size_t j = 0; j < ball.elements.size(); ++j) {
        auto got = hecke_product(b, ball.elements[i], ball.elements[j]);
        auto want = oracle::alpha(W, b.q, ball.elements[i], ball.elements[j]);
        REQUIRE(got.size() == want.size());
        for (const auto& [k, t] : got) CHECK(want.at(k) == t.coeff);
      }
  }
}

TEST_CASE("hecke invariants: positivity, mass one, support bound, associativity") {
  auto b = uniform(CoxeterSystem::triangle(4, 3, 3), 2);
  const auto& W = b.system;
  auto ball = oracle::bfs_ball(W, 4);
  for (std::size_t i = 0; i < ball.elements.size(); ++i)
    for (std::size_t j = 0; j < ball.elements.size(); ++j) {
      const auto& u = ball.elements[i];
      const auto& v = ball.elements[j];
      auto a = hecke_product(b, u, v);
      Rat sum = 0;
      for (const auto& [k, t] : a) {
        CHECK(t.coeff > 0);
        sum += t.coeff;
        CHECK(W.length(W.multiply(W.inverse(u), t.element)) <= W.length(v));
      }
      CHECK(sum == 1);
    }
  std::mt19937 rng(11);
  std::uniform_int_distribution<std::size_t> pick(0, ball.elements.size() - 1);
  for (int trial = 0; trial < 60; ++trial) {
    const auto& u = ball.elements[pick(rng)];
    const auto& v = ball.elements[pick(rng)];
    const int s = static_cast<int>(rng() % 3);
    // (P_u P_v) P_s against P_u (P_v P_s)
    ElementMap left;
    for (const auto& [k, t] : hecke_product(b, u, v))
      for (const auto& [k2, t2] : hecke_product(b, t.element, W.generator(s))) {
        auto& slot = left[k2];
        if (slot.element.matrix.empty()) slot = {t2.element, 0};
        slot.coeff += t.coeff * t2.coeff;
      }
    ElementMap right;
    for (const auto& [k, t] : hecke_product(b, v, W.generator(s)))
      for (const auto& [k2, t2] : hecke_product(b, u, t.element)) {
        auto& slot = right[k2];
        if (slot.element.matrix.empty()) slot = {t2.element, 0};
        slot.coeff += t.coeff * t2.coeff;
      }
    REQUIRE(left.size() == right.size());
    for (const auto& [k, t] : left) CHECK(right.at(k).coeff == t.coeff);
  }
}

TEST_CASE("kernel rows: two computations, stochastic, thin degeneration") {
  for (auto W : {CoxeterSystem::triangle(4, 3, 3), CoxeterSystem::triangle(4, 4, 2), CoxeterSystem::triangle(6, 3, 2)}) {
    auto b = uniform(W, 2);
    auto thin = uniform(W, 1);
    auto walk = make_walk(W, {{{0}, Rat(1, 4)}, {{1}, Rat(1, 4)}, {{2}, Rat(1, 6)}, {{0, 1}, Rat(1, 6)}, {{2, 0}, Rat(1, 6)}});
    auto ball = oracle::bfs_ball(W, 3);
    for (const auto& u : ball.elements) {
      auto row = kernel_row(b, walk, u);
      CHECK(row_sum(row.entries) == 1);
      for (const auto& [k, t] : row.entries) CHECK(W.length(W.multiply(W.inverse(u), t.element)) <= 2);
      auto trow = kernel_row(thin, walk, u);
      ElementMap want;
      for (const auto& st : walk.steps) {
        auto v = W.multiply(u, st.element);
        want[W.key(v)] = {v, st.p};
      }
      REQUIRE(trow.entries.size() == want.size());
      for (const auto& [k, t] : want) CHECK(trow.entries.at(k).coeff == t.coeff);
    }
  }
}

TEST_CASE("kernel from the identity and from a generator") {
  auto b = uniform(CoxeterSystem::triangle(4, 3, 3), 2);
  const auto& W = b.system;
  auto nn = nearest_neighbour_walk(W);
  auto r1 = kernel_row(b, nn, W.identity());
  CHECK(r1.entries.size() == 3);
  for (int s = 0; s < 3; ++s) CHECK(coeff(r1.entries, W, W.generator(s)) == Rat(1, 3));
  // from s: the s-panel holds o, the current chamber and one more, each equally likely
  auto rs = kernel_row(b, nn, W.generator(0));
  CHECK(coeff(rs.entries, W, W.identity()) == Rat(1, 6));
  CHECK(coeff(rs.entries, W, W.generator(0)) == Rat(1, 6));
  CHECK(coeff(rs.entries, W, W.word_to_element({0, 1})) == Rat(1, 3));
}

TEST_CASE("cone invariance of the kernel") {
  auto b = uniform(CoxeterSystem::triangle(4, 3, 3), 2);
  const auto& W = b.system;
  auto a = build_cannon(W);
  auto nn = nearest_neighbour_walk(W);
  auto ball = oracle::bfs_ball(W, 5);
  std::map<int, std::vector<std::size_t>> by_type;
  for (std::size_t i = 0; i < ball.elements.size(); ++i) by_type[cone_type_of(a, ball.words[i])].push_back(i);
  int checked = 0;
  auto compare = [&](int t, const GroupElement& w1, const GroupElement& w2) {
    // u in T with l(u) <= 2, v = u*s in T
    for (std::size_t j = 0; j < ball.elements.size(); ++j) {
      if (ball.dist[j] > 2 || a.run(ball.words[j], t) < 0) continue;
      auto r1 = kernel_row_fast(b, nn, W.multiply(w1, ball.elements[j]));
      auto r2 = kernel_row_fast(b, nn, W.multiply(w2, ball.elements[j]));
      for (int s = 0; s < 3; ++s) {
        auto vw = ball.words[j];
        vw.push_back(s);
        if (a.run(vw, t) < 0) continue;
        if (cone_depth(W, a, t, vw, nn.L0 + 1) <= nn.L0) continue;
        auto v = W.word_to_element(vw);
        CHECK(coeff(r1, W, W.multiply(w1, v)) == coeff(r2, W, W.multiply(w2, v)));
        ++checked;
      }
    }
  };
  for (const auto& [t, idx] : by_type)
    for (std::size_t k = 1; k < std::min<std::size_t>(idx.size(), 4); ++k)
      compare(t, ball.elements[idx[0]], ball.elements[idx[idx.size() - k]]);
  MESSAGE("cone invariance triples: " << checked);
  CHECK(checked >= 100);
}

TEST_CASE("return probabilities against the T-basis oracle") {
  auto W = CoxeterSystem::triangle(4, 3, 3);
  auto b = uniform(W, 2);
  auto nn = nearest_neighbour_walk(W);
  auto r = n_step_return(b, nn, 6);
  CHECK(r.p[0] == 1);
  CHECK(r.p[1] == 0);
  CHECK(r.p[2] == Rat(1, 6));
  // P = sum_s (1/3) T_s / 2 applied repeatedly to T_1
  oracle::HeckeVec x;
  x.add(W, W.identity(), 1);
  for (int k = 1; k <= 6; ++k) {
    oracle::HeckeVec next;
    for (int s = 0; s < 3; ++s)
      for (const auto& [key, e] : oracle::left_mult(W, b.q, s, x).c) next.add(W, e.first, e.second * Rat(1, 6));
    x = next;
    auto it = x.c.find(W.key(W.identity()));
    CHECK(r.p[k] == (it == x.c.end() ? Rat(0) : it->second.second));
  }
  for (int k = 1; k <= 3; ++k) CHECK(r.rho_hat[k] < 1.0);

  auto thin = n_step_return(uniform(W, 1), nn, 6);
  CHECK(thin.p[2] == Rat(1, 3));
  // thin: closed words of length k over the generators, counted by BFS
  auto ball = oracle::bfs_ball(W, 6);
  std::vector<Rat> dist(ball.elements.size(), 0);
  dist[0] = 1;
  for (int k = 1; k <= 6; ++k) {
    std::vector<Rat> next(ball.elements.size(), 0);
    for (std::size_t i = 0; i < ball.elements.size(); ++i) {
      if (dist[i] == 0) continue;
      for (int s = 0; s < 3; ++s) {
        auto g = ball.elements[i];
        W.right_multiply_in_place(g, s);
        next[ball.index.at(W.key(g))] += dist[i] / 3;
      }
    }
    dist = next;
    CHECK(thin.p[k] == dist[0]);
  }
  CHECK_THROWS_AS(n_step_return(b, nn, 8, 50), CapExceeded);
}

TEST_CASE("spectral radius condition") {
  CHECK(spectral_condition(uniform(CoxeterSystem::triangle(4, 3, 3), 2)).satisfied);
  CHECK(spectral_condition(BuildingSpec{CoxeterSystem::triangle(4, 4, 2), {2, 2, 2}}).satisfied);
  auto v = spectral_condition(BuildingSpec{CoxeterSystem::triangle(4, 4, 2), {3, 3, 1}});
  CHECK_FALSE(v.satisfied);
  CHECK(v.witness == std::vector<int>{0, 1});
  CHECK(spectral_condition(uniform(CoxeterSystem::polygon({2, 2, 2, 2, 2}), 2)).satisfied);
}

TEST_CASE("support generation") {
  auto W = CoxeterSystem::triangle(4, 3, 3);
  CHECK(support_generates(W, nearest_neighbour_walk(W), 4).verdict == Generation::Yes);
  std::vector<std::pair<Word, Rat>> even;
  for (int s = 0; s < 3; ++s)
    for (int t = 0; t < 3; ++t)
      if (s != t) even.push_back({{s, t}, Rat(1, 6)});
  auto r = support_generates(W, make_walk(W, even), 6);
  CHECK(r.verdict == Generation::No);
  auto sts = support_generates(W, make_walk(W, {{{0, 1, 0}, Rat(1)}}), 6);
  CHECK(sts.verdict == Generation::No);
  // stu and its inverse: no parabolic or sign obstruction, generators far away
  auto far = support_generates(W, make_walk(W, {{{0, 1, 2}, Rat(1, 2)}, {{1, 2, 0}, Rat(1, 2)}}), 2);
  CHECK(far.verdict == Generation::Inconclusive);
  auto near = support_generates(W, make_walk(W, {{{0, 1, 2}, Rat(1, 2)}, {{1, 2, 0}, Rat(1, 2)}}), 8);
  CHECK(near.verdict != Generation::No);
}
