#include "coxwalk/hecke.hpp"

#include "coxwalk/automaton.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace coxwalk {

namespace {

bool is_square(const Int& n) { return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()); }

std::string pair_name(const CoxeterSystem& W, int s, int t) {
  return "m(" + W.labels()[s] + "," + W.labels()[t] + ")";
}

void add(ElementMap& m, const GroupElement& g, const Rat& c, const std::string& k) {
  auto it = m.find(k);
  if (it == m.end())
    m.emplace(k, Term{g, c});
  else
    it->second.coeff += c;
}

void add(const CoxeterSystem& W, ElementMap& m, const GroupElement& g, const Rat& c) { add(m, g, c, W.key(g)); }

void drop_zeros(ElementMap& m) {
  for (auto it = m.begin(); it != m.end();)
    it = it->second.coeff == 0 ? m.erase(it) : std::next(it);
}

}  // namespace

std::vector<std::string> validate_building(const BuildingSpec& b) {
  const auto& W = b.system;
  if (b.q.size() != W.rank())
    throw ValidationError("expected " + std::to_string(W.rank()) + " thickness values, got " +
                          std::to_string(b.q.size()));
  for (std::size_t s = 0; s < W.rank(); ++s)
    if (b.q[s] < 1) throw ValidationError("q(" + W.labels()[s] + ") must be a positive integer");
  std::vector<std::string> warnings;
  for (std::size_t s = 0; s < W.rank(); ++s)
    for (std::size_t t = s + 1; t < W.rank(); ++t) {
      const int m = W.m(s, t);
      const Int qs = b.q[s], qt = b.q[t];
      if (m == kInf || qs < 2 || qt < 2) continue;
      const auto name = pair_name(W, s, t) + "=" + std::to_string(m);
      if (m == 3 && qs != qt) throw ValidationError(name + " needs q(" + W.labels()[s] + ") = q(" + W.labels()[t] + ")");
      if (m == 6 && !is_square(qs * qt)) throw ValidationError(name + " needs sqrt(q_s q_t) to be an integer");
      if (m == 8 && !is_square(2 * qs * qt)) throw ValidationError(name + " needs sqrt(2 q_s q_t) to be an integer");
      if (m % 2 == 1 && m != 3 && qs != qt)
        warnings.push_back(name + " is odd but q(" + W.labels()[s] + ") != q(" + W.labels()[t] + ")");
    }
  return warnings;
}

Int q_of(const BuildingSpec& b, const GroupElement& w) {
  Int out = 1;
  for (int s : b.system.reduced_word(w)) out *= b.q[s];
  return out;
}

Feasibility triangle_feasibility(int a, int b, int c) {
  if (a == kInf || b == kInf || c == kInf) return {false, "m = inf is not a triangle group label"};
  if (!(a >= b && b >= c && c >= 2)) throw ValidationError("expected a >= b >= c >= 2");
  if (Rat(1, a) + Rat(1, b) + Rat(1, c) > 1) throw ValidationError("spherical triangle group");
  static const std::set<int> allowed{2, 3, 4, 6, 8};
  for (int m : {a, b, c})
    if (!allowed.count(m)) return {false, "no finite thick generalised " + std::to_string(m) + "-gon"};
  // m = 3 forces q_s = q_t, m = 6 needs q_s q_t square, m = 8 needs 2 q_s q_t
  // square.  Each only constrains the parity of the 2-adic valuations, and
  // q in {2, 4} realises any consistent parity pattern (also within Higman's
  // bounds), so a parity search decides feasibility.
  const std::array<std::array<int, 3>, 3> pairs{{{0, 1, a}, {1, 2, b}, {0, 2, c}}};
  for (int mask = 0; mask < 8; ++mask) {
    bool ok = true;
    for (const auto& [s, t, m] : pairs) {
      const bool same = ((mask >> s) & 1) == ((mask >> t) & 1);
      if ((m == 3 || m == 6) && !same) ok = false;
      if (m == 8 && same) ok = false;
    }
    if (!ok) continue;
    std::string q;
    for (int s = 0; s < 3; ++s) q += (s ? "," : "") + std::to_string((mask >> s) & 1 ? 2 : 4);
    return {true, "thickness (" + q + ") meets every rank-2 residue condition"};
  }
  return {false, "no thickness assignment meets the rank-2 residue conditions"};
}

std::vector<TriangleVerdict> enumerate_triangles() {
  const int vals[] = {8, 6, 4, 3, 2};
  std::vector<TriangleVerdict> out;
  for (int a : vals)
    for (int b : vals)
      for (int c : vals) {
        if (!(a >= b && b >= c)) continue;
        if (Rat(1, a) + Rat(1, b) + Rat(1, c) > 1) continue;
        out.push_back({{a, b, c}, triangle_feasibility(a, b, c)});
      }
  return out;
}

WalkSpec make_walk(const CoxeterSystem& W, const std::vector<std::pair<Word, Rat>>& steps) {
  if (steps.empty()) throw ValidationError("walk has no steps");
  WalkSpec out;
  Rat total = 0;
  std::unordered_set<std::string> seen;
  bool nontrivial = false;
  for (const auto& [w, p] : steps) {
    for (int s : w)
      if (s < 0 || s >= static_cast<int>(W.rank())) throw ValidationError("letter out of range");
    if (!W.is_reduced(w)) throw ValidationError("step word " + W.format_word(w) + " is not reduced");
    if (p <= 0) throw ValidationError("step " + W.format_word(w) + " has non-positive probability");
    auto g = W.normalized(W.word_to_element(w));
    if (!seen.insert(W.key(g)).second) throw ValidationError("step " + W.format_word(w) + " listed twice");
    total += p;
    nontrivial = nontrivial || !w.empty();
    out.L0 = std::max(out.L0, static_cast<int>(w.size()));
    out.steps.push_back({*g.cached_nf, p, g});
  }
  if (total != 1) throw ValidationError("step probabilities sum to " + total.get_str() + ", not 1");
  if (!nontrivial) throw ValidationError("walk never moves (support is the identity)");
  return out;
}

WalkSpec nearest_neighbour_walk(const CoxeterSystem& W) {
  std::vector<std::pair<Word, Rat>> steps;
  for (std::size_t s = 0; s < W.rank(); ++s) steps.push_back({{static_cast<int>(s)}, Rat(1, W.rank())});
  return make_walk(W, steps);
}

ElementMap hecke_product(const BuildingSpec& b, const GroupElement& u, const GroupElement& v) {
  const auto& W = b.system;
  ElementMap cur;
  add(W, cur, u, 1);
  for (int s : W.reduced_word(v)) {
    ElementMap next;
    const Rat inv(1, b.q[s]);
    for (const auto& [k, t] : cur) {
      auto ws = t.element;
      const bool up = W.is_right_ascent(ws, s);
      W.right_multiply_in_place(ws, s);
      if (up) {
        add(W, next, ws, t.coeff);
      } else {
        add(W, next, ws, t.coeff * inv);
        add(next, t.element, t.coeff * (1 - inv), k);
      }
    }
    drop_zeros(next);
    cur = std::move(next);
  }
  return cur;
}

ElementMap kernel_row_fast(const BuildingSpec& b, const WalkSpec& walk, const GroupElement& u) {
  const auto& W = b.system;
  ElementMap row;
  for (const auto& st : walk.steps) {
    ElementMap cur;
    add(W, cur, u, st.p);
    for (int s : st.word) {
      ElementMap next;
      const Rat inv(1, b.q[s]);
      for (const auto& [k, t] : cur) {
        auto us = t.element;
        const bool up = W.is_right_ascent(us, s);
        W.right_multiply_in_place(us, s);
        if (up) {
          add(W, next, us, t.coeff);
        } else {
          add(W, next, us, t.coeff * inv);
          add(next, t.element, t.coeff * (1 - inv), k);
        }
      }
      drop_zeros(next);
      cur = std::move(next);
    }
    for (const auto& [k, t] : cur) add(row, t.element, t.coeff, k);
  }
  drop_zeros(row);
  return row;
}

ElementMap kernel_row_hecke(const BuildingSpec& b, const WalkSpec& walk, const GroupElement& u) {
  const auto& W = b.system;
  const std::string uk = W.key(u);
  const Int qu = q_of(b, u);
  // v ranges over u*y with l(y) <= L0 (the support bound)
  std::vector<GroupElement> ball{u};
  std::unordered_set<std::string> seen{uk};
  for (std::size_t begin = 0, r = 0; r < static_cast<std::size_t>(walk.L0); ++r) {
    const std::size_t end = ball.size();
    for (std::size_t i = begin; i < end; ++i)
      for (std::size_t s = 0; s < W.rank(); ++s) {
        auto g = ball[i];
        W.right_multiply_in_place(g, static_cast<int>(s));
        if (seen.insert(W.key(g)).second) ball.push_back(std::move(g));
      }
    begin = end;
  }
  ElementMap row;
  for (const auto& v : ball) {
    Rat sum = 0;
    for (const auto& st : walk.steps) {
      auto prod = hecke_product(b, v, W.inverse(st.element));
      auto it = prod.find(uk);
      if (it != prod.end()) sum += it->second.coeff * st.p;
    }
    if (sum != 0) add(W, row, v, sum * Rat(q_of(b, v)) / Rat(qu));
  }
  return row;
}

KernelRow kernel_row(const BuildingSpec& b, const WalkSpec& walk, const GroupElement& u) {
  auto fast = kernel_row_fast(b, walk, u);
  auto slow = kernel_row_hecke(b, walk, u);
  bool same = fast.size() == slow.size();
  for (auto it = fast.begin(), jt = slow.begin(); same && it != fast.end(); ++it, ++jt)
    same = it->first == jt->first && it->second.coeff == jt->second.coeff;
  if (!same)
    throw std::logic_error("kernel row from " + b.system.format_word(b.system.shortlex_nf(u)) +
                           ": structure constants and mass propagation disagree");
  return {u, std::move(fast)};
}

ReturnSeries n_step_return(const BuildingSpec& b, const WalkSpec& walk, int n, std::size_t state_cap) {
  const auto& W = b.system;
  ReturnSeries out;
  const std::string id = W.key(W.identity());
  ElementMap dist;
  add(dist, W.identity(), 1, id);
  out.p.push_back(1);
  out.max_states = 1;
  for (int k = 1; k <= n; ++k) {
    ElementMap next;
    for (const auto& [key, t] : dist)
      for (const auto& [vk, e] : kernel_row_fast(b, walk, t.element)) add(next, e.element, t.coeff * e.coeff, vk);
    drop_zeros(next);
    if (next.size() > state_cap)
      throw CapExceeded("return probabilities: " + std::to_string(next.size()) + " states after " +
                        std::to_string(k) + " steps exceed the cap of " + std::to_string(state_cap));
    out.max_states = std::max(out.max_states, next.size());
    dist = std::move(next);
    auto it = dist.find(id);
    out.p.push_back(it == dist.end() ? Rat(0) : it->second.coeff);
  }
  out.rho_hat.assign(n / 2 + 1, 0.0);
  for (int k = 1; 2 * k <= n; ++k) {
    // logs keep tiny probabilities representable
    const auto& r = out.p[2 * k];
    if (r == 0) continue;
    const double lg = (std::log(mpz_get_d(r.get_num_mpz_t())) - std::log(mpz_get_d(r.get_den_mpz_t())));
    out.rho_hat[k] = std::exp(lg / (2.0 * k));
  }
  return out;
}

SpectralCondition spectral_condition(const BuildingSpec& b) {
  const auto& W = b.system;
  const std::size_t n = W.rank();
  SpectralCondition out;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> I;
    long rest = 0;
    for (std::size_t s = 0; s < n; ++s) {
      if (mask >> s & 1u)
        I.push_back(static_cast<int>(s));
      else
        rest += b.q[s];
    }
    if (!W.is_finite_parabolic(I)) continue;
    if (rest < static_cast<long>(I.size())) return {false, I};
  }
  return out;
}

std::string to_string(Generation g) {
  switch (g) {
    case Generation::Yes: return "yes";
    case Generation::No: return "no";
    case Generation::Inconclusive: return "inconclusive";
  }
  return "?";
}

GenerationReport support_generates(const CoxeterSystem& W, const WalkSpec& walk, int depth_cap) {
  const std::size_t n = W.rank();
  // Letters of a reduced word do not depend on the word chosen.
  std::vector<bool> used(n, false);
  for (const auto& st : walk.steps)
    for (int s : st.word) used[s] = true;
  for (std::size_t s = 0; s < n; ++s)
    if (!used[s]) return {Generation::No, "support lies in a proper standard parabolic subgroup (no " + W.labels()[s] + ")"};

  // Sign characters: one per union of classes of the odd-label graph.
  std::vector<int> comp(n);
  for (std::size_t s = 0; s < n; ++s) comp[s] = static_cast<int>(s);
  std::function<int(int)> find = [&](int x) { return comp[x] == x ? x : comp[x] = find(comp[x]); };
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < n; ++t)
      if (W.m(s, t) != kInf && W.m(s, t) % 2 == 1) comp[find(s)] = find(t);
  std::vector<int> roots;
  for (std::size_t s = 0; s < n; ++s)
    if (find(s) == static_cast<int>(s)) roots.push_back(static_cast<int>(s));
  for (unsigned mask = 1; mask < (1u << roots.size()); ++mask) {
    bool kernel = true;
    for (const auto& st : walk.steps) {
      int parity = 0;
      for (int s : st.word) {
        auto idx = std::find(roots.begin(), roots.end(), find(s)) - roots.begin();
        parity ^= (mask >> idx) & 1u;
      }
      kernel = kernel && parity == 0;
    }
    if (kernel) {
      if (mask + 1 == (1u << roots.size()))
        return {Generation::No, "every support element has even length (index 2 subgroup)"};
      return {Generation::No, "support lies in the kernel of a sign character"};
    }
  }

  std::vector<GroupElement> gens;
  for (const auto& st : walk.steps) {
    gens.push_back(st.element);
    gens.push_back(W.inverse(st.element));
  }
  std::unordered_set<std::string> seen{W.key(W.identity())};
  std::vector<GroupElement> frontier{W.identity()};
  std::vector<bool> found(n, false);
  std::size_t missing = n;
  bool truncated = false;
  while (!frontier.empty() && missing > 0) {
    std::vector<GroupElement> next;
    for (const auto& h : frontier)
      for (const auto& g : gens) {
        auto x = W.multiply(h, g);
        auto k = W.key(x);
        if (seen.count(k)) continue;
        if (W.length(x) > static_cast<std::size_t>(depth_cap)) {
          truncated = true;
          continue;
        }
        seen.insert(k);
        auto w = W.reduced_word(x);
        if (w.size() == 1 && !found[w[0]]) {
          found[w[0]] = true;
          --missing;
        }
        next.push_back(std::move(x));
      }
    frontier = std::move(next);
  }
  if (missing == 0) return {Generation::Yes, "every generator reached within length " + std::to_string(depth_cap)};
  if (!truncated)
    return {Generation::No, "generated subgroup is finite with " + std::to_string(seen.size()) +
                                " elements and misses a generator"};
  return {Generation::Inconclusive, "closure within length " + std::to_string(depth_cap) + " misses a generator"};
}

}  // namespace coxwalk
