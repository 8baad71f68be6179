#include "coxwalk/automaton.hpp"

#include <json.hpp>

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <sstream>
#include <unordered_map>

namespace coxwalk {

namespace {

std::string root_key(const Root& r) {
  std::string k;
  for (const auto& x : r) {
    k += x.key();
    k += '|';
  }
  return k;
}

}  // namespace

MinimalRoots build_minimal_roots(const CoxeterSystem& W, std::size_t cap) {
  const int n = static_cast<int>(W.rank());
  const auto& F = W.field();
  MinimalRoots E;
  std::unordered_map<std::string, int> index;
  for (int s = 0; s < n; ++s) {
    E.roots.push_back(W.simple_root(s));
    index[root_key(E.roots.back())] = s;
  }
  for (std::size_t i = 0; i < E.roots.size(); ++i) {
    std::vector<int> row(n);
    for (int s = 0; s < n; ++s) {
      if (static_cast<int>(i) == s) {
        row[s] = MinimalRoots::kNegative;
        continue;
      }
      // B(beta, alpha_s) <= -1 means sigma_s(beta) dominates alpha_s.
      FieldScalar b = F.zero();
      for (int t = 0; t < n; ++t)
        if (!E.roots[i][t].is_zero()) b += F.mul(E.roots[i][t], W.bilinear(t, s));
      if (F.sign(b + F.one()) <= 0) {
        row[s] = MinimalRoots::kLeaves;
        continue;
      }
      Root g = E.roots[i];
      W.reflect_in_place(s, g);
      auto k = root_key(g);
      auto it = index.find(k);
      if (it == index.end()) {
        if (E.roots.size() >= cap) throw CapExceeded("minimal root closure exceeded cap");
        it = index.emplace(k, static_cast<int>(E.roots.size())).first;
        E.roots.push_back(std::move(g));
      }
      row[s] = it->second;
    }
    E.step.push_back(row);
  }
  return E;
}

GeodesicDFA build_geodesic_dfa(const CoxeterSystem& W, const MinimalRoots& E, std::size_t cap) {
  const int n = static_cast<int>(W.rank());
  GeodesicDFA dfa;
  std::map<std::vector<int>, int> index;
  dfa.payload.push_back({});
  index[{}] = 0;
  for (std::size_t q = 0; q < dfa.payload.size(); ++q) {
    std::vector<int> row(n, -1);
    for (int s = 0; s < n; ++s) {
      const auto& D = dfa.payload[q];
      if (std::binary_search(D.begin(), D.end(), s)) continue;
      std::vector<int> next{s};
      for (int b : D) {
        int c = E.step[b][s];
        if (c >= 0) next.push_back(c);
      }
      std::sort(next.begin(), next.end());
      next.erase(std::unique(next.begin(), next.end()), next.end());
      auto it = index.find(next);
      if (it == index.end()) {
        if (dfa.payload.size() >= cap) throw CapExceeded("geodesic DFA exceeded state cap");
        it = index.emplace(next, static_cast<int>(dfa.payload.size())).first;
        dfa.payload.push_back(next);
      }
      row[s] = it->second;
    }
    dfa.next.push_back(row);
  }
  return dfa;
}

std::size_t CannonAutomaton::recurrent_count() const {
  return static_cast<std::size_t>(std::count(recurrent.begin(), recurrent.end(), true));
}

int CannonAutomaton::run(const Word& w, int from) const {
  int q = from < 0 ? start : from;
  for (int s : w) {
    if (q < 0) return -1;
    q = next[q][s];
  }
  return q;
}

void finalize_automaton(CannonAutomaton& a) {
  const std::size_t N = a.next.size();
  if (a.representative.size() != N) {
    a.representative.assign(N, {});
    std::vector<bool> seen(N, false);
    std::deque<int> queue{a.start};
    seen[a.start] = true;
    while (!queue.empty()) {
      int q = queue.front();
      queue.pop_front();
      for (std::size_t s = 0; s < a.rank; ++s) {
        int r = a.next[q][s];
        if (r < 0 || seen[r]) continue;
        seen[r] = true;
        a.representative[r] = a.representative[q];
        a.representative[r].push_back(static_cast<int>(s));
        queue.push_back(r);
      }
    }
  }
  // Tarjan; a type is recurrent iff its component has a cycle.
  std::vector<int> idx(N, -1), low(N, 0), comp(N, -1);
  std::vector<bool> on(N, false);
  std::vector<int> stack;
  int counter = 0, ncomp = 0;
  std::function<void(int)> dfs = [&](int v) {
    idx[v] = low[v] = counter++;
    stack.push_back(v);
    on[v] = true;
    for (int w : a.next[v]) {
      if (w < 0) continue;
      if (idx[w] < 0) {
        dfs(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on[w]) {
        low[v] = std::min(low[v], idx[w]);
      }
    }
    if (low[v] == idx[v]) {
      for (;;) {
        int w = stack.back();
        stack.pop_back();
        on[w] = false;
        comp[w] = ncomp;
        if (w == v) break;
      }
      ++ncomp;
    }
  };
  for (std::size_t v = 0; v < N; ++v)
    if (idx[v] < 0) dfs(static_cast<int>(v));
  std::vector<int> comp_size(ncomp, 0);
  for (int c : comp) ++comp_size[c];
  a.recurrent.assign(N, false);
  for (std::size_t v = 0; v < N; ++v) {
    bool self = std::find(a.next[v].begin(), a.next[v].end(), static_cast<int>(v)) != a.next[v].end();
    a.recurrent[v] = comp_size[comp[v]] > 1 || self;
  }
  std::map<int, int> renum;
  a.scc.assign(N, -1);
  for (std::size_t v = 0; v < N; ++v) {
    if (!a.recurrent[v]) continue;
    auto it = renum.find(comp[v]);
    if (it == renum.end()) it = renum.emplace(comp[v], static_cast<int>(renum.size())).first;
    a.scc[v] = it->second;
  }
  a.num_scc = static_cast<int>(renum.size());
}

CannonAutomaton minimize(const GeodesicDFA& dfa, std::size_t rank) {
  const std::size_t n = rank, N = dfa.next.size();
  // Moore refinement; every live state accepts, missing transitions go to the dead state.
  std::vector<int> block(N, 0);
  std::size_t nblocks = 1;
  for (;;) {
    std::map<std::vector<int>, int> sig;
    std::vector<int> nb(N);
    for (std::size_t q = 0; q < N; ++q) {
      std::vector<int> key{block[q]};
      for (std::size_t s = 0; s < n; ++s) key.push_back(dfa.next[q][s] < 0 ? -1 : block[dfa.next[q][s]]);
      auto it = sig.find(key);
      if (it == sig.end()) it = sig.emplace(key, static_cast<int>(sig.size())).first;
      nb[q] = it->second;
    }
    block = nb;
    if (sig.size() == nblocks) break;
    nblocks = sig.size();
  }
  // Number classes in BFS order from the start; unreachable classes are dropped.
  std::vector<int> order(nblocks, -1), rep_state;
  std::deque<int> queue{dfa.start};
  order[block[dfa.start]] = 0;
  rep_state.push_back(dfa.start);
  while (!queue.empty()) {
    int q = queue.front();
    queue.pop_front();
    for (std::size_t s = 0; s < n; ++s) {
      int r = dfa.next[q][s];
      if (r < 0 || order[block[r]] >= 0) continue;
      order[block[r]] = static_cast<int>(rep_state.size());
      rep_state.push_back(r);
      queue.push_back(r);
    }
  }
  CannonAutomaton a;
  a.rank = n;
  a.start = 0;
  a.next.assign(rep_state.size(), std::vector<int>(n, -1));
  if (!dfa.payload.empty()) a.payload.assign(rep_state.size(), {});
  for (std::size_t id = 0; id < rep_state.size(); ++id) {
    int q = rep_state[id];
    if (!dfa.payload.empty()) a.payload[id] = dfa.payload[q];
    for (std::size_t s = 0; s < n; ++s) {
      int r = dfa.next[q][s];
      a.next[id][s] = r < 0 ? -1 : order[block[r]];
    }
  }
  finalize_automaton(a);
  return a;
}

CannonAutomaton build_cannon(const CoxeterSystem& W) {
  auto E = build_minimal_roots(W);
  auto a = minimize(build_geodesic_dfa(W, E), W.rank());
  a.roots = std::move(E.roots);
  return a;
}

bool reachable(const CannonAutomaton& a, int from, int to) {
  std::vector<bool> seen(a.size(), false);
  std::deque<int> queue{from};
  seen[from] = true;
  while (!queue.empty()) {
    int q = queue.front();
    queue.pop_front();
    if (q == to) return true;
    for (int r : a.next[q])
      if (r >= 0 && !seen[r]) {
        seen[r] = true;
        queue.push_back(r);
      }
  }
  return false;
}

Connectivity is_strongly_connected(const CannonAutomaton& a) {
  Connectivity c;
  if (a.num_scc == 1) {
    c.strongly_connected = true;
    return c;
  }
  std::vector<int> first(a.num_scc, -1);
  for (std::size_t v = 0; v < a.size(); ++v)
    if (a.scc[v] >= 0 && first[a.scc[v]] < 0) first[a.scc[v]] = static_cast<int>(v);
  for (int i = 0; i < a.num_scc; ++i)
    for (int j = 0; j < a.num_scc; ++j)
      if (i != j && !reachable(a, first[i], first[j])) {
        c.witness = std::make_pair(first[i], first[j]);
        return c;
      }
  return c;
}

std::optional<std::vector<int>> isomorphism(const CannonAutomaton& a, const CannonAutomaton& b) {
  if (a.size() != b.size() || a.rank != b.rank) return std::nullopt;
  std::vector<int> map(a.size(), -1), inv(b.size(), -1);
  map[a.start] = b.start;
  inv[b.start] = a.start;
  std::deque<int> queue{a.start};
  while (!queue.empty()) {
    int p = queue.front();
    queue.pop_front();
    int q = map[p];
    for (std::size_t s = 0; s < a.rank; ++s) {
      int pn = a.next[p][s], qn = b.next[q][s];
      if ((pn < 0) != (qn < 0)) return std::nullopt;
      if (pn < 0) continue;
      if (map[pn] < 0 && inv[qn] < 0) {
        map[pn] = qn;
        inv[qn] = pn;
        queue.push_back(pn);
      } else if (map[pn] != qn || inv[qn] != pn) {
        return std::nullopt;
      }
    }
  }
  for (int x : map)
    if (x < 0) return std::nullopt;
  return map;
}

int cone_type_of(const CannonAutomaton& a, const Word& w) {
  int q = a.run(w);
  if (q < 0) throw std::invalid_argument("word is not reduced");
  return q;
}

std::vector<std::uint64_t> sphere_counts(const CannonAutomaton& a, int n) {
  std::vector<std::uint64_t> counts, cur(a.size(), 0);
  cur[a.start] = 1;
  for (int k = 0; k <= n; ++k) {
    std::uint64_t total = 0;
    for (auto c : cur) total += c;
    counts.push_back(total);
    std::vector<std::uint64_t> nxt(a.size(), 0);
    for (std::size_t q = 0; q < a.size(); ++q)
      for (int r : a.next[q])
        if (r >= 0) nxt[r] += cur[q];
    cur = std::move(nxt);
  }
  return counts;
}

GeodesicDFA build_shortlex_dfa(const CoxeterSystem& W, const MinimalRoots& E, std::size_t cap) {
  const int n = static_cast<int>(W.rank());
  GeodesicDFA dfa;
  using State = std::pair<std::vector<int>, std::vector<int>>;
  std::map<State, int> index;
  std::vector<State> states{{{}, {}}};
  index[states[0]] = 0;
  auto advance = [&](const std::vector<int>& in, int s) {
    std::vector<int> out;
    for (int b : in) {
      int c = E.step[b][s];
      if (c >= 0) out.push_back(c);
    }
    return out;
  };
  for (std::size_t q = 0; q < states.size(); ++q) {
    std::vector<int> row(n, -1);
    for (int s = 0; s < n; ++s) {
      const auto [D, F] = states[q];
      if (std::binary_search(D.begin(), D.end(), s) || std::binary_search(F.begin(), F.end(), s)) continue;
      auto nd = advance(D, s);
      nd.push_back(s);
      auto src = F;
      for (int t = 0; t < s; ++t) src.push_back(t);
      auto nf = advance(src, s);
      for (auto* v : {&nd, &nf}) {
        std::sort(v->begin(), v->end());
        v->erase(std::unique(v->begin(), v->end()), v->end());
      }
      State next{nd, nf};
      auto it = index.find(next);
      if (it == index.end()) {
        if (states.size() >= cap) throw CapExceeded("ShortLex DFA exceeded state cap");
        it = index.emplace(next, static_cast<int>(states.size())).first;
        states.push_back(next);
      }
      row[s] = it->second;
    }
    dfa.next.push_back(row);
  }
  for (auto& [D, F] : states) {
    auto p = D;
    p.push_back(-1);
    p.insert(p.end(), F.begin(), F.end());
    dfa.payload.push_back(p);
  }
  return dfa;
}

std::vector<std::uint64_t> growth_counts(const CoxeterSystem& W, int n) {
  auto dfa = build_shortlex_dfa(W, build_minimal_roots(W));
  std::vector<std::uint64_t> counts, cur(dfa.next.size(), 0);
  cur[dfa.start] = 1;
  for (int k = 0; k <= n; ++k) {
    std::uint64_t total = 0;
    for (auto c : cur) total += c;
    counts.push_back(total);
    std::vector<std::uint64_t> nxt(cur.size(), 0);
    for (std::size_t q = 0; q < cur.size(); ++q)
      for (int r : dfa.next[q])
        if (r >= 0) nxt[r] += cur[q];
    cur = std::move(nxt);
  }
  return counts;
}

namespace {

std::string label(const CoxeterSystem& W, const Word& w) { return w.empty() ? "e" : W.format_word(w); }

}  // namespace

std::string to_dot(const CoxeterSystem& W, const CannonAutomaton& a, const std::string& name) {
  static const char* colors[] = {"darkgreen", "blue", "red", "orange", "purple", "brown", "gray40"};
  std::ostringstream os;
  os << "digraph \"" << name << "\" {\n  rankdir=LR;\n  node [shape=circle];\n";
  for (std::size_t q = 0; q < a.size(); ++q) {
    os << "  q" << q << " [label=\"" << label(W, a.representative[q]) << "\"";
    if (a.recurrent[q]) os << ", style=filled, fillcolor=lightblue";
    if (static_cast<int>(q) == a.start) os << ", shape=doublecircle";
    os << "];\n";
  }
  for (std::size_t q = 0; q < a.size(); ++q)
    for (std::size_t s = 0; s < a.rank; ++s) {
      int r = a.next[q][s];
      if (r < 0) continue;
      os << "  q" << q << " -> q" << r << " [label=\"" << W.labels()[s] << "\", color=" << colors[s % 7]
         << "];\n";
    }
  os << "}\n";
  return os.str();
}

std::string to_json(const CoxeterSystem& W, const CannonAutomaton& a) {
  nlohmann::json j;
  j["generators"] = W.labels();
  j["start"] = a.start;
  j["num_states"] = a.size();
  j["num_recurrent"] = a.recurrent_count();
  auto& states = j["states"] = nlohmann::json::array();
  for (std::size_t q = 0; q < a.size(); ++q) {
    nlohmann::json s;
    s["id"] = q;
    s["representative"] = label(W, a.representative[q]);
    s["recurrent"] = static_cast<bool>(a.recurrent[q]);
    s["scc"] = a.scc[q];
    nlohmann::json t = nlohmann::json::object();
    for (std::size_t g = 0; g < a.rank; ++g)
      t[W.labels()[g]] = a.next[q][g] < 0 ? nlohmann::json(nullptr) : nlohmann::json(a.next[q][g]);
    s["transitions"] = t;
    states.push_back(s);
  }
  return j.dump(2);
}

}  // namespace coxwalk
