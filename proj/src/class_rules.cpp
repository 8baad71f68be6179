#include "coxwalk/class_rules.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_map>

namespace coxwalk {

namespace {

struct Roles {
  int s, t, u;
};

// Elements of W_{ab} as alternating words, identity first.
std::vector<Word> dihedral_words(int a, int b, int m) {
  std::vector<Word> out{{}};
  for (int len = 1; len <= m; ++len)
    for (int first : {a, b}) {
      if (len == m && first == b) continue;
      Word w;
      for (int i = 0; i < len; ++i) w.push_back(i % 2 == 0 ? first : (first == a ? b : a));
      out.push_back(w);
    }
  return out;
}

// Expands a printed word over s, t, u with x, y standing for the longest
// elements of W_st and W_tu.  Parentheses are ignored.
Word expand(const CoxeterSystem& W, const Roles& r, const std::string& text) {
  Word w;
  for (char c : text) {
    switch (c) {
      case 's': w.push_back(r.s); break;
      case 't': w.push_back(r.t); break;
      case 'u': w.push_back(r.u); break;
      case 'x': {
        auto x = longest_dihedral_word(r.s, r.t, W.m(r.s, r.t));
        w.insert(w.end(), x.begin(), x.end());
        break;
      }
      case 'y': {
        auto y = longest_dihedral_word(r.t, r.u, W.m(r.t, r.u));
        w.insert(w.end(), y.begin(), y.end());
        break;
      }
      case '(':
      case ')': break;
      default: throw std::logic_error("bad rule letter");
    }
  }
  return w;
}

std::string role_name(const CoxeterSystem& W, const Roles& r) {
  return "s=" + W.labels()[r.s] + ",t=" + W.labels()[r.t] + ",u=" + W.labels()[r.u];
}

// T(vu) = T(s_1 u) for v in W_st outside `excluded`, s_1 the last letter of v.
void add_prefix_family(const CoxeterSystem& W, const Roles& r, const std::vector<std::string>& excluded,
                       std::vector<ConeRule>& out) {
  std::vector<GroupElement> ex;
  for (const auto& e : excluded) ex.push_back(W.word_to_element(expand(W, r, e)));
  for (const auto& v : dihedral_words(r.s, r.t, W.m(r.s, r.t))) {
    if (v.size() < 2) continue;
    auto g = W.word_to_element(v);
    if (std::any_of(ex.begin(), ex.end(), [&](const auto& e) { return W.equals(e, g); })) continue;
    out.push_back({concat(v, {r.u}), {v.back(), r.u}, "T(vu)=T(s1u) [" + role_name(W, r) + "]"});
  }
}

void add_printed(const CoxeterSystem& W, const Roles& r,
                 const std::vector<std::pair<std::string, std::string>>& printed, std::vector<ConeRule>& out) {
  for (const auto& [l, rr] : printed)
    out.push_back({expand(W, r, l), expand(W, r, rr), "T(" + l + ")=T(" + rr + ") [" + role_name(W, r) + "]"});
}

const std::vector<std::pair<std::string, std::string>> kClassI = {{"xus", "sus"}, {"xut", "tut"}};

const std::vector<std::pair<std::string, std::string>> kClassII = {
    {"(xs)ut", "tut"}, {"xutu", "tutu"}, {"xutsu", "tutsu"}, {"xutst", "stst"}, {"suts", "sts"}, {"sutu", "utu"},
};

// As printed, including the repeated second line.
const std::vector<std::pair<std::string, std::string>> kClassIII = {
    {"xutstst", "ststst"},
    {"(xs)ut", "tut"},
    {"xutstst", "ststst"},
    {"xutststut", "stststut"},
    {"xutststuts", "stststuts"},
    {"xutststutstu", "stststutstu"},
    {"(xt)utstutststs", "tststs"},
    {"(xts)ut", "tut"},
    {"(xt)utsts", "ststs"},
    {"(xt)utstsu", "ststsu"},
    {"tutstst", "tstst"},
    {"utstuts", "tuts"},
    {"utstut", "tut"},
    {"utst", "tst"},
    {"stut", "tut"},
    {"ustst", "stst"},
    {"stuts", "tuts"},
};

std::vector<Roles> triangle_roles(const Classification& c) {
  const auto [s, t, u] = c.roles;
  switch (c.triangle_class) {
    case 1: {
      std::vector<Roles> out;
      std::array<int, 3> p{s, t, u};
      std::sort(p.begin(), p.end());
      do out.push_back({p[0], p[1], p[2]});
      while (std::next_permutation(p.begin(), p.end()));
      return out;
    }
    case 2: return {{s, t, u}, {u, t, s}};
    default: return {{s, t, u}};
  }
}

bool is_triangle(SystemKind k) { return k == SystemKind::AffineTriangle || k == SystemKind::FuchsianTriangle; }

}  // namespace

std::vector<ConeRule> class_rules(const CoxeterSystem& W) {
  const auto c = W.classify();
  std::vector<ConeRule> rules;
  if (is_triangle(c.kind)) {
    for (const auto& r : triangle_roles(c)) {
      switch (c.triangle_class) {
        case 1:
          add_prefix_family(W, r, {"x"}, rules);
          add_printed(W, r, kClassI, rules);
          break;
        case 2:
          add_prefix_family(W, r, {"x", "xs"}, rules);
          add_printed(W, r, kClassII, rules);
          break;
        default:
          add_prefix_family(W, r, {"x", "xs", "xt", "xts"}, rules);
          add_printed(W, r, kClassIII, rules);
      }
    }
    return rules;
  }
  if (c.kind != SystemKind::FuchsianPolygon) throw UnsupportedClass("no explicit cone-type rules for " + c.describe());
  const int n = static_cast<int>(W.rank());
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t)
      for (int u = 0; u < n; ++u) {
        if (s == t || t == u || u == s || W.m(s, t) == kInf || W.m(u, s) != kInf) continue;
        Roles r{s, t, u};
        for (const auto& v : dihedral_words(s, t, W.m(s, t))) {
          if (v.empty()) continue;
          Word target{u};
          std::string src = "T(vu)=T(u) [" + role_name(W, r) + "]";
          if (W.m(t, u) != kInf) {
            if (!W.is_right_ascent(W.word_to_element(v), t)) {
              target = {t, u};
              src = "T(vu)=T(tu) [" + role_name(W, r) + "]";
            }
          }
          rules.push_back({concat(v, {u}), target, src});
        }
      }
  return rules;
}

RuleAutomaton class_rule_automaton(const CoxeterSystem& W, std::size_t max_vertices) {
  RuleAutomaton out;
  const auto c = W.classify();
  out.rules = class_rules(W);
  const std::size_t n = W.rank();

  struct Target {
    GroupElement q;
    std::string source;
  };
  std::unordered_map<std::string, Target> rule_of;
  for (const auto& r : out.rules) {
    auto p = W.word_to_element(r.lhs), q = W.word_to_element(r.rhs);
    if (W.equals(p, q)) continue;
    auto k = W.key(p);
    auto it = rule_of.find(k);
    if (it == rule_of.end()) {
      rule_of.emplace(k, Target{q, r.source});
    } else if (W.equals(it->second.q, q)) {
      if (it->second.source == r.source) out.notes.push_back("duplicate rule: " + r.source);
    } else {
      out.notes.push_back("conflicting targets for " + W.format_word(r.lhs) + ": " + it->second.source + " vs " +
                          r.source);
    }
  }

  std::unordered_map<std::string, int> vertex_of;
  auto& a = out.automaton;
  a.rank = n;
  a.start = 0;
  auto add_vertex = [&](GroupElement g) {
    if (out.vertex_elements.size() >= max_vertices)
      throw CapExceeded("explicit rules do not close within " + std::to_string(max_vertices) + " vertices");
    g = W.normalized(std::move(g));
    int id = static_cast<int>(out.vertex_elements.size());
    vertex_of[W.key(g)] = id;
    a.representative.push_back(*g.cached_nf);
    a.next.push_back(std::vector<int>(n, -1));
    out.vertex_elements.push_back(std::move(g));
    return id;
  };
  add_vertex(W.identity());
  std::deque<int> queue{0};
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (std::size_t r = 0; r < n; ++r) {
      const auto& g = out.vertex_elements[v];
      if (!W.is_right_ascent(g, static_cast<int>(r))) continue;
      auto h = g;
      W.right_multiply_in_place(h, static_cast<int>(r));
      h.cached_nf.reset();
      int target = -1;
      for (std::size_t hops = 0; hops <= rule_of.size(); ++hops) {
        auto k = W.key(h);
        if (auto it = vertex_of.find(k); it != vertex_of.end()) {
          target = it->second;
          break;
        }
        auto rit = rule_of.find(k);
        if (rit == rule_of.end()) break;
        h = rit->second.q;
      }
      if (target < 0) {
        target = add_vertex(h);
        queue.push_back(target);
      }
      a.next[v][r] = target;
    }
  }
  finalize_automaton(a);
  GeodesicDFA as_dfa;
  as_dfa.next = a.next;
  out.minimized_size = minimize(as_dfa, n).size();
  if (out.minimized_size < a.size())
    out.notes.push_back(std::to_string(a.size() - out.minimized_size) +
                        " vertices have the same future as another vertex");

  if (is_triangle(c.kind)) {
    const auto [s, t, u] = c.roles;
    Roles r{s, t, u};
    auto add_words = [&](const std::vector<Word>& ws) {
      out.listed_vertices.insert(out.listed_vertices.end(), ws.begin(), ws.end());
    };
    if (c.triangle_class == 1) {
      for (const auto& p : triangle_roles(c)) {
        if (p.s > p.t) continue;
        add_words(dihedral_words(p.s, p.t, W.m(p.s, p.t)));
        out.listed_vertices.push_back(concat(longest_dihedral_word(p.s, p.t, W.m(p.s, p.t)), {p.u}));
      }
    } else if (c.triangle_class == 2) {
      add_words(dihedral_words(s, t, W.m(s, t)));
      add_words(dihedral_words(t, u, W.m(t, u)));
      add_words(dihedral_words(u, s, W.m(u, s)));
      out.listed_vertices.push_back(expand(W, r, "sut"));
      for (const char* w : {"xsu", "xu", "xut", "xuts", "yus", "ys", "yst", "ystu"})
        out.listed_vertices.push_back(expand(W, r, w));
      out.claimed_vertices = static_cast<std::size_t>(c.triple[0] + c.triple[1] + c.triple[2] + 4);
    }
  } else {
    for (std::size_t i = 0; i < c.cycle.size(); ++i) {
      int p = c.cycle[i], q = c.cycle[(i + 1) % c.cycle.size()];
      auto ws = dihedral_words(p, q, W.m(p, q));
      out.listed_vertices.insert(out.listed_vertices.end(), ws.begin(), ws.end());
    }
  }
  // One normal form per element; products such as x*s are not reduced as words.
  std::vector<Word> unique;
  std::unordered_map<std::string, bool> seen;
  for (const auto& w : out.listed_vertices) {
    auto g = W.word_to_element(w);
    if (seen.emplace(W.key(g), true).second) unique.push_back(W.shortlex_nf(g));
  }
  out.listed_vertices = std::move(unique);
  return out;
}

}  // namespace coxwalk
