#include "coxwalk/coxeter.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace coxwalk {

Word concat(const Word& a, const Word& b) {
  Word out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

Word longest_dihedral_word(int s, int t, int m) {
  if (m == kInf) throw std::invalid_argument("infinite dihedral group has no longest element");
  Word w;
  for (int i = 0; i < m; ++i) w.push_back(i % 2 == 0 ? s : t);
  return w;
}

namespace {

CoxeterMatrix checked(CoxeterMatrix m) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i].size() != m.size()) throw std::invalid_argument("Coxeter matrix is not square");
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (i == j && m[i][j] != 1) throw std::invalid_argument("Coxeter matrix needs 1 on the diagonal");
      if (i != j && m[i][j] != kInf && m[i][j] < 2)
        throw std::invalid_argument("off-diagonal Coxeter labels must be at least 2 or inf");
    }
  }
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (m[i][j] != m[j][i]) throw std::invalid_argument("Coxeter matrix is not symmetric");
  return m;
}

}  // namespace

CoxeterSystem::CoxeterSystem(std::vector<std::string> labels, CoxeterMatrix m)
    : labels_(std::move(labels)), m_(checked(std::move(m))), field_(AlgebraicField::for_matrix(m_)) {
  const std::size_t n = labels_.size();
  if (n == 0) throw std::invalid_argument("empty generator set");
  if (m_.size() != n) throw std::invalid_argument("Coxeter matrix size does not match generators");
  for (std::size_t i = 0; i < n; ++i) {
    if (labels_[i].empty()) throw std::invalid_argument("empty generator label");
    if (labels_[i].size() != 1) single_char_labels_ = false;
    for (std::size_t j = 0; j < i; ++j)
      if (labels_[i] == labels_[j]) throw std::invalid_argument("duplicate generator label");
  }
  B_.assign(n, std::vector<FieldScalar>(n));
  c_.assign(n, std::vector<FieldScalar>(n));
  c_zero_.assign(n, std::vector<bool>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      c_[i][j] = field_.two_cos(m_[i][j]);
      B_[i][j] = c_[i][j] * Rat(-1, 2);
      c_zero_[i][j] = c_[i][j].is_zero();
    }
}

CoxeterSystem CoxeterSystem::triangle(int a, int b, int c) {
  return CoxeterSystem({"1", "2", "3"}, {{1, a, c}, {a, 1, b}, {c, b, 1}});
}

CoxeterSystem CoxeterSystem::polygon(const std::vector<int>& k) {
  const std::size_t n = k.size();
  if (n < 3) throw std::invalid_argument("polygon needs at least 3 sides");
  CoxeterMatrix m(n, std::vector<int>(n, kInf));
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) {
    m[i][i] = 1;
    labels.push_back(std::to_string(i + 1));
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = (i + 1) % n;
    m[i][j] = m[j][i] = k[i];
  }
  return CoxeterSystem(labels, m);
}

Word CoxeterSystem::parse_word(const std::string& text) const {
  Word w;
  std::string t;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
  bool has_sep = text.find_first_of(" \t,.") != std::string::npos;
  if (t.empty()) return w;
  if (t == "e" && std::find(labels_.begin(), labels_.end(), "e") == labels_.end()) return w;
  auto index_of = [&](const std::string& tok) {
    auto it = std::find(labels_.begin(), labels_.end(), tok);
    if (it == labels_.end()) throw std::invalid_argument("unknown generator '" + tok + "'");
    return static_cast<int>(it - labels_.begin());
  };
  if (single_char_labels_ && !has_sep) {
    for (char ch : t) w.push_back(index_of(std::string(1, ch)));
    return w;
  }
  std::string tok;
  for (char ch : text + " ") {
    if (std::isspace(static_cast<unsigned char>(ch)) || ch == ',' || ch == '.') {
      if (!tok.empty()) w.push_back(index_of(tok));
      tok.clear();
    } else {
      tok += ch;
    }
  }
  return w;
}

std::string CoxeterSystem::format_word(const Word& w) const {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i && !single_char_labels_) s += ' ';
    s += labels_.at(w[i]);
  }
  return s;
}

Root CoxeterSystem::simple_root(int s) const {
  Root r(rank(), field_.zero());
  r[s] = field_.one();
  return r;
}

void CoxeterSystem::reflect_in_place(int s, Root& r) const {
  FieldScalar acc = -r[s];
  for (std::size_t t = 0; t < rank(); ++t) {
    if (static_cast<int>(t) == s || c_zero_[s][t] || r[t].is_zero()) continue;
    if (c_[s][t].is_rational())
      acc += r[t] * c_[s][t][0];
    else
      acc += field_.mul(c_[s][t], r[t]);
  }
  r[s] = std::move(acc);
}

FieldScalar CoxeterSystem::form(const Root& a, const Root& b) const {
  FieldScalar acc = field_.zero();
  for (std::size_t i = 0; i < rank(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < rank(); ++j) {
      if (b[j].is_zero() || B_[i][j].is_zero()) continue;
      acc += field_.mul(field_.mul(a[i], B_[i][j]), b[j]);
    }
  }
  return acc;
}

int CoxeterSystem::root_sign(const Root& r) const {
  for (const auto& x : r)
    if (!x.is_zero()) return field_.sign(x);
  throw std::logic_error("zero vector is not a root");
}

GroupElement CoxeterSystem::identity() const {
  GroupElement g;
  g.matrix.assign(rank(), std::vector<FieldScalar>(rank(), field_.zero()));
  for (std::size_t i = 0; i < rank(); ++i) g.matrix[i][i] = field_.one();
  g.cached_nf = Word{};
  return g;
}

GroupElement CoxeterSystem::generator(int s) const {
  GroupElement g = identity();
  right_multiply_in_place(g, s);
  g.cached_nf = Word{s};
  return g;
}

// (g sigma_s)(alpha_t) = g(alpha_t) + c_st g(alpha_s); column s is negated.
void CoxeterSystem::right_multiply_in_place(GroupElement& g, int s) const {
  const std::size_t n = rank();
  g.cached_nf.reset();
  for (std::size_t t = 0; t < n; ++t) {
    if (static_cast<int>(t) == s || c_zero_[s][t]) continue;
    const FieldScalar& c = c_[s][t];
    for (std::size_t i = 0; i < n; ++i) {
      const FieldScalar& gs = g.matrix[i][s];
      if (gs.is_zero()) continue;
      if (c.is_rational())
        g.matrix[i][t] += gs * c[0];
      else
        g.matrix[i][t] += field_.mul(gs, c);
    }
  }
  for (std::size_t i = 0; i < n; ++i) g.matrix[i][s] = -g.matrix[i][s];
}

void CoxeterSystem::left_multiply_in_place(GroupElement& g, int s) const {
  g.cached_nf.reset();
  const std::size_t n = rank();
  Root col(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) col[i] = g.matrix[i][j];
    reflect_in_place(s, col);
    g.matrix[s][j] = col[s];
  }
}

GroupElement CoxeterSystem::word_to_element(const Word& w) const {
  GroupElement g = identity();
  for (int s : w) {
    if (s < 0 || static_cast<std::size_t>(s) >= rank()) throw std::invalid_argument("bad letter");
    right_multiply_in_place(g, s);
  }
  return g;
}

GroupElement CoxeterSystem::multiply(const GroupElement& a, const GroupElement& b) const {
  const std::size_t n = rank();
  GroupElement out;
  out.matrix.assign(n, std::vector<FieldScalar>(n, field_.zero()));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      if (a.matrix[i][k].is_zero()) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (!b.matrix[k][j].is_zero()) out.matrix[i][j] += field_.mul(a.matrix[i][k], b.matrix[k][j]);
    }
  return out;
}

Root CoxeterSystem::apply(const GroupElement& g, const Root& r) const {
  const std::size_t n = rank();
  Root out(n, field_.zero());
  for (std::size_t j = 0; j < n; ++j) {
    if (r[j].is_zero()) continue;
    for (std::size_t i = 0; i < n; ++i)
      if (!g.matrix[i][j].is_zero()) out[i] += field_.mul(g.matrix[i][j], r[j]);
  }
  return out;
}

std::string CoxeterSystem::key(const GroupElement& g) const {
  std::string k;
  for (const auto& row : g.matrix)
    for (const auto& x : row) {
      k += x.key();
      k += ';';
    }
  return k;
}

bool CoxeterSystem::is_right_ascent(const GroupElement& g, int s) const {
  for (std::size_t i = 0; i < rank(); ++i)
    if (!g.matrix[i][s].is_zero()) return field_.sign(g.matrix[i][s]) > 0;
  throw std::logic_error("singular column");
}

Word CoxeterSystem::reduced_word(const GroupElement& g) const {
  if (g.cached_nf) return *g.cached_nf;
  GroupElement h = g;
  Word rev;
  for (;;) {
    int d = -1;
    for (std::size_t s = 0; s < rank(); ++s)
      if (!is_right_ascent(h, static_cast<int>(s))) {
        d = static_cast<int>(s);
        break;
      }
    if (d < 0) break;
    rev.push_back(d);
    right_multiply_in_place(h, d);
  }
  std::reverse(rev.begin(), rev.end());
  return rev;
}

std::size_t CoxeterSystem::length(const GroupElement& g) const {
  if (g.cached_nf) return g.cached_nf->size();
  return reduced_word(g).size();
}

GroupElement CoxeterSystem::inverse(const GroupElement& a) const {
  Word w = reduced_word(a);
  std::reverse(w.begin(), w.end());
  return word_to_element(w);
}

bool CoxeterSystem::is_left_descent(const GroupElement& g, int s) const {
  return !is_right_ascent(inverse(g), s);
}

// Strip the smallest left descent of g, i.e. the smallest right descent of g^-1.
Word CoxeterSystem::shortlex_nf(const GroupElement& g) const {
  if (g.cached_nf) return *g.cached_nf;
  GroupElement h = inverse(g);
  Word nf;
  for (;;) {
    int d = -1;
    for (std::size_t s = 0; s < rank(); ++s)
      if (!is_right_ascent(h, static_cast<int>(s))) {
        d = static_cast<int>(s);
        break;
      }
    if (d < 0) break;
    nf.push_back(d);
    right_multiply_in_place(h, d);
  }
  return nf;
}

GroupElement CoxeterSystem::normalized(GroupElement g) const {
  if (!g.cached_nf) g.cached_nf = shortlex_nf(g);
  return g;
}

bool CoxeterSystem::is_reduced(const Word& w) const {
  GroupElement g = identity();
  for (int s : w) {
    if (!is_right_ascent(g, s)) return false;
    right_multiply_in_place(g, s);
  }
  return true;
}

bool CoxeterSystem::is_finite_parabolic(const std::vector<int>& subset) const {
  const std::size_t k = subset.size();
  std::vector<std::vector<FieldScalar>> a(k, std::vector<FieldScalar>(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) a[i][j] = B_[subset[i]][subset[j]];
  // Leading principal minors are the running products of the pivots.
  for (std::size_t p = 0; p < k; ++p) {
    if (field_.sign(a[p][p]) <= 0) return false;
    FieldScalar inv = field_.inverse(a[p][p]);
    for (std::size_t i = p + 1; i < k; ++i) {
      if (a[i][p].is_zero()) continue;
      FieldScalar f = field_.mul(a[i][p], inv);
      for (std::size_t j = p; j < k; ++j) a[i][j] -= field_.mul(f, a[p][j]);
    }
  }
  return true;
}

std::string Classification::describe() const {
  auto triple_str = [&] {
    return "(" + std::to_string(triple[0]) + "," + std::to_string(triple[1]) + "," +
           std::to_string(triple[2]) + ")";
  };
  static const char* roman[] = {"", "I", "II", "III"};
  switch (kind) {
    case SystemKind::SphericalTriangle: return "spherical triangle " + triple_str();
    case SystemKind::AffineTriangle:
      return "affine triangle " + triple_str() + " (root of class " + roman[triangle_class] + ")";
    case SystemKind::FuchsianTriangle:
      return "Fuchsian triangle " + triple_str() + " class " + roman[triangle_class];
    case SystemKind::FuchsianPolygon: return "Fuchsian polygon, class IV, n=" + std::to_string(cycle.size());
    case SystemKind::RightAngledAffine: return "right-angled affine quadrilateral";
    case SystemKind::Other: return "other";
  }
  return "other";
}

Classification CoxeterSystem::classify() const {
  Classification c;
  const std::size_t n = rank();
  if (n == 3) {
    if (m_[0][1] == kInf || m_[1][2] == kInf || m_[0][2] == kInf) return c;
    std::array<int, 3> t{m_[0][1], m_[1][2], m_[0][2]};
    std::sort(t.begin(), t.end(), std::greater<>());
    c.triple = t;
    std::array<int, 3> perm{0, 1, 2};
    do {
      if (m_[perm[0]][perm[1]] == t[0] && m_[perm[1]][perm[2]] == t[1] &&
          m_[perm[2]][perm[0]] == t[2]) {
        c.roles = perm;
        break;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    Rat sum = Rat(1, t[0]) + Rat(1, t[1]) + Rat(1, t[2]);
    if (sum > 1) {
      c.kind = SystemKind::SphericalTriangle;
      return c;
    }
    c.triangle_class = t[2] >= 3 ? 1 : (t[1] >= 4 ? 2 : 3);
    c.kind = sum == 1 ? SystemKind::AffineTriangle : SystemKind::FuchsianTriangle;
    return c;
  }
  if (n < 4) return c;
  // Finite entries must form a single n-cycle.
  std::vector<std::vector<int>> nb(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && m_[i][j] != kInf) nb[i].push_back(static_cast<int>(j));
  for (const auto& v : nb)
    if (v.size() != 2) return c;
  std::vector<int> cycle{0};
  int prev = -1, cur = 0;
  while (cycle.size() < n) {
    int next = nb[cur][0] != prev ? nb[cur][0] : nb[cur][1];
    if (next == 0) return c;
    cycle.push_back(next);
    prev = cur;
    cur = next;
  }
  if (nb[cur][0] != 0 && nb[cur][1] != 0) return c;
  c.cycle = cycle;
  Rat sum = 0;
  bool all_two = true;
  for (std::size_t i = 0; i < n; ++i) {
    int k = m_[cycle[i]][cycle[(i + 1) % n]];
    c.k.push_back(k);
    sum += Rat(1, k);
    if (k != 2) all_two = false;
  }
  if (n == 4 && all_two) {
    c.kind = SystemKind::RightAngledAffine;
  } else if (sum < static_cast<long>(n) - 2) {
    c.kind = SystemKind::FuchsianPolygon;
  }
  return c;
}

}  // namespace coxwalk
