#pragma once

#include "coxwalk/field.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace coxwalk {

// Letters are generator indices 0..rank-1; the index order is the ShortLex order.
using Word = std::vector<int>;
using Root = std::vector<FieldScalar>;

struct GroupElement {
  // Column j holds the coordinates of g(alpha_j) in the simple-root basis.
  std::vector<std::vector<FieldScalar>> matrix;
  std::optional<Word> cached_nf;

  std::optional<std::size_t> cached_length() const {
    if (cached_nf) return cached_nf->size();
    return std::nullopt;
  }
};

enum class SystemKind {
  SphericalTriangle,
  AffineTriangle,
  FuchsianTriangle,
  FuchsianPolygon,
  RightAngledAffine,
  Other,
};

struct Classification {
  SystemKind kind = SystemKind::Other;
  // Triangle data: sorted (a, b, c) and the generators (s, t, u) with
  // m_st = a, m_tu = b, m_us = c.  triangle_class is 1, 2 or 3.
  std::array<int, 3> triple{};
  std::array<int, 3> roles{};
  int triangle_class = 0;
  // Polygon data: generators in cyclic order, k_i = m(cycle[i], cycle[i+1]).
  std::vector<int> cycle;
  std::vector<int> k;

  bool fuchsian() const {
    return kind == SystemKind::FuchsianTriangle || kind == SystemKind::FuchsianPolygon;
  }
  std::string describe() const;
};

class CoxeterSystem {
 public:
  CoxeterSystem(std::vector<std::string> labels, CoxeterMatrix m);
  // Generators "1","2","3" with m_12 = a, m_23 = b, m_13 = c.
  static CoxeterSystem triangle(int a, int b, int c);
  // Generators "1".."n" in cyclic order, m_{i,i+1} = k_i, all other pairs inf.
  static CoxeterSystem polygon(const std::vector<int>& k);

  std::size_t rank() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const CoxeterMatrix& matrix() const { return m_; }
  int m(int s, int t) const { return m_[s][t]; }
  const AlgebraicField& field() const { return field_; }
  // B(alpha_s, alpha_t) = -cos(pi/m_st).
  const FieldScalar& bilinear(int s, int t) const { return B_[s][t]; }

  Word parse_word(const std::string& text) const;
  std::string format_word(const Word& w) const;

  // Roots.
  Root simple_root(int s) const;
  // sigma_s applied to r (only coordinate s changes).
  void reflect_in_place(int s, Root& r) const;
  FieldScalar form(const Root& a, const Root& b) const;
  // +1 for positive, -1 for negative.
  int root_sign(const Root& r) const;

  // Elements.
  GroupElement identity() const;
  GroupElement generator(int s) const;
  GroupElement word_to_element(const Word& w) const;
  GroupElement multiply(const GroupElement& a, const GroupElement& b) const;
  GroupElement inverse(const GroupElement& a) const;
  bool equals(const GroupElement& a, const GroupElement& b) const { return a.matrix == b.matrix; }
  std::string key(const GroupElement& g) const;
  void right_multiply_in_place(GroupElement& g, int s) const;
  void left_multiply_in_place(GroupElement& g, int s) const;
  Root apply(const GroupElement& g, const Root& r) const;

  bool is_right_ascent(const GroupElement& g, int s) const;
  bool is_left_descent(const GroupElement& g, int s) const;
  std::size_t length(const GroupElement& g) const;
  // Some reduced word, found by stripping right descents.
  Word reduced_word(const GroupElement& g) const;
  Word shortlex_nf(const GroupElement& g) const;
  GroupElement normalized(GroupElement g) const;
  bool is_reduced(const Word& w) const;

  bool is_finite_parabolic(const std::vector<int>& subset) const;
  Classification classify() const;

 private:
  std::vector<std::string> labels_;
  CoxeterMatrix m_;
  AlgebraicField field_;
  std::vector<std::vector<FieldScalar>> B_;
  // c_st = 2cos(pi/m_st) with c_ss = -2, so sigma_s(alpha_t) = alpha_t + c_st alpha_s.
  std::vector<std::vector<FieldScalar>> c_;
  std::vector<std::vector<bool>> c_zero_;
  bool single_char_labels_ = true;
};

// Longest element of the dihedral parabolic W_{st} as the word starting with s.
Word longest_dihedral_word(int s, int t, int m);
Word concat(const Word& a, const Word& b);

}  // namespace coxwalk
