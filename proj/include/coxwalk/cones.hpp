#pragma once

// Cone membership and distance to the complement of a cone.

#include "coxwalk/automaton.hpp"

#include <map>
#include <optional>

namespace coxwalk {

// x in C(u)  iff  l(x) = l(u) + l(u^-1 x).
bool in_cone(const CoxeterSystem& W, const GroupElement& u, const GroupElement& x);

// Least L <= L_max such that some z outside C(u) has d(x, z) <= L, found by
// breadth-first search from x; nullopt when none exists (x in Int_{L_max} C(u)).
// Returns 0 when x itself is outside C(u).
std::optional<int> boundary_depth(const CoxeterSystem& W, const GroupElement& u, const GroupElement& x, int L_max);

// Depth of a positive root: least l(v) with v(gamma) < 0, capped at `cap`.
int root_depth(const CoxeterSystem& W, Root gamma, int cap);

// Distance from u*w to W \ C(u) for any u of cone type `type`, computed from
// the minimal roots of the type as min over beta of depth(w^-1 beta).  The
// value does not depend on u.  0 if w is not in the cone type; capped at `cap`.
int cone_depth(const CoxeterSystem& W, const CannonAutomaton& a, int type, const Word& w, int cap);

// cone_depth for a fixed type and cap, memoized on the word.  Roots are
// carried with 128-bit integer coefficients over Z[lambda] and signs decided by
// a certified floating filter; overflow or an undecided sign falls back to
// cone_depth.
class ConeDepthCache {
 public:
  ConeDepthCache(const CoxeterSystem& W, const CannonAutomaton& a, int type, int cap);
  int operator()(const Word& w);
  int type() const { return type_; }
  int cap() const { return cap_; }
  std::size_t size() const { return memo_.size(); }
  std::size_t fallbacks() const { return fallbacks_; }

 private:
  using Coeff = __int128;
  std::optional<int> fast(const Word& w) const;
  bool reflect(int s, std::vector<Coeff>& r) const;
  bool two_b(int s, const std::vector<Coeff>& r, std::vector<Coeff>& out) const;
  std::optional<int> sign(const Coeff* x) const;

  const CoxeterSystem* W_;
  const CannonAutomaton* a_;
  int type_;
  int cap_;
  std::size_t n_ = 0, d_ = 0;
  bool integral_ = true;
  // mult_[s*n+t] is multiplication by 2cos(pi/m_st) on Z[lambda], d x d row-major
  std::vector<std::vector<long long>> mult_;
  std::vector<double> lambda_pow_;
  std::vector<std::vector<Coeff>> payload_;
  std::map<Word, int> memo_;
  std::size_t fallbacks_ = 0;
};

struct DeepSubcone {
  Word path;  // reduced word pi with v = u * pi, T(v) = T
  int certified_depth = 0;
  std::size_t checked = 0;  // elements of C(v) examined
};

// Searches for v in C(u) (u the representative of `type`) with T(v) = T and
// every element of C(v) within `search_depth` of v at distance > L1 from the
// complement of C(u).  Beam search over paths from T, preferring deep ones.
// Throws std::runtime_error when nothing is certified within max_path letters.
DeepSubcone find_deep_subcone(const CoxeterSystem& W, const CannonAutomaton& a, int type, int L1,
                              int search_depth, int max_path = 60, std::size_t beam = 48);

}  // namespace coxwalk
