#include "coxwalk/cones.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace coxwalk {

bool in_cone(const CoxeterSystem& W, const GroupElement& u, const GroupElement& x) {
  return W.length(x) == W.length(u) + W.length(W.multiply(W.inverse(u), x));
}

std::optional<int> boundary_depth(const CoxeterSystem& W, const GroupElement& u, const GroupElement& x, int L_max) {
  if (!in_cone(W, u, x)) return 0;
  std::unordered_set<std::string> seen{W.key(x)};
  std::vector<GroupElement> frontier{x};
  for (int r = 1; r <= L_max; ++r) {
    std::vector<GroupElement> next;
    for (const auto& g : frontier)
      for (std::size_t s = 0; s < W.rank(); ++s) {
        auto h = g;
        W.right_multiply_in_place(h, static_cast<int>(s));
        if (!seen.insert(W.key(h)).second) continue;
        if (!in_cone(W, u, h)) return r;
        next.push_back(std::move(h));
      }
    frontier = std::move(next);
  }
  return std::nullopt;
}

namespace {

bool is_simple(const Root& r) {
  int nz = 0;
  for (const auto& c : r) nz += !c.is_zero();
  return nz == 1;
}

}  // namespace

int root_depth(const CoxeterSystem& W, Root gamma, int cap) {
  const auto& F = W.field();
  const int n = static_cast<int>(W.rank());
  int d = 0;
  while (d < cap) {
    if (is_simple(gamma)) return std::min(d + 1, cap);
    // some s has B(gamma, alpha_s) > 0, and reflecting in it lowers the depth by one
    int pick = -1;
    for (int s = 0; s < n && pick < 0; ++s) {
      FieldScalar b = F.zero();
      for (int t = 0; t < n; ++t)
        if (!gamma[t].is_zero()) b += F.mul(gamma[t], W.bilinear(t, s));
      if (F.sign(b) > 0) pick = s;
    }
    if (pick < 0) throw std::logic_error("root_depth: argument is not a positive root");
    W.reflect_in_place(pick, gamma);
    ++d;
  }
  return cap;
}

int cone_depth(const CoxeterSystem& W, const CannonAutomaton& a, int type, const Word& w, int cap) {
  if (a.roots.empty()) throw std::invalid_argument("cone_depth needs the generic automaton");
  int best = cap;
  for (int b : a.payload[type]) {
    Root g = a.roots[b];
    for (int s : w) W.reflect_in_place(s, g);
    if (W.root_sign(g) < 0) return 0;
    best = std::min(best, root_depth(W, std::move(g), best));
  }
  return best;
}

ConeDepthCache::ConeDepthCache(const CoxeterSystem& W, const CannonAutomaton& a, int type, int cap)
    : W_(&W), a_(&a), type_(type), cap_(cap), n_(W.rank()), d_(W.field().degree()) {
  if (a.roots.empty()) throw std::invalid_argument("cone_depth needs the generic automaton");
  const auto& F = W.field();
  auto to_int = [&](const Rat& r, long long& out) {
    if (r.get_den() != 1 || !r.get_num().fits_slong_p()) return false;
    out = r.get_num().get_si();
    return true;
  };
  std::vector<FieldScalar> basis;
  FieldScalar p = F.one();
  for (std::size_t i = 0; i < d_; ++i) {
    basis.push_back(p);
    p = F.mul(p, F.lambda());
  }
  mult_.assign(n_ * n_, std::vector<long long>(d_ * d_, 0));
  for (std::size_t s = 0; s < n_ && integral_; ++s)
    for (std::size_t t = 0; t < n_ && integral_; ++t) {
      if (s == t) continue;
      const auto c = F.two_cos(W.m(static_cast<int>(s), static_cast<int>(t)));
      for (std::size_t j = 0; j < d_ && integral_; ++j) {
        const auto col = F.mul(c, basis[j]);
        for (std::size_t i = 0; i < d_ && integral_; ++i) integral_ = to_int(col[i], mult_[s * n_ + t][i * d_ + j]);
      }
    }
  const double lam = F.to_double(F.lambda());
  for (std::size_t i = 0; i < d_; ++i) lambda_pow_.push_back(i == 0 ? 1.0 : lambda_pow_.back() * lam);
  for (int b : a.payload[type]) {
    std::vector<Coeff> r(n_ * d_, 0);
    for (std::size_t t = 0; t < n_ && integral_; ++t)
      for (std::size_t i = 0; i < d_ && integral_; ++i) {
        long long v = 0;
        integral_ = to_int(a.roots[b][t][i], v);
        r[t * d_ + i] = v;
      }
    payload_.push_back(std::move(r));
  }
}

bool ConeDepthCache::two_b(int s, const std::vector<Coeff>& r, std::vector<Coeff>& out) const {
  // 2B(r, alpha_s) = 2 r_s - sum_t c_st r_t
  for (std::size_t i = 0; i < d_; ++i)
    if (__builtin_mul_overflow(r[s * d_ + i], Coeff{2}, &out[i])) return false;
  for (std::size_t t = 0; t < n_; ++t) {
    if (static_cast<int>(t) == s) continue;
    const auto& M = mult_[s * n_ + t];
    for (std::size_t i = 0; i < d_; ++i)
      for (std::size_t j = 0; j < d_; ++j) {
        if (M[i * d_ + j] == 0 || r[t * d_ + j] == 0) continue;
        Coeff prod;
        if (__builtin_mul_overflow(r[t * d_ + j], Coeff{M[i * d_ + j]}, &prod)) return false;
        if (__builtin_sub_overflow(out[i], prod, &out[i])) return false;
      }
  }
  return true;
}

bool ConeDepthCache::reflect(int s, std::vector<Coeff>& r) const {
  // r_s <- r_s - 2B(r, alpha_s)
  std::vector<Coeff> b(d_);
  if (!two_b(s, r, b)) return false;
  for (std::size_t i = 0; i < d_; ++i)
    if (__builtin_sub_overflow(r[s * d_ + i], b[i], &r[s * d_ + i])) return false;
  return true;
}

std::optional<int> ConeDepthCache::sign(const Coeff* x) const {
  double v = 0, mag = 0;
  bool zero = true;
  for (std::size_t i = 0; i < d_; ++i) {
    if (x[i] == 0) continue;
    zero = false;
    const double c = static_cast<double>(x[i]);
    v += c * lambda_pow_[i];
    mag += std::fabs(c) * lambda_pow_[i];
  }
  if (zero) return 0;
  if (d_ == 1) return v > 0 ? 1 : -1;
  // conversion, the powers of lambda and the sum each lose a few ulps
  const double err = mag * (8.0 * static_cast<double>(d_) + 16.0) * 0x1p-52;
  if (v > 4 * err) return 1;
  if (v < -4 * err) return -1;
  return std::nullopt;
}

std::optional<int> ConeDepthCache::fast(const Word& w) const {
  int best = cap_;
  std::vector<Coeff> b(d_);
  for (auto g : payload_) {
    for (int s : w)
      if (!reflect(s, g)) return std::nullopt;
    // a root is positive or negative as a whole, so its first nonzero coordinate decides
    for (std::size_t t = 0; t < n_; ++t) {
      auto sg = sign(&g[t * d_]);
      if (!sg) return std::nullopt;
      if (*sg < 0) return 0;
      if (*sg > 0) break;
    }
    int d = 0;
    while (d < best) {
      int pick = -1;
      for (int s = 0; s < static_cast<int>(n_) && pick < 0; ++s) {
        std::fill(b.begin(), b.end(), Coeff{0});
        if (!two_b(s, g, b)) return std::nullopt;
        auto sg = sign(b.data());
        if (!sg) return std::nullopt;
        if (*sg > 0) pick = s;
      }
      if (pick < 0) throw std::logic_error("cone depth: transformed root is not positive");
      if (!reflect(pick, g)) return std::nullopt;
      ++d;
      // only alpha_pick itself turns negative
      bool negative = false;
      for (std::size_t i = 0; i < d_; ++i) negative = negative || g[pick * d_ + i] != 0;
      for (std::size_t t = 0; t < n_ && negative; ++t)
        for (std::size_t i = 0; i < d_; ++i)
          if (static_cast<int>(t) != pick && g[t * d_ + i] != 0) negative = false;
      if (negative) break;
    }
    best = std::min(best, d);
  }
  return best;
}

int ConeDepthCache::operator()(const Word& w) {
  auto compute = [&] {
    if (integral_)
      if (auto r = fast(w)) return *r;
    ++fallbacks_;
    return cone_depth(*W_, *a_, type_, w, cap_);
  };
  // long words rarely repeat
  if (w.size() > 32) return compute();
  auto it = memo_.find(w);
  if (it == memo_.end()) it = memo_.emplace(w, compute()).first;
  return it->second;
}

namespace {

// Every accepted z from `type` with |z| <= depth keeps w*z deeper than L1.
bool certify(const CoxeterSystem& W, const CannonAutomaton& a, int type, const Word& w, int L1, int depth,
             std::size_t& checked) {
  std::vector<Root> base;
  for (int b : a.payload[type]) {
    Root g = a.roots[b];
    for (int s : w) W.reflect_in_place(s, g);
    base.push_back(std::move(g));
  }
  struct Frame {
    std::vector<Root> roots;
    int state;
    int len;
  };
  std::vector<Frame> stack{{base, a.run(w, type), 0}};
  while (!stack.empty()) {
    auto f = std::move(stack.back());
    stack.pop_back();
    ++checked;
    for (const auto& g : f.roots)
      if (W.root_sign(g) < 0 || root_depth(W, g, L1 + 1) <= L1) return false;
    if (f.len == depth) continue;
    for (std::size_t s = 0; s < W.rank(); ++s) {
      int q = a.next[f.state][s];
      if (q < 0) continue;
      auto roots = f.roots;
      for (auto& g : roots) W.reflect_in_place(static_cast<int>(s), g);
      stack.push_back({std::move(roots), q, f.len + 1});
    }
  }
  return true;
}

}  // namespace

DeepSubcone find_deep_subcone(const CoxeterSystem& W, const CannonAutomaton& a, int type, int L1, int search_depth,
                              int max_path, std::size_t beam) {
  if (!a.recurrent[type]) throw std::invalid_argument("find_deep_subcone: cone type is not recurrent");
  struct Cand {
    Word w;
    int state;
    int depth;
  };
  std::vector<Cand> layer{{{}, type, 0}};
  const int cap = L1 + search_depth + 8;
  for (int len = 1; len <= max_path; ++len) {
    std::vector<Cand> next;
    std::unordered_set<std::string> seen;
    for (const auto& c : layer)
      for (std::size_t s = 0; s < W.rank(); ++s) {
        int q = a.next[c.state][s];
        if (q < 0) continue;
        Word w = c.w;
        w.push_back(static_cast<int>(s));
        if (!seen.insert(W.key(W.word_to_element(w))).second) continue;
        next.push_back({w, q, cone_depth(W, a, type, w, cap)});
      }
    std::stable_sort(next.begin(), next.end(), [](const Cand& x, const Cand& y) { return x.depth > y.depth; });
    for (const auto& c : next) {
      if (c.state != type || c.depth <= L1) continue;
      DeepSubcone out;
      if (certify(W, a, type, c.w, L1, search_depth, out.checked)) {
        out.path = c.w;
        out.certified_depth = search_depth;
        return out;
      }
    }
    if (next.size() > beam) next.resize(beam);
    layer = std::move(next);
  }
  throw std::runtime_error("find_deep_subcone: nothing certified within " + std::to_string(max_path) +
                           " letters; try a larger search depth or path bound");
}

}  // namespace coxwalk
