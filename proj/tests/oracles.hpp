#pragma once

// Brute-force reference computations shared by the unit and acceptance tests.
// Nothing here uses descent tests or automata: elements are compared by their
// exact matrices and lengths come from breadth-first search over the Cayley graph.

#include "coxwalk/coxeter.hpp"

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

namespace oracle {

struct Ball {
  std::vector<coxwalk::GroupElement> elements;
  std::vector<coxwalk::Word> words;  // a geodesic word found by the BFS
  std::vector<int> dist;
  std::unordered_map<std::string, int> index;
  std::vector<std::size_t> sphere;  // sphere sizes 0..radius
};

inline Ball bfs_ball(const coxwalk::CoxeterSystem& W, int radius) {
  Ball b;
  auto e = W.identity();
  b.index[W.key(e)] = 0;
  b.elements.push_back(e);
  b.words.push_back({});
  b.dist.push_back(0);
  b.sphere.push_back(1);
  std::size_t begin = 0;
  for (int d = 0; d < radius; ++d) {
    std::size_t end = b.elements.size();
    std::size_t added = 0;
    for (std::size_t i = begin; i < end; ++i)
      for (std::size_t s = 0; s < W.rank(); ++s) {
        auto g = b.elements[i];
        W.right_multiply_in_place(g, static_cast<int>(s));
        auto k = W.key(g);
        if (b.index.count(k)) continue;
        b.index[k] = static_cast<int>(b.elements.size());
        b.elements.push_back(g);
        auto w = b.words[i];
        w.push_back(static_cast<int>(s));
        b.words.push_back(w);
        b.dist.push_back(d + 1);
        ++added;
      }
    b.sphere.push_back(added);
    begin = end;
  }
  return b;
}

}  // namespace oracle
