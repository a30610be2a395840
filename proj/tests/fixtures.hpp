#pragma once

#include <vector>

#include "containerbench.hpp"

namespace fixture {

using namespace cbench;

inline Graph triangle() { return Graph(3, {{0, 1}, {0, 2}, {1, 2}}); }

inline Graph complete(std::size_t n) {
  std::vector<std::pair<Vertex, Vertex>> e;
  for (Vertex u = 0; u < static_cast<Vertex>(n); ++u)
    for (Vertex v = u + 1; v < static_cast<Vertex>(n); ++v) e.emplace_back(u, v);
  return Graph(n, e);
}

// "Adjacent variables differ" over two colours on a triangle.
inline Csp triangle_colouring() {
  std::vector<Constraint> cs;
  for (auto scope : std::vector<std::vector<int>>{{0, 1}, {0, 2}, {1, 2}})
    cs.push_back({scope, {{0, 0}, {1, 1}}});
  return Csp(3, 2, 2, cs);
}

inline Csp not_all_equal() { return Csp(3, 2, 3, {{{0, 1, 2}, {{0, 0, 0}, {1, 1, 1}}}}); }

}  // namespace fixture
