#pragma once

// Independent reference computations used by the test suites. Nothing here calls
// into the library except for the value types it returns.

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

inline std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline std::uint64_t catalan(int n) { return binomial(2 * n, n) / (n + 1); }

// Weakly increasing sequences of length m+1 with values in [0, m2].
inline std::vector<std::vector<int>> monotone_sequences(int m, int m2) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> go = [&](int lo) {
    if (static_cast<int>(cur.size()) == m + 1) {
      out.push_back(cur);
      return;
    }
    for (int v = lo; v <= m2; ++v) {
      cur.push_back(v);
      go(v);
      cur.pop_back();
    }
  };
  go(0);
  return out;
}

struct Edge {
  std::string name;
  int src, tgt;
};

// Paths of length 0..max_len, as (start vertex, edge names in order of traversal).
inline std::set<std::pair<int, std::vector<std::string>>> graph_paths(int vertices, const std::vector<Edge>& edges,
                                                                      int max_len) {
  std::set<std::pair<int, std::vector<std::string>>> out;
  std::vector<std::string> cur;
  std::function<void(int, int)> dfs = [&](int start, int at) {
    out.insert({start, cur});
    if (static_cast<int>(cur.size()) == max_len) return;
    for (const auto& e : edges)
      if (e.src == at) {
        cur.push_back(e.name);
        dfs(start, e.tgt);
        cur.pop_back();
      }
  };
  for (int v = 0; v < vertices; ++v) dfs(v, v);
  return out;
}

// Composable chains x0 -f1-> x1 -f2-> ... of m morphisms in a category given by its arrows.
inline std::size_t chain_count(const std::vector<Edge>& mors, int objects, int m) {
  std::vector<std::size_t> ways(objects, 1);  // chains of current length ending at each object
  for (int step = 0; step < m; ++step) {
    std::vector<std::size_t> next(objects, 0);
    for (const auto& f : mors) next[f.tgt] += ways[f.src];
    ways = next;
  }
  std::size_t total = 0;
  for (auto w : ways) total += w;
  return total;
}

}  // namespace oracle
