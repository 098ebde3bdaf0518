#pragma once

#include <vector>

namespace segkit {

/// Exact s-t max-flow / min-cut (Dinic's algorithm) on a graph of `n` user
/// nodes plus an implicit source and sink. Capacities are non-negative reals.
/// Termination is bounded by the level argument, independent of capacity
/// values. After solve(), the minimum cut is (source side, rest).
class MaxFlowGraph {
 public:
  explicit MaxFlowGraph(int node_count);

  int source() const { return n_; }
  int sink() const { return n_ + 1; }

  /// Undirected-style edge: forward and reverse residual capacities.
  void add_edge(int u, int v, double cap, double rev_cap);

  /// Accumulates terminal capacities source->node and node->sink.
  void add_terminal(int node, double cap_from_source, double cap_to_sink);

  double solve();

  /// Valid after solve(): true iff `node` sits on the source side of the cut.
  bool in_source_side(int node) const;

 private:
  struct Arc {
    int to;
    int rev;  // index of the reverse arc in adjacency[to]
    double cap;
  };

  bool bfs_levels();
  double push(int node, double limit);

  int n_;
  std::vector<std::vector<Arc>> adjacency_;
  std::vector<double> source_cap_;
  std::vector<double> sink_cap_;
  std::vector<int> level_;
  std::vector<int> iter_;
  bool solved_ = false;
};

}  // namespace segkit
