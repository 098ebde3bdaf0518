#include "segkit/maxflow.hpp"

#include "segkit/voc.hpp"

#include <algorithm>
#include <deque>
#include <limits>

namespace segkit {

MaxFlowGraph::MaxFlowGraph(int node_count)
    : n_(node_count),
      adjacency_(static_cast<std::size_t>(node_count) + 2),
      source_cap_(static_cast<std::size_t>(node_count), 0.0),
      sink_cap_(static_cast<std::size_t>(node_count), 0.0) {}

void MaxFlowGraph::add_edge(int u, int v, double cap, double rev_cap) {
  if (u < 0 || u >= n_ || v < 0 || v >= n_ || u == v) throw Error("maxflow: bad edge endpoints");
  if (cap < 0 || rev_cap < 0) throw Error("maxflow: negative capacity");
  auto& alist = adjacency_[static_cast<std::size_t>(u)];
  auto& blist = adjacency_[static_cast<std::size_t>(v)];
  alist.push_back({v, static_cast<int>(blist.size()), cap});
  blist.push_back({u, static_cast<int>(alist.size()) - 1, rev_cap});
}

void MaxFlowGraph::add_terminal(int node, double cap_from_source, double cap_to_sink) {
  if (node < 0 || node >= n_) throw Error("maxflow: bad terminal node");
  if (cap_from_source < 0 || cap_to_sink < 0) throw Error("maxflow: negative capacity");
  source_cap_[static_cast<std::size_t>(node)] += cap_from_source;
  sink_cap_[static_cast<std::size_t>(node)] += cap_to_sink;
}

bool MaxFlowGraph::bfs_levels() {
  level_.assign(adjacency_.size(), -1);
  std::deque<int> queue;
  level_[static_cast<std::size_t>(source())] = 0;
  queue.push_back(source());
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (const Arc& arc : adjacency_[static_cast<std::size_t>(u)]) {
      if (arc.cap > 0.0 && level_[static_cast<std::size_t>(arc.to)] < 0) {
        level_[static_cast<std::size_t>(arc.to)] = level_[static_cast<std::size_t>(u)] + 1;
        queue.push_back(arc.to);
      }
    }
  }
  return level_[static_cast<std::size_t>(sink())] >= 0;
}

double MaxFlowGraph::push(int node, double limit) {
  if (node == sink()) return limit;
  auto& arcs = adjacency_[static_cast<std::size_t>(node)];
  for (int& i = iter_[static_cast<std::size_t>(node)]; i < static_cast<int>(arcs.size()); ++i) {
    Arc& arc = arcs[static_cast<std::size_t>(i)];
    if (arc.cap <= 0.0 ||
        level_[static_cast<std::size_t>(arc.to)] != level_[static_cast<std::size_t>(node)] + 1) {
      continue;
    }
    const double pushed = push(arc.to, std::min(limit, arc.cap));
    if (pushed > 0.0) {
      arc.cap -= pushed;
      adjacency_[static_cast<std::size_t>(arc.to)][static_cast<std::size_t>(arc.rev)].cap += pushed;
      return pushed;
    }
  }
  return 0.0;
}

double MaxFlowGraph::solve() {
  // Materialize accumulated terminal capacities as ordinary arcs once.
  for (int v = 0; v < n_; ++v) {
    if (source_cap_[static_cast<std::size_t>(v)] > 0.0) {
      auto& slist = adjacency_[static_cast<std::size_t>(source())];
      auto& vlist = adjacency_[static_cast<std::size_t>(v)];
      slist.push_back({v, static_cast<int>(vlist.size()), source_cap_[static_cast<std::size_t>(v)]});
      vlist.push_back({source(), static_cast<int>(slist.size()) - 1, 0.0});
    }
    if (sink_cap_[static_cast<std::size_t>(v)] > 0.0) {
      auto& vlist = adjacency_[static_cast<std::size_t>(v)];
      auto& tlist = adjacency_[static_cast<std::size_t>(sink())];
      vlist.push_back({sink(), static_cast<int>(tlist.size()), sink_cap_[static_cast<std::size_t>(v)]});
      tlist.push_back({v, static_cast<int>(vlist.size()) - 1, 0.0});
    }
    source_cap_[static_cast<std::size_t>(v)] = 0.0;
    sink_cap_[static_cast<std::size_t>(v)] = 0.0;
  }

  double flow = 0.0;
  while (bfs_levels()) {
    iter_.assign(adjacency_.size(), 0);
    while (true) {
      const double pushed = push(source(), std::numeric_limits<double>::infinity());
      if (pushed <= 0.0) break;
      flow += pushed;
    }
  }
  solved_ = true;  // final bfs_levels() left the residual reachability in level_
  return flow;
}

bool MaxFlowGraph::in_source_side(int node) const {
  if (!solved_) throw Error("maxflow: cut queried before solve()");
  return level_[static_cast<std::size_t>(node)] >= 0;
}

}  // namespace segkit
