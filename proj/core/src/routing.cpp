#include "vrt/routing.h"

#include <algorithm>
#include <deque>
#include <limits>
#include <set>

namespace vrt {

std::optional<std::vector<std::uint32_t>> shortest_path(
    const Backbone& bb, std::uint32_t src, std::uint32_t dst,
    const std::function<bool(std::uint32_t)>& exclude_relay) {
  const std::uint32_t n = bb.size();
  if (src >= n || dst >= n) return std::nullopt;
  if (src == dst) return std::vector<std::uint32_t>{src};
  std::vector<std::int32_t> prev(n, -2);  // -2 unvisited, -1 root
  std::deque<std::uint32_t> q;
  prev[src] = -1;
  q.push_back(src);
  while (!q.empty()) {
    const std::uint32_t u = q.front();
    q.pop_front();
    for (std::uint32_t v : bb.adj[u]) {
      if (prev[v] != -2) continue;
      if (v != dst && exclude_relay && exclude_relay(v)) continue;
      prev[v] = static_cast<std::int32_t>(u);
      if (v == dst) {
        std::vector<std::uint32_t> path{dst};
        std::uint32_t cur = dst;
        while (prev[cur] >= 0) {
          cur = static_cast<std::uint32_t>(prev[cur]);
          path.push_back(cur);
        }
        std::reverse(path.begin(), path.end());
        return path;
      }
      q.push_back(v);
    }
  }
  return std::nullopt;
}

std::vector<std::uint32_t> mpr_select(const Backbone& bb, std::uint32_t node) {
  std::set<std::uint32_t> one_hop(bb.adj[node].begin(), bb.adj[node].end());
  std::set<std::uint32_t> two_hop;
  for (std::uint32_t n1 : one_hop)
    for (std::uint32_t n2 : bb.adj[n1])
      if (n2 != node && !one_hop.count(n2)) two_hop.insert(n2);

  std::vector<std::uint32_t> mprs;
  std::set<std::uint32_t> uncovered = two_hop;
  while (!uncovered.empty()) {
    std::uint32_t best = 0;
    std::size_t best_cover = 0;
    for (std::uint32_t n1 : one_hop) {
      std::size_t cover = 0;
      for (std::uint32_t n2 : bb.adj[n1])
        if (uncovered.count(n2)) ++cover;
      if (cover > best_cover) {
        best_cover = cover;
        best = n1;
      }
    }
    if (best_cover == 0) break;  // unreachable two-hop nodes
    mprs.push_back(best);
    for (std::uint32_t n2 : bb.adj[best]) uncovered.erase(n2);
  }
  return mprs;
}

std::optional<ReactiveRouting::Route> ReactiveRouting::route(
    std::uint32_t node, std::uint32_t dst, bool filter,
    const ExcludeFn& excluded) {
  auto& cache = cache_[node];
  auto it = cache.find(dst);
  if (it != cache.end()) {
    bool stale = false;
    if (filter) {
      for (std::size_t i = 1; i + 1 < it->second.size(); ++i)
        if (excluded(node, it->second[i])) {
          stale = true;
          break;
        }
    }
    if (!stale) return Route{it->second, false};
    cache.erase(it);
  }
  std::function<bool(std::uint32_t)> ex;
  if (filter)
    ex = [&](std::uint32_t s) { return excluded(node, s); };
  auto path = shortest_path(*bb_, node, dst, ex);
  if (!path) return std::nullopt;
  cache[dst] = *path;
  return Route{std::move(*path), true};
}

void ReactiveRouting::invalidate_through(std::uint32_t subject) {
  for (auto& cache : cache_) {
    for (auto it = cache.begin(); it != cache.end();) {
      const auto& p = it->second;
      const bool hit = std::find(p.begin(), p.end(), subject) != p.end();
      it = hit ? cache.erase(it) : ++it;
    }
  }
}

LinkStateRouting::LinkStateRouting(const Backbone& bb)
    : bb_(&bb),
      ready_(bb.size(), false),
      next_(bb.size(), std::vector<std::int32_t>(bb.size(), -1)) {}

void LinkStateRouting::update(std::uint32_t node, bool filter,
                              const ExcludeFn& excluded) {
  const std::uint32_t n = bb_->size();
  // BFS tree from `node` over the admissible topology.
  std::vector<std::int32_t> prev(n, -2);
  std::deque<std::uint32_t> q;
  prev[node] = -1;
  q.push_back(node);
  while (!q.empty()) {
    const std::uint32_t u = q.front();
    q.pop_front();
    for (std::uint32_t v : bb_->adj[u]) {
      if (prev[v] != -2) continue;
      if (filter && excluded(node, v)) {
        // Excluded nodes may still be destinations one hop past the tree,
        // but never relays: mark reachability without expanding.
        prev[v] = static_cast<std::int32_t>(u);
        continue;
      }
      prev[v] = static_cast<std::int32_t>(u);
      q.push_back(v);
    }
  }
  auto& nx = next_[node];
  std::fill(nx.begin(), nx.end(), -1);
  for (std::uint32_t d = 0; d < n; ++d) {
    if (d == node || prev[d] == -2) continue;
    std::uint32_t cur = d;
    bool ok = true;
    while (prev[cur] != static_cast<std::int32_t>(node)) {
      if (prev[cur] < 0) {
        ok = false;
        break;
      }
      cur = static_cast<std::uint32_t>(prev[cur]);
    }
    if (ok) nx[d] = static_cast<std::int32_t>(cur);
  }
  ready_[node] = true;
}

void LinkStateRouting::update_all(bool filter, const ExcludeFn& excluded) {
  for (std::uint32_t i = 0; i < bb_->size(); ++i) update(i, filter, excluded);
}

std::int32_t LinkStateRouting::next_hop(std::uint32_t node,
                                        std::uint32_t dst) const {
  if (!ready_[node]) return -1;
  return next_[node][dst];
}

DistanceVectorRouting::DistanceVectorRouting(const Backbone& bb,
                                             std::uint32_t max_metric)
    : bb_(&bb),
      max_metric_(max_metric),
      dist_(bb.size(),
            std::vector<std::uint32_t>(bb.size(),
                                       std::numeric_limits<std::uint32_t>::max())),
      next_(bb.size(), std::vector<std::int32_t>(bb.size(), -1)) {
  for (std::uint32_t i = 0; i < bb.size(); ++i) {
    dist_[i][i] = 0;
    next_[i][i] = static_cast<std::int32_t>(i);
  }
}

void DistanceVectorRouting::round(bool filter, const ExcludeFn& excluded) {
  const std::uint32_t n = bb_->size();
  const auto inf = std::numeric_limits<std::uint32_t>::max();
  auto prev_dist = dist_;  // synchronous exchange: everyone reads last round
  for (std::uint32_t u = 0; u < n; ++u) {
    for (std::uint32_t d = 0; d < n; ++d) {
      if (d == u) continue;
      std::uint32_t best = inf;
      std::int32_t best_next = -1;
      for (std::uint32_t v : bb_->adj[u]) {
        // An excluded neighbor is still usable as the final hop.
        if (filter && excluded(u, v) && v != d) continue;
        const std::uint32_t via = prev_dist[v][d];
        if (via == inf || via + 1 > max_metric_) continue;
        if (via + 1 < best) {
          best = via + 1;
          best_next = static_cast<std::int32_t>(v);
        }
      }
      dist_[u][d] = best;
      next_[u][d] = best_next;
    }
  }
  ++rounds_;
}

std::int32_t DistanceVectorRouting::next_hop(std::uint32_t node,
                                             std::uint32_t dst) const {
  return next_[node][dst];
}

std::uint32_t DistanceVectorRouting::metric(std::uint32_t node,
                                            std::uint32_t dst) const {
  return dist_[node][dst];
}

}  // namespace vrt
