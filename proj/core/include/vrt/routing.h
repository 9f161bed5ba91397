#ifndef VRT_ROUTING_H
#define VRT_ROUTING_H

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "vrt/config.h"

namespace vrt {

// viewer excludes subject as a relay (local-ledger COMPROMISED verdict).
using ExcludeFn = std::function<bool(std::uint32_t viewer, std::uint32_t subject)>;

// RSU backbone adjacency, nodes addressed by RSU index.
struct Backbone {
  std::vector<std::vector<std::uint32_t>> adj;

  std::uint32_t size() const { return static_cast<std::uint32_t>(adj.size()); }
};

// Shortest path by hop count from src to dst, optionally excluding relays
// (src and dst are never excluded). Returns the node sequence including
// both endpoints, or nullopt.
std::optional<std::vector<std::uint32_t>> shortest_path(
    const Backbone& bb, std::uint32_t src, std::uint32_t dst,
    const std::function<bool(std::uint32_t)>& exclude_relay = nullptr);

// Minimal-ish neighbor subset covering the strict 2-hop neighborhood
// (greedy largest-cover selection).
std::vector<std::uint32_t> mpr_select(const Backbone& bb, std::uint32_t node);

// On-demand routing with per-node path caches. Discovery is modeled as a
// breadth-first flood over the backbone honoring the discovering node's
// exclusions; the resulting source route is cached until a node on it
// becomes excluded.
class ReactiveRouting {
 public:
  explicit ReactiveRouting(const Backbone& bb) : bb_(&bb), cache_(bb.size()) {}

  struct Route {
    std::vector<std::uint32_t> path;  // node .. dst
    bool fresh = false;               // true when discovery ran this call
  };

  std::optional<Route> route(std::uint32_t node, std::uint32_t dst,
                             bool filter, const ExcludeFn& excluded);

  void invalidate_through(std::uint32_t subject);

 private:
  const Backbone* bb_;
  std::vector<std::map<std::uint32_t, std::vector<std::uint32_t>>> cache_;
};

// Periodic link-state routing. Each update recomputes the node's next-hop
// table from the flooded topology, dropping excluded nodes first. Tables
// are unavailable until the first update has run.
class LinkStateRouting {
 public:
  explicit LinkStateRouting(const Backbone& bb);

  void update(std::uint32_t node, bool filter, const ExcludeFn& excluded);
  void update_all(bool filter, const ExcludeFn& excluded);

  bool ready(std::uint32_t node) const { return ready_[node]; }
  // -1 when no route.
  std::int32_t next_hop(std::uint32_t node, std::uint32_t dst) const;

 private:
  const Backbone* bb_;
  std::vector<bool> ready_;
  std::vector<std::vector<std::int32_t>> next_;
};

// Periodic sequenced distance-vector routing. Information propagates one
// hop per exchange round, so convergence after a change takes on the order
// of the network diameter in rounds. Metrics beyond the hop budget are
// invalid routes.
class DistanceVectorRouting {
 public:
  DistanceVectorRouting(const Backbone& bb, std::uint32_t max_metric);

  // One synchronous exchange round for every node.
  void round(bool filter, const ExcludeFn& excluded);

  std::int32_t next_hop(std::uint32_t node, std::uint32_t dst) const;
  std::uint32_t metric(std::uint32_t node, std::uint32_t dst) const;
  std::uint32_t rounds_run() const { return rounds_; }

 private:
  const Backbone* bb_;
  std::uint32_t max_metric_;
  std::uint32_t rounds_ = 0;
  std::vector<std::vector<std::uint32_t>> dist_;
  std::vector<std::vector<std::int32_t>> next_;
};

}  // namespace vrt

#endif
