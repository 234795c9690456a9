#pragma once

#include <span>
#include <vector>

#include "mdst/frame.hpp"
#include "mdst/rng.hpp"

namespace mdst {

struct Route {
  ProcId dest = 0;
  double d = 0.0;
  int hops = 0;
  int port = -1;  // neighbor vertex index of the next hop, -1 for self
};

/// Distance-vector routing keyed by process id, plus the separation
/// aggregate over the tree toward the minimum id.
struct ApspState {
  std::vector<Route> table;  // sorted by dest
  SepAggregate agg;
  SepBroadcast bcast;
};

/// What the routing layer reads from the naming layer.
struct NamingInput {
  bool ready = false;
  ProcId id = 0;
  std::span<const ProcId> ids;  // sorted, duplicate-free
  int n_est = 1;
};

void apsp_init_clean(ApspState& s, ProcId id);
void apsp_randomize(ApspState& s, std::span<const PortSlot> ports, Rng& rng, std::span<const ProcId> id_pool);

/// One update round from the neighbors' cached vectors. Unless the naming
/// layer is ready the table collapses to {self: 0}. Entries whose hop count
/// reaches n_est or whose destination is not a known id are purged.
void apsp_step(ApspState& s, const NamingInput& in, std::span<const PortSlot> ports);

[[nodiscard]] const Route* find_route(const ApspState& s, ProcId dest);
/// Every known id has a finite entry.
[[nodiscard]] bool apsp_complete(const ApspState& s, const NamingInput& in);
/// Neighbor index of the next hop toward the minimum id; -1 at the root or when unknown.
[[nodiscard]] int apsp_tree_parent(const ApspState& s, const NamingInput& in);
[[nodiscard]] double own_separation(const ApspState& s);

[[nodiscard]] ApspView apsp_view(const ApspState& s);
void hash_apsp(Digest& h, const ApspState& s);
[[nodiscard]] std::size_t apsp_state_bits(const ApspState& s);

}  // namespace mdst
