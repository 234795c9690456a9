#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "mdst/graph.hpp"
#include "mdst/hash.hpp"

namespace mdst {

using ProcId = std::uint32_t;

// ---- naming layer -------------------------------------------------------

enum class WaveKind : std::uint8_t { Naming = 0, Reset = 1 };

struct WaveKey {
  WaveKind kind = WaveKind::Naming;
  ProcId initiator = 0;
  std::uint32_t seq = 0;

  friend bool operator==(const WaveKey&, const WaveKey&) = default;
  friend auto operator<=>(const WaveKey&, const WaveKey&) = default;
};

/// What a node advertises about one wave it takes part in.
struct WaveAd {
  WaveKey key;
  int hop = 0;
  bool done = false;
  std::vector<ProcId> sub;  // ids collected in the sender's subtree (once done)
};

struct UnView {
  ProcId id = 0;
  std::uint8_t phase = 1;
  std::uint64_t list_digest = 0;  // hash of the sorted id list
  std::vector<WaveAd> waves;
};

// ---- routing layer ------------------------------------------------------

struct RouteAd {
  ProcId dest = 0;
  double d = 0.0;
  int hops = 0;
};

/// Convergecast aggregate over the routing tree toward the minimum id.
struct SepAggregate {
  double max_sep = 0.0;
  double min_sep = kInf;
  ProcId argmin = 0;
  int count = 0;
  bool ready = false;
};

/// Network-wide D and R as rebroadcast from the root.
struct SepBroadcast {
  double diameter = 0.0;
  double radius = 0.0;
  ProcId argmin = 0;
  bool ready = false;
};

struct ApspView {
  std::vector<RouteAd> routes;  // sorted by dest
  SepAggregate agg;
  SepBroadcast bcast;
};

// ---- center layer -------------------------------------------------------

/// Center candidate: a point at `alpha_best` from id1 on edge {id1, id2} of
/// length `weight`, with separation `upbound`. id1 == id2 names a vertex;
/// id1 == id2 == 0 is the no-candidate sentinel.
struct Elt {
  double alpha_best = 0.0;
  double upbound = kInf;
  ProcId id1 = 0;
  ProcId id2 = 0;
  double weight = 0.0;

  [[nodiscard]] bool is_sentinel() const { return id1 == 0 && id2 == 0; }
  [[nodiscard]] bool is_vertex() const { return id1 == id2 && id1 != 0; }
  friend bool operator==(const Elt&, const Elt&) = default;
};

/// Strict order used everywhere φ values are compared: upbound (within
/// tolerance), then (id1, id2, alpha_best).
[[nodiscard]] bool elt_less(const Elt& a, const Elt& b);

struct CycleReport {
  std::uint16_t cycle = 0;
  Elt best;
  bool ready = false;
};

struct MdstView {
  std::uint16_t cycle = 0;
  Elt phi_star;
  CycleReport report;
};

// ---- frame --------------------------------------------------------------

struct Payload {
  UnView un;
  ApspView apsp;
  MdstView mdst;
  std::uint64_t digest = 0;  // set by seal()

  void seal();
};

/// One message on a directed link: shared node-wide content plus the
/// per-link header telling the receiver whether it is the sender's parent.
struct Frame {
  std::shared_ptr<const Payload> body;
  std::vector<char> un_parent;  // aligned with body->un.waves
  bool tree_parent = false;     // receiver is the sender's next hop toward the root

  void hash_into(Digest& h) const;
};

/// A node's end of one incident link: the neighbor's vertex index acts as
/// the local port label, plus the last frame received on it.
struct PortSlot {
  int nbr = -1;
  double w = 0.0;
  std::optional<Frame> cache;
};


}  // namespace mdst
