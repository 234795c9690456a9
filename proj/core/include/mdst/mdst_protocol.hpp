#pragma once

#include <optional>
#include <span>

#include "mdst/apsp.hpp"
#include "mdst/frame.hpp"
#include "mdst/rng.hpp"

namespace mdst {

inline constexpr int kTreeNotReady = -2;
inline constexpr int kTreeRoot = -1;

struct MdstState {
  std::uint16_t cycle = 0;
  Elt phi_star;  // upbound = +inf while not ready
  CycleReport report;
  Elt local;
  int timer = 0;
  int tree_parent = kTreeNotReady;  // neighbor vertex index, kTreeRoot, or kTreeNotReady
};

struct MdstEvents {
  bool finalized = false;
  bool restarted = false;
  bool phi_changed = false;
};

void mdst_init_clean(MdstState& s);
void mdst_randomize(MdstState& s, std::span<const PortSlot> ports, Rng& rng, std::span<const ProcId> id_pool);

/// This node's best candidate: starts at (R, sentinel) and scans the edges
/// it owns (neighbor id larger than its own), in ascending neighbor id,
/// while the upbound exceeds D/2. nullopt when a needed vector is missing.
[[nodiscard]] std::optional<Elt> local_candidate(const ApspState& apsp, const NamingInput& in,
                                                 std::span<const PortSlot> ports, bool use_skip = true);

/// One step: candidate computation, convergecast of reports toward the
/// root, adoption of the root's φ*, and tree extraction.
void mdst_step(MdstState& s, const ApspState& apsp, const NamingInput& in, std::span<const PortSlot> ports,
               MdstEvents& ev);

/// Neighbor index toward the center named by phi, kTreeRoot when this node
/// is the tree root, kTreeNotReady when phi cannot be resolved locally.
[[nodiscard]] int extract_parent(const Elt& phi, const ApspState& apsp, const NamingInput& in,
                                 std::span<const PortSlot> ports);

[[nodiscard]] MdstView mdst_view(const MdstState& s);
void hash_mdst(Digest& h, const MdstState& s);
[[nodiscard]] std::size_t mdst_state_bits(const MdstState& s);

}  // namespace mdst
