#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mdst/apsp.hpp"
#include "mdst/frame.hpp"
#include "mdst/mdst_protocol.hpp"
#include "mdst/un.hpp"

namespace mdst {

/// Which protocols run. In the fixed-id stacks the naming layer is replaced
/// by fixed ids 1..n with n known.
enum class Stack { Un, Apsp, Mdst, Composed };

[[nodiscard]] Stack parse_stack(const std::string& s);
[[nodiscard]] std::string to_string(Stack s);
[[nodiscard]] inline bool runs_un(Stack s) { return s == Stack::Un || s == Stack::Composed; }
[[nodiscard]] inline bool runs_apsp(Stack s) { return s != Stack::Un; }
[[nodiscard]] inline bool runs_mdst(Stack s) { return s == Stack::Mdst || s == Stack::Composed; }

struct NodeContext {
  Stack stack = Stack::Composed;
  ProcId fixed_id = 1;
  std::span<const ProcId> fixed_ids;  // 1..n when the naming layer is off
};

struct NodeState {
  UnState un;
  ApspState apsp;
  MdstState mdst;
  std::vector<PortSlot> ports;  // sorted by nbr
  std::vector<ProcId> known;    // sorted, duplicate-free ids fed to the routing layer
};

struct NodeEvents {
  UnEvents un;
  MdstEvents mdst;
};

void node_init_clean(NodeState& s, const NodeContext& ctx, Rng& rng);

/// Random protocol state; caches are left untouched.
void node_randomize(NodeState& s, const NodeContext& ctx, Rng& rng, std::span<const WaveKey> key_pool,
                    std::span<const ProcId> id_pool);

/// A random well-formed frame as it could have been sent over `from -> to`.
[[nodiscard]] Frame random_frame(std::span<const PortSlot> sender_ports, int to, const NodeContext& ctx, Rng& rng,
                                 std::span<const WaveKey> key_pool, std::span<const ProcId> id_pool);

[[nodiscard]] NamingInput naming_input(const NodeState& s, const NodeContext& ctx);

/// One action: naming, then routing, then center layers.
void node_step(NodeState& s, const NodeContext& ctx, Rng& rng, NodeEvents& ev);

[[nodiscard]] std::shared_ptr<const Payload> build_payload(const NodeState& s, const NodeContext& ctx);
[[nodiscard]] Frame frame_for(const NodeState& s, const NodeContext& ctx, std::shared_ptr<const Payload> body, int nbr);

void hash_node(Digest& h, const NodeState& s);
[[nodiscard]] std::size_t node_state_bits(const NodeState& s);

}  // namespace mdst
