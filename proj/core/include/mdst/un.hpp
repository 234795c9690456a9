#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mdst/frame.hpp"
#include "mdst/rng.hpp"

namespace mdst {

inline constexpr int kMaxHop = 4096;
inline constexpr int kMaxGen = 26;
inline constexpr std::size_t kTombstones = 64;

/// Participation in one wave. parent is the neighbor's vertex index
/// (-1 at the wave's source).
struct WaveEntry {
  WaveKey key;
  int hop = 0;
  int parent = -1;
  bool done = false;
  std::vector<ProcId> sub;
};

/// Randomized unique naming: phase 1 while resetting, 2 until the node's
/// own naming wave has come back duplicate-free, 3 afterwards.
struct UnState {
  std::uint8_t phase = 1;
  ProcId id = 1;
  int gen = 0;  // id space is 16 * 2^gen
  int n_seen = 1;
  std::vector<ProcId> id_list;
  std::optional<WaveKey> own;
  int timer = 0;
  int backoff = 0;
  std::vector<WaveEntry> entries;  // sorted by key
  std::vector<WaveKey> tombstones;
  std::vector<WaveKey> echoes;  // buried waves a neighbor still runs, advertised back as finished
};

/// Things that happened during one step, for measurements and traces.
struct UnEvents {
  bool wave_completed = false;
  bool conflict = false;
  bool reset_initiated = false;
  bool reset_completed = false;
  bool reset_aborted = false;
  std::optional<WaveKey> reset_key;  // initiated or completed
  int redraws = 0;
  int stale_dropped = 0;
  int timeouts = 0;
};

[[nodiscard]] std::uint64_t id_space(int gen);
/// Uniform over [1, N].
[[nodiscard]] ProcId draw_id(std::uint64_t N, Rng& rng);
[[nodiscard]] bool check_conflict(const std::vector<ProcId>& id_list);
/// Phase 3 with a duplicate-free id list.
[[nodiscard]] bool un_ready(const UnState& s);
[[nodiscard]] bool un_frozen(const UnState& s);

void un_init_clean(UnState& s, Rng& rng);
/// Syntactically valid random state. Wave keys are partly drawn from `pool`
/// so that different nodes share stale waves.
void un_randomize(UnState& s, std::span<const PortSlot> ports, Rng& rng, std::span<const WaveKey> pool);

void un_step(UnState& s, std::span<const PortSlot> ports, Rng& rng, UnEvents& ev);

[[nodiscard]] UnView un_view(const UnState& s);
[[nodiscard]] std::vector<char> un_parent_flags(const UnState& s, int nbr);

void hash_un(Digest& h, const UnState& s);
[[nodiscard]] std::size_t un_state_bits(const UnState& s);

}  // namespace mdst
