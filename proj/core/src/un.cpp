#include "mdst/un.hpp"

#include <algorithm>

namespace mdst {
namespace {

const WaveAd* find_ad(const UnView& v, const WaveKey& k, std::size_t* index = nullptr) {
  for (std::size_t i = 0; i < v.waves.size(); ++i) {
    if (v.waves[i].key == k) {
      if (index) *index = i;
      return &v.waves[i];
    }
  }
  return nullptr;
}

const PortSlot* slot_of(std::span<const PortSlot> ports, int nbr) {
  for (const auto& p : ports)
    if (p.nbr == nbr) return &p;
  return nullptr;
}

bool tombstoned(const UnState& s, const WaveKey& k) {
  return std::find(s.tombstones.begin(), s.tombstones.end(), k) != s.tombstones.end();
}

void bury(UnState& s, const WaveKey& k) {
  if (tombstoned(s, k)) return;
  if (s.tombstones.size() >= kTombstones) s.tombstones.erase(s.tombstones.begin());
  s.tombstones.push_back(k);
}

WaveEntry* held(UnState& s, const WaveKey& k) {
  for (auto& e : s.entries)
    if (e.key == k) return &e;
  return nullptr;
}

void remove_entry(UnState& s, const WaveKey& k) {
  std::erase_if(s.entries, [&](const WaveEntry& e) { return e.key == k; });
  bury(s, k);
}

bool prio_less(const WaveKey& a, const WaveKey& b) { return std::pair(a.initiator, a.seq) < std::pair(b.initiator, b.seq); }

int estimate_n(const UnState& s, std::span<const PortSlot> ports) {
  int n = std::max({s.n_seen, static_cast<int>(s.id_list.size()), static_cast<int>(ports.size()) + 1});
  return std::min(n, kMaxHop);
}

int timeout_of(const UnState& s, std::span<const PortSlot> ports) {
  return (8 * (estimate_n(s, ports) + 2)) << std::min(s.backoff, 10);
}

void start_wave(UnState& s, WaveKind kind, Rng& rng) {
  WaveKey k{kind, s.id, static_cast<std::uint32_t>(rng.next())};
  while (held(s, k) || tombstoned(s, k)) k.seq = static_cast<std::uint32_t>(rng.next());
  s.own = k;
  s.entries.push_back({k, 0, -1, false, {}});
  s.timer = 0;
}

void clear_naming(UnState& s) {
  std::vector<WaveKey> drop;
  for (const auto& e : s.entries)
    if (e.key.kind == WaveKind::Naming) drop.push_back(e.key);
  for (const auto& k : drop) remove_entry(s, k);
  if (s.own && s.own->kind == WaveKind::Naming) s.own.reset();
}

// Ids are redrawn once per freeze; joining further resets keeps them.
void enter_reset(UnState& s, Rng& rng, UnEvents& ev, bool redraw) {
  s.phase = 1;
  clear_naming(s);
  if (!redraw) return;
  s.gen = std::min(s.gen + 1, kMaxGen);
  s.id = draw_id(id_space(s.gen), rng);
  ++ev.redraws;
}

void sort_entries(UnState& s) {
  std::sort(s.entries.begin(), s.entries.end(), [](const WaveEntry& a, const WaveEntry& b) { return a.key < b.key; });
}

std::vector<ProcId> random_ids(Rng& rng, std::size_t len, std::uint64_t space) {
  std::vector<ProcId> out;
  for (std::size_t i = 0; i < len; ++i) out.push_back(draw_id(space, rng));
  return out;
}

std::uint64_t list_digest(const std::vector<ProcId>& id_list) {
  std::vector<ProcId> v = id_list;
  std::sort(v.begin(), v.end());
  Digest h;
  h.add(v.size());
  for (auto x : v) h.add(x);
  return h.value();
}

// A finished list must name this node and every neighbor, and agree with
// every neighbor that also considers itself finished.
bool list_consistent(const UnState& s, std::span<const PortSlot> ports) {
  auto has = [&](ProcId x) { return std::find(s.id_list.begin(), s.id_list.end(), x) != s.id_list.end(); };
  if (!has(s.id)) return false;
  const std::uint64_t mine = list_digest(s.id_list);
  for (const auto& p : ports) {
    if (!p.cache) continue;
    const UnView& v = p.cache->body->un;
    if (!has(v.id)) return false;
    if (v.phase == 3 && v.list_digest != mine) return false;
  }
  return true;
}

}  // namespace

std::uint64_t id_space(int gen) { return std::uint64_t{16} << std::clamp(gen, 0, kMaxGen); }

ProcId draw_id(std::uint64_t N, Rng& rng) { return static_cast<ProcId>(1 + rng.below(std::max<std::uint64_t>(N, 1))); }

bool check_conflict(const std::vector<ProcId>& id_list) {
  std::vector<ProcId> v = id_list;
  std::sort(v.begin(), v.end());
  return std::adjacent_find(v.begin(), v.end()) != v.end();
}

bool un_ready(const UnState& s) { return s.phase == 3 && !check_conflict(s.id_list); }

bool un_frozen(const UnState& s) {
  return std::any_of(s.entries.begin(), s.entries.end(), [](const WaveEntry& e) { return e.key.kind == WaveKind::Reset; });
}

void un_init_clean(UnState& s, Rng& rng) {
  s = UnState{};
  s.id = draw_id(id_space(0), rng);
}

void un_randomize(UnState& s, std::span<const PortSlot> ports, Rng& rng, std::span<const WaveKey> pool) {
  s = UnState{};
  s.phase = static_cast<std::uint8_t>(1 + rng.below(3));
  s.gen = static_cast<int>(rng.below(6));
  const std::uint64_t space = id_space(s.gen);
  s.id = draw_id(space, rng);
  s.n_seen = static_cast<int>(1 + rng.below(40));
  s.id_list = random_ids(rng, rng.below(20), space);
  auto pick_key = [&]() {
    if (!pool.empty() && rng.coin(0.7)) return pool[rng.below(pool.size())];
    WaveKey k{rng.coin(0.3) ? WaveKind::Reset : WaveKind::Naming, draw_id(64, rng), static_cast<std::uint32_t>(rng.next())};
    return k;
  };
  if (rng.coin(0.6)) {
    WaveKey k = pick_key();
    if (rng.coin(0.5)) k.initiator = s.id;
    s.own = k;
  }
  s.timer = static_cast<int>(rng.below(60));
  s.backoff = static_cast<int>(rng.below(4));
  const std::size_t k = rng.below(6);
  for (std::size_t i = 0; i < k; ++i) {
    WaveEntry e;
    e.key = (s.own && rng.coin(0.2)) ? *s.own : pick_key();
    if (held(s, e.key)) continue;
    e.hop = static_cast<int>(rng.below(12));
    e.parent = (ports.empty() || rng.coin(0.15)) ? -1 : ports[rng.below(ports.size())].nbr;
    e.done = rng.coin(0.4);
    e.sub = random_ids(rng, rng.below(12), space);
    s.entries.push_back(std::move(e));
  }
  const std::size_t t = rng.below(4);
  for (std::size_t i = 0; i < t; ++i) bury(s, pick_key());
  sort_entries(s);
}

void un_step(UnState& s, std::span<const PortSlot> ports, Rng& rng, UnEvents& ev) {
  // A source key must carry this node's id and must not be buried here.
  if (s.own && (s.own->initiator != s.id || tombstoned(s, *s.own))) {
    remove_entry(s, *s.own);
    s.own.reset();
  }
  // Drop entries that no longer hang off a live parent.
  {
    std::vector<WaveEntry> kept;
    std::vector<WaveKey> dropped;
    for (auto& e : s.entries) {
      bool keep;
      if (std::any_of(kept.begin(), kept.end(), [&](const WaveEntry& k) { return k.key == e.key; })) continue;
      if (e.parent < 0) {
        keep = s.own && e.key == *s.own && e.hop == 0;
      } else {
        const PortSlot* p = slot_of(ports, e.parent);
        const WaveAd* ad = (p && p->cache) ? find_ad(p->cache->body->un, e.key) : nullptr;
        keep = ad && ad->hop == e.hop - 1 && e.hop <= kMaxHop;
      }
      if (keep)
        kept.push_back(std::move(e));
      else
        dropped.push_back(e.key);
    }
    s.entries = std::move(kept);
    for (const auto& k : dropped) bury(s, k);
    ev.stale_dropped += static_cast<int>(dropped.size());
  }
  if (s.own && !held(s, *s.own)) {
    s.entries.push_back({*s.own, 0, -1, false, {}});
    s.timer = 0;
  }

  // A reset source yields to any reset of higher priority.
  if (s.own && s.own->kind == WaveKind::Reset) {
    bool yield = false;
    for (const auto& p : ports) {
      if (!p.cache) continue;
      for (const auto& ad : p.cache->body->un.waves)
        if (ad.key.kind == WaveKind::Reset && !ad.done && prio_less(ad.key, *s.own) && !tombstoned(s, ad.key)) yield = true;
    }
    if (yield) {
      ev.reset_key = *s.own;
      remove_entry(s, *s.own);
      s.own.reset();
      ev.reset_aborted = true;
    }
  }

  // Join waves advertised by neighbors, resets first.
  for (WaveKind kind : {WaveKind::Reset, WaveKind::Naming}) {
    for (const auto& p : ports) {
      if (!p.cache) continue;
      for (const auto& ad : p.cache->body->un.waves) {
        if (ad.key.kind != kind || ad.done || ad.hop >= kMaxHop) continue;
        if (held(s, ad.key) || tombstoned(s, ad.key) || (s.own && ad.key == *s.own)) continue;
        if (kind == WaveKind::Naming && un_frozen(s)) continue;
        int parent = -1, hop = 0;
        for (const auto& q : ports) {
          if (!q.cache) continue;
          const WaveAd* a = find_ad(q.cache->body->un, ad.key);
          if (a && !a->done && (parent < 0 || a->hop < hop - 1)) {
            parent = q.nbr;
            hop = a->hop + 1;
          }
        }
        const bool was_frozen = un_frozen(s);
        s.entries.push_back({ad.key, hop, parent, false, {}});
        if (kind == WaveKind::Reset) enter_reset(s, rng, ev, !was_frozen);
      }
    }
  }

  s.echoes.clear();
  for (const auto& p : ports) {
    if (!p.cache) continue;
    for (const auto& ad : p.cache->body->un.waves)
      if (!ad.done && !held(s, ad.key) && tombstoned(s, ad.key) &&
          std::find(s.echoes.begin(), s.echoes.end(), ad.key) == s.echoes.end())
        s.echoes.push_back(ad.key);
  }
  std::sort(s.echoes.begin(), s.echoes.end());

  // Feedback: done once every neighbor has joined and every child is done.
  for (auto& e : s.entries) {
    if (e.done) continue;
    bool all = true;
    std::vector<ProcId> sub;
    if (e.key.kind == WaveKind::Naming) sub.push_back(s.id);
    for (const auto& p : ports) {
      std::size_t idx = 0;
      const WaveAd* ad = p.cache ? find_ad(p.cache->body->un, e.key, &idx) : nullptr;
      if (!ad) {
        all = false;
        break;
      }
      const auto& flags = p.cache->un_parent;
      bool child = idx < flags.size() && flags[idx];
      if (child) {
        if (!ad->done) {
          all = false;
          break;
        }
        if (e.key.kind == WaveKind::Naming) sub.insert(sub.end(), ad->sub.begin(), ad->sub.end());
      }
    }
    if (all) {
      e.done = true;
      std::sort(sub.begin(), sub.end());
      e.sub = std::move(sub);
    }
  }

  // Source completion.
  if (s.own) {
    WaveEntry* e = held(s, *s.own);
    if (e && e->done) {
      const WaveKey k = *s.own;
      std::vector<ProcId> collected = e->sub;
      remove_entry(s, k);
      s.own.reset();
      s.backoff = 0;
      if (k.kind == WaveKind::Naming) {
        ev.wave_completed = true;
        s.id_list = std::move(collected);
        std::vector<ProcId> uniq = s.id_list;
        std::sort(uniq.begin(), uniq.end());
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        s.n_seen = static_cast<int>(uniq.size());
        if (check_conflict(s.id_list)) {
          ev.conflict = true;
          enter_reset(s, rng, ev, !un_frozen(s));
          start_wave(s, WaveKind::Reset, rng);
          ev.reset_initiated = true;
          ev.reset_key = s.own;
        } else {
          if (s.phase >= 2) s.phase = 3;
          start_wave(s, WaveKind::Naming, rng);
        }
      } else {
        ev.reset_completed = true;
        ev.reset_key = k;
      }
    }
  }

  // Source timeout: restart with a fresh key and a longer budget.
  if (s.own && ++s.timer > timeout_of(s, ports)) {
    const WaveKind kind = s.own->kind;
    remove_entry(s, *s.own);
    s.own.reset();
    s.backoff = std::min(s.backoff + 1, 10);
    ++ev.timeouts;
    start_wave(s, kind, rng);
  }

  if (un_frozen(s)) {
    s.phase = 1;
  } else {
    if (s.phase == 1) s.phase = 2;
    if (s.phase == 3 && !list_consistent(s, ports)) s.phase = 2;
    if (!s.own) start_wave(s, WaveKind::Naming, rng);
  }
  sort_entries(s);
}

UnView un_view(const UnState& s) {
  UnView v;
  v.id = s.id;
  v.phase = s.phase;
  v.list_digest = list_digest(s.id_list);
  v.waves.reserve(s.entries.size());
  for (const auto& e : s.entries) v.waves.push_back({e.key, e.hop, e.done, e.sub});
  for (const auto& k : s.echoes) v.waves.push_back({k, kMaxHop, true, {}});
  return v;
}

std::vector<char> un_parent_flags(const UnState& s, int nbr) {
  std::vector<char> f(s.entries.size());
  for (std::size_t i = 0; i < s.entries.size(); ++i) f[i] = s.entries[i].parent == nbr ? 1 : 0;
  return f;
}

void hash_un(Digest& h, const UnState& s) {
  h.add(static_cast<int>(s.phase)).add(s.id).add(s.gen).add(s.n_seen).add(s.timer).add(s.backoff);
  h.add(s.id_list.size());
  for (auto x : s.id_list) h.add(x);
  h.add(s.own.has_value());
  if (s.own) h.add(static_cast<int>(s.own->kind)).add(s.own->initiator).add(s.own->seq);
  h.add(s.entries.size());
  for (const auto& e : s.entries) {
    h.add(static_cast<int>(e.key.kind)).add(e.key.initiator).add(e.key.seq).add(e.hop).add(e.parent).add(e.done);
    h.add(e.sub.size());
    for (auto x : e.sub) h.add(x);
  }
  h.add(s.tombstones.size());
  for (const auto& k : s.tombstones) h.add(static_cast<int>(k.kind)).add(k.initiator).add(k.seq);
  h.add(s.echoes.size());
  for (const auto& k : s.echoes) h.add(static_cast<int>(k.kind)).add(k.initiator).add(k.seq);
}

std::size_t un_state_bits(const UnState& s) {
  constexpr std::size_t key_bits = 8 + 32 + 32;
  std::size_t bits = 8 + 32 + 8 + 16 + 32 * s.id_list.size() + 1 + key_bits + 16 + 8;
  for (const auto& e : s.entries) bits += key_bits + 16 + 16 + 1 + 32 * e.sub.size();
  bits += key_bits * (s.tombstones.size() + s.echoes.size());
  return bits;
}

}  // namespace mdst
