#include "mdst/apsp.hpp"

#include <algorithm>
#include <cmath>

namespace mdst {

void apsp_init_clean(ApspState& s, ProcId id) {
  s = ApspState{};
  s.table.push_back({id, 0.0, 0, -1});
}

void apsp_randomize(ApspState& s, std::span<const PortSlot> ports, Rng& rng, std::span<const ProcId> id_pool) {
  s = ApspState{};
  auto pick_id = [&]() { return id_pool.empty() ? static_cast<ProcId>(1 + rng.below(64)) : id_pool[rng.below(id_pool.size())]; };
  const std::size_t k = rng.below(id_pool.size() + 4);
  for (std::size_t i = 0; i < k; ++i) {
    Route r;
    r.dest = pick_id();
    if (find_route(s, r.dest)) continue;
    r.d = rng.coin(0.2) ? 0.1 * static_cast<double>(rng.below(10)) : static_cast<double>(rng.below(60));
    r.hops = static_cast<int>(rng.below(20));
    r.port = (ports.empty() || rng.coin(0.1)) ? -1 : ports[rng.below(ports.size())].nbr;
    s.table.push_back(r);
    std::sort(s.table.begin(), s.table.end(), [](const Route& a, const Route& b) { return a.dest < b.dest; });
  }
  s.agg = {static_cast<double>(rng.below(40)), static_cast<double>(rng.below(40)), pick_id(),
           static_cast<int>(rng.below(30)), rng.coin()};
  s.bcast = {static_cast<double>(rng.below(40)), static_cast<double>(rng.below(40)), pick_id(), rng.coin()};
}

const Route* find_route(const ApspState& s, ProcId dest) {
  auto it = std::lower_bound(s.table.begin(), s.table.end(), dest, [](const Route& r, ProcId d) { return r.dest < d; });
  return (it != s.table.end() && it->dest == dest) ? &*it : nullptr;
}

void apsp_step(ApspState& s, const NamingInput& in, std::span<const PortSlot> ports) {
  if (!in.ready) {
    apsp_init_clean(s, in.id);
    return;
  }
  struct Best {
    Route r;
    ProcId via = 0;
  };
  std::vector<Best> best;
  best.push_back({{in.id, 0.0, 0, -1}, in.id});
  auto known = [&](ProcId x) { return std::binary_search(in.ids.begin(), in.ids.end(), x); };
  for (const auto& p : ports) {
    if (!p.cache) continue;
    const Payload& nb = *p.cache->body;
    const ProcId via = nb.un.id;
    for (const auto& ad : nb.apsp.routes) {
      if (ad.dest == in.id || !known(ad.dest) || !(ad.d >= 0.0) || !std::isfinite(ad.d)) continue;
      const double d = p.w + ad.d;
      const int hops = ad.hops + 1;
      if (hops >= in.n_est || hops <= 0) continue;
      auto it = std::find_if(best.begin(), best.end(), [&](const Best& b) { return b.r.dest == ad.dest; });
      if (it == best.end()) {
        best.push_back({{ad.dest, d, hops, p.nbr}, via});
        continue;
      }
      bool take;
      if (d < it->r.d - kEps)
        take = true;
      else if (d > it->r.d + kEps)
        take = false;
      else
        take = std::tuple(hops, via, p.nbr) < std::tuple(it->r.hops, it->via, it->r.port);
      if (take) *it = {{ad.dest, d, hops, p.nbr}, via};
    }
  }
  s.table.clear();
  for (const auto& b : best) s.table.push_back(b.r);
  std::sort(s.table.begin(), s.table.end(), [](const Route& a, const Route& b) { return a.dest < b.dest; });

  const bool complete = apsp_complete(s, in);
  const double sep = own_separation(s);
  SepAggregate agg{sep, sep, in.id, 1, complete};
  for (const auto& p : ports) {
    if (!p.cache || !p.cache->tree_parent) continue;
    const SepAggregate& c = p.cache->body->apsp.agg;
    agg.max_sep = std::max(agg.max_sep, c.max_sep);
    if (c.min_sep < agg.min_sep - kEps || (std::abs(c.min_sep - agg.min_sep) <= kEps && c.argmin < agg.argmin)) {
      agg.min_sep = std::min(agg.min_sep, c.min_sep);
      agg.argmin = c.argmin;
    }
    agg.count += c.count;
    agg.ready = agg.ready && c.ready;
  }
  s.agg = agg;

  const bool is_root = !in.ids.empty() && in.ids.front() == in.id;
  if (is_root) {
    s.bcast = {agg.max_sep, agg.min_sep, agg.argmin, agg.ready && agg.count == static_cast<int>(in.ids.size())};
  } else {
    s.bcast = SepBroadcast{};
    int parent = apsp_tree_parent(s, in);
    for (const auto& p : ports)
      if (p.nbr == parent && p.cache) s.bcast = p.cache->body->apsp.bcast;
  }
}

bool apsp_complete(const ApspState& s, const NamingInput& in) {
  if (!in.ready) return false;
  for (ProcId x : in.ids)
    if (!find_route(s, x)) return false;
  return find_route(s, in.id) != nullptr;
}

int apsp_tree_parent(const ApspState& s, const NamingInput& in) {
  if (in.ids.empty() || in.ids.front() == in.id) return -1;
  const Route* r = find_route(s, in.ids.front());
  return r ? r->port : -1;
}

double own_separation(const ApspState& s) {
  double m = 0.0;
  for (const auto& r : s.table) m = std::max(m, r.d);
  return m;
}

ApspView apsp_view(const ApspState& s) {
  ApspView v;
  v.routes.reserve(s.table.size());
  for (const auto& r : s.table) v.routes.push_back({r.dest, r.d, r.hops});
  v.agg = s.agg;
  v.bcast = s.bcast;
  return v;
}

void hash_apsp(Digest& h, const ApspState& s) {
  h.add(s.table.size());
  for (const auto& r : s.table) h.add(r.dest).add(r.d).add(r.hops).add(r.port);
  h.add(s.agg.max_sep).add(s.agg.min_sep).add(s.agg.argmin).add(s.agg.count).add(s.agg.ready);
  h.add(s.bcast.diameter).add(s.bcast.radius).add(s.bcast.argmin).add(s.bcast.ready);
}

std::size_t apsp_state_bits(const ApspState& s) {
  return s.table.size() * (32 + 64 + 16 + 16) + (64 + 64 + 32 + 16 + 1) + (64 + 64 + 32 + 1);
}

}  // namespace mdst
