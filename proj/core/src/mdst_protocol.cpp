#include "mdst/mdst_protocol.hpp"

#include <algorithm>
#include <cmath>

#include "mdst/center.hpp"

namespace mdst {
namespace {

/// d(dest) for every known id, in id order; nullopt if any is missing.
template <class R>
std::optional<std::vector<double>> vector_over(const std::vector<R>& routes, std::span<const ProcId> ids) {
  std::vector<double> out;
  out.reserve(ids.size());
  std::size_t j = 0;
  for (ProcId x : ids) {
    while (j < routes.size() && routes[j].dest < x) ++j;
    if (j == routes.size() || routes[j].dest != x) return std::nullopt;
    out.push_back(routes[j].d);
  }
  return out;
}

Elt random_elt(Rng& rng, std::span<const ProcId> id_pool) {
  auto pick = [&]() { return id_pool.empty() ? static_cast<ProcId>(1 + rng.below(64)) : id_pool[rng.below(id_pool.size())]; };
  Elt e;
  e.upbound = rng.coin(0.1) ? kInf : static_cast<double>(rng.below(60)) * 0.5;
  e.id1 = rng.coin(0.1) ? 0 : pick();
  e.id2 = e.id1 == 0 ? 0 : (rng.coin(0.3) ? e.id1 : pick());
  e.weight = static_cast<double>(1 + rng.below(10));
  e.alpha_best = e.weight * rng.uniform01();
  return e;
}

const PortSlot* slot_of(std::span<const PortSlot> ports, int nbr) {
  for (const auto& p : ports)
    if (p.nbr == nbr) return &p;
  return nullptr;
}

}  // namespace

bool elt_less(const Elt& a, const Elt& b) {
  if (a.upbound < b.upbound - kEps) return true;
  if (b.upbound < a.upbound - kEps) return false;
  return std::tuple(a.id1, a.id2, a.alpha_best) < std::tuple(b.id1, b.id2, b.alpha_best);
}

void mdst_init_clean(MdstState& s) { s = MdstState{}; }

void mdst_randomize(MdstState& s, std::span<const PortSlot> ports, Rng& rng, std::span<const ProcId> id_pool) {
  s = MdstState{};
  s.cycle = static_cast<std::uint16_t>(rng.next());
  s.phi_star = random_elt(rng, id_pool);
  s.report = {static_cast<std::uint16_t>(rng.coin(0.5) ? s.cycle : rng.next()), random_elt(rng, id_pool), rng.coin()};
  s.local = random_elt(rng, id_pool);
  s.timer = static_cast<int>(rng.below(40));
  s.tree_parent = ports.empty() ? kTreeRoot : ports[rng.below(ports.size())].nbr;
}

std::optional<Elt> local_candidate(const ApspState& apsp, const NamingInput& in, std::span<const PortSlot> ports,
                                   bool use_skip) {
  if (!apsp.bcast.ready) return std::nullopt;
  const auto mine = vector_over(apsp.table, in.ids);
  if (!mine) return std::nullopt;
  const double half_d = apsp.bcast.diameter / 2.0;
  Elt phi{0.0, apsp.bcast.radius, 0, 0, 0.0};

  struct Owned {
    ProcId nid;
    const PortSlot* slot;
  };
  std::vector<Owned> owned;
  for (const auto& p : ports)
    if (p.cache && p.cache->body->un.id > in.id) owned.push_back({p.cache->body->un.id, &p});
  std::sort(owned.begin(), owned.end(), [](const Owned& a, const Owned& b) {
    return std::pair(a.nid, a.slot->nbr) < std::pair(b.nid, b.slot->nbr);
  });

  std::vector<CandidatePair> pairs(in.ids.size());
  for (const auto& o : owned) {
    if (!(phi.upbound > half_d + kEps)) break;
    const auto theirs = vector_over(o.slot->cache->body->apsp.routes, in.ids);
    if (!theirs) return std::nullopt;
    double bound = 0.0;
    for (std::size_t z = 0; z < in.ids.size(); ++z) {
      pairs[z] = {(*mine)[z], (*theirs)[z], static_cast<int>(z)};
      bound = std::max(bound, std::min(pairs[z].a, pairs[z].b));
    }
    if (use_skip && bound >= phi.upbound) continue;
    EdgeMinimum m = gamma_star(prune_and_sort(pairs), o.slot->w);
    if (m.localmin < phi.upbound - kEps) phi = {m.alpha, m.localmin, in.id, o.nid, o.slot->w};
  }
  return phi;
}

int extract_parent(const Elt& phi, const ApspState& apsp, const NamingInput& in, std::span<const PortSlot> ports) {
  if (!std::isfinite(phi.upbound) || phi.is_sentinel()) return kTreeNotReady;
  auto port_to = [&](ProcId dest) -> int {
    if (dest == in.id) return kTreeRoot;
    const Route* r = find_route(apsp, dest);
    return r ? r->port : kTreeNotReady;
  };
  if (phi.is_vertex()) return port_to(phi.id1);
  const Route* ru = find_route(apsp, phi.id1);
  const Route* rv = find_route(apsp, phi.id2);
  if (!ru || !rv) return kTreeNotReady;
  const double a = phi.alpha_best, w = phi.weight;
  if (in.id == phi.id1) {
    const bool u_own = a <= rv->d + w - a + kEps;
    const bool v_own = !(rv->d + a <= w - a + kEps);
    if (!u_own) return rv->port;
    if (!v_own) return kTreeRoot;
    for (const auto& p : ports)
      if (p.cache && p.cache->body->un.id == phi.id2) return p.nbr;
    return kTreeNotReady;
  }
  if (in.id == phi.id2) {
    const bool v_own = !(ru->d + a <= w - a + kEps);
    return v_own ? kTreeRoot : ru->port;
  }
  return (ru->d + a <= rv->d + w - a + kEps) ? ru->port : rv->port;
}

void mdst_step(MdstState& s, const ApspState& apsp, const NamingInput& in, std::span<const PortSlot> ports,
               MdstEvents& ev) {
  const Elt before = s.phi_star;
  auto not_ready = [&]() {
    s.phi_star = Elt{};
    s.local = Elt{};
    s.report.ready = false;
    s.tree_parent = kTreeNotReady;
    ev.phi_changed = !(before == s.phi_star);
  };
  if (!in.ready || !apsp_complete(apsp, in)) return not_ready();
  auto local = local_candidate(apsp, in, ports);
  if (!local) return not_ready();
  s.local = *local;

  const int parent = apsp_tree_parent(apsp, in);
  const bool is_root = in.ids.front() == in.id;
  bool all = true;
  Elt best = s.local;
  for (const auto& p : ports) {
    if (!p.cache || !p.cache->tree_parent) continue;
    const CycleReport& r = p.cache->body->mdst.report;
    if (r.cycle != s.cycle || !r.ready) {
      all = false;
      break;
    }
    if (elt_less(r.best, best)) best = r.best;
  }

  if (is_root) {
    if (all) {
      if (best.is_sentinel()) best = Elt{0.0, apsp.bcast.radius, apsp.bcast.argmin, apsp.bcast.argmin, 0.0};
      s.phi_star = best;
      s.report = {s.cycle, best, true};
      s.cycle = static_cast<std::uint16_t>(s.cycle + 1);
      s.timer = 0;
      ev.finalized = true;
    } else if (++s.timer > 4 * in.n_est + 16) {
      s.cycle = static_cast<std::uint16_t>(s.cycle + 1);
      s.timer = 0;
      ev.restarted = true;
    }
  } else {
    const PortSlot* ps = slot_of(ports, parent);
    if (!ps || !ps->cache) return not_ready();
    const MdstView& pv = ps->cache->body->mdst;
    s.cycle = pv.cycle;
    s.phi_star = pv.phi_star;
    s.timer = 0;
    if (all) s.report = {s.cycle, best, true};
  }
  s.tree_parent = extract_parent(s.phi_star, apsp, in, ports);
  ev.phi_changed = !(before == s.phi_star);
}

MdstView mdst_view(const MdstState& s) { return {s.cycle, s.phi_star, s.report}; }

namespace {
void hash_elt(Digest& h, const Elt& e) { h.add(e.alpha_best).add(e.upbound).add(e.id1).add(e.id2).add(e.weight); }
}  // namespace

void hash_mdst(Digest& h, const MdstState& s) {
  h.add(static_cast<int>(s.cycle));
  hash_elt(h, s.phi_star);
  h.add(static_cast<int>(s.report.cycle)).add(s.report.ready);
  hash_elt(h, s.report.best);
  hash_elt(h, s.local);
  h.add(s.timer).add(s.tree_parent);
}

std::size_t mdst_state_bits(const MdstState&) {
  constexpr std::size_t elt = 64 + 64 + 32 + 32 + 64;
  return 16 + elt + (16 + elt + 1) + elt + 16 + 16;
}

}  // namespace mdst
