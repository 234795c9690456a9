#include "mdst/node.hpp"

#include <algorithm>
#include <stdexcept>

namespace mdst {
namespace {

void refresh_known(NodeState& s, const NodeContext& ctx) {
  if (!runs_un(ctx.stack)) {
    s.known.assign(ctx.fixed_ids.begin(), ctx.fixed_ids.end());
    return;
  }
  s.known = s.un.id_list;
  std::sort(s.known.begin(), s.known.end());
  s.known.erase(std::unique(s.known.begin(), s.known.end()), s.known.end());
}

}  // namespace

void Payload::seal() {
  Digest h;
  h.add(un.id).add(static_cast<int>(un.phase)).add(un.list_digest).add(un.waves.size());
  for (const auto& w : un.waves) {
    h.add(static_cast<int>(w.key.kind)).add(w.key.initiator).add(w.key.seq).add(w.hop).add(w.done).add(w.sub.size());
    for (auto x : w.sub) h.add(x);
  }
  h.add(apsp.routes.size());
  for (const auto& r : apsp.routes) h.add(r.dest).add(r.d).add(r.hops);
  h.add(apsp.agg.max_sep).add(apsp.agg.min_sep).add(apsp.agg.argmin).add(apsp.agg.count).add(apsp.agg.ready);
  h.add(apsp.bcast.diameter).add(apsp.bcast.radius).add(apsp.bcast.argmin).add(apsp.bcast.ready);
  auto elt = [&](const Elt& e) { h.add(e.alpha_best).add(e.upbound).add(e.id1).add(e.id2).add(e.weight); };
  h.add(static_cast<int>(mdst.cycle));
  elt(mdst.phi_star);
  h.add(static_cast<int>(mdst.report.cycle)).add(mdst.report.ready);
  elt(mdst.report.best);
  digest = h.value();
}

void Frame::hash_into(Digest& h) const {
  h.add(body ? body->digest : 0).add(tree_parent).add(un_parent.size());
  for (char c : un_parent) h.add(c != 0);
}

Stack parse_stack(const std::string& s) {
  if (s == "un") return Stack::Un;
  if (s == "apsp") return Stack::Apsp;
  if (s == "mdst") return Stack::Mdst;
  if (s == "composed") return Stack::Composed;
  throw std::invalid_argument("unknown protocol '" + s + "' (expected un, apsp, mdst or composed)");
}

std::string to_string(Stack s) {
  switch (s) {
    case Stack::Un: return "un";
    case Stack::Apsp: return "apsp";
    case Stack::Mdst: return "mdst";
    case Stack::Composed: return "composed";
  }
  return "composed";
}

NamingInput naming_input(const NodeState& s, const NodeContext& ctx) {
  NamingInput in;
  if (runs_un(ctx.stack)) {
    in.ready = un_ready(s.un);
    in.id = s.un.id;
    in.ids = s.known;
    in.n_est = std::max(s.un.n_seen, static_cast<int>(s.known.size()));
  } else {
    in.ready = true;
    in.id = ctx.fixed_id;
    in.ids = ctx.fixed_ids;
    in.n_est = static_cast<int>(ctx.fixed_ids.size());
  }
  return in;
}

void node_init_clean(NodeState& s, const NodeContext& ctx, Rng& rng) {
  if (runs_un(ctx.stack)) un_init_clean(s.un, rng);
  refresh_known(s, ctx);
  apsp_init_clean(s.apsp, runs_un(ctx.stack) ? s.un.id : ctx.fixed_id);
  mdst_init_clean(s.mdst);
}

void node_randomize(NodeState& s, const NodeContext& ctx, Rng& rng, std::span<const WaveKey> key_pool,
                    std::span<const ProcId> id_pool) {
  if (runs_un(ctx.stack)) un_randomize(s.un, s.ports, rng, key_pool);
  refresh_known(s, ctx);
  std::vector<ProcId> pool(id_pool.begin(), id_pool.end());
  if (runs_un(ctx.stack)) pool.push_back(s.un.id);
  if (runs_apsp(ctx.stack)) apsp_randomize(s.apsp, s.ports, rng, pool);
  if (runs_mdst(ctx.stack)) mdst_randomize(s.mdst, s.ports, rng, pool);
}

Frame random_frame(std::span<const PortSlot> sender_ports, int to, const NodeContext& ctx, Rng& rng,
                   std::span<const WaveKey> key_pool, std::span<const ProcId> id_pool) {
  NodeState t;
  for (const auto& p : sender_ports) t.ports.push_back({p.nbr, p.w, std::nullopt});
  NodeContext c = ctx;
  if (!id_pool.empty()) c.fixed_id = id_pool[rng.below(id_pool.size())];
  node_randomize(t, c, rng, key_pool, id_pool);
  Frame f = frame_for(t, c, build_payload(t, c), to);
  for (auto& flag : f.un_parent) flag = rng.coin(0.3) ? 1 : 0;
  f.tree_parent = rng.coin(0.3);
  return f;
}

void node_step(NodeState& s, const NodeContext& ctx, Rng& rng, NodeEvents& ev) {
  if (runs_un(ctx.stack)) un_step(s.un, s.ports, rng, ev.un);
  refresh_known(s, ctx);
  if (!runs_apsp(ctx.stack)) return;
  const NamingInput in = naming_input(s, ctx);
  apsp_step(s.apsp, in, s.ports);
  if (runs_mdst(ctx.stack)) mdst_step(s.mdst, s.apsp, in, s.ports, ev.mdst);
}

std::shared_ptr<const Payload> build_payload(const NodeState& s, const NodeContext& ctx) {
  auto p = std::make_shared<Payload>();
  if (runs_un(ctx.stack)) {
    p->un = un_view(s.un);
  } else {
    p->un.id = ctx.fixed_id;
    p->un.phase = 3;
  }
  if (runs_apsp(ctx.stack)) p->apsp = apsp_view(s.apsp);
  if (runs_mdst(ctx.stack)) p->mdst = mdst_view(s.mdst);
  p->seal();
  return p;
}

Frame frame_for(const NodeState& s, const NodeContext& ctx, std::shared_ptr<const Payload> body, int nbr) {
  Frame f;
  f.body = std::move(body);
  if (runs_un(ctx.stack)) f.un_parent = un_parent_flags(s.un, nbr);
  if (runs_apsp(ctx.stack)) f.tree_parent = apsp_tree_parent(s.apsp, naming_input(s, ctx)) == nbr;
  return f;
}

void hash_node(Digest& h, const NodeState& s) {
  hash_un(h, s.un);
  hash_apsp(h, s.apsp);
  hash_mdst(h, s.mdst);
  h.add(s.ports.size());
  for (const auto& p : s.ports) {
    h.add(p.nbr).add(p.w).add(p.cache.has_value());
    if (p.cache) p.cache->hash_into(h);
  }
}

std::size_t node_state_bits(const NodeState& s) {
  std::size_t bits = un_state_bits(s.un) + apsp_state_bits(s.apsp) + mdst_state_bits(s.mdst);
  for (const auto& p : s.ports) {
    bits += 16 + 64;
    if (!p.cache) continue;
    const Payload& b = *p.cache->body;
    bits += 32 + 8 + b.apsp.routes.size() * (32 + 64 + 16) + 2 * (64 + 64 + 32 + 16 + 1) + 2 * (16 + 5 * 64) +
            p.cache->un_parent.size() + 1;
    for (const auto& w : b.un.waves) bits += 72 + 16 + 1 + 32 * w.sub.size();
  }
  return bits;
}

}  // namespace mdst
