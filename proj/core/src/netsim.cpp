#include "mdst/netsim.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

namespace mdst {
namespace {

std::string num(double x) { return std::isfinite(x) ? fmt::format("{}", x) : "null"; }

template <class T>
void shuffle(std::vector<T>& xs, Rng& rng) {
  for (std::size_t i = xs.size(); i > 1; --i) std::swap(xs[i - 1], xs[rng.below(i)]);
}

PortSlot* slot_of(std::vector<PortSlot>& ports, int nbr) {
  for (auto& p : ports)
    if (p.nbr == nbr) return &p;
  return nullptr;
}

std::string key_info(const WaveKey& k) {
  return fmt::format("\"key\":\"{}:{}:{}\"", k.kind == WaveKind::Reset ? "reset" : "naming", k.initiator, k.seq);
}

// Checks one fault against the graph it applies to and returns the graph after it.
WeightedGraph validate_fault(const WeightedGraph& g, const FaultEvent& f) {
  auto vertex_ok = [&](int v) { return v >= 0 && v < g.n(); };
  auto edge_ok = [&]() { return vertex_ok(f.u) && vertex_ok(f.v) && g.has_edge(f.u, f.v); };
  auto weight_ok = [&]() { return f.w > 0.0 && std::isfinite(f.w); };
  if (f.at < 0) throw ScenarioError(fmt::format("fault time {} is negative", f.at));
  switch (f.kind) {
    case FaultKind::CorruptNode:
    case FaultKind::CrashRecover:
      if (!vertex_ok(f.node)) throw ScenarioError(fmt::format("fault node {} out of range", f.node));
      return g;
    case FaultKind::CorruptLink:
      if (!edge_ok()) throw ScenarioError(fmt::format("corrupt-link on non-edge {}-{}", f.u, f.v));
      return g;
    case FaultKind::WeightChange:
      if (!edge_ok()) throw ScenarioError(fmt::format("weight-change on non-edge {}-{}", f.u, f.v));
      if (!weight_ok()) throw ScenarioError("weight-change needs a positive weight");
      return g.with_weight(f.u, f.v, f.w);
    case FaultKind::RemoveEdge:
      if (!edge_ok()) throw ScenarioError(fmt::format("remove-edge on non-edge {}-{}", f.u, f.v));
      if (!g.removable(f.u, f.v))
        throw ScenarioError(fmt::format("remove-edge {}-{} would disconnect the graph", f.u, f.v));
      return g.without_edge(f.u, f.v);
    case FaultKind::AddEdge:
      if (!vertex_ok(f.u) || !vertex_ok(f.v) || f.u == f.v)
        throw ScenarioError(fmt::format("add-edge {}-{} invalid", f.u, f.v));
      if (g.has_edge(f.u, f.v)) throw ScenarioError(fmt::format("add-edge {}-{} already present", f.u, f.v));
      if (!weight_ok()) throw ScenarioError("add-edge needs a positive weight");
      return g.with_edge(f.u, f.v, f.w);
  }
  return g;
}

}  // namespace

void validate_faults(const WeightedGraph& g0, std::vector<FaultEvent> faults) {
  std::stable_sort(faults.begin(), faults.end(), [](const FaultEvent& a, const FaultEvent& b) { return a.at < b.at; });
  WeightedGraph g = g0;
  for (const auto& f : faults) g = validate_fault(g, f);
}

SchedulerKind parse_scheduler(const std::string& s) {
  if (s == "fair") return SchedulerKind::Fair;
  if (s == "adversarial") return SchedulerKind::Adversarial;
  if (s == "synchronous") return SchedulerKind::Synchronous;
  throw ScenarioError("unknown scheduler '" + s + "' (expected fair, adversarial or synchronous)");
}

std::string to_string(SchedulerKind k) {
  switch (k) {
    case SchedulerKind::Fair: return "fair";
    case SchedulerKind::Adversarial: return "adversarial";
    case SchedulerKind::Synchronous: return "synchronous";
  }
  return "fair";
}

FaultKind parse_fault_kind(const std::string& s) {
  if (s == "corrupt-node") return FaultKind::CorruptNode;
  if (s == "corrupt-link") return FaultKind::CorruptLink;
  if (s == "crash-recover") return FaultKind::CrashRecover;
  if (s == "weight-change") return FaultKind::WeightChange;
  if (s == "remove-edge") return FaultKind::RemoveEdge;
  if (s == "add-edge") return FaultKind::AddEdge;
  throw ScenarioError("unknown fault kind '" + s + "'");
}

std::string to_string(FaultKind k) {
  switch (k) {
    case FaultKind::CorruptNode: return "corrupt-node";
    case FaultKind::CorruptLink: return "corrupt-link";
    case FaultKind::CrashRecover: return "crash-recover";
    case FaultKind::WeightChange: return "weight-change";
    case FaultKind::RemoveEdge: return "remove-edge";
    case FaultKind::AddEdge: return "add-edge";
  }
  return "corrupt-node";
}

Simulator::Simulator(WeightedGraph g, SimConfig cfg) : cfg_(std::move(cfg)), sched_rng_(Rng::derive(cfg_.seed, 0)) {
  if (cfg_.horizon <= 0) throw ScenarioError("horizon must be positive");
  validate_faults(g, cfg_.faults);
  // Faults at or beyond the horizon never happen.
  std::erase_if(cfg_.faults, [&](const FaultEvent& f) { return f.at >= cfg_.horizon; });
  std::stable_sort(cfg_.faults.begin(), cfg_.faults.end(),
                   [](const FaultEvent& a, const FaultEvent& b) { return a.at < b.at; });
  versions_.push_back({0, std::move(g)});
  const int n = graph().n();
  fixed_ids_.resize(static_cast<std::size_t>(n));
  std::iota(fixed_ids_.begin(), fixed_ids_.end(), ProcId{1});
  nodes_.resize(static_cast<std::size_t>(n));
  acted_.assign(static_cast<std::size_t>(n), 0);
  for (int v = 0; v < n; ++v) {
    node_rng_.emplace_back(Rng::derive(cfg_.seed, static_cast<std::uint64_t>(v) + 1));
    rebuild_ports(v);
    for (const auto& a : graph().neighbors(v)) queues_[{v, a.to}] = std::nullopt;
  }

  if (!cfg_.arbitrary_init) {
    for (int v = 0; v < n; ++v) node_init_clean(node(v), context(v), node_rng_[static_cast<std::size_t>(v)]);
    // The initial broadcast is part of a clean start.
    for (int v = 0; v < n; ++v) {
      const auto body = build_payload(node(v), context(v));
      for (const auto& p : node(v).ports) queues_[{v, p.nbr}] = frame_for(node(v), context(v), body, p.nbr);
    }
  } else {
    Rng init(Rng::derive(cfg_.init_seed, 0xa5a5));
    const auto keys = make_key_pool(init);
    const auto ids = id_pool();
    for (int v = 0; v < n; ++v) node_randomize(node(v), context(v), init, keys, ids);
    for (int v = 0; v < n; ++v) {
      for (auto& p : node(v).ports) {
        if (init.coin(0.8)) p.cache = random_frame(node(p.nbr).ports, v, context(p.nbr), init, keys, ids);
      }
    }
    for (auto& [link, q] : queues_) {
      if (init.coin(0.5)) q = random_frame(node(link.first).ports, link.second, context(link.first), init, keys, ids);
    }
  }
  snaps_.push_back(take_snapshot());
  metrics_.peak_state_bits = 0;
  for (const auto& s : nodes_) metrics_.peak_state_bits = std::max(metrics_.peak_state_bits, node_state_bits(s));
  log(0, "sys", "config", Digest::to_hex(snaps_.back().digest));
}

NodeContext Simulator::context(int v) const {
  return {cfg_.stack, fixed_ids_.at(static_cast<std::size_t>(v)), fixed_ids_};
}

std::vector<ProcId> Simulator::id_pool() const {
  std::vector<ProcId> pool;
  const int n = graph().n();
  for (const auto& s : nodes_) pool.push_back(runs_un(cfg_.stack) ? s.un.id : 0);
  if (!runs_un(cfg_.stack)) pool = fixed_ids_;
  // Ids that belong to nobody keep stale entries in play.
  for (int i = 0; i < n; ++i) pool.push_back(static_cast<ProcId>(n + 1 + i));
  return pool;
}

std::vector<WaveKey> Simulator::make_key_pool(Rng& rng) const {
  std::vector<WaveKey> keys;
  const auto ids = id_pool();
  const std::size_t count = 2 + static_cast<std::size_t>(graph().n()) / 2;
  for (std::size_t i = 0; i < count; ++i) {
    WaveKey k;
    k.kind = rng.coin(0.4) ? WaveKind::Reset : WaveKind::Naming;
    k.initiator = ids[rng.below(ids.size())];
    k.seq = static_cast<std::uint32_t>(rng.next());
    keys.push_back(k);
  }
  return keys;
}

void Simulator::rebuild_ports(int v) {
  auto& ports = node(v).ports;
  std::vector<PortSlot> next;
  for (const auto& a : graph().neighbors(v)) {
    PortSlot p{a.to, graph().edge(a.edge).w, std::nullopt};
    if (const PortSlot* old = slot_of(ports, a.to)) p.cache = old->cache;
    next.push_back(std::move(p));
  }
  std::sort(next.begin(), next.end(), [](const PortSlot& a, const PortSlot& b) { return a.nbr < b.nbr; });
  ports = std::move(next);
}

bool Simulator::queue_occupied(int from, int to) const {
  const auto it = queues_.find({from, to});
  if (it == queues_.end()) throw ScenarioError(fmt::format("no link {}->{}", from, to));
  return it->second.has_value();
}

bool Simulator::send(int from, int to, Frame f) {
  const auto it = queues_.find({from, to});
  if (it == queues_.end()) throw ScenarioError(fmt::format("send on non-edge {}->{}", from, to));
  if (it->second) {
    ++metrics_.messages_rejected;
    return false;
  }
  ++metrics_.messages_sent;
  if (cfg_.record_trace) {
    Digest h;
    f.hash_into(h);
    const Payload& b = *f.body;
    std::size_t id_list_len = 0;
    for (const auto& w : b.un.waves) id_list_len = std::max(id_list_len, w.sub.size());
    log(t_ + 1, fmt::format("n{}", from), "send", h.hex(),
        fmt::format("\"to\":{},\"waves\":{},\"id_list_len\":{},\"routes\":{},\"cycle\":{}", to, b.un.waves.size(),
                    id_list_len, b.apsp.routes.size(), b.mdst.cycle));
  }
  it->second = std::move(f);
  return true;
}

bool Simulator::receive(int from, int to) {
  const auto it = queues_.find({from, to});
  if (it == queues_.end()) throw ScenarioError(fmt::format("no link {}->{}", from, to));
  auto& q = it->second;
  if (!q) return false;
  PortSlot* p = slot_of(node(to).ports, from);
  if (cfg_.record_trace) {
    Digest h;
    q->hash_into(h);
    log(t_ + 1, fmt::format("n{}", to), "recv", h.hex(), fmt::format("\"from\":{}", from));
    log(t_ + 1, fmt::format("n{}", from), "free", h.hex(), fmt::format("\"to\":{}", to));
  }
  p->cache = std::move(q);
  q.reset();
  ++metrics_.deliveries;
  ++metrics_.frees;
  return true;
}

void Simulator::act(int v) {
  NodeState& s = node(v);
  const NodeContext ctx = context(v);
  NodeEvents ev;
  node_step(s, ctx, node_rng_[static_cast<std::size_t>(v)], ev);
  ++metrics_.actions;
  ++acted_[static_cast<std::size_t>(v)];
  if (ev.un.wave_completed) ++metrics_.waves_completed;
  track_resets(t_ + 1, v, ev.un);
  if (cfg_.record_trace) {
    Digest h;
    hash_node(h, s);
    Digest table;
    hash_apsp(table, s.apsp);
    log(t_ + 1, fmt::format("n{}", v), "act", h.hex(),
        fmt::format("\"phase\":{},\"id\":{},\"id_list_len\":{},\"table\":\"{}\",\"cycle\":{},\"upbound\":{}",
                    runs_un(ctx.stack) ? s.un.phase : 3, runs_un(ctx.stack) ? s.un.id : ctx.fixed_id,
                    s.un.id_list.size(), table.hex(), s.mdst.cycle, num(s.mdst.phi_star.upbound)));
    if (ev.un.reset_initiated) log(t_ + 1, fmt::format("n{}", v), "reset_start", h.hex(), key_info(*ev.un.reset_key));
    if (ev.un.reset_completed) log(t_ + 1, fmt::format("n{}", v), "reset_done", h.hex(), key_info(*ev.un.reset_key));
    if (ev.un.reset_aborted) log(t_ + 1, fmt::format("n{}", v), "reset_abort", h.hex(), key_info(*ev.un.reset_key));
    if (ev.mdst.finalized) {
      const Elt& e = s.mdst.phi_star;
      log(t_ + 1, fmt::format("n{}", v), "cycle", "",
          fmt::format("\"cycle\":{},\"upbound\":{},\"id1\":{},\"id2\":{},\"alpha\":{}", s.mdst.report.cycle,
                      num(e.upbound), e.id1, e.id2, num(e.alpha_best)));
    }
  }
  const auto body = build_payload(s, ctx);
  for (const auto& p : s.ports) (void)send(v, p.nbr, frame_for(s, ctx, body, p.nbr));
}

void Simulator::track_resets(int t, int v, const UnEvents& ev) {
  if (ev.reset_initiated && ev.reset_key) {
    resets_.push_back({*ev.reset_key, t, -1, -1, false});
    ++metrics_.resets_initiated;
  }
  if ((ev.reset_completed || ev.reset_aborted) && ev.reset_key) {
    for (auto& r : resets_) {
      if (r.key == *ev.reset_key && r.completed_at < 0 && !r.aborted) {
        if (ev.reset_completed) r.completed_at = t;
        else r.aborted = true;
      }
    }
  }
  (void)v;
}

void Simulator::apply_fault(const FaultEvent& f, std::size_t index) {
  ++metrics_.faults_applied;
  Rng rng(Rng::derive(f.seed, 0x5eed0000 + index));
  const auto keys = make_key_pool(rng);
  const auto ids = id_pool();
  auto randomize_caches = [&](int v) {
    for (auto& p : node(v).ports)
      p.cache = rng.coin(0.8) ? std::optional<Frame>(random_frame(node(p.nbr).ports, v, context(p.nbr), rng, keys, ids))
                              : std::nullopt;
  };
  std::string info;
  switch (f.kind) {
    case FaultKind::CorruptNode:
      node_randomize(node(f.node), context(f.node), rng, keys, ids);
      randomize_caches(f.node);
      info = fmt::format("\"node\":{}", f.node);
      break;
    case FaultKind::CrashRecover:
      for (auto& p : node(f.node).ports) {
        p.cache.reset();
        queues_.at({f.node, p.nbr}).reset();
      }
      node_randomize(node(f.node), context(f.node), rng, keys, ids);
      info = fmt::format("\"node\":{}", f.node);
      break;
    case FaultKind::CorruptLink:
      for (auto [a, b] : {std::pair{f.u, f.v}, std::pair{f.v, f.u}}) {
        auto& q = queues_.at({a, b});
        if (!q) continue;
        if (rng.coin()) q.reset();
        else q = random_frame(node(a).ports, b, context(a), rng, keys, ids);
      }
      info = fmt::format("\"u\":{},\"v\":{}", f.u, f.v);
      break;
    case FaultKind::WeightChange:
      versions_.push_back({t_ + 1, graph().with_weight(f.u, f.v, f.w)});
      rebuild_ports(f.u);
      rebuild_ports(f.v);
      info = fmt::format("\"u\":{},\"v\":{},\"w\":{}", f.u, f.v, num(f.w));
      break;
    case FaultKind::RemoveEdge:
      versions_.push_back({t_ + 1, graph().without_edge(f.u, f.v)});
      rebuild_ports(f.u);
      rebuild_ports(f.v);
      queues_.erase({f.u, f.v});
      queues_.erase({f.v, f.u});
      info = fmt::format("\"u\":{},\"v\":{}", f.u, f.v);
      break;
    case FaultKind::AddEdge:
      versions_.push_back({t_ + 1, graph().with_edge(f.u, f.v, f.w)});
      rebuild_ports(f.u);
      rebuild_ports(f.v);
      queues_[{f.u, f.v}] = std::nullopt;
      queues_[{f.v, f.u}] = std::nullopt;
      info = fmt::format("\"u\":{},\"v\":{},\"w\":{}", f.u, f.v, num(f.w));
      break;
  }
  log(t_, "sys", "fault:" + to_string(f.kind), "", info);
}

void Simulator::inject(const FaultEvent& f) {
  FaultEvent g = f;
  g.at = t_;
  (void)validate_fault(graph(), g);
  injected_.push_back(g);
  apply_fault(g, cfg_.faults.size() + injected_.size());
  resnapshot();
}

std::vector<int> Simulator::fault_times() const {
  std::vector<int> out;
  for (const auto& f : cfg_.faults)
    if (f.at < t_) out.push_back(f.at);
  for (const auto& f : injected_) out.push_back(f.at);
  std::sort(out.begin(), out.end());
  return out;
}

bool Simulator::step() {
  if (t_ >= cfg_.horizon) return false;
  for (std::size_t i = 0; i < cfg_.faults.size(); ++i)
    if (cfg_.faults[i].at == t_) apply_fault(cfg_.faults[i], i);

  std::vector<std::pair<int, int>> pending;
  for (const auto& [link, q] : queues_)
    if (q) pending.push_back(link);
  const int n = graph().n();
  std::fill(acted_.begin(), acted_.end(), 0);

  // Event encoding: index < pending.size() is a delivery, otherwise an action.
  std::vector<std::size_t> order;
  switch (cfg_.scheduler) {
    case SchedulerKind::Synchronous:
      for (std::size_t i = 0; i < pending.size() + static_cast<std::size_t>(n); ++i) order.push_back(i);
      break;
    case SchedulerKind::Fair:
      for (std::size_t i = 0; i < pending.size() + static_cast<std::size_t>(n); ++i) order.push_back(i);
      shuffle(order, sched_rng_);
      break;
    case SchedulerKind::Adversarial: {
      std::vector<int> perm(static_cast<std::size_t>(n));
      std::iota(perm.begin(), perm.end(), 0);
      shuffle(perm, sched_rng_);
      for (int v : perm) {
        order.push_back(pending.size() + static_cast<std::size_t>(v));
        for (std::size_t i = 0; i < pending.size(); ++i)
          if (pending[i].second == v) order.push_back(i);
      }
      break;
    }
  }
  for (std::size_t e : order) {
    if (e < pending.size()) (void)receive(pending[e].first, pending[e].second);
    else act(static_cast<int>(e - pending.size()));
  }

  ++t_;
  metrics_.time_units = t_;
  metrics_.actions_per_unit_min.push_back(n == 0 ? 0 : *std::min_element(acted_.begin(), acted_.end()));
  for (const auto& s : nodes_) metrics_.peak_state_bits = std::max(metrics_.peak_state_bits, node_state_bits(s));
  snaps_.push_back(take_snapshot());
  for (auto& r : resets_) {
    if (r.released_at >= 0) continue;
    bool held = false;
    for (const auto& s : nodes_) {
      for (const auto& e : s.un.entries) held = held || e.key == r.key;
      held = held || (s.un.own && *s.un.own == r.key);
    }
    if (!held) r.released_at = t_;
  }
  log(t_, "sys", "config", Digest::to_hex(snaps_.back().digest));
  return true;
}

void Simulator::run() {
  while (step()) {
  }
}

void Simulator::resnapshot() { snaps_.back() = take_snapshot(); }

int Simulator::last_fault_time() const {
  int last = -1;
  for (const auto& f : cfg_.faults) last = std::max(last, f.at);
  for (const auto& f : injected_) last = std::max(last, f.at);
  return last;
}

Snapshot Simulator::take_snapshot() const {
  Snapshot snap;
  snap.t = t_;
  snap.graph_version = static_cast<int>(versions_.size()) - 1;
  Digest h;
  const bool un = runs_un(cfg_.stack);
  for (int v = 0; v < graph().n(); ++v) {
    const NodeState& s = node(v);
    NodeSnapshot ns;
    ns.phase = un ? s.un.phase : 3;
    ns.id = un ? s.un.id : fixed_ids_[static_cast<std::size_t>(v)];
    if (un) {
      ns.id_list = s.un.id_list;
      std::sort(ns.id_list.begin(), ns.id_list.end());
      ns.list_dupfree = std::adjacent_find(ns.id_list.begin(), ns.id_list.end()) == ns.id_list.end();
      ns.n_seen = s.un.n_seen;
    } else {
      ns.id_list = fixed_ids_;
      ns.list_dupfree = true;
      ns.n_seen = graph().n();
    }
    if (runs_apsp(cfg_.stack))
      for (const auto& r : s.apsp.table)
        if (std::isfinite(r.d)) ns.finite_ids.push_back(r.dest);
    if (runs_mdst(cfg_.stack)) {
      ns.upbound = s.mdst.phi_star.upbound;
      ns.tree_parent = s.mdst.tree_parent;
    }
    snap.nodes.push_back(std::move(ns));
    hash_node(h, s);
  }
  for (const auto& [link, q] : queues_) {
    h.add(link.first).add(link.second).add(q.has_value());
    if (q) q->hash_into(h);
  }
  snap.digest = h.value();
  return snap;
}

void Simulator::log(int t, std::string actor, std::string label, std::string digest, std::string info) {
  if (!cfg_.record_trace) return;
  trace_.push_back({t, std::move(actor), std::move(label), std::move(digest), std::move(info)});
}

std::vector<std::uint64_t> Simulator::current_ids() const {
  std::vector<std::uint64_t> ids;
  for (int v = 0; v < graph().n(); ++v)
    ids.push_back(runs_un(cfg_.stack) ? node(v).un.id : fixed_ids_[static_cast<std::size_t>(v)]);
  return ids;
}

std::optional<SpanningTree> Simulator::extracted_tree() const {
  if (!runs_mdst(cfg_.stack)) return std::nullopt;
  SpanningTree t;
  const int n = graph().n();
  t.parent.assign(static_cast<std::size_t>(n), -1);
  int roots = 0;
  for (int v = 0; v < n; ++v) {
    const int p = node(v).mdst.tree_parent;
    if (p == kTreeNotReady) return std::nullopt;
    if (p == kTreeRoot) {
      ++roots;
      t.root = GeneralNode::vertex(v);
      continue;
    }
    t.parent[static_cast<std::size_t>(v)] = p;
    t.edges.emplace_back(std::min(v, p), std::max(v, p));
  }
  if (roots != 1) return std::nullopt;
  std::sort(t.edges.begin(), t.edges.end());
  if (!is_spanning_tree(graph(), t)) return std::nullopt;
  return t;
}

void Simulator::write_trace(std::ostream& out) const {
  for (const auto& r : trace_) {
    out << fmt::format("{{\"t\":{},\"actor\":\"{}\",\"action\":\"{}\",\"digest\":\"{}\"", r.t, r.actor, r.label,
                       r.digest);
    if (!r.info.empty()) out << ',' << r.info;
    out << "}\n";
  }
}

void Simulator::dump_tables(std::ostream& out) const {
  for (int v = 0; v < graph().n(); ++v) {
    const NodeState& s = node(v);
    std::string routes;
    for (const auto& r : s.apsp.table) {
      if (!routes.empty()) routes += ',';
      routes += fmt::format("{{\"dest\":{},\"d\":{},\"hops\":{},\"via\":{}}}", r.dest, num(r.d), r.hops, r.port);
    }
    out << fmt::format("{{\"t\":{},\"node\":{},\"id\":{},\"routes\":[{}]}}\n", t_, v, current_ids()[static_cast<std::size_t>(v)],
                       routes);
  }
}

}  // namespace mdst
