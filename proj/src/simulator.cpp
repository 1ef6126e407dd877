#include "roust/simulator.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <set>
#include <sstream>
#include <unordered_set>

#include "roust/efsm.hpp"
#include "roust/encoding.hpp"
#include "roust/projection.hpp"
#include "roust/semantics.hpp"
#include "roust/wellformedness.hpp"

namespace roust {

std::size_t SessionLog::data_count() const {
  return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(), [](const auto& e) {
    return e.kind == Envelope::Kind::Data;
  }));
}

std::string SessionLog::serialize() const {
  std::ostringstream os;
  for (const auto& e : entries)
    os << e.step << "," << e.from.name() << "," << e.to.name() << ","
       << (e.kind == Envelope::Kind::Data ? "data" : "cancel") << ","
       << (e.kind == Envelope::Kind::Data ? e.msg.name : e.reason) << "\n";
  return os.str();
}

SessionLog SessionLog::parse(const std::string& text) {
  SessionLog log;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::istringstream ls(line);
    std::string part;
    while (std::getline(ls, part, ',')) f.push_back(part);
    if (f.size() != 5) throw std::invalid_argument("malformed log line: " + line);
    Envelope e;
    e.step = std::stoull(f[0]);
    e.from = Role(f[1]);
    e.to = Role(f[2]);
    if (f[3] == "data") {
      e.msg = MsgLabel(f[4]);
    } else if (f[3] == "cancel") {
      e.kind = Envelope::Kind::Cancel;
      e.reason = f[4];
    } else {
      throw std::invalid_argument("unknown envelope kind: " + f[3]);
    }
    log.entries.push_back(std::move(e));
  }
  return log;
}

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

struct Endpoint {
  Role role;
  Efsm efsm;
  int state = 1;
  ChoicePolicy policy;
  std::mt19937_64 rng;
  std::size_t fixed_pos = 0;
  std::map<int, std::size_t> visits;          // per send state
  std::map<int, std::set<int>> reach;         // state -> reachable states
};

std::map<int, std::set<int>> reachability(const Efsm& e) {
  std::map<int, std::set<int>> out;
  for (const auto& s : e.states) {
    std::set<int>& seen = out[s.id];
    std::deque<int> q{s.id};
    while (!q.empty()) {
      int cur = q.front();
      q.pop_front();
      for (const auto* t : e.outgoing(cur))
        if (seen.insert(t->to).second) q.push_back(t->to);
    }
  }
  return out;
}

const EfsmTransition& choose(Endpoint& ep) {
  auto outs = ep.efsm.outgoing(ep.state);
  if (outs.size() == 1) return *outs.front();
  std::size_t visit = ep.visits[ep.state]++;
  switch (ep.policy.kind) {
    case ChoicePolicy::Kind::Fixed: {
      if (ep.fixed_pos >= ep.policy.labels.size()) return *outs.front();
      const std::string& want = ep.policy.labels[ep.fixed_pos++];
      for (const auto* t : outs)
        if (t->label.name == want) return *t;
      throw ConformanceViolation(ep.role.name() + " scripted to send '" + want +
                                 "', which state S" + std::to_string(ep.state) + " does not offer");
    }
    case ChoicePolicy::Kind::RoundRobin: return *outs[visit % outs.size()];
    case ChoicePolicy::Kind::SeededRandom: return *outs[ep.rng() % outs.size()];
    case ChoicePolicy::Kind::Rounds: {
      const EfsmTransition* cont = nullptr;
      const EfsmTransition* exit = nullptr;
      for (const auto* t : outs) {
        bool loops = t->to == ep.state || ep.reach[t->to].count(ep.state);
        if (loops && !cont) cont = t;
        if (!loops && !exit) exit = t;
      }
      if (cont && (visit + 1 < ep.policy.rounds || !exit)) return *cont;
      return exit ? *exit : *outs.front();
    }
  }
  return *outs.front();
}

}  // namespace

SessionLog run_session(const Global& g, const Role& router,
                       const std::map<Role, ChoicePolicy>& scripts, const SimConfig& cfg) {
  if (cfg.max_steps == 0) throw std::invalid_argument("max_steps must be positive");
  WfReport wf = check_wf(g);
  if (!wf) throw std::invalid_argument("protocol is not well-formed:\n" + wf.to_string());
  std::set<Role> roles = participants(g);
  Global enc;
  if (cfg.route_via_router) {
    enc = is_canonical(g) ? encode_global(g, router) : g;
    WfReport wfs = check_wf_routed(enc, router);
    if (!wfs) throw std::invalid_argument("encoded protocol is not well-formed:\n" + wfs.to_string());
  }

  std::vector<Endpoint> eps;
  for (const auto& r : roles) {
    Endpoint ep;
    ep.role = r;
    Local t = cfg.route_via_router && r != router ? project(enc, r) : project(g, r);
    ep.efsm = build_efsm(t, r);
    ep.state = ep.efsm.initial;
    auto it = scripts.find(r);
    ep.policy = it == scripts.end() ? ChoicePolicy::round_robin() : it->second;
    ep.rng.seed(cfg.seed ^ fnv1a(r.name()));
    ep.reach = reachability(ep.efsm);
    eps.push_back(std::move(ep));
  }

  SessionLog log;
  std::map<Role, std::map<Role, std::deque<Envelope>>> inbox;
  std::map<std::pair<Role, Role>, std::deque<Envelope>> forward;
  std::map<std::string, std::uint64_t> counters;
  std::mt19937_64 sched(cfg.seed);
  const bool has_router = cfg.route_via_router && roles.count(router);
  const std::size_t n_actors = eps.size() + (has_router ? 1 : 0);
  std::size_t last = n_actors - 1;
  std::optional<std::pair<Role, Role>> last_channel;

  auto receive_peer = [&](const Endpoint& ep) -> std::optional<Role> {
    auto outs = ep.efsm.outgoing(ep.state);
    if (outs.empty() || outs.front()->send) return std::nullopt;
    return outs.front()->peer;
  };
  auto ready = [&](std::size_t a) {
    if (a == eps.size()) return std::any_of(forward.begin(), forward.end(),
                                            [](const auto& kv) { return !kv.second.empty(); });
    const Endpoint& ep = eps[a];
    auto outs = ep.efsm.outgoing(ep.state);
    if (outs.empty()) return false;
    if (outs.front()->send) return true;
    const auto& q = inbox[ep.role][outs.front()->peer];
    return !q.empty();
  };
  auto payload_for = [&](const MsgLabel& m) {
    std::string out;
    for (const auto& s : m.payloads) out += (out.empty() ? "" : ";") + s + "#" + std::to_string(counters[s]++);
    return out;
  };

  for (std::size_t step = 0;; ++step) {
    if (cfg.cancel && step == cfg.cancel->second) {
      const Role& who = cfg.cancel->first;
      std::string reason = "cancelled by " + who.name();
      if (who != router && roles.count(router))
        log.entries.push_back({step, who, router, MsgLabel("cancel"), "", Envelope::Kind::Cancel, reason});
      for (const auto& r : roles) {
        if (r == who) continue;
        log.notified.push_back(r);
        if (r != router)
          log.entries.push_back({step, router, r, MsgLabel("cancel"), "", Envelope::Kind::Cancel, reason});
      }
      log.cancelled_by = who;
      log.steps = step;
      return log;
    }
    std::vector<std::size_t> cands;
    for (std::size_t i = 1; i <= n_actors; ++i) {
      std::size_t a = (last + i) % n_actors;
      if (ready(a)) cands.push_back(a);
    }
    if (cands.empty()) {
      bool done = std::all_of(eps.begin(), eps.end(),
                              [](const Endpoint& ep) { return ep.efsm.outgoing(ep.state).empty(); });
      if (!done) throw ConformanceViolation("session is stuck at step " + std::to_string(step));
      log.completed = true;
      log.steps = step;
      return log;
    }
    if (step >= cfg.max_steps)
      throw MaxStepsExceeded("session did not finish within " + std::to_string(cfg.max_steps) + " steps");
    std::size_t a = cfg.scheduler == SchedulerKind::RoundRobin ? cands.front()
                                                               : cands[sched() % cands.size()];
    last = a;

    if (a == eps.size()) {
      auto it = forward.begin();
      if (last_channel) {
        it = forward.upper_bound(*last_channel);
        auto nonempty = [](const auto& kv) { return !kv.second.empty(); };
        it = std::find_if(it, forward.end(), nonempty);
        if (it == forward.end()) it = std::find_if(forward.begin(), forward.end(), nonempty);
      } else {
        it = std::find_if(forward.begin(), forward.end(), [](const auto& kv) { return !kv.second.empty(); });
      }
      Envelope env = std::move(it->second.front());
      it->second.pop_front();
      last_channel = it->first;
      inbox[env.to][env.from].push_back(std::move(env));
      continue;
    }

    Endpoint& ep = eps[a];
    auto outs = ep.efsm.outgoing(ep.state);
    if (outs.front()->send) {
      const EfsmTransition& t = choose(ep);
      Envelope env{step, ep.role, t.peer, t.label, payload_for(t.label), Envelope::Kind::Data, ""};
      log.observed[ep.role].push_back({t.peer, true, t.label.name});
      if (has_router && t.via && *t.via == router)
        forward[{ep.role, t.peer}].push_back(std::move(env));
      else
        inbox[t.peer][ep.role].push_back(std::move(env));
      ep.state = t.to;
    } else {
      Role peer = *receive_peer(ep);
      auto& q = inbox[ep.role][peer];
      Envelope env = std::move(q.front());
      q.pop_front();
      auto match = std::find_if(outs.begin(), outs.end(),
                                [&](const auto* t) { return t->label.name == env.msg.name; });
      if (match == outs.end())
        throw ConformanceViolation(ep.role.name() + " received '" + env.msg.name + "' from " +
                                   peer.name() + ", which state S" + std::to_string(ep.state) +
                                   " does not accept");
      env.step = step;
      log.observed[ep.role].push_back({peer, false, env.msg.name});
      log.entries.push_back(std::move(env));
      ep.state = (*match)->to;
    }
  }
}

// ---------------------------------------------------------------------------
// Log validation

LogCheck validate_log(const Global& g, const Role& router, const SessionLog& log) {
  std::vector<const Envelope*> data;
  for (const auto& e : log.entries) {
    if (e.kind == Envelope::Kind::Cancel) break;
    data.push_back(&e);
  }
  if (data.empty()) return {};
  Global enc = is_canonical(g) ? encode_global(g, router) : g;
  Configuration init = project_configuration(enc);

  std::map<Channel, std::vector<std::size_t>> per_channel;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!init.locals.count(data[i]->from) || !init.locals.count(data[i]->to))
      return {false, i, "envelope names a role outside the protocol"};
    per_channel[{data[i]->from, data[i]->to}].push_back(i);
  }

  struct Node {
    Configuration c;
    std::size_t i;
  };
  std::deque<Node> queue{{init, 0}};
  std::unordered_set<std::string> seen{init.key() + "#0"};
  std::size_t best = 0;
  while (!queue.empty()) {
    Node n = std::move(queue.front());
    queue.pop_front();
    best = std::max(best, n.i);
    if (n.i == data.size()) return {};
    for (auto& st : config_steps(n.c)) {
      const ActionLabel& l = st.label;
      Channel ch{l.from, l.to};
      std::size_t ni = n.i;
      if (l.is_send()) {
        // The k-th send on a channel must carry the k-th logged message on it.
        std::size_t delivered = 0;
        for (std::size_t k : per_channel[ch])
          if (k < n.i) ++delivered;
        std::size_t sent = delivered + n.c.buffers.at(ch).size();
        const auto& idx = per_channel[ch];
        if (sent >= idx.size() || data[idx[sent]]->msg.name != l.msg.name) continue;
      } else {
        const Envelope& want = *data[n.i];
        if (want.from != l.from || want.to != l.to || want.msg.name != l.msg.name) continue;
        ni = n.i + 1;
      }
      std::string key = st.next.key() + "#" + std::to_string(ni);
      if (seen.insert(key).second) queue.push_back({std::move(st.next), ni});
    }
  }
  const Envelope& bad = *data[best];
  return {false, best,
          "delivery " + bad.from.name() + "->" + bad.to.name() + ":" + bad.msg.name +
              " is not possible at this point of the protocol"};
}

}  // namespace roust
