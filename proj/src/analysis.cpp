#include "roust/analysis.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "roust/encoding.hpp"
#include "roust/projection.hpp"
#include "roust/wellformedness.hpp"

namespace roust {

std::string to_string(const Trace& t) {
  std::string out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += " ";
    out += t[i].to_string();
  }
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

bool TraceSet::prefix_closed() const {
  for (const auto& t : traces) {
    if (t.empty()) continue;
    Trace p(t.begin(), t.end() - 1);
    if (!traces.count(p)) return false;
  }
  return traces.empty() || traces.count(Trace{});
}

namespace {

// Interned state graph with memoized successor lists.
template <class S>
class Explorer {
 public:
  using StepFn = std::function<std::vector<Step<S>>(const S&)>;
  using KeyFn = std::function<std::string(const S&)>;

  Explorer(StepFn step, KeyFn key, std::size_t cap)
      : step_(std::move(step)), key_(std::move(key)), cap_(cap) {}

  std::string intern(const S& s) {
    std::string k = key_(s);
    if (!states_.count(k)) {
      if (states_.size() >= cap_) throw StateBudgetExceeded(cap_);
      states_.emplace(k, s);
    }
    return k;
  }

  const S& state(const std::string& k) const { return states_.at(k); }

  const std::vector<std::pair<ActionLabel, std::string>>& successors(const std::string& k) {
    auto it = succ_.find(k);
    if (it != succ_.end()) return it->second;
    std::vector<std::pair<ActionLabel, std::string>> out;
    for (auto& st : step_(states_.at(k))) out.emplace_back(st.label, intern(st.next));
    return succ_.emplace(k, std::move(out)).first->second;
  }

  std::size_t size() const { return states_.size(); }

 private:
  StepFn step_;
  KeyFn key_;
  std::size_t cap_;
  std::unordered_map<std::string, S> states_;
  std::unordered_map<std::string, std::vector<std::pair<ActionLabel, std::string>>> succ_;
};

Explorer<Global> global_explorer(const ExploreOptions& opts) {
  RuleSet rules = opts.rules;
  return Explorer<Global>([rules](const Global& g) { return global_steps(g, rules); },
                          [](const Global& g) { return canonical_key(g); }, opts.state_cap);
}

Explorer<Configuration> config_explorer(const ExploreOptions& opts) {
  RuleSet rules = opts.rules;
  return Explorer<Configuration>(
      [rules](const Configuration& c) { return config_steps(c, rules); },
      [](const Configuration& c) { return c.key(); }, opts.state_cap);
}

using KeySet = std::vector<std::string>;  // sorted, unique

std::string join(const KeySet& ks) {
  std::string out;
  for (const auto& k : ks) out += k + "\x1f";
  return out;
}

template <class S>
std::map<ActionLabel, KeySet> grouped_successors(Explorer<S>& ex, const KeySet& ks) {
  std::map<ActionLabel, std::set<std::string>> acc;
  for (const auto& k : ks)
    for (const auto& [l, n] : ex.successors(k)) acc[l].insert(n);
  std::map<ActionLabel, KeySet> out;
  for (auto& [l, s] : acc) out.emplace(l, KeySet(s.begin(), s.end()));
  return out;
}

template <class S>
TraceSet traces_of(Explorer<S>& ex, const S& init, std::size_t depth) {
  TraceSet ts;
  ts.depth = depth;
  std::vector<std::pair<Trace, KeySet>> level{{Trace{}, KeySet{ex.intern(init)}}};
  ts.traces.insert(Trace{});
  for (std::size_t d = 0; d < depth && !level.empty(); ++d) {
    std::vector<std::pair<Trace, KeySet>> next;
    for (const auto& [tr, ks] : level) {
      for (auto& [l, succ] : grouped_successors(ex, ks)) {
        Trace t2 = tr;
        t2.push_back(l);
        ts.traces.insert(t2);
        next.emplace_back(std::move(t2), std::move(succ));
      }
    }
    level = std::move(next);
  }
  return ts;
}

Configuration initial_configuration(const Global& g) {
  std::map<Role, Local> locals;
  for (const auto& r : participants(g)) locals[r] = project(g, r);
  return Configuration::initial(std::move(locals));
}

template <class S>
std::string describe_states(Explorer<S>& ex, const KeySet& ks,
                            std::function<std::string(const S&)> show) {
  std::string out;
  for (const auto& k : ks) out += show(ex.state(k)) + "\n";
  return out;
}

ExplorationReport inconclusive(std::string check, std::string target, std::string note) {
  ExplorationReport r;
  r.check = std::move(check);
  r.target = std::move(target);
  r.verdict = Verdict::Inconclusive;
  r.note = std::move(note);
  return r;
}

}  // namespace

TraceSet global_traces(const Global& g, std::size_t depth, const ExploreOptions& opts) {
  auto ex = global_explorer(opts);
  return traces_of(ex, g, depth);
}

TraceSet config_traces(const Global& g, std::size_t depth, const ExploreOptions& opts) {
  auto ex = config_explorer(opts);
  return traces_of(ex, initial_configuration(g), depth);
}

ExplorationReport check_trace_equivalence(const Global& g, const ExploreOptions& opts) {
  const std::string check = "trace-equivalence";
  const std::string target = is_canonical(g) ? "canonical" : "routed";
  WfReport wf = check_wf(g);
  if (!wf) return inconclusive(check, target, "precondition failed: " + wf.to_string());

  ExplorationReport rep;
  rep.check = check;
  rep.target = target;
  auto gex = global_explorer(opts);
  auto cex = config_explorer(opts);
  try {
    struct Node {
      Trace trace;
      KeySet left, right;
    };
    std::deque<Node> queue;
    std::unordered_set<std::string> seen;
    Node start{{}, {gex.intern(g)}, {cex.intern(initial_configuration(g))}};
    seen.insert(join(start.left) + "|" + join(start.right));
    queue.push_back(std::move(start));
    while (!queue.empty()) {
      Node n = std::move(queue.front());
      queue.pop_front();
      rep.depth_reached = std::max(rep.depth_reached, n.trace.size());
      if (n.trace.size() >= opts.depth) continue;
      auto ls = grouped_successors(gex, n.left);
      auto rs = grouped_successors(cex, n.right);
      std::optional<ActionLabel> diff;
      std::string side;
      for (const auto& [l, _] : ls)
        if (!rs.count(l)) {
          diff = l;
          side = "global";
          break;
        }
      for (const auto& [l, _] : rs)
        if (!ls.count(l) && (!diff || l < *diff)) {
          diff = l;
          side = "configuration";
          break;
        }
      if (diff) {
        rep.verdict = Verdict::Fail;
        rep.counterexample = n.trace;
        rep.counterexample->push_back(*diff);
        rep.note = "last action enabled only in the " + side + " semantics";
        rep.state = describe_states<Global>(gex, n.left, [](const Global& x) { return to_string(x); }) +
                    describe_states<Configuration>(cex, n.right,
                                                   [](const Configuration& c) { return c.to_string(); });
        break;
      }
      for (auto& [l, lk] : ls) {
        auto& rk = rs.at(l);
        std::string key = join(lk) + "|" + join(rk);
        if (!seen.insert(key).second) continue;
        Trace t2 = n.trace;
        t2.push_back(l);
        queue.push_back({std::move(t2), std::move(lk), std::move(rk)});
      }
    }
  } catch (const ExplorationLimit& e) {
    rep.verdict = Verdict::Inconclusive;
    rep.note = e.what();
  }
  rep.states = gex.size() + cex.size();
  return rep;
}

ExplorationReport check_deadlock_freedom(const Global& g, const Role& router,
                                         const ExploreOptions& opts) {
  const std::string check = "deadlock-freedom";
  const std::string target = is_canonical(g) ? "canonical" : "routed";
  WfReport wf = check_wf_routed(g, router);
  if (!wf) return inconclusive(check, target, "precondition failed: " + wf.to_string());

  ExplorationReport rep;
  rep.check = check;
  rep.target = target;
  auto ex = global_explorer(opts);
  try {
    std::unordered_map<std::string, std::pair<std::string, ActionLabel>> parent;
    std::unordered_map<std::string, std::size_t> dist;
    std::deque<std::string> queue;
    std::string root = ex.intern(g);
    dist[root] = 0;
    queue.push_back(root);
    const std::string end_key = canonical_key(Global::end());
    while (!queue.empty()) {
      std::string k = queue.front();
      queue.pop_front();
      rep.depth_reached = std::max(rep.depth_reached, dist[k]);
      const auto& succ = ex.successors(k);
      if (succ.empty() && k != end_key) {
        rep.verdict = Verdict::Fail;
        Trace tr;
        for (std::string cur = k; cur != root;) {
          const auto& [p, l] = parent.at(cur);
          tr.push_back(l);
          cur = p;
        }
        std::reverse(tr.begin(), tr.end());
        rep.counterexample = std::move(tr);
        rep.state = to_string(ex.state(k));
        rep.note = "stuck state";
        break;
      }
      for (const auto& [l, n] : succ) {
        if (dist.count(n)) continue;
        dist[n] = dist[k] + 1;
        parent.emplace(n, std::make_pair(k, l));
        queue.push_back(n);
      }
    }
  } catch (const ExplorationLimit& e) {
    rep.verdict = Verdict::Inconclusive;
    rep.note = e.what();
  }
  rep.states = ex.size();
  return rep;
}

ExplorationReport check_encoding_bisim(const Global& g, const Role& s, const ExploreOptions& opts) {
  const std::string check = "encoding-bisimulation";
  if (!is_canonical(g)) return inconclusive(check, "canonical", "precondition failed: input is not canonical");
  WfReport wf = check_wf(g);
  if (!wf) return inconclusive(check, "canonical", "precondition failed: " + wf.to_string());

  ExplorationReport rep;
  rep.check = check;
  rep.target = "canonical";
  auto gex = global_explorer(opts);
  auto eex = global_explorer(opts);
  try {
    struct Node {
      Trace trace;
      std::string g, e;
    };
    std::deque<Node> queue;
    std::unordered_set<std::string> seen;
    Node start{{}, gex.intern(g), eex.intern(encode_global(g, s))};
    seen.insert(start.g + "|" + start.e);
    queue.push_back(start);
    auto fail = [&](const Node& n, std::optional<ActionLabel> l, std::string note) {
      rep.verdict = Verdict::Fail;
      rep.counterexample = n.trace;
      if (l) rep.counterexample->push_back(*l);
      rep.note = std::move(note);
      rep.state = to_string(gex.state(n.g)) + "\n" + to_string(eex.state(n.e)) + "\n";
    };
    while (!queue.empty()) {
      Node n = std::move(queue.front());
      queue.pop_front();
      rep.depth_reached = std::max(rep.depth_reached, n.trace.size());
      if (canonical_key(encode_state(gex.state(n.g), s)) != n.e) {
        fail(n, std::nullopt, "encoded state is not the encoding of the source state");
        break;
      }
      if (n.trace.size() >= opts.depth) continue;
      std::map<ActionLabel, std::vector<std::string>> gs, es;
      std::map<ActionLabel, ActionLabel> source_label;
      for (const auto& [l, k] : gex.successors(n.g)) {
        ActionLabel el = encode_label(l, s);
        gs[el].push_back(k);
        source_label.emplace(el, l);
      }
      for (const auto& [l, k] : eex.successors(n.e)) es[l].push_back(k);
      bool bad = false;
      for (const auto& [l, _] : gs)
        if (!es.count(l)) {
          fail(n, source_label.at(l), "source action has no encoded counterpart");
          bad = true;
          break;
        }
      if (bad) break;
      for (const auto& [l, _] : es)
        if (!gs.count(l)) {
          fail(n, l, "encoded action has no source counterpart");
          bad = true;
          break;
        }
      if (bad) break;
      for (const auto& [el, gks] : gs) {
        const auto& eks = es.at(el);
        std::set<std::string> targets(eks.begin(), eks.end());
        std::set<std::string> images;
        for (const auto& gk : gks) {
          std::string img = canonical_key(encode_state(gex.state(gk), s));
          images.insert(img);
          if (!targets.count(img)) {
            fail(n, source_label.at(el), "successor of the encoded state does not encode the source successor");
            bad = true;
            break;
          }
          if (seen.insert(gk + "|" + img).second) {
            Trace t2 = n.trace;
            t2.push_back(source_label.at(el));
            queue.push_back({std::move(t2), gk, img});
          }
        }
        if (bad) break;
        for (const auto& ek : eks)
          if (!images.count(ek)) {
            fail(n, el, "encoded successor encodes no source successor");
            bad = true;
            break;
          }
        if (bad) break;
      }
      if (bad) break;
    }
  } catch (const ExplorationLimit& e) {
    rep.verdict = Verdict::Inconclusive;
    rep.note = e.what();
  }
  rep.states = gex.size() + eex.size();
  return rep;
}

std::string format_report(const std::vector<ExplorationReport>& reports) {
  std::ostringstream os;
  Verdict overall = Verdict::Pass;
  for (const auto& r : reports) {
    os << "check=" << r.check << "\n";
    os << "target=" << r.target << "\n";
    os << "verdict=" << to_string(r.verdict) << "\n";
    os << "states=" << r.states << "\n";
    os << "depth=" << r.depth_reached << "\n";
    os << "counterexample=" << (r.counterexample ? to_string(*r.counterexample) : "") << "\n";
    if (!r.note.empty()) {
      std::string note = r.note;
      std::replace(note.begin(), note.end(), '\n', ' ');
      os << "note=" << note << "\n";
    }
    os << "\n";
    if (r.verdict == Verdict::Fail)
      overall = Verdict::Fail;
    else if (r.verdict == Verdict::Inconclusive && overall == Verdict::Pass)
      overall = Verdict::Inconclusive;
  }
  os << "verdict=" << to_string(overall) << "\n";
  return os.str();
}

}  // namespace roust
