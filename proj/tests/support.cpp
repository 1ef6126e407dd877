#include "support.hpp"

#include <deque>
#include <fstream>
#include <optional>
#include <map>
#include <set>
#include <sstream>

#include "roust/encoding.hpp"
#include "roust/projection.hpp"
#include "roust/scribble.hpp"
#include "roust/semantics.hpp"
#include "roust/wellformedness.hpp"

#ifndef ROUST_PROTOCOL_DIR
#define ROUST_PROTOCOL_DIR "protocols"
#endif

namespace rt {

namespace {

struct Generator {
  Rng& rng;
  const GenOptions& o;
  std::vector<std::string> bound;
  int next_binder = 0;

  Global any(int depth) {
    if (depth <= 0 || rng.coin(o.p_end)) {
      if (!bound.empty() && rng.coin(0.6)) return Global::var(rng.pick(bound));
      return Global::end();
    }
    if (depth >= 2 && bound.size() < 2 && rng.coin(o.p_rec)) {
      std::string t = "t" + std::to_string(next_binder++);
      bound.push_back(t);
      Global body = comm(depth - 1);
      bound.pop_back();
      return Global::rec(t, body);
    }
    return comm(depth);
  }

  Global comm(int depth) {
    int n = static_cast<int>(o.roles.size());
    int i = rng.below(n);
    int j = rng.below(n - 1);
    if (j >= i) ++j;
    std::vector<std::string> labels = o.labels;
    for (int k = static_cast<int>(labels.size()) - 1; k > 0; --k) std::swap(labels[k], labels[rng.below(k + 1)]);
    int k = 1 + rng.below(std::min<int>(o.max_branches, static_cast<int>(labels.size())));
    Global::Branches bs;
    bool shared = rng.coin(o.p_shared);
    Global common = shared ? any(depth - 1) : Global::end();
    for (int b = 0; b < k; ++b) bs.push_back({MsgLabel(labels[b]), shared ? common : any(depth - 1)});
    return Global::comm(Role(o.roles[i]), Role(o.roles[j]), std::move(bs));
  }
};

}  // namespace

Global random_global(Rng& rng, const GenOptions& opt) {
  Generator g{rng, opt, {}, 0};
  return g.any(opt.max_depth);
}

// ---------------------------------------------------------------------------
// Reference enumerator

namespace {

Global nsubst(const Global& g, const std::string& t, const Global& r) {
  switch (g.kind()) {
    case GKind::End: return g;
    case GKind::Var: return g.var() == t ? r : g;
    case GKind::Rec: return g.var() == t ? g : Global::rec(g.var(), nsubst(g.body(), t, r));
    default: {
      Global::Branches bs;
      for (const auto& b : g.branches()) bs.push_back({b.label, nsubst(b.cont, t, r)});
      return g.with_branches(std::move(bs));
    }
  }
}

std::string lkey(const ActionLabel& l) {
  std::string s = std::to_string(static_cast<int>(l.kind)) + "|" + l.from.name() + "|" + l.to.name() + "|" +
                  (l.via ? l.via->name() : "") + "|" + l.msg.name;
  return s;
}

using Steps = std::vector<std::pair<ActionLabel, Global>>;

Steps steps_rec(const Global& g, std::map<std::string, int>& unfolds);

// All branches must perform the same action; the result takes one successor
// per branch, in every combination.
Steps descend(const Global& g, const std::set<Role>& excluded, std::map<std::string, int>& unfolds) {
  const auto& bs = g.branches();
  std::vector<std::map<std::string, std::vector<std::pair<ActionLabel, Global>>>> per;
  for (const auto& b : bs) {
    std::map<std::string, std::vector<std::pair<ActionLabel, Global>>> m;
    for (auto& st : steps_rec(b.cont, unfolds))
      if (!excluded.count(st.first.subject())) m[lkey(st.first)].push_back(st);
    per.push_back(std::move(m));
  }
  Steps out;
  for (const auto& [key, first] : per[0]) {
    bool everywhere = true;
    for (const auto& m : per) everywhere = everywhere && m.count(key);
    if (!everywhere) continue;
    std::vector<Global::Branches> partial{{}};
    for (std::size_t i = 0; i < bs.size(); ++i) {
      std::vector<Global::Branches> grown;
      for (const auto& pre : partial)
        for (const auto& st : per[i].at(key)) {
          auto next = pre;
          next.push_back({bs[i].label, st.second});
          grown.push_back(std::move(next));
        }
      partial = std::move(grown);
    }
    for (auto& nb : partial) out.push_back({first.front().first, g.with_branches(std::move(nb))});
  }
  return out;
}

// In transit only the chosen continuation moves; the receiver is blocked.
Steps chosen_only(const Global& g, std::map<std::string, int>& unfolds) {
  Steps out;
  for (auto& st : steps_rec(g.branch(g.chosen()), unfolds)) {
    if (st.first.subject() == g.to()) continue;
    Global::Branches bs = g.branches();
    for (auto& b : bs)
      if (b.label.name == g.chosen()) b.cont = st.second;
    out.push_back({st.first, g.with_branches(std::move(bs))});
  }
  return out;
}

Steps steps_rec(const Global& g, std::map<std::string, int>& unfolds) {
  Steps out;
  switch (g.kind()) {
    case GKind::End:
    case GKind::Var: return out;
    case GKind::Rec: {
      std::string key = to_string(g);
      if (unfolds[key] >= 2) return out;
      ++unfolds[key];
      out = steps_rec(nsubst(g.body(), g.var(), g), unfolds);
      --unfolds[key];
      return out;
    }
    case GKind::Comm: {
      for (const auto& b : g.branches())
        out.push_back({ActionLabel::send(g.from(), g.to(), b.label),
                       Global::transit(g.from(), g.to(), b.label.name, g.branches())});
      auto more = descend(g, {g.from(), g.to()}, unfolds);
      out.insert(out.end(), more.begin(), more.end());
      return out;
    }
    case GKind::TransitComm: {
      out.push_back({ActionLabel::recv(g.from(), g.to(), MsgLabel(g.chosen())), g.branch(g.chosen())});
      auto more = chosen_only(g, unfolds);
      out.insert(out.end(), more.begin(), more.end());
      return out;
    }
    case GKind::RoutedComm: {
      for (const auto& b : g.branches())
        out.push_back({ActionLabel::routed_send(g.via(), g.from(), g.to(), b.label),
                       Global::transit_routed(g.from(), g.to(), g.via(), b.label.name, g.branches())});
      auto more = descend(g, {g.from(), g.to()}, unfolds);
      out.insert(out.end(), more.begin(), more.end());
      return out;
    }
    case GKind::TransitRouted: {
      out.push_back({ActionLabel::routed_recv(g.via(), g.from(), g.to(), MsgLabel(g.chosen())),
                     g.branch(g.chosen())});
      auto more = chosen_only(g, unfolds);
      out.insert(out.end(), more.begin(), more.end());
      return out;
    }
  }
  return out;
}

}  // namespace

Steps naive_steps(const Global& g) {
  std::map<std::string, int> unfolds;
  Steps raw = steps_rec(g, unfolds);
  std::map<std::string, std::pair<ActionLabel, Global>> seen;
  for (auto& st : raw) seen.emplace(lkey(st.first) + "#" + canonical_key(st.second), st);
  Steps out;
  for (auto& [k, st] : seen) out.push_back(st);
  return out;
}

std::set<Trace> naive_traces(const Global& g, std::size_t depth) {
  std::set<Trace> out{Trace{}};
  if (depth == 0) return out;
  for (const auto& [l, next] : naive_steps(g))
    for (const auto& t : naive_traces(next, depth - 1)) {
      Trace full{l};
      full.insert(full.end(), t.begin(), t.end());
      out.insert(std::move(full));
    }
  return out;
}

// ---------------------------------------------------------------------------
// Reference terms

namespace {

Global c1(const char* p, const char* q, const char* l, Global k) {
  return Global::comm(Role(p), Role(q), {{MsgLabel(l), std::move(k)}});
}

Global r1(const char* p, const char* q, const char* s, const char* l, Global k) {
  return Global::routed(Role(p), Role(q), Role(s), {{MsgLabel(l), std::move(k)}});
}

}  // namespace

Global travel() {
  Global ok = c1("A", "S", "Confirm", Global::end());
  Global no = c1("A", "S", "Reject", Global::end());
  Global atb = Global::comm(Role("B"), Role("A"), {{"OK", ok}, {"No", no}});
  Global sta = Global::comm(Role("S"), Role("A"),
                            {{"Available", c1("A", "B", "Quote", atb)},
                             {"Full", c1("A", "B", "Full", Global::var("t"))}});
  return Global::rec("t", c1("B", "A", "Suggest", c1("A", "S", "Query", sta)));
}

Global travel_routed() {
  Global ok = c1("A", "S", "Confirm", Global::end());
  Global no = c1("A", "S", "Reject", Global::end());
  Global atb = Global::routed(Role("B"), Role("A"), Role("S"), {{"OK", ok}, {"No", no}});
  Global sta = Global::comm(Role("S"), Role("A"),
                            {{"Available", r1("A", "B", "S", "Quote", atb)},
                             {"Full", r1("A", "B", "S", "Full", Global::var("t"))}});
  return Global::rec("t", r1("B", "A", "S", "Suggest", c1("A", "S", "Query", sta)));
}

Global merge_g1() {
  return Global::comm(Role("A"), Role("B"),
                      {{"Greet", c1("A", "C", "Hello", Global::end())},
                       {"Farewell", c1("A", "C", "Bye", Global::end())}});
}

Global merge_g2() {
  return Global::comm(Role("A"), Role("B"),
                      {{"Greet", c1("C", "A", "Hello", Global::end())},
                       {"Farewell", c1("C", "A", "Bye", Global::end())}});
}

Global enc_example() { return c1("p", "q", "M1", c1("s", "q", "M2", Global::end())); }

Global enc_example_routed() { return r1("p", "q", "s", "M1", c1("s", "q", "M2", Global::end())); }

std::string protocol_path(const std::string& name) {
  return std::string(ROUST_PROTOCOL_DIR) + "/" + name + ".scr";
}

Global load_protocol(const std::string& name) {
  std::ifstream in(protocol_path(name));
  if (!in) throw std::runtime_error("missing protocol " + protocol_path(name));
  std::stringstream ss;
  ss << in.rdbuf();
  return elaborate(parse_module(ss.str(), protocol_path(name)), name);
}

const std::vector<CorpusEntry>& corpus() {
  static const std::vector<CorpusEntry> c = {
      {"TravelAgency", "S"}, {"Game", "Svr"}, {"PingPong", "S"}, {"Battleships", "Svr"}};
  return c;
}

// ---------------------------------------------------------------------------
// Properties

std::string PropResult::summary() const {
  std::ostringstream os;
  os << name << ": " << cases << " cases (" << attempts << " generated)";
  if (!ok()) os << "; " << failures.size() << " failure(s), first: " << failures.front();
  return os.str();
}

namespace {

void fail(PropResult& r, const std::string& msg) {
  if (r.failures.size() < 5) r.failures.push_back(msg);
}

bool wf(const Global& g) { return check_wf(g).ok; }

std::optional<Local> try_project(const Global& g, const Role& r) {
  try {
    return project(g, r);
  } catch (const MergeFailure&) {
    return std::nullopt;
  }
}

// body returns true when the case met its precondition.
template <class F>
PropResult run(std::string name, std::uint64_t seed, std::size_t n, const GenOptions& opt, F body) {
  PropResult r;
  r.name = std::move(name);
  Rng rng(seed);
  while (r.cases < n && r.attempts < n * 200) {
    ++r.attempts;
    Global g = random_global(rng, opt);
    try {
      if (body(rng, g, r)) ++r.cases;
    } catch (const std::exception& e) {
      fail(r, std::string("exception: ") + e.what() + " on " + to_string(g));
      ++r.cases;
    }
  }
  if (r.cases < n)
    fail(r, "only " + std::to_string(r.cases) + " of " + std::to_string(n) + " cases met the precondition");
  return r;
}

Role pick_router(Rng& rng, const GenOptions& opt) { return Role(rng.pick(opt.roles)); }

}  // namespace

PropResult prop_projection_encoding_commute(std::uint64_t seed, std::size_t n) {
  GenOptions opt;
  return run("projection/encoding commutation", seed, n, opt, [&](Rng& rng, const Global& g, PropResult& r) {
    Role s = pick_router(rng, opt);
    Global e = encode_global(g, s);
    bool checked = false;
    for (const auto& name : opt.roles) {
      Role q(name);
      if (q == s) continue;
      auto local = try_project(g, q);
      if (!local) continue;
      checked = true;
      Local rhs = encode_local(*local, q, s);
      auto lhs = try_project(e, q);
      if (!lhs) {
        fail(r, "encoded projection undefined for " + name + " in " + to_string(g));
      } else if (!equivalent(*lhs, rhs)) {
        fail(r, "role " + name + " router " + s.name() + " in " + to_string(g) + ": " + to_string(*lhs) +
                    " vs " + to_string(rhs));
      }
    }
    return checked;
  });
}

PropResult prop_encoding_centroid(std::uint64_t seed, std::size_t n) {
  GenOptions opt;
  return run("encoding defines centroid", seed, n, opt, [&](Rng& rng, const Global& g, PropResult& r) {
    Role s = pick_router(rng, opt);
    auto c = is_centroid(encode_global(g, s), s);
    if (!c.holds) fail(r, s.name() + " not centroid of encoding of " + to_string(g) + " at " + c.witness);
    return true;
  });
}

PropResult prop_encoding_participants(std::uint64_t seed, std::size_t n) {
  GenOptions opt;
  return run("encoding preserves participants", seed, n, opt, [&](Rng& rng, const Global& g, PropResult& r) {
    Role s = pick_router(rng, opt);
    auto before = participants(g);
    auto after = participants(encode_global(g, s));
    for (const auto& p : before)
      if (!after.count(p)) fail(r, p.name() + " lost when routing " + to_string(g) + " via " + s.name());
    return true;
  });
}

PropResult prop_encoding_privacy(std::uint64_t seed, std::size_t n) {
  GenOptions opt;
  opt.roles = {"A", "B", "C", "D", "S"};
  opt.max_depth = 3;
  return run("encoding preserves privacy", seed, n, opt, [&](Rng& rng, const Global& g, PropResult& r) {
    Role s = pick_router(rng, opt);
    auto before = participants(g);
    auto after = participants(encode_global(g, s));
    bool any = false;
    for (const auto& name : opt.roles) {
      Role q(name);
      if (q == s || before.count(q)) continue;
      any = true;
      if (after.count(q)) fail(r, name + " introduced when routing " + to_string(g) + " via " + s.name());
    }
    return any;
  });
}

PropResult prop_encoding_substitution(std::uint64_t seed, std::size_t n) {
  GenOptions opt;
  return run("encoding and substitution permute", seed, n, opt, [&](Rng& rng, const Global& g, PropResult& r) {
    // g is closed; open it by cutting the body out of its outermost binder.
    if (g.kind() != GKind::Rec) return false;
    const Global& body = g.body();
    const std::string& t = g.var();
    Global repl = random_global(rng, opt);
    Role s = pick_router(rng, opt);
    Global lhs = encode_global(substitute(body, t, repl), s);
    Global rhs = substitute(encode_global(body, s), t, encode_global(repl, s));
    if (!equivalent(lhs, rhs))
      fail(r, "substituting " + to_string(repl) + " into " + to_string(body) + ": " + to_string(lhs) + " vs " +
                  to_string(rhs));
    return true;
  });
}

PropResult prop_projection_participation(std::uint64_t seed, std::size_t n) {
  GenOptions opt;
  opt.roles = {"A", "B", "C", "D", "S"};
  return run("projection and participation", seed, n, opt, [&](Rng&, const Global& g, PropResult& r) {
    bool checked = false;
    for (const auto& name : opt.roles) {
      Role q(name);
      auto local = try_project(g, q);
      if (!local) continue;
      checked = true;
      bool is_end = unfold_head(*local).is_end();
      bool absent = !participants(g).count(q);
      if (is_end != absent)
        fail(r, name + (absent ? " absent" : " present") + " but projection is " + to_string(*local) + " for " +
                    to_string(g));
    }
    return checked;
  });
}

PropResult prop_wf_implies_routed_wf(std::uint64_t seed, std::size_t n) {
  GenOptions opt;
  return run("wf(G) implies wf^s(enc(G))", seed, n, opt, [&](Rng& rng, const Global& g, PropResult& r) {
    if (!wf(g)) return false;
    Role s = pick_router(rng, opt);
    auto rep = check_wf_routed(encode_global(g, s), s);
    if (!rep.ok) fail(r, "encoding of " + to_string(g) + " via " + s.name() + ": " + rep.to_string());
    return true;
  });
}

PropResult prop_routed_wf_implies_wf(std::uint64_t seed, std::size_t n) {
  GenOptions opt;
  return run("wf^s(enc(G)) implies wf(G)", seed, n, opt, [&](Rng& rng, const Global& g, PropResult& r) {
    Role s = pick_router(rng, opt);
    if (!check_wf_routed(encode_global(g, s), s).ok) return false;
    auto rep = check_wf(g);
    if (!rep.ok) fail(r, to_string(g) + " via " + s.name() + ": " + rep.to_string());
    return true;
  });
}

PropResult prop_preservation_progress(std::uint64_t seed, std::size_t n) {
  GenOptions opt;
  return run("preservation and progress", seed, n, opt, [&](Rng& rng, const Global& g, PropResult& r) {
    if (!wf(g)) return false;
    Role s = pick_router(rng, opt);
    Global e = encode_global(g, s);
    std::set<std::string> seen{canonical_key(e)};
    std::deque<std::pair<Global, int>> q{{e, 0}};
    while (!q.empty() && seen.size() < 400) {
      auto [cur, d] = q.front();
      q.pop_front();
      if (!check_wf_routed(cur, s).ok) {
        fail(r, "reachable state not wf^" + s.name() + ": " + to_string(cur));
        break;
      }
      auto steps = global_steps(cur);
      if (steps.empty() && !unfold_head(cur).is_end()) {
        fail(r, "stuck state " + to_string(cur));
        break;
      }
      if (d >= 8) continue;
      for (auto& st : steps)
        if (seen.insert(canonical_key(st.next)).second) q.push_back({st.next, d + 1});
    }
    return true;
  });
}

namespace {

// Sibling projections onto a role that does not take part in the choice.
void sibling_pairs(const Global& g, const Role& r, const std::optional<Role>& router,
                   std::vector<std::pair<Local, Local>>& out) {
  switch (g.kind()) {
    case GKind::End:
    case GKind::Var: return;
    case GKind::Rec: sibling_pairs(g.body(), r, router, out); return;
    default: break;
  }
  bool outsider = r != g.from() && r != g.to() && !(g.is_routed_form() && r == g.via());
  const auto& bs = g.branches();
  if (outsider && !g.is_transit_form())
    for (std::size_t i = 0; i < bs.size(); ++i)
      for (std::size_t j = i + 1; j < bs.size(); ++j)
        out.push_back({project(bs[i].cont, r), project(bs[j].cont, r)});
  for (const auto& b : bs) sibling_pairs(b.cont, r, router, out);
}

}  // namespace

PropResult prop_local_lts_merge(std::uint64_t seed, std::size_t n) {
  GenOptions opt;
  return run("local LTS preserves merge", seed, n, opt, [&](Rng& rng, const Global& g, PropResult& r) {
    if (!wf(g)) return false;
    Role s = pick_router(rng, opt);
    Global e = encode_global(g, s);
    std::size_t pairs = 0;
    for (const Global* term : std::initializer_list<const Global*>{&g, &e})
      for (const auto& name : opt.roles) {
        Role q(name);
        if (term == &e && q == s) continue;
        std::vector<std::pair<Local, Local>> sib;
        try {
          sibling_pairs(*term, q, std::nullopt, sib);
        } catch (const MergeFailure&) {
          continue;
        }
        for (const auto& [t1, t2] : sib) {
          try {
            merge(t1, t2);
          } catch (const MergeFailure&) {
            continue;
          }
          for (const auto& a : local_steps(t1, q))
            for (const auto& b : local_steps(t2, q)) {
              if (!(a.label == b.label)) continue;
              ++pairs;
              try {
                merge(a.next, b.next);
              } catch (const MergeFailure& mf) {
                fail(r, "after " + a.label.to_string() + " from " + to_string(t1) + " and " + to_string(t2) +
                            ": " + mf.what());
              }
            }
        }
      }
    return pairs > 0;
  });
}

std::vector<PropResult> all_properties(std::uint64_t seed, std::size_t n) {
  return {
      prop_projection_encoding_commute(seed, n), prop_encoding_centroid(seed + 1, n),
      prop_encoding_participants(seed + 2, n),   prop_encoding_privacy(seed + 3, n),
      prop_encoding_substitution(seed + 4, n),   prop_projection_participation(seed + 5, n),
      prop_wf_implies_routed_wf(seed + 6, n),    prop_routed_wf_implies_wf(seed + 7, n),
      prop_preservation_progress(seed + 8, n),   prop_local_lts_merge(seed + 9, n),
  };
}

}  // namespace rt
