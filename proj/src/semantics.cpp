#include "roust/semantics.hpp"

#include <algorithm>
#include <cstdint>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "roust/projection.hpp"

namespace roust {

namespace {

constexpr std::size_t kMaxProduct = 4096;
constexpr int kMaxNesting = 4096;

using Blocked = std::set<Role>;

std::string blocked_key(const Blocked& b) {
  std::string out;
  for (const auto& r : b) out += r.name() + ",";
  return out;
}

// Shared bookkeeping for one step computation. Re-entering the same recursive
// type under the same blocked subjects cannot contribute a new finite
// derivation, so such visits yield nothing.
struct Ctx {
  RuleSet rules;
  std::unordered_set<std::string> active;
  std::unordered_map<const void*, std::string> keys;
  std::size_t universe = SIZE_MAX;  // roles of the root term, once every one is blocked nothing moves
  int nesting = 0;

  template <class T>
  const std::string& key_of(const T& t) {
    auto it = keys.find(t.identity());
    if (it != keys.end()) return it->second;
    return keys.emplace(t.identity(), canonical_key(t)).first->second;
  }
};

struct NestingGuard {
  Ctx& ctx;
  explicit NestingGuard(Ctx& c) : ctx(c) {
    if (++ctx.nesting > kMaxNesting) throw ExplorationLimit("step derivation nested too deeply");
  }
  ~NestingGuard() { --ctx.nesting; }
};

template <class T>
void add_step(std::vector<Step<T>>& out, ActionLabel l, T next) {
  out.push_back({std::move(l), std::move(next)});
}

template <class T>
std::vector<Step<T>> normalize(std::vector<Step<T>> steps) {
  std::vector<std::pair<std::string, Step<T>>> keyed;
  keyed.reserve(steps.size());
  for (auto& s : steps) keyed.emplace_back(canonical_key(s.next), std::move(s));
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    if (auto c = a.second.label <=> b.second.label; c != 0) return c < 0;
    return a.first < b.first;
  });
  std::vector<Step<T>> out;
  for (std::size_t i = 0; i < keyed.size(); ++i) {
    if (i > 0 && keyed[i].second.label == keyed[i - 1].second.label &&
        keyed[i].first == keyed[i - 1].first)
      continue;
    out.push_back(std::move(keyed[i].second));
  }
  return out;
}

// Steps shared by every branch (rules Gr4, Gr8, Lr8, Lr10, Lr11). `per_branch`
// computes the candidate steps of one continuation; `accept` filters labels.
template <class T, class F, class A>
void all_branches_step(const T& node, F&& per_branch, A&& accept, std::vector<Step<T>>& out) {
  const auto& bs = node.branches();
  std::vector<std::map<ActionLabel, std::vector<T>>> grouped;
  grouped.reserve(bs.size());
  for (const auto& b : bs) {
    std::map<ActionLabel, std::vector<T>> g;
    std::set<std::pair<ActionLabel, std::string>> seen;
    for (auto& s : per_branch(b.cont))
      if (accept(s.label) && seen.emplace(s.label, canonical_key(s.next)).second)
        g[s.label].push_back(std::move(s.next));
    if (g.empty()) return;
    grouped.push_back(std::move(g));
  }
  for (const auto& [label, _] : grouped.front()) {
    bool everywhere = std::all_of(grouped.begin(), grouped.end(),
                                  [&](const auto& g) { return g.count(label) > 0; });
    if (!everywhere) continue;
    std::vector<std::vector<T>> combos{{}};
    for (const auto& g : grouped) {
      const auto& succs = g.at(label);
      std::vector<std::vector<T>> next;
      for (const auto& c : combos)
        for (const auto& s : succs) {
          if (next.size() >= kMaxProduct) break;
          auto cc = c;
          cc.push_back(s);
          next.push_back(std::move(cc));
        }
      combos = std::move(next);
    }
    for (const auto& c : combos) {
      typename T::Branches nb;
      nb.reserve(bs.size());
      for (std::size_t i = 0; i < bs.size(); ++i) nb.push_back({bs[i].label, c[i]});
      // Label carries the message as emitted by the first branch.
      add_step(out, grouped.front().find(label)->first, node.with_branches(std::move(nb)));
    }
  }
}

// Steps of the chosen continuation only (rules Gr5, Gr9, Lr9).
template <class T, class F>
void chosen_branch_steps(const T& node, F&& per_branch, std::vector<Step<T>>& out) {
  const auto& bs = node.branches();
  std::size_t j = 0;
  while (bs[j].label.name != node.chosen()) ++j;
  for (auto& s : per_branch(bs[j].cont)) {
    auto nb = bs;
    nb[j].cont = std::move(s.next);
    add_step(out, std::move(s.label), node.with_branches(std::move(nb)));
  }
}

template <class T>
MsgLabel chosen_label(const T& node) {
  for (const auto& b : node.branches())
    if (b.label.name == node.chosen()) return b.label;
  return MsgLabel(node.chosen());
}

Blocked plus(const Blocked& b, std::initializer_list<Role> extra) {
  Blocked out = b;
  out.insert(extra.begin(), extra.end());
  return out;
}

// ---------------------------------------------------------------------------
// Global

std::vector<Step<Global>> gsteps(const Global& g, const Blocked& blocked, Ctx& ctx) {
  NestingGuard guard(ctx);
  std::vector<Step<Global>> out;
  const auto& R = ctx.rules;
  auto free = [&](const Role& r) { return !blocked.count(r); };
  if (blocked.size() >= ctx.universe) return out;
  switch (g.kind()) {
    case GKind::End:
    case GKind::Var: return out;
    case GKind::Rec: {
      if (!R.enabled(Rule::Gr3)) return out;
      std::string k = ctx.key_of(g) + "|" + blocked_key(blocked);
      if (!ctx.active.insert(k).second) return out;
      out = gsteps(unfold_once(g), blocked, ctx);
      ctx.active.erase(k);
      return out;
    }
    case GKind::Comm: {
      const Role &p = g.from(), &q = g.to();
      if (R.enabled(Rule::Gr1) && free(p))
        for (const auto& b : g.branches())
          add_step(out, ActionLabel::send(p, q, b.label),
                   Global::transit(p, q, b.label.name, g.branches()));
      if (R.enabled(Rule::Gr4)) {
        Blocked inner = plus(blocked, {p, q});
        all_branches_step(
            g, [&](const Global& c) { return gsteps(c, inner, ctx); },
            [](const ActionLabel&) { return true; }, out);
      }
      return out;
    }
    case GKind::TransitComm: {
      const Role &p = g.from(), &q = g.to();
      if (R.enabled(Rule::Gr2) && free(q))
        add_step(out, ActionLabel::recv(p, q, chosen_label(g)), g.branch(g.chosen()));
      if (R.enabled(Rule::Gr5)) {
        Blocked inner = plus(blocked, {q});
        chosen_branch_steps(g, [&](const Global& c) { return gsteps(c, inner, ctx); }, out);
      }
      return out;
    }
    case GKind::RoutedComm: {
      const Role &p = g.from(), &q = g.to(), &s = g.via();
      if (R.enabled(Rule::Gr6) && free(p))
        for (const auto& b : g.branches())
          add_step(out, ActionLabel::routed_send(s, p, q, b.label),
                   Global::transit_routed(p, q, s, b.label.name, g.branches()));
      if (R.enabled(Rule::Gr8)) {
        Blocked inner = plus(blocked, {p, q});
        all_branches_step(
            g, [&](const Global& c) { return gsteps(c, inner, ctx); },
            [](const ActionLabel&) { return true; }, out);
      }
      return out;
    }
    case GKind::TransitRouted: {
      const Role &p = g.from(), &q = g.to(), &s = g.via();
      if (R.enabled(Rule::Gr7) && free(q))
        add_step(out, ActionLabel::routed_recv(s, p, q, chosen_label(g)), g.branch(g.chosen()));
      if (R.enabled(Rule::Gr9)) {
        Blocked inner = plus(blocked, {q});
        chosen_branch_steps(g, [&](const Global& c) { return gsteps(c, inner, ctx); }, out);
      }
      return out;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Local

std::vector<Step<Local>> lsteps(const Local& t, const Role& self, const Blocked& blocked,
                                Ctx& ctx) {
  NestingGuard guard(ctx);
  std::vector<Step<Local>> out;
  const auto& R = ctx.rules;
  auto free = [&](const Role& r) { return !blocked.count(r); };
  auto recurse = [&](const Blocked& inner) {
    return [&ctx, &self, inner](const Local& c) { return lsteps(c, self, inner, ctx); };
  };
  auto routed_by_self = [&](const Role& peer) {
    return [&self, peer](const ActionLabel& l) {
      return l.routed() && *l.via == self && l.subject() != peer;
    };
  };
  switch (t.kind()) {
    case LKind::End:
    case LKind::Var: return out;
    case LKind::Rec: {
      if (!R.enabled(Rule::Lr3)) return out;
      std::string k = ctx.key_of(t) + "|" + blocked_key(blocked);
      if (!ctx.active.insert(k).second) return out;
      out = lsteps(unfold_once(t), self, blocked, ctx);
      ctx.active.erase(k);
      return out;
    }
    case LKind::Select:
      if (R.enabled(Rule::Lr1) && free(self))
        for (const auto& b : t.branches())
          add_step(out, ActionLabel::send(self, t.peer(), b.label), b.cont);
      if (R.enabled(Rule::Lr10))
        all_branches_step(t, recurse(plus(blocked, {t.peer()})), routed_by_self(t.peer()), out);
      return out;
    case LKind::Branch:
      if (R.enabled(Rule::Lr2) && free(self))
        for (const auto& b : t.branches())
          add_step(out, ActionLabel::recv(t.peer(), self, b.label), b.cont);
      if (R.enabled(Rule::Lr11))
        all_branches_step(t, recurse(plus(blocked, {t.peer()})), routed_by_self(t.peer()), out);
      return out;
    case LKind::RoutedSelect:
      if (R.enabled(Rule::Lr4) && free(self))
        for (const auto& b : t.branches())
          add_step(out, ActionLabel::routed_send(t.via(), self, t.peer(), b.label), b.cont);
      return out;
    case LKind::RoutedBranch:
      if (R.enabled(Rule::Lr5) && free(self))
        for (const auto& b : t.branches())
          add_step(out, ActionLabel::routed_recv(t.via(), t.peer(), self, b.label), b.cont);
      return out;
    case LKind::Router: {
      const Role &p = t.from(), &q = t.to();
      if (R.enabled(Rule::Lr6) && free(p))
        for (const auto& b : t.branches())
          add_step(out, ActionLabel::routed_send(self, p, q, b.label),
                   Local::router_transit(p, q, b.label.name, t.branches()));
      if (R.enabled(Rule::Lr8))
        all_branches_step(t, recurse(plus(blocked, {p, q})),
                          [](const ActionLabel&) { return true; }, out);
      return out;
    }
    case LKind::RouterTransit: {
      const Role &p = t.from(), &q = t.to();
      if (R.enabled(Rule::Lr7) && free(q))
        add_step(out, ActionLabel::routed_recv(self, p, q, chosen_label(t)), t.cont(t.chosen()));
      if (R.enabled(Rule::Lr9)) chosen_branch_steps(t, recurse(plus(blocked, {q})), out);
      return out;
    }
  }
  return out;
}

}  // namespace

std::vector<Step<Global>> global_steps(const Global& g, const RuleSet& rules) {
  Ctx ctx;
  ctx.rules = rules;
  ctx.universe = participants(g).size();
  return normalize(gsteps(g, {}, ctx));
}

std::vector<Step<Local>> local_steps(const Local& t, const Role& self, const RuleSet& rules) {
  Ctx ctx;
  ctx.rules = rules;
  return normalize(lsteps(t, self, {}, ctx));
}

// ---------------------------------------------------------------------------
// Configurations

Configuration Configuration::initial(std::map<Role, Local> locals) {
  Configuration c;
  c.locals = std::move(locals);
  for (const auto& [p, _] : c.locals)
    for (const auto& [q, __] : c.locals)
      if (p != q) c.buffers[{p, q}];
  return c;
}

std::string Configuration::key() const {
  std::string out;
  for (const auto& [r, t] : locals) out += r.name() + "=" + canonical_key(t) + ";";
  out += "|";
  for (const auto& [ch, w] : buffers) {
    if (w.empty()) continue;
    out += ch.first.name() + ">" + ch.second.name() + ":";
    for (const auto& m : w) out += m.name + ",";
    out += ";";
  }
  return out;
}

std::string Configuration::to_string() const {
  std::ostringstream os;
  for (const auto& [r, t] : locals) os << r.name() << ": " << roust::to_string(t) << "\n";
  for (const auto& [ch, w] : buffers) {
    if (w.empty()) continue;
    os << "w[" << ch.first.name() << "," << ch.second.name() << "] =";
    for (const auto& m : w) os << " " << m.name;
    os << "\n";
  }
  return os.str();
}

std::vector<Step<Configuration>> config_steps(const Configuration& c, const RuleSet& rules) {
  std::vector<Step<Configuration>> out;
  std::map<Role, std::vector<Step<Local>>> cache;
  auto steps_of = [&](const Role& r) -> const std::vector<Step<Local>>& {
    auto it = cache.find(r);
    if (it == cache.end()) it = cache.emplace(r, local_steps(c.locals.at(r), r, rules)).first;
    return it->second;
  };
  for (const auto& [r, _] : c.locals) {
    for (const auto& st : steps_of(r)) {
      const ActionLabel& l = st.label;
      if (l.subject() != r) continue;
      Channel ch{l.from, l.to};
      auto bit = c.buffers.find(ch);
      if (bit == c.buffers.end()) continue;
      if (!l.is_send() && (bit->second.empty() || bit->second.front().name != l.msg.name))
        continue;
      auto apply = [&](Configuration& n) {
        n.locals[r] = st.next;
        auto& w = n.buffers[ch];
        if (l.is_send())
          w.push_back(l.msg);
        else
          w.pop_front();
      };
      if (!l.routed()) {
        Configuration n = c;
        apply(n);
        out.push_back({l, std::move(n)});
        continue;
      }
      const Role& s = *l.via;
      if (!c.locals.count(s)) continue;
      for (const auto& rs : steps_of(s)) {
        if (!(rs.label == l)) continue;
        Configuration n = c;
        apply(n);
        n.locals[s] = rs.next;
        out.push_back({l, std::move(n)});
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (auto cmp = a.label <=> b.label; cmp != 0) return cmp < 0;
    return a.next.key() < b.next.key();
  });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const auto& a, const auto& b) {
                          return a.label == b.label && a.next.key() == b.next.key();
                        }),
            out.end());
  return out;
}

namespace {

void buffer_contents(const Global& g, std::map<Channel, std::deque<MsgLabel>>& buffers) {
  switch (g.kind()) {
    case GKind::End:
    case GKind::Var: return;
    case GKind::Rec: buffer_contents(g.body(), buffers); return;
    case GKind::Comm:
    case GKind::RoutedComm: buffer_contents(g.branches().front().cont, buffers); return;
    case GKind::TransitComm:
    case GKind::TransitRouted:
      for (const auto& b : g.branches())
        if (b.label.name == g.chosen()) buffers[{g.from(), g.to()}].push_back(b.label);
      buffer_contents(g.branch(g.chosen()), buffers);
      return;
  }
}

}  // namespace

Configuration project_configuration(const Global& g) {
  std::map<Role, Local> locals;
  for (const auto& r : participants(g)) locals[r] = project(g, r);
  Configuration c = Configuration::initial(std::move(locals));
  buffer_contents(g, c.buffers);
  return c;
}

// ---------------------------------------------------------------------------
// Subtyping

namespace {

struct SubCtx {
  std::set<std::pair<std::string, std::string>> assumed;
  bool exhausted = false;
};

bool same_header(const Local& a, const Local& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case LKind::Select:
    case LKind::Branch: return a.peer() == b.peer();
    case LKind::RoutedSelect:
    case LKind::RoutedBranch: return a.peer() == b.peer() && a.via() == b.via();
    case LKind::Router: return a.from() == b.from() && a.to() == b.to();
    case LKind::RouterTransit:
      return a.from() == b.from() && a.to() == b.to() && a.chosen() == b.chosen();
    default: return true;
  }
}

bool sub(const Local& a, const Local& b, int fuel, SubCtx& ctx) {
  auto pair = std::make_pair(canonical_key(a), canonical_key(b));
  if (pair.first == pair.second || ctx.assumed.count(pair)) return true;
  if (a.kind() == LKind::Rec || b.kind() == LKind::Rec) {
    if (fuel <= 0) {
      ctx.exhausted = true;
      return false;
    }
    ctx.assumed.insert(pair);
    Local ua = a.kind() == LKind::Rec ? unfold_once(a) : a;
    Local ub = b.kind() == LKind::Rec ? unfold_once(b) : b;
    return sub(ua, ub, fuel - 1, ctx);
  }
  if (!same_header(a, b)) return false;
  switch (a.kind()) {
    case LKind::End: return true;
    case LKind::Var: return a.var() == b.var();
    case LKind::Branch:
    case LKind::RoutedBranch:
      for (const auto& bb : b.branches()) {
        auto it = std::find_if(a.branches().begin(), a.branches().end(),
                               [&](const auto& x) { return x.label.name == bb.label.name; });
        if (it == a.branches().end() || !sub(it->cont, bb.cont, fuel, ctx)) return false;
      }
      return true;
    default:
      if (a.branches().size() != b.branches().size()) return false;
      for (const auto& bb : b.branches()) {
        auto it = std::find_if(a.branches().begin(), a.branches().end(),
                               [&](const auto& x) { return x.label.name == bb.label.name; });
        if (it == a.branches().end() || !sub(it->cont, bb.cont, fuel, ctx)) return false;
      }
      return true;
  }
}

}  // namespace

bool subtype_local(const Local& a, const Local& b, int fuel, bool* fuel_exhausted) {
  SubCtx ctx;
  bool r = sub(a, b, fuel, ctx);
  if (fuel_exhausted) *fuel_exhausted = ctx.exhausted;
  return r;
}

bool subtype_config(const Configuration& a, const Configuration& b, int fuel) {
  if (a.locals.size() != b.locals.size()) return false;
  for (const auto& [ch, w] : a.buffers) {
    auto it = b.buffers.find(ch);
    std::size_t n = it == b.buffers.end() ? 0 : it->second.size();
    if (w.size() != n) return false;
    for (std::size_t i = 0; i < n; ++i)
      if (w[i].name != it->second[i].name) return false;
  }
  for (const auto& [ch, w] : b.buffers)
    if (!a.buffers.count(ch) && !w.empty()) return false;
  for (const auto& [r, t] : a.locals) {
    auto it = b.locals.find(r);
    if (it == b.locals.end() || !subtype_local(t, it->second, fuel)) return false;
  }
  return true;
}

}  // namespace roust
