#include "roust/types.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace roust {

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!alpha(s.front())) return false;
  return std::all_of(s.begin(), s.end(),
                     [&](char c) { return alpha(c) || digit(c) || c == '_'; });
}

Role::Role(std::string name) : name_(std::move(name)) {
  if (!is_identifier(name_)) throw InvalidType("invalid role name '" + name_ + "'");
}

std::string MsgLabel::to_string() const {
  std::string out = name + "(";
  for (std::size_t i = 0; i < payloads.size(); ++i) {
    if (i) out += ", ";
    out += payloads[i];
  }
  return out + ")";
}

namespace {

template <class T>
void check_branches(const std::vector<Branch<T>>& bs, const char* what) {
  if (bs.empty()) throw InvalidType(std::string(what) + ": empty branch set");
  std::set<std::string> seen;
  for (const auto& b : bs) {
    if (!is_identifier(b.label.name))
      throw InvalidType(std::string(what) + ": invalid label '" + b.label.name + "'");
    if (!seen.insert(b.label.name).second)
      throw InvalidType(std::string(what) + ": duplicate label '" + b.label.name + "'");
  }
}

template <class T>
void check_chosen(const std::vector<Branch<T>>& bs, const std::string& chosen) {
  for (const auto& b : bs)
    if (b.label.name == chosen) return;
  throw InvalidType("transit label '" + chosen + "' is not a branch");
}

void check_distinct(const Role& a, const Role& b) {
  if (a.empty() || b.empty()) throw InvalidType("missing role");
  if (a == b) throw InvalidType("role '" + a.name() + "' communicates with itself");
}

void check_distinct(const Role& a, const Role& b, const Role& c) {
  check_distinct(a, b);
  check_distinct(a, c);
  check_distinct(b, c);
}

}  // namespace

// ---------------------------------------------------------------------------
// Global

struct Global::Node {
  GKind kind = GKind::End;
  std::string var;
  std::optional<Global> body;
  Role from, to, via;
  std::string chosen;
  Branches branches;
};

namespace {
const std::shared_ptr<const Global::Node>& global_end_node() {
  static const auto n = std::make_shared<const Global::Node>();
  return n;
}
}  // namespace

Global::Global() : node_(global_end_node()) {}

Global Global::end() { return Global(); }

Global Global::var(std::string name) {
  if (!is_identifier(name)) throw InvalidType("invalid recursion variable '" + name + "'");
  auto n = std::make_shared<Node>();
  n->kind = GKind::Var;
  n->var = std::move(name);
  return Global(std::move(n));
}

Global Global::rec(std::string name, Global body) {
  if (!is_identifier(name)) throw InvalidType("invalid recursion variable '" + name + "'");
  auto n = std::make_shared<Node>();
  n->kind = GKind::Rec;
  n->var = std::move(name);
  n->body = std::move(body);
  return Global(std::move(n));
}

Global Global::comm(Role from, Role to, Branches branches) {
  check_distinct(from, to);
  check_branches(branches, "communication");
  auto n = std::make_shared<Node>();
  n->kind = GKind::Comm;
  n->from = std::move(from);
  n->to = std::move(to);
  n->branches = std::move(branches);
  return Global(std::move(n));
}

Global Global::routed(Role from, Role to, Role via, Branches branches) {
  check_distinct(from, to, via);
  check_branches(branches, "routed communication");
  auto n = std::make_shared<Node>();
  n->kind = GKind::RoutedComm;
  n->from = std::move(from);
  n->to = std::move(to);
  n->via = std::move(via);
  n->branches = std::move(branches);
  return Global(std::move(n));
}

Global Global::transit(Role from, Role to, std::string chosen, Branches branches) {
  check_distinct(from, to);
  check_branches(branches, "transit communication");
  check_chosen(branches, chosen);
  auto n = std::make_shared<Node>();
  n->kind = GKind::TransitComm;
  n->from = std::move(from);
  n->to = std::move(to);
  n->chosen = std::move(chosen);
  n->branches = std::move(branches);
  return Global(std::move(n));
}

Global Global::transit_routed(Role from, Role to, Role via, std::string chosen,
                              Branches branches) {
  check_distinct(from, to, via);
  check_branches(branches, "routed transit communication");
  check_chosen(branches, chosen);
  auto n = std::make_shared<Node>();
  n->kind = GKind::TransitRouted;
  n->from = std::move(from);
  n->to = std::move(to);
  n->via = std::move(via);
  n->chosen = std::move(chosen);
  n->branches = std::move(branches);
  return Global(std::move(n));
}

GKind Global::kind() const { return node_->kind; }
const std::string& Global::var() const { return node_->var; }
const Global& Global::body() const {
  if (!node_->body) throw std::logic_error("body() on non-recursive global type");
  return *node_->body;
}
const Role& Global::from() const { return node_->from; }
const Role& Global::to() const { return node_->to; }
const Role& Global::via() const { return node_->via; }
const std::string& Global::chosen() const { return node_->chosen; }
const Global::Branches& Global::branches() const { return node_->branches; }

const Global& Global::branch(std::string_view label) const {
  for (const auto& b : node_->branches)
    if (b.label.name == label) return b.cont;
  throw std::out_of_range("no branch '" + std::string(label) + "'");
}

Global Global::with_branches(Branches branches) const {
  switch (kind()) {
    case GKind::Comm: return comm(from(), to(), std::move(branches));
    case GKind::RoutedComm: return routed(from(), to(), via(), std::move(branches));
    case GKind::TransitComm: return transit(from(), to(), chosen(), std::move(branches));
    case GKind::TransitRouted:
      return transit_routed(from(), to(), via(), chosen(), std::move(branches));
    default: throw std::logic_error("with_branches on a global type without branches");
  }
}

// ---------------------------------------------------------------------------
// Local

struct Local::Node {
  LKind kind = LKind::End;
  std::string var;
  std::optional<Local> body;
  Role peer, via, from, to;
  std::string chosen;
  Branches branches;
};

namespace {
const std::shared_ptr<const Local::Node>& local_end_node() {
  static const auto n = std::make_shared<const Local::Node>();
  return n;
}
}  // namespace

Local::Local() : node_(local_end_node()) {}

Local Local::end() { return Local(); }

Local Local::var(std::string name) {
  if (!is_identifier(name)) throw InvalidType("invalid recursion variable '" + name + "'");
  auto n = std::make_shared<Node>();
  n->kind = LKind::Var;
  n->var = std::move(name);
  return Local(std::move(n));
}

Local Local::rec(std::string name, Local body) {
  if (!is_identifier(name)) throw InvalidType("invalid recursion variable '" + name + "'");
  auto n = std::make_shared<Node>();
  n->kind = LKind::Rec;
  n->var = std::move(name);
  n->body = std::move(body);
  return Local(std::move(n));
}

namespace {
std::shared_ptr<Local::Node> peer_node(LKind k, Role peer, Local::Branches bs) {
  if (peer.empty()) throw InvalidType("missing peer role");
  check_branches(bs, "local choice");
  auto n = std::make_shared<Local::Node>();
  n->kind = k;
  n->peer = std::move(peer);
  n->branches = std::move(bs);
  return n;
}
}  // namespace

Local Local::select(Role to, Branches branches) {
  return Local(peer_node(LKind::Select, std::move(to), std::move(branches)));
}

Local Local::branch(Role from, Branches branches) {
  return Local(peer_node(LKind::Branch, std::move(from), std::move(branches)));
}

Local Local::routed_select(Role to, Role via, Branches branches) {
  check_distinct(to, via);
  auto n = peer_node(LKind::RoutedSelect, std::move(to), std::move(branches));
  n->via = std::move(via);
  return Local(std::move(n));
}

Local Local::routed_branch(Role from, Role via, Branches branches) {
  check_distinct(from, via);
  auto n = peer_node(LKind::RoutedBranch, std::move(from), std::move(branches));
  n->via = std::move(via);
  return Local(std::move(n));
}

Local Local::router(Role from, Role to, Branches branches) {
  check_distinct(from, to);
  check_branches(branches, "router");
  auto n = std::make_shared<Node>();
  n->kind = LKind::Router;
  n->from = std::move(from);
  n->to = std::move(to);
  n->branches = std::move(branches);
  return Local(std::move(n));
}

Local Local::router_transit(Role from, Role to, std::string chosen, Branches branches) {
  check_distinct(from, to);
  check_branches(branches, "router transit");
  check_chosen(branches, chosen);
  auto n = std::make_shared<Node>();
  n->kind = LKind::RouterTransit;
  n->from = std::move(from);
  n->to = std::move(to);
  n->chosen = std::move(chosen);
  n->branches = std::move(branches);
  return Local(std::move(n));
}

LKind Local::kind() const { return node_->kind; }
const std::string& Local::var() const { return node_->var; }
const Local& Local::body() const {
  if (!node_->body) throw std::logic_error("body() on non-recursive local type");
  return *node_->body;
}
const Role& Local::peer() const { return node_->peer; }
const Role& Local::via() const { return node_->via; }
const Role& Local::from() const { return node_->from; }
const Role& Local::to() const { return node_->to; }
const std::string& Local::chosen() const { return node_->chosen; }
const Local::Branches& Local::branches() const { return node_->branches; }

const Local& Local::cont(std::string_view label) const {
  for (const auto& b : node_->branches)
    if (b.label.name == label) return b.cont;
  throw std::out_of_range("no branch '" + std::string(label) + "'");
}

Local Local::with_branches(Branches branches) const {
  switch (kind()) {
    case LKind::Select: return select(peer(), std::move(branches));
    case LKind::Branch: return branch(peer(), std::move(branches));
    case LKind::RoutedSelect: return routed_select(peer(), via(), std::move(branches));
    case LKind::RoutedBranch: return routed_branch(peer(), via(), std::move(branches));
    case LKind::Router: return router(from(), to(), std::move(branches));
    case LKind::RouterTransit: return router_transit(from(), to(), chosen(), std::move(branches));
    default: throw std::logic_error("with_branches on a local type without branches");
  }
}

// ---------------------------------------------------------------------------
// Action labels

ActionLabel ActionLabel::send(Role from, Role to, MsgLabel msg) {
  check_distinct(from, to);
  return {ActionKind::DirectSend, std::move(from), std::move(to), std::nullopt, std::move(msg)};
}

ActionLabel ActionLabel::recv(Role from, Role to, MsgLabel msg) {
  check_distinct(from, to);
  return {ActionKind::DirectRecv, std::move(from), std::move(to), std::nullopt, std::move(msg)};
}

ActionLabel ActionLabel::routed_send(Role via, Role from, Role to, MsgLabel msg) {
  check_distinct(from, to, via);
  return {ActionKind::RoutedSend, std::move(from), std::move(to), std::move(via), std::move(msg)};
}

ActionLabel ActionLabel::routed_recv(Role via, Role from, Role to, MsgLabel msg) {
  check_distinct(from, to, via);
  return {ActionKind::RoutedRecv, std::move(from), std::move(to), std::move(via), std::move(msg)};
}

std::string ActionLabel::to_string() const {
  std::string core = from.name() + "->" + to.name() + (is_send() ? "!" : "?") + msg.name;
  if (via) return via->name() + ".(" + core + ")";
  return core;
}

bool operator==(const ActionLabel& a, const ActionLabel& b) {
  return a.kind == b.kind && a.from == b.from && a.to == b.to && a.via == b.via &&
         a.msg.name == b.msg.name;
}

std::strong_ordering operator<=>(const ActionLabel& a, const ActionLabel& b) {
  if (auto c = a.kind <=> b.kind; c != 0) return c;
  if (auto c = a.from <=> b.from; c != 0) return c;
  if (auto c = a.to <=> b.to; c != 0) return c;
  if (auto c = a.via <=> b.via; c != 0) return c;
  return a.msg.name <=> b.msg.name;
}

std::string to_string(ActionKind k) {
  switch (k) {
    case ActionKind::DirectSend: return "send";
    case ActionKind::DirectRecv: return "recv";
    case ActionKind::RoutedSend: return "routed-send";
    case ActionKind::RoutedRecv: return "routed-recv";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Validation

namespace {

bool global_guarded(const Global& g) {
  const Global* cur = &g;
  while (cur->kind() == GKind::Rec) cur = &cur->body();
  return cur->kind() != GKind::Var;
}

bool local_guarded(const Local& t) {
  const Local* cur = &t;
  while (cur->kind() == LKind::Rec) cur = &cur->body();
  return cur->kind() != LKind::Var;
}

void validate_global(const Global& g, std::vector<std::string>& bound, bool allow_free) {
  switch (g.kind()) {
    case GKind::End: return;
    case GKind::Var:
      if (!allow_free && std::find(bound.begin(), bound.end(), g.var()) == bound.end())
        throw InvalidType("unbound recursion variable '" + g.var() + "'");
      return;
    case GKind::Rec:
      if (!global_guarded(g.body()))
        throw InvalidType("non-contractive recursion on '" + g.var() + "'");
      bound.push_back(g.var());
      validate_global(g.body(), bound, allow_free);
      bound.pop_back();
      return;
    default:
      for (const auto& b : g.branches()) validate_global(b.cont, bound, allow_free);
  }
}

void validate_local(const Local& t, std::vector<std::string>& bound, bool allow_free) {
  switch (t.kind()) {
    case LKind::End: return;
    case LKind::Var:
      if (!allow_free && std::find(bound.begin(), bound.end(), t.var()) == bound.end())
        throw InvalidType("unbound recursion variable '" + t.var() + "'");
      return;
    case LKind::Rec:
      if (!local_guarded(t.body()))
        throw InvalidType("non-contractive recursion on '" + t.var() + "'");
      bound.push_back(t.var());
      validate_local(t.body(), bound, allow_free);
      bound.pop_back();
      return;
    default:
      for (const auto& b : t.branches()) validate_local(b.cont, bound, allow_free);
  }
}

}  // namespace

void validate(const Global& g) {
  std::vector<std::string> bound;
  validate_global(g, bound, false);
}
void validate(const Local& t) {
  std::vector<std::string> bound;
  validate_local(t, bound, false);
}
void validate_open(const Global& g) {
  std::vector<std::string> bound;
  validate_global(g, bound, true);
}
void validate_open(const Local& t) {
  std::vector<std::string> bound;
  validate_local(t, bound, true);
}

// ---------------------------------------------------------------------------
// Canonical keys

namespace {

std::string var_key(const std::vector<std::string>& bound, const std::string& v) {
  for (std::size_t i = bound.size(); i-- > 0;)
    if (bound[i] == v) return "#" + std::to_string(bound.size() - 1 - i);
  return "$" + v;
}

template <class T, class F>
void key_branches(const std::vector<Branch<T>>& bs, std::vector<std::string>& bound,
                  std::string& out, F&& rec) {
  std::vector<const Branch<T>*> sorted;
  for (const auto& b : bs) sorted.push_back(&b);
  std::sort(sorted.begin(), sorted.end(),
            [](auto* a, auto* b) { return a->label.name < b->label.name; });
  out += '{';
  for (auto* b : sorted) {
    out += b->label.name;
    out += ':';
    rec(b->cont, bound, out);
    out += ';';
  }
  out += '}';
}

void gkey(const Global& g, std::vector<std::string>& bound, std::string& out) {
  switch (g.kind()) {
    case GKind::End: out += 'E'; return;
    case GKind::Var: out += var_key(bound, g.var()); return;
    case GKind::Rec:
      out += "R(";
      bound.push_back(g.var());
      gkey(g.body(), bound, out);
      bound.pop_back();
      out += ')';
      return;
    case GKind::Comm: out += "C(" + g.from().name() + "," + g.to().name() + ")"; break;
    case GKind::RoutedComm:
      out += "X(" + g.from().name() + "," + g.to().name() + "," + g.via().name() + ")";
      break;
    case GKind::TransitComm:
      out += "T(" + g.from().name() + "," + g.to().name() + "," + g.chosen() + ")";
      break;
    case GKind::TransitRouted:
      out += "Y(" + g.from().name() + "," + g.to().name() + "," + g.via().name() + "," +
             g.chosen() + ")";
      break;
  }
  key_branches(g.branches(), bound, out, gkey);
}

void lkey(const Local& t, std::vector<std::string>& bound, std::string& out) {
  switch (t.kind()) {
    case LKind::End: out += 'E'; return;
    case LKind::Var: out += var_key(bound, t.var()); return;
    case LKind::Rec:
      out += "R(";
      bound.push_back(t.var());
      lkey(t.body(), bound, out);
      bound.pop_back();
      out += ')';
      return;
    case LKind::Select: out += "!(" + t.peer().name() + ")"; break;
    case LKind::Branch: out += "?(" + t.peer().name() + ")"; break;
    case LKind::RoutedSelect: out += "!<(" + t.peer().name() + "," + t.via().name() + ")"; break;
    case LKind::RoutedBranch: out += "?<(" + t.peer().name() + "," + t.via().name() + ")"; break;
    case LKind::Router: out += "F(" + t.from().name() + "," + t.to().name() + ")"; break;
    case LKind::RouterTransit:
      out += "G(" + t.from().name() + "," + t.to().name() + "," + t.chosen() + ")";
      break;
  }
  key_branches(t.branches(), bound, out, lkey);
}

}  // namespace

std::string canonical_key(const Global& g) {
  std::string out;
  std::vector<std::string> bound;
  gkey(g, bound, out);
  return out;
}

std::string canonical_key(const Local& t) {
  std::string out;
  std::vector<std::string> bound;
  lkey(t, bound, out);
  return out;
}

bool equivalent(const Global& a, const Global& b) { return canonical_key(a) == canonical_key(b); }
bool equivalent(const Local& a, const Local& b) { return canonical_key(a) == canonical_key(b); }

// ---------------------------------------------------------------------------
// Canonicalize

namespace {

template <class T>
std::vector<Branch<T>> sorted_branches(std::vector<Branch<T>> bs) {
  std::sort(bs.begin(), bs.end(),
            [](const auto& a, const auto& b) { return a.label.name < b.label.name; });
  return bs;
}

std::string level_name(std::size_t level) { return "t" + std::to_string(level); }

Global canon_global(const Global& g, std::map<std::string, std::vector<std::string>>& env,
                    std::size_t level) {
  switch (g.kind()) {
    case GKind::End: return g;
    case GKind::Var: return Global::var(env.at(g.var()).back());
    case GKind::Rec: {
      env[g.var()].push_back(level_name(level));
      Global body = canon_global(g.body(), env, level + 1);
      env[g.var()].pop_back();
      return Global::rec(level_name(level), std::move(body));
    }
    default: {
      Global::Branches bs;
      for (const auto& b : g.branches()) bs.push_back({b.label, canon_global(b.cont, env, level)});
      return g.with_branches(sorted_branches(std::move(bs)));
    }
  }
}

Local canon_local(const Local& t, std::map<std::string, std::vector<std::string>>& env,
                  std::size_t level) {
  switch (t.kind()) {
    case LKind::End: return t;
    case LKind::Var: return Local::var(env.at(t.var()).back());
    case LKind::Rec: {
      env[t.var()].push_back(level_name(level));
      Local body = canon_local(t.body(), env, level + 1);
      env[t.var()].pop_back();
      return Local::rec(level_name(level), std::move(body));
    }
    default: {
      Local::Branches bs;
      for (const auto& b : t.branches()) bs.push_back({b.label, canon_local(b.cont, env, level)});
      return t.with_branches(sorted_branches(std::move(bs)));
    }
  }
}

}  // namespace

Global canonicalize(const Global& g) {
  validate(g);
  std::map<std::string, std::vector<std::string>> env;
  return canon_global(g, env, 0);
}

Local canonicalize(const Local& t) {
  validate(t);
  std::map<std::string, std::vector<std::string>> env;
  return canon_local(t, env, 0);
}

// ---------------------------------------------------------------------------
// Substitution and unfolding

Global substitute(const Global& g, const std::string& var, const Global& replacement) {
  switch (g.kind()) {
    case GKind::End: return g;
    case GKind::Var: return g.var() == var ? replacement : g;
    case GKind::Rec:
      if (g.var() == var) return g;  // shadowed
      return Global::rec(g.var(), substitute(g.body(), var, replacement));
    default: {
      Global::Branches bs;
      bs.reserve(g.branches().size());
      for (const auto& b : g.branches())
        bs.push_back({b.label, substitute(b.cont, var, replacement)});
      return g.with_branches(std::move(bs));
    }
  }
}

Local substitute(const Local& t, const std::string& var, const Local& replacement) {
  switch (t.kind()) {
    case LKind::End: return t;
    case LKind::Var: return t.var() == var ? replacement : t;
    case LKind::Rec:
      if (t.var() == var) return t;
      return Local::rec(t.var(), substitute(t.body(), var, replacement));
    default: {
      Local::Branches bs;
      bs.reserve(t.branches().size());
      for (const auto& b : t.branches())
        bs.push_back({b.label, substitute(b.cont, var, replacement)});
      return t.with_branches(std::move(bs));
    }
  }
}

Global unfold_once(const Global& g) {
  if (g.kind() != GKind::Rec) throw NotRecursive("unfold_once: not a recursive type: " + to_string(g));
  return substitute(g.body(), g.var(), g);
}

Local unfold_once(const Local& t) {
  if (t.kind() != LKind::Rec) throw NotRecursive("unfold_once: not a recursive type: " + to_string(t));
  return substitute(t.body(), t.var(), t);
}

Global unfold_head(const Global& g) {
  Global cur = g;
  while (cur.kind() == GKind::Rec) {
    if (!global_guarded(cur.body()))
      throw InvalidType("non-contractive recursion on '" + cur.var() + "'");
    cur = unfold_once(cur);
  }
  return cur;
}

Local unfold_head(const Local& t) {
  Local cur = t;
  while (cur.kind() == LKind::Rec) {
    if (!local_guarded(cur.body()))
      throw InvalidType("non-contractive recursion on '" + cur.var() + "'");
    cur = unfold_once(cur);
  }
  return cur;
}

// ---------------------------------------------------------------------------
// Participants and grammar queries

namespace {
void collect_participants(const Global& g, std::set<Role>& out) {
  switch (g.kind()) {
    case GKind::End:
    case GKind::Var: return;
    case GKind::Rec: collect_participants(g.body(), out); return;
    case GKind::RoutedComm:
    case GKind::TransitRouted: out.insert(g.via()); [[fallthrough]];
    default:
      out.insert(g.from());
      out.insert(g.to());
      for (const auto& b : g.branches()) collect_participants(b.cont, out);
  }
}

void collect_free(const Global& g, std::vector<std::string>& bound, std::set<std::string>& out) {
  switch (g.kind()) {
    case GKind::End: return;
    case GKind::Var:
      if (std::find(bound.begin(), bound.end(), g.var()) == bound.end()) out.insert(g.var());
      return;
    case GKind::Rec:
      bound.push_back(g.var());
      collect_free(g.body(), bound, out);
      bound.pop_back();
      return;
    default:
      for (const auto& b : g.branches()) collect_free(b.cont, bound, out);
  }
}
}  // namespace

std::set<Role> participants(const Global& g) {
  std::set<Role> out;
  collect_participants(g, out);
  return out;
}

std::set<std::string> free_vars(const Global& g) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  collect_free(g, bound, out);
  return out;
}

bool is_canonical(const Global& g) {
  switch (g.kind()) {
    case GKind::End:
    case GKind::Var: return true;
    case GKind::Rec: return is_canonical(g.body());
    case GKind::Comm:
      return std::all_of(g.branches().begin(), g.branches().end(),
                         [](const auto& b) { return is_canonical(b.cont); });
    default: return false;
  }
}

bool is_canonical(const Local& t) {
  switch (t.kind()) {
    case LKind::End:
    case LKind::Var: return true;
    case LKind::Rec: return is_canonical(t.body());
    case LKind::Select:
    case LKind::Branch:
      return std::all_of(t.branches().begin(), t.branches().end(),
                         [](const auto& b) { return is_canonical(b.cont); });
    default: return false;
  }
}

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string label_text(const MsgLabel& l) {
  return l.payloads.empty() ? l.name : l.to_string();
}

template <class T, class F>
std::string branches_text(const std::vector<Branch<T>>& bs, bool allow_single, F&& print) {
  if (allow_single && bs.size() == 1)
    return ": " + label_text(bs.front().label) + " . " + print(bs.front().cont);
  std::string out = " { ";
  for (std::size_t i = 0; i < bs.size(); ++i) {
    if (i) out += "; ";
    out += label_text(bs[i].label) + ": " + print(bs[i].cont);
  }
  return out + " }";
}

}  // namespace

std::string to_string(const Global& g) {
  auto rec = [](const Global& x) { return to_string(x); };
  switch (g.kind()) {
    case GKind::End: return "end";
    case GKind::Var: return g.var();
    case GKind::Rec: return "rec " + g.var() + " . " + to_string(g.body());
    case GKind::Comm:
      return g.from().name() + " -> " + g.to().name() + branches_text(g.branches(), true, rec);
    case GKind::RoutedComm:
      return g.from().name() + " -> " + g.to().name() + " via " + g.via().name() +
             branches_text(g.branches(), true, rec);
    case GKind::TransitComm:
      return g.from().name() + " ~> " + g.to().name() + " <" + g.chosen() + ">" +
             branches_text(g.branches(), false, rec);
    case GKind::TransitRouted:
      return g.from().name() + " ~> " + g.to().name() + " via " + g.via().name() + " <" +
             g.chosen() + ">" + branches_text(g.branches(), false, rec);
  }
  return "?";
}

std::string to_string(const Local& t) {
  auto rec = [](const Local& x) { return to_string(x); };
  switch (t.kind()) {
    case LKind::End: return "end";
    case LKind::Var: return t.var();
    case LKind::Rec: return "rec " + t.var() + " . " + to_string(t.body());
    case LKind::Select: return t.peer().name() + "!" + branches_text(t.branches(), true, rec);
    case LKind::Branch: return t.peer().name() + "?" + branches_text(t.branches(), true, rec);
    case LKind::RoutedSelect:
      return t.peer().name() + "!<" + t.via().name() + ">" + branches_text(t.branches(), true, rec);
    case LKind::RoutedBranch:
      return t.peer().name() + "?<" + t.via().name() + ">" + branches_text(t.branches(), true, rec);
    case LKind::Router:
      return "route " + t.from().name() + " -> " + t.to().name() +
             branches_text(t.branches(), true, rec);
    case LKind::RouterTransit:
      return "route " + t.from().name() + " ~> " + t.to().name() + " <" + t.chosen() + ">" +
             branches_text(t.branches(), false, rec);
  }
  return "?";
}

}  // namespace roust
