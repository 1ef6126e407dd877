#include "roust/efsm.hpp"

#include <deque>
#include <map>
#include <sstream>

#include <json.hpp>

namespace roust {

std::string to_string(StateKind k) {
  switch (k) {
    case StateKind::Send: return "send";
    case StateKind::Receive: return "receive";
    case StateKind::Terminal: return "terminal";
  }
  return "?";
}

std::string EfsmTransition::text() const {
  std::string out = peer.name() + (send ? "!" : "?") + label.name;
  if (via) out += " (via " + via->name() + ")";
  return out;
}

std::vector<const EfsmTransition*> Efsm::outgoing(int id) const {
  std::vector<const EfsmTransition*> out;
  for (const auto& t : transitions)
    if (t.from == id) out.push_back(&t);
  return out;
}

std::vector<int> Efsm::terminals() const {
  std::vector<int> out;
  for (const auto& s : states)
    if (s.kind == StateKind::Terminal) out.push_back(s.id);
  return out;
}

namespace {

struct Edge {
  Role peer;
  bool send;
  MsgLabel label;
  std::optional<Role> via;
  Local next;
};

StateKind kind_of(const Local& t) {
  switch (t.kind()) {
    case LKind::Select:
    case LKind::RoutedSelect:
    case LKind::RouterTransit: return StateKind::Send;
    case LKind::Branch:
    case LKind::RoutedBranch:
    case LKind::Router: return StateKind::Receive;
    default: return StateKind::Terminal;
  }
}

std::vector<Edge> edges_of(const Local& t, const Role& self) {
  std::vector<Edge> out;
  switch (t.kind()) {
    case LKind::Select:
    case LKind::Branch:
      for (const auto& b : t.branches())
        out.push_back({t.peer(), t.kind() == LKind::Select, b.label, std::nullopt, b.cont});
      break;
    case LKind::RoutedSelect:
    case LKind::RoutedBranch:
      for (const auto& b : t.branches())
        out.push_back({t.peer(), t.kind() == LKind::RoutedSelect, b.label, t.via(), b.cont});
      break;
    case LKind::Router:
      for (const auto& b : t.branches())
        out.push_back({t.from(), false, b.label, self,
                       Local::router_transit(t.from(), t.to(), b.label.name, t.branches())});
      break;
    case LKind::RouterTransit:
      for (const auto& b : t.branches())
        if (b.label.name == t.chosen()) out.push_back({t.to(), true, b.label, self, b.cont});
      break;
    default: break;
  }
  return out;
}

}  // namespace

Efsm build_efsm(const Local& t, const Role& self) {
  validate(t);
  Efsm e;
  e.role = self;
  std::map<std::string, int> ids;
  std::deque<int> queue;
  auto intern = [&](const Local& raw) {
    Local u = unfold_head(raw);
    std::string k = canonical_key(u);
    auto it = ids.find(k);
    if (it != ids.end()) return it->second;
    int id = static_cast<int>(e.states.size()) + 1;
    ids.emplace(k, id);
    e.states.push_back({id, kind_of(u), u});
    queue.push_back(id);
    return id;
  };
  e.initial = intern(t);
  while (!queue.empty()) {
    int id = queue.front();
    queue.pop_front();
    Local cur = e.state(id).type;
    for (auto& ed : edges_of(cur, self)) {
      int to = intern(ed.next);
      e.transitions.push_back({id, to, ed.peer, ed.send, ed.label, ed.via});
    }
  }
  return e;
}

namespace {
std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}
}  // namespace

std::string render_dot(const Efsm& e, const std::string& name) {
  std::ostringstream os;
  os << "digraph \"" << dot_escape(name.empty() ? e.role.name() : name) << "\" {\n";
  os << "  rankdir=LR;\n";
  os << "  node [shape=circle];\n";
  os << "  start [shape=point];\n";
  for (const auto& s : e.states) {
    os << "  " << s.id << " [label=\"" << s.id << "\"";
    if (s.kind == StateKind::Terminal) os << ", shape=doublecircle";
    os << "];\n";
  }
  os << "  start -> " << e.initial << ";\n";
  for (const auto& t : e.transitions)
    os << "  " << t.from << " -> " << t.to << " [label=\"" << dot_escape(t.text()) << "\"];\n";
  os << "}\n";
  return os.str();
}

std::string render_ir(const Efsm& e) {
  nlohmann::json j;
  j["role"] = e.role.name();
  j["initial"] = e.initial;
  j["states"] = nlohmann::json::array();
  for (const auto& s : e.states) j["states"].push_back({{"id", s.id}, {"kind", to_string(s.kind)}});
  j["transitions"] = nlohmann::json::array();
  for (const auto& t : e.transitions) {
    nlohmann::json tj{{"from", t.from},
                      {"to", t.to},
                      {"peer", t.peer.name()},
                      {"dir", t.send ? "!" : "?"},
                      {"label", t.label.name}};
    if (t.via) tj["via"] = t.via->name();
    j["transitions"].push_back(std::move(tj));
  }
  return j.dump(2) + "\n";
}

}  // namespace roust
