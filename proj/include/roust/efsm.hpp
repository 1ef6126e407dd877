#pragma once

#include <optional>
#include <string>
#include <vector>

#include "roust/types.hpp"

namespace roust {

enum class StateKind { Send, Receive, Terminal };

std::string to_string(StateKind k);

struct EfsmState {
  int id = 0;  // 1-based
  StateKind kind = StateKind::Terminal;
  Local type;  // head-unfolded local type this state stands for
};

struct EfsmTransition {
  int from = 0, to = 0;
  Role peer;
  bool send = false;
  MsgLabel label;
  std::optional<Role> via;

  /// "B?Suggest", "S!Query", "A?Quote (via S)".
  std::string text() const;
};

struct Efsm {
  Role role;
  std::vector<EfsmState> states;  // states[i].id == i + 1
  std::vector<EfsmTransition> transitions;
  int initial = 1;

  const EfsmState& state(int id) const { return states.at(id - 1); }
  std::vector<const EfsmTransition*> outgoing(int id) const;
  std::vector<int> terminals() const;
};

/// States are numbered in breadth-first discovery order from the initial
/// state, visiting branches in declaration order.
Efsm build_efsm(const Local& t, const Role& self);

std::string render_dot(const Efsm& e, const std::string& name = "");

/// {"initial","role","states":[{"id","kind"}],"transitions":[{"from","to","peer","dir","label","via"?}]}
std::string render_ir(const Efsm& e);

}  // namespace roust
