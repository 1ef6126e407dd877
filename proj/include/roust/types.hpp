#pragma once

// Core IR: roles, message labels, global and local session types, action
// labels. Types are immutable trees with shared structure; copies are cheap.

#include <compare>
#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace roust {

/// Raised when a type violates a structural invariant (empty branch set,
/// duplicate labels, self-communication, unbound variable, non-contractive
/// recursion).
class InvalidType : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotRecursive : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

bool is_identifier(std::string_view s);

class Role {
 public:
  Role() = default;
  explicit Role(std::string name);

  const std::string& name() const { return name_; }
  bool empty() const { return name_.empty(); }

  auto operator<=>(const Role&) const = default;
  bool operator==(const Role&) const = default;

 private:
  std::string name_;
};

/// A message label with its payload sorts. Payload sorts are carried for
/// code generation only; the semantics never looks at them.
struct MsgLabel {
  std::string name;
  std::vector<std::string> payloads;

  MsgLabel() = default;
  MsgLabel(std::string n, std::vector<std::string> p = {})
      : name(std::move(n)), payloads(std::move(p)) {}
  MsgLabel(const char* n) : name(n) {}

  bool operator==(const MsgLabel&) const = default;
  std::string to_string() const;  // "Name(sort1, sort2)"
};

template <class T>
struct Branch {
  MsgLabel label;
  T cont;
};

// ---------------------------------------------------------------------------
// Global types

enum class GKind { End, Var, Rec, Comm, RoutedComm, TransitComm, TransitRouted };

class Global {
 public:
  using Branches = std::vector<Branch<Global>>;

  Global();  // end

  static Global end();
  static Global var(std::string name);
  static Global rec(std::string name, Global body);
  static Global comm(Role from, Role to, Branches branches);
  static Global routed(Role from, Role to, Role via, Branches branches);
  static Global transit(Role from, Role to, std::string chosen, Branches branches);
  static Global transit_routed(Role from, Role to, Role via, std::string chosen,
                               Branches branches);

  GKind kind() const;
  bool is_end() const { return kind() == GKind::End; }

  const std::string& var() const;  // Var and Rec
  const Global& body() const;      // Rec
  const Role& from() const;
  const Role& to() const;
  const Role& via() const;
  const std::string& chosen() const;
  const Branches& branches() const;
  const Global& branch(std::string_view label) const;
  bool is_routed_form() const {
    return kind() == GKind::RoutedComm || kind() == GKind::TransitRouted;
  }
  bool is_transit_form() const {
    return kind() == GKind::TransitComm || kind() == GKind::TransitRouted;
  }

  /// Same kind and header fields, branches replaced.
  Global with_branches(Branches branches) const;

  const void* identity() const { return node_.get(); }

  struct Node;

 private:
  explicit Global(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// ---------------------------------------------------------------------------
// Local types

enum class LKind {
  End, Var, Rec, Select, Branch, RoutedSelect, RoutedBranch, Router, RouterTransit
};

class Local {
 public:
  using Branches = std::vector<roust::Branch<Local>>;

  Local();  // end

  static Local end();
  static Local var(std::string name);
  static Local rec(std::string name, Local body);
  static Local select(Role to, Branches branches);
  static Local branch(Role from, Branches branches);
  static Local routed_select(Role to, Role via, Branches branches);
  static Local routed_branch(Role from, Role via, Branches branches);
  static Local router(Role from, Role to, Branches branches);
  static Local router_transit(Role from, Role to, std::string chosen, Branches branches);

  LKind kind() const;
  bool is_end() const { return kind() == LKind::End; }

  const std::string& var() const;
  const Local& body() const;
  /// Select/RoutedSelect recipient, Branch/RoutedBranch sender.
  const Role& peer() const;
  const Role& via() const;
  /// Router endpoints.
  const Role& from() const;
  const Role& to() const;
  const std::string& chosen() const;
  const Branches& branches() const;
  const Local& cont(std::string_view label) const;

  Local with_branches(Branches branches) const;

  const void* identity() const { return node_.get(); }

  struct Node;

 private:
  explicit Local(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// ---------------------------------------------------------------------------
// Action labels

enum class ActionKind { DirectSend, DirectRecv, RoutedSend, RoutedRecv };

struct ActionLabel {
  ActionKind kind = ActionKind::DirectSend;
  Role from;
  Role to;
  std::optional<Role> via;
  MsgLabel msg;

  static ActionLabel send(Role from, Role to, MsgLabel msg);
  static ActionLabel recv(Role from, Role to, MsgLabel msg);
  static ActionLabel routed_send(Role via, Role from, Role to, MsgLabel msg);
  static ActionLabel routed_recv(Role via, Role from, Role to, MsgLabel msg);

  bool routed() const { return via.has_value(); }
  bool is_send() const {
    return kind == ActionKind::DirectSend || kind == ActionKind::RoutedSend;
  }
  const Role& subject() const { return is_send() ? from : to; }

  /// "B->A!Suggest", "S.(B->A!Suggest)".
  std::string to_string() const;

  // Compared on message name only: payloads are inert.
  friend bool operator==(const ActionLabel& a, const ActionLabel& b);
  friend std::strong_ordering operator<=>(const ActionLabel& a, const ActionLabel& b);
};

// ---------------------------------------------------------------------------
// Operations

/// Checks every invariant including closedness and contractiveness.
void validate(const Global& g);
void validate(const Local& t);
/// Like validate, but tolerates free variables.
void validate_open(const Global& g);
void validate_open(const Local& t);

/// Alpha-invariant, payload-blind structural key. Free variables are keyed by
/// name, bound ones by de Bruijn index; branch order is lexicographic.
std::string canonical_key(const Global& g);
std::string canonical_key(const Local& t);

/// Validates, then renames binders to index-derived names and sorts branches.
Global canonicalize(const Global& g);
Local canonicalize(const Local& t);

/// Equality modulo alpha-renaming and branch order.
bool equivalent(const Global& a, const Global& b);
bool equivalent(const Local& a, const Local& b);

Global substitute(const Global& g, const std::string& var, const Global& replacement);
Local substitute(const Local& t, const std::string& var, const Local& replacement);

Global unfold_once(const Global& g);
Local unfold_once(const Local& t);
/// Unfolds until the head is not a Rec.
Global unfold_head(const Global& g);
Local unfold_head(const Local& t);

std::set<Role> participants(const Global& g);

/// True if g uses only the canonical (non-routed, non-transit) grammar.
bool is_canonical(const Global& g);
bool is_canonical(const Local& t);

std::set<std::string> free_vars(const Global& g);

std::string to_string(const Global& g);
std::string to_string(const Local& t);
std::string to_string(ActionKind k);

}  // namespace roust
