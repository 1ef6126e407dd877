#pragma once

// Scribble subset: global protocols with messages, choice and tail `do`.
//
//   module   = { typeDecl | protocol }
//   typeDecl = "type" "<" Ident ">" String "from" String "as" Ident ";"
//   protocol = ["aux"] "global" "protocol" Ident "(" "role" Ident {"," "role" Ident} ")"
//              "{" {stmt} "}"
//   stmt     = Ident "(" [Ident {"," Ident}] ")" "from" Ident "to" Ident ";"
//            | "choice" "at" Ident block {"or" block}
//            | "do" Ident "(" [Ident {"," Ident}] ")" ";"
//   block    = "{" {stmt} "}"
//
// Comments are `//` to end of line or `/* ... */`.

#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "roust/types.hpp"

namespace roust {

struct SourceSpan {
  std::string file;
  int start_line = 1, start_col = 1, end_line = 1, end_col = 1;

  std::string to_string() const;
};

class FrontendError : public std::runtime_error {
 public:
  FrontendError(const std::string& kind, SourceSpan span, const std::string& msg);
  const SourceSpan& span() const { return span_; }
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
  SourceSpan span_;
};

class SyntaxError : public FrontendError {
 public:
  SyntaxError(SourceSpan span, std::vector<std::string> expected, std::string found);
  const std::vector<std::string>& expected() const { return expected_; }
  const std::string& found() const { return found_; }

 private:
  std::vector<std::string> expected_;
  std::string found_;
};

#define ROUST_FRONTEND_ERROR(Name)                                  \
  class Name : public FrontendError {                               \
   public:                                                          \
    Name(SourceSpan span, const std::string& msg)                   \
        : FrontendError(#Name, std::move(span), msg) {}             \
  };
ROUST_FRONTEND_ERROR(DuplicateRole)
ROUST_FRONTEND_ERROR(UnknownRole)
ROUST_FRONTEND_ERROR(UnknownProtocol)
ROUST_FRONTEND_ERROR(ArityMismatch)
ROUST_FRONTEND_ERROR(DuplicateProtocol)
ROUST_FRONTEND_ERROR(InvalidChoice)
ROUST_FRONTEND_ERROR(NonTailCall)
ROUST_FRONTEND_ERROR(UnboundedCall)
ROUST_FRONTEND_ERROR(AuxEntryPoint)
#undef ROUST_FRONTEND_ERROR

struct TypeAlias {
  std::string language;  // e.g. "typescript"
  std::string sort;      // the quoted host-language type
  std::string source;    // the quoted module path
  bool operator==(const TypeAlias&) const = default;
};

struct Stmt {
  enum class Kind { Message, Choice, Do };
  Kind kind = Kind::Message;
  SourceSpan span;

  // Message
  MsgLabel label;
  Role from, to;
  // Choice
  Role at;
  std::vector<std::vector<Stmt>> blocks;
  // Do
  std::string target;
  std::vector<Role> args;

  /// Structural equality, spans ignored.
  bool same_as(const Stmt& o) const;
};

struct ProtocolDecl {
  std::string name;
  std::vector<Role> roles;
  bool is_aux = false;
  std::vector<Stmt> body;
  std::map<std::string, TypeAlias> type_aliases;  // alias -> descriptor, module-wide
  SourceSpan span;

  bool same_as(const ProtocolDecl& o) const;
};

std::vector<ProtocolDecl> parse_module(std::string_view text, const std::string& file = "<input>");

/// Expands the entry protocol into a closed global type. Each `do` either
/// inlines the callee under role substitution or, when the (protocol, roles)
/// pair is already being expanded, becomes a back-edge to its binder.
Global elaborate(const std::vector<ProtocolDecl>& decls, const std::string& entry,
                 const std::vector<Role>& args);

/// Uses the entry's declared role names as arguments.
Global elaborate(const std::vector<ProtocolDecl>& decls, const std::string& entry);

std::string pretty_print(const std::vector<ProtocolDecl>& decls);

}  // namespace roust
