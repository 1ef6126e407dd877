#include "roust/scribble.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <optional>
#include <sstream>

namespace roust {

std::string SourceSpan::to_string() const {
  return file + ":" + std::to_string(start_line) + ":" + std::to_string(start_col);
}

FrontendError::FrontendError(const std::string& kind, SourceSpan span, const std::string& msg)
    : std::runtime_error(span.to_string() + ": " + kind + ": " + msg),
      kind_(kind),
      span_(std::move(span)) {}

namespace {
std::string expected_text(const std::vector<std::string>& expected, const std::string& found) {
  std::string out = "expected ";
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i) out += i + 1 == expected.size() ? " or " : ", ";
    out += expected[i];
  }
  return out + " but found " + found;
}
}  // namespace

SyntaxError::SyntaxError(SourceSpan span, std::vector<std::string> expected, std::string found)
    : FrontendError("SyntaxError", std::move(span), expected_text(expected, found)),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

bool Stmt::same_as(const Stmt& o) const {
  if (kind != o.kind) return false;
  switch (kind) {
    case Kind::Message: return label == o.label && from == o.from && to == o.to;
    case Kind::Do: return target == o.target && args == o.args;
    case Kind::Choice:
      if (at != o.at || blocks.size() != o.blocks.size()) return false;
      for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (blocks[i].size() != o.blocks[i].size()) return false;
        for (std::size_t j = 0; j < blocks[i].size(); ++j)
          if (!blocks[i][j].same_as(o.blocks[i][j])) return false;
      }
      return true;
  }
  return false;
}

bool ProtocolDecl::same_as(const ProtocolDecl& o) const {
  if (name != o.name || roles != o.roles || is_aux != o.is_aux ||
      type_aliases != o.type_aliases || body.size() != o.body.size())
    return false;
  for (std::size_t i = 0; i < body.size(); ++i)
    if (!body[i].same_as(o.body[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

enum class Tok { Ident, String, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourceSpan span;

  std::string describe() const {
    switch (kind) {
      case Tok::Ident: return "'" + text + "'";
      case Tok::String: return "string \"" + text + "\"";
      case Tok::Punct: return "'" + text + "'";
      case Tok::End: return "end of input";
    }
    return "?";
  }
};

class Lexer {
 public:
  Lexer(std::string_view src, std::string file) : src_(src), file_(std::move(file)) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_trivia();
      SourceSpan sp{file_, line_, col_, line_, col_};
      if (pos_ >= src_.size()) {
        out.push_back({Tok::End, "", sp});
        return out;
      }
      char c = src_[pos_];
      Token t;
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t b = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
          advance();
        t = {Tok::Ident, std::string(src_.substr(b, pos_ - b)), sp};
      } else if (c == '"') {
        advance();
        std::size_t b = pos_;
        while (pos_ < src_.size() && src_[pos_] != '"' && src_[pos_] != '\n') advance();
        if (pos_ >= src_.size() || src_[pos_] != '"')
          throw SyntaxError(sp, {"closing '\"'"}, "end of line");
        t = {Tok::String, std::string(src_.substr(b, pos_ - b)), sp};
        advance();
      } else if (std::string_view("(){};,<>").find(c) != std::string_view::npos) {
        advance();
        t = {Tok::Punct, std::string(1, c), sp};
      } else {
        throw SyntaxError(sp, {"identifier", "punctuation"}, std::string("'") + c + "'");
      }
      t.span.end_line = line_;
      t.span.end_col = col_;
      out.push_back(std::move(t));
    }
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_trivia() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (src_.substr(pos_, 2) == "//") {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (src_.substr(pos_, 2) == "/*") {
        SourceSpan sp{file_, line_, col_, line_, col_};
        advance();
        advance();
        while (pos_ < src_.size() && src_.substr(pos_, 2) != "*/") advance();
        if (pos_ >= src_.size()) throw SyntaxError(sp, {"'*/'"}, "end of input");
        advance();
        advance();
      } else {
        return;
      }
    }
  }

  std::string_view src_;
  std::string file_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  std::vector<ProtocolDecl> module() {
    std::vector<ProtocolDecl> out;
    std::map<std::string, TypeAlias> aliases;
    while (peek().kind != Tok::End) {
      if (at_word("type")) {
        auto [name, alias] = type_decl();
        aliases[name] = alias;
      } else if (at_word("aux") || at_word("global")) {
        out.push_back(protocol());
      } else {
        fail({"'type'", "'global'", "'aux'"});
      }
    }
    for (auto& d : out) d.type_aliases = aliases;
    return out;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool at_word(std::string_view w) const { return peek().kind == Tok::Ident && peek().text == w; }
  bool at_punct(std::string_view p) const { return peek().kind == Tok::Punct && peek().text == p; }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    throw SyntaxError(peek().span, std::move(expected), peek().describe());
  }

  const Token& word(std::string_view w) {
    if (!at_word(w)) fail({"'" + std::string(w) + "'"});
    return next();
  }
  const Token& punct(std::string_view p) {
    if (!at_punct(p)) fail({"'" + std::string(p) + "'"});
    return next();
  }
  const Token& ident(const std::string& what = "identifier") {
    if (peek().kind != Tok::Ident || !is_identifier(peek().text)) fail({what});
    return next();
  }
  const Token& string_lit() {
    if (peek().kind != Tok::String) fail({"string literal"});
    return next();
  }

  std::pair<std::string, TypeAlias> type_decl() {
    word("type");
    punct("<");
    TypeAlias a;
    a.language = ident("language name").text;
    punct(">");
    a.sort = string_lit().text;
    word("from");
    a.source = string_lit().text;
    word("as");
    std::string name = ident("alias name").text;
    punct(";");
    return {name, a};
  }

  ProtocolDecl protocol() {
    ProtocolDecl d;
    d.span = peek().span;
    if (at_word("aux")) {
      next();
      d.is_aux = true;
    }
    word("global");
    word("protocol");
    d.name = ident("protocol name").text;
    punct("(");
    for (;;) {
      word("role");
      const Token& r = ident("role name");
      Role role(r.text);
      if (std::find(d.roles.begin(), d.roles.end(), role) != d.roles.end())
        throw DuplicateRole(r.span, "role '" + r.text + "' declared twice in " + d.name);
      d.roles.push_back(role);
      if (at_punct(",")) {
        next();
        continue;
      }
      break;
    }
    punct(")");
    d.body = block(d);
    d.span.end_line = toks_[pos_ - 1].span.end_line;
    d.span.end_col = toks_[pos_ - 1].span.end_col;
    return d;
  }

  Role role_ref(const ProtocolDecl& d) {
    const Token& t = ident("role name");
    Role r(t.text);
    if (std::find(d.roles.begin(), d.roles.end(), r) == d.roles.end())
      throw UnknownRole(t.span, "role '" + t.text + "' is not a parameter of " + d.name);
    return r;
  }

  std::vector<Stmt> block(const ProtocolDecl& d) {
    punct("{");
    std::vector<Stmt> out;
    while (!at_punct("}")) {
      if (peek().kind == Tok::End) fail({"'}'"});
      out.push_back(stmt(d));
    }
    next();
    return out;
  }

  Stmt stmt(const ProtocolDecl& d) {
    Stmt s;
    s.span = peek().span;
    if (at_word("choice")) {
      next();
      s.kind = Stmt::Kind::Choice;
      word("at");
      s.at = role_ref(d);
      s.blocks.push_back(block(d));
      while (at_word("or")) {
        next();
        s.blocks.push_back(block(d));
      }
    } else if (at_word("do")) {
      next();
      s.kind = Stmt::Kind::Do;
      s.target = ident("protocol name").text;
      punct("(");
      if (!at_punct(")")) {
        for (;;) {
          s.args.push_back(role_ref(d));
          if (!at_punct(",")) break;
          next();
        }
      }
      punct(")");
      punct(";");
    } else if (peek().kind == Tok::Ident) {
      s.kind = Stmt::Kind::Message;
      s.label.name = ident("message label").text;
      punct("(");
      if (!at_punct(")")) {
        for (;;) {
          s.label.payloads.push_back(ident("payload sort").text);
          if (!at_punct(",")) break;
          next();
        }
      }
      punct(")");
      word("from");
      s.from = role_ref(d);
      word("to");
      const Token& to_tok = peek();
      s.to = role_ref(d);
      if (s.to == s.from)
        throw FrontendError("SelfMessage", to_tok.span,
                            "role '" + s.to.name() + "' sends to itself");
      punct(";");
    } else {
      fail({"message", "'choice'", "'do'", "'}'"});
    }
    s.span.end_line = toks_[pos_ - 1].span.end_line;
    s.span.end_col = toks_[pos_ - 1].span.end_col;
    return s;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

void check_calls(const std::vector<Stmt>& body, const std::vector<ProtocolDecl>& decls) {
  for (const auto& s : body) {
    if (s.kind == Stmt::Kind::Choice)
      for (const auto& b : s.blocks) check_calls(b, decls);
    if (s.kind != Stmt::Kind::Do) continue;
    auto it = std::find_if(decls.begin(), decls.end(),
                           [&](const auto& d) { return d.name == s.target; });
    if (it == decls.end()) throw UnknownProtocol(s.span, "no protocol named '" + s.target + "'");
    if (it->roles.size() != s.args.size())
      throw ArityMismatch(s.span, s.target + " takes " + std::to_string(it->roles.size()) +
                                      " roles, got " + std::to_string(s.args.size()));
  }
}

}  // namespace

std::vector<ProtocolDecl> parse_module(std::string_view text, const std::string& file) {
  Parser p(Lexer(text, file).run());
  auto decls = p.module();
  for (std::size_t i = 0; i < decls.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (decls[i].name == decls[j].name)
        throw DuplicateProtocol(decls[i].span, "protocol '" + decls[i].name + "' declared twice");
  for (const auto& d : decls) check_calls(d.body, decls);
  return decls;
}

// ---------------------------------------------------------------------------
// Elaboration

namespace {

constexpr std::size_t kMaxExpansionDepth = 4096;

class Elaborator {
 public:
  explicit Elaborator(const std::vector<ProtocolDecl>& decls) : decls_(decls) {}

  Global call(const ProtocolDecl& d, const std::vector<Role>& args, const SourceSpan& at) {
    std::string binder = d.name;
    for (const auto& r : args) binder += "_" + r.name();
    if (std::find(stack_.begin(), stack_.end(), binder) != stack_.end()) {
      used_.insert(binder);
      return Global::var(binder);
    }
    if (stack_.size() >= kMaxExpansionDepth)
      throw UnboundedCall(at, "expansion of " + d.name + " does not reach a repeated call");
    std::map<Role, Role> subst;
    for (std::size_t i = 0; i < d.roles.size(); ++i) subst[d.roles[i]] = args[i];
    stack_.push_back(binder);
    Global body = seq(d, subst, {{&d.body, 0}});
    stack_.pop_back();
    if (used_.erase(binder)) return Global::rec(binder, std::move(body));
    return body;
  }

 private:
  using Frame = std::pair<const std::vector<Stmt>*, std::size_t>;

  MsgLabel resolve(const ProtocolDecl& d, const MsgLabel& l) const {
    MsgLabel out = l;
    for (auto& p : out.payloads) {
      auto it = d.type_aliases.find(p);
      if (it != d.type_aliases.end()) p = it->second.sort;
    }
    return out;
  }

  // `frames` is a stack of statement sequences still to run; the back frame
  // is the innermost.
  Global seq(const ProtocolDecl& d, const std::map<Role, Role>& subst, std::vector<Frame> frames) {
    while (!frames.empty() && frames.back().second >= frames.back().first->size())
      frames.pop_back();
    if (frames.empty()) return Global::end();
    const Stmt& s = (*frames.back().first)[frames.back().second];
    ++frames.back().second;
    auto R = [&](const Role& r) { return subst.at(r); };
    switch (s.kind) {
      case Stmt::Kind::Message:
        return Global::comm(R(s.from), R(s.to), {{resolve(d, s.label), seq(d, subst, frames)}});
      case Stmt::Kind::Choice: {
        std::optional<Role> to;
        Global::Branches bs;
        for (const auto& block : s.blocks) {
          if (block.empty() || block.front().kind != Stmt::Kind::Message)
            throw InvalidChoice(s.span, "each branch of a choice must start with a message");
          const Stmt& first = block.front();
          if (first.from != s.at)
            throw InvalidChoice(first.span, "branch starts with a message from " +
                                                first.from.name() + ", not the chooser " +
                                                s.at.name());
          if (to && *to != first.to)
            throw InvalidChoice(first.span, "branches of a choice address different roles");
          to = first.to;
          for (const auto& b : bs)
            if (b.label.name == first.label.name)
              throw InvalidChoice(first.span, "label '" + first.label.name + "' repeated in choice");
          auto inner = frames;
          inner.push_back({&block, 1});
          bs.push_back({resolve(d, first.label), seq(d, subst, inner)});
        }
        return Global::comm(R(s.at), R(*to), std::move(bs));
      }
      case Stmt::Kind::Do: {
        bool tail = std::all_of(frames.begin(), frames.end(),
                                [](const Frame& f) { return f.second >= f.first->size(); });
        if (!tail) throw NonTailCall(s.span, "'do " + s.target + "' is followed by further statements");
        const auto& callee = *std::find_if(decls_.begin(), decls_.end(),
                                           [&](const auto& x) { return x.name == s.target; });
        std::vector<Role> args;
        for (const auto& a : s.args) args.push_back(R(a));
        return call(callee, args, s.span);
      }
    }
    return Global::end();
  }

  const std::vector<ProtocolDecl>& decls_;
  std::vector<std::string> stack_;
  std::set<std::string> used_;
};

}  // namespace

Global elaborate(const std::vector<ProtocolDecl>& decls, const std::string& entry,
                 const std::vector<Role>& args) {
  auto it = std::find_if(decls.begin(), decls.end(), [&](const auto& d) { return d.name == entry; });
  if (it == decls.end()) throw UnknownProtocol(SourceSpan{}, "no protocol named '" + entry + "'");
  if (it->is_aux)
    throw AuxEntryPoint(it->span, "aux protocol '" + entry + "' cannot be an entry point");
  if (args.size() != it->roles.size())
    throw ArityMismatch(it->span, entry + " takes " + std::to_string(it->roles.size()) +
                                      " roles, got " + std::to_string(args.size()));
  std::set<Role> distinct(args.begin(), args.end());
  if (distinct.size() != args.size())
    throw DuplicateRole(it->span, "entry roles must be pairwise distinct");
  Elaborator e(decls);
  Global g = e.call(*it, args, it->span);
  validate(g);
  return g;
}

Global elaborate(const std::vector<ProtocolDecl>& decls, const std::string& entry) {
  auto it = std::find_if(decls.begin(), decls.end(), [&](const auto& d) { return d.name == entry; });
  if (it == decls.end()) throw UnknownProtocol(SourceSpan{}, "no protocol named '" + entry + "'");
  return elaborate(decls, entry, it->roles);
}

// ---------------------------------------------------------------------------
// Printing

namespace {

void print_stmts(std::ostream& os, const std::vector<Stmt>& body, int indent) {
  std::string pad(indent * 2, ' ');
  for (const auto& s : body) {
    switch (s.kind) {
      case Stmt::Kind::Message: {
        os << pad << s.label.name << "(";
        for (std::size_t i = 0; i < s.label.payloads.size(); ++i)
          os << (i ? ", " : "") << s.label.payloads[i];
        os << ") from " << s.from.name() << " to " << s.to.name() << ";\n";
        break;
      }
      case Stmt::Kind::Do:
        os << pad << "do " << s.target << "(";
        for (std::size_t i = 0; i < s.args.size(); ++i) os << (i ? ", " : "") << s.args[i].name();
        os << ");\n";
        break;
      case Stmt::Kind::Choice:
        os << pad << "choice at " << s.at.name() << " {\n";
        for (std::size_t i = 0; i < s.blocks.size(); ++i) {
          if (i) os << pad << "} or {\n";
          print_stmts(os, s.blocks[i], indent + 1);
        }
        os << pad << "}\n";
        break;
    }
  }
}

}  // namespace

std::string pretty_print(const std::vector<ProtocolDecl>& decls) {
  std::ostringstream os;
  if (!decls.empty())
    for (const auto& [name, a] : decls.front().type_aliases)
      os << "type <" << a.language << "> \"" << a.sort << "\" from \"" << a.source << "\" as "
         << name << ";\n";
  for (const auto& d : decls) {
    if (os.tellp() > 0) os << "\n";
    if (d.is_aux) os << "aux ";
    os << "global protocol " << d.name << "(";
    for (std::size_t i = 0; i < d.roles.size(); ++i)
      os << (i ? ", " : "") << "role " << d.roles[i].name();
    os << ") {\n";
    print_stmts(os, d.body, 1);
    os << "}\n";
  }
  return os.str();
}

}  // namespace roust
