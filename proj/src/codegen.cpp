#include "roust/codegen.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace roust {

#ifndef ROUST_TEMPLATE_DIR
#define ROUST_TEMPLATE_DIR "templates"
#endif

std::string default_template_dir() { return ROUST_TEMPLATE_DIR; }

namespace {

using Sections = std::map<std::string, std::string>;
using Vars = std::map<std::string, std::string>;

Sections load_sections(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TemplateError("cannot read template " + path);
  Sections out;
  std::string line, current;
  bool open = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.rfind("@@", 0) == 0) {
      std::string name = line.substr(2);
      name.erase(0, name.find_first_not_of(" \t"));
      name.erase(name.find_last_not_of(" \t\r") + 1);
      if (name.empty()) throw TemplateError(path + ":" + std::to_string(lineno) + ": empty section name");
      if (out.count(name))
        throw TemplateError(path + ":" + std::to_string(lineno) + ": duplicate section " + name);
      current = name;
      out[current];
      open = true;
      continue;
    }
    if (!open) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw TemplateError(path + ":" + std::to_string(lineno) + ": text before first section");
    }
    out[current] += line + "\n";
  }
  return out;
}

std::string render(const std::string& text, const Vars& vars, const std::string& where) {
  std::string out;
  std::size_t pos = 0;
  for (;;) {
    std::size_t open = text.find("{{", pos);
    if (open == std::string::npos) {
      out += text.substr(pos);
      return out;
    }
    std::size_t close = text.find("}}", open);
    if (close == std::string::npos) throw TemplateError(where + ": unterminated placeholder");
    out += text.substr(pos, open - pos);
    std::string name = text.substr(open + 2, close - open - 2);
    auto it = vars.find(name);
    if (it == vars.end()) throw TemplateError(where + ": unknown placeholder {{" + name + "}}");
    out += it->second;
    pos = close + 2;
  }
}

std::string state_name(int id) { return "S" + std::to_string(id); }

std::string kind_word(StateKind k) { return to_string(k); }

// Placeholders outside their scope expand to the empty string.
Vars base_vars(const Efsm& e, const std::string& protocol) {
  std::string terminal;
  for (int t : e.terminals()) terminal += (terminal.empty() ? "" : ", ") + state_name(t);
  return {{"role", e.role.name()},   {"protocol", protocol},   {"initial", state_name(e.initial)},
          {"terminal", terminal},    {"state", ""},            {"alternatives", ""},
          {"label", ""},             {"payloads", ""},         {"payload_params", ""},
          {"successor", ""},         {"peer", ""}};
}

void transition_vars(Vars& v, const EfsmTransition& t) {
  std::string payloads, params;
  for (std::size_t i = 0; i < t.label.payloads.size(); ++i) {
    if (i) {
      payloads += ", ";
      params += ", ";
    }
    payloads += t.label.payloads[i];
    params += "payload" + std::to_string(i + 1) + ": " + t.label.payloads[i];
  }
  v["label"] = t.label.name;
  v["payloads"] = payloads;
  v["payload_params"] = params;
  v["successor"] = state_name(t.to);
  v["peer"] = t.peer.name();
}

}  // namespace

std::vector<GeneratedFile> emit_skeleton(const Efsm& e, const std::string& protocol,
                                         const std::string& flavor,
                                         const std::string& template_dir) {
  if (flavor != "server" && flavor != "client")
    throw UnsupportedFlavor("unsupported flavor '" + flavor + "' (expected server or client)");
  std::string path = (std::filesystem::path(template_dir) / (flavor + ".tmpl")).string();
  Sections sec = load_sections(path);
  auto get = [&](const std::string& name) -> const std::string* {
    auto it = sec.find(name);
    return it == sec.end() ? nullptr : &it->second;
  };
  std::string ext = "txt";
  if (auto* x = get("extension")) {
    ext = *x;
    ext.erase(ext.find_last_not_of(" \t\r\n") + 1);
    ext.erase(0, ext.find_first_not_of(" \t\r\n"));
  }

  auto visible = [&](const EfsmTransition& t) { return !(t.via && *t.via == e.role); };

  std::vector<GeneratedFile> out;
  const std::vector<std::pair<std::string, std::string>> units = {
      {"message", "Message"}, {"handler", "Handler"}, {"state", "State"}, {"factory", "Factory"}};
  for (const auto& [unit, file] : units) {
    std::string where = path + " [" + unit + "]";
    Vars base = base_vars(e, protocol);
    std::string text;
    if (auto* s = get(unit + ".header")) text += render(*s, base, where);
    for (const auto& st : e.states) {
      Vars v = base;
      v["state"] = state_name(st.id);
      std::vector<const EfsmTransition*> outs;
      for (const auto* t : e.outgoing(st.id))
        if (visible(*t)) outs.push_back(t);
      std::string alts;
      for (const auto* t : outs) {
        Vars tv = v;
        transition_vars(tv, *t);
        if (auto* a = get(unit + ".alternative"))
          alts += render(*a, tv, where);
        else
          alts += (alts.empty() ? "" : ", ") + t->label.name;
      }
      if (!alts.empty() && alts.back() == '\n') alts.pop_back();
      v["alternatives"] = alts;
      std::string kind = kind_word(st.kind);
      if (auto* s = get(unit + ".state." + kind)) text += render(*s, v, where);
      for (const auto* t : outs) {
        Vars tv = v;
        transition_vars(tv, *t);
        if (auto* s = get(unit + ".transition." + std::string(t->send ? "send" : "receive")))
          text += render(*s, tv, where);
      }
      if (auto* s = get(unit + ".close." + kind)) text += render(*s, v, where);
    }
    if (auto* s = get(unit + ".footer")) text += render(*s, base, where);
    out.push_back({protocol + "/" + e.role.name() + "/" + file + "." + ext, std::move(text)});
  }
  return out;
}

std::vector<std::string> write_files(const std::vector<GeneratedFile>& files,
                                     const std::string& out_dir) {
  std::vector<std::string> written;
  for (const auto& f : files) {
    auto p = std::filesystem::path(out_dir) / f.path;
    std::filesystem::create_directories(p.parent_path());
    std::ofstream os(p, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + p.string());
    os << f.content;
    written.push_back(p.string());
  }
  return written;
}

}  // namespace roust
