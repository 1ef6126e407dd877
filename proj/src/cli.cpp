#include "roust/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <sstream>

#include "roust/analysis.hpp"
#include "roust/codegen.hpp"
#include "roust/efsm.hpp"
#include "roust/encoding.hpp"
#include "roust/projection.hpp"
#include "roust/scribble.hpp"
#include "roust/simulator.hpp"
#include "roust/wellformedness.hpp"

namespace roust {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw UsageError("cannot write " + path);
  os << text;
}

Role role_arg(const std::string& name) {
  if (!is_identifier(name)) throw UsageError("invalid role name '" + name + "'");
  return Role(name);
}

Global load(const std::string& file, const std::string& protocol) {
  auto decls = parse_module(read_file(file), file);
  return elaborate(decls, protocol);
}

struct Options {
  std::string file, protocol, role, router, dot, ir, flavor, out_dir, templates, cancel, report,
      scheduler = "rr";
  std::size_t depth = 8;
  std::size_t state_cap = 1'000'000;
  std::uint64_t seed = 0;
  std::size_t rounds = 0;
  bool config = false;
  bool direct = false;
};

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Routed multiparty session types toolkit"};
  app.require_subcommand(1);
  Options o;

  auto* parse = app.add_subcommand("parse", "Parse a module and print it back");
  parse->add_option("file", o.file)->required();

  auto* project_cmd = app.add_subcommand("project", "Project a protocol onto a role");
  project_cmd->add_option("file", o.file)->required();
  project_cmd->add_option("protocol", o.protocol)->required();
  project_cmd->add_option("role", o.role)->required();

  auto* check = app.add_subcommand("check", "Check well-formedness");
  check->add_option("file", o.file)->required();
  check->add_option("protocol", o.protocol)->required();
  check->add_option("--router", o.router, "Also require this role to be the centroid");

  auto* encode = app.add_subcommand("encode", "Route a protocol through a router role");
  encode->add_option("file", o.file)->required();
  encode->add_option("protocol", o.protocol)->required();
  encode->add_option("--router", o.router)->required();

  auto* traces = app.add_subcommand("traces", "List bounded traces");
  traces->add_option("file", o.file)->required();
  traces->add_option("protocol", o.protocol)->required();
  traces->add_option("--depth", o.depth)->required();
  traces->add_flag("--config", o.config, "Use the configuration semantics");
  traces->add_option("--router", o.router, "Trace the encoded protocol");

  auto* verify = app.add_subcommand("verify", "Run the bounded theorem checks");
  verify->add_option("file", o.file)->required();
  verify->add_option("protocol", o.protocol)->required();
  verify->add_option("--router", o.router)->required();
  verify->add_option("--depth", o.depth)->capture_default_str();
  verify->add_option("--state-cap", o.state_cap)->capture_default_str();
  verify->add_option("--report", o.report, "Also write the report to this file");

  auto* efsm = app.add_subcommand("efsm", "Build the endpoint state machine of a role");
  efsm->add_option("file", o.file)->required();
  efsm->add_option("protocol", o.protocol)->required();
  efsm->add_option("role", o.role)->required();
  efsm->add_option("--dot", o.dot, "Write DOT to this file");
  efsm->add_option("--ir", o.ir, "Write the JSON IR to this file");
  efsm->add_option("--router", o.router, "Use the projection of the encoded protocol");

  auto* gen = app.add_subcommand("gen", "Emit endpoint skeletons");
  gen->add_option("file", o.file)->required();
  gen->add_option("protocol", o.protocol)->required();
  gen->add_option("role", o.role)->required();
  gen->add_option("--flavor", o.flavor)->required();
  gen->add_option("-o,--out", o.out_dir)->required();
  gen->add_option("--templates", o.templates, "Template directory");

  auto* simulate = app.add_subcommand("simulate", "Run a session through the router");
  simulate->add_option("file", o.file)->required();
  simulate->add_option("protocol", o.protocol)->required();
  simulate->add_option("--router", o.router)->required();
  simulate->add_option("--seed", o.seed)->capture_default_str();
  simulate->add_option("--cancel", o.cancel, "ROLE@STEP");
  simulate->add_option("--rounds", o.rounds, "Loop n-1 times at every choice, then leave");
  simulate->add_option("--scheduler", o.scheduler)->check(CLI::IsMember({"rr", "random"}))->capture_default_str();
  simulate->add_flag("--direct", o.direct, "Deliver directly instead of through the router");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*parse) {
      auto decls = parse_module(read_file(o.file), o.file);
      out << pretty_print(decls);
      return 0;
    }
    if (*project_cmd) {
      Global g = load(o.file, o.protocol);
      out << to_string(project(g, role_arg(o.role))) << "\n";
      return 0;
    }
    if (*check) {
      Global g = load(o.file, o.protocol);
      WfReport rep = o.router.empty() ? check_wf(g) : check_wf_routed(g, role_arg(o.router));
      out << rep.to_string();
      return rep.ok ? 0 : 1;
    }
    if (*encode) {
      Global g = load(o.file, o.protocol);
      out << to_string(encode_global(g, role_arg(o.router))) << "\n";
      return 0;
    }
    if (*traces) {
      Global g = load(o.file, o.protocol);
      if (!o.router.empty()) g = encode_global(g, role_arg(o.router));
      TraceSet ts = o.config ? config_traces(g, o.depth) : global_traces(g, o.depth);
      for (const auto& t : ts.traces) out << (t.empty() ? "(empty)" : to_string(t)) << "\n";
      return 0;
    }
    if (*verify) {
      Global g = load(o.file, o.protocol);
      Role s = role_arg(o.router);
      ExploreOptions opts;
      opts.depth = o.depth;
      opts.state_cap = o.state_cap;
      Global enc = encode_global(g, s);
      std::vector<ExplorationReport> reps;
      reps.push_back(check_trace_equivalence(g, opts));
      reps.push_back(check_trace_equivalence(enc, opts));
      reps.push_back(check_deadlock_freedom(enc, s, opts));
      reps.push_back(check_encoding_bisim(g, s, opts));
      std::string text = format_report(reps);
      out << text;
      if (!o.report.empty()) write_text(o.report, text);
      bool ok = std::all_of(reps.begin(), reps.end(), [](const auto& r) { return r.passed(); });
      return ok ? 0 : 1;
    }
    if (*efsm) {
      Global g = load(o.file, o.protocol);
      Role r = role_arg(o.role);
      if (!o.router.empty()) g = encode_global(g, role_arg(o.router));
      Efsm e = build_efsm(project(g, r), r);
      std::string name = o.protocol + "_" + r.name();
      if (!o.dot.empty()) write_text(o.dot, render_dot(e, name));
      if (!o.ir.empty()) write_text(o.ir, render_ir(e));
      if (o.dot.empty() && o.ir.empty()) out << render_dot(e, name);
      return 0;
    }
    if (*gen) {
      Global g = load(o.file, o.protocol);
      Role r = role_arg(o.role);
      Efsm e = build_efsm(project(g, r), r);
      auto files = emit_skeleton(e, o.protocol, o.flavor,
                                 o.templates.empty() ? default_template_dir() : o.templates);
      for (const auto& p : write_files(files, o.out_dir)) out << p << "\n";
      return 0;
    }
    if (*simulate) {
      Global g = load(o.file, o.protocol);
      Role s = role_arg(o.router);
      SimConfig cfg;
      cfg.seed = o.seed;
      cfg.route_via_router = !o.direct;
      cfg.scheduler = o.scheduler == "random" ? SchedulerKind::SeededRandom : SchedulerKind::RoundRobin;
      if (!o.cancel.empty()) {
        auto at = o.cancel.find('@');
        if (at == std::string::npos) throw UsageError("--cancel expects ROLE@STEP");
        std::size_t step = 0;
        try {
          step = std::stoull(o.cancel.substr(at + 1));
        } catch (const std::exception&) {
          throw UsageError("--cancel expects ROLE@STEP");
        }
        cfg.cancel = std::make_pair(role_arg(o.cancel.substr(0, at)), step);
      }
      std::map<Role, ChoicePolicy> scripts;
      if (o.rounds > 0)
        for (const auto& r : participants(g)) scripts[r] = ChoicePolicy::rounds_of(o.rounds);
      SessionLog log = run_session(g, s, scripts, cfg);
      out << log.serialize();
      if (log.cancelled_by) {
        err << "cancelled by " << log.cancelled_by->name() << "; notified";
        for (const auto& r : log.notified) err << " " << r.name();
        err << "\n";
      } else {
        err << "completed after " << log.steps << " steps, " << log.data_count() << " data envelopes\n";
      }
      LogCheck lc = validate_log(g, s, log);
      if (!lc) {
        err << "log violates the protocol at envelope " << lc.index << ": " << lc.message << "\n";
        return 1;
      }
      return 0;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidType& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace roust
