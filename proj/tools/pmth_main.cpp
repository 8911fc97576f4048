// pmth: run scenarios under an interleaving policy, audit populations,
// decompose traces into revealed threads, and canonicalize scenario files.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pmth/pmth.hpp"

namespace {

constexpr int kExitCli = 2;
constexpr int kExitParse = 3;
constexpr int kExitValid = 4;
constexpr int kExitProtocol = 5;
constexpr int kExitRun = 6;
constexpr int kExitIo = 7;

struct ErrorClass {
  const char* prefix;
  int code;
};

ErrorClass classify_error(pmth::Errc c) {
  using pmth::Errc;
  switch (c) {
    case Errc::malformed_instruction:
    case Errc::parse_error:
    case Errc::ambiguous_classifier:
      return {"E_PARSE", kExitParse};
    case Errc::validation_error:
    case Errc::cyclic_goals:
    case Errc::duplicate_name:
    case Errc::unknown_thread:
    case Errc::insufficient_workload:
    case Errc::insufficient_executive_balance:
    case Errc::orphaned_workload:
    case Errc::self_transfer:
    case Errc::no_executive:
      return {"E_VALID", kExitValid};
    case Errc::contemplation_not_held:
    case Errc::not_contemplated:
    case Errc::readiness_violation:
    case Errc::unclosed_pseudo_switch:
    case Errc::pseudo_nested:
    case Errc::not_active:
    case Errc::unmatched_pseudo_back:
    case Errc::no_live_thread:
    case Errc::protocol_error:
      return {"E_PROTOCOL", kExitProtocol};
    case Errc::jump_chain_exceeded:
    case Errc::non_monotone_step:
      return {"E_RUN", kExitRun};
    case Errc::io_error:
      return {"E_IO", kExitIo};
  }
  return {"E_RUN", kExitRun};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) pmth::fail(pmth::Errc::io_error, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) pmth::fail(pmth::Errc::io_error, "cannot write '" + path + "'");
  out << content;
  if (!out) pmth::fail(pmth::Errc::io_error, "short write to '" + path + "'");
}

pmth::Classifier load_classifier(const std::string& path) {
  pmth::Classifier cls;
  std::string text = read_file(path);
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string prefix, name, extra;
    if (!(ls >> prefix)) continue;
    if (prefix[0] == '#') continue;
    if (!(ls >> name) || (ls >> extra))
      pmth::fail(pmth::Errc::parse_error,
                 "line " + std::to_string(line_no) + ": classifier lines are 'PREFIX NAME'");
    if (prefix == "*")
      cls.default_name = name;
    else
      cls.prefixes.emplace_back(prefix, name);
  }
  return cls;
}

int cmd_run(const std::string& scenario_path, const std::optional<std::string>& policy_flag,
            const std::optional<std::uint64_t>& seed_flag,
            const std::optional<std::int64_t>& max_steps_flag,
            const std::optional<std::string>& trace_path, bool allow_invalid) {
  pmth::Scenario sc = pmth::parse_scenario(read_file(scenario_path));
  if (policy_flag) sc.policy.kind = pmth::policy_from_name(*policy_flag);
  if (seed_flag) sc.policy.seed = *seed_flag;
  if (max_steps_flag) sc.max_steps = *max_steps_flag;

  pmth::ValidationReport rep = pmth::validate(sc.htva, sc.executive);
  if (!rep.all_pass()) {
    if (!allow_invalid)
      pmth::fail(pmth::Errc::validation_error, "population audit failed\n" + rep.render());
    for (const auto& c : rep.checks)
      if (!c.pass) std::cerr << "warning: " << c.name << ": " << c.detail << "\n";
  }

  pmth::EngineState st = pmth::make_engine_state(sc);
  pmth::RunResult res = sc.mode == pmth::ProtocolMode::manual
                            ? pmth::run_manual(std::move(st), sc.meta, sc.max_steps,
                                               sc.policy.seed)
                            : pmth::run(std::move(st), sc.policy, sc.max_steps);
  std::string text = pmth::render_trace(res.trace);
  if (trace_path)
    write_file(*trace_path, text);
  else
    std::cout << text;
  return 0;
}

int cmd_audit(const std::string& scenario_path) {
  pmth::Scenario sc = pmth::parse_scenario(read_file(scenario_path));
  pmth::ValidationReport rep = pmth::validate(sc.htva, sc.executive);
  std::cout << rep.render();
  if (!rep.all_pass()) {
    std::cerr << "E_VALID ValidationError: population audit failed\n";
    return kExitValid;
  }
  return 0;
}

int cmd_decompose(const std::string& trace_path, bool provenance,
                  const std::optional<std::string>& classify_path,
                  const std::optional<std::string>& default_name) {
  pmth::Trace tr = pmth::parse_trace(read_file(trace_path));
  pmth::Classifier cls;
  if (provenance) {
    cls.provenance = true;
  } else if (classify_path) {
    cls = load_classifier(*classify_path);
  } else {
    pmth::fail(pmth::Errc::validation_error, "decompose needs --provenance or --classify FILE");
  }
  if (default_name) cls.default_name = *default_name;
  pmth::MultiTrace mt = pmth::decompose(tr, cls);
  std::cout << pmth::render_stats(mt);
  return 0;
}

int cmd_depth(const std::string& scenario_path) {
  pmth::Scenario sc = pmth::parse_scenario(read_file(scenario_path));
  std::cout << pmth::depth(sc.htva) << "\n";
  return 0;
}

int cmd_fmt(const std::string& scenario_path) {
  pmth::Scenario sc = pmth::parse_scenario(read_file(scenario_path));
  std::cout << pmth::render_scenario(sc);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deterministic single-agent multi-threading simulator"};
  app.require_subcommand(1);

  std::string scenario_path, trace_path;
  std::optional<std::string> policy_flag, trace_out, classify_path, default_name;
  std::optional<std::uint64_t> seed_flag;
  std::optional<std::int64_t> max_steps_flag;
  bool allow_invalid = false;
  bool provenance = false;

  CLI::App* s_run = app.add_subcommand("run", "run a scenario and emit its trace");
  s_run->add_option("scenario", scenario_path, "scenario file")->required();
  s_run->add_option("--policy", policy_flag, "cyclic|poly|random|weighted (overrides scenario)");
  s_run->add_option("--seed", seed_flag, "PRNG seed (overrides scenario)");
  s_run->add_option("--max-steps", max_steps_flag, "step budget (overrides scenario)");
  s_run->add_option("--trace", trace_out, "write the trace here instead of stdout");
  s_run->add_flag("--allow-invalid", allow_invalid, "downgrade audit failures to warnings");

  CLI::App* s_audit = app.add_subcommand("audit", "validate a scenario's population");
  s_audit->add_option("scenario", scenario_path, "scenario file")->required();

  CLI::App* s_dec = app.add_subcommand("decompose", "split a trace into revealed threads");
  s_dec->add_option("trace", trace_path, "trace file")->required();
  s_dec->add_flag("--provenance", provenance, "group by recorded owner");
  s_dec->add_option("--classify", classify_path, "classifier file (PREFIX NAME lines)");
  s_dec->add_option("--default", default_name, "name for unmatched actions");

  CLI::App* s_depth = app.add_subcommand("depth", "print the vector nesting depth");
  s_depth->add_option("scenario", scenario_path, "scenario file")->required();

  CLI::App* s_fmt = app.add_subcommand("fmt", "canonicalize a scenario file");
  s_fmt->add_option("scenario", scenario_path, "scenario file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "E_CLI " << e.what() << "\n";
    return kExitCli;
  }

  try {
    if (s_run->parsed())
      return cmd_run(scenario_path, policy_flag, seed_flag, max_steps_flag, trace_out,
                     allow_invalid);
    if (s_audit->parsed()) return cmd_audit(scenario_path);
    if (s_dec->parsed()) return cmd_decompose(trace_path, provenance, classify_path, default_name);
    if (s_depth->parsed()) return cmd_depth(scenario_path);
    if (s_fmt->parsed()) return cmd_fmt(scenario_path);
  } catch (const pmth::Error& e) {
    ErrorClass ec = classify_error(e.code());
    std::cerr << ec.prefix << " " << e.what() << "\n";
    return ec.code;
  } catch (const std::exception& e) {
    std::cerr << "E_RUN " << e.what() << "\n";
    return kExitRun;
  }
  return kExitCli;
}
