#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "hmlkit/aut.hpp"
#include "hmlkit/ccs.hpp"
#include "hmlkit/equivalence.hpp"
#include "hmlkit/error.hpp"
#include "hmlkit/formula.hpp"
#include "hmlkit/semantics.hpp"

namespace hmlkit::cli {
namespace {

using json = nlohmann::ordered_json;

struct Settings {
  bool json = false;
  bool timing = false;
  std::size_t max_states = ccs::kDefaultStateBudget;
};

// A parse error in a named input (a file, an inline formula, a state).
class SourceError : public Error {
 public:
  SourceError(const std::string& source, const ParseError& e)
      : Error(source + ":" + e.what()), source_(source), message_(e.message()), line_(e.line()),
        column_(e.column()) {}

  json to_json() const {
    return {{"source", source_}, {"line", line_}, {"column", column_}, {"message", message_}};
  }

 private:
  std::string source_;
  std::string message_;
  std::size_t line_;
  std::size_t column_;
};

template <typename F>
auto from_source(const std::string& source, F&& parse) {
  try {
    return parse();
  } catch (const ParseError& e) {
    throw SourceError(source, e);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

std::optional<std::uint32_t> parse_id(const std::string& text) {
  std::uint32_t value = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

StateId numeric_state(const std::string& text, std::size_t num_states) {
  const auto id = parse_id(text);
  if (!id) throw UsageError("'" + text + "' is not a state id");
  if (*id >= num_states) {
    throw UsageError("state " + text + " out of range (the model has " + std::to_string(num_states) +
                     " states)");
  }
  return StateId(*id);
}

struct Model {
  FiniteLts lts;
  std::vector<StateId> states;          // one per state argument
  std::vector<ccs::Process> processes;  // state table, for .ccs models
};

bool is_ccs(const std::string& path) { return std::filesystem::path(path).extension() == ".ccs"; }

/// Loads an .aut file, or the reachable LTS of a .ccs file. In a .ccs model
/// a state argument is either a numeric id or a process expression, which
/// becomes an extra root; numeric ids refer to the exploration order.
Model load_model(const std::string& path, const std::vector<std::string>& state_args,
                 const Settings& settings) {
  const std::string text = read_file(path);
  if (!is_ccs(path)) {
    FiniteLts lts = from_source(path, [&] { return read_aut(text); });
    std::vector<StateId> states;
    for (const std::string& arg : state_args) states.push_back(numeric_state(arg, lts.num_states()));
    return Model{std::move(lts), std::move(states), {}};
  }

  const ccs::CcsProgram program = from_source(path, [&] { return ccs::parse_ccs(text); });
  std::vector<ccs::Process> roots = program.roots;
  std::vector<std::optional<std::size_t>> root_of(state_args.size());
  for (std::size_t i = 0; i < state_args.size(); ++i) {
    if (parse_id(state_args[i])) continue;
    root_of[i] = roots.size();
    roots.push_back(from_source("state '" + state_args[i] + "'",
                                [&] { return ccs::parse_process(state_args[i], program.defs); }));
  }
  if (roots.empty()) throw UsageError(path + " has no process expression to explore");

  ccs::ProcessLts reach = ccs::reachable_lts(program.defs, roots, settings.max_states);
  std::vector<StateId> states;
  for (std::size_t i = 0; i < state_args.size(); ++i) {
    states.push_back(root_of[i] ? reach.roots[*root_of[i]]
                                : numeric_state(state_args[i], reach.lts.num_states()));
  }
  return Model{std::move(reach.lts), std::move(states), std::move(reach.processes)};
}

std::vector<Formula> load_formulas(const std::optional<std::string>& inline_text,
                                   const std::string& file) {
  std::vector<Formula> formulas;
  if (inline_text) formulas.push_back(from_source("formula", [&] { return parse_formula(*inline_text); }));
  if (!file.empty()) {
    const std::string text = read_file(file);
    for (Formula& f : from_source(file, [&] { return parse_formula_list(text); })) {
      formulas.push_back(std::move(f));
    }
  }
  if (formulas.empty()) throw UsageError("no formula given");
  return formulas;
}

json formula_texts(const std::vector<Formula>& formulas) {
  json texts = json::array();
  for (const Formula& f : formulas) texts.push_back(to_string(f));
  return texts;
}

json state_ids(const std::vector<StateId>& states) {
  json ids = json::array();
  for (StateId s : states) ids.push_back(s.value);
  return ids;
}

std::string brace_list(const std::vector<StateId>& states) {
  std::string text = "{";
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (i > 0) text += ", ";
    text += std::to_string(states[i].value);
  }
  return text + "}";
}

struct Report {
  json inputs = json::object();
  json result;
  std::string text;
  int exit_code = kExitTrue;
};

// check ----------------------------------------------------------------------

struct CheckArgs {
  std::string model;
  std::string state;
  std::optional<std::string> formula;
  std::string formula_file;
  bool both = false;
};

Report cmd_check(const CheckArgs& a, const Settings& settings) {
  const Model m = load_model(a.model, {a.state}, settings);
  const std::vector<Formula> formulas = load_formulas(a.formula, a.formula_file);
  const StateId s = m.states[0];
  Report r;
  r.inputs = {{"model", a.model}, {"state", a.state}, {"formulas", formula_texts(formulas)}};
  r.result = json::array();
  for (const Formula& f : formulas) {
    const bool holds = satisfies(m.lts, s, f);
    if (a.both && denotation(f, m.lts).contains(s) != holds) {
      throw InvariantViolation("satisfaction and denotation disagree on state " + a.state + " for " +
                               to_string(f));
    }
    r.result.push_back(holds);
    r.text += holds ? "true\n" : "false\n";
    if (!holds) r.exit_code = kExitFalse;
  }
  return r;
}

// denote ---------------------------------------------------------------------

struct DenoteArgs {
  std::string model;
  std::optional<std::string> formula;
  std::string formula_file;
  bool both = false;
};

Report cmd_denote(const DenoteArgs& a, const Settings& settings) {
  const Model m = load_model(a.model, {}, settings);
  const std::vector<Formula> formulas = load_formulas(a.formula, a.formula_file);
  Report r;
  r.inputs = {{"model", a.model}, {"formulas", formula_texts(formulas)}};
  r.result = json::array();
  for (const Formula& f : formulas) {
    if (a.both) {
      const std::vector<StateId> bad = check_semantic_agreement(m.lts, f);
      if (!bad.empty()) {
        throw InvariantViolation("satisfaction and denotation disagree on states " + brace_list(bad) +
                                 " for " + to_string(f));
      }
    }
    const std::vector<StateId> members = denotation(f, m.lts).members();
    r.result.push_back(state_ids(members));
    r.text += brace_list(members) + "\n";
  }
  return r;
}

// bisim ----------------------------------------------------------------------

struct BisimArgs {
  std::string model;
  std::vector<std::string> states;
};

Report cmd_bisim(const BisimArgs& a, const Settings& settings) {
  if (a.states.size() == 1) throw UsageError("bisim takes either no states or two");
  const Model m = load_model(a.model, a.states, settings);
  Report r;
  r.inputs = {{"model", a.model}, {"states", a.states}};
  if (a.states.size() == 2) {
    const bool same = bisimilar(m.lts, m.states[0], m.states[1]);
    r.result = same;
    r.text = same ? "bisimilar\n" : "not-bisimilar\n";
    r.exit_code = same ? kExitTrue : kExitFalse;
    return r;
  }
  r.result = json::array();
  for (const std::vector<StateId>& block : bisimilarity(m.lts).classes()) {
    r.result.push_back(state_ids(block));
    for (std::size_t i = 0; i < block.size(); ++i) {
      r.text += (i > 0 ? " " : "") + std::to_string(block[i].value);
    }
    r.text += "\n";
  }
  return r;
}

// distinguish ----------------------------------------------------------------

struct PairArgs {
  std::string model;
  std::string first;
  std::string second;
  std::vector<std::size_t> oracle;  // theory-eq only: size, depth
};

Report cmd_distinguish(const PairArgs& a, const Settings& settings) {
  const Model m = load_model(a.model, {a.first, a.second}, settings);
  const DistinguishResult d = distinguishing_formula(m.lts, m.states[0], m.states[1]);
  Report r;
  r.inputs = {{"model", a.model}, {"states", {a.first, a.second}}};
  if (d.equivalent()) {
    r.result = {{"equivalent", true}};
    r.text = "equivalent\n";
    return r;
  }
  const bool first = d.satisfied_by == DistinguishResult::Side::First;
  const StateId yes = first ? m.states[0] : m.states[1];
  const StateId no = first ? m.states[1] : m.states[0];
  if (!satisfies(m.lts, yes, *d.formula) || satisfies(m.lts, no, *d.formula)) {
    throw InvariantViolation("synthesised formula " + to_string(*d.formula) +
                             " does not separate the states");
  }
  const std::string text = to_string(*d.formula);
  r.result = {{"equivalent", false},
              {"formula", text},
              {"satisfied_by", yes.value},
              {"refuted_by", no.value}};
  r.text = text + "\nsatisfied by " + (first ? a.first : a.second) + ", not by " +
           (first ? a.second : a.first) + "\n";
  r.exit_code = kExitFalse;
  return r;
}

// theory-eq ------------------------------------------------------------------

Report cmd_theory_eq(const PairArgs& a, const Settings& settings) {
  const Model m = load_model(a.model, {a.first, a.second}, settings);
  // Theory equivalence is bisimilarity on every finite LTS.
  const bool same = bisimilar(m.lts, m.states[0], m.states[1]);
  Report r;
  r.inputs = {{"model", a.model}, {"states", {a.first, a.second}}};
  r.result = {{"equivalent", same}, {"method", "bisimilarity"}};
  r.text = same ? "equivalent\n" : "not-equivalent\n";
  r.exit_code = same ? kExitTrue : kExitFalse;
  if (!a.oracle.empty()) {
    const std::size_t size = a.oracle[0];
    const std::size_t depth = a.oracle[1];
    const bool bounded = theory_eq_bounded(m.lts, m.states[0], m.states[1], size, depth);
    r.result["oracle"] = {{"max_size", size}, {"max_depth", depth}, {"equivalent", bounded}};
    if (bounded != same) {
      throw InvariantViolation("bounded enumeration (size <= " + std::to_string(size) + ", depth <= " +
                               std::to_string(depth) + ") says " +
                               (bounded ? "equivalent" : "not equivalent") +
                               " but bisimilarity says " + (same ? "equivalent" : "not equivalent"));
    }
  }
  return r;
}

// ccs ------------------------------------------------------------------------

struct CcsArgs {
  std::string file;
  std::vector<std::string> roots;
  std::string emit_aut;
};

Report cmd_ccs(const CcsArgs& a, const Settings& settings) {
  const std::string text = read_file(a.file);
  const ccs::CcsProgram program = from_source(a.file, [&] { return ccs::parse_ccs(text); });
  std::vector<ccs::Process> roots = program.roots;
  for (const std::string& root : a.roots) {
    roots.push_back(from_source("root '" + root + "'", [&] { return ccs::parse_process(root, program.defs); }));
  }
  if (roots.empty()) throw UsageError(a.file + " has no process expression and no root was given");
  const ccs::ProcessLts reach = ccs::reachable_lts(program.defs, roots, settings.max_states);
  if (!a.emit_aut.empty()) save_aut(a.emit_aut, reach.lts);

  Report r;
  r.inputs = {{"file", a.file}, {"roots", a.roots}, {"max_states", settings.max_states}};
  if (!a.emit_aut.empty()) r.inputs["emit_aut"] = a.emit_aut;
  json processes = json::array();
  for (const ccs::Process& p : reach.processes) processes.push_back(ccs::to_string(p));
  r.result = {{"states", reach.lts.num_states()},
              {"transitions", reach.lts.num_transitions()},
              {"roots", state_ids(reach.roots)},
              {"processes", processes}};

  std::ostringstream out;
  out << "states: " << reach.lts.num_states() << "\n"
      << "transitions: " << reach.lts.num_transitions() << "\n"
      << "roots:";
  for (StateId s : reach.roots) out << " " << s.value;
  out << "\n";
  for (std::size_t i = 0; i < reach.processes.size(); ++i) {
    out << i << "\t" << reach.processes[i] << "\n";
  }
  r.text = out.str();
  return r;
}

// driver ---------------------------------------------------------------------

struct Failure {
  std::string kind;
  int exit_code;
};

void print_error(const std::string& command, const Failure& failure, const std::string& message,
                 const json& detail, const Settings& settings, std::ostream& out, std::ostream& err) {
  if (settings.json) {
    json error = {{"kind", failure.kind}, {"message", message}};
    if (!detail.is_null()) error["location"] = detail;
    out << json{{"command", command}, {"error", error}}.dump() << "\n";
  } else {
    err << "hmlkit: " << failure.kind << " error: " << message << "\n";
  }
}

void add_model_option(CLI::App& cmd, std::string& model) {
  cmd.add_option("model", model, "LTS as .aut, or a .ccs program")->required();
}

void add_formula_options(CLI::App& cmd, std::optional<std::string>& formula, std::string& file,
                         bool& both) {
  cmd.add_option("formula", formula, "Formula text");
  cmd.add_option("-f,--formula-file", file, "File with one formula per line")
      ->check(CLI::ExistingFile);
  cmd.add_flag("--both-semantics", both,
               "Also compute the denotation and fail on any disagreement with satisfaction");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Settings settings;
  CLI::App app{"Hennessy-Milner logic model checking and bisimulation for finite LTSs", "hmlkit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--json", settings.json, "One JSON object per result line");
  app.add_flag("--timing", settings.timing, "Report elapsed time");
  app.add_option("--max-states", settings.max_states, "State budget when exploring .ccs programs")
      ->check(CLI::PositiveNumber);

  CheckArgs check;
  CLI::App* check_cmd = app.add_subcommand("check", "Does a state satisfy a formula?");
  add_model_option(*check_cmd, check.model);
  check_cmd->add_option("state", check.state, "State id, or a process for .ccs models")->required();
  add_formula_options(*check_cmd, check.formula, check.formula_file, check.both);

  DenoteArgs denote;
  CLI::App* denote_cmd = app.add_subcommand("denote", "The set of states satisfying a formula");
  add_model_option(*denote_cmd, denote.model);
  add_formula_options(*denote_cmd, denote.formula, denote.formula_file, denote.both);

  BisimArgs bisim;
  CLI::App* bisim_cmd =
      app.add_subcommand("bisim", "Bisimilarity of two states, or the whole partition");
  add_model_option(*bisim_cmd, bisim.model);
  bisim_cmd->add_option("states", bisim.states, "Two states")->expected(0, 2);

  PairArgs distinguish;
  CLI::App* distinguish_cmd =
      app.add_subcommand("distinguish", "A formula telling two states apart");
  add_model_option(*distinguish_cmd, distinguish.model);
  distinguish_cmd->add_option("s1", distinguish.first, "First state")->required();
  distinguish_cmd->add_option("s2", distinguish.second, "Second state")->required();

  PairArgs theory;
  CLI::App* theory_cmd = app.add_subcommand("theory-eq", "Do two states satisfy the same formulas?");
  add_model_option(*theory_cmd, theory.model);
  theory_cmd->add_option("s1", theory.first, "First state")->required();
  theory_cmd->add_option("s2", theory.second, "Second state")->required();
  theory_cmd->add_option("--oracle", theory.oracle,
                         "Cross-check by enumerating formulas up to SIZE nodes and DEPTH")
      ->expected(2)
      ->type_name("SIZE DEPTH");

  CcsArgs ccs_args;
  CLI::App* ccs_cmd = app.add_subcommand("ccs", "Explore the reachable LTS of a CCS program");
  ccs_cmd->add_option("file", ccs_args.file, ".ccs program")->required();
  ccs_cmd->add_option("roots", ccs_args.roots, "Extra root processes");
  ccs_cmd->add_option("--emit-aut", ccs_args.emit_aut, "Write the LTS to this .aut file");

  std::string command;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    if (!app.get_subcommands().empty()) command = app.get_subcommands()[0]->get_name();
    print_error(command, {"usage", kExitUsage}, e.what(), nullptr, settings, out, err);
    return kExitUsage;
  }
  command = app.get_subcommands()[0]->get_name();

  const auto start = std::chrono::steady_clock::now();
  std::optional<Failure> failure;
  std::string message;
  json detail;
  Report report;
  try {
    if (command == "check") report = cmd_check(check, settings);
    else if (command == "denote") report = cmd_denote(denote, settings);
    else if (command == "bisim") report = cmd_bisim(bisim, settings);
    else if (command == "distinguish") report = cmd_distinguish(distinguish, settings);
    else if (command == "theory-eq") report = cmd_theory_eq(theory, settings);
    else report = cmd_ccs(ccs_args, settings);
  } catch (const SourceError& e) {
    failure = Failure{"parse", kExitUsage};
    message = e.what();
    detail = e.to_json();
  } catch (const ParseError& e) {
    failure = Failure{"parse", kExitUsage};
    message = e.what();
  } catch (const EvaluationError& e) {
    failure = Failure{"evaluation", kExitUsage};
    message = e.what();
  } catch (const ResourceError& e) {
    failure = Failure{"resource", kExitUsage};
    message = e.what();
  } catch (const LtsError& e) {
    failure = Failure{"lts", kExitUsage};
    message = e.what();
  } catch (const UsageError& e) {
    failure = Failure{"usage", kExitUsage};
    message = e.what();
  } catch (const InvariantViolation& e) {
    failure = Failure{"invariant", kExitInternal};
    message = e.what();
  } catch (const std::exception& e) {
    failure = Failure{"internal", kExitInternal};
    message = e.what();
  }
  const double elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  if (failure) {
    print_error(command, *failure, message, detail, settings, out, err);
    return failure->exit_code;
  }
  if (settings.json) {
    json line = {{"command", command}, {"inputs", report.inputs}, {"result", report.result}};
    if (settings.timing) line["elapsed_ms"] = elapsed_ms;
    out << line.dump() << "\n";
  } else {
    out << report.text;
    if (settings.timing) out << "elapsed: " << elapsed_ms << " ms\n";
  }
  return report.exit_code;
}

}  // namespace hmlkit::cli
