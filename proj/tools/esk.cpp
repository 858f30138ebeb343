#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "esk/difftest.hpp"
#include "esk/driver.hpp"
#include "esk/errors.hpp"
#include "esk/faults.hpp"
#include "esk/parse.hpp"
#include "esk/potentials.hpp"
#include "esk/print.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

esk::ParsedProgram load_program(const std::string& path,
                                const std::string& form) {
  std::string text = read_file(path);
  if (form == "textual")
    return esk::parse_program(text, esk::Form::Textual);
  if (form == "symbolic")
    return esk::parse_program(text, esk::Form::Symbolic);
  return esk::parse_program_auto(text);
}

esk::ProgramInterface to_interface(const esk::ParsedProgram& parsed) {
  esk::ProgramInterface p;
  p.inputs.insert(parsed.inputs.begin(), parsed.inputs.end());
  p.outputs.insert(parsed.outputs.begin(), parsed.outputs.end());
  p.body = parsed.body;
  // Undeclared free signals default to inputs so plain statements run.
  for (const auto& s : esk::free_signals(p.body))
    if (!p.inputs.count(s) && !p.outputs.count(s)) p.inputs.insert(s);
  return p;
}

std::vector<esk::InputAssignment> load_inputs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<esk::InputAssignment> instants;
  std::string line;
  while (std::getline(in, line)) {
    esk::InputAssignment a;
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      auto comma = tok.rfind(',');
      if (comma == std::string::npos || comma + 2 != tok.size() ||
          (tok[comma + 1] != '+' && tok[comma + 1] != '-'))
        throw std::runtime_error("bad input token '" + tok +
                                 "' (want name,+ or name,-)");
      if (tok[comma + 1] == '+') a.insert(tok.substr(0, comma));
    }
    instants.push_back(std::move(a));
  }
  if (instants.empty()) instants.push_back({});
  return instants;
}

void explain(const esk::StmtPtr& p, const esk::Event& e, int indent,
             std::ostream& os) {
  std::string pad(static_cast<size_t>(indent) * 2, ' ');
  os << pad << esk::print(p, esk::Form::Symbolic) << '\n';
  os << pad << "  Must = " << esk::must(p, e).to_string()
     << "  Can+ = " << esk::can(esk::CanFlag::Plus, p, e).to_string() << '\n';
  esk::Event inner = e;
  if (p->kind == esk::StmtKind::Signal)
    inner = e.add(p->signal, esk::Status::Bot);
  if (p->left) explain(p->left, inner, indent + 1, os);
  if (p->right) explain(p->right, inner, indent + 1, os);
}

int cmd_run(const std::string& program_path, const std::string& inputs_path,
            const std::string& trace_path, const std::string& engine_name,
            const std::string& form, bool do_explain,
            const std::string& dot_path, const std::string& steps_path) {
  auto parsed = load_program(program_path, form);
  auto prog = to_interface(parsed);
  esk::Engine engine = esk::Engine::Cbs;
  if (engine_name == "lbs") engine = esk::Engine::Lbs;
  else if (engine_name == "css") engine = esk::Engine::Css;
  else if (engine_name == "micro") engine = esk::Engine::Micro;
  std::vector<esk::InputAssignment> instants;
  if (!inputs_path.empty())
    instants = load_inputs(inputs_path);
  else
    instants.push_back({});
  if (do_explain) {
    esk::Event view = esk::event_from_assignment(prog.inputs, {});
    for (const auto& o : prog.outputs)
      view = view.add(o, esk::Status::Bot);
    explain(prog.body, view, 0, std::cout);
  }
  esk::MicroDebug debug;
  bool want_debug = !dot_path.empty() || !steps_path.empty();
  auto trace = esk::run(prog, instants, engine,
                        want_debug ? &debug : nullptr);
  std::cout << trace.serialize();
  if (!trace_path.empty()) {
    std::ofstream out(trace_path);
    out << trace.serialize();
  }
  if (!dot_path.empty() && !debug.dots.empty()) {
    std::ofstream out(dot_path);
    for (const auto& d : debug.dots) out << d;
  }
  if (!steps_path.empty() && !debug.steps.empty()) {
    std::ofstream out(steps_path);
    for (size_t i = 0; i < debug.steps.size(); ++i)
      out << "instant " << (i + 1) << ":\n" << debug.steps[i];
  }
  return 0;
}

int cmd_check(const std::string& program_path, const std::string& form) {
  auto parsed = load_program(program_path, form);
  auto report = esk::check(to_interface(parsed));
  std::cout << report.to_string() << '\n';
  return report.verdict == esk::Verdict::Constructive ? 0 : 1;
}

int cmd_difftest(uint64_t seed, int count, int depth,
                 const std::string& fault) {
  if (fault == "par-delta-drop")
    esk::set_fault(esk::Fault::ParDeltaDrop);
  else if (fault == "seq-can-flag-swap")
    esk::set_fault(esk::Fault::SeqCanFlagSwap);
  auto report = esk::difftest({seed, count, depth});
  for (const auto& f : report.failures)
    std::cout << "FAIL seed=" << f.seed << " property=" << f.property
              << " program=`" << f.program << "` " << f.detail << '\n';
  std::cout << report.summary() << '\n';
  return report.ok() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kernel Esterel semantics workbench"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "react a program to inputs");
  std::string program_path, inputs_path, trace_path, dot_path, steps_path;
  std::string engine = "cbs", form = "auto";
  bool do_explain = false;
  run_cmd->add_option("--program", program_path, "program file")->required();
  run_cmd->add_option("--engine", engine, "lbs|cbs|css|micro")
      ->check(CLI::IsMember({"lbs", "cbs", "css", "micro"}));
  run_cmd->add_option("--inputs", inputs_path,
                      "input stream, one instant per line: sig,+ sig,-");
  run_cmd->add_option("--trace", trace_path, "write the reaction trace here");
  run_cmd->add_option("--form", form, "textual|symbolic|auto")
      ->check(CLI::IsMember({"textual", "symbolic", "auto"}));
  run_cmd->add_flag("--explain", do_explain,
                    "dump per-node Must/Can before running");
  run_cmd->add_option("--dump-dot", dot_path,
                      "write stabilized microstates as DOT (micro engine)");
  run_cmd->add_option("--micro-steps", steps_path,
                      "write the microstep trace here (micro engine)");

  auto* check_cmd =
      app.add_subcommand("check", "classify a program's first reaction");
  std::string check_path;
  std::string check_form = "auto";
  check_cmd->add_option("file", check_path, "program file")->required();
  check_cmd->add_option("--form", check_form, "textual|symbolic|auto")
      ->check(CLI::IsMember({"textual", "symbolic", "auto"}));

  auto* diff_cmd =
      app.add_subcommand("difftest", "random differential testing");
  uint64_t seed = 1;
  int count = 100, depth = 5;
  std::string fault = "none";
  diff_cmd->add_option("--seed", seed, "first seed");
  diff_cmd->add_option("--count", count, "number of seeds");
  diff_cmd->add_option("--depth", depth, "program depth bound");
  diff_cmd
      ->add_option("--fault", fault,
                   "inject a known fault (harness self-test)")
      ->check(CLI::IsMember({"none", "par-delta-drop", "seq-can-flag-swap"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd)
      return cmd_run(program_path, inputs_path, trace_path, engine, form,
                     do_explain, dot_path, steps_path);
    if (*check_cmd) return cmd_check(check_path, check_form);
    if (*diff_cmd) return cmd_difftest(seed, count, depth, fault);
  } catch (const esk::InternalError& ex) {
    std::cerr << "internal invariant breach: " << ex.what() << '\n';
    return 2;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 1;
  }
  return 0;
}
