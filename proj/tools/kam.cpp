// Command line front end.
//
//   kam compile [FILE]                 lambda notation -> combinator text
//   kam run [--fuel N] [--trace] [FILE]   execute a process "t * stack"
//   kam cexpr derive "<wedge>" "<wedge>"  derive a rewrite sequence
//   kam cexpr apply "<seq>" "<wedge>"     apply a rewrite sequence
//   kam star [FILE]                    star translation: prints t* and 1_t
//   kam lib list | emit NAME | test NAME  the term catalogue
//   kam prove FILE [--run "stack"]     check a derivation script
//   kam code "<stack>"                 numeric code of a stack
//
// Exit codes: 0 ok, 2 fuel exhausted on run, 64 usage, 65 parse/check error.

#include <CLI11.hpp>

#include "kam/deduction.hpp"
#include "kam/parse.hpp"
#include "kam/stdlib.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kExitFuel = 2;
constexpr int kExitUsage = 64;
constexpr int kExitData = 65;

std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void load_atoms(const std::string& path) {
  if (path.empty()) return;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open atom registry '" + path + "'");
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() &&
           std::isspace(static_cast<unsigned char>(line.back())))
      line.pop_back();
    size_t start = 0;
    while (start < line.size() &&
           std::isspace(static_cast<unsigned char>(line[start])))
      ++start;
    std::string name = line.substr(start);
    if (!name.empty() && name[0] != ';')
      kam::AtomRegistry::instance().index_of(name);
  }
}

// compile: either one lambda term, or definition lines "name = term"
int cmd_compile(const std::string& text) {
  bool has_defs = false;
  for (size_t i = 0; i < text.size(); ++i) {
    if (text[i] == ';') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (text[i] == '=') {
      has_defs = true;
      break;
    }
  }
  if (!has_defs) {
    kam::Term t = kam::eliminate(kam::parse_lambda(text));
    std::cout << kam::to_string(t) << "\n";
    return 0;
  }
  std::vector<std::pair<std::string, kam::LTerm>> defs;
  std::istringstream lines(text);
  std::string line, pending;
  auto flush = [&] {
    if (pending.find_first_not_of(" \t\r\n") == std::string::npos) {
      pending.clear();
      return;
    }
    size_t eq = pending.find('=');
    if (eq == std::string::npos)
      throw kam::ParseError("expected 'name = term'", 0);
    std::string name = pending.substr(0, eq);
    name.erase(0, name.find_first_not_of(" \t"));
    name.erase(name.find_last_not_of(" \t") + 1);
    defs.emplace_back(name, kam::parse_lambda(pending.substr(eq + 1)));
    pending.clear();
  };
  while (std::getline(lines, line)) {
    size_t sc = line.find(';');
    if (sc != std::string::npos) line.erase(sc);
    if (line.find('=') != std::string::npos) flush();
    pending += line + "\n";
  }
  flush();
  for (const auto& [name, t] : kam::eliminate_defs(defs))
    std::cout << name << " = " << kam::to_string(t) << "\n";
  return 0;
}

int cmd_run(const std::string& text, size_t fuel, bool trace) {
  kam::Process p = kam::parse_process(text);
  kam::Trace tr = kam::run(p, fuel);
  if (trace) {
    for (const auto& step : tr.steps)
      std::cout << kam::to_string(step) << "\n";
  } else {
    std::cout << kam::to_string(tr.last()) << "\n";
  }
  if (tr.fuel_exhausted()) {
    std::cerr << "fuel exhausted after " << tr.fuel_used << " steps\n";
    return kExitFuel;
  }
  return 0;
}

int cmd_lib_list() {
  for (const auto& e : kam::catalogue())
    std::cout << e.name << (e.contract ? " [contract]" : "") << "  -  "
              << e.origin << "\n";
  return 0;
}

int cmd_lib_emit(const std::string& name) {
  const kam::NamedTerm* e = kam::catalogue_find(name);
  if (!e) {
    std::cerr << "no catalogue entry named '" << name << "'\n";
    return kExitData;
  }
  std::cout << kam::to_string(e->term) << "\n";
  std::cout << "; " << e->origin << "\n";
  return 0;
}

int cmd_lib_test(const std::string& name) {
  const kam::NamedTerm* e = kam::catalogue_find(name);
  if (!e) {
    std::cerr << "no catalogue entry named '" << name << "'\n";
    return kExitData;
  }
  if (!e->contract) {
    std::cout << name << ": no registered contract\n";
    return 0;
  }
  std::ostringstream diag;
  bool ok = e->contract->check(diag);
  std::cout << name << ": " << e->contract->description << "  ->  "
            << (ok ? "PASS" : "FAIL") << "\n";
  if (!ok) std::cerr << diag.str();
  return ok ? 0 : 1;
}

int cmd_prove(const std::string& text, const std::string& run_stack,
              size_t fuel) {
  kam::Derivation d = kam::parse_script(text);
  kam::Judgement j = kam::check(d, {});
  std::cout << "term:    " << kam::to_string(j.term) << "\n";
  std::cout << "formula: " << kam::to_string(j.formula) << "\n";
  kam::Term compiled = kam::eliminate(j.term);
  std::cout << "program: " << kam::to_string(compiled) << "\n";
  if (!run_stack.empty()) {
    kam::Stack s = kam::parse_stack(run_stack);
    kam::Trace tr = kam::run(kam::Process{compiled, s}, fuel);
    std::cout << "final:   " << kam::to_string(tr.last()) << "\n";
    if (tr.fuel_exhausted()) {
      std::cerr << "fuel exhausted\n";
      return kExitFuel;
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"combinator machine with classical control and a slotted stack"};
  app.require_subcommand(1);

  size_t fuel = 100000;
  bool trace = false;
  std::string file, atoms_path;
  std::string arg1, arg2, run_stack;

  app.add_option("--atoms", atoms_path,
                 "file of atom names to preload into the coding registry");

  auto* compile =
      app.add_subcommand("compile", "lambda notation to combinators");
  compile->add_option("file", file, "input file (default stdin)");

  auto* run = app.add_subcommand("run", "execute a process");
  run->add_option("--fuel", fuel, "step budget")->capture_default_str();
  run->add_flag("--trace", trace, "print every machine state");
  run->add_option("file", file, "input file (default stdin)");

  auto* cexpr = app.add_subcommand("cexpr", "condition rewrites");
  auto* derive = cexpr->add_subcommand("derive", "derive a rewrite t => u");
  derive->add_option("from", arg1, "source wedge term")->required();
  derive->add_option("to", arg2, "target wedge term")->required();
  auto* apply = cexpr->add_subcommand("apply", "apply a rewrite sequence");
  apply->add_option("seq", arg1, "primitive sequence")->required();
  apply->add_option("wedge", arg2, "wedge term")->required();
  cexpr->require_subcommand(1);

  auto* star = app.add_subcommand("star", "condition-threading translation");
  star->add_option("file", file, "input file (default stdin)");

  auto* lib = app.add_subcommand("lib", "the term catalogue");
  auto* lib_list = lib->add_subcommand("list", "list entries");
  auto* lib_emit = lib->add_subcommand("emit", "print one term");
  lib_emit->add_option("name", arg1, "entry name")->required();
  auto* lib_test = lib->add_subcommand("test", "run an entry's contract");
  lib_test->add_option("name", arg1, "entry name")->required();
  lib->require_subcommand(1);

  auto* prove = app.add_subcommand("prove", "check a derivation script");
  prove->add_option("file", file, "script file (default stdin)");
  prove->add_option("--run", run_stack, "run the program on this stack");
  prove->add_option("--fuel", fuel, "step budget")->capture_default_str();

  auto* code = app.add_subcommand("code", "numeric code of a stack");
  code->add_option("stack", arg1, "stack literal")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    load_atoms(atoms_path);
    if (*compile) return cmd_compile(read_input(file));
    if (*run) return cmd_run(read_input(file), fuel, trace);
    if (*cexpr) {
      if (*derive) {
        kam::CExpr g =
            kam::derive_to(kam::parse_wedge(arg1), kam::parse_wedge(arg2));
        std::cout << kam::to_string(g) << "\n";
        return 0;
      }
      if (*apply) {
        kam::Wedge w =
            kam::apply_cexpr(kam::parse_cexpr(arg1), kam::parse_wedge(arg2));
        std::cout << kam::to_string(w) << "\n";
        return 0;
      }
    }
    if (*star) {
      kam::ForcedTerm f = kam::star_compile(kam::parse_term(read_input(file)));
      std::cout << kam::to_string(f.star) << "\n";
      std::cout << kam::to_string(f.one) << "\n";
      return 0;
    }
    if (*lib) {
      if (*lib_list) return cmd_lib_list();
      if (*lib_emit) return cmd_lib_emit(arg1);
      if (*lib_test) return cmd_lib_test(arg1);
    }
    if (*prove) return cmd_prove(read_input(file), run_stack, fuel);
    if (*code) {
      kam::Stack s = kam::parse_stack(arg1);
      std::cout << kam::code_stack(s).str() << "\n";
      return 0;
    }
  } catch (const kam::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitData;
  } catch (const kam::CheckError& e) {
    std::cerr << "check error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
