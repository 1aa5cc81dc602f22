// lgtrace: run one command on a problem file and emit a report.
//
// Exit status: 0 when every verdict passes (or the command was skipped),
// 2 when a verdict fails, 1 on any error.

#include "report.hpp"

#include "lgtrace/error.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#ifndef LGTRACE_VERSION
#define LGTRACE_VERSION "0.0.0"
#endif

namespace {

using namespace lgtrace;
using cli::Json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::pair<int, int> parse_window(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw CLI::ValidationError("--window", "expected lo,hi");
  try {
    const int lo = std::stoi(text.substr(0, comma));
    const int hi = std::stoi(text.substr(comma + 1));
    if (lo > hi) throw CLI::ValidationError("--window", "lo must not exceed hi");
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw CLI::ValidationError("--window", "expected two integers lo,hi");
  }
}

struct Flags {
  std::string problem;
  std::string order;
  std::string backend;
  std::string scale;
  std::optional<int> truncate;
  std::string hdf_backend;
  std::string window;
  std::string out;
  std::string format = "json";
  bool timing = false;
};

ProblemOptions flag_options(const Flags& f) {
  ProblemOptions o;
  if (!f.backend.empty()) o.backend = parse_backend(f.backend);
  if (!f.scale.empty()) o.scale = parse_rational(f.scale);
  o.truncate = f.truncate;
  if (!f.hdf_backend.empty()) o.cohomology = parse_cohomology_backend(f.hdf_backend, 0).kind;
  if (!f.window.empty()) o.window = parse_window(f.window);
  return o;
}

int run(const std::string& command, const Flags& f) {
  const auto start = std::chrono::steady_clock::now();
  Json doc;
  doc["tool"] = "lgtrace";
  doc["version"] = LGTRACE_VERSION;
  doc["command"] = command;

  cli::Outcome outcome;
  if (command == "selftest") {
    doc["input"] = nullptr;
    outcome = cli::run_selftest();
  } else {
    const std::string source = read_file(f.problem);
    doc["input"] = {{"sha256", cli::sha256_hex(source)}};
    ProblemSpec spec = parse_problem(source);
    if (!f.order.empty()) {
      if (!spec.ring) throw SemanticError("--order given but the problem declares no ring");
      spec.ring->order = parse_order(f.order);
      // Reparse so every polynomial is rebuilt in the new ring.
      spec = parse_problem(to_text(spec));
    }
    const cli::Settings s = cli::resolve(spec.options, flag_options(f));
    doc["settings"] = cli::to_json(s);
    if (spec.ring) doc["settings"]["order"] = to_string(spec.ring->order);
    if (command == "bulk") outcome = cli::run_bulk(spec, s);
    else if (command == "koszul") outcome = cli::run_koszul(spec, s);
    else if (command == "boundary") outcome = cli::run_boundary(spec, s);
    else if (command == "spectral") outcome = cli::run_spectral(spec, s);
    else outcome = cli::run_category(spec, s);
  }
  doc["result"] = outcome.result;
  doc["verdict"] = cli::to_string(outcome.verdict);
  if (!outcome.reason.empty()) doc["reason"] = outcome.reason;
  if (f.timing) {
    const std::chrono::duration<double, std::milli> ms = std::chrono::steady_clock::now() - start;
    doc["timing"] = {{"milliseconds", ms.count()}};
  }

  const std::string body = f.format == "csv" ? cli::render_csv(doc) : doc.dump(2) + "\n";
  if (f.out.empty()) {
    std::cout << body;
  } else {
    std::ofstream out(f.out, std::ios::binary);
    if (!(out << body)) throw std::runtime_error("cannot write '" + f.out + "'");
  }
  return outcome.verdict == cli::Verdict::fail ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact Landau-Ginzburg bulk and boundary computations", "lgtrace"};
  app.set_version_flag("--version", std::string(LGTRACE_VERSION));
  app.require_subcommand(1);
  Flags f;
  app.add_option("--order", f.order, "Monomial order")->check(CLI::IsMember({"lex", "grlex", "degrevlex"}));
  app.add_option("--backend", f.backend, "Bulk trace backend")->check(CLI::IsMember({"residue", "socle"}));
  app.add_option("--scale", f.scale, "Volume scale c, an exact rational p/q");
  app.add_option("--truncate", f.truncate, "Degree bound for truncated computations")->check(CLI::NonNegativeNumber);
  app.add_option("--hdf-backend", f.hdf_backend, "Cohomology backend for Hom complexes")
      ->check(CLI::IsMember({"snf", "truncate"}));
  app.add_option("--window", f.window, "Total degrees reported by spectral, as lo,hi");
  app.add_option("--out", f.out, "Write the report here instead of standard output");
  app.add_option("--format", f.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--timing", f.timing, "Add wall-clock timing to the report");

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"bulk", "Milnor algebra, bulk trace and its Gram matrix"},
      {"koszul", "Truncated Koszul cohomology"},
      {"boundary", "Hom cohomology and boundary Gram matrices of the listed factorizations"},
      {"spectral", "Spectral sequence of the declared double complex"},
      {"category", "Cohomology category, Serre functor and round trip checks"},
      {"selftest", "Built-in invariant battery"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    if (name != "selftest") sub->add_option("problem", f.problem, "Problem file")->required();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, f);
  } catch (const std::exception& e) {
    std::cerr << "lgtrace " << command << ": " << e.what() << "\n";
    return 1;
  }
}
