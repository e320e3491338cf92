#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "rechart/axioms.hpp"
#include "rechart/bisim.hpp"
#include "rechart/chart.hpp"
#include "rechart/errors.hpp"
#include "rechart/extract.hpp"
#include "rechart/lee.hpp"
#include "rechart/semantics.hpp"

namespace {

using namespace rechart;

// exit codes: 0 positive verdict / success, 1 negative verdict,
// 2 usage or input error, 3 resource budget exceeded
constexpr int exit_ok = 0;
constexpr int exit_negative = 1;
constexpr int exit_usage = 2;
constexpr int exit_resource = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

ExprPtr parse_arg(const std::string& text) {
  constexpr std::string_view prefix = "expr:";
  if (text.rfind(prefix, 0) == 0) return parse(text.substr(prefix.size()));
  return parse(text);
}

// InputRef: an inline expression with the `expr:` prefix, or a path to a
// chart JSON file. Charts are garbage-collected on load.
ChartDoc load_input(const std::string& ref) {
  constexpr std::string_view prefix = "expr:";
  if (ref.rfind(prefix, 0) == 0)
    return ChartDoc{gc(chart_of(parse(ref.substr(prefix.size())))), {}};
  ChartDoc doc = chart_doc_from_json(read_file(ref));
  doc.chart = gc(doc.chart);
  LevelMap kept;  // drop witness entries on transitions removed by gc
  for (const auto& [t, level] : doc.witness)
    if (doc.chart.transitions().count(t)) kept.emplace(t, level);
  doc.witness = std::move(kept);
  return doc;
}

void print_chart_text(const Chart& c) {
  std::cout << "start: " << c.start() << "\n";
  for (const auto& v : c.vertices())
    std::cout << "vertex: " << v << (c.terminates(v) ? " (terminating)" : "") << "\n";
  for (const auto& t : c.transitions())
    std::cout << "trans: " << t.from << " -" << t.label << "-> " << t.to << "\n";
}

void print_chart(const Chart& c, bool as_dot, bool as_json) {
  if (as_dot)
    std::cout << to_dot(c);
  else if (as_json)
    std::cout << to_json(c) << "\n";
  else
    print_chart_text(c);
}

std::string format_step(const Transition& t) {
  return t.from + " -" + t.label + "-> " + t.to;
}

int run(int argc, char** argv) {
  CLI::App app{"process charts of regular expressions: bisimilarity, loop elimination, "
               "expression extraction, and proof checking"};
  app.require_subcommand(1);

  std::string expr_text, input_a, input_b, letter, witness_out, witness_in, proof_file,
      axiom_name;
  bool as_dot = false, as_json = false;
  int trials = 500;
  std::uint64_t seed = 0;

  auto* cmd_parse = app.add_subcommand("parse", "parse an expression and print its canonical form");
  cmd_parse->add_option("expr", expr_text)->required();

  auto* cmd_chart = app.add_subcommand("chart", "build the chart of an expression");
  cmd_chart->add_option("expr", expr_text)->required();
  auto* chart_dot = cmd_chart->add_flag("--dot", as_dot, "DOT output");
  cmd_chart->add_flag("--json", as_json, "chart JSON output")->excludes(chart_dot);

  auto* cmd_deriv = app.add_subcommand("deriv", "partial derivatives of an expression");
  cmd_deriv->add_option("expr", expr_text)->required();
  cmd_deriv->add_option("--letter", letter, "action letter")->required();

  auto* cmd_tm = app.add_subcommand("tm", "termination predicate of an expression");
  cmd_tm->add_option("expr", expr_text)->required();

  auto* cmd_orl = app.add_subcommand("orl", "1-return-less check");
  cmd_orl->add_option("expr", expr_text)->required();

  auto* cmd_bisim = app.add_subcommand("bisim", "decide bisimilarity of two charts");
  cmd_bisim->add_option("a", input_a)->required();
  cmd_bisim->add_option("b", input_b)->required();

  auto* cmd_collapse = app.add_subcommand("collapse", "bisimulation collapse of a chart");
  cmd_collapse->add_option("a", input_a)->required();
  auto* collapse_dot = cmd_collapse->add_flag("--dot", as_dot, "DOT output");
  cmd_collapse->add_flag("--json", as_json, "chart JSON output")->excludes(collapse_dot);

  auto* cmd_lee = app.add_subcommand("lee", "decide the loop existence and elimination condition");
  cmd_lee->add_option("a", input_a)->required();
  cmd_lee->add_option("--witness-out", witness_out, "write the witness chart JSON to this file");
  cmd_lee->add_flag("--dot", as_dot, "DOT output decorated with entry levels");

  auto* cmd_extract = app.add_subcommand("extract", "extract an expression from a LEE chart");
  cmd_extract->add_option("a", input_a)->required();
  cmd_extract->add_option("--witness", witness_in,
                          "chart JSON with embedded witness (computed via lee when absent)");

  auto* cmd_expressible =
      app.add_subcommand("expressible", "expressibility modulo bisimilarity (collapse, then LEE)");
  cmd_expressible->add_option("a", input_a)->required();

  auto* cmd_proof = app.add_subcommand("check-proof", "check a derivation document");
  cmd_proof->add_option("file", proof_file)->required();

  auto* cmd_fuzz = app.add_subcommand("fuzz-axioms", "sample axiom instances and test soundness");
  cmd_fuzz->add_option("--axiom", axiom_name, "single axiom name (default: all)");
  cmd_fuzz->add_option("--n", trials, "trials per axiom")->required();
  cmd_fuzz->add_option("--seed", seed, "master seed")->required();

  auto* cmd_roundtrip =
      app.add_subcommand("roundtrip", "collapse, extract, and re-check a 1-return-less expression");
  cmd_roundtrip->add_option("expr", expr_text)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return exit_usage;
  }

  if (cmd_parse->parsed()) {
    std::cout << to_string(parse_arg(expr_text)) << "\n";
    return exit_ok;
  }

  if (cmd_chart->parsed()) {
    print_chart(chart_of(parse_arg(expr_text)), as_dot, as_json);
    return exit_ok;
  }

  if (cmd_deriv->parsed()) {
    if (!is_letter(letter)) throw FormatError("'" + letter + "' is not an action name");
    for (const auto& d : deriv(letter, parse_arg(expr_text))) std::cout << to_string(d) << "\n";
    return exit_ok;
  }

  if (cmd_tm->parsed()) {
    int value = rechart::tm(parse_arg(expr_text));
    std::cout << value << "\n";
    return value == 1 ? exit_ok : exit_negative;
  }

  if (cmd_orl->parsed()) {
    bool orl = one_return_less(parse_arg(expr_text));
    std::cout << (orl ? "true" : "false") << "\n";
    return orl ? exit_ok : exit_negative;
  }

  if (cmd_bisim->parsed()) {
    Chart a = load_input(input_a).chart;
    Chart b = load_input(input_b).chart;
    BisimResult result = bisimilar(a, b);
    std::cout << "bisimilar: " << (result.related ? "true" : "false") << "\n";
    if (result.related) {
      for (const auto& [x, y] : result.relation) std::cout << "pair: " << x << " ~ " << y << "\n";
      return exit_ok;
    }
    for (const auto& step : result.trail)
      std::cout << "move: " << (step.left_moved ? "left" : "right") << " plays '" << step.label
                << "': (" << step.left_from << ", " << step.right_from << ") -> ("
                << step.left_to << ", " << step.right_to << ")\n";
    std::cout << "mismatch: " << result.mismatch << "\n";
    return exit_negative;
  }

  if (cmd_collapse->parsed()) {
    CollapseResult result = collapse(load_input(input_a).chart);
    print_chart(result.quotient, as_dot, as_json);
    if (!as_dot && !as_json)
      for (const auto& [v, cls] : result.mapping) std::cout << "map: " << v << " -> " << cls << "\n";
    return exit_ok;
  }

  if (cmd_lee->parsed()) {
    Chart chart = load_input(input_a).chart;
    auto trace = lee_decide(chart);
    if (!trace) {
      std::cout << "lee: false\n";
      return exit_negative;
    }
    Witness witness = witness_of(chart, *trace);
    if (as_dot) {
      std::cout << to_dot(chart, witness.levels);
    } else {
      std::cout << "lee: true\n";
      int level = 0;
      for (const auto& step : *trace) {
        std::cout << "step " << ++level << ": at " << step.vertex << ", remove";
        for (const auto& t : step.entries) std::cout << " {" << format_step(t) << "}";
        std::cout << "\n";
      }
    }
    if (!witness_out.empty()) {
      std::ofstream out(witness_out, std::ios::binary);
      if (!out) throw FormatError("cannot write file '" + witness_out + "'");
      out << to_json(chart, witness.levels) << "\n";
    }
    return exit_ok;
  }

  if (cmd_extract->parsed()) {
    Chart chart = load_input(input_a).chart;
    LevelMap levels;
    if (!witness_in.empty()) {
      ChartDoc doc = chart_doc_from_json(read_file(witness_in));
      if (!(doc.chart == chart))
        throw FormatError("witness file chart differs from the input chart");
      levels = doc.witness;
    } else {
      auto trace = lee_decide(chart);
      if (!trace) {
        std::cout << "not extractable: chart does not satisfy LEE\n";
        return exit_negative;
      }
      levels = witness_of(chart, *trace).levels;
    }
    std::cout << to_string(extract(chart, levels)) << "\n";
    return exit_ok;
  }

  if (cmd_expressible->parsed()) {
    CollapseResult result = collapse(load_input(input_a).chart);
    auto trace = lee_decide(result.quotient);
    if (!trace) {
      std::cout << "expressible: false\n";
      std::cout << "reason: collapse does not satisfy LEE\n";
      return exit_negative;
    }
    Witness witness = witness_of(result.quotient, *trace);
    std::cout << "expressible: true\n";
    std::cout << "expression: " << to_string(extract(result.quotient, witness.levels)) << "\n";
    return exit_ok;
  }

  if (cmd_proof->parsed()) {
    DerivationCheck result = check_derivation(derivation_from_json(read_file(proof_file)));
    if (result.ok) {
      std::cout << "valid\n";
      return exit_ok;
    }
    std::cout << "invalid at " << result.path << ": " << result.message << "\n";
    return exit_negative;
  }

  if (cmd_fuzz->parsed()) {
    std::vector<std::string> names;
    if (!axiom_name.empty()) {
      if (!find_axiom(axiom_name)) throw FormatError("unknown axiom '" + axiom_name + "'");
      names.push_back(axiom_name);
    } else {
      for (const auto& schema : axiom_table()) names.push_back(schema.name);
    }
    bool any_failure = false;
    for (const auto& name : names) {
      FuzzReport report = fuzz_soundness(name, trials, seed);
      std::cout << name << ": " << report.trials << " trials, " << report.failures.size()
                << " failures\n";
      for (const auto& failure : report.failures) {
        std::cout << "  trial " << failure.trial << ":";
        for (const auto& [var, value] : failure.subst)
          std::cout << " " << var << ":=" << to_string(value);
        std::cout << " gives " << to_string(failure.lhs) << " != " << to_string(failure.rhs)
                  << "\n";
      }
      any_failure = any_failure || !report.failures.empty();
    }
    return any_failure ? exit_negative : exit_ok;
  }

  if (cmd_roundtrip->parsed()) {
    RoundtripReport report = roundtrip(parse_arg(expr_text));
    std::cout << "input: " << to_string(report.input) << "\n";
    std::cout << "collapse-states: " << report.collapsed.vertices().size() << "\n";
    if (report.extracted) std::cout << "extracted: " << to_string(report.extracted) << "\n";
    std::cout << "bisimilar: " << (report.bisim_ok ? "true" : "false") << "\n";
    std::cout << "one-return-less: " << (report.extracted_one_return_less ? "true" : "false")
              << "\n";
    return report.bisim_ok && report.extracted_one_return_less ? exit_ok : exit_negative;
  }

  return exit_usage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ResourceError& e) {
    std::cerr << "resource budget exceeded: " << e.what() << "\n";
    return exit_resource;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return exit_usage;
  } catch (const FormatError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  }
}
