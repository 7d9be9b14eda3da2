// Command-line front end: check, eval, bench, render, validities.

#include "hstl/harness.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace {

using namespace hstl;

std::pair<int, int> parse_pair(const std::string& text, char sep, const char* what) {
  std::istringstream in(text);
  int a = 0;
  int b = 0;
  char c = 0;
  if (!(in >> a >> c >> b) || c != sep || !in.eof()) {
    throw ValidationError(std::string("malformed ") + what + " '" + text + "'");
  }
  return {a, b};
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

std::vector<int> parse_tests(const std::string& text) {
  std::vector<int> out;
  std::istringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError("malformed test number '" + item + "'");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bounded model checker for hybrid spatiotemporal logic on grids"};
  app.require_subcommand(1);

  // check
  auto* check = app.add_subcommand("check", "Find the traces of a scenario that satisfy its specification");
  std::string scenario_path;
  std::string algorithm_name = "motion";
  std::optional<int> max_len;
  double timeout = kDefaultTimeoutSeconds;
  std::string emit = "table";
  std::string out_path;
  check->add_option("--scenario", scenario_path, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  check->add_option("--algorithm", algorithm_name, "baseline, optimized or motion")
      ->check(CLI::IsMember({"baseline", "optimized", "motion"}));
  check->add_option("--max-len", max_len, "Override the scenario's maximum trace length")->check(CLI::PositiveNumber);
  check->add_option("--timeout", timeout, "Wall-clock budget in seconds")->check(CLI::NonNegativeNumber);
  check->add_option("--emit", emit, "table, csv or traces")->check(CLI::IsMember({"table", "csv", "traces"}));
  check->add_option("--out", out_path, "Write output here instead of stdout");

  // eval
  auto* ev = app.add_subcommand("eval", "Evaluate a formula on a trace at one point (exit 0 true, 1 false)");
  std::string grid_text;
  std::string formula_text;
  std::string trace_path;
  std::string point_text;
  ev->add_option("--grid", grid_text, "Grid as RxC")->required();
  ev->add_option("--formula", formula_text, "Formula text")->required();
  ev->add_option("--trace", trace_path, "Trace JSON file")->required()->check(CLI::ExistingFile);
  ev->add_option("--point", point_text, "Evaluation point as I,J")->required();

  // bench
  auto* bench = app.add_subcommand("bench", "Run the benchmark table");
  std::string suite = "builtin";
  std::string tests_text;
  double bench_timeout = kDefaultTimeoutSeconds;
  std::string csv_path;
  bench->add_option("--suite", suite, "Benchmark suite")->check(CLI::IsMember({"builtin"}));
  bench->add_option("--tests", tests_text, "Comma-separated table rows (default: all)");
  bench->add_option("--timeout", bench_timeout, "Per-run wall-clock budget in seconds")->check(CLI::NonNegativeNumber);
  bench->add_option("--out", csv_path, "Also write the table as CSV here");

  // render
  auto* render_cmd = app.add_subcommand("render", "Draw a trace, one grid per step");
  std::string render_path;
  render_cmd->add_option("--trace", render_path, "Trace JSON file")->required()->check(CLI::ExistingFile);

  // validities
  auto* validities = app.add_subcommand("validities", "Exhaustively check the validity suite");
  int max_rows = 2;
  int max_cols = 2;
  int validity_len = 2;
  validities->add_option("--max-rows", max_rows)->check(CLI::PositiveNumber);
  validities->add_option("--max-cols", max_cols)->check(CLI::PositiveNumber);
  validities->add_option("--max-len", validity_len)->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) {
      Scenario s = load_scenario(scenario_path);
      if (max_len) s.max_trace_length = *max_len;
      const Algorithm algorithm = *algorithm_from_string(algorithm_name);
      Json traces = Json::array();
      const RunReport r = run(s, algorithm, timeout, [&](const Trace& t, const PositionSet& points) {
        if (emit == "traces") {
          Json pts = Json::array();
          for (int idx : points.indices()) {
            const Position p = t.grid().position(idx);
            pts.push_back({p.row, p.col});
          }
          traces.push_back({{"trace", trace_to_json(t)}, {"points", pts}});
        }
        return true;
      });
      TableRow row = TableRow::for_scenario(1, s);
      row.runs[static_cast<std::size_t>(algorithm)] = r;
      if (emit == "traces") {
        write_output(traces.dump(2) + "\n", out_path);
      } else {
        write_output(emit == "csv" ? emit_csv({row}) : emit_table({row}), out_path);
      }
      if (r.timed_out) std::cerr << "timed out after " << r.wall_time << " s; counts are partial\n";
      return r.timed_out ? 3 : 0;
    }

    if (ev->parsed()) {
      try {
        const auto [rows, cols] = parse_pair(grid_text, 'x', "grid");
        const GridGraph g(rows, cols);
        const Trace t = load_trace(trace_path);
        if (!(t.grid() == g)) throw ValidationError("trace grid differs from --grid");
        const auto [i, j] = parse_pair(point_text, ',', "point");
        const Formula f = parse(formula_text, t.signature().props(), t.signature().nominals());
        const bool holds = eval(g, t, Position{i, j}, f);
        std::cout << (holds ? "true" : "false") << "\n";
        return holds ? 0 : 1;
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
      }
    }

    if (bench->parsed()) {
      const auto all = benchmark_rows();
      std::vector<int> wanted;
      if (tests_text.empty()) {
        for (const auto& r : all) wanted.push_back(r.test);
      } else {
        wanted = parse_tests(tests_text);
      }
      std::vector<TableRow> rows;
      for (int test : wanted) {
        if (test < 1 || test > static_cast<int>(all.size())) {
          throw ValidationError("no benchmark row " + std::to_string(test));
        }
        const auto& b = all[static_cast<std::size_t>(test - 1)];
        TableRow row = TableRow::for_scenario(b.test, b.scenario);
        for (std::size_t a = 0; a < kAlgorithms.size(); ++a) {
          row.runs[a] = run(b.scenario, kAlgorithms[a], bench_timeout);
          std::cerr << "test " << test << " " << to_string(kAlgorithms[a]) << ": "
                    << (row.runs[a]->timed_out ? "timeout" : std::to_string(row.runs[a]->trace_count) + " traces")
                    << "\n";
        }
        rows.push_back(std::move(row));
      }
      std::cout << emit_table(rows);
      if (!csv_path.empty()) write_output(emit_csv(rows), csv_path);
      return 0;
    }

    if (render_cmd->parsed()) {
      const Trace t = load_trace(render_path);
      std::cout << render_trace(t.grid(), t);
      return 0;
    }

    if (validities->parsed()) {
      const ValidityReport report = validity_suite(max_rows, max_cols, validity_len);
      std::cout << format_validity_report(report);
      return report.all_passed() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
