#pragma once

// Timed scenario runs, the results table, trace pictures and the exhaustive
// validity suite.

#include "hstl/checkers.hpp"
#include "hstl/core.hpp"
#include "hstl/evaluator.hpp"
#include "hstl/formula.hpp"
#include "hstl/parser.hpp"
#include "hstl/scenario.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace hstl {

inline constexpr double kDefaultTimeoutSeconds = 600.0;

struct RunReport {
  std::string scenario;
  Algorithm algorithm = Algorithm::Baseline;
  std::uint64_t sat_count = 0;
  std::uint64_t trace_count = 0;
  double wall_time = 0.0;  // seconds
  bool timed_out = false;  // counts are partial when set
};

/// Runs sat_traces with a wall-clock budget. `on_sat` sees every satisfying
/// trace; it may be empty.
inline RunReport run(const Scenario& s, Algorithm algorithm, std::optional<double> timeout_seconds,
                     const SatSink& on_sat = {}) {
  const auto start = Clock::now();
  std::optional<Clock::time_point> deadline;
  if (timeout_seconds) {
    deadline = start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(*timeout_seconds));
  }
  const CheckResult r = sat_traces(s.config(algorithm, deadline), [&](const Trace& t, const PositionSet& p) {
    return on_sat ? on_sat(t, p) : true;
  });
  RunReport out;
  out.scenario = s.name;
  out.algorithm = algorithm;
  out.sat_count = r.traces_satisfying;
  out.trace_count = r.traces_generated;
  out.wall_time = std::chrono::duration<double>(Clock::now() - start).count();
  out.timed_out = r.timed_out;
  return out;
}

// ---------------------------------------------------------------------------
// Results table

inline constexpr std::array<Algorithm, 3> kAlgorithms = {Algorithm::Baseline, Algorithm::Optimized,
                                                          Algorithm::Motion};

struct TableRow {
  int test = 0;
  std::string scenario;
  int noms = 0;
  int rows = 0;
  int cols = 0;
  int len = 0;
  std::array<std::optional<RunReport>, 3> runs;  // indexed like kAlgorithms

  static TableRow for_scenario(int test, const Scenario& s) {
    return {test, s.name, static_cast<int>(s.noms.size()), s.rows, s.cols, s.max_trace_length, {}};
  }
};

namespace detail {

inline std::string format_seconds(double secs) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", secs);
  return buf;
}

inline std::vector<std::string> table_header() {
  return {"Test", "Scenario", "Noms", "Grid", "Len", "#Sat", "#Trace1", "#Trace2", "#Trace3", "Time1", "Time2", "Time3"};
}

inline std::vector<std::string> table_cells(const TableRow& row) {
  std::string sat = "-";
  for (const auto& r : row.runs) {
    if (r && !r->timed_out) {
      sat = std::to_string(r->sat_count);
      break;
    }
  }
  std::vector<std::string> cells = {std::to_string(row.test),
                                    row.scenario,
                                    std::to_string(row.noms),
                                    "(" + std::to_string(row.rows) + "," + std::to_string(row.cols) + ")",
                                    std::to_string(row.len),
                                    sat};
  for (const auto& r : row.runs) cells.push_back(r && !r->timed_out ? std::to_string(r->trace_count) : "-");
  for (const auto& r : row.runs) cells.push_back(r && !r->timed_out ? format_seconds(r->wall_time) : "-");
  return cells;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

/// Aligned plain-text table. Cells of timed-out or skipped runs show "-".
inline std::string emit_table(const std::vector<TableRow>& rows) {
  std::vector<std::vector<std::string>> lines{detail::table_header()};
  for (const auto& r : rows) lines.push_back(detail::table_cells(r));
  std::vector<std::size_t> width(lines.front().size(), 0);
  for (const auto& l : lines) {
    for (std::size_t i = 0; i < l.size(); ++i) width[i] = std::max(width[i], l[i].size());
  }
  std::string out;
  for (const auto& l : lines) {
    std::string line;
    for (std::size_t i = 0; i < l.size(); ++i) {
      if (i) line += "  ";
      line += std::string(width[i] - l[i].size(), ' ') + l[i];
    }
    out += line + "\n";
  }
  return out;
}

inline std::string emit_csv(const std::vector<TableRow>& rows) {
  std::vector<std::vector<std::string>> lines{detail::table_header()};
  for (const auto& r : rows) lines.push_back(detail::table_cells(r));
  std::string out;
  for (const auto& l : lines) {
    for (std::size_t i = 0; i < l.size(); ++i) {
      if (i) out += ",";
      out += detail::csv_field(l[i]);
    }
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Trace pictures

/// One grid per step with the highest row on top, so Front points up. A cell
/// lists the nominals placed there, then the propositions holding there,
/// joined by '+'; empty cells show '.'.
inline std::string render_trace(const GridGraph& g, const Trace& t) {
  if (!(g == t.grid())) throw ValidationError("trace was built for a different grid");
  const Signature& sig = t.signature();
  std::vector<std::vector<std::string>> frames;
  std::size_t width = 1;
  for (const auto& s : t.states()) {
    std::vector<std::string> cells(static_cast<std::size_t>(g.size()));
    auto add = [&cells](int idx, const std::string& name) {
      auto& c = cells[static_cast<std::size_t>(idx)];
      c += c.empty() ? name : "+" + name;
    };
    for (std::size_t i = 0; i < sig.nominals().size(); ++i) add(s->nominal(static_cast<int>(i)), sig.nominals()[i]);
    for (std::size_t i = 0; i < sig.props().size(); ++i) {
      for (int idx : s->prop(static_cast<int>(i)).indices()) add(idx, sig.props()[i]);
    }
    for (auto& c : cells) {
      if (c.empty()) c = ".";
      width = std::max(width, c.size());
    }
    frames.push_back(std::move(cells));
  }
  std::string out;
  for (std::size_t k = 0; k < frames.size(); ++k) {
    out += "t=" + std::to_string(k) + "\n";
    for (int row = g.rows(); row >= 1; --row) {
      std::string line;
      for (int col = 1; col <= g.cols(); ++col) {
        const auto& c = frames[k][static_cast<std::size_t>(g.index({row, col}))];
        line += "|" + c + std::string(width - c.size(), ' ');
      }
      out += line + "|\n";
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Validity suite

struct Countermodel {
  Trace trace;
  Position point;
};

struct ValidityResult {
  std::string group;
  std::string formula;
  bool expect_valid = true;
  bool passed = false;
  std::uint64_t models = 0;  // (trace, point) pairs examined
  std::optional<Countermodel> witness;
};

struct ValidityReport {
  int max_rows = 1;
  int max_cols = 1;
  int max_len = 1;
  std::vector<ValidityResult> results;

  bool all_passed() const {
    return std::all_of(results.begin(), results.end(), [](const ValidityResult& r) { return r.passed; });
  }
};

namespace detail {

struct LawInstance {
  std::string group;
  std::string text;
  bool expect_valid;
};

/// Validities and non-validities instantiated over props {q} and nominals
/// {a, b}. Schematic letters take values from a fixed pool of formulas.
inline std::vector<LawInstance> law_instances() {
  const std::vector<std::string> pool = {"q", "a", "!b", "X q", "(q U a)", "↓b F @a b", "@b Front q"};
  const std::vector<std::pair<std::string, std::string>> pairs = {
      {"q", "a"}, {"!b", "X q"}, {"a", "↓b F @a b"}, {"@b Front q", "q"}, {"(q U a)", "!q"}};
  const std::vector<std::string> dirs = {"Front", "Back", "Left", "Right"};
  const std::vector<std::string> noms = {"a", "b"};
  auto paren = [](const std::string& s) { return "(" + s + ")"; };
  std::vector<LawInstance> out;
  auto valid = [&out](const std::string& group, const std::string& text) { out.push_back({group, text, true}); };
  auto invalid = [&out](const std::string& group, const std::string& text) { out.push_back({group, text, false}); };

  for (const auto& p : pool) {
    const auto f = paren(p);
    valid("orthogonal moves commute", "Front Right " + f + " <-> Right Front " + f);
    valid("orthogonal moves commute", "Front Left " + f + " <-> Left Front " + f);
    valid("orthogonal moves commute", "Back Right " + f + " <-> Right Back " + f);
    valid("orthogonal moves commute", "Back Left " + f + " <-> Left Back " + f);
    valid("unit square loops", "Front Right Back Left " + f + " -> " + f);
    valid("unit square loops", "Right Front Left Back " + f + " -> " + f);
    valid("unit square loops", "Front Left Back Right " + f + " -> " + f);
    valid("unit square loops", "Back Right Front Left " + f + " -> " + f);
    for (const auto& d : dirs) {
      valid("temporal and spatial moves commute", "X " + d + " " + f + " <-> " + d + " X " + f);
      valid("temporal and spatial moves commute", "F " + d + " " + f + " <-> " + d + " F " + f);
      valid("temporal and spatial moves commute", "G " + d + " " + f + " <-> " + d + " G " + f);
    }
    valid("hybrid", "(@a b & @a " + f + ") -> @b " + f);
    for (const auto& v : noms) {
      valid("binders", "↓" + v + " " + f + " <-> ↓" + v + " @" + v + " " + f);
      valid("binders", "↓" + v + " X " + f + " <-> X ↓" + v + " " + f);
      valid("binders", "↓" + v + " F " + f + " <-> F ↓" + v + " " + f);
      valid("binders", "↓" + v + " G " + f + " <-> G ↓" + v + " " + f);
    }
  }
  for (const auto& [p, r] : pairs) {
    const auto f = paren(p);
    const auto g = paren(r);
    for (const auto& d : dirs) {
      valid("moves distribute over until", d + " (" + f + " U " + g + ") <-> ((" + d + " " + f + ") U (" + d + " " + g + "))");
    }
    for (const auto& v : noms) {
      valid("binders", "↓" + v + " (" + f + " U " + g + ") <-> ((↓" + v + " " + f + ") U (↓" + v + " " + g + "))");
    }
  }
  valid("hybrid", "↓a a");
  valid("hybrid", "@a a");
  valid("hybrid", "@a b -> @b a");

  invalid("@ is time sensitive", "@a q -> X @a q");
  invalid("@ and F do not commute", "@a F q <-> F @a q");
  for (const auto& d : dirs) {
    invalid("@ and moves do not commute", "@a " + d + " q <-> " + d + " @a q");
    invalid("binders and moves do not commute", "↓a " + d + " a <-> " + d + " ↓a a");
  }
  return out;
}

}  // namespace detail

/// Checks every law on every model with up to max_rows x max_cols cells and
/// traces of length up to max_len, over one proposition and two nominals.
/// A validity passes when no model falsifies it; a non-validity passes when
/// one does, and the first such model is kept as the witness.
inline ValidityReport validity_suite(int max_rows, int max_cols, int max_len) {
  if (max_rows < 1 || max_cols < 1 || max_len < 1) throw ValidationError("validity bounds must be at least 1");
  const std::vector<std::string> props{"q"};
  const std::vector<std::string> noms{"a", "b"};
  const auto laws = detail::law_instances();
  ValidityReport report{max_rows, max_cols, max_len, {}};
  for (const auto& law : laws) {
    ValidityResult r;
    r.group = law.group;
    r.formula = law.text;
    r.expect_valid = law.expect_valid;
    report.results.push_back(std::move(r));
  }
  for (int rows = 1; rows <= max_rows; ++rows) {
    for (int cols = 1; cols <= max_cols; ++cols) {
      CheckerConfig cfg;
      cfg.grid = GridGraph(rows, cols);
      cfg.props = props;
      cfg.noms = noms;
      cfg.max_len = max_len;
      auto sig = std::make_shared<const Signature>(props, noms);
      std::vector<Evaluator> evs;
      for (const auto& law : laws) evs.emplace_back(cfg.grid, sig, parse(law.text, props, noms));
      generate_traces_baseline(cfg, [&](const Trace& t) {
        for (std::size_t i = 0; i < laws.size(); ++i) {
          auto& res = report.results[i];
          if (res.witness) continue;
          for (int p = 0; p < cfg.grid.size(); ++p) {
            ++res.models;
            if (!evs[i].eval_unchecked(t, p)) {
              res.witness = Countermodel{t, cfg.grid.position(p)};
              break;
            }
          }
        }
        return true;
      });
    }
  }
  for (auto& r : report.results) r.passed = r.expect_valid ? !r.witness : r.witness.has_value();
  return report;
}

inline std::string format_validity_report(const ValidityReport& report) {
  std::ostringstream out;
  int failed = 0;
  for (const auto& r : report.results) {
    if (!r.passed) ++failed;
    out << (r.passed ? "PASS " : "FAIL ") << (r.expect_valid ? "valid    " : "invalid  ") << r.group << ": "
        << r.formula;
    if (r.witness) {
      out << "\n  countermodel on " << r.witness->trace.grid().rows() << "x" << r.witness->trace.grid().cols()
          << " at " << to_string(r.witness->point) << ":\n";
      std::istringstream pic(render_trace(r.witness->trace.grid(), r.witness->trace));
      for (std::string line; std::getline(pic, line);) out << "    " << line << "\n";
    } else {
      out << "  (" << r.models << " models)\n";
    }
  }
  out << report.results.size() - static_cast<std::size_t>(failed) << "/" << report.results.size()
      << " laws behave as expected on grids up to " << report.max_rows << "x" << report.max_cols
      << ", traces up to length " << report.max_len << "\n";
  return out.str();
}

}  // namespace hstl
