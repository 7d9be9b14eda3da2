#include "hstl/harness.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace hstl;

namespace {

std::vector<std::string> split(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

RunReport report(Algorithm a, std::uint64_t sat, std::uint64_t traces, double secs, bool timed_out = false) {
  RunReport r;
  r.algorithm = a;
  r.sat_count = sat;
  r.trace_count = traces;
  r.wall_time = secs;
  r.timed_out = timed_out;
  return r;
}

}  // namespace

TEST(Run, CountsAndTimes) {
  const RunReport r = run(left_right(), Algorithm::Baseline, std::nullopt);
  EXPECT_EQ(r.scenario, "left_right");
  EXPECT_EQ(r.sat_count, 819u);
  EXPECT_EQ(r.trace_count, 819u);
  EXPECT_FALSE(r.timed_out);
  EXPECT_GE(r.wall_time, 0.0);
}

TEST(Run, ZeroBudgetTimesOut) {
  const RunReport r = run(same_name(), Algorithm::Baseline, 0.0);
  EXPECT_TRUE(r.timed_out);
}

TEST(Run, ForwardsSatisfyingTraces) {
  int seen = 0;
  const RunReport r = run(intersection(2), Algorithm::Motion, std::nullopt, [&seen](const Trace& t, const PositionSet& p) {
    EXPECT_EQ(t.grid(), GridGraph(2, 2));
    EXPECT_FALSE(p.empty());
    ++seen;
    return true;
  });
  EXPECT_EQ(static_cast<std::uint64_t>(seen), r.sat_count);
}

TEST(Table, EmptyTableIsTheHeader) {
  EXPECT_EQ(emit_table({}), "Test  Scenario  Noms  Grid  Len  #Sat  #Trace1  #Trace2  #Trace3  Time1  Time2  Time3\n");
  EXPECT_EQ(emit_csv({}), "Test,Scenario,Noms,Grid,Len,#Sat,#Trace1,#Trace2,#Trace3,Time1,Time2,Time3\n");
}

TEST(Table, IntersectionRowCounts) {
  const auto rows = benchmark_rows();
  const BenchRow& b = rows[11];
  TableRow row = TableRow::for_scenario(b.test, b.scenario);
  for (std::size_t i = 0; i < kAlgorithms.size(); ++i) row.runs[i] = run(b.scenario, kAlgorithms[i], 60.0);
  const std::string text = emit_table({row});
  const auto lines = split(text.substr(text.find('\n') + 1));
  ASSERT_EQ(lines.size(), 12u) << text;
  EXPECT_EQ(lines[0], "12");
  EXPECT_EQ(lines[1], "intersection(2)");
  EXPECT_EQ(lines[2], "2");
  EXPECT_EQ(lines[3], "(2,2)");
  EXPECT_EQ(lines[4], "2");
  EXPECT_EQ((std::vector<std::string>(lines.begin() + 5, lines.begin() + 9)),
            (std::vector<std::string>{"6", "272", "156", "48"}));
}

TEST(Table, TimedOutRunsShowDashes) {
  TableRow row{19, "platoon(2)", 3, 5, 2, 3, {}};
  row.runs[0] = report(Algorithm::Baseline, 17, 123456, 600.0, true);
  row.runs[2] = report(Algorithm::Motion, 260, 10850, 0.05);
  const auto cells = split(emit_table({row}).substr(emit_table({row}).find('\n') + 1));
  EXPECT_EQ(cells, (std::vector<std::string>{"19", "platoon(2)", "3", "(5,2)", "3", "260", "-", "-", "10850", "-", "-",
                                             "0.05"}));
}

TEST(Table, CsvIsDeterministicAndQuoted) {
  TableRow row{7, "odd, \"name\"", 2, 3, 1, 3, {}};
  row.runs[0] = report(Algorithm::Baseline, 9, 819, 0.0125);
  row.runs[1] = report(Algorithm::Optimized, 9, 258, 1.5);
  row.runs[2] = report(Algorithm::Motion, 9, 270, 123.456);
  const std::string want =
      "Test,Scenario,Noms,Grid,Len,#Sat,#Trace1,#Trace2,#Trace3,Time1,Time2,Time3\n"
      "7,\"odd, \"\"name\"\"\",2,\"(3,1)\",3,9,819,258,270,0.0125,1.5,123\n";
  EXPECT_EQ(emit_csv({row}), want);
  EXPECT_EQ(emit_csv({row}), want);
}

TEST(Table, ColumnsAreRightAligned) {
  TableRow a{1, "x", 1, 3, 3, 3, {}};
  TableRow b{22, "longer_name", 6, 5, 2, 3, {}};
  const std::string text = emit_table({a, b});
  std::istringstream in(text);
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0].size(), lines[1].size());
  EXPECT_EQ(lines[1].size(), lines[2].size());
  EXPECT_EQ(lines[1].substr(0, 4), "   1");
  EXPECT_EQ(lines[2].substr(0, 4), "  22");
}

TEST(RenderTrace, Golden) {
  const GridGraph g(2, 2);
  const Signature sig({"h"}, {"a", "b"});
  const Trace t(g, sig,
                {make_state(g, sig, {{"h", {{2, 2}}}}, {{"a", {1, 1}}, {"b", {1, 1}}}),
                 make_state(g, sig, {}, {{"a", {2, 1}}, {"b", {1, 2}}})});
  EXPECT_EQ(render_trace(g, t),
            "t=0\n"
            "|.  |h  |\n"
            "|a+b|.  |\n"
            "t=1\n"
            "|a  |.  |\n"
            "|.  |b  |\n");
  EXPECT_THROW(render_trace(GridGraph(3, 3), t), ValidationError);
}

TEST(Validity, TinyBoundsValiditiesHold) {
  const ValidityReport r = validity_suite(1, 1, 1);
  ASSERT_FALSE(r.results.empty());
  int valid = 0;
  for (const auto& x : r.results) {
    if (!x.expect_valid) continue;
    ++valid;
    EXPECT_TRUE(x.passed) << x.group << ": " << x.formula;
    EXPECT_GT(x.models, 0u);
  }
  EXPECT_GT(valid, 100);
}

TEST(Validity, WitnessesFalsifyTheirLaw) {
  const ValidityReport r = validity_suite(2, 1, 2);
  // A single column has no Left or Right neighbors, so only the laws that
  // do not need them find a countermodel here.
  int invalid = 0;
  for (const auto& x : r.results) {
    if (x.expect_valid || !x.witness) continue;
    ++invalid;
    EXPECT_TRUE(x.passed);
    EXPECT_FALSE(eval(x.witness->trace.grid(), x.witness->trace, x.witness->point,
                      parse(x.formula, {"q"}, {"a", "b"})))
        << x.formula;
  }
  EXPECT_GE(invalid, 6);
}

TEST(Validity, ReportFormat) {
  const std::string text = format_validity_report(validity_suite(1, 1, 1));
  EXPECT_NE(text.find("PASS valid"), std::string::npos);
  EXPECT_NE(text.find("FAIL invalid"), std::string::npos);
  EXPECT_NE(text.find("on grids up to 1x1, traces up to length 1"), std::string::npos);
}
