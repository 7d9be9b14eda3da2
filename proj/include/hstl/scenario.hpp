#pragma once

// JSON forms of traces and scenarios, and the built-in scenario families.
//
// Trace file:
//   {"grid": {"rows": R, "cols": C}, "propositions": [...], "nominals": [...],
//    "states": [{"props": {"h": [[i, j], ...]}, "noms": {"z0": [i, j]}}, ...]}
//
// Scenario file:
//   {"name", "description"?, "grid": {"rows", "cols"}, "propositions",
//    "nominals", "assumptions": [{"kind": ..., ...}], "specification":
//    [formula, ...], "max_trace_length": N}
// with assumption kinds
//   global   {"nominal", "formula"}
//   static   {"nominal"}
//   relative {"dependee", "dependent", "path": [dir, ...]}
//   fixed    {"nominal", "moves": [[dir, ...], ...]}   [] stays put
//   initial  {"formula"}
//   raw      {"formula"}

#include "hstl/checkers.hpp"
#include "hstl/core.hpp"
#include "hstl/error.hpp"
#include "hstl/formula.hpp"
#include "hstl/idioms.hpp"
#include "hstl/parser.hpp"

#include <json.hpp>

#include <fstream>
#include <functional>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace hstl {

using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// Traces

inline Json trace_to_json(const Trace& t) {
  const GridGraph& g = t.grid();
  const Signature& sig = t.signature();
  auto cell = [&g](int idx) {
    const Position p = g.position(idx);
    return Json::array({p.row, p.col});
  };
  Json states = Json::array();
  for (const auto& s : t.states()) {
    Json props = Json::object();
    for (std::size_t i = 0; i < sig.props().size(); ++i) {
      Json cells = Json::array();
      for (int idx : s->prop(static_cast<int>(i)).indices()) cells.push_back(cell(idx));
      props[sig.props()[i]] = cells;
    }
    Json noms = Json::object();
    for (std::size_t i = 0; i < sig.nominals().size(); ++i) {
      noms[sig.nominals()[i]] = cell(s->nominal(static_cast<int>(i)));
    }
    states.push_back({{"props", props}, {"noms", noms}});
  }
  return {{"grid", {{"rows", g.rows()}, {"cols", g.cols()}}},
          {"propositions", sig.props()},
          {"nominals", sig.nominals()},
          {"states", states}};
}

namespace detail {

template <typename T>
T json_field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError(where + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ValidationError(where + ": field '" + key + "' has the wrong type");
  }
}

inline Position json_position(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
    throw ValidationError(where + ": expected a [row, col] pair");
  }
  return {j[0].get<int>(), j[1].get<int>()};
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

}  // namespace detail

inline Trace trace_from_json(const Json& j) {
  const Json grid = detail::json_field<Json>(j, "grid", "trace");
  const GridGraph g(detail::json_field<int>(grid, "rows", "trace.grid"),
                    detail::json_field<int>(grid, "cols", "trace.grid"));
  auto sig = std::make_shared<const Signature>(detail::json_field<std::vector<std::string>>(j, "propositions", "trace"),
                                               detail::json_field<std::vector<std::string>>(j, "nominals", "trace"));
  const Json states = detail::json_field<Json>(j, "states", "trace");
  if (!states.is_array()) throw ValidationError("trace: 'states' must be a list");
  std::vector<StatePtr> out;
  for (std::size_t k = 0; k < states.size(); ++k) {
    const std::string where = "trace.states[" + std::to_string(k) + "]";
    std::map<std::string, std::vector<Position>> props;
    std::map<std::string, Position> noms;
    const Json& s = states[k];
    if (s.contains("props")) {
      for (const auto& [name, cells] : s.at("props").items()) {
        if (!cells.is_array()) throw ValidationError(where + ".props." + name + ": expected a list of cells");
        for (const auto& c : cells) props[name].push_back(detail::json_position(c, where + ".props." + name));
      }
    }
    const Json placed = detail::json_field<Json>(s, "noms", where);
    for (const auto& [name, cell] : placed.items()) {
      noms[name] = detail::json_position(cell, where + ".noms." + name);
    }
    try {
      out.push_back(std::make_shared<const State>(make_state(g, *sig, props, noms)));
    } catch (const ValidationError& e) {
      throw ValidationError(where + ": " + e.what());
    }
  }
  return Trace(g, sig, std::move(out));
}

inline Trace load_trace(const std::string& path) { return trace_from_json(detail::read_json_file(path)); }

inline void save_trace(const Trace& t, const std::string& path) {
  detail::write_text_file(path, trace_to_json(t).dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Scenarios

struct Scenario {
  std::string name;
  std::string description;
  int rows = 1;
  int cols = 1;
  std::vector<std::string> props;
  std::vector<std::string> noms;
  AssumptionSet assumptions;
  std::vector<Formula> specification;  // conjoined
  int max_trace_length = 1;

  GridGraph grid() const { return GridGraph(rows, cols); }
  Formula spec() const { return conjunction(specification); }

  CheckerConfig config(Algorithm algorithm, std::optional<Clock::time_point> deadline = std::nullopt) const {
    CheckerConfig cfg;
    cfg.grid = grid();
    cfg.props = props;
    cfg.noms = noms;
    cfg.assumptions = assumptions;
    cfg.spec = spec();
    cfg.max_len = max_trace_length;
    cfg.algorithm = algorithm;
    cfg.deadline = deadline;
    return cfg;
  }

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Throws unless the scenario is usable: positive grid and length, declared
/// names only, consistent motion roles.
inline void check_scenario(const Scenario& s) {
  const GridGraph g = s.grid();
  if (s.max_trace_length < 1) throw ValidationError(s.name + ": max_trace_length must be at least 1");
  const Signature sig(s.props, s.noms);
  for (const auto& p : s.props) detail::check_declared_name(p);
  for (const auto& n : s.noms) detail::check_declared_name(n);
  validate(s.assumptions, s.noms);
  std::vector<Formula> all = s.specification;
  for (const auto& a : s.assumptions.items()) all.push_back(lower(a));
  auto shared = std::make_shared<const Signature>(sig);
  for (const auto& f : all) (void)Evaluator(g, shared, f);
}

namespace detail {

inline Json path_to_json(const Path& p) {
  Json out = Json::array();
  for (Direction d : p) out.push_back(std::string(to_string(d)));
  return out;
}

inline Path path_from_json(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ValidationError(where + ": expected a list of directions");
  Path out;
  for (const auto& d : j) {
    auto dir = d.is_string() ? direction_from_string(d.get<std::string>()) : std::nullopt;
    if (!dir) throw ValidationError(where + ": unknown direction " + d.dump());
    out.push_back(*dir);
  }
  return out;
}

inline Json assumption_to_json(const Assumption& a) {
  Json j = {{"kind", kind_name(a)}};
  if (const auto* g = std::get_if<GlobalState>(&a)) {
    j["nominal"] = g->nominal;
    j["formula"] = render(g->body);
  } else if (const auto* s = std::get_if<StaticCar>(&a)) {
    j["nominal"] = s->nominal;
  } else if (const auto* r = std::get_if<RelativeMotion>(&a)) {
    j["dependee"] = r->dependee;
    j["dependent"] = r->dependent;
    j["path"] = path_to_json(r->path);
  } else if (const auto* f = std::get_if<FixedMotion>(&a)) {
    j["nominal"] = f->nominal;
    Json moves = Json::array();
    for (const auto& m : f->moves) moves.push_back(path_to_json(m));
    j["moves"] = moves;
  } else if (const auto* i = std::get_if<Initial>(&a)) {
    j["formula"] = render(i->formula);
  } else {
    j["formula"] = render(std::get<Raw>(a).formula);
  }
  return j;
}

inline Formula parse_at(const std::string& text, const Scenario& s, const std::string& where) {
  try {
    return parse(text, s.props, s.noms);
  } catch (const ParseError& e) {
    throw ValidationError(where + ": " + e.what() + " at offset " + std::to_string(e.offset()));
  } catch (const ValidationError& e) {
    throw ValidationError(where + ": " + e.what());
  }
}

inline Assumption assumption_from_json(const Json& j, const Scenario& s, const std::string& where) {
  const auto kind = json_field<std::string>(j, "kind", where);
  auto text = [&](const char* key) { return json_field<std::string>(j, key, where); };
  if (kind == "global") return GlobalState{text("nominal"), parse_at(text("formula"), s, where + ".formula")};
  if (kind == "static") return StaticCar{text("nominal")};
  if (kind == "relative") {
    return RelativeMotion{text("dependee"), text("dependent"),
                          path_from_json(json_field<Json>(j, "path", where), where + ".path")};
  }
  if (kind == "fixed") {
    FixedMotion f{text("nominal"), {}};
    const Json moves = json_field<Json>(j, "moves", where);
    if (!moves.is_array()) throw ValidationError(where + ".moves: expected a list of paths");
    for (std::size_t i = 0; i < moves.size(); ++i) {
      f.moves.push_back(path_from_json(moves[i], where + ".moves[" + std::to_string(i) + "]"));
    }
    return f;
  }
  if (kind == "initial") return Initial{parse_at(text("formula"), s, where + ".formula")};
  if (kind == "raw") return Raw{parse_at(text("formula"), s, where + ".formula")};
  throw ValidationError(where + ": unknown assumption kind '" + kind + "'");
}

}  // namespace detail

inline Json scenario_to_json(const Scenario& s) {
  Json assumptions = Json::array();
  for (const auto& a : s.assumptions.items()) assumptions.push_back(detail::assumption_to_json(a));
  Json spec = Json::array();
  for (const auto& f : s.specification) spec.push_back(render(f));
  Json j = {{"name", s.name}};
  if (!s.description.empty()) j["description"] = s.description;
  j["grid"] = {{"rows", s.rows}, {"cols", s.cols}};
  j["propositions"] = s.props;
  j["nominals"] = s.noms;
  j["assumptions"] = assumptions;
  j["specification"] = spec;
  j["max_trace_length"] = s.max_trace_length;
  return j;
}

inline Scenario scenario_from_json(const Json& j) {
  Scenario s;
  s.name = detail::json_field<std::string>(j, "name", "scenario");
  const std::string where = "scenario '" + s.name + "'";
  if (j.contains("description")) s.description = detail::json_field<std::string>(j, "description", where);
  const Json grid = detail::json_field<Json>(j, "grid", where);
  s.rows = detail::json_field<int>(grid, "rows", where + ".grid");
  s.cols = detail::json_field<int>(grid, "cols", where + ".grid");
  s.props = detail::json_field<std::vector<std::string>>(j, "propositions", where);
  s.noms = detail::json_field<std::vector<std::string>>(j, "nominals", where);
  s.max_trace_length = detail::json_field<int>(j, "max_trace_length", where);
  const Json assumptions = detail::json_field<Json>(j, "assumptions", where);
  if (!assumptions.is_array()) throw ValidationError(where + ": 'assumptions' must be a list");
  std::vector<Assumption> items;
  for (std::size_t i = 0; i < assumptions.size(); ++i) {
    const std::string at = where + ".assumptions[" + std::to_string(i) + "]";
    try {
      items.push_back(detail::assumption_from_json(assumptions[i], s, at));
      check_well_formed(items.back());
    } catch (const ValidationError& e) {
      const std::string msg = e.what();
      throw ValidationError(msg.starts_with(at) ? msg : at + ": " + msg);
    }
  }
  s.assumptions = AssumptionSet(std::move(items));
  const Json spec = detail::json_field<Json>(j, "specification", where);
  if (!spec.is_array()) throw ValidationError(where + ": 'specification' must be a list");
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const std::string at = where + ".specification[" + std::to_string(i) + "]";
    if (!spec[i].is_string()) throw ValidationError(at + ": expected a formula string");
    s.specification.push_back(detail::parse_at(spec[i].get<std::string>(), s, at));
  }
  try {
    check_scenario(s);
  } catch (const ValidationError& e) {
    throw ValidationError(where + ": " + e.what());
  }
  return s;
}

inline Scenario load_scenario(const std::string& path) {
  try {
    return scenario_from_json(detail::read_json_file(path));
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    throw ValidationError(msg.starts_with(path) ? msg : path + ": " + msg);
  }
}

inline void save_scenario(const Scenario& s, const std::string& path) {
  detail::write_text_file(path, scenario_to_json(s).dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Built-in scenario families.
//
// Formula text is kept as written for the original experiments. Each
// assumption is classified by hand: strings that say "stay or step forward"
// and similar become fixed motion; "always, at v, no neighbor on one side"
// becomes a global state assumption; start-of-trace constraints and the
// subject vehicle's conditional moves stay raw.

namespace builtin {

inline std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  if (parts.empty()) return {};
  return std::accumulate(std::next(parts.begin()), parts.end(), parts.front(),
                         [&sep](std::string acc, const std::string& x) { return acc + sep + x; });
}

inline Scenario make(std::string name, std::string description, int rows, int cols,
                     std::vector<std::string> props, std::vector<std::string> noms, int len) {
  Scenario s;
  s.name = std::move(name);
  s.description = std::move(description);
  s.rows = rows;
  s.cols = cols;
  s.props = std::move(props);
  s.noms = std::move(noms);
  s.max_trace_length = len;
  return s;
}

inline Formula f(const Scenario& s, const std::string& text) { return parse(text, s.props, s.noms); }

inline const char* kSvFollow = "G (@z0 ↓z2 ((! X 1) | X (@z0 ((!z1 & Back z2 ) | (z2 & Front z1) ))))";
inline const char* kNoCollision = "G(!(@z0 z1))";

}  // namespace builtin

inline Scenario left_right() {
  auto s = builtin::make("left_right", "Left and Right commute.", 3, 3, {}, {"z"}, 3);
  s.specification.push_back(builtin::f(s, "G(Left(Right(z)) <-> Right(Left(z)))"));
  check_scenario(s);
  return s;
}

inline Scenario same_name() {
  auto s = builtin::make("same_name", "Two nominals naming the same cell throughout.", 3, 3, {}, {"z", "z1"}, 3);
  s.specification.push_back(builtin::f(s, "G (@z z1)"));
  check_scenario(s);
  return s;
}

/// SV (z0) follows POV (z1) along a one-lane road of `length` cells.
inline Scenario one_lane_follow(int length, int duration = 3) {
  if (length < 1) throw ValidationError("one_lane_follow: road length must be positive");
  auto s = builtin::make("one_lane_follow(" + std::to_string(length) + ")",
                         "POV moves forward or stays (fixed motion). SV start and its conditional move are raw.",
                         length, 1, {}, {"z0", "z1"}, duration);
  s.assumptions.add(Raw{builtin::f(s, "@z0 !(Back 1)")});
  s.assumptions.add(FixedMotion{"z1", {{}, {Direction::Back}}});
  s.assumptions.add(Raw{builtin::f(s, builtin::kSvFollow)});
  s.specification.push_back(builtin::f(s, builtin::kNoCollision));
  check_scenario(s);
  return s;
}

/// SV (z0) dodges a static hazard h while POV z1 drives on its right.
inline Scenario hazard(int duration) {
  if (duration < 1) throw ValidationError("hazard: duration must be positive");
  constexpr int kLength = 2;
  constexpr int kWidth = 2;
  std::function<std::string(int, const std::string&)> fronts = [&](int i, const std::string& p) -> std::string {
    return i == 0 ? "(" + p + ")" : "(Front " + fronts(i - 1, p) + ")";
  };
  auto bfront = [&](const std::string& p) {
    std::vector<std::string> each;
    for (int i = 0; i < kLength; ++i) each.push_back("((" + fronts(i + 1, "1") + ")->(" + fronts(i + 1, p) + "))");
    return "(" + builtin::join(each, "&") + ")";
  };
  auto dfront = [&](const std::string& p) {
    std::vector<std::string> each;
    for (int i = 0; i < kLength; ++i) each.push_back(fronts(i + 1, p));
    return "(" + builtin::join(each, "|") + ")";
  };
  const std::string p1 = "(Right z1) & " + dfront("G h");
  const std::string p2 = "(@z0 ↓z2 X @z0 ((Back z2) & (G ! h)))";
  const std::string p3 = "(@z0 ↓z2 X @z0((Left z2) & " + dfront("z1") + " & " + bfront("G ! h") + "))";
  const std::string full = "@z0 ((" + p1 + ") & ((" + p2 + ") U (" + p3 + ")))";

  auto s = builtin::make("hazard(" + std::to_string(duration) + ")", "No assumptions; the whole maneuver is the specification.", kLength, kWidth,
                         {"h"}, {"z0", "z1"}, duration);
  s.specification.push_back(builtin::f(s, full));
  check_scenario(s);
  return s;
}

/// SV (z0) crosses bottom to top, POV (z1) left to right, on a size x size
/// grid for `duration` steps.
inline Scenario intersection(int size, int duration) {
  if (size < 1 || duration < 1) throw ValidationError("intersection: size and duration must be positive");
  auto s = builtin::make("intersection(" + std::to_string(size) + ")", "POV moves right every step (fixed motion). Starts and SV move are raw.",
                         size, size, {}, {"z0", "z1"}, duration);
  s.assumptions.add(Raw{builtin::f(s, "@z1 !(Left 1)")});
  s.assumptions.add(Raw{builtin::f(s, "@z0 !(Back 1)")});
  s.assumptions.add(FixedMotion{"z1", {{Direction::Left}}});
  s.assumptions.add(Raw{builtin::f(s, "G (@z0 ↓z2 ((! X 1)| X @z0 ((!z1 & Back z2) | (z2 & Front z1) )))")});
  s.specification.push_back(builtin::f(s, builtin::kNoCollision));
  check_scenario(s);
  return s;
}

inline Scenario intersection(int size) { return intersection(size, size); }

/// SV (z0) overtakes POV (z1) on a two-lane road of `length` cells.
inline Scenario passing(int duration, int length = 4) {
  if (duration < 1 || length < 1) throw ValidationError("passing: duration and road length must be positive");
  const std::string first_forward = "(@z0 ↓z2 ((! X 1) | X @z0 (Back z2)))";
  const std::string dodge_left = "(@z0 ↓z2 ((Front z1) & ((! X 1)| X (@z0 (Back (Right z2))))))";
  const std::string fast_forward = "(@z0 ↓z2 ((! X 1)| X @z0 (Back (Back z2))))";
  const std::string dodge_right = "(@z0 ↓z2 ((! X 1)| X @z0 (Back (Left z2))))";
  const std::string last_forward = "(@z0 ↓z2 ((! X 1) | X @z0 (Back z2)))";
  const std::string maneuver = "(" + first_forward + " U (" + dodge_left + " & ((! X 1) | X (" + fast_forward +
                               " & ((! X 1) | X (" + fast_forward + " U (" + dodge_right + " & ((! X 1) | X G (" +
                               last_forward + ")))))))))";

  auto s = builtin::make("passing(" + std::to_string(duration) + ")",
                         "POV keeps to the right lane (global state) and moves forward or stays (fixed motion). "
                         "SV start and maneuver are raw.",
                         length, 2, {}, {"z0", "z1"}, duration);
  s.assumptions.add(GlobalState{"z1", builtin::f(s, "!(Right 1)")});
  s.assumptions.add(Raw{builtin::f(s, "@z0 !(Right 1)")});
  s.assumptions.add(Raw{builtin::f(s, "@z0 !(Back 1)")});
  s.assumptions.add(FixedMotion{"z1", {{}, {Direction::Back}}});
  s.assumptions.add(Raw{builtin::f(s, maneuver)});
  s.specification.push_back(builtin::f(s, builtin::kNoCollision));
  check_scenario(s);
  return s;
}

/// SV (z0) joins a platoon of `size` POVs z1..z<size> driving in the right lane.
inline Scenario platoon(int size, int duration = 3, int length = 5) {
  if (size < 2) throw ValidationError("platoon: size must be at least 2");
  if (duration < 1 || length < 1) throw ValidationError("platoon: duration and road length must be positive");
  std::vector<std::string> povs;
  for (int i = 1; i <= size; ++i) povs.push_back("z" + std::to_string(i));
  std::vector<std::string> noms{"z0"};
  noms.insert(noms.end(), povs.begin(), povs.end());
  const std::string no_collide = "!(" + builtin::join(povs, "|") + ")";
  std::vector<std::string> each_front;
  for (const auto& n : povs) each_front.push_back("Front " + n);
  const std::string some_front = builtin::join(each_front, "|");
  const std::string sv_mov =
      "G(@z0 ↓z ((! X 1) | (X @z0((Back z)|((" + some_front + ")&(Right z)&(" + no_collide + "))))))";

  auto s = builtin::make("platoon(" + std::to_string(size) + ")",
                         "POVs move forward every step (fixed motion) and stay out of the left lane (global "
                         "state). SV start and move are raw.",
                         length, 2, {}, noms, duration);
  s.assumptions.add(Raw{builtin::f(s, "@z0 !(Right 1)")});
  s.assumptions.add(Raw{builtin::f(s, sv_mov)});
  for (const auto& n : povs) s.assumptions.add(FixedMotion{n, {{Direction::Back}}});
  for (const auto& n : povs) s.assumptions.add(GlobalState{n, builtin::f(s, "!(Left 1)")});
  s.specification.push_back(builtin::f(s, "G(@z0 (" + no_collide + "))"));
  check_scenario(s);
  return s;
}

/// One entry of the benchmark table.
struct BenchRow {
  int test = 0;
  Scenario scenario;
};

/// The 22 rows of the reference results table, in order.
inline std::vector<BenchRow> benchmark_rows() {
  std::vector<BenchRow> rows;
  int test = 0;
  rows.push_back({++test, left_right()});
  rows.push_back({++test, same_name()});
  for (int length : {3, 6, 9, 12, 15, 18}) rows.push_back({++test, one_lane_follow(length)});
  for (int duration : {2, 3, 4}) rows.push_back({++test, hazard(duration)});
  for (int size : {2, 3, 4}) rows.push_back({++test, intersection(size)});
  for (int duration : {2, 3, 4, 5}) rows.push_back({++test, passing(duration)});
  for (int size : {2, 3, 4, 5}) rows.push_back({++test, platoon(size)});
  return rows;
}

/// One representative of each family.
inline std::vector<Scenario> builtin_scenarios() {
  return {left_right(), same_name(), one_lane_follow(3), hazard(2), intersection(2), passing(2), platoon(2)};
}

}  // namespace hstl
