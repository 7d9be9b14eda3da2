#pragma once

// Bounded trace generation and satisfaction search.
//
// Three generators enumerate candidate traces of length 1..n:
//   baseline   every state sequence;
//   optimized  sequences over the states allowed by per-state constraints
//              (global state assumptions plus G-conjuncts of the spec and raw
//              assumptions whose body is a per-state formula), with initial
//              assumptions applied to the first state;
//   motion     depth-first extension where each nominal only moves as its
//              static / fixed / relative motion role allows.
//
// `sat_traces` checks each candidate against the spec conjoined with every
// assumption the chosen generator does not already enforce, so the set of
// satisfying traces does not depend on the algorithm.
//
// Generators push traces into a callback; returning false stops the run.

#include "hstl/core.hpp"
#include "hstl/error.hpp"
#include "hstl/evaluator.hpp"
#include "hstl/formula.hpp"
#include "hstl/idioms.hpp"

#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hstl {

enum class Algorithm { Baseline, Optimized, Motion };

constexpr std::string_view to_string(Algorithm a) noexcept {
  switch (a) {
    case Algorithm::Baseline: return "baseline";
    case Algorithm::Optimized: return "optimized";
    case Algorithm::Motion: return "motion";
  }
  return "?";
}

inline std::optional<Algorithm> algorithm_from_string(std::string_view s) noexcept {
  for (auto a : {Algorithm::Baseline, Algorithm::Optimized, Algorithm::Motion}) {
    if (to_string(a) == s) return a;
  }
  return std::nullopt;
}

using Clock = std::chrono::steady_clock;

struct CheckerConfig {
  GridGraph grid{1, 1};
  std::vector<std::string> props;
  std::vector<std::string> noms;
  AssumptionSet assumptions;
  Formula spec = Formula::top();
  int max_len = 1;
  Algorithm algorithm = Algorithm::Baseline;
  std::optional<Clock::time_point> deadline;
};

struct CheckResult {
  std::uint64_t traces_generated = 0;
  std::uint64_t traces_satisfying = 0;
  bool timed_out = false;
  bool stopped = false;  // the consumer asked to stop
};

/// Return false to stop generation.
using TraceSink = std::function<bool(const Trace&)>;
using SatSink = std::function<bool(const Trace&, const PositionSet&)>;

namespace detail {

inline std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return a > std::numeric_limits<std::uint64_t>::max() - b ? std::numeric_limits<std::uint64_t>::max() : a + b;
}

inline std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

/// Polls the clock every few hundred ticks.
class Pacer {
 public:
  explicit Pacer(std::optional<Clock::time_point> deadline) : deadline_(deadline) {}

  bool expired() {
    if (expired_) return true;
    if (!deadline_) return false;
    if (++ticks_ % 256 != 0 && ticks_ != 1) return false;
    expired_ = Clock::now() >= *deadline_;
    return expired_;
  }

  bool was_expired() const noexcept { return expired_; }

 private:
  std::optional<Clock::time_point> deadline_;
  std::uint64_t ticks_ = 0;
  bool expired_ = false;
};

/// Shared bookkeeping for one generator run.
struct Run {
  GridGraph grid;
  std::shared_ptr<const Signature> sig;
  const TraceSink& sink;
  Pacer pacer;
  CheckResult result;

  /// False when the run must end.
  bool yield(std::vector<StatePtr> states) {
    if (pacer.expired()) {
      result.timed_out = true;
      return false;
    }
    ++result.traces_generated;
    if (!sink(Trace(Trace::Unchecked{}, grid, sig, std::move(states)))) {
      result.stopped = true;
      return false;
    }
    return true;
  }

  bool tick() {
    if (pacer.expired()) {
      result.timed_out = true;
      return false;
    }
    return true;
  }
};

}  // namespace detail

/// Dense numbering of all states over a grid and signature. Proposition
/// assignments vary outermost; within one, nominal tuples run in
/// lexicographic order of row-major position indices, first nominal most
/// significant. In an assignment number, bit (slot * |Pos| + index) says
/// whether proposition `slot` holds at position `index`.
class StateSpace {
 public:
  StateSpace(const GridGraph& g, std::shared_ptr<const Signature> sig) : grid_(g), sig_(std::move(sig)) {
    const auto cells = static_cast<std::uint64_t>(g.size());
    prop_bits_ = static_cast<int>(cells * sig_->props().size());
    if (prop_bits_ > 62) throw ValidationError("too many proposition cells to enumerate states");
    nom_tuples_ = 1;
    for (std::size_t i = 0; i < sig_->nominals().size(); ++i) {
      if (nom_tuples_ > (std::uint64_t{1} << 62) / cells) throw ValidationError("too many nominal placements to enumerate states");
      nom_tuples_ *= cells;
    }
    prop_maps_ = std::uint64_t{1} << prop_bits_;
    if (nom_tuples_ > (std::uint64_t{1} << 62) >> prop_bits_) throw ValidationError("state space too large");
  }

  std::uint64_t size() const noexcept { return prop_maps_ * nom_tuples_; }
  std::uint64_t prop_maps() const noexcept { return prop_maps_; }

  std::vector<PositionSet> prop_map(std::uint64_t mask) const {
    const int cells = grid_.size();
    std::vector<PositionSet> out(sig_->props().size(), PositionSet(cells));
    for (int b = 0; b < prop_bits_; ++b) {
      if ((mask >> b) & 1U) out[static_cast<std::size_t>(b / cells)].insert(b % cells);
    }
    return out;
  }

  State state(std::uint64_t index) const {
    const std::uint64_t cells = static_cast<std::uint64_t>(grid_.size());
    std::uint64_t tuple = index % nom_tuples_;
    std::vector<int> noms(sig_->nominals().size(), 0);
    for (std::size_t i = noms.size(); i-- > 0;) {
      noms[i] = static_cast<int>(tuple % cells);
      tuple /= cells;
    }
    return State(prop_map(index / nom_tuples_), std::move(noms));
  }

 private:
  GridGraph grid_;
  std::shared_ptr<const Signature> sig_;
  int prop_bits_ = 0;
  std::uint64_t nom_tuples_ = 1;
  std::uint64_t prop_maps_ = 1;
};

/// Number of states, saturating at the uint64 maximum.
inline std::uint64_t count_states(const GridGraph& g, std::size_t props, std::size_t noms) {
  const auto cells = static_cast<std::uint64_t>(g.size());
  std::uint64_t n = 1;
  for (std::uint64_t i = 0; i < cells * props; ++i) n = detail::sat_mul(n, 2);
  for (std::size_t i = 0; i < noms; ++i) n = detail::sat_mul(n, cells);
  return n;
}

/// Every state in StateSpace order. Return false from `sink` to stop.
inline void enumerate_states(const GridGraph& g, const std::vector<std::string>& props,
                             const std::vector<std::string>& noms, const std::function<bool(const State&)>& sink) {
  StateSpace space(g, std::make_shared<const Signature>(props, noms));
  for (std::uint64_t i = 0; i < space.size(); ++i) {
    if (!sink(space.state(i))) return;
  }
}

inline std::vector<State> all_states(const GridGraph& g, const std::vector<std::string>& props,
                                     const std::vector<std::string>& noms) {
  std::vector<State> out;
  enumerate_states(g, props, noms, [&out](const State& s) {
    out.push_back(s);
    return true;
  });
  return out;
}

/// Tests single states against formulas whose truth does not depend on the
/// viewpoint, so one evaluation point stands for all of them.
class StateFilter {
 public:
  StateFilter(const GridGraph& g, std::shared_ptr<const Signature> sig, const std::vector<Formula>& formulas)
      : grid_(g), sig_(std::move(sig)) {
    for (const auto& f : formulas) evaluators_.emplace_back(grid_, sig_, f);
  }

  bool empty() const noexcept { return evaluators_.empty(); }

  bool accepts(const StatePtr& s) {
    if (evaluators_.empty()) return true;
    const Trace t(Trace::Unchecked{}, grid_, sig_, {s});
    for (auto& ev : evaluators_) {
      if (!ev.eval_unchecked(t, 0)) return false;
    }
    return true;
  }

 private:
  GridGraph grid_;
  std::shared_ptr<const Signature> sig_;
  std::vector<Evaluator> evaluators_;
};

namespace detail {

inline std::vector<Formula> lowered_globals(const AssumptionSet& a) {
  std::vector<Formula> out;
  for (const auto& g : a.globals()) out.push_back(Formula::at(g.nominal, g.body));
  return out;
}

inline std::vector<Formula> initial_formulas(const AssumptionSet& a) {
  std::vector<Formula> out;
  for (const auto& i : a.initials()) out.push_back(i.formula);
  return out;
}

inline void split_conjuncts(const Formula& f, std::vector<Formula>& out) {
  if (f.op() == Op::And) {
    split_conjuncts(f.child(0), out);
    split_conjuncts(f.child(1), out);
  } else {
    out.push_back(f);
  }
}

}  // namespace detail

/// Per-state constraints hidden in a formula: bodies of top-level conjuncts
/// "G psi" where psi is a per-state formula.
inline std::vector<Formula> mined_state_constraints(const Formula& f) {
  std::vector<Formula> conjuncts;
  detail::split_conjuncts(f, conjuncts);
  std::vector<Formula> out;
  for (const auto& c : conjuncts) {
    if (c.op() == Op::Globally && is_per_state(c.child())) out.push_back(c.child());
  }
  return out;
}

/// Positions where v can sit so that each of its dependents stays on the grid.
inline PositionSet valid_dependee_positions(const GridGraph& g, const std::vector<RelativeMotion>& rel,
                                            const std::string& v) {
  PositionSet out(g.size());
  for (int p = 0; p < g.size(); ++p) {
    bool ok = true;
    for (const auto& r : rel) {
      if (r.dependee == v && g.apply_path_index(p, r.path) < 0) ok = false;
    }
    if (ok) out.insert(p);
  }
  return out;
}

/// Proposition maps a single state may carry. A global state assumption
/// whose body names no nominal other than through its own anchor rules out
/// a map when no placement of the anchor satisfies it.
inline std::vector<std::vector<PositionSet>> valid_prop_assignments(const GridGraph& g,
                                                                    const std::vector<GlobalState>& globals,
                                                                    const std::vector<std::string>& props) {
  // Only the anchor is placed, so give each assumption a one-nominal signature.
  struct Check {
    std::shared_ptr<const Signature> sig;
    Evaluator ev;
  };
  std::vector<Check> checks;
  for (const auto& a : globals) {
    const Symbols syms = symbols(a.body);
    if (!syms.nominals.empty()) continue;
    auto sig = std::make_shared<const Signature>(props, std::vector<std::string>{a.nominal});
    checks.push_back({sig, Evaluator(g, sig, Formula::at(a.nominal, a.body))});
  }
  auto sig = std::make_shared<const Signature>(props, std::vector<std::string>{});
  StateSpace space(g, sig);
  std::vector<std::vector<PositionSet>> out;
  for (std::uint64_t m = 0; m < space.prop_maps(); ++m) {
    auto map = space.prop_map(m);
    bool ok = true;
    for (auto& c : checks) {
      bool some = false;
      for (int q = 0; q < g.size() && !some; ++q) {
        auto s = std::make_shared<const State>(map, std::vector<int>{q});
        some = c.ev.eval_unchecked(Trace(Trace::Unchecked{}, g, c.sig, {s}), 0);
      }
      ok = ok && some;
    }
    if (ok) out.push_back(std::move(map));
  }
  return out;
}

/// Places every dependent relative to its dependee. `partial` holds a
/// position index per nominal slot; entries of dependents are overwritten.
inline State complete_state(const GridGraph& g, const Signature& sig, const std::vector<RelativeMotion>& rel,
                            std::vector<PositionSet> props, std::vector<int> partial) {
  for (const auto& r : rel) {
    const int from = partial.at(static_cast<std::size_t>(*sig.nominal_slot(r.dependee)));
    const int to = g.apply_path_index(from, r.path);
    if (to < 0) throw Error("dependent '" + r.dependent + "' pushed off the grid by '" + r.dependee + "'");
    partial.at(static_cast<std::size_t>(*sig.nominal_slot(r.dependent))) = to;
  }
  return State(std::move(props), std::move(partial));
}

/// True when every formula (global state bodies under their @, or initial
/// formulas) holds on the one-state trace [s].
inline bool check_global_assumptions(const GridGraph& g, const std::shared_ptr<const Signature>& sig,
                                     const State& s, const std::vector<Formula>& formulas) {
  const Trace t(g, sig, {std::make_shared<const State>(s)});
  for (const auto& f : formulas) {
    Evaluator ev(g, sig, f);
    for (int p = 0; p < g.size(); ++p) {
      if (!ev.eval_unchecked(t, p)) return false;
    }
  }
  return true;
}

namespace detail {

/// Everything the motion generator needs, derived once per config.
struct MotionPlan {
  struct Mover {
    int slot = 0;
    NominalRole::Kind kind = NominalRole::Kind::Free;
    std::vector<Path> inverse_moves;
    bool anchors = false;
    PositionSet anchor_ok;
  };

  std::vector<Mover> movers;  // non-dependent nominals in declaration order
  std::vector<RelativeMotion> rel;
  std::vector<std::vector<PositionSet>> prop_maps;

  MotionPlan(const GridGraph& g, const Signature& sig, const AssumptionSet& a) : rel(a.relatives()) {
    const RoleMap roles = validate(a, sig.nominals());
    prop_maps = valid_prop_assignments(g, a.globals(), sig.props());
    for (std::size_t i = 0; i < sig.nominals().size(); ++i) {
      const auto& name = sig.nominals()[i];
      const NominalRole& role = roles.at(name);
      if (role.kind == NominalRole::Kind::Dependent) continue;
      Mover m;
      m.slot = static_cast<int>(i);
      m.kind = role.kind;
      for (const auto& path : role.moves) m.inverse_moves.push_back(inverse_path(path));
      m.anchors = !role.dependents.empty();
      m.anchor_ok = valid_dependee_positions(g, rel, name);
      movers.push_back(std::move(m));
    }
  }

  /// Successor choices for one mover given its current cell (-1 at step 0).
  std::vector<int> choices(const GridGraph& g, const Mover& m, int current) const {
    std::vector<int> out;
    auto add = [&](int p) {
      if (p < 0) return;
      if (m.anchors && !m.anchor_ok.contains(p)) return;
      if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
    };
    if (current < 0 || m.kind == NominalRole::Kind::Free || m.kind == NominalRole::Kind::Dependee) {
      for (int p = 0; p < g.size(); ++p) add(p);
    } else if (m.kind == NominalRole::Kind::Static) {
      add(current);
    } else {
      for (const auto& inv : m.inverse_moves) add(g.apply_path_index(current, inv));
    }
    return out;
  }
};

/// Calls `each` on every complete state built from the movers' choices and
/// the allowed prop maps. Nominal tuples vary outermost.
inline bool for_each_successor(const GridGraph& g, const Signature& sig, const MotionPlan& plan,
                               const State* current, Run& run, const std::function<bool(State)>& each) {
  std::vector<std::vector<int>> options;
  for (const auto& m : plan.movers) {
    options.push_back(plan.choices(g, m, current ? current->nominal(m.slot) : -1));
    if (options.back().empty()) return true;
  }
  std::vector<std::size_t> digit(options.size(), 0);
  std::vector<int> placed(sig.nominals().size(), 0);
  while (true) {
    for (std::size_t i = 0; i < options.size(); ++i) {
      placed[static_cast<std::size_t>(plan.movers[i].slot)] = options[i][digit[i]];
    }
    for (const auto& props : plan.prop_maps) {
      if (!run.tick()) return false;
      if (!each(complete_state(g, sig, plan.rel, props, placed))) return false;
    }
    std::size_t i = options.size();
    while (i > 0 && ++digit[i - 1] == options[i - 1].size()) digit[--i] = 0;
    if (i == 0) return true;
  }
}

inline std::vector<StatePtr> initial_states(const GridGraph& g, const std::shared_ptr<const Signature>& sig,
                                            const AssumptionSet& a, const MotionPlan& plan, Run& run) {
  std::vector<Formula> filters = lowered_globals(a);
  for (const auto& f : initial_formulas(a)) filters.push_back(f);
  StateFilter filter(g, sig, filters);
  std::vector<StatePtr> out;
  for_each_successor(g, *sig, plan, nullptr, run, [&](State s) {
    auto ptr = std::make_shared<const State>(std::move(s));
    if (filter.accepts(ptr)) out.push_back(std::move(ptr));
    return true;
  });
  return out;
}

}  // namespace detail

/// States satisfying the relative motion, global state and initial
/// assumptions, in motion-successor order.
inline std::vector<State> generate_initial_states(const GridGraph& g, const std::vector<std::string>& props,
                                                  const std::vector<std::string>& noms, const AssumptionSet& a) {
  auto sig = std::make_shared<const Signature>(props, noms);
  detail::MotionPlan plan(g, *sig, a);
  TraceSink none = [](const Trace&) { return true; };
  detail::Run run{g, sig, none, detail::Pacer(std::nullopt), {}};
  std::vector<State> out;
  for (const auto& s : detail::initial_states(g, sig, a, plan, run)) out.push_back(*s);
  return out;
}

namespace detail {

/// Yields every sequence of length 1..n with the first state drawn from
/// `first` and later ones from `rest` (given as counts plus a decoder).
inline void enumerate_sequences(Run& run, int max_len, std::uint64_t first_count, std::uint64_t rest_count,
                                const std::function<StatePtr(bool, std::uint64_t)>& decode) {
  for (int len = 1; len <= max_len; ++len) {
    if (first_count == 0 || (len > 1 && rest_count == 0)) return;
    std::vector<std::uint64_t> idx(static_cast<std::size_t>(len), 0);
    std::vector<StatePtr> states(static_cast<std::size_t>(len));
    for (int k = 0; k < len; ++k) states[static_cast<std::size_t>(k)] = decode(k == 0, 0);
    while (true) {
      if (!run.yield(states)) return;
      int k = len - 1;
      while (k >= 0) {
        const std::uint64_t limit = k == 0 ? first_count : rest_count;
        auto& d = idx[static_cast<std::size_t>(k)];
        if (++d < limit) {
          states[static_cast<std::size_t>(k)] = decode(k == 0, d);
          break;
        }
        d = 0;
        states[static_cast<std::size_t>(k)] = decode(k == 0, 0);
        --k;
      }
      if (k < 0) break;
    }
  }
}

inline std::shared_ptr<const Signature> signature_of(const CheckerConfig& cfg) {
  if (cfg.max_len < 1) throw ValidationError("maximum trace length must be at least 1");
  return std::make_shared<const Signature>(cfg.props, cfg.noms);
}

inline CheckResult baseline(const CheckerConfig& cfg, const std::shared_ptr<const Signature>& sig,
                            const TraceSink& sink) {
  StateSpace space(cfg.grid, sig);
  Run run{cfg.grid, sig, sink, Pacer(cfg.deadline), {}};
  enumerate_sequences(run, cfg.max_len, space.size(), space.size(), [&](bool, std::uint64_t i) {
    return std::make_shared<const State>(space.state(i));
  });
  return run.result;
}

inline CheckResult optimized(const CheckerConfig& cfg, const std::shared_ptr<const Signature>& sig,
                             const TraceSink& sink) {
  validate(cfg.assumptions, cfg.noms);
  Run run{cfg.grid, sig, sink, Pacer(cfg.deadline), {}};
  std::vector<Formula> per_state = lowered_globals(cfg.assumptions);
  for (const auto& f : mined_state_constraints(cfg.spec)) per_state.push_back(f);
  for (const auto& r : cfg.assumptions.raws()) {
    for (const auto& f : mined_state_constraints(r.formula)) per_state.push_back(f);
  }
  StateFilter keep(cfg.grid, sig, per_state);
  StateFilter start(cfg.grid, sig, initial_formulas(cfg.assumptions));

  StateSpace space(cfg.grid, sig);
  std::vector<StatePtr> allowed;
  std::vector<StatePtr> first;
  for (std::uint64_t i = 0; i < space.size(); ++i) {
    if (!run.tick()) return run.result;
    auto s = std::make_shared<const State>(space.state(i));
    if (!keep.accepts(s)) continue;
    if (start.accepts(s)) first.push_back(s);
    allowed.push_back(std::move(s));
  }
  enumerate_sequences(run, cfg.max_len, first.size(), allowed.size(),
                      [&](bool is_first, std::uint64_t i) { return is_first ? first[i] : allowed[i]; });
  return run.result;
}

inline CheckResult motion(const CheckerConfig& cfg, const std::shared_ptr<const Signature>& sig,
                          const TraceSink& sink) {
  MotionPlan plan(cfg.grid, *sig, cfg.assumptions);
  Run run{cfg.grid, sig, sink, Pacer(cfg.deadline), {}};
  StateFilter keep(cfg.grid, sig, lowered_globals(cfg.assumptions));
  const auto starts = initial_states(cfg.grid, sig, cfg.assumptions, plan, run);

  std::vector<StatePtr> path;
  std::function<bool()> extend = [&]() -> bool {
    if (!run.yield(path)) return false;
    if (static_cast<int>(path.size()) == cfg.max_len) return true;
    const StatePtr current = path.back();
    return for_each_successor(cfg.grid, *sig, plan, current.get(), run, [&](State s) {
      auto next = std::make_shared<const State>(std::move(s));
      if (!keep.accepts(next)) return true;
      path.push_back(std::move(next));
      const bool go_on = extend();
      path.pop_back();
      return go_on;
    });
  };
  for (const auto& s : starts) {
    if (run.result.timed_out) break;
    path.assign(1, s);
    if (!extend()) break;
  }
  return run.result;
}

}  // namespace detail

inline CheckResult generate_traces_baseline(const CheckerConfig& cfg, const TraceSink& sink) {
  return detail::baseline(cfg, detail::signature_of(cfg), sink);
}

inline CheckResult generate_traces_optimized(const CheckerConfig& cfg, const TraceSink& sink) {
  return detail::optimized(cfg, detail::signature_of(cfg), sink);
}

inline CheckResult generate_traces_motion(const CheckerConfig& cfg, const TraceSink& sink) {
  return detail::motion(cfg, detail::signature_of(cfg), sink);
}

inline CheckResult generate_traces(const CheckerConfig& cfg, const TraceSink& sink) {
  switch (cfg.algorithm) {
    case Algorithm::Baseline: return generate_traces_baseline(cfg, sink);
    case Algorithm::Optimized: return generate_traces_optimized(cfg, sink);
    case Algorithm::Motion: return generate_traces_motion(cfg, sink);
  }
  throw Error("unknown algorithm");
}

/// The formula a generated trace is checked against: the spec and every
/// assumption the generator does not enforce, lowered.
inline Formula checked_formula(const CheckerConfig& cfg) {
  std::vector<Formula> parts{cfg.spec};
  for (const auto& a : cfg.assumptions.items()) {
    bool enforced = false;
    switch (cfg.algorithm) {
      case Algorithm::Baseline: break;
      case Algorithm::Optimized:
        enforced = std::holds_alternative<GlobalState>(a) || std::holds_alternative<Initial>(a);
        break;
      case Algorithm::Motion: enforced = !std::holds_alternative<Raw>(a); break;
    }
    if (!enforced) parts.push_back(lower(a));
  }
  return conjunction(parts);
}

/// Checks every generated trace and passes the satisfying ones, with their
/// nonempty sets of satisfying points, to `sink`.
inline CheckResult sat_traces(const CheckerConfig& cfg, const SatSink& sink) {
  auto sig = detail::signature_of(cfg);
  validate(cfg.assumptions, cfg.noms);
  Evaluator ev(cfg.grid, sig, checked_formula(cfg));
  std::uint64_t satisfying = 0;
  bool stopped = false;
  TraceSink check = [&](const Trace& t) {
    PositionSet points(cfg.grid.size());
    for (int p = 0; p < cfg.grid.size(); ++p) {
      if (ev.eval_unchecked(t, p)) points.insert(p);
    }
    if (points.empty()) return true;
    ++satisfying;
    if (!sink(t, points)) {
      stopped = true;
      return false;
    }
    return true;
  };
  CheckResult r;
  switch (cfg.algorithm) {
    case Algorithm::Baseline: r = detail::baseline(cfg, sig, check); break;
    case Algorithm::Optimized: r = detail::optimized(cfg, sig, check); break;
    case Algorithm::Motion: r = detail::motion(cfg, sig, check); break;
  }
  r.traces_satisfying = satisfying;
  r.stopped = stopped;
  return r;
}

/// Upper bound on motion-generated traces for proposition-free configs:
/// s * sum_{k<n} (prod_v b_v)^k with b_v = 1 for static and dependent
/// nominals, |M| for fixed ones and |Pos| otherwise. Saturates.
inline std::uint64_t trace_count_bound(const CheckerConfig& cfg) {
  if (!cfg.props.empty()) throw ValidationError("the trace count bound assumes no propositions");
  const auto initial = generate_initial_states(cfg.grid, cfg.props, cfg.noms, cfg.assumptions);
  const RoleMap roles = validate(cfg.assumptions, cfg.noms);
  std::uint64_t branching = 1;
  for (const auto& [name, role] : roles) {
    switch (role.kind) {
      case NominalRole::Kind::Static:
      case NominalRole::Kind::Dependent: break;
      case NominalRole::Kind::Fixed: branching = detail::sat_mul(branching, role.moves.size()); break;
      default: branching = detail::sat_mul(branching, static_cast<std::uint64_t>(cfg.grid.size())); break;
    }
  }
  std::uint64_t sum = 0;
  std::uint64_t power = 1;
  for (int k = 0; k < cfg.max_len; ++k) {
    sum = detail::sat_add(sum, power);
    power = detail::sat_mul(power, branching);
  }
  return detail::sat_mul(initial.size(), sum);
}

/// Closed-form baseline count: sum_{k=1..n} S^k. Saturates.
inline std::uint64_t baseline_trace_count(const CheckerConfig& cfg) {
  const std::uint64_t s = count_states(cfg.grid, cfg.props.size(), cfg.noms.size());
  std::uint64_t sum = 0;
  std::uint64_t power = 1;
  for (int k = 1; k <= cfg.max_len; ++k) {
    power = detail::sat_mul(power, s);
    sum = detail::sat_add(sum, power);
  }
  return sum;
}

}  // namespace hstl
