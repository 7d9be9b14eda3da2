#pragma once

// Test-side oracles. These rebuild what the library computes by the most
// direct route available (nested loops, string formulas, eval_naive) so that
// tests compare two independent computations.

#include "hstl/checkers.hpp"
#include "hstl/core.hpp"
#include "hstl/evaluator.hpp"
#include "hstl/formula.hpp"
#include "hstl/idioms.hpp"
#include "hstl/parser.hpp"

#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace hstl::oracle {

/// Every state over the grid, built with make_state from nested loops.
inline std::vector<State> brute_states(const GridGraph& g, const std::vector<std::string>& props,
                                       const std::vector<std::string>& noms) {
  const Signature sig(props, noms);
  const auto cells = g.positions();
  std::vector<State> out;
  std::map<std::string, std::vector<Position>> pv;
  std::map<std::string, Position> nv;
  std::function<void(std::size_t, std::size_t)> go = [&](std::size_t pi, std::size_t ci) {
    if (pi < props.size()) {
      if (ci == cells.size()) return go(pi + 1, 0);
      go(pi, ci + 1);
      pv[props[pi]].push_back(cells[ci]);
      go(pi, ci + 1);
      pv[props[pi]].pop_back();
      return;
    }
    const std::size_t ni = ci;
    if (ni == noms.size()) {
      out.push_back(make_state(g, sig, pv, nv));
      return;
    }
    for (const auto& c : cells) {
      nv[noms[ni]] = c;
      go(pi, ni + 1);
    }
  };
  go(0, 0);
  return out;
}

/// Every trace of length 1..n over the given states.
inline std::vector<Trace> brute_traces(const GridGraph& g, const std::vector<std::string>& props,
                                       const std::vector<std::string>& noms, int n) {
  auto sig = std::make_shared<const Signature>(props, noms);
  std::vector<StatePtr> states;
  for (auto& s : brute_states(g, props, noms)) states.push_back(std::make_shared<const State>(s));
  std::vector<Trace> out;
  std::vector<StatePtr> cur;
  std::function<void()> go = [&]() {
    if (!cur.empty()) out.emplace_back(g, sig, cur);
    if (static_cast<int>(cur.size()) == n) return;
    for (const auto& s : states) {
      cur.push_back(s);
      go();
      cur.pop_back();
    }
  };
  go();
  return out;
}

/// Canonical text of a trace, for set comparisons.
inline std::string key(const Trace& t) {
  std::string k;
  for (const auto& s : t.states()) {
    for (const auto& p : s->props()) {
      for (int i : p.indices()) k += std::to_string(i) + ",";
      k += ";";
    }
    for (int n : s->nominals()) k += std::to_string(n) + ",";
    k += "|";
  }
  return k;
}

inline bool holds_everywhere(const GridGraph& g, const Trace& t, const Formula& f) {
  for (const auto& p : g.positions()) {
    if (!eval_naive(g, t, p, f)) return false;
  }
  return true;
}

/// Random formulas over the given symbols. Binders reuse names from `binders`.
class FormulaGen {
 public:
  FormulaGen(std::vector<std::string> props, std::vector<std::string> noms, std::vector<std::string> binders,
             std::uint64_t seed)
      : props_(std::move(props)), noms_(std::move(noms)), binders_(std::move(binders)), rng_(seed) {}

  /// A formula with at most `budget` nodes.
  Formula operator()(int budget) { return gen(budget, {}); }

  std::mt19937_64& rng() { return rng_; }

 private:
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  Formula leaf(const std::vector<std::string>& scope) {
    std::vector<Formula> options{Formula::top()};
    for (const auto& p : props_) options.push_back(Formula::prop(p));
    for (const auto& v : noms_) options.push_back(Formula::nom(v));
    for (const auto& v : scope) options.push_back(Formula::nom(v));
    return options[static_cast<std::size_t>(pick(static_cast<int>(options.size())))];
  }

  Formula gen(int budget, std::vector<std::string> scope) {
    if (budget <= 1) return leaf(scope);
    const Direction d = kDirections[static_cast<std::size_t>(pick(4))];
    std::vector<std::string> names = noms_;
    names.insert(names.end(), scope.begin(), scope.end());
    switch (pick(budget >= 3 ? 16 : 11)) {
      case 0: return Formula::negate(gen(budget - 1, scope));
      case 1: return Formula::next(gen(budget - 1, scope));
      case 2: return Formula::move(d, gen(budget - 1, scope));
      case 3:
        if (names.empty()) return leaf(scope);
        return Formula::at(names[static_cast<std::size_t>(pick(static_cast<int>(names.size())))], gen(budget - 1, scope));
      case 4: {
        if (binders_.empty()) return leaf(scope);
        const auto& v = binders_[static_cast<std::size_t>(pick(static_cast<int>(binders_.size())))];
        scope.push_back(v);
        return Formula::bind(v, gen(budget - 1, scope));
      }
      case 5: return Formula::eventually(gen(budget - 1, scope));
      case 6: return Formula::globally(gen(budget - 1, scope));
      case 7: return Formula::weak_next(gen(budget - 1, scope));
      case 8: return Formula::some_dir(d, 1 + pick(2), gen(budget - 1, scope));
      case 9: return Formula::all_dir(d, std::nullopt, gen(budget - 1, scope));
      case 10: return leaf(scope);
      default: {
        const int left = 1 + pick(budget - 2);
        Formula a = gen(left, scope);
        Formula b = gen(budget - 1 - left, scope);
        switch (pick(5)) {
          case 0: return Formula::conj(a, b);
          case 1: return Formula::disj(a, b);
          case 2: return Formula::until(a, b);
          case 3: return Formula::implies(a, b);
          default: return Formula::iff(a, b);
        }
      }
    }
  }

  std::vector<std::string> props_;
  std::vector<std::string> noms_;
  std::vector<std::string> binders_;
  std::mt19937_64 rng_;
};

inline Trace random_trace(const GridGraph& g, std::shared_ptr<const Signature> sig, int len, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> cell(0, g.size() - 1);
  std::bernoulli_distribution coin(0.4);
  std::vector<StatePtr> states;
  for (int k = 0; k < len; ++k) {
    std::vector<PositionSet> props(sig->props().size(), PositionSet(g.size()));
    for (auto& p : props) {
      for (int i = 0; i < g.size(); ++i) {
        if (coin(rng)) p.insert(i);
      }
    }
    std::vector<int> noms;
    for (std::size_t i = 0; i < sig->nominals().size(); ++i) noms.push_back(cell(rng));
    states.push_back(std::make_shared<const State>(State(std::move(props), std::move(noms))));
  }
  return Trace(g, std::move(sig), std::move(states));
}

/// Random well-formed assumption sets over the nominals, for exactness checks.
/// Covers every kind, including role combinations the motion generator must
/// handle (fixed or static dependees).
inline AssumptionSet random_assumptions(const std::vector<std::string>& noms, const std::vector<std::string>& props,
                                        std::mt19937_64& rng) {
  auto pick = [&rng](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  auto random_path = [&](int max_len) {
    Path p;
    const int len = pick(max_len + 1);
    for (int i = 0; i < len; ++i) p.push_back(kDirections[static_cast<std::size_t>(pick(4))]);
    return p;
  };
  const std::set<std::string> ps(props.begin(), props.end());
  const std::set<std::string> ns(noms.begin(), noms.end());
  std::vector<std::string> bodies = {"!(Right 1)", "!(Front 1)", "Back 1", "!(Left 1) | (Front 1)"};
  std::vector<std::string> starts;
  if (!props.empty()) {
    bodies.push_back("!" + props[0]);
    bodies.push_back(props[0] + " -> Front 1");
  }
  for (const auto& v : noms) {
    starts.push_back("@" + v + " !(Back 1)");
    for (const auto& w : noms) {
      if (v != w) {
        bodies.push_back("!" + w);
        starts.push_back("!(@" + v + " " + w + ")");
      }
    }
  }

  for (int attempt = 0;; ++attempt) {
    AssumptionSet a;
    const int count = pick(4);
    for (int i = 0; i < count; ++i) {
      const std::string& v = noms[static_cast<std::size_t>(pick(static_cast<int>(noms.size())))];
      switch (pick(6)) {
        case 0: a.add(GlobalState{v, parse(bodies[static_cast<std::size_t>(pick(static_cast<int>(bodies.size())))], ps, ns)}); break;
        case 1: a.add(StaticCar{v}); break;
        case 2: {
          const std::string& w = noms[static_cast<std::size_t>(pick(static_cast<int>(noms.size())))];
          a.add(RelativeMotion{v, w, random_path(2)});
          break;
        }
        case 3: {
          FixedMotion f{v, {}};
          const int moves = 1 + pick(3);
          for (int m = 0; m < moves; ++m) f.moves.push_back(random_path(2));
          a.add(f);
          break;
        }
        case 4: a.add(Initial{parse(starts[static_cast<std::size_t>(pick(static_cast<int>(starts.size())))], ps, ns)}); break;
        default: a.add(Raw{parse("G !(@" + v + " Front 1)", ps, ns)}); break;
      }
    }
    try {
      validate(a, noms);
      return a;
    } catch (const ValidationError&) {
      // draw again
    }
  }
}

}  // namespace hstl::oracle
