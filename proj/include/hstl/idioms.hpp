#pragma once

// Structured modeling idioms (global state, static car, relative motion,
// fixed motion) plus the two extra kinds the built-in scenarios need:
// Initial constrains only the first state, Raw is conjoined into the checked
// formula and never used for pruning.

#include "hstl/core.hpp"
#include "hstl/error.hpp"
#include "hstl/formula.hpp"
#include "hstl/parser.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace hstl {

/// Always, at v's position, `body` holds. `body` must be free of temporal
/// operators so that the constraint can be checked one state at a time.
struct GlobalState {
  std::string nominal;
  Formula body;
  friend bool operator==(const GlobalState&, const GlobalState&) = default;
};

struct StaticCar {
  std::string nominal;
  friend bool operator==(const StaticCar&, const StaticCar&) = default;
};

/// At every step, following `path` from the dependee reaches the dependent.
struct RelativeMotion {
  std::string dependee;
  std::string dependent;
  Path path;
  friend bool operator==(const RelativeMotion&, const RelativeMotion&) = default;
};

/// Between consecutive steps, following one of `moves` from the nominal's new
/// cell reaches its old cell. The empty path means "stays put".
struct FixedMotion {
  std::string nominal;
  std::vector<Path> moves;
  friend bool operator==(const FixedMotion&, const FixedMotion&) = default;
};

/// Constraint on the first state. The formula must be a per-state formula
/// (see is_per_state) so that it means the same at every viewpoint.
struct Initial {
  Formula formula;
  friend bool operator==(const Initial&, const Initial&) = default;
};

struct Raw {
  Formula formula;
  friend bool operator==(const Raw&, const Raw&) = default;
};

using Assumption = std::variant<GlobalState, StaticCar, RelativeMotion, FixedMotion, Initial, Raw>;

inline const char* kind_name(const Assumption& a) {
  static constexpr const char* kNames[] = {"global", "static", "relative", "fixed", "initial", "raw"};
  return kNames[a.index()];
}

/// Rejects assumptions that are malformed on their own.
inline void check_well_formed(const Assumption& a) {
  if (const auto* g = std::get_if<GlobalState>(&a)) {
    if (!is_temporal_free(g->body)) {
      throw ValidationError("global state assumption on '" + g->nominal +
                            "' must not contain temporal operators");
    }
  } else if (const auto* f = std::get_if<FixedMotion>(&a)) {
    if (f->moves.empty()) throw ValidationError("fixed motion of '" + f->nominal + "' has no moves");
  } else if (const auto* i = std::get_if<Initial>(&a)) {
    if (!is_per_state(i->formula)) {
      throw ValidationError("initial assumption must be a temporal-free combination of @-formulas");
    }
  }
}

/// Name of the binder introduced when lowering idioms over `v`. The reserved
/// prefix keeps it apart from every user-declared name.
inline std::string fresh_binder(const std::string& v) { return std::string(kReservedPrefix) + v; }

/// The formula an assumption stands for.
inline Formula lower(const Assumption& a) {
  check_well_formed(a);
  return std::visit(
      [](const auto& x) -> Formula {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, GlobalState>) {
          return Formula::globally(Formula::at(x.nominal, x.body));
        } else if constexpr (std::is_same_v<T, StaticCar>) {
          const std::string v2 = fresh_binder(x.nominal);
          return Formula::at(x.nominal,
                             Formula::bind(v2, Formula::globally(Formula::at(x.nominal, Formula::nom(v2)))));
        } else if constexpr (std::is_same_v<T, RelativeMotion>) {
          return Formula::globally(Formula::at(x.dependee, Formula::along(x.path, Formula::nom(x.dependent))));
        } else if constexpr (std::is_same_v<T, FixedMotion>) {
          const std::string v2 = fresh_binder(x.nominal);
          std::vector<Formula> options;
          for (const auto& path : x.moves) options.push_back(Formula::along(path, Formula::nom(v2)));
          return Formula::globally(Formula::at(
              x.nominal, Formula::bind(v2, Formula::weak_next(Formula::at(x.nominal, disjunction(options))))));
        } else {
          return x.formula;
        }
      },
      a);
}

/// Assumptions grouped by kind, in their original relative order.
class AssumptionSet {
 public:
  AssumptionSet() = default;
  explicit AssumptionSet(std::vector<Assumption> items) : items_(std::move(items)) {
    for (const auto& a : items_) check_well_formed(a);
  }

  void add(Assumption a) {
    check_well_formed(a);
    items_.push_back(std::move(a));
  }

  const std::vector<Assumption>& items() const noexcept { return items_; }
  bool empty() const noexcept { return items_.empty(); }

  template <typename T>
  std::vector<T> of_kind() const {
    std::vector<T> out;
    for (const auto& a : items_) {
      if (const auto* x = std::get_if<T>(&a)) out.push_back(*x);
    }
    return out;
  }

  std::vector<GlobalState> globals() const { return of_kind<GlobalState>(); }
  std::vector<StaticCar> statics() const { return of_kind<StaticCar>(); }
  std::vector<RelativeMotion> relatives() const { return of_kind<RelativeMotion>(); }
  std::vector<FixedMotion> fixed() const { return of_kind<FixedMotion>(); }
  std::vector<Initial> initials() const { return of_kind<Initial>(); }
  std::vector<Raw> raws() const { return of_kind<Raw>(); }

  friend bool operator==(const AssumptionSet&, const AssumptionSet&) = default;

 private:
  std::vector<Assumption> items_;
};

struct NominalRole {
  enum class Kind { Free, Static, Fixed, Dependee, Dependent };

  Kind kind = Kind::Free;
  std::vector<Path> moves;         // Fixed
  std::string dependee;            // Dependent: the nominal it hangs off
  Path path;                       // Dependent: dependee -> dependent
  std::vector<std::string> dependents;  // nominals placed relative to this one

  friend bool operator==(const NominalRole&, const NominalRole&) = default;
};

using RoleMap = std::map<std::string, NominalRole>;

/// Checks the motion preconditions and assigns every declared nominal one
/// role. A static or fixed nominal may still anchor dependents; it keeps its
/// motion role and lists them in `dependents`.
inline RoleMap validate(const AssumptionSet& assumptions, const std::set<std::string>& noms) {
  struct Uses {
    std::vector<std::size_t> statics, fixed, dependent, dependee;
  };
  std::map<std::string, Uses> uses;
  auto declared = [&noms](const std::string& v, std::size_t i) {
    if (!noms.contains(v)) {
      throw ValidationError("assumption #" + std::to_string(i) + " mentions undeclared nominal '" + v + "'");
    }
  };
  const auto& items = assumptions.items();
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& a = items[i];
    if (const auto* g = std::get_if<GlobalState>(&a)) {
      declared(g->nominal, i);
    } else if (const auto* s = std::get_if<StaticCar>(&a)) {
      declared(s->nominal, i);
      uses[s->nominal].statics.push_back(i);
    } else if (const auto* r = std::get_if<RelativeMotion>(&a)) {
      declared(r->dependee, i);
      declared(r->dependent, i);
      uses[r->dependee].dependee.push_back(i);
      uses[r->dependent].dependent.push_back(i);
    } else if (const auto* f = std::get_if<FixedMotion>(&a)) {
      declared(f->nominal, i);
      uses[f->nominal].fixed.push_back(i);
    }
  }

  auto pair = [](std::size_t a, std::size_t b) {
    return " (assumptions #" + std::to_string(std::min(a, b)) + " and #" + std::to_string(std::max(a, b)) + ")";
  };

  RoleMap roles;
  for (const auto& v : noms) roles[v] = NominalRole{};
  for (const auto& [v, u] : uses) {
    if (!u.statics.empty() && !u.fixed.empty()) {
      throw ValidationError("conflicting roles for '" + v + "': static and fixed motion" +
                            pair(u.statics.front(), u.fixed.front()));
    }
    if (u.fixed.size() > 1) {
      throw ValidationError("conflicting roles for '" + v + "': two fixed motion assumptions" +
                            pair(u.fixed[0], u.fixed[1]));
    }
    if (!u.dependent.empty() && !u.dependee.empty()) {
      throw ValidationError("'" + v + "' is both a dependee and dependent" +
                            pair(u.dependent.front(), u.dependee.front()));
    }
    if (u.dependent.size() > 1) {
      throw ValidationError("dependent '" + v + "' appears in more than one relative motion assumption" +
                            pair(u.dependent[0], u.dependent[1]));
    }
    if (!u.dependent.empty() && !u.statics.empty()) {
      throw ValidationError("conflicting roles for '" + v + "': static and dependent" +
                            pair(u.statics.front(), u.dependent.front()));
    }
    if (!u.dependent.empty() && !u.fixed.empty()) {
      throw ValidationError("conflicting roles for '" + v + "': fixed motion and dependent" +
                            pair(u.fixed.front(), u.dependent.front()));
    }

    NominalRole& role = roles[v];
    if (!u.statics.empty()) {
      role.kind = NominalRole::Kind::Static;
    } else if (!u.fixed.empty()) {
      role.kind = NominalRole::Kind::Fixed;
      role.moves = std::get<FixedMotion>(items[u.fixed.front()]).moves;
    } else if (!u.dependent.empty()) {
      const auto& r = std::get<RelativeMotion>(items[u.dependent.front()]);
      role.kind = NominalRole::Kind::Dependent;
      role.dependee = r.dependee;
      role.path = r.path;
    } else if (!u.dependee.empty()) {
      role.kind = NominalRole::Kind::Dependee;
    }
    for (std::size_t i : u.dependee) {
      role.dependents.push_back(std::get<RelativeMotion>(items[i]).dependent);
    }
    std::sort(role.dependents.begin(), role.dependents.end());
  }
  return roles;
}

inline RoleMap validate(const AssumptionSet& assumptions, const std::vector<std::string>& noms) {
  return validate(assumptions, std::set<std::string>(noms.begin(), noms.end()));
}

}  // namespace hstl
