#pragma once

// Formula syntax tree, canonical rendering, desugaring to the core operators,
// occurrence indexing and symbol collection.

#include "hstl/core.hpp"
#include "hstl/error.hpp"

#include <algorithm>
#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace hstl {

enum class Op : std::uint8_t {
  // core
  Top,
  Prop,
  Nom,
  Not,
  And,
  Next,
  Until,
  Move,  // one spatial step in direction()
  At,
  Bind,
  // sugar
  Or,
  Implies,
  Iff,
  Eventually,
  Globally,
  WeakNext,
  SomeDir,  // <D:n>
  AllDir,   // [D:n]
};

constexpr bool is_core(Op op) noexcept { return op <= Op::Bind; }

constexpr int arity(Op op) noexcept {
  switch (op) {
    case Op::Top:
    case Op::Prop:
    case Op::Nom: return 0;
    case Op::And:
    case Op::Until:
    case Op::Or:
    case Op::Implies:
    case Op::Iff: return 2;
    default: return 1;
  }
}

/// Immutable formula value. Subtrees are shared; equality is structural.
class Formula {
 public:
  static Formula top() { return Formula(Op::Top); }
  static Formula bottom() { return negate(top()); }
  static Formula prop(std::string name) { return Formula(Op::Prop, std::move(name)); }
  static Formula nom(std::string name) { return Formula(Op::Nom, std::move(name)); }
  static Formula negate(Formula f) { return Formula(Op::Not, {}, {std::move(f)}); }
  static Formula conj(Formula a, Formula b) { return Formula(Op::And, {}, {std::move(a), std::move(b)}); }
  static Formula next(Formula f) { return Formula(Op::Next, {}, {std::move(f)}); }
  static Formula until(Formula a, Formula b) { return Formula(Op::Until, {}, {std::move(a), std::move(b)}); }
  static Formula move(Direction d, Formula f) {
    Formula out(Op::Move, {}, {std::move(f)});
    out.node_->dir = d;
    return out;
  }
  static Formula at(std::string v, Formula f) { return Formula(Op::At, std::move(v), {std::move(f)}); }
  static Formula bind(std::string v, Formula f) { return Formula(Op::Bind, std::move(v), {std::move(f)}); }
  static Formula disj(Formula a, Formula b) { return Formula(Op::Or, {}, {std::move(a), std::move(b)}); }
  static Formula implies(Formula a, Formula b) { return Formula(Op::Implies, {}, {std::move(a), std::move(b)}); }
  static Formula iff(Formula a, Formula b) { return Formula(Op::Iff, {}, {std::move(a), std::move(b)}); }
  static Formula eventually(Formula f) { return Formula(Op::Eventually, {}, {std::move(f)}); }
  static Formula globally(Formula f) { return Formula(Op::Globally, {}, {std::move(f)}); }
  static Formula weak_next(Formula f) { return Formula(Op::WeakNext, {}, {std::move(f)}); }
  /// `bound` absent means "grid extent in that direction", resolved by desugar.
  static Formula some_dir(Direction d, std::optional<int> bound, Formula f) {
    return bounded(Op::SomeDir, d, bound, std::move(f));
  }
  static Formula all_dir(Direction d, std::optional<int> bound, Formula f) {
    return bounded(Op::AllDir, d, bound, std::move(f));
  }

  /// Nested moves along `path`, innermost last: [D1, D2] gives D1 D2 f.
  static Formula along(const Path& path, Formula f) {
    for (auto it = path.rbegin(); it != path.rend(); ++it) f = move(*it, std::move(f));
    return f;
  }

  Op op() const noexcept { return node_->op; }
  const std::string& name() const noexcept { return node_->name; }
  Direction direction() const noexcept { return node_->dir; }
  std::optional<int> bound() const noexcept { return node_->bound; }
  const Formula& child(std::size_t i = 0) const { return node_->children.at(i); }
  const std::vector<Formula>& children() const noexcept { return node_->children; }

  friend bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    const Node& x = *a.node_;
    const Node& y = *b.node_;
    return x.op == y.op && x.name == y.name && x.dir == y.dir && x.bound == y.bound &&
           x.children == y.children;
  }

 private:
  struct Node {
    Op op = Op::Top;
    std::string name;
    Direction dir = Direction::Front;
    std::optional<int> bound;
    std::vector<Formula> children;
  };

  explicit Formula(Op op, std::string name = {}, std::vector<Formula> children = {})
      : node_(std::make_shared<Node>()) {
    node_->op = op;
    node_->name = std::move(name);
    node_->children = std::move(children);
  }

  static Formula bounded(Op op, Direction d, std::optional<int> bound, Formula f) {
    Formula out(op, {}, {std::move(f)});
    out.node_->dir = d;
    out.node_->bound = bound;
    return out;
  }

  // Only mutated inside the factory functions above.
  std::shared_ptr<Node> node_;
};

/// Left fold with `conj`; an empty list gives Top.
inline Formula conjunction(const std::vector<Formula>& fs) {
  if (fs.empty()) return Formula::top();
  Formula acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = Formula::conj(acc, fs[i]);
  return acc;
}

/// Left fold with `disj`; an empty list gives bottom.
inline Formula disjunction(const std::vector<Formula>& fs) {
  if (fs.empty()) return Formula::bottom();
  Formula acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = Formula::disj(acc, fs[i]);
  return acc;
}

/// Number of nodes in the tree (each occurrence counted).
inline std::size_t size(const Formula& f) {
  std::size_t n = 1;
  for (const auto& c : f.children()) n += size(c);
  return n;
}

// ---------------------------------------------------------------------------
// Rendering. Binary operators are always parenthesized; prefix operators are
// separated from their operand by a space unless they are `!`.

namespace detail {

inline const char* binary_token(Op op) {
  switch (op) {
    case Op::And: return "&";
    case Op::Or: return "|";
    case Op::Until: return "U";
    case Op::Implies: return "->";
    case Op::Iff: return "<->";
    default: return "?";
  }
}

inline void render_to(const Formula& f, std::string& out) {
  switch (f.op()) {
    case Op::Top: out += "1"; return;
    case Op::Prop:
    case Op::Nom: out += f.name(); return;
    case Op::Not: out += "!"; break;
    case Op::Next: out += "X "; break;
    case Op::WeakNext: out += "WX "; break;
    case Op::Eventually: out += "F "; break;
    case Op::Globally: out += "G "; break;
    case Op::Move:
      out += to_string(f.direction());
      out += ' ';
      break;
    case Op::At: out += "@" + f.name() + " "; break;
    case Op::Bind: out += "\xE2\x86\x93" + f.name() + " "; break;  // U+2193
    case Op::SomeDir:
    case Op::AllDir: {
      out += f.op() == Op::SomeDir ? "<" : "[";
      out += to_string(f.direction());
      if (f.bound()) out += ":" + std::to_string(*f.bound());
      out += f.op() == Op::SomeDir ? "> " : "] ";
      break;
    }
    case Op::And:
    case Op::Or:
    case Op::Until:
    case Op::Implies:
    case Op::Iff:
      out += "(";
      render_to(f.child(0), out);
      out += " ";
      out += binary_token(f.op());
      out += " ";
      render_to(f.child(1), out);
      out += ")";
      return;
  }
  render_to(f.child(0), out);
}

}  // namespace detail

inline std::string render(const Formula& f) {
  std::string out;
  detail::render_to(f, out);
  return out;
}

// ---------------------------------------------------------------------------
// Desugaring

/// Rewrites every sugared operator into the core set. Omitted bounds on
/// <D>/[D] take the grid extent along D.
inline Formula desugar(const Formula& f, const GridGraph& g) {
  auto rec = [&g](const Formula& x) { return desugar(x, g); };
  auto implies = [](Formula a, Formula b) {
    return Formula::negate(Formula::conj(std::move(a), Formula::negate(std::move(b))));
  };
  switch (f.op()) {
    case Op::Top:
    case Op::Prop:
    case Op::Nom: return f;
    case Op::Not: return Formula::negate(rec(f.child()));
    case Op::And: return Formula::conj(rec(f.child(0)), rec(f.child(1)));
    case Op::Next: return Formula::next(rec(f.child()));
    case Op::Until: return Formula::until(rec(f.child(0)), rec(f.child(1)));
    case Op::Move: return Formula::move(f.direction(), rec(f.child()));
    case Op::At: return Formula::at(f.name(), rec(f.child()));
    case Op::Bind: return Formula::bind(f.name(), rec(f.child()));
    case Op::Or:
      return Formula::negate(
          Formula::conj(Formula::negate(rec(f.child(0))), Formula::negate(rec(f.child(1)))));
    case Op::Implies: return implies(rec(f.child(0)), rec(f.child(1)));
    case Op::Iff: {
      Formula a = rec(f.child(0));
      Formula b = rec(f.child(1));
      return Formula::conj(implies(a, b), implies(b, a));
    }
    case Op::Eventually: return Formula::until(Formula::top(), rec(f.child()));
    case Op::Globally:
      return Formula::negate(Formula::until(Formula::top(), Formula::negate(rec(f.child()))));
    case Op::WeakNext:
      return implies(Formula::next(Formula::top()), Formula::next(rec(f.child())));
    case Op::SomeDir:
    case Op::AllDir: {
      const Direction d = f.direction();
      const bool vertical = d == Direction::Front || d == Direction::Back;
      const int n = f.bound().value_or(vertical ? g.rows() : g.cols());
      if (n < 1) throw ValidationError("bounded spatial modality needs a bound of at least 1");
      const Formula body = rec(f.child());
      Formula acc = Formula::top();
      for (int i = 1; i <= n; ++i) {
        const Path path(static_cast<std::size_t>(i), d);
        Formula term = f.op() == Op::SomeDir
                           ? Formula::along(path, body)
                           : implies(Formula::along(path, Formula::top()), Formula::along(path, body));
        if (i == 1) {
          acc = term;
        } else if (f.op() == Op::SomeDir) {
          acc = Formula::negate(Formula::conj(Formula::negate(acc), Formula::negate(term)));
        } else {
          acc = Formula::conj(acc, term);
        }
      }
      return acc;
    }
  }
  return f;
}

inline bool is_desugared(const Formula& f) {
  if (!is_core(f.op())) return false;
  for (const auto& c : f.children()) {
    if (!is_desugared(c)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Occurrence indexing

/// Every occurrence of a subformula gets its own identifier: preorder index
/// into `entries`. Syntactically equal twins are distinct entries.
struct NodeTable {
  struct Entry {
    Formula formula;
    int parent = -1;
    std::vector<int> children;
  };

  std::vector<Entry> entries;

  std::size_t size() const noexcept { return entries.size(); }
  const Entry& operator[](std::size_t id) const { return entries.at(id); }
};

namespace detail {
inline int index_into(const Formula& f, int parent, NodeTable& table) {
  const int id = static_cast<int>(table.entries.size());
  table.entries.push_back({f, parent, {}});
  for (const auto& c : f.children()) {
    const int cid = index_into(c, id, table);
    table.entries[static_cast<std::size_t>(id)].children.push_back(cid);
  }
  return id;
}
}  // namespace detail

inline NodeTable index_nodes(const Formula& f) {
  NodeTable table;
  detail::index_into(f, -1, table);
  return table;
}

// ---------------------------------------------------------------------------
// Symbols

struct Symbols {
  std::set<std::string> props;
  std::set<std::string> nominals;  // occurring outside the scope of a binder for the same name
  std::set<std::string> bound;     // introduced by a binder

  friend bool operator==(const Symbols&, const Symbols&) = default;
};

namespace detail {
inline void collect(const Formula& f, std::vector<std::string>& scope, Symbols& out) {
  auto in_scope = [&scope](const std::string& v) {
    return std::find(scope.begin(), scope.end(), v) != scope.end();
  };
  switch (f.op()) {
    case Op::Prop: out.props.insert(f.name()); return;
    case Op::Nom:
      if (!in_scope(f.name())) out.nominals.insert(f.name());
      return;
    case Op::At:
      if (!in_scope(f.name())) out.nominals.insert(f.name());
      break;
    case Op::Bind:
      out.bound.insert(f.name());
      scope.push_back(f.name());
      collect(f.child(), scope, out);
      scope.pop_back();
      return;
    default: break;
  }
  for (const auto& c : f.children()) collect(c, scope, out);
}
}  // namespace detail

inline Symbols symbols(const Formula& f) {
  Symbols out;
  std::vector<std::string> scope;
  detail::collect(f, scope, out);
  return out;
}

/// True when no temporal operator (X, U, F, G, WX) occurs.
inline bool is_temporal_free(const Formula& f) {
  switch (f.op()) {
    case Op::Next:
    case Op::Until:
    case Op::Eventually:
    case Op::Globally:
    case Op::WeakNext: return false;
    default: break;
  }
  for (const auto& c : f.children()) {
    if (!is_temporal_free(c)) return false;
  }
  return true;
}

/// A temporal-free Boolean combination of @-formulas and constants. Its truth
/// at a step is the same from every viewpoint, so one state decides it.
inline bool is_per_state(const Formula& f) {
  switch (f.op()) {
    case Op::Top: return true;
    case Op::At: return is_temporal_free(f.child());
    case Op::Not:
    case Op::And:
    case Op::Or:
    case Op::Implies:
    case Op::Iff:
      return std::all_of(f.children().begin(), f.children().end(), [](const Formula& c) { return is_per_state(c); });
    default: return false;
  }
}

}  // namespace hstl
