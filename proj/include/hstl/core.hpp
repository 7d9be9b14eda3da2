#pragma once

// Grid-graphs, states and finite traces.
//
// Positions are 1-based (row, col) pairs. Rows run along the direction of
// travel: Front is +row, Back is -row, Right is +col, Left is -col. Inside the
// library positions are also addressed by their row-major index
// (row - 1) * cols + (col - 1), which is what states store.

#include "hstl/error.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hstl {

enum class Direction : std::uint8_t { Front, Back, Left, Right };

inline constexpr std::array<Direction, 4> kDirections = {
    Direction::Front, Direction::Back, Direction::Left, Direction::Right};

constexpr std::string_view to_string(Direction d) noexcept {
  switch (d) {
    case Direction::Front: return "Front";
    case Direction::Back: return "Back";
    case Direction::Left: return "Left";
    case Direction::Right: return "Right";
  }
  return "?";
}

constexpr std::optional<Direction> direction_from_string(std::string_view s) noexcept {
  for (Direction d : kDirections) {
    if (to_string(d) == s) return d;
  }
  return std::nullopt;
}

constexpr Direction opposite(Direction d) noexcept {
  switch (d) {
    case Direction::Front: return Direction::Back;
    case Direction::Back: return Direction::Front;
    case Direction::Left: return Direction::Right;
    case Direction::Right: return Direction::Left;
  }
  return d;
}

using Path = std::vector<Direction>;

struct Position {
  int row = 1;
  int col = 1;

  friend auto operator<=>(const Position&, const Position&) = default;
};

inline std::string to_string(Position p) {
  return "p(" + std::to_string(p.row) + "," + std::to_string(p.col) + ")";
}

class GridGraph {
 public:
  GridGraph(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows < 1 || cols < 1) {
      throw ValidationError("grid dimensions must be positive, got " + std::to_string(rows) +
                            "x" + std::to_string(cols));
    }
  }

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  int size() const noexcept { return rows_ * cols_; }

  bool contains(Position p) const noexcept {
    return p.row >= 1 && p.row <= rows_ && p.col >= 1 && p.col <= cols_;
  }

  int index(Position p) const {
    require(p);
    return (p.row - 1) * cols_ + (p.col - 1);
  }

  Position position(int index) const noexcept { return {index / cols_ + 1, index % cols_ + 1}; }

  std::optional<Position> neighbor(Position p, Direction d) const {
    require(p);
    Position q = step(p, d);
    if (!contains(q)) return std::nullopt;
    return q;
  }

  /// Index-based neighbor lookup for hot loops; -1 when the move leaves the grid.
  int neighbor_index(int index, Direction d) const noexcept {
    Position q = step(position(index), d);
    return contains(q) ? (q.row - 1) * cols_ + (q.col - 1) : -1;
  }

  /// Folds `neighbor` over the path. Absent as soon as one step leaves the grid.
  std::optional<Position> apply_path(Position p, std::span<const Direction> path) const {
    require(p);
    for (Direction d : path) {
      p = step(p, d);
      if (!contains(p)) return std::nullopt;
    }
    return p;
  }

  int apply_path_index(int index, std::span<const Direction> path) const noexcept {
    for (Direction d : path) {
      index = neighbor_index(index, d);
      if (index < 0) return -1;
    }
    return index;
  }

  /// All positions in row-major order.
  std::vector<Position> positions() const {
    std::vector<Position> out;
    out.reserve(static_cast<std::size_t>(size()));
    for (int i = 0; i < size(); ++i) out.push_back(position(i));
    return out;
  }

  friend bool operator==(const GridGraph&, const GridGraph&) = default;

 private:
  static Position step(Position p, Direction d) noexcept {
    switch (d) {
      case Direction::Front: ++p.row; break;
      case Direction::Back: --p.row; break;
      case Direction::Right: ++p.col; break;
      case Direction::Left: --p.col; break;
    }
    return p;
  }

  void require(Position p) const {
    if (!contains(p)) {
      throw ValidationError("position " + to_string(p) + " outside " + std::to_string(rows_) +
                            "x" + std::to_string(cols_) + " grid");
    }
  }

  int rows_;
  int cols_;
};

inline GridGraph make_grid(int rows, int cols) { return GridGraph(rows, cols); }

inline std::optional<Position> neighbor(const GridGraph& g, Position p, Direction d) {
  return g.neighbor(p, d);
}

inline std::optional<Position> apply_path(const GridGraph& g, Position p,
                                          std::span<const Direction> path) {
  return g.apply_path(p, path);
}

/// The path that undoes `path`: opposite moves in reverse order.
inline Path inverse_path(std::span<const Direction> path) {
  Path out;
  out.reserve(path.size());
  for (auto it = path.rbegin(); it != path.rend(); ++it) out.push_back(opposite(*it));
  return out;
}

/// Set of grid positions, stored as a bitset over row-major indices.
class PositionSet {
 public:
  PositionSet() = default;
  explicit PositionSet(int capacity)
      : capacity_(capacity), words_(static_cast<std::size_t>((capacity + 63) / 64), 0) {}

  int capacity() const noexcept { return capacity_; }

  bool contains(int index) const noexcept {
    return index >= 0 && index < capacity_ &&
           ((words_[static_cast<std::size_t>(index) / 64] >> (index % 64)) & 1U) != 0;
  }

  void insert(int index) { words_.at(static_cast<std::size_t>(index) / 64) |= bit(index); }
  void erase(int index) { words_.at(static_cast<std::size_t>(index) / 64) &= ~bit(index); }

  int count() const noexcept {
    int n = 0;
    for (auto w : words_) n += std::popcount(w);
    return n;
  }

  bool empty() const noexcept { return count() == 0; }

  std::vector<int> indices() const {
    std::vector<int> out;
    for (int i = 0; i < capacity_; ++i) {
      if (contains(i)) out.push_back(i);
    }
    return out;
  }

  friend bool operator==(const PositionSet&, const PositionSet&) = default;

 private:
  static std::uint64_t bit(int index) noexcept { return std::uint64_t{1} << (index % 64); }

  int capacity_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Declared proposition and nominal names; slot numbers follow declaration order.
class Signature {
 public:
  Signature() = default;
  Signature(std::vector<std::string> props, std::vector<std::string> noms)
      : props_(std::move(props)), noms_(std::move(noms)) {
    check_unique();
  }

  const std::vector<std::string>& props() const noexcept { return props_; }
  const std::vector<std::string>& nominals() const noexcept { return noms_; }

  std::optional<int> prop_slot(std::string_view name) const noexcept { return find(props_, name); }
  std::optional<int> nominal_slot(std::string_view name) const noexcept { return find(noms_, name); }

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  static std::optional<int> find(const std::vector<std::string>& names, std::string_view name) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == name) return static_cast<int>(i);
    }
    return std::nullopt;
  }

  void check_unique() const {
    std::vector<std::string> all = props_;
    all.insert(all.end(), noms_.begin(), noms_.end());
    std::sort(all.begin(), all.end());
    auto dup = std::adjacent_find(all.begin(), all.end());
    if (dup != all.end()) throw ValidationError("symbol '" + *dup + "' declared twice");
  }

  std::vector<std::string> props_;
  std::vector<std::string> noms_;
};

/// One timestep: a position set per proposition slot and a position index per
/// nominal slot. Nominals may share a cell.
class State {
 public:
  State() = default;
  State(std::vector<PositionSet> props, std::vector<int> noms)
      : props_(std::move(props)), noms_(std::move(noms)) {}

  const PositionSet& prop(int slot) const { return props_[static_cast<std::size_t>(slot)]; }
  int nominal(int slot) const { return noms_[static_cast<std::size_t>(slot)]; }

  const std::vector<PositionSet>& props() const noexcept { return props_; }
  const std::vector<int>& nominals() const noexcept { return noms_; }

  State with_nominal(int slot, int position_index) const {
    State copy = *this;
    copy.noms_[static_cast<std::size_t>(slot)] = position_index;
    return copy;
  }

  friend bool operator==(const State&, const State&) = default;

 private:
  std::vector<PositionSet> props_;
  std::vector<int> noms_;
};

using StatePtr = std::shared_ptr<const State>;

/// Builds a state from named valuations. Every declared nominal must be placed.
inline State make_state(const GridGraph& g, const Signature& sig,
                        const std::map<std::string, std::vector<Position>>& props,
                        const std::map<std::string, Position>& noms) {
  std::vector<PositionSet> prop_sets(sig.props().size(), PositionSet(g.size()));
  for (const auto& [name, cells] : props) {
    auto slot = sig.prop_slot(name);
    if (!slot) throw ValidationError("undeclared proposition '" + name + "'");
    for (Position p : cells) prop_sets[static_cast<std::size_t>(*slot)].insert(g.index(p));
  }
  std::vector<int> placed(sig.nominals().size(), -1);
  for (const auto& [name, p] : noms) {
    auto slot = sig.nominal_slot(name);
    if (!slot) throw ValidationError("undeclared nominal '" + name + "'");
    placed[static_cast<std::size_t>(*slot)] = g.index(p);
  }
  for (std::size_t i = 0; i < placed.size(); ++i) {
    if (placed[i] < 0) throw ValidationError("nominal '" + sig.nominals()[i] + "' has no position");
  }
  return State(std::move(prop_sets), std::move(placed));
}

/// Nonempty finite sequence of states over one grid and one signature.
/// States are shared between traces; a Trace never mutates after construction.
class Trace {
 public:
  struct Unchecked {};

  Trace(GridGraph grid, std::shared_ptr<const Signature> sig, std::vector<StatePtr> states)
      : grid_(grid), sig_(std::move(sig)), states_(std::move(states)) {
    validate();
  }

  Trace(GridGraph grid, const Signature& sig, const std::vector<State>& states)
      : grid_(grid), sig_(std::make_shared<const Signature>(sig)) {
    states_.reserve(states.size());
    for (const auto& s : states) states_.push_back(std::make_shared<const State>(s));
    validate();
  }

  /// For generators whose states are valid by construction.
  Trace(Unchecked, GridGraph grid, std::shared_ptr<const Signature> sig,
        std::vector<StatePtr> states)
      : grid_(grid), sig_(std::move(sig)), states_(std::move(states)) {}

  const GridGraph& grid() const noexcept { return grid_; }
  const Signature& signature() const noexcept { return *sig_; }
  const std::shared_ptr<const Signature>& signature_ptr() const noexcept { return sig_; }
  std::size_t size() const noexcept { return states_.size(); }
  const State& state(std::size_t k) const { return *states_.at(k); }
  const StatePtr& state_ptr(std::size_t k) const { return states_.at(k); }
  const std::vector<StatePtr>& states() const noexcept { return states_; }

  Position nominal(std::size_t k, std::string_view name) const {
    auto slot = sig_->nominal_slot(name);
    if (!slot) throw ValidationError("undeclared nominal '" + std::string(name) + "'");
    return grid_.position(state(k).nominal(*slot));
  }

  bool holds(std::size_t k, std::string_view prop, Position p) const {
    auto slot = sig_->prop_slot(prop);
    if (!slot) throw ValidationError("undeclared proposition '" + std::string(prop) + "'");
    return state(k).prop(*slot).contains(grid_.index(p));
  }

  friend bool operator==(const Trace& a, const Trace& b) {
    if (!(a.grid_ == b.grid_) || !(*a.sig_ == *b.sig_) || a.size() != b.size()) return false;
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (a.states_[k] != b.states_[k] && !(*a.states_[k] == *b.states_[k])) return false;
    }
    return true;
  }

 private:
  void validate() const {
    if (!sig_) throw ValidationError("trace without signature");
    if (states_.empty()) throw ValidationError("a trace needs at least one state");
    for (const auto& s : states_) {
      if (!s) throw ValidationError("null state in trace");
      if (s->props().size() != sig_->props().size() ||
          s->nominals().size() != sig_->nominals().size()) {
        throw ValidationError("state does not match the trace signature");
      }
      for (const auto& set : s->props()) {
        if (set.capacity() != grid_.size()) throw ValidationError("proposition set sized for another grid");
      }
      for (int idx : s->nominals()) {
        if (idx < 0 || idx >= grid_.size()) throw ValidationError("nominal placed outside the grid");
      }
    }
  }

  GridGraph grid_;
  std::shared_ptr<const Signature> sig_;
  std::vector<StatePtr> states_;
};

/// The suffix starting at step k, or nullopt when k is past the last step.
inline std::optional<Trace> suffix(const Trace& t, std::size_t k) {
  if (k >= t.size()) return std::nullopt;
  std::vector<StatePtr> tail(t.states().begin() + static_cast<std::ptrdiff_t>(k), t.states().end());
  return Trace(Trace::Unchecked{}, t.grid(), t.signature_ptr(), std::move(tail));
}

/// Copy of `t` with nominal `v` placed at `p` in every step from `from_k` on.
/// Untouched steps share their state with the input.
inline Trace substitute(const Trace& t, std::string_view v, Position p, std::size_t from_k) {
  auto slot = t.signature().nominal_slot(v);
  if (!slot) throw ValidationError("cannot substitute undeclared nominal '" + std::string(v) + "'");
  if (from_k >= t.size()) throw ValidationError("substitution start past the end of the trace");
  const int idx = t.grid().index(p);
  std::vector<StatePtr> states = t.states();
  for (std::size_t l = from_k; l < states.size(); ++l) {
    if (states[l]->nominal(*slot) != idx) {
      states[l] = std::make_shared<const State>(states[l]->with_nominal(*slot, idx));
    }
  }
  return Trace(Trace::Unchecked{}, t.grid(), t.signature_ptr(), std::move(states));
}

/// Extends the signature with extra nominals, all placed at `placeholder`.
/// Used to give binder-introduced names a slot before they are bound.
inline Trace with_nominals(const Trace& t, const std::vector<std::string>& extra, Position placeholder) {
  if (extra.empty()) return t;
  std::vector<std::string> noms = t.signature().nominals();
  noms.insert(noms.end(), extra.begin(), extra.end());
  auto sig = std::make_shared<const Signature>(t.signature().props(), std::move(noms));
  const int idx = t.grid().index(placeholder);
  std::vector<StatePtr> states;
  states.reserve(t.size());
  for (const auto& s : t.states()) {
    std::vector<int> placed = s->nominals();
    placed.resize(placed.size() + extra.size(), idx);
    states.push_back(std::make_shared<const State>(State(s->props(), std::move(placed))));
  }
  return Trace(Trace::Unchecked{}, t.grid(), std::move(sig), std::move(states));
}

}  // namespace hstl
