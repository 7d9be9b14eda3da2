#pragma once

// Satisfaction checking of formulas on finite traces.
//
// `Evaluator` is the memoized checker. Subproblems are (time step, node,
// viewpoint, binder environment). The table has one slot per (time step,
// node occurrence); a slot remembers the viewpoint and environment it was
// computed under and only answers lookups from that same context. A lookup
// from a different context is recomputed and does not overwrite the slot, so
// the table never holds more than |trace| * |nodes| entries and an entry is
// never rewritten.
//
// Binders do not copy the trace: a bound nominal lives in an environment of
// overrides that shadows the trace's placement from the binding step on.
// Evaluation only moves forward in time, so "from step k on" and "from now
// on" coincide for every lookup the subformula can make.
//
// `eval_naive` is the direct recursive reading of the satisfaction relation
// over real suffixes and substituted traces. It is exponential on nested
// untils and exists as an independent reference.

#include "hstl/core.hpp"
#include "hstl/error.hpp"
#include "hstl/formula.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace hstl {

class Evaluator {
 public:
  Evaluator(const GridGraph& grid, std::shared_ptr<const Signature> sig, const Formula& formula)
      : grid_(grid), sig_(std::move(sig)) {
    if (!sig_) throw ValidationError("evaluator needs a signature");
    const Formula core = is_desugared(formula) ? formula : desugar(formula, grid_);
    table_ = index_nodes(core);
    resolve_symbols(core);
    compile();
    envs_.assign(static_cast<std::size_t>(nslots_), -1);
  }

  const NodeTable& nodes() const noexcept { return table_; }
  std::size_t node_count() const noexcept { return program_.size(); }
  const GridGraph& grid() const noexcept { return grid_; }

  /// Memo slots written by the most recent top-level evaluation.
  std::size_t memo_entries() const noexcept { return entries_; }

  bool eval(const Trace& t, Position p) {
    check_trace(t);
    return run(t, grid_.index(p));
  }

  PositionSet sat_points(const Trace& t) {
    check_trace(t);
    PositionSet out(grid_.size());
    for (int p = 0; p < grid_.size(); ++p) {
      if (run(t, p)) out.insert(p);
    }
    return out;
  }

  /// Evaluates at one row-major position index. The caller guarantees the
  /// trace matches this evaluator's grid and signature.
  bool eval_unchecked(const Trace& t, int position_index) { return run(t, position_index); }

 private:
  struct Instr {
    Op op = Op::Top;
    int a = -1;
    int b = -1;
    int slot = -1;
    Direction dir = Direction::Front;
  };

  struct Slot {
    std::uint32_t stamp = 0;
    std::int32_t pos = 0;
    std::int32_t env = 0;
    bool value = false;
  };

  void resolve_symbols(const Formula& core) {
    const Symbols syms = symbols(core);
    for (const auto& p : syms.props) {
      if (!sig_->prop_slot(p)) throw ValidationError("undeclared proposition '" + p + "'");
    }
    for (const auto& v : syms.nominals) {
      if (!sig_->nominal_slot(v)) throw ValidationError("undeclared nominal '" + v + "'");
    }
    declared_ = static_cast<int>(sig_->nominals().size());
    nslots_ = declared_;
    for (const auto& v : syms.bound) {
      if (sig_->prop_slot(v)) throw ValidationError("proposition '" + v + "' used as a binder");
      if (!sig_->nominal_slot(v)) extra_.emplace(v, nslots_++);
    }
  }

  int nominal_slot(const std::string& name) const {
    if (auto s = sig_->nominal_slot(name)) return *s;
    return extra_.at(name);
  }

  void compile() {
    program_.resize(table_.size());
    for (std::size_t id = 0; id < table_.size(); ++id) {
      const auto& e = table_[id];
      Instr& in = program_[id];
      in.op = e.formula.op();
      if (!e.children.empty()) in.a = e.children[0];
      if (e.children.size() > 1) in.b = e.children[1];
      switch (in.op) {
        case Op::Prop: in.slot = *sig_->prop_slot(e.formula.name()); break;
        case Op::Nom:
        case Op::At:
        case Op::Bind: in.slot = nominal_slot(e.formula.name()); break;
        case Op::Move: in.dir = e.formula.direction(); break;
        default: break;
      }
    }
  }

  void check_trace(const Trace& t) const {
    if (!(t.grid() == grid_)) throw ValidationError("trace grid differs from the evaluator grid");
    if (t.signature_ptr() != sig_ && !(t.signature() == *sig_)) {
      throw ValidationError("trace signature differs from the evaluator signature");
    }
  }

  bool run(const Trace& t, int pos) {
    trace_ = &t;
    len_ = static_cast<int>(t.size());
    const std::size_t need = static_cast<std::size_t>(len_) * program_.size();
    if (memo_.size() < need) memo_.resize(need);
    if (++stamp_ == 0) {  // wrapped: forget everything
      for (auto& s : memo_) s.stamp = 0;
      stamp_ = 1;
    }
    entries_ = 0;
    return visit(0, 0, pos, 0);
  }

  int lookup(int k, int slot, int env) const {
    const int over = envs_[static_cast<std::size_t>(env * nslots_ + slot)];
    if (over >= 0) return over;
    return trace_->state(static_cast<std::size_t>(k)).nominal(slot);
  }

  int bind_env(int env, int slot, int pos) {
    if (envs_[static_cast<std::size_t>(env * nslots_ + slot)] == pos) return env;
    const std::uint64_t key =
        (static_cast<std::uint64_t>(env) * static_cast<std::uint64_t>(nslots_) + static_cast<std::uint64_t>(slot)) *
            static_cast<std::uint64_t>(grid_.size()) +
        static_cast<std::uint64_t>(pos);
    auto [it, inserted] = env_ids_.try_emplace(key, 0);
    if (inserted) {
      const int id = static_cast<int>(envs_.size()) / nslots_;
      const auto base = static_cast<std::ptrdiff_t>(env * nslots_);
      envs_.insert(envs_.end(), envs_.begin() + base, envs_.begin() + base + nslots_);
      envs_[static_cast<std::size_t>(id * nslots_ + slot)] = pos;
      it->second = id;
    }
    return it->second;
  }

  bool visit(int k, int node, int pos, int env) {
    Slot& s = memo_[static_cast<std::size_t>(k) * program_.size() + static_cast<std::size_t>(node)];
    const bool owned = s.stamp == stamp_;
    if (owned && s.pos == pos && s.env == env) return s.value;

    const Instr& in = program_[static_cast<std::size_t>(node)];
    bool r = false;
    switch (in.op) {
      case Op::Top: r = true; break;
      case Op::Prop: r = trace_->state(static_cast<std::size_t>(k)).prop(in.slot).contains(pos); break;
      case Op::Nom: r = lookup(k, in.slot, env) == pos; break;
      case Op::Not: r = !visit(k, in.a, pos, env); break;
      case Op::And: r = visit(k, in.a, pos, env) && visit(k, in.b, pos, env); break;
      case Op::Next: r = k + 1 < len_ && visit(k + 1, in.a, pos, env); break;
      case Op::Until:
        r = visit(k, in.b, pos, env) ||
            (k + 1 < len_ && visit(k, in.a, pos, env) && visit(k + 1, node, pos, env));
        break;
      case Op::Move: {
        const int q = grid_.neighbor_index(pos, in.dir);
        r = q >= 0 && visit(k, in.a, q, env);
        break;
      }
      case Op::At: r = visit(k, in.a, lookup(k, in.slot, env), env); break;
      case Op::Bind: r = visit(k, in.a, pos, bind_env(env, in.slot, pos)); break;
      default: throw Error("evaluator reached a sugared operator");
    }
    // Recursive calls touch a later step or a deeper node, never this slot.
    if (!owned) {
      s = Slot{stamp_, pos, env, r};
      ++entries_;
    }
    return r;
  }

  GridGraph grid_;
  std::shared_ptr<const Signature> sig_;
  NodeTable table_;
  std::vector<Instr> program_;
  int declared_ = 0;
  int nslots_ = 0;
  std::unordered_map<std::string, int> extra_;

  // Environments persist across calls: an id depends only on how it was built.
  std::vector<int> envs_;
  std::unordered_map<std::uint64_t, int> env_ids_;

  std::vector<Slot> memo_;
  std::uint32_t stamp_ = 0;
  std::size_t entries_ = 0;
  const Trace* trace_ = nullptr;
  int len_ = 0;
};

namespace detail {
inline void require_grid(const GridGraph& g, const Trace& t) {
  if (!(g == t.grid())) throw ValidationError("trace was built for a different grid");
}
}  // namespace detail

inline bool eval(const GridGraph& g, const Trace& t, Position p, const Formula& f) {
  detail::require_grid(g, t);
  Evaluator ev(g, t.signature_ptr(), f);
  return ev.eval(t, p);
}

inline PositionSet sat_points(const GridGraph& g, const Trace& t, const Formula& f) {
  detail::require_grid(g, t);
  Evaluator ev(g, t.signature_ptr(), f);
  return ev.sat_points(t);
}

namespace detail {

inline bool naive(const GridGraph& g, const Trace& t, Position p, const Formula& f) {
  switch (f.op()) {
    case Op::Top: return true;
    case Op::Prop: return t.holds(0, f.name(), p);
    case Op::Nom: return t.nominal(0, f.name()) == p;
    case Op::Not: return !naive(g, t, p, f.child());
    case Op::And: return naive(g, t, p, f.child(0)) && naive(g, t, p, f.child(1));
    case Op::Next: {
      auto rest = suffix(t, 1);
      return rest && naive(g, *rest, p, f.child());
    }
    case Op::Until:
      for (std::size_t k = 0; k < t.size(); ++k) {
        auto tk = suffix(t, k);
        if (naive(g, *tk, p, f.child(1))) return true;
        if (!naive(g, *tk, p, f.child(0))) return false;
      }
      return false;
    case Op::Move: {
      auto q = g.neighbor(p, f.direction());
      return q && naive(g, t, *q, f.child());
    }
    case Op::At: return naive(g, t, t.nominal(0, f.name()), f.child());
    case Op::Bind: return naive(g, substitute(t, f.name(), p, 0), p, f.child());
    default: throw Error("naive evaluator reached a sugared operator");
  }
}

}  // namespace detail

/// Reference checker: a literal transcription of the satisfaction relation.
inline bool eval_naive(const GridGraph& g, const Trace& t, Position p, const Formula& f) {
  detail::require_grid(g, t);
  if (!g.contains(p)) throw ValidationError("point " + to_string(p) + " outside the grid");
  const Formula core = desugar(f, g);
  const Symbols syms = symbols(core);
  for (const auto& q : syms.props) {
    if (!t.signature().prop_slot(q)) throw ValidationError("undeclared proposition '" + q + "'");
  }
  for (const auto& v : syms.nominals) {
    if (!t.signature().nominal_slot(v)) throw ValidationError("undeclared nominal '" + v + "'");
  }
  std::vector<std::string> extra;
  for (const auto& v : syms.bound) {
    if (!t.signature().nominal_slot(v)) extra.push_back(v);
  }
  return detail::naive(g, with_nominals(t, extra, Position{1, 1}), p, core);
}

}  // namespace hstl
