#pragma once

#include <variant>
#include <vector>

#include "esk/ast.hpp"
#include "esk/behavioral.hpp"
#include "esk/events.hpp"
#include "esk/potentials.hpp"

namespace esk {

// States annotate a statement with activation marks; the only elementary
// states are an activated pause and an activated awimm, everything else
// is a statement constructor with a state in (at least) one slot.
enum class StateKind {
  Pause,     // ^1
  Await,     // ^awimm s
  Suspend,   // s ⊃ σ
  IfLeft,    // s ? σ : q
  IfRight,   // s ? p : σ
  SeqLeft,   // σ ; q
  SeqRight,  // p ; σ
  ParLeft,   // σ || q
  ParRight,  // p || σ
  ParBoth,   // σ || τ
  Loop,      // σ°
  Trap,      // {σ}
  Shift,     // ↑σ
  Signal,    // s \ σ
};

class State;
using StatePtr = std::shared_ptr<const State>;

class State {
 public:
  StateKind kind;
  std::string signal;        // Await, Suspend, IfLeft/Right, Signal
  bool negated = false;      // Await polarity
  StatePtr sleft, sright;    // state children
  StmtPtr left, right;       // statement children (the inactive sides)
};

namespace st {
StatePtr pause();
StatePtr await(const std::string& s, bool negated = false);
StatePtr suspend(const std::string& s, StatePtr body);
StatePtr if_left(const std::string& s, StatePtr thn, StmtPtr els);
StatePtr if_right(const std::string& s, StmtPtr thn, StatePtr els);
StatePtr seq_left(StatePtr l, StmtPtr r);
StatePtr seq_right(StmtPtr l, StatePtr r);
StatePtr par_left(StatePtr l, StmtPtr r);
StatePtr par_right(StmtPtr l, StatePtr r);
StatePtr par_both(StatePtr l, StatePtr r);
StatePtr loop(StatePtr body);
StatePtr trap(StatePtr body);
StatePtr shift(StatePtr body);
StatePtr local(const std::string& s, StatePtr body);
}  // namespace st

int compare(const StatePtr& a, const StatePtr& b);
bool equal(const StatePtr& a, const StatePtr& b);

/// A term is a state (execution resumes there) or a bare statement
/// (execution is over).
class Term {
 public:
  Term() = default;
  explicit Term(StatePtr s) : state_(std::move(s)) {}
  explicit Term(StmtPtr p) : stmt_(std::move(p)) {}

  bool is_state() const { return state_ != nullptr; }
  const StatePtr& state() const { return state_; }
  const StmtPtr& stmt() const { return stmt_; }

  bool operator==(const Term& other) const;
  std::string serialize() const;  // symbolic, active leaves marked with ^

 private:
  StatePtr state_;
  StmtPtr stmt_;
};

StmtPtr base(const StatePtr& s);
StmtPtr base(const Term& t);

// Term-lifted constructors: a state slot propagates statehood upward.
// If and Seq reject two state sides (no valid state has both).
Term term_if(const std::string& s, const Term& l, const Term& r);
Term term_suspend(const std::string& s, const Term& t);
Term term_seq(const Term& l, const Term& r);
Term term_par(const Term& l, const Term& r);
Term term_loop(const Term& t);
Term term_trap(const Term& t);
Term term_shift(const Term& t);
Term term_local(const std::string& s, const Term& t);

/// What the state still has to execute, as a statement.
StmtPtr expand(const StatePtr& s);

/// Equals the term when it pauses, its base otherwise.
Term delta_term(CompletionCode k, const Term& t);

Potential must_state(const StatePtr& s, const Event& e);
Potential can_state(CanFlag b, const StatePtr& s, const Event& e);

struct TermTransition {
  Event output;
  CompletionCode code;
  Term term;

  bool operator==(const TermTransition& other) const {
    return code == other.code && output == other.output && term == other.term;
  }
};

using CssResult = std::variant<TermTransition, NoReaction>;

inline bool reacted(const CssResult& r) {
  return std::holds_alternative<TermTransition>(r);
}
inline const TermTransition& term_transition(const CssResult& r) {
  return std::get<TermTransition>(r);
}
inline const NoReaction& no_reaction(const CssResult& r) {
  return std::get<NoReaction>(r);
}

/// Constructive state semantics: starting a fresh statement.
CssResult css_surface(const StmtPtr& p, const Event& e);

/// Constructive state semantics: resuming an active state.
CssResult css_depth(const StatePtr& s, const Event& e);

/// Logical variants: same rule bodies, signal statuses enumerated.
std::vector<TermTransition> lss_surface(const StmtPtr& p, const Event& e);
std::vector<TermTransition> lss_depth(const StatePtr& s, const Event& e);

}  // namespace esk
