#pragma once

#include <string>
#include <variant>
#include <vector>

#include "esk/ast.hpp"
#include "esk/events.hpp"

namespace esk {

/// One reaction of a statement: full-domain output event, completion
/// code, and the derivative to run at the next instant.
struct Transition {
  Event output;
  CompletionCode code;
  StmtPtr derivative;

  bool operator==(const Transition& other) const {
    return code == other.code && output == other.output &&
           equal(derivative, other.derivative);
  }
};

/// Why the constructive semantics produced no transition.
struct NoReaction {
  enum Kind { NonConstructive, Blocked } kind;
  std::string signal;
};

using CbsResult = std::variant<Transition, NoReaction>;

inline bool reacted(const CbsResult& r) {
  return std::holds_alternative<Transition>(r);
}
inline const Transition& transition(const CbsResult& r) {
  return std::get<Transition>(r);
}
inline const NoReaction& no_reaction(const CbsResult& r) {
  return std::get<NoReaction>(r);
}

/// All derivable logical transitions, one entry per derivation (the two
/// signal rules may yield equal tuples from distinct derivations; both
/// are listed). E must be total.
std::vector<Transition> lbs_transitions(const StmtPtr& p, const Event& e);

/// Deterministic constructive reaction; E may bind signals to Bot.
CbsResult cbs_step(const StmtPtr& p, const Event& e);

/// Membership of t in the logical transitions of p under E.
bool lbs_check(const StmtPtr& p, const Event& e, const Transition& t);

}  // namespace esk
