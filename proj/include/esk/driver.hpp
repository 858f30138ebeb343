#pragma once

#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "esk/ast.hpp"
#include "esk/behavioral.hpp"
#include "esk/events.hpp"
#include "esk/microstep.hpp"
#include "esk/state.hpp"

namespace esk {

/// A program: interface plus body. Inputs and outputs are disjoint and
/// cover the body's free signals.
struct ProgramInterface {
  std::set<std::string> inputs;
  std::set<std::string> outputs;
  StmtPtr body;

  void validate() const;  // throws InternalError on a bad interface
};

/// Input assignment for one instant: signals present (others absent).
using InputAssignment = std::set<std::string>;

struct Reaction {
  Event inputs;   // over the input interface
  Event outputs;  // over the output interface
  CompletionCode code;
};

enum class Engine { Lbs, Cbs, Css, Micro };

struct ReactionTrace {
  std::vector<Reaction> reactions;
  // Residue after the last computed instant; empty when execution ended.
  std::optional<StmtPtr> derivative;  // cbs / lbs
  std::optional<Term> term;           // css / micro

  std::string serialize() const;  // one `I ⊢ O | k` line per instant
};

struct ReactError {
  // IncoherentInput: the body emitted an input the environment did not
  // provide, so no reaction satisfies the emitted-within-received rule.
  enum Kind { NonConstructive, Blocked, Instantaneous, IncoherentInput } kind;
  std::vector<std::string> signals;
  std::string message() const;
};

using ReactResult = std::variant<Reaction, ReactError>;

/// Constructive reaction with program-level feedback: output statuses
/// start at Bot and are fixed by the Must/Can pair until stable. Also
/// returns the derivative via `residue`.
ReactResult react_cbs(const ProgramInterface& p, const InputAssignment& i,
                      StmtPtr* residue = nullptr);

struct LbsReaction {
  Event outputs;
  CompletionCode code;
  StmtPtr derivative;
  bool operator==(const LbsReaction& other) const {
    return code == other.code && outputs == other.outputs &&
           equal(derivative, other.derivative);
  }
};

struct LbsAnswer {
  std::vector<LbsReaction> distinct;  // deduplicated results
  int derivations = 0;                // raw derivation count
};

/// All coherent logical reactions: output assignments are enumerated and
/// a transition is kept when every emission was received and every
/// received output was emitted.
LbsAnswer react_lbs(const ProgramInterface& p, const InputAssignment& i);

/// Per-instant microstep debugging payloads (engine=Micro only).
struct MicroDebug {
  std::vector<std::string> dots;   // stabilized microstates as DOT
  std::vector<std::string> steps;  // formatted step traces
};

/// Multi-instant reaction; stops at the first instant with code != 1 or
/// when the input stream is exhausted. engine=Micro requires a loop-free
/// body; engine=Lbs requires exactly one coherent reaction per instant.
ReactionTrace run(const ProgramInterface& p,
                  const std::vector<InputAssignment>& inputs, Engine engine,
                  MicroDebug* debug = nullptr);

enum class Verdict { Constructive, NonCausal, Nondeterministic, Deadlock };

struct CheckReport {
  Verdict verdict;
  int lbs_reactions = 0;  // derivation count at the program level
  std::string cbs_detail;  // rejection detail when not constructive
  std::string to_string() const;
};

/// First-instant classification with all inputs absent.
CheckReport check(const ProgramInterface& p);

Event event_from_assignment(const std::set<std::string>& domain,
                            const InputAssignment& present);

}  // namespace esk
