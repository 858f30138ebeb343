#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "esk/ast.hpp"
#include "esk/events.hpp"
#include "esk/state.hpp"

namespace esk {

using CodeSet = std::set<CompletionCode>;

/// Completion-code wires in one-hot encoding: Black(k) means wire k is 1,
/// White(K) means the wires outside K are 0 and none is known to be 1.
class OutColor {
 public:
  static OutColor black(CompletionCode k) { return OutColor(true, k, {}); }
  static OutColor white(CodeSet codes) {
    return OutColor(false, 0, std::move(codes));
  }
  static OutColor white_all() { return OutColor(false, 0, {}); }

  bool is_black() const { return black_; }
  bool is_white() const { return !black_; }
  bool is_white_all() const { return !black_ && codes_.empty(); }
  CompletionCode code() const { return code_; }
  const CodeSet& codes() const { return codes_; }

  bool operator==(const OutColor& other) const = default;
  std::string to_string() const;

 private:
  OutColor(bool black, CompletionCode code, CodeSet codes)
      : black_(black), code_(code), codes_(std::move(codes)) {}
  bool black_;
  CompletionCode code_;
  CodeSet codes_;
};

bool out_leq(const OutColor& a, const OutColor& b);
inline bool out_lt(const OutColor& a, const OutColor& b) {
  return out_leq(a, b) && !(a == b);
}

/// Wire-level OR of two one-hot sheaves; a Black side dominates.
OutColor out_union(const OutColor& a, const OutColor& b);

/// Removes the terminate wire (a sequence consumes its left code 0).
OutColor out_minus_zero(const OutColor& c);

OutColor out_map(const OutColor& c, CompletionCode (*f)(CompletionCode));

/// Return code of a suspend node given its suspension status.
OutColor susp_now(Status bo, const OutColor& out);

/// Parallel synchronizer: max of branch codes; a dead branch (White ∅)
/// contributes nothing. sel values are accepted per the interface but
/// the combination depends only on the colors.
OutColor synchronize(bool sel_p, bool sel_q, const OutColor& p,
                     const OutColor& q);

/// Go/Res/Susp wires; Sel lives beside them on the node.
struct InColor {
  Status go = Status::Bot;
  Status res = Status::Bot;
  Status susp = Status::Bot;

  bool operator==(const InColor& other) const = default;
  std::string to_string() const;
};

bool in_leq(const InColor& a, const InColor& b);
inline bool in_lt(const InColor& a, const InColor& b) {
  return in_leq(a, b) && !(a == b);
}

enum class MKind {
  Nothing,
  Pause,
  Exit,
  Emit,
  Awimm,
  Trap,
  Shift,
  Suspend,
  If,
  Seq,
  Par,
  Signal,
};

struct Micro;
using MicroPtr = std::shared_ptr<const Micro>;

/// A statement node decorated with input and output colors. Loops are
/// not representable.
struct Micro {
  bool sel = false;
  InColor in;
  MKind kind;
  int wire = 0;         // Exit: source code is wire + 2
  std::string signal;   // Emit, Awimm, Suspend, If, Signal
  bool negated = false; // Awimm polarity
  MicroPtr left, right;
  OutColor out = OutColor::white_all();
};

/// Scott order: same base and sel everywhere, colors pointwise.
bool mleq(const MicroPtr& a, const MicroPtr& b);

/// All input colors resolved and all outputs Black or White ∅.
bool is_total(const MicroPtr& m);

/// Bot wires plus candidate-code counts; strictly decreases per step.
int measure(const MicroPtr& m);

StmtPtr micro_base(const MicroPtr& m);

MicroPtr from_cmd(const StmtPtr& p);     // sel false everywhere
MicroPtr from_state(const StatePtr& s);  // sel true on the active spine
MicroPtr from_term(const Term& t);

enum class GrMode { Start, Resume };
MicroPtr set_gr(const MicroPtr& m, GrMode mode);

/// Root input-color override (tests and inert-reduction runs).
MicroPtr set_root_in(const MicroPtr& m, InColor in);

struct StepInfo {
  std::string rule;
  std::vector<int> path;  // child indices from the root
  std::string before, after;
};

struct MicroStep {
  MicroPtr next;
  StepInfo info;
};

/// All single-rule successors. An empty result means a normal form.
std::vector<MicroStep> micro_step(const Event& e, const MicroPtr& m);

enum class Schedule { First, Last, Random };

struct RunStats {
  int steps = 0;
  std::vector<StepInfo> trace;
};

/// `#n rule=<name> path=<child indices> before=<color> after=<color>`,
/// one line per step.
std::string format_steps(const RunStats& stats);

/// Applies micro_step to a normal form; the step budget is the initial
/// information deficit, so exceeding it means a broken measure.
MicroPtr micro_run(const Event& e, MicroPtr m, Schedule schedule,
                   uint64_t seed = 0, RunStats* stats = nullptr);

/// Emitted-signal readout over dom(E): Plus if some emitter fired,
/// Minus if all are dead, Bot while one is undecided.
Event to_event(const MicroPtr& m, const Event& e);
Status emitter_status(const MicroPtr& m, const std::string& s);

struct ToTermResult {
  Term term;
  CompletionCode code;
  Event output;
};

/// Reads the next-instant term, the completion code, and the output
/// event off a total microstate; kills pausing parallel branches whose
/// sibling raised a trap.
ToTermResult to_term(const MicroPtr& m, const Event& e);

/// The term a microstate was built from, reconstructed from sel marks.
Term back_to_term(const MicroPtr& m);

/// Consequences of the circuit-translation invariant; empty when clean.
std::vector<std::string> vc_check(const Event& e, const MicroPtr& m);

std::string micro_to_string(const MicroPtr& m);
std::string dump_dot(const MicroPtr& m);

}  // namespace esk
