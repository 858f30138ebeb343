#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

namespace esk {

// Completion codes: 0 terminates, 1 pauses, k >= 2 exits the (k-2)-th
// enclosing trap.
using CompletionCode = int;

enum class StmtKind {
  Const,    // nothing (0), pause (1), exit (k >= 2)
  Emit,     // !s
  Awimm,    // awimm s / awimm ¬s
  If,       // s ? p : q
  Suspend,  // s ⊃ p
  Seq,      // p ; q
  Par,      // p || q
  Loop,     // p°
  Trap,     // {p}
  Shift,    // ↑p
  Signal,   // s \ p
};

class Statement;
using StmtPtr = std::shared_ptr<const Statement>;

/// Immutable kernel statement tree. Shared freely; never mutated after
/// construction.
class Statement {
 public:
  StmtKind kind;
  CompletionCode code = 0;  // Const only
  std::string signal;       // Emit, Awimm, If, Suspend, Signal
  bool negated = false;     // Awimm: true tests for absence
  StmtPtr left, right;      // children (unary nodes use left)
};

namespace stmt {
StmtPtr constant(CompletionCode k);
StmtPtr emit(const std::string& s);
StmtPtr awimm(const std::string& s, bool negated = false);
StmtPtr test(const std::string& s, StmtPtr then_branch, StmtPtr else_branch);
StmtPtr suspend(const std::string& s, StmtPtr body);
StmtPtr seq(StmtPtr left, StmtPtr right);
StmtPtr par(StmtPtr left, StmtPtr right);
StmtPtr loop(StmtPtr body);
StmtPtr trap(StmtPtr body);
StmtPtr shift(StmtPtr body);
StmtPtr local(const std::string& s, StmtPtr body);
}  // namespace stmt

bool equal(const StmtPtr& a, const StmtPtr& b);
int compare(const StmtPtr& a, const StmtPtr& b);  // total order for sets

/// Signals read or emitted outside any enclosing declaration.
std::set<std::string> free_signals(const StmtPtr& p);

bool contains_loop(const StmtPtr& p);
int node_count(const StmtPtr& p);

/// All direct and indirect sub-statements, preorder, including p itself.
std::vector<StmtPtr> subterms(const StmtPtr& p);

// Completion-code algebra.
CompletionCode down_code(CompletionCode k);  // trap: 2 caught, >2 shifted down
CompletionCode up_code(CompletionCode k);    // shift: traps pushed up
CompletionCode par_code(CompletionCode k1, CompletionCode k2);

/// Kills the derivative unless the statement paused.
StmtPtr delta(CompletionCode k, StmtPtr p);

}  // namespace esk
