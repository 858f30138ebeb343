#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "esk/ast.hpp"
#include "esk/events.hpp"

namespace esk {

struct DiffOptions {
  uint64_t seed = 1;
  int count = 100;
  int depth = 5;
};

struct Failure {
  uint64_t seed;
  std::string property;
  std::string program;  // symbolic, shrunk
  std::string detail;
};

struct Report {
  int cases = 0;
  long long checks = 0;
  std::vector<Failure> failures;

  bool ok() const { return failures.empty(); }
  std::string summary() const;
};

/// Random differential run over `count` seeds starting at `seed`;
/// failing programs are shrunk before reporting.
Report difftest(const DiffOptions& opt);

// The individual properties, exposed so the acceptance suite can drive
// them with its own counts. Each returns a failure description, or
// nothing when the property holds.
namespace props {

using Outcome = std::optional<std::string>;

// Refinement: a constructive reaction validates logically.
Outcome refinement(const StmtPtr& p, const Event& e);

// Determinism, inert derivative, domain invariance, output totality.
Outcome structural(const StmtPtr& p, const Event& e);

// The Must/Can correctness bounds on constructive and logical reactions.
Outcome mustcan_correctness(const StmtPtr& p, const Event& e);

// Monotone Must / antimonotone Can; non-empty Can codes; singleton Must
// codes; Must below Can.
Outcome monotonicity(uint64_t seed, const StmtPtr& p, int rounds = 3);

// Multi-instant agreement of the behavioral and state interpreters,
// expansion alignment, and the logical mirrors.
Outcome trace_equivalence(uint64_t seed, const StmtPtr& p);

// Microstep runs against the state semantics (surface then resumed
// instants); requires a loop-free program.
Outcome micro_vs_css(uint64_t seed, const StmtPtr& p);

// Per-step Scott increase, frame properties, measure decrease,
// schedule confluence, circuit-invariant checks, inert-run whiteness,
// and both monotonicity statements.
Outcome micro_metatheory(uint64_t seed, const StmtPtr& p);

// Program-level reaction vs the declaration-wrapping oracle, and the
// logical reaction superset.
Outcome driver_consistency(uint64_t seed, const StmtPtr& p);

}  // namespace props

}  // namespace esk
