#pragma once

#include <random>
#include <string>
#include <vector>

#include "esk/ast.hpp"
#include "esk/events.hpp"

namespace esk {

using Rng = std::mt19937_64;

struct GenOptions {
  int max_depth = 5;
  bool allow_loops = true;
  int max_decl_nesting = 5;  // keeps the logical enumeration tractable
};

/// Well-scoped random program over the ambient signals. Loop bodies end
/// in a pause so they can never terminate instantly; exit codes stay
/// within reach of the enclosing traps (plus one level to the top).
StmtPtr random_program(Rng& rng, const GenOptions& opt,
                       const std::vector<std::string>& ambient);

Event random_total_event(Rng& rng, const std::vector<std::string>& names);

/// Lowers a random subset of bindings to Bot; result <= e.
Event lower_random(Rng& rng, const Event& e);

std::vector<std::vector<std::string>> random_input_stream(
    Rng& rng, const std::vector<std::string>& inputs, int max_instants);

}  // namespace esk
