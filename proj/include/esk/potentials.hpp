#pragma once

#include <set>
#include <string>

#include "esk/ast.hpp"
#include "esk/events.hpp"

namespace esk {

/// What a statement must/can do in the instant: emitted signals and
/// completion codes. Must carries at most one code; Can at least one.
struct Potential {
  std::set<std::string> signals;
  std::set<CompletionCode> codes;

  bool subset_of(const Potential& other) const;
  bool operator==(const Potential& other) const = default;
  std::string to_string() const;  // `{sigs} / {codes}`
};

/// Can's strength flag, ordered Minus <= Plus.
enum class CanFlag : unsigned char { Minus, Plus };

/// Signals that must be emitted and the code that must be returned,
/// given the information in E (which may bind signals to Bot).
Potential must(const StmtPtr& p, const Event& e);

/// Over-approximation of emissions and codes still possible under E.
Potential can(CanFlag b, const StmtPtr& p, const Event& e);

}  // namespace esk
