#pragma once

#include <string>

#include "esk/ast.hpp"
#include "esk/parse.hpp"

namespace esk {

/// Inverse of parse: parse(print(p, f), f) is structurally equal to p.
std::string print(const StmtPtr& p, Form form);

}  // namespace esk
