#pragma once

#include <string>
#include <vector>

#include "esk/ast.hpp"
#include "esk/errors.hpp"

namespace esk {

enum class Form { Textual, Symbolic };

StmtPtr parse(const std::string& text, Form form);

/// A program file: optional `input a, b;` / `output o;` headers, then a
/// body statement in either concrete form.
struct ParsedProgram {
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  StmtPtr body;
};

ParsedProgram parse_program(const std::string& text, Form form);
ParsedProgram parse_program_auto(const std::string& text);

}  // namespace esk
