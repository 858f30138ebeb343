#include "doctest.h"
#include "esk/gen.hpp"
#include "esk/parse.hpp"
#include "esk/print.hpp"

using namespace esk;

TEST_CASE("textual keywords map to the kernel") {
  CHECK(equal(parse("nothing", Form::Textual), stmt::constant(0)));
  CHECK(equal(parse("pause", Form::Textual), stmt::constant(1)));
  CHECK(equal(parse("emit s", Form::Textual), stmt::emit("s")));
  CHECK(equal(parse("await immediate s", Form::Textual), stmt::awimm("s")));
  CHECK(equal(parse("await immediate not s", Form::Textual),
              stmt::awimm("s", true)));
  CHECK(equal(parse("suspend pause when s", Form::Textual),
              stmt::suspend("s", stmt::constant(1))));
}

TEST_CASE("sequence parses to the right") {
  StmtPtr p = parse("nothing ; pause ; emit a", Form::Textual);
  CHECK(equal(p, stmt::seq(stmt::constant(0),
                           stmt::seq(stmt::constant(1), stmt::emit("a")))));
  StmtPtr q = parse("0 ; 1 ; !a", Form::Symbolic);
  CHECK(equal(p, q));
}

TEST_CASE("trap names resolve like de Bruijn indices") {
  StmtPtr p = parse(
      "trap T in loop if s then exit T^2 else pause end end end",
      Form::Textual);
  StmtPtr expect = stmt::trap(stmt::loop(
      stmt::test("s", stmt::constant(2), stmt::constant(1))));
  CHECK(equal(p, expect));

  // Crossing one trap adds one level.
  StmtPtr two = parse("trap U in trap T in exit U end end", Form::Textual);
  CHECK(equal(two, stmt::trap(stmt::trap(stmt::constant(3)))));

  // Shadowed names resolve to the nearest trap.
  StmtPtr sh = parse("trap T in trap T in exit T end end", Form::Textual);
  CHECK(equal(sh, stmt::trap(stmt::trap(stmt::constant(2)))));

  CHECK_THROWS_AS(parse("exit T", Form::Textual), ParseError);
  CHECK_THROWS_AS(parse("exit 1", Form::Textual), ParseError);
  CHECK_THROWS_AS(parse("trap T in exit T^3 end", Form::Textual), ParseError);
  CHECK(equal(parse("exit 4", Form::Textual), stmt::constant(4)));
}

TEST_CASE("symbolic forms") {
  CHECK(equal(parse("0", Form::Symbolic), stmt::constant(0)));
  CHECK(equal(parse("7", Form::Symbolic), stmt::constant(7)));
  CHECK(equal(parse("!s", Form::Symbolic), stmt::emit("s")));
  CHECK(equal(parse("awimm s", Form::Symbolic), stmt::awimm("s")));
  CHECK(equal(parse("awimm \xc2\xac s", Form::Symbolic),
              stmt::awimm("s", true)));
  CHECK(equal(parse("s ? !a : !b", Form::Symbolic),
              stmt::test("s", stmt::emit("a"), stmt::emit("b"))));
  CHECK(equal(parse("s \xe2\x8a\x83 1", Form::Symbolic),
              stmt::suspend("s", stmt::constant(1))));
  CHECK(equal(parse("(1)\xc2\xb0", Form::Symbolic),
              stmt::loop(stmt::constant(1))));
  CHECK(equal(parse("{2}", Form::Symbolic), stmt::trap(stmt::constant(2))));
  CHECK(equal(parse("\xe2\x86\x91 2", Form::Symbolic),
              stmt::shift(stmt::constant(2))));
  CHECK(equal(parse("s \\ !s", Form::Symbolic),
              stmt::local("s", stmt::emit("s"))));
}

TEST_CASE("symbolic precedence") {
  // ; binds tighter than ||, declarations are loosest.
  CHECK(equal(parse("0 ; 1 || !a", Form::Symbolic),
              stmt::par(stmt::seq(stmt::constant(0), stmt::constant(1)),
                        stmt::emit("a"))));
  CHECK(equal(parse("s \\ !s || !s", Form::Symbolic),
              stmt::local("s", stmt::par(stmt::emit("s"), stmt::emit("s")))));
  CHECK(equal(parse("s ? 0 : 1 ; !a", Form::Symbolic),
              stmt::seq(stmt::test("s", stmt::constant(0), stmt::constant(1)),
                        stmt::emit("a"))));
}

TEST_CASE("printer uses the machine notations") {
  CHECK(print(stmt::constant(1), Form::Textual) == "pause");
  CHECK(print(stmt::constant(1), Form::Symbolic) == "1");
  CHECK(print(stmt::par(stmt::constant(0), stmt::constant(1)),
              Form::Symbolic) == "0 || 1");
  CHECK(print(stmt::awimm("s", true), Form::Symbolic) ==
        "awimm \xc2\xacs");
}

TEST_CASE("classic delicate programs round-trip in both forms") {
  const char* programs[] = {
      "s \\ (s ? 0 : !s)",
      "s \\ (s ? !s : 0)",
      "s \\ (s ? !s : !s)",
      "s \\ ((s ? !o : !o2) ; !s)",
      "{(s ? 2 : 1)\xc2\xb0}",
      "s \xe2\x8a\x83 (1 ; !o)",
  };
  for (const char* text : programs) {
    StmtPtr p = parse(text, Form::Symbolic);
    CHECK(equal(parse(print(p, Form::Symbolic), Form::Symbolic), p));
    CHECK(equal(parse(print(p, Form::Textual), Form::Textual), p));
  }
}

TEST_CASE("round-trip on random programs") {
  Rng rng(2024);
  GenOptions opt;
  opt.max_depth = 6;
  for (int i = 0; i < 300; ++i) {
    StmtPtr p = random_program(rng, opt, {"a", "b", "c"});
    CAPTURE(print(p, Form::Symbolic));
    CHECK(equal(parse(print(p, Form::Symbolic), Form::Symbolic), p));
    CHECK(equal(parse(print(p, Form::Textual), Form::Textual), p));
  }
}

TEST_CASE("shift has no keyword but survives textual printing") {
  StmtPtr p = stmt::shift(stmt::seq(stmt::constant(4), stmt::constant(0)));
  std::string text = print(p, Form::Textual);
  CHECK(equal(parse(text, Form::Textual), p));
  // A named exit cannot cross the escape; the raw code is printed.
  StmtPtr q = stmt::trap(stmt::shift(stmt::constant(2)));
  std::string qtext = print(q, Form::Textual);
  CHECK(qtext.find("exit 2") != std::string::npos);
  CHECK(equal(parse(qtext, Form::Textual), q));
}

TEST_CASE("program files carry interface headers") {
  ParsedProgram p = parse_program_auto(
      "input a, b;\noutput o;\nif a then emit o else nothing end");
  CHECK(p.inputs == std::vector<std::string>{"a", "b"});
  CHECK(p.outputs == std::vector<std::string>{"o"});
  CHECK(equal(p.body, stmt::test("a", stmt::emit("o"), stmt::constant(0))));

  ParsedProgram q = parse_program_auto("!o");
  CHECK(q.inputs.empty());
  CHECK(equal(q.body, stmt::emit("o")));
}

TEST_CASE("parse errors carry positions") {
  try {
    parse("if s then nothing", Form::Textual);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 1);
    CHECK(e.column > 1);
  }
  CHECK_THROWS_AS(parse("pause extra", Form::Textual), ParseError);
  CHECK_THROWS_AS(parse("", Form::Symbolic), ParseError);
  CHECK_THROWS_AS(parse("!if", Form::Symbolic), ParseError);
}
