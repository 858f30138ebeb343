#include "doctest.h"
#include "esk/difftest.hpp"
#include "esk/driver.hpp"
#include "esk/faults.hpp"
#include "esk/parse.hpp"
#include "esk/print.hpp"

using namespace esk;

namespace {
StmtPtr sym(const char* text) { return parse(text, Form::Symbolic); }

ProgramInterface prog(std::set<std::string> ins, std::set<std::string> outs,
                      const char* body) {
  return ProgramInterface{std::move(ins), std::move(outs), sym(body)};
}
}  // namespace

TEST_CASE("reacting resolves outputs by feedback") {
  ReactResult r = react_cbs(prog({}, {"o"}, "!o"), {});
  REQUIRE(std::holds_alternative<Reaction>(r));
  const Reaction& re = std::get<Reaction>(r);
  CHECK(re.code == 0);
  CHECK(re.outputs.serialize() == "o=+");

  ReactResult cond = react_cbs(prog({"i"}, {"o"}, "i ? !o : 0"), {"i"});
  CHECK(std::get<Reaction>(cond).outputs.lookup("o") == Status::Plus);
  ReactResult off = react_cbs(prog({"i"}, {"o"}, "i ? !o : 0"), {});
  CHECK(std::get<Reaction>(off).outputs.lookup("o") == Status::Minus);
}

TEST_CASE("self-justifying programs are rejected at the program level") {
  ReactResult r = react_cbs(prog({}, {"o"}, "s \\ (s ? !s : !o)"), {});
  REQUIRE(std::holds_alternative<ReactError>(r));
  CHECK(std::get<ReactError>(r).kind == ReactError::NonConstructive);

  // An output fed back into itself is just as self-justifying.
  ReactResult loop = react_cbs(prog({}, {"o"}, "o ? !o : 0"), {});
  REQUIRE(std::holds_alternative<ReactError>(loop));
  CHECK(std::get<ReactError>(loop).signals ==
        std::vector<std::string>{"o"});
}

TEST_CASE("logical reactions enumerate coherent output assignments") {
  LbsAnswer dead = react_lbs(prog({}, {"o"}, "o ? 0 : !o"), {});
  CHECK(dead.derivations == 0);
  CHECK(dead.distinct.empty());

  LbsAnswer two = react_lbs(prog({}, {"o"}, "o ? !o : 0"), {});
  CHECK(two.derivations == 2);
  CHECK(two.distinct.size() == 2);

  LbsAnswer one = react_lbs(prog({}, {"o"}, "!o"), {});
  CHECK(one.derivations == 1);
  REQUIRE(one.distinct.size() == 1);
  CHECK(one.distinct[0].outputs.lookup("o") == Status::Plus);
  CHECK(one.distinct[0].code == 0);
}

TEST_CASE("check classifies the three delicate programs exactly") {
  CheckReport dead = check(prog({}, {}, "s \\ (s ? 0 : !s)"));
  CHECK(dead.verdict == Verdict::Deadlock);
  CHECK(dead.lbs_reactions == 0);

  CheckReport nondet = check(prog({}, {}, "s \\ (s ? !s : 0)"));
  CHECK(nondet.verdict == Verdict::Nondeterministic);
  CHECK(nondet.lbs_reactions == 2);

  CheckReport noncausal = check(prog({}, {}, "s \\ (s ? !s : !s)"));
  CHECK(noncausal.verdict == Verdict::NonCausal);
  CHECK(noncausal.lbs_reactions == 1);

  CheckReport fine = check(prog({}, {"o"}, "!o"));
  CHECK(fine.verdict == Verdict::Constructive);
}

TEST_CASE("multi-instant runs feed residues forward") {
  ProgramInterface p = prog({}, {"o"}, "1 ; !o");
  ReactionTrace t = run(p, {{}, {}}, Engine::Cbs);
  REQUIRE(t.reactions.size() == 2);
  CHECK(t.reactions[0].code == 1);
  CHECK(t.reactions[0].outputs.lookup("o") == Status::Minus);
  CHECK(t.reactions[1].code == 0);
  CHECK(t.reactions[1].outputs.lookup("o") == Status::Plus);

  ReactionTrace single = run(prog({}, {}, "0"), {{}, {}, {}}, Engine::Cbs);
  CHECK(single.reactions.size() == 1);
  CHECK(single.reactions[0].code == 0);
}

TEST_CASE("engines agree instant by instant") {
  ProgramInterface p = prog({"i"}, {"o"}, "i \xe2\x8a\x83 (1 ; !o)");
  std::vector<InputAssignment> stream = {{}, {"i"}, {}};
  ReactionTrace cbs = run(p, stream, Engine::Cbs);
  ReactionTrace css = run(p, stream, Engine::Css);
  ReactionTrace micro = run(p, stream, Engine::Micro);
  ReactionTrace lbs = run(p, stream, Engine::Lbs);
  CHECK(cbs.serialize() == css.serialize());
  CHECK(cbs.serialize() == micro.serialize());
  CHECK(cbs.serialize() == lbs.serialize());
  // Suspended in instant 2, so o only fires at instant 3.
  REQUIRE(cbs.reactions.size() == 3);
  CHECK(cbs.reactions[1].code == 1);
  CHECK(cbs.reactions[2].outputs.lookup("o") == Status::Plus);
}

TEST_CASE("trace serialization format") {
  ProgramInterface p = prog({"i"}, {"o"}, "i ? !o : 1");
  ReactionTrace t = run(p, {{"i"}}, Engine::Cbs);
  CHECK(t.serialize() == "i=+ \xe2\x8a\xa2 o=+ | 0\n");
  ReactionTrace t2 = run(p, {{}}, Engine::Cbs);
  CHECK(t2.serialize() == "i=- \xe2\x8a\xa2 o=- | 1\n");
}

TEST_CASE("interface validation") {
  CHECK_THROWS(prog({"x"}, {"x"}, "0").validate());
  CHECK_THROWS(prog({}, {}, "!a").validate());
  CHECK_NOTHROW(prog({"a"}, {}, "!a").validate());
}

TEST_CASE("difftest runs clean on a short burst") {
  Report r = difftest({1, 15, 4});
  for (const auto& f : r.failures)
    MESSAGE(f.property, " on ", f.program, ": ", f.detail);
  CHECK(r.ok());
  CHECK(r.cases == 15);
}

TEST_CASE("planted faults are caught quickly") {
  set_fault(Fault::ParDeltaDrop);
  Report drop = difftest({1, 40, 4});
  set_fault(Fault::None);
  CHECK(!drop.ok());

  set_fault(Fault::SeqCanFlagSwap);
  Report swap = difftest({1, 60, 5});
  set_fault(Fault::None);
  CHECK(!swap.ok());
}

TEST_CASE("suspension keeps guarding in later instants") {
  // body pauses twice; i suspends the middle instant, so the emission
  // slides to the fourth.
  ProgramInterface p = prog({"i"}, {"o"}, "i \xe2\x8a\x83 (1 ; 1 ; !o)");
  std::vector<InputAssignment> stream = {{}, {}, {"i"}, {}};
  ReactionTrace cbs = run(p, stream, Engine::Cbs);
  ReactionTrace css = run(p, stream, Engine::Css);
  ReactionTrace micro = run(p, stream, Engine::Micro);
  CHECK(cbs.serialize() == css.serialize());
  CHECK(cbs.serialize() == micro.serialize());
  REQUIRE(cbs.reactions.size() == 4);
  CHECK(cbs.reactions[2].code == 1);  // frozen, not advanced
  CHECK(cbs.reactions[3].outputs.lookup("o") == Status::Plus);
  CHECK(cbs.reactions[3].code == 0);
}

TEST_CASE("nested suspensions freeze through both layers") {
  ProgramInterface p =
      prog({"t", "s"}, {"o"}, "t \xe2\x8a\x83 (s \xe2\x8a\x83 (1 ; !o))");
  // Outer frozen, inner frozen, then released.
  std::vector<InputAssignment> stream = {{}, {"t"}, {"s"}, {}};
  ReactionTrace cbs = run(p, stream, Engine::Cbs);
  ReactionTrace css = run(p, stream, Engine::Css);
  ReactionTrace micro = run(p, stream, Engine::Micro);
  CHECK(cbs.serialize() == css.serialize());
  CHECK(cbs.serialize() == micro.serialize());
  REQUIRE(cbs.reactions.size() == 4);
  CHECK(cbs.reactions[1].code == 1);
  CHECK(cbs.reactions[2].code == 1);
  CHECK(cbs.reactions[3].outputs.lookup("o") == Status::Plus);
}

TEST_CASE("a trap kills pausing branches at every nesting level") {
  ProgramInterface p = prog({}, {}, "{(1 || 2) || 1}");
  ReactionTrace t = run(p, {{}, {}}, Engine::Cbs);
  REQUIRE(t.reactions.size() == 1);
  CHECK(t.reactions[0].code == 0);  // the exit terminates the trap
  ReactionTrace m = run(p, {{}, {}}, Engine::Micro);
  CHECK(t.serialize() == m.serialize());
}
