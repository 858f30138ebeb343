#include "doctest.h"
#include "esk/gen.hpp"
#include "esk/parse.hpp"
#include "esk/print.hpp"
#include "esk/state.hpp"

using namespace esk;

namespace {
StmtPtr sym(const char* text) { return parse(text, Form::Symbolic); }
}  // namespace

TEST_CASE("expansion projects what is left to run") {
  CHECK(equal(expand(st::pause()), stmt::constant(0)));
  StmtPtr q = stmt::emit("o");
  CHECK(equal(expand(st::seq_left(st::pause(), q)),
              stmt::seq(stmt::constant(0), q)));
  CHECK(equal(expand(st::par_left(st::pause(), q)),
              stmt::par(stmt::constant(0), stmt::constant(0))));
  CHECK(equal(expand(st::seq_right(q, st::pause())), stmt::constant(0)));
  CHECK(equal(expand(st::await("s")), stmt::awimm("s")));
  // The suspension guard survives into later instants.
  CHECK(equal(expand(st::suspend("s", st::pause())),
              stmt::seq(stmt::awimm("s", true),
                        stmt::suspend("s", stmt::constant(0)))));
  // A loop state restarts its base body.
  StatePtr lp = st::loop(st::seq_left(st::pause(), q));
  CHECK(equal(expand(lp),
              stmt::seq(stmt::seq(stmt::constant(0), q),
                        stmt::loop(stmt::seq(stmt::constant(1), q)))));
}

TEST_CASE("base erases activation marks") {
  CHECK(equal(base(st::pause()), stmt::constant(1)));
  CHECK(equal(base(st::par_both(st::pause(), st::await("s"))),
              stmt::par(stmt::constant(1), stmt::awimm("s"))));
  CHECK(equal(base(Term(stmt::constant(3))), stmt::constant(3)));
}

TEST_CASE("delta on terms") {
  Term state(st::pause());
  CHECK(delta_term(1, state) == state);
  CHECK(delta_term(0, state) == Term(stmt::constant(1)));
  CHECK(delta_term(4, state) == Term(stmt::constant(1)));
}

TEST_CASE("surface rules keep the program intact") {
  CssResult r = css_surface(stmt::constant(1), Event());
  REQUIRE(reacted(r));
  CHECK(term_transition(r).code == 1);
  CHECK(term_transition(r).term == Term(st::pause()));

  // A trap kills the pausing branch: the term is the bare statement.
  CssResult par = css_surface(sym("1 || 3"), Event());
  REQUIRE(reacted(par));
  CHECK(term_transition(par).code == 3);
  CHECK(term_transition(par).term == Term(sym("1 || 3")));

  Event e = Event().add("s", Status::Bot);
  CssResult seq = css_surface(sym("!s ; 1"), e);
  REQUIRE(reacted(seq));
  const TermTransition& t = term_transition(seq);
  CHECK(t.code == 1);
  CHECK(t.output.lookup("s") == Status::Plus);
  CHECK(t.term == Term(st::seq_right(stmt::emit("s"), st::pause())));
}

TEST_CASE("depth rules resume states") {
  CssResult r = css_depth(st::pause(), Event());
  REQUIRE(reacted(r));
  CHECK(term_transition(r).code == 0);
  CHECK(term_transition(r).term == Term(stmt::constant(1)));

  Event sp = Event().add("s", Status::Plus);
  StatePtr frozen = st::suspend("s", st::pause());
  CssResult keep = css_depth(frozen, sp);
  REQUIRE(reacted(keep));
  CHECK(term_transition(keep).code == 1);
  CHECK(term_transition(keep).term == Term(frozen));

  CssResult aw = css_depth(st::await("s"), sp);
  REQUIRE(reacted(aw));
  CHECK(term_transition(aw).code == 0);
  CHECK(term_transition(aw).term == Term(stmt::awimm("s")));
}

TEST_CASE("loop states restart within the instant") {
  // loop body: pause ; emit o — resuming consumes the pause, finishes
  // the body, and restarts it up to the next pause.
  StmtPtr body = stmt::seq(stmt::constant(1), stmt::emit("o"));
  StatePtr lp = st::loop(st::seq_left(st::pause(), stmt::emit("o")));
  Event e = Event().add("o", Status::Bot);
  CssResult r = css_depth(lp, e);
  REQUIRE(reacted(r));
  const TermTransition& t = term_transition(r);
  CHECK(t.code == 1);
  CHECK(t.output.lookup("o") == Status::Plus);  // the body emitted o
  CHECK(equal(base(t.term), stmt::loop(body)));
  CHECK(t.term.is_state());
}

TEST_CASE("state serialization marks active leaves") {
  CHECK(Term(st::pause()).serialize() == "^1");
  CHECK(Term(st::await("s")).serialize() == "^awimm s");
  Term t(st::seq_right(stmt::emit("s"), st::pause()));
  CHECK(t.serialize() == "!s ; ^1");
  CHECK(Term(stmt::constant(0)).serialize() == "0");
}

TEST_CASE("base invariance and the pausing equivalence, fuzzed") {
  Rng rng(23);
  GenOptions opt;
  opt.max_depth = 5;
  for (int i = 0; i < 120; ++i) {
    StmtPtr p = random_program(rng, opt, {"a", "b"});
    auto fs = free_signals(p);
    std::vector<std::string> names(fs.begin(), fs.end());
    Event e = random_total_event(rng, names);
    CAPTURE(print(p, Form::Symbolic));
    CssResult r = css_surface(p, e);
    if (!reacted(r)) continue;
    const TermTransition& t = term_transition(r);
    CHECK(equal(base(t.term), p));
    CHECK((t.code != 1) == !t.term.is_state());
    if (!t.term.is_state()) CHECK(equal(t.term.stmt(), p));
    // Resume once more to exercise the depth rules.
    if (t.term.is_state()) {
      Event e2 = random_total_event(rng, names);
      CssResult d = css_depth(t.term.state(), e2);
      if (reacted(d)) {
        const TermTransition& dt = term_transition(d);
        CHECK(equal(base(dt.term), base(t.term.state())));
        CHECK((dt.code != 1) == !dt.term.is_state());
        if (!dt.term.is_state())
          CHECK(equal(dt.term.stmt(), base(t.term.state())));
      }
    }
  }
}
