#include "doctest.h"
#include "esk/errors.hpp"
#include "esk/gen.hpp"
#include "esk/potentials.hpp"
#include "esk/state.hpp"

using namespace esk;

namespace {
Event bot(std::initializer_list<const char*> names) {
  Event e;
  for (const char* n : names) e = e.add(n, Status::Bot);
  return e;
}
Potential pot(std::set<std::string> sigs, std::set<CompletionCode> codes) {
  return Potential{std::move(sigs), std::move(codes)};
}
}  // namespace

TEST_CASE("leaf potentials") {
  CHECK(must(stmt::emit("s"), bot({"s"})) == pot({"s"}, {0}));
  CHECK(can(CanFlag::Plus, stmt::constant(1), Event()) == pot({}, {1}));
  CHECK(must(stmt::constant(3), Event()) == pot({}, {3}));
}

TEST_CASE("presence test with an unresolved signal") {
  StmtPtr p = stmt::test("s", stmt::emit("o"), stmt::emit("o"));
  CHECK(must(p, bot({"s", "o"})) == pot({}, {}));
  // Both branches stay possible.
  StmtPtr q = stmt::test("s", stmt::emit("o"), stmt::constant(0));
  CHECK(can(CanFlag::Plus, q, bot({"s", "o"})) == pot({"o"}, {0}));
  // A resolved test selects its branch.
  Event sp = Event().add("s", Status::Plus).add("o", Status::Bot);
  CHECK(must(q, sp) == pot({"o"}, {0}));
}

TEST_CASE("sequencing waits for a definite terminate") {
  CHECK(must(stmt::seq(stmt::constant(1), stmt::emit("o")), bot({"o"})) ==
        pot({}, {1}));
  CHECK(must(stmt::seq(stmt::constant(0), stmt::emit("o")), bot({"o"})) ==
        pot({"o"}, {0}));
}

TEST_CASE("awimm potentials follow its reaction table") {
  StmtPtr aw = stmt::awimm("s");
  Event p = Event().add("s", Status::Plus);
  Event m = Event().add("s", Status::Minus);
  Event b = Event().add("s", Status::Bot);
  CHECK(must(aw, p) == pot({}, {0}));
  CHECK(must(aw, m) == pot({}, {1}));
  CHECK(must(aw, b) == pot({}, {}));
  CHECK(can(CanFlag::Plus, aw, b) == pot({}, {0, 1}));
  // The negated polarity swaps the test.
  StmtPtr naw = stmt::awimm("s", true);
  CHECK(must(naw, p) == pot({}, {1}));
  CHECK(must(naw, m) == pot({}, {0}));
  CHECK(can(CanFlag::Minus, naw, b) == pot({}, {0, 1}));
}

TEST_CASE("trap, shift and parallel code algebra") {
  StmtPtr p = stmt::trap(stmt::constant(2));
  CHECK(must(p, Event()) == pot({}, {0}));
  CHECK(must(stmt::shift(stmt::constant(2)), Event()) == pot({}, {3}));
  StmtPtr par = stmt::par(stmt::constant(1), stmt::constant(3));
  CHECK(must(par, Event()) == pot({}, {3}));
  // A parallel must-code needs both sides to have one.
  StmtPtr blocked =
      stmt::par(stmt::constant(1), stmt::test("s", stmt::constant(0),
                                              stmt::constant(0)));
  CHECK(must(blocked, bot({"s"})) == pot({}, {}));
  CHECK(can(CanFlag::Plus, blocked, bot({"s"})) == pot({}, {1}));
}

TEST_CASE("local declarations resolve their own signal") {
  // The else branch keeps o possible while s settles to absent... it
  // does not: s can be emitted (self-justification), so s stays unknown
  // and both arms stay possible.
  StmtPtr p = stmt::local("s", stmt::test("s", stmt::emit("s"),
                                          stmt::emit("o")));
  CHECK(can(CanFlag::Plus, p, bot({"o"})) == pot({"o"}, {0}));
  // A plainly absent local narrows to the else branch.
  StmtPtr q = stmt::local("s", stmt::test("s", stmt::emit("o"),
                                          stmt::constant(1)));
  CHECK(must(q, bot({"o"})) == pot({}, {1}));
  CHECK(can(CanFlag::Plus, q, bot({"o"})) == pot({}, {1}));
  // A plainly emitted local selects the then branch.
  StmtPtr r = stmt::local("s", stmt::seq(stmt::emit("s"),
                                         stmt::test("s", stmt::emit("o"),
                                                    stmt::emit("u"))));
  CHECK(must(r, bot({"o", "u"})) == pot({"o"}, {0}));
}

TEST_CASE("state potentials go through the expansion") {
  CHECK(must_state(st::pause(), Event()) == pot({}, {0}));
  StatePtr sus = st::suspend("s", st::pause());
  Potential c = can_state(CanFlag::Plus, sus, bot({"s"}));
  CHECK(c == pot({}, {0, 1}));
  CHECK(must_state(sus, Event().add("s", Status::Plus)) == pot({}, {1}));
  // Expansion-based and direct definitions agree by construction.
  CHECK(must_state(sus, bot({"s"})) == must(expand(sus), bot({"s"})));
}

TEST_CASE("unbound signals are rejected") {
  CHECK_THROWS_AS(must(stmt::emit("zz"), Event()), UnboundSignal);
  CHECK_THROWS_AS(can(CanFlag::Plus, stmt::test("zz", stmt::constant(0),
                                                stmt::constant(0)),
                      Event()),
                  UnboundSignal);
}

TEST_CASE("sampled structural properties") {
  Rng rng(7);
  GenOptions opt;
  opt.max_depth = 4;
  for (int i = 0; i < 150; ++i) {
    StmtPtr p = random_program(rng, opt, {"a", "b"});
    auto fs = free_signals(p);
    Event e = lower_random(
        rng, random_total_event(rng, {fs.begin(), fs.end()}));
    CAPTURE(i);
    for (CanFlag b : {CanFlag::Minus, CanFlag::Plus})
      CHECK(!can(b, p, e).codes.empty());
    CHECK(must(p, e).codes.size() <= 1);
    CHECK(must(p, e).subset_of(can(CanFlag::Plus, p, e)));
    CHECK(can(CanFlag::Plus, p, e).subset_of(can(CanFlag::Minus, p, e)));
  }
}
