#include "doctest.h"
#include "esk/ast.hpp"

using namespace esk;

TEST_CASE("completion code table over the small range") {
  // down: 0,1 fixed, 2 caught, k>2 slides down one level.
  for (int k = 0; k <= 20; ++k) {
    int expect = k <= 1 ? k : (k == 2 ? 0 : k - 1);
    CHECK(down_code(k) == expect);
  }
  // up: only trap codes shift.
  for (int k = 0; k <= 20; ++k) {
    int expect = k >= 2 ? k + 1 : k;
    CHECK(up_code(k) == expect);
  }
  CHECK(down_code(2) == 0);
  CHECK(down_code(1) == 1);
  CHECK(down_code(5) == 4);
  CHECK(up_code(0) == 0);
  CHECK(up_code(1) == 1);
  CHECK(up_code(2) == 3);
  // up then down restores every code.
  for (int k = 0; k <= 20; ++k) CHECK(down_code(up_code(k)) == k);
}

TEST_CASE("parallel code synchronization") {
  CHECK(par_code(0, 0) == 0);
  CHECK(par_code(1, 0) == 1);
  CHECK(par_code(3, 1) == 3);
  for (int a = 0; a <= 6; ++a)
    for (int b = 0; b <= 6; ++b) {
      CHECK(par_code(a, b) == par_code(b, a));
      CHECK(par_code(a, a) == a);
      CHECK(par_code(a, 0) == a);
      for (int c = 0; c <= 6; ++c)
        CHECK(par_code(par_code(a, b), c) == par_code(a, par_code(b, c)));
    }
}

TEST_CASE("delta kills non-pausing derivatives") {
  StmtPtr looped = stmt::loop(stmt::constant(1));
  CHECK(equal(delta(1, looped), looped));
  CHECK(equal(delta(0, looped), stmt::constant(0)));
  CHECK(equal(delta(4, stmt::trap(stmt::constant(1))), stmt::constant(0)));
  // delta(k,p) = p exactly when k = 1 or p is already nothing.
  for (int k = 0; k <= 5; ++k) {
    CHECK(equal(delta(k, stmt::constant(0)), stmt::constant(0)));
    CHECK(equal(delta(k, looped), looped) == (k == 1));
  }
}

TEST_CASE("free signals respect declarations") {
  // b \ (!a ; (a ? !b : awimm c))
  StmtPtr p = stmt::local(
      "b", stmt::seq(stmt::emit("a"),
                     stmt::test("a", stmt::emit("b"), stmt::awimm("c"))));
  auto fs = free_signals(p);
  CHECK(fs == std::set<std::string>{"a", "c"});

  // Shadowing: inner declaration hides the outer one completely.
  StmtPtr q = stmt::local("a", stmt::local("a", stmt::emit("a")));
  CHECK(free_signals(q).empty());
}

TEST_CASE("structural comparison is a total order") {
  StmtPtr a = stmt::seq(stmt::constant(0), stmt::emit("x"));
  StmtPtr b = stmt::seq(stmt::constant(0), stmt::emit("y"));
  CHECK(compare(a, a) == 0);
  CHECK(equal(a, a));
  CHECK(!equal(a, b));
  CHECK(compare(a, b) == -compare(b, a));
}

TEST_CASE("subterms and node_count agree") {
  StmtPtr p = stmt::par(stmt::constant(1), stmt::suspend("s", stmt::emit("s")));
  CHECK(node_count(p) == 4);
  CHECK(subterms(p).size() == 4);
  CHECK(contains_loop(p) == false);
  CHECK(contains_loop(stmt::trap(stmt::loop(stmt::constant(1)))));
}
