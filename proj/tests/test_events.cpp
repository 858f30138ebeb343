#include "doctest.h"
#include "esk/errors.hpp"
#include "esk/events.hpp"

using namespace esk;

TEST_CASE("add and lookup with shadowing") {
  Event e;
  CHECK(e.add("s", Status::Plus).lookup("s") == Status::Plus);
  Event shadowed = e.add("s", Status::Minus).add("s", Status::Bot);
  CHECK(shadowed.lookup("s") == Status::Bot);
  CHECK(shadowed.size() == 2);
  CHECK(!e.lookup("s").has_value());
}

TEST_CASE("restrict removes the innermost binding") {
  Event one = Event().add("s", Status::Plus);
  CHECK(one.restricted("s").empty());

  // A shadowed outer signal becomes visible again as absent.
  Event two = Event().add("s", Status::Plus).add("s", Status::Plus);
  Event r = two.restricted("s");
  REQUIRE(r.size() == 1);
  CHECK(r.lookup("s") == Status::Minus);

  Event mixed = Event().add("o", Status::Plus).add("s", Status::Minus);
  Event r2 = mixed.restricted("s");
  CHECK(r2.size() == 1);
  CHECK(r2.lookup("o") == Status::Plus);

  CHECK_THROWS_AS(Event().restricted("s"), InternalError);
}

TEST_CASE("union joins pointwise with dominant emission") {
  Event a = Event().add("s", Status::Plus);
  Event b = Event().add("s", Status::Minus);
  CHECK(a.unioned(b).lookup("s") == Status::Plus);

  Event c = Event().add("s", Status::Minus).add("o", Status::Minus);
  Event d = Event().add("s", Status::Minus).add("o", Status::Plus);
  Event u = c.unioned(d);
  CHECK(u.lookup("s") == Status::Minus);
  CHECK(u.lookup("o") == Status::Plus);

  // Absence needs both sides; one undecided side stays undecided.
  Event e1 = Event().add("s", Status::Bot);
  Event e2 = Event().add("s", Status::Minus);
  CHECK(e1.unioned(e2).lookup("s") == Status::Bot);

  CHECK_THROWS_AS(a.unioned(c), InternalError);
}

TEST_CASE("totality and the logical reinterpretation") {
  Event t = Event().add("s", Status::Plus).add("o", Status::Minus);
  CHECK(t.total());
  CHECK(c_to_k(t) == t);
  Event nt = Event().add("s", Status::Bot);
  CHECK(!nt.total());
  CHECK_THROWS_AS(c_to_k(nt), InternalError);
  CHECK(Event().total());
  CHECK(c_to_k(Event()) == Event());
}

TEST_CASE("information order on events") {
  Event bot = Event().add("s", Status::Bot);
  Event plus = Event().add("s", Status::Plus);
  Event minus = Event().add("s", Status::Minus);
  CHECK(bot.leq(plus));
  CHECK(bot.leq(minus));
  CHECK(!plus.leq(minus));
  CHECK(plus.leq(plus));
  // Partial order on the three statuses, pointwise.
  for (Status a : {Status::Plus, Status::Minus, Status::Bot})
    for (Status b : {Status::Plus, Status::Minus, Status::Bot}) {
      Event ea = Event().add("s", a);
      Event eb = Event().add("s", b);
      if (ea.leq(eb) && eb.leq(ea)) CHECK(a == b);
      for (Status c : {Status::Plus, Status::Minus, Status::Bot}) {
        Event ec = Event().add("s", c);
        if (ea.leq(eb) && eb.leq(ec)) CHECK(ea.leq(ec));
      }
    }
  CHECK_THROWS_AS(bot.leq(Event()), InternalError);
}

TEST_CASE("union is the join of the emission-knowledge order") {
  // Present beats undecided beats absent: + needs one witness, - needs
  // both sides. That linear order is what union joins; the Scott order
  // of event_leq is a different (information) relation.
  auto rank = [](Status s) {
    return s == Status::Minus ? 0 : s == Status::Bot ? 1 : 2;
  };
  const Status all[] = {Status::Minus, Status::Bot, Status::Plus};
  for (Status a : all)
    for (Status b : all) {
      Event ea = Event().add("s", a);
      Event eb = Event().add("s", b);
      Status j = *ea.unioned(eb).lookup("s");
      CHECK(rank(j) == std::max(rank(a), rank(b)));
      // Least upper bound: above both, and below every common bound.
      CHECK(rank(a) <= rank(j));
      CHECK(rank(b) <= rank(j));
      for (Status c : all)
        if (rank(a) <= rank(c) && rank(b) <= rank(c))
          CHECK(rank(j) <= rank(c));
    }
}

TEST_CASE("restriction after add leaves the domain alone") {
  Event e = Event().add("a", Status::Plus).add("b", Status::Minus);
  Event back = e.add("s", Status::Bot).restricted("s");
  CHECK(back.same_domain(e));
  CHECK(back == e);
}

TEST_CASE("serialization is sorted and shows the visible value") {
  Event e = Event()
                .add("b", Status::Minus)
                .add("a", Status::Plus)
                .add("c", Status::Bot)
                .add("b", Status::Plus);  // shadows the first b
  CHECK(e.serialize() == "a=+,b=+,c=?");
  CHECK(Event().serialize() == "");
}

TEST_CASE("all_minus and with_status") {
  Event e = Event().add("a", Status::Plus).add("b", Status::Bot);
  Event m = e.all_minus();
  CHECK(m.lookup("a") == Status::Minus);
  CHECK(m.lookup("b") == Status::Minus);
  CHECK(m.with_status("a", Status::Plus).lookup("a") == Status::Plus);
  CHECK_THROWS_AS(m.with_status("zz", Status::Plus), UnboundSignal);
}
