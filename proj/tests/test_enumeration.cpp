// Exhaustive cross-semantics check over every small program: random
// sampling misses systematic corners, a full enumeration cannot.

#include <vector>

#include "doctest.h"
#include "esk/difftest.hpp"
#include "esk/potentials.hpp"
#include "esk/print.hpp"

using namespace esk;

namespace {

std::vector<std::vector<StmtPtr>> build(int maxn) {
  std::vector<std::vector<StmtPtr>> table(maxn + 1);
  table[1] = {stmt::constant(0), stmt::constant(1), stmt::constant(2),
              stmt::emit("a"),   stmt::awimm("a"),  stmt::awimm("a", true),
              stmt::emit("l")};
  for (int n = 2; n <= maxn; ++n) {
    for (const auto& b : table[n - 1]) {
      table[n].push_back(stmt::trap(b));
      table[n].push_back(stmt::shift(b));
      table[n].push_back(stmt::suspend("a", b));
      table[n].push_back(stmt::local("l", b));
      Event bot;
      for (const auto& s : free_signals(b)) bot = bot.add(s, Status::Bot);
      if (!can(CanFlag::Plus, b, bot).codes.count(0))
        table[n].push_back(stmt::loop(b));
    }
    for (int i = 1; i + 1 < n; ++i)
      for (const auto& l : table[i])
        for (const auto& r : table[n - 1 - i]) {
          table[n].push_back(stmt::seq(l, r));
          table[n].push_back(stmt::par(l, r));
          table[n].push_back(stmt::test("a", l, r));
        }
  }
  return table;
}

}  // namespace

TEST_CASE("all programs of up to four nodes agree across the chain") {
  auto table = build(4);
  long long programs = 0;
  for (const auto& bucket : table) {
    for (const auto& p : bucket) {
      ++programs;
      CAPTURE(print(p, Form::Symbolic));
      auto fs = free_signals(p);
      std::vector<std::string> names(fs.begin(), fs.end());
      for (size_t mask = 0; mask < (1u << names.size()); ++mask) {
        std::vector<Binding> binds;
        for (size_t i = 0; i < names.size(); ++i)
          binds.push_back(
              {names[i], (mask >> i) & 1 ? Status::Plus : Status::Minus});
        Event e{binds};
        auto r = props::refinement(p, e);
        if (r) FAIL(*r);
        auto s = props::structural(p, e);
        if (s) FAIL(*s);
        auto m = props::mustcan_correctness(p, e);
        if (m) FAIL(*m);
      }
      uint64_t seed = 0x5eedull + static_cast<uint64_t>(programs);
      auto t = props::trace_equivalence(seed, p);
      if (t) FAIL(*t);
      if (!contains_loop(p)) {
        auto mc = props::micro_vs_css(seed, p);
        if (mc) FAIL(*mc);
      }
    }
  }
  CHECK(programs == 2771);
}
