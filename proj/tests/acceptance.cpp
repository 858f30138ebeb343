// Acceptance suite: one line per criterion, non-zero exit on any failure.

#include <functional>
#include <iostream>
#include <sstream>

#include "esk/behavioral.hpp"
#include "esk/difftest.hpp"
#include "esk/driver.hpp"
#include "esk/faults.hpp"
#include "esk/gen.hpp"
#include "esk/parse.hpp"
#include "esk/potentials.hpp"
#include "esk/print.hpp"

using namespace esk;

namespace {

int failures_total = 0;

void criterion(int number, const std::string& name,
               const std::function<std::string()>& body) {
  std::string detail;
  try {
    detail = body();
  } catch (const std::exception& ex) {
    detail = std::string("exception: ") + ex.what();
  }
  if (detail.empty()) {
    std::cout << "PASS  " << number << ". " << name << '\n';
  } else {
    ++failures_total;
    std::cout << "FAIL  " << number << ". " << name << " — " << detail
              << '\n';
  }
}

StmtPtr sym(const char* text) { return parse(text, Form::Symbolic); }

StmtPtr program_for(uint64_t seed, int depth, bool loops) {
  Rng rng(seed);
  GenOptions opt;
  opt.max_depth = depth;
  opt.allow_loops = loops;
  static const std::vector<std::string> pool = {"a", "b", "c"};
  int n = 1 + std::uniform_int_distribution<int>(0, 2)(rng);
  return random_program(rng, opt, {pool.begin(), pool.begin() + n});
}

Event random_env(uint64_t seed, const StmtPtr& p) {
  Rng rng(seed ^ 0xabcdef);
  auto fs = free_signals(p);
  return random_total_event(rng, {fs.begin(), fs.end()});
}

std::string run_many(int count, int depth, bool loops,
                     const std::function<props::Outcome(
                         uint64_t, const StmtPtr&, const Event&)>& check) {
  int bad = 0;
  std::ostringstream detail;
  for (int i = 0; i < count; ++i) {
    uint64_t seed = 1000 + static_cast<uint64_t>(i);
    StmtPtr p = program_for(seed, depth, loops);
    Event e = random_env(seed, p);
    props::Outcome out;
    try {
      out = check(seed, p, e);
    } catch (const std::exception& ex) {
      out = std::string("exception: ") + ex.what();
    }
    if (out) {
      if (++bad <= 3)
        detail << " [" << print(p, Form::Symbolic) << ": " << *out << "]";
    }
  }
  if (bad == 0) return "";
  std::ostringstream os;
  os << bad << "/" << count << " failed" << detail.str();
  return os.str();
}

}  // namespace

int main() {
  criterion(1, "pathological triple classification", [] {
    struct Case {
      const char* text;
      Verdict verdict;
      int reactions;
    };
    const Case cases[] = {
        {"s \\ (s ? 0 : !s)", Verdict::Deadlock, 0},
        {"s \\ (s ? !s : 0)", Verdict::Nondeterministic, 2},
        {"s \\ (s ? !s : !s)", Verdict::NonCausal, 1},
    };
    for (const auto& c : cases) {
      CheckReport r = check(ProgramInterface{{}, {}, sym(c.text)});
      if (r.verdict != c.verdict || r.lbs_reactions != c.reactions) {
        std::ostringstream os;
        os << c.text << " classified as '" << r.to_string() << "'";
        return os.str();
      }
    }
    return std::string();
  });

  criterion(2, "constructive reactions validate logically (500 programs)",
            [] {
              return run_many(500, 5, true,
                              [](uint64_t, const StmtPtr& p, const Event& e) {
                                return props::refinement(p, e);
                              });
            });

  criterion(3, "Must/Can bounds hold on every transition", [] {
    return run_many(500, 5, true,
                    [](uint64_t, const StmtPtr& p, const Event& e) {
                      return props::mustcan_correctness(p, e);
                    });
  });

  criterion(4, "monotone Must / antimonotone Can (1000 triples)", [] {
    // Each call checks 3 random E-pairs and 3 flag pairs.
    return run_many(334, 5, true,
                    [](uint64_t seed, const StmtPtr& p, const Event&) {
                      return props::monotonicity(seed, p, 3);
                    });
  });

  criterion(5, "structural invariants on every transition", [] {
    std::string first =
        run_many(400, 5, true, [](uint64_t, const StmtPtr& p, const Event& e) {
          return props::structural(p, e);
        });
    if (!first.empty()) return first;
    // The state-semantics shape (pausing iff statehood) rides along the
    // trace-equivalence checks; assert it here on fresh samples.
    return run_many(200, 5, true,
                    [](uint64_t seed, const StmtPtr& p, const Event&) {
                      return props::trace_equivalence(seed, p);
                    });
  });

  criterion(6, "behavioral and state traces coincide (300 programs)", [] {
    return run_many(300, 5, true,
                    [](uint64_t seed, const StmtPtr& p, const Event&) {
                      return props::trace_equivalence(seed, p);
                    });
  });

  criterion(7, "microstep runs match the state semantics (300 programs)",
            [] {
              return run_many(300, 5, false,
                              [](uint64_t seed, const StmtPtr& p,
                                 const Event&) {
                                return props::micro_vs_css(seed, p);
                              });
            });

  criterion(8, "microstep metatheory (steps, confluence, vc, inert runs)",
            [] {
              return run_many(200, 4, false,
                              [](uint64_t seed, const StmtPtr& p,
                                 const Event&) {
                                return props::micro_metatheory(seed, p);
                              });
            });

  criterion(9, "completion-code algebra over k in [0,20]", [] {
    for (int k = 0; k <= 20; ++k) {
      int down = k <= 1 ? k : (k == 2 ? 0 : k - 1);
      int up = k >= 2 ? k + 1 : k;
      if (down_code(k) != down) return "down(" + std::to_string(k) + ")";
      if (up_code(k) != up) return "up(" + std::to_string(k) + ")";
      if (down_code(up_code(k)) != k)
        return "down/up roundtrip at " + std::to_string(k);
      for (int l = 0; l <= 20; ++l)
        if (par_code(k, l) != std::max(k, l))
          return "par(" + std::to_string(k) + "," + std::to_string(l) + ")";
      StmtPtr probe = stmt::emit("x");
      bool keeps = equal(delta(k, probe), probe);
      if (keeps != (k == 1)) return "delta at " + std::to_string(k);
    }
    return std::string();
  });

  criterion(10, "planted faults are detected within 100 seeds", [] {
    set_fault(Fault::ParDeltaDrop);
    Report drop = difftest({1, 100, 5});
    set_fault(Fault::None);
    if (drop.ok()) return std::string("the dropped parallel delta slipped by");

    set_fault(Fault::SeqCanFlagSwap);
    Report swap = difftest({1, 100, 5});
    set_fault(Fault::None);
    if (swap.ok()) return std::string("the swapped Can flag slipped by");
    return std::string();
  });

  if (failures_total == 0) {
    std::cout << "acceptance: all criteria passed\n";
    return 0;
  }
  std::cout << "acceptance: " << failures_total << " criteria failed\n";
  return 1;
}
