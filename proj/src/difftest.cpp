#include "esk/difftest.hpp"

#include <algorithm>
#include <sstream>

#include "esk/behavioral.hpp"
#include "esk/driver.hpp"
#include "esk/errors.hpp"
#include "esk/gen.hpp"
#include "esk/microstep.hpp"
#include "esk/potentials.hpp"
#include "esk/print.hpp"
#include "esk/state.hpp"

namespace esk {
namespace props {
namespace {

std::vector<std::string> sorted_free(const StmtPtr& p) {
  auto fs = free_signals(p);
  return {fs.begin(), fs.end()};
}

std::set<std::string> plus_set(const Event& e) {
  std::set<std::string> out;
  for (const auto& b : e.bindings())
    if (b.status == Status::Plus) out.insert(b.name);
  return out;
}

std::string describe(const Transition& t) {
  std::ostringstream os;
  os << t.output.serialize() << " | " << t.code << " | "
     << print(t.derivative, Form::Symbolic);
  return os.str();
}

Outcome bounds_check(const char* who, const Transition& t, const Potential& mp,
                     const Potential& cp) {
  auto plus = plus_set(t.output);
  for (const auto& s : mp.signals)
    if (!plus.count(s))
      return std::string(who) + ": must-signal " + s + " not emitted in " +
             describe(t);
  for (const auto& s : plus)
    if (!cp.signals.count(s))
      return std::string(who) + ": emitted signal " + s + " outside can in " +
             describe(t);
  if (!cp.codes.count(t.code))
    return std::string(who) + ": code " + std::to_string(t.code) +
           " outside can codes";
  if (!mp.codes.empty() &&
      mp.codes != std::set<CompletionCode>{t.code})
    return std::string(who) + ": must codes disagree with the reaction code";
  return std::nullopt;
}

std::string term_str(const Term& t) { return t.serialize(); }

}  // namespace

Outcome refinement(const StmtPtr& p, const Event& e) {
  CbsResult r = cbs_step(p, e);
  if (!reacted(r)) return std::nullopt;
  const Transition& t = transition(r);
  if (!lbs_check(p, c_to_k(e), t))
    return "constructive reaction not derivable logically: " + describe(t);
  return std::nullopt;
}

Outcome structural(const StmtPtr& p, const Event& e) {
  CbsResult r1 = cbs_step(p, e);
  CbsResult r2 = cbs_step(p, e);
  if (reacted(r1) != reacted(r2)) return "cbs_step is not reproducible";
  if (reacted(r1)) {
    const Transition& a = transition(r1);
    const Transition& b = transition(r2);
    if (!(a == b)) return "cbs_step returned two different reactions";
    if (a.code != 1 && !equal(a.derivative, stmt::constant(0)))
      return "cbs: non-pausing reaction with a live derivative: " +
             describe(a);
    if (!a.output.same_domain(e)) return "cbs: output domain changed";
    if (!a.output.total()) return "cbs: output event is not total";
  } else {
    const NoReaction& nr = no_reaction(r1);
    const NoReaction& nr2 = no_reaction(r2);
    if (nr.kind != nr2.kind || nr.signal != nr2.signal)
      return "cbs_step rejection is not reproducible";
  }
  for (const auto& t : lbs_transitions(p, e)) {
    if (t.code != 1 && !equal(t.derivative, stmt::constant(0)))
      return "lbs: non-pausing transition with a live derivative: " +
             describe(t);
    if (!t.output.same_domain(e)) return "lbs: output domain changed";
    if (!t.output.total()) return "lbs: output event is not total";
  }
  return std::nullopt;
}

Outcome mustcan_correctness(const StmtPtr& p, const Event& e) {
  Potential mp = must(p, e);
  Potential cp = can(CanFlag::Plus, p, e);
  if (mp.codes.size() > 1) return "must codes not a singleton";
  if (!mp.subset_of(cp)) return "must not below can";
  CbsResult r = cbs_step(p, e);
  if (reacted(r))
    if (auto fail = bounds_check("cbs", transition(r), mp, cp)) return fail;
  for (const auto& t : lbs_transitions(p, e))
    if (auto fail = bounds_check("lbs", t, mp, cp)) return fail;
  return std::nullopt;
}

namespace {

// Completes an ambient event so the subterm's free signals (including
// signals bound by enclosing declarations) are all visible.
Event cover(const Event& e, const StmtPtr& p) {
  Event out = e;
  for (const auto& s : free_signals(p))
    if (!out.has(s)) out = out.add(s, Status::Bot);
  return out;
}

}  // namespace

Outcome monotonicity(uint64_t seed, const StmtPtr& p, int rounds) {
  Rng rng(seed);
  auto free = sorted_free(p);
  for (int i = 0; i < rounds; ++i) {
    Event hi0 = random_total_event(rng, free);
    Event lo0 = lower_random(rng, hi0);
    // The property holds for every program, so each subterm is a sample.
    for (const auto& sub : subterms(p)) {
      Event hi = cover(hi0, sub);
      Event lo = cover(lo0, sub);
      Potential must_lo = must(sub, lo);
      Potential must_hi = must(sub, hi);
      if (!must_lo.subset_of(must_hi))
        return "must not monotone: " + must_lo.to_string() + " vs " +
               must_hi.to_string() + " under " + lo.serialize() + " <= " +
               hi.serialize() + " at " + print(sub, Form::Symbolic);
      struct Pair {
        CanFlag lo_flag, hi_flag;
      };
      for (Pair flags : {Pair{CanFlag::Minus, CanFlag::Minus},
                         Pair{CanFlag::Minus, CanFlag::Plus},
                         Pair{CanFlag::Plus, CanFlag::Plus}}) {
        Potential can_hi = can(flags.hi_flag, sub, hi);
        Potential can_lo = can(flags.lo_flag, sub, lo);
        if (!can_hi.subset_of(can_lo))
          return "can not antimonotone: " + can_hi.to_string() +
                 " not within " + can_lo.to_string() + " under " +
                 lo.serialize() + " <= " + hi.serialize() + " at " +
                 print(sub, Form::Symbolic);
      }
      // A terminated prefix forwards the flag into the tail, which makes
      // flag misuse there observable at the root.
      StmtPtr after_skip = stmt::seq(stmt::constant(0), sub);
      for (const Event& e : {lo, hi}) {
        for (CanFlag b : {CanFlag::Minus, CanFlag::Plus})
          if (can(b, sub, e).codes.empty()) return "empty can codes";
        if (must(sub, e).codes.size() > 1)
          return "must codes not a singleton";
        if (!must(sub, e).subset_of(can(CanFlag::Plus, sub, e)))
          return "must not below can";
        for (const StmtPtr& probe : {sub, after_skip})
          if (!can(CanFlag::Plus, probe, e)
                   .subset_of(can(CanFlag::Minus, probe, e)))
            return "can+ not within can- at " + print(probe, Form::Symbolic);
      }
    }
  }
  return std::nullopt;
}

namespace {

std::string nr_str(const NoReaction& nr) {
  return std::string(nr.kind == NoReaction::NonConstructive ? "nonconstr "
                                                            : "blocked ") +
         nr.signal;
}

// Behavioral triple a state transition denotes: the live derivative is
// the expansion, anything else collapsed to 0 already.
StmtPtr term_derivative(CompletionCode k, const Term& t) {
  if (k == 1) return expand(t.state());
  return stmt::constant(0);
}

std::string triple(const Event& out, CompletionCode k, const StmtPtr& d) {
  return out.serialize() + " | " + std::to_string(k) + " | " +
         print(d, Form::Symbolic);
}

Outcome mirror_check(const char* who,
                     const std::vector<Transition>& behavioral,
                     const std::vector<TermTransition>& state_side) {
  std::set<std::string> lhs, rhs;
  for (const auto& t : behavioral)
    lhs.insert(triple(t.output, t.code, t.derivative));
  for (const auto& t : state_side)
    rhs.insert(triple(t.output, t.code, term_derivative(t.code, t.term)));
  if (lhs != rhs) {
    std::ostringstream os;
    os << who << ": behavioral and state transition sets differ;";
    os << " behavioral={";
    for (const auto& s : lhs) os << s << " ;; ";
    os << "} state={";
    for (const auto& s : rhs) os << s << " ;; ";
    os << "}";
    return os.str();
  }
  return std::nullopt;
}

}  // namespace

Outcome trace_equivalence(uint64_t seed, const StmtPtr& p) {
  Rng rng(seed);
  auto free = sorted_free(p);
  auto stream = random_input_stream(rng, free, 6);
  StmtPtr body = p;
  StatePtr state;
  bool first = true;
  for (const auto& instant : stream) {
    Event e = event_from_assignment({free.begin(), free.end()},
                                    {instant.begin(), instant.end()});
    CbsResult br = cbs_step(body, e);
    CssResult sr = first ? css_surface(p, e) : css_depth(state, e);
    if (reacted(br) != reacted(sr))
      return std::string("cbs/css disagree on reacting under ") +
             e.serialize();
    if (!reacted(br)) {
      if (nr_str(no_reaction(br)) != nr_str(no_reaction(sr)))
        return "cbs/css disagree on the rejection reason";
      return std::nullopt;
    }
    const Transition& bt = transition(br);
    const TermTransition& st = term_transition(sr);
    if (!(bt.output == st.output))
      return "cbs/css outputs differ: " + bt.output.serialize() + " vs " +
             st.output.serialize();
    if (bt.code != st.code) return "cbs/css codes differ";
    // Base invariance and the inert-derivative equivalence.
    StmtPtr expected_base = first ? p : base(state);
    if (!equal(base(st.term), expected_base))
      return "css: base statement changed";
    if ((st.code != 1) != !st.term.is_state())
      return "css: pausing does not match statehood";
    if (st.code != 1 && !equal(st.term.stmt(), expected_base))
      return "css: inert term differs from the input statement";
    // The state's expansion is exactly the behavioral derivative.
    if (!equal(bt.derivative, term_derivative(st.code, st.term)))
      return "cbs derivative does not match the css expansion: " +
             print(bt.derivative, Form::Symbolic) + " vs " +
             print(term_derivative(st.code, st.term), Form::Symbolic);
    // Logical mirrors.
    auto lss = first ? lss_surface(p, e) : lss_depth(state, e);
    bool found = false;
    for (const auto& cand : lss)
      if (cand == st) found = true;
    if (!found) return "css transition missing from the lss enumeration";
    StmtPtr lbs_view = first ? body : expand(state);
    if (auto fail = mirror_check(first ? "surface" : "depth",
                                 lbs_transitions(lbs_view, e), lss))
      return fail;
    if (st.code != 1) return std::nullopt;
    body = bt.derivative;
    state = st.term.state();
    first = false;
  }
  return std::nullopt;
}

Outcome micro_vs_css(uint64_t seed, const StmtPtr& p) {
  Rng rng(seed);
  auto free = sorted_free(p);
  auto stream = random_input_stream(rng, free, 6);
  StatePtr state;
  bool first = true;
  for (const auto& instant : stream) {
    Event e = event_from_assignment({free.begin(), free.end()},
                                    {instant.begin(), instant.end()});
    CssResult sr = first ? css_surface(p, e) : css_depth(state, e);
    MicroPtr m0 = first ? set_gr(from_cmd(p), GrMode::Start)
                        : set_gr(from_state(state), GrMode::Resume);
    MicroPtr nf = micro_run(e, m0, Schedule::First);
    if (!reacted(sr)) {
      if (is_total(nf))
        return "css rejected but the microstate stabilized: " +
               micro_to_string(nf);
      return std::nullopt;
    }
    if (!is_total(nf))
      return "css reacted but the microstate is stuck: " +
             micro_to_string(nf);
    const TermTransition& st = term_transition(sr);
    ToTermResult tr = to_term(nf, e);
    if (!(tr.output == st.output))
      return "micro/css outputs differ: " + tr.output.serialize() + " vs " +
             st.output.serialize();
    if (tr.code != st.code) return "micro/css codes differ";
    if (!(tr.term == st.term))
      return "micro/css terms differ: " + term_str(tr.term) + " vs " +
             term_str(st.term);
    if (st.code != 1) return std::nullopt;
    state = st.term.state();
    first = false;
  }
  return std::nullopt;
}

namespace {

bool micro_equal(const MicroPtr& a, const MicroPtr& b) {
  return micro_to_string(a) == micro_to_string(b);
}

// A step changes exactly one thing: a node's output color, or a child
// subtree (including the write of a child's input color).
bool local_change(const MicroPtr& a, const MicroPtr& b) {
  if (micro_equal(a, b)) return false;
  if (!(a->in == b->in)) {
    return a->out == b->out && (!a->left || micro_equal(a->left, b->left)) &&
           (!a->right || micro_equal(a->right, b->right));
  }
  if (!(a->out == b->out)) {
    return (!a->left || micro_equal(a->left, b->left)) &&
           (!a->right || micro_equal(a->right, b->right));
  }
  bool left_differs = a->left && !micro_equal(a->left, b->left);
  bool right_differs = a->right && !micro_equal(a->right, b->right);
  if (left_differs == right_differs) return false;
  return local_change(left_differs ? a->left : a->right,
                      left_differs ? b->left : b->right);
}

bool all_white_all(const MicroPtr& m) {
  if (!m) return true;
  return m->out.is_white_all() && all_white_all(m->left) &&
         all_white_all(m->right);
}

}  // namespace

namespace {

// Walks one run checking every available step, not just the taken one;
// returns the normal form through `nf`.
Outcome checked_walk(const Event& e, const MicroPtr& m0, MicroPtr& nf) {
  MicroPtr m = m0;
  int budget = measure(m0);
  int steps = 0;
  for (;;) {
    auto violations = vc_check(e, m);
    if (!violations.empty())
      return "circuit invariant broken: " + violations.front() + " in " +
             micro_to_string(m);
    auto succ = micro_step(e, m);
    if (succ.empty()) break;
    if (++steps > budget) return "run exceeded its information budget";
    for (const auto& s : succ) {
      if (!mleq(m, s.next) || micro_equal(m, s.next))
        return "step is not a strict information increase: " + s.info.rule;
      if (s.next->in != m->in)
        return "step changed the root input color: " + s.info.rule;
      if (!equal(micro_base(s.next), micro_base(m)))
        return "step changed the base statement: " + s.info.rule;
      if (!local_change(m, s.next))
        return "step is not local: " + s.info.rule;
      if (measure(s.next) >= measure(m))
        return "step did not decrease the measure: " + s.info.rule;
      auto succ_violations = vc_check(e, s.next);
      if (!succ_violations.empty())
        return "circuit invariant broken after " + s.info.rule + ": " +
               succ_violations.front();
    }
    m = succ.front().next;
  }
  nf = m;
  return std::nullopt;
}

Outcome confluent(const Event& e, const MicroPtr& m0, const MicroPtr& nf) {
  for (Schedule sched : {Schedule::Last, Schedule::Random}) {
    for (uint64_t s = 1; s <= (sched == Schedule::Random ? 3u : 1u); ++s) {
      MicroPtr other = micro_run(e, m0, sched, s);
      if (!micro_equal(other, nf))
        return "schedules reached different normal forms";
    }
  }
  return std::nullopt;
}

}  // namespace

Outcome micro_metatheory(uint64_t seed, const StmtPtr& p) {
  Rng rng(seed);
  auto free = sorted_free(p);
  Event e = random_total_event(rng, free);
  MicroPtr m0 = set_gr(from_cmd(p), GrMode::Start);

  MicroPtr nf_first;
  if (auto bad = checked_walk(e, m0, nf_first)) return bad;
  if (auto bad = confluent(e, m0, nf_first)) return bad;

  // Chain into resumed instants so frozen and re-started regions are
  // reached too.
  MicroPtr cur = nf_first;
  Event cur_e = e;
  for (int instant = 0; instant < 4; ++instant) {
    if (!is_total(cur) || !cur->out.is_black() || cur->out.code() != 1) break;
    Term t = to_term(cur, cur_e).term;
    if (!t.is_state()) break;
    MicroPtr m1 = set_gr(from_state(t.state()), GrMode::Resume);
    Event e1 = random_total_event(rng, free);
    MicroPtr nf1;
    if (auto bad = checked_walk(e1, m1, nf1)) return bad;
    if (auto bad = confluent(e1, m1, nf1)) return bad;
    cur = nf1;
    cur_e = e1;
  }

  // An unexecuted statement reduces to all-dead output colors.
  MicroPtr inert = set_root_in(
      from_cmd(p), InColor{Status::Minus, Status::Minus, Status::Minus});
  MicroPtr inert_nf = micro_run(e, inert, Schedule::First);
  if (!all_white_all(inert_nf))
    return "inert run left live colors: " + micro_to_string(inert_nf);

  // Monotonicity in the input event.
  Event lo = lower_random(rng, e);
  MicroPtr nf_lo = micro_run(lo, m0, Schedule::First);
  if (!mleq(nf_lo, nf_first))
    return "normal form not monotone in the input event";

  // Monotonicity in the input color: every step from a less-defined root
  // is subsumed by one from the raised root.
  MicroPtr low_in = set_root_in(from_cmd(p),
                                InColor{Status::Plus, Status::Bot, Status::Bot});
  for (const auto& s : micro_step(e, low_in)) {
    bool subsumed = false;
    for (const auto& t : micro_step(e, m0))
      if (mleq(s.next, t.next)) subsumed = true;
    if (!subsumed)
      return "step from a lower input color is not subsumed: " + s.info.rule;
  }
  return std::nullopt;
}

Outcome driver_consistency(uint64_t seed, const StmtPtr& p) {
  Rng rng(seed);
  auto free = sorted_free(p);
  ProgramInterface prog;
  prog.body = p;
  for (const auto& s : free) {
    if (std::uniform_int_distribution<int>(0, 1)(rng))
      prog.inputs.insert(s);
    else
      prog.outputs.insert(s);
  }
  InputAssignment assignment;
  for (const auto& s : prog.inputs)
    if (std::uniform_int_distribution<int>(0, 1)(rng)) assignment.insert(s);

  StmtPtr residue;
  ReactResult rr = react_cbs(prog, assignment, &residue);

  // Oracle: hide the outputs behind declarations and observe them with
  // re-emitted probes.
  StmtPtr observed = p;
  std::vector<std::string> outs(prog.outputs.begin(), prog.outputs.end());
  for (const auto& o : outs)
    observed = stmt::par(observed, stmt::test(o, stmt::emit("probe_" + o),
                                              stmt::constant(0)));
  StmtPtr wrapped = observed;
  for (auto it = outs.rbegin(); it != outs.rend(); ++it)
    wrapped = stmt::local(*it, wrapped);
  std::set<std::string> oracle_dom = prog.inputs;
  for (const auto& o : outs) oracle_dom.insert("probe_" + o);
  Event oracle_e = event_from_assignment(oracle_dom, assignment);
  CbsResult oracle;
  bool oracle_loop = false;
  try {
    oracle = cbs_step(wrapped, oracle_e);
  } catch (const InstantaneousLoop&) {
    oracle_loop = true;
  }
  bool react_ok = std::holds_alternative<Reaction>(rr);
  bool react_loop = !react_ok && std::get<ReactError>(rr).kind ==
                                     ReactError::Instantaneous;
  if (react_loop || oracle_loop) {
    if (react_loop != oracle_loop)
      return "react and the wrapping oracle disagree on loop detection";
    return std::nullopt;
  }
  if (!react_ok &&
      std::get<ReactError>(rr).kind == ReactError::IncoherentInput) {
    // The body emitted an input the environment held absent. The plain
    // statement-level oracle reacts; it must show the same emission.
    if (!reacted(oracle))
      return "oracle rejected where react saw an incoherent input";
    bool oracle_saw = false;
    for (const auto& i : prog.inputs)
      if (transition(oracle).output.lookup(i) == Status::Plus &&
          oracle_e.lookup(i) != Status::Plus)
        oracle_saw = true;
    if (!oracle_saw)
      return "react reported an incoherent input the oracle cannot see";
    return std::nullopt;
  }
  if (react_ok != reacted(oracle))
    return std::string("react and the wrapping oracle disagree: ") +
           (react_ok ? "react accepted" : "react rejected");
  if (!react_ok) return std::nullopt;

  const Reaction& reaction = std::get<Reaction>(rr);
  const Transition& ot = transition(oracle);
  if (reaction.code != ot.code)
    return "react and the wrapping oracle disagree on the code";
  for (const auto& o : outs) {
    bool mine = reaction.outputs.lookup(o) == Status::Plus;
    bool oracle_sees = ot.output.lookup("probe_" + o) == Status::Plus;
    if (mine != oracle_sees)
      return "react and the wrapping oracle disagree on output " + o;
  }

  // The logical answer set contains the constructive one.
  LbsAnswer ans = react_lbs(prog, assignment);
  LbsReaction expected{reaction.outputs, reaction.code, residue};
  if (std::find(ans.distinct.begin(), ans.distinct.end(), expected) ==
      ans.distinct.end())
    return "constructive program reaction missing from the logical set";

  // All engines should produce the same trace on a short stream.
  auto stream_raw = random_input_stream(
      rng, {prog.inputs.begin(), prog.inputs.end()}, 4);
  std::vector<InputAssignment> stream;
  for (auto& ins : stream_raw)
    stream.push_back({ins.begin(), ins.end()});
  auto trace_of = [&](Engine engine) -> std::string {
    try {
      return run(prog, stream, engine).serialize();
    } catch (const std::exception& ex) {
      return std::string("error ") + ex.what();
    }
  };
  auto instant_of_failure = [](const std::string& t) -> std::string {
    if (t.rfind("error ", 0) != 0) return t;
    return t.substr(0, t.find(':'));  // "error instant N"
  };
  std::string cbs_trace = trace_of(Engine::Cbs);
  std::string css_trace = trace_of(Engine::Css);
  if (cbs_trace != css_trace)
    return "cbs and css engine traces differ: [" + cbs_trace + "] vs [" +
           css_trace + "]";
  if (!contains_loop(p)) {
    std::string micro_trace = trace_of(Engine::Micro);
    // A stuck microstate and an explicit rejection describe the same
    // instant differently; compare up to the failing instant.
    if (instant_of_failure(cbs_trace) != instant_of_failure(micro_trace))
      return "cbs and micro engine traces differ: [" + cbs_trace + "] vs [" +
             micro_trace + "]";
  }
  return std::nullopt;
}

}  // namespace props

namespace {

struct NamedCheck {
  const char* name;
  props::Outcome outcome;
};

template <typename Fn>
props::Outcome guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& ex) {
    return std::string("exception: ") + ex.what();
  }
}

std::vector<NamedCheck> run_battery(uint64_t seed, const StmtPtr& p,
                                    const StmtPtr& loop_free) {
  Rng rng(seed ^ 0x9e3779b97f4a7c15ull);
  auto free = props::sorted_free(p);
  Event e = random_total_event(rng, free);
  std::vector<NamedCheck> checks;
  checks.push_back(
      {"refinement", guarded([&] { return props::refinement(p, e); })});
  checks.push_back(
      {"structural", guarded([&] { return props::structural(p, e); })});
  checks.push_back({"mustcan-correctness", guarded([&] {
                      return props::mustcan_correctness(p, e);
                    })});
  checks.push_back(
      {"monotonicity", guarded([&] { return props::monotonicity(seed, p); })});
  checks.push_back({"trace-equivalence", guarded([&] {
                      return props::trace_equivalence(seed, p);
                    })});
  checks.push_back({"driver-consistency", guarded([&] {
                      return props::driver_consistency(seed, p);
                    })});
  if (loop_free) {
    checks.push_back({"micro-vs-css", guarded([&] {
                        return props::micro_vs_css(seed, loop_free);
                      })});
    checks.push_back({"micro-metatheory", guarded([&] {
                        return props::micro_metatheory(seed, loop_free);
                      })});
  }
  return checks;
}

std::vector<std::string> ambient_for(Rng& rng) {
  static const std::vector<std::string> pool = {"a", "b", "c"};
  int n = 1 + std::uniform_int_distribution<int>(0, 2)(rng);
  return {pool.begin(), pool.begin() + n};
}

// Replaces one subtree with 0 at every position, in turn.
void zero_variants(const StmtPtr& p, std::vector<StmtPtr>& out) {
  struct Walk {
    static StmtPtr rebuild(const StmtPtr& node, const StmtPtr& target,
                           const StmtPtr& repl) {
      if (node == target) return repl;
      if (!node->left) return node;
      auto copy = std::make_shared<Statement>(*node);
      copy->left = rebuild(node->left, target, repl);
      if (node->right) copy->right = rebuild(node->right, target, repl);
      return copy;
    }
  };
  StmtPtr zero = stmt::constant(0);
  for (const auto& sub : subterms(p)) {
    if (sub->kind == StmtKind::Const && sub->code == 0) continue;
    out.push_back(Walk::rebuild(p, sub, zero));
  }
}

}  // namespace

std::string Report::summary() const {
  std::ostringstream os;
  os << "difftest: " << cases << " cases, " << checks << " checks, "
     << failures.size() << " failure" << (failures.size() == 1 ? "" : "s");
  return os.str();
}

Report difftest(const DiffOptions& opt) {
  Report report;
  for (int i = 0; i < opt.count; ++i) {
    uint64_t seed = opt.seed + static_cast<uint64_t>(i);
    Rng rng(seed);
    GenOptions gen_opt;
    gen_opt.max_depth = opt.depth;
    auto ambient = ambient_for(rng);
    StmtPtr p = random_program(rng, gen_opt, ambient);
    GenOptions no_loops = gen_opt;
    no_loops.allow_loops = false;
    StmtPtr loop_free = random_program(rng, no_loops, ambient);
    ++report.cases;

    auto checks = run_battery(seed, p, loop_free);
    report.checks += static_cast<long long>(checks.size());
    for (auto& c : checks) {
      if (!c.outcome) continue;
      // Shrink: retry the whole battery on smaller candidates until no
      // smaller program still fails this property.
      std::string property = c.name;
      StmtPtr culprit =
          property == "micro-vs-css" || property == "micro-metatheory"
              ? loop_free
              : p;
      // A shrink candidate must fail the same property the same way;
      // accepting unrelated exceptions (say, a loop whose pause guard
      // was shrunk away) would drift to useless witnesses.
      bool was_exception = c.outcome->rfind("exception:", 0) == 0;
      auto fails = [&](const StmtPtr& cand) -> std::optional<std::string> {
        StmtPtr cand_loopfree = contains_loop(cand) ? nullptr : cand;
        for (auto& cc : run_battery(seed, cand, cand_loopfree))
          if (cc.name == property && cc.outcome &&
              (cc.outcome->rfind("exception:", 0) == 0) == was_exception)
            return cc.outcome;
        return std::nullopt;
      };
      std::string detail = *c.outcome;
      bool shrunk = true;
      while (shrunk) {
        shrunk = false;
        std::vector<StmtPtr> candidates;
        for (const auto& sub : subterms(culprit))
          if (sub != culprit) candidates.push_back(sub);
        zero_variants(culprit, candidates);
        std::sort(candidates.begin(), candidates.end(),
                  [](const StmtPtr& a, const StmtPtr& b) {
                    return node_count(a) < node_count(b);
                  });
        for (const auto& cand : candidates) {
          if (node_count(cand) >= node_count(culprit)) break;
          if (auto d = fails(cand)) {
            culprit = cand;
            detail = *d;
            shrunk = true;
            break;
          }
        }
      }
      report.failures.push_back(
          {seed, property, print(culprit, Form::Symbolic), detail});
    }
  }
  std::sort(report.failures.begin(), report.failures.end(),
            [](const Failure& a, const Failure& b) { return a.seed < b.seed; });
  return report;
}

}  // namespace esk
