#include "esk/driver.hpp"

#include <algorithm>
#include <sstream>

#include "esk/errors.hpp"
#include "esk/potentials.hpp"

namespace esk {

void ProgramInterface::validate() const {
  for (const auto& s : inputs)
    if (outputs.count(s))
      throw InternalError("interface: " + s + " is both input and output");
  for (const auto& s : free_signals(body))
    if (!inputs.count(s) && !outputs.count(s))
      throw InternalError("interface: free signal " + s + " not declared");
}

Event event_from_assignment(const std::set<std::string>& domain,
                            const InputAssignment& present) {
  std::vector<Binding> binds;
  for (const auto& s : domain)
    binds.push_back({s, present.count(s) ? Status::Plus : Status::Minus});
  return Event(std::move(binds));
}

std::string ReactError::message() const {
  std::ostringstream os;
  switch (kind) {
    case NonConstructive:
      os << "non-constructive";
      break;
    case Blocked:
      os << "blocked";
      break;
    case Instantaneous:
      os << "instantaneous loop";
      break;
    case IncoherentInput:
      os << "emitted input not provided by the environment";
      break;
  }
  if (!signals.empty()) {
    os << " (";
    for (size_t i = 0; i < signals.size(); ++i) {
      if (i) os << ", ";
      os << signals[i];
    }
    os << ')';
  }
  return os.str();
}

namespace {

Event interface_event(const ProgramInterface& p, const InputAssignment& i) {
  std::vector<Binding> binds;
  for (const auto& s : p.inputs)
    binds.push_back({s, i.count(s) ? Status::Plus : Status::Minus});
  for (const auto& s : p.outputs) binds.push_back({s, Status::Bot});
  return Event(std::move(binds));
}

Event restrict_to(const Event& e, const std::set<std::string>& names) {
  std::vector<Binding> binds;
  for (const auto& s : names) {
    auto st = e.lookup(s);
    binds.push_back({s, st ? *st : Status::Minus});
  }
  return Event(std::move(binds));
}

/// Output feedback: every undecided output is fixed by Must (present) or
/// by the complement of Can+ (absent); a pass with no progress stops.
struct Resolved {
  Event event;
  std::vector<std::string> stuck;  // outputs still Bot
};

Resolved resolve_outputs(const StmtPtr& body, Event e,
                         const std::set<std::string>& outputs) {
  for (size_t pass = 0; pass <= outputs.size() + 1; ++pass) {
    bool changed = false;
    bool any_bot = false;
    for (const auto& o : outputs) {
      if (e.lookup(o) != Status::Bot) continue;
      if (must(body, e).signals.count(o)) {
        e = e.with_status(o, Status::Plus);
        changed = true;
      } else if (!can(CanFlag::Plus, body, e).signals.count(o)) {
        e = e.with_status(o, Status::Minus);
        changed = true;
      } else {
        any_bot = true;
      }
    }
    if (!changed) {
      Resolved r{e, {}};
      if (any_bot)
        for (const auto& o : outputs)
          if (e.lookup(o) == Status::Bot) r.stuck.push_back(o);
      return r;
    }
  }
  throw InternalError("resolve_outputs: fixpoint did not settle");
}

ReactError from_no_reaction(const NoReaction& nr) {
  return ReactError{nr.kind == NoReaction::NonConstructive
                        ? ReactError::NonConstructive
                        : ReactError::Blocked,
                    {nr.signal}};
}

void assert_readback(const Event& resolved, const Event& emitted,
                     const std::set<std::string>& outputs) {
  for (const auto& o : outputs) {
    bool fed = resolved.lookup(o) == Status::Plus;
    bool out = emitted.lookup(o) == Status::Plus;
    if (fed != out)
      throw InternalError("output feedback mismatch on " + o);
  }
}

std::vector<std::string> incoherent_inputs(const Event& resolved,
                                           const Event& emitted,
                                           const std::set<std::string>& ins) {
  std::vector<std::string> bad;
  for (const auto& i : ins)
    if (emitted.lookup(i) == Status::Plus &&
        resolved.lookup(i) != Status::Plus)
      bad.push_back(i);
  return bad;
}

}  // namespace

ReactResult react_cbs(const ProgramInterface& p, const InputAssignment& i,
                      StmtPtr* residue) {
  p.validate();
  Resolved r = resolve_outputs(p.body, interface_event(p, i), p.outputs);
  if (!r.stuck.empty())
    return ReactError{ReactError::NonConstructive, r.stuck};
  CbsResult cr;
  try {
    cr = cbs_step(p.body, r.event);
  } catch (const InstantaneousLoop&) {
    return ReactError{ReactError::Instantaneous, {}};
  }
  if (!reacted(cr)) return from_no_reaction(no_reaction(cr));
  const Transition& t = transition(cr);
  auto bad = incoherent_inputs(r.event, t.output, p.inputs);
  if (!bad.empty()) return ReactError{ReactError::IncoherentInput, bad};
  assert_readback(r.event, t.output, p.outputs);
  if (residue) *residue = t.derivative;
  return Reaction{restrict_to(r.event, p.inputs),
                  restrict_to(t.output, p.outputs), t.code};
}

LbsAnswer react_lbs(const ProgramInterface& p, const InputAssignment& i) {
  p.validate();
  LbsAnswer ans;
  std::vector<std::string> outs(p.outputs.begin(), p.outputs.end());
  for (size_t mask = 0; mask < (size_t{1} << outs.size()); ++mask) {
    InputAssignment present = i;
    for (size_t b = 0; b < outs.size(); ++b)
      if (mask & (size_t{1} << b)) present.insert(outs[b]);
    std::set<std::string> domain = p.inputs;
    domain.insert(p.outputs.begin(), p.outputs.end());
    Event e = event_from_assignment(domain, present);
    for (const auto& t : lbs_transitions(p.body, e)) {
      bool coherent = true;
      // Emissions must be received (E' ⊆ E) ...
      for (const auto& b : t.output.bindings())
        if (b.status == Status::Plus && e.lookup(b.name) != Status::Plus)
          coherent = false;
      // ... and a received output must have been emitted.
      for (const auto& o : p.outputs)
        if (e.lookup(o) == Status::Plus &&
            t.output.lookup(o) != Status::Plus)
          coherent = false;
      if (!coherent) continue;
      ++ans.derivations;
      LbsReaction lr{restrict_to(t.output, p.outputs), t.code, t.derivative};
      if (std::find(ans.distinct.begin(), ans.distinct.end(), lr) ==
          ans.distinct.end())
        ans.distinct.push_back(lr);
    }
  }
  return ans;
}

std::string ReactionTrace::serialize() const {
  std::ostringstream os;
  for (const auto& r : reactions)
    os << r.inputs.serialize() << " \xe2\x8a\xa2 " << r.outputs.serialize()
       << " | " << r.code << '\n';
  return os.str();
}

ReactionTrace run(const ProgramInterface& p,
                  const std::vector<InputAssignment>& inputs, Engine engine,
                  MicroDebug* debug) {
  p.validate();
  if (engine == Engine::Micro && contains_loop(p.body))
    throw InternalError("micro engine: body contains a loop");
  ReactionTrace trace;
  StmtPtr body = p.body;      // cbs / lbs residue
  std::optional<Term> term;   // css / micro residue
  bool first = true;
  for (size_t instant = 0; instant < inputs.size(); ++instant) {
    const InputAssignment& ia = inputs[instant];
    auto fail = [&](const std::string& what) {
      throw InternalError("instant " + std::to_string(instant + 1) + ": " +
                          what);
    };
    Reaction reaction{};
    try {
      switch (engine) {
        case Engine::Cbs: {
          ReactResult r = react_cbs({p.inputs, p.outputs, body}, ia, &body);
          if (!std::holds_alternative<Reaction>(r))
            fail(std::get<ReactError>(r).message());
          reaction = std::get<Reaction>(r);
          trace.derivative = body;
          break;
        }
        case Engine::Lbs: {
          LbsAnswer ans = react_lbs({p.inputs, p.outputs, body}, ia);
          if (ans.distinct.empty()) fail("deadlock");
          if (ans.distinct.size() > 1) fail("nondeterministic");
          const LbsReaction& lr = ans.distinct.front();
          std::set<std::string> domain = p.inputs;
          reaction = Reaction{event_from_assignment(p.inputs, ia), lr.outputs,
                              lr.code};
          body = lr.derivative;
          trace.derivative = body;
          break;
        }
        case Engine::Css:
        case Engine::Micro: {
          StmtPtr view = first ? p.body : expand(term->state());
          Resolved r =
              resolve_outputs(view, interface_event(p, ia), p.outputs);
          if (!r.stuck.empty())
            fail(ReactError{ReactError::NonConstructive, r.stuck}.message());
          if (engine == Engine::Css) {
            CssResult cr = first ? css_surface(p.body, r.event)
                                 : css_depth(term->state(), r.event);
            if (!reacted(cr)) fail(from_no_reaction(no_reaction(cr)).message());
            const TermTransition& tt = term_transition(cr);
            auto bad = incoherent_inputs(r.event, tt.output, p.inputs);
            if (!bad.empty())
              fail(ReactError{ReactError::IncoherentInput, bad}.message());
            assert_readback(r.event, tt.output, p.outputs);
            reaction = Reaction{restrict_to(r.event, p.inputs),
                                restrict_to(tt.output, p.outputs), tt.code};
            term = tt.term;
          } else {
            MicroPtr m = first ? set_gr(from_cmd(p.body), GrMode::Start)
                               : set_gr(from_state(term->state()),
                                        GrMode::Resume);
            RunStats stats;
            MicroPtr nf = micro_run(r.event, m, Schedule::First, 0,
                                    debug ? &stats : nullptr);
            if (debug) {
              debug->dots.push_back(dump_dot(nf));
              debug->steps.push_back(format_steps(stats));
            }
            if (!is_total(nf)) fail("microstate did not stabilize");
            ToTermResult tr = to_term(nf, r.event);
            auto bad = incoherent_inputs(r.event, tr.output, p.inputs);
            if (!bad.empty())
              fail(ReactError{ReactError::IncoherentInput, bad}.message());
            assert_readback(r.event, tr.output, p.outputs);
            reaction = Reaction{restrict_to(r.event, p.inputs),
                                restrict_to(tr.output, p.outputs), tr.code};
            term = tr.term;
          }
          trace.term = term;
          break;
        }
      }
    } catch (const InstantaneousLoop&) {
      fail("instantaneous loop");
    }
    first = false;
    trace.reactions.push_back(reaction);
    if (reaction.code != 1) break;
  }
  return trace;
}

std::string CheckReport::to_string() const {
  std::ostringstream os;
  switch (verdict) {
    case Verdict::Constructive:
      os << "constructive (" << lbs_reactions << " LBS reaction"
         << (lbs_reactions == 1 ? "" : "s") << ")";
      break;
    case Verdict::Deadlock:
      os << "deadlock (0 LBS reactions)";
      break;
    case Verdict::NonCausal:
      os << "non-causal (1 LBS reaction; CBS rejects: " << cbs_detail << ")";
      break;
    case Verdict::Nondeterministic:
      os << "nondeterministic (" << lbs_reactions
         << " LBS reactions; CBS rejects: " << cbs_detail << ")";
      break;
  }
  return os.str();
}

CheckReport check(const ProgramInterface& p) {
  CheckReport report{};
  LbsAnswer ans = react_lbs(p, {});
  report.lbs_reactions = ans.derivations;
  ReactResult r = react_cbs(p, {});
  if (std::holds_alternative<Reaction>(r)) {
    report.verdict = Verdict::Constructive;
    return report;
  }
  report.cbs_detail = std::get<ReactError>(r).message();
  if (ans.derivations == 0)
    report.verdict = Verdict::Deadlock;
  else if (ans.derivations == 1)
    report.verdict = Verdict::NonCausal;
  else
    report.verdict = Verdict::Nondeterministic;
  return report;
}

}  // namespace esk
