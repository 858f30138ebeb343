#include "esk/behavioral.hpp"

#include "esk/errors.hpp"
#include "esk/faults.hpp"
#include "esk/potentials.hpp"

namespace esk {
namespace {

Status lookup_or_throw(const Event& e, const std::string& s) {
  auto st = e.lookup(s);
  if (!st) throw UnboundSignal(s);
  return *st;
}

StmtPtr par_derivative(CompletionCode k, StmtPtr l, StmtPtr r) {
  StmtPtr d = stmt::par(std::move(l), std::move(r));
  if (current_fault() == Fault::ParDeltaDrop) return d;
  return delta(k, d);
}

}  // namespace

std::vector<Transition> lbs_transitions(const StmtPtr& p, const Event& e) {
  std::vector<Transition> out;
  switch (p->kind) {
    case StmtKind::Const:
      out.push_back({e.all_minus(), p->code, stmt::constant(0)});
      break;
    case StmtKind::Emit:
      if (!e.has(p->signal)) throw UnboundSignal(p->signal);
      out.push_back({e.all_minus().with_status(p->signal, Status::Plus), 0,
                     stmt::constant(0)});
      break;
    case StmtKind::Awimm: {
      Status sat = lookup_or_throw(e, p->signal);
      if (p->negated) sat = status_not(sat);
      if (sat == Status::Plus)
        out.push_back({e.all_minus(), 0, stmt::constant(0)});
      else if (sat == Status::Minus)
        out.push_back({e.all_minus(), 1, p});
      else
        throw InternalError("lbs: non-total input event");
      break;
    }
    case StmtKind::If: {
      Status st = lookup_or_throw(e, p->signal);
      if (st == Status::Bot) throw InternalError("lbs: non-total input event");
      return lbs_transitions(st == Status::Plus ? p->left : p->right, e);
    }
    case StmtKind::Suspend:
      for (auto& t : lbs_transitions(p->left, e))
        out.push_back(
            {t.output, t.code,
             delta(t.code, stmt::seq(stmt::awimm(p->signal, true),
                                     stmt::suspend(p->signal, t.derivative)))});
      break;
    case StmtKind::Seq:
      for (auto& tp : lbs_transitions(p->left, e)) {
        if (tp.code != 0) {
          out.push_back({tp.output, tp.code,
                         delta(tp.code, stmt::seq(tp.derivative, p->right))});
        } else {
          for (auto& tq : lbs_transitions(p->right, e))
            out.push_back(
                {tp.output.unioned(tq.output), tq.code, tq.derivative});
        }
      }
      break;
    case StmtKind::Loop:
      for (auto& t : lbs_transitions(p->left, e)) {
        if (t.code == 0) throw InstantaneousLoop();
        out.push_back({t.output, t.code,
                       delta(t.code, stmt::seq(t.derivative, p))});
      }
      break;
    case StmtKind::Trap:
      for (auto& t : lbs_transitions(p->left, e))
        out.push_back({t.output, down_code(t.code),
                       delta(t.code, stmt::trap(t.derivative))});
      break;
    case StmtKind::Shift:
      for (auto& t : lbs_transitions(p->left, e))
        out.push_back({t.output, up_code(t.code),
                       delta(t.code, stmt::shift(t.derivative))});
      break;
    case StmtKind::Par:
      for (auto& tp : lbs_transitions(p->left, e))
        for (auto& tq : lbs_transitions(p->right, e)) {
          CompletionCode k = par_code(tp.code, tq.code);
          out.push_back({tp.output.unioned(tq.output), k,
                         par_derivative(k, tp.derivative, tq.derivative)});
        }
      break;
    case StmtKind::Signal: {
      const std::string& s = p->signal;
      for (auto& t : lbs_transitions(p->left, e.add(s, Status::Plus)))
        if (t.output.lookup(s) == Status::Plus)  // SigP: s received & emitted
          out.push_back({t.output.restricted(s), t.code,
                         delta(t.code, stmt::local(s, t.derivative))});
      for (auto& t : lbs_transitions(p->left, e.add(s, Status::Minus)))
        if (t.output.lookup(s) == Status::Minus)  // SigM: neither
          out.push_back({t.output.restricted(s), t.code,
                         delta(t.code, stmt::local(s, t.derivative))});
      break;
    }
  }
  return out;
}

CbsResult cbs_step(const StmtPtr& p, const Event& e) {
  switch (p->kind) {
    case StmtKind::Const:
      return Transition{e.all_minus(), p->code, stmt::constant(0)};
    case StmtKind::Emit:
      if (!e.has(p->signal)) throw UnboundSignal(p->signal);
      return Transition{e.all_minus().with_status(p->signal, Status::Plus), 0,
                        stmt::constant(0)};
    case StmtKind::Awimm: {
      Status sat = lookup_or_throw(e, p->signal);
      if (p->negated) sat = status_not(sat);
      if (sat == Status::Plus)
        return Transition{e.all_minus(), 0, stmt::constant(0)};
      if (sat == Status::Minus) return Transition{e.all_minus(), 1, p};
      return NoReaction{NoReaction::Blocked, p->signal};
    }
    case StmtKind::If: {
      Status st = lookup_or_throw(e, p->signal);
      if (st == Status::Bot) return NoReaction{NoReaction::Blocked, p->signal};
      return cbs_step(st == Status::Plus ? p->left : p->right, e);
    }
    case StmtKind::Suspend: {
      CbsResult r = cbs_step(p->left, e);
      if (!reacted(r)) return r;
      const Transition& t = transition(r);
      return Transition{
          t.output, t.code,
          delta(t.code, stmt::seq(stmt::awimm(p->signal, true),
                                  stmt::suspend(p->signal, t.derivative)))};
    }
    case StmtKind::Seq: {
      CbsResult rp = cbs_step(p->left, e);
      if (!reacted(rp)) return rp;
      const Transition& tp = transition(rp);
      if (tp.code != 0)
        return Transition{tp.output, tp.code,
                          delta(tp.code, stmt::seq(tp.derivative, p->right))};
      CbsResult rq = cbs_step(p->right, e);
      if (!reacted(rq)) return rq;
      const Transition& tq = transition(rq);
      return Transition{tp.output.unioned(tq.output), tq.code, tq.derivative};
    }
    case StmtKind::Loop: {
      CbsResult r = cbs_step(p->left, e);
      if (!reacted(r)) return r;
      const Transition& t = transition(r);
      if (t.code == 0) throw InstantaneousLoop();
      return Transition{t.output, t.code,
                        delta(t.code, stmt::seq(t.derivative, p))};
    }
    case StmtKind::Trap: {
      CbsResult r = cbs_step(p->left, e);
      if (!reacted(r)) return r;
      const Transition& t = transition(r);
      return Transition{t.output, down_code(t.code),
                        delta(t.code, stmt::trap(t.derivative))};
    }
    case StmtKind::Shift: {
      CbsResult r = cbs_step(p->left, e);
      if (!reacted(r)) return r;
      const Transition& t = transition(r);
      return Transition{t.output, up_code(t.code),
                        delta(t.code, stmt::shift(t.derivative))};
    }
    case StmtKind::Par: {
      CbsResult rp = cbs_step(p->left, e);
      if (!reacted(rp)) return rp;
      CbsResult rq = cbs_step(p->right, e);
      if (!reacted(rq)) return rq;
      const Transition& tp = transition(rp);
      const Transition& tq = transition(rq);
      CompletionCode k = par_code(tp.code, tq.code);
      return Transition{tp.output.unioned(tq.output), k,
                        par_derivative(k, tp.derivative, tq.derivative)};
    }
    case StmtKind::Signal: {
      const std::string& s = p->signal;
      Event ebot = e.add(s, Status::Bot);
      Status chosen;
      if (must(p->left, ebot).signals.count(s))
        chosen = Status::Plus;
      else if (!can(CanFlag::Plus, p->left, ebot).signals.count(s))
        chosen = Status::Minus;
      else
        return NoReaction{NoReaction::NonConstructive, s};
      CbsResult r = cbs_step(p->left, e.add(s, chosen));
      if (!reacted(r)) return r;
      const Transition& t = transition(r);
      return Transition{t.output.restricted(s), t.code,
                        delta(t.code, stmt::local(s, t.derivative))};
    }
  }
  throw InternalError("cbs_step: unhandled statement kind");
}

bool lbs_check(const StmtPtr& p, const Event& e, const Transition& t) {
  for (const auto& cand : lbs_transitions(p, e))
    if (cand == t) return true;
  return false;
}

}  // namespace esk
