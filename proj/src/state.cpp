#include "esk/state.hpp"

#include <sstream>

#include "esk/errors.hpp"
#include "esk/print.hpp"

namespace esk {
namespace st {

static StatePtr make(StateKind kind, std::string signal, bool negated,
                     StatePtr sl, StatePtr sr, StmtPtr l, StmtPtr r) {
  auto s = std::make_shared<State>();
  s->kind = kind;
  s->signal = std::move(signal);
  s->negated = negated;
  s->sleft = std::move(sl);
  s->sright = std::move(sr);
  s->left = std::move(l);
  s->right = std::move(r);
  return s;
}

StatePtr pause() {
  return make(StateKind::Pause, "", false, nullptr, nullptr, nullptr, nullptr);
}
StatePtr await(const std::string& s, bool negated) {
  return make(StateKind::Await, s, negated, nullptr, nullptr, nullptr,
              nullptr);
}
StatePtr suspend(const std::string& s, StatePtr body) {
  return make(StateKind::Suspend, s, false, std::move(body), nullptr, nullptr,
              nullptr);
}
StatePtr if_left(const std::string& s, StatePtr thn, StmtPtr els) {
  return make(StateKind::IfLeft, s, false, std::move(thn), nullptr, nullptr,
              std::move(els));
}
StatePtr if_right(const std::string& s, StmtPtr thn, StatePtr els) {
  return make(StateKind::IfRight, s, false, nullptr, std::move(els),
              std::move(thn), nullptr);
}
StatePtr seq_left(StatePtr l, StmtPtr r) {
  return make(StateKind::SeqLeft, "", false, std::move(l), nullptr, nullptr,
              std::move(r));
}
StatePtr seq_right(StmtPtr l, StatePtr r) {
  return make(StateKind::SeqRight, "", false, nullptr, std::move(r),
              std::move(l), nullptr);
}
StatePtr par_left(StatePtr l, StmtPtr r) {
  return make(StateKind::ParLeft, "", false, std::move(l), nullptr, nullptr,
              std::move(r));
}
StatePtr par_right(StmtPtr l, StatePtr r) {
  return make(StateKind::ParRight, "", false, nullptr, std::move(r),
              std::move(l), nullptr);
}
StatePtr par_both(StatePtr l, StatePtr r) {
  return make(StateKind::ParBoth, "", false, std::move(l), std::move(r),
              nullptr, nullptr);
}
StatePtr loop(StatePtr body) {
  return make(StateKind::Loop, "", false, std::move(body), nullptr, nullptr,
              nullptr);
}
StatePtr trap(StatePtr body) {
  return make(StateKind::Trap, "", false, std::move(body), nullptr, nullptr,
              nullptr);
}
StatePtr shift(StatePtr body) {
  return make(StateKind::Shift, "", false, std::move(body), nullptr, nullptr,
              nullptr);
}
StatePtr local(const std::string& s, StatePtr body) {
  return make(StateKind::Signal, s, false, std::move(body), nullptr, nullptr,
              nullptr);
}

}  // namespace st

int compare(const StatePtr& a, const StatePtr& b) {
  if (a == b) return 0;
  if (!a) return -1;
  if (!b) return 1;
  if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
  if (int c = a->signal.compare(b->signal)) return c < 0 ? -1 : 1;
  if (a->negated != b->negated) return a->negated ? 1 : -1;
  if (int c = compare(a->sleft, b->sleft)) return c;
  if (int c = compare(a->sright, b->sright)) return c;
  if (int c = compare(a->left, b->left)) return c;
  return compare(a->right, b->right);
}

bool equal(const StatePtr& a, const StatePtr& b) { return compare(a, b) == 0; }

bool Term::operator==(const Term& other) const {
  if (is_state() != other.is_state()) return false;
  if (is_state()) return equal(state_, other.state_);
  return equal(stmt_, other.stmt_);
}

StmtPtr base(const StatePtr& s) {
  switch (s->kind) {
    case StateKind::Pause:
      return stmt::constant(1);
    case StateKind::Await:
      return stmt::awimm(s->signal, s->negated);
    case StateKind::Suspend:
      return stmt::suspend(s->signal, base(s->sleft));
    case StateKind::IfLeft:
      return stmt::test(s->signal, base(s->sleft), s->right);
    case StateKind::IfRight:
      return stmt::test(s->signal, s->left, base(s->sright));
    case StateKind::SeqLeft:
      return stmt::seq(base(s->sleft), s->right);
    case StateKind::SeqRight:
      return stmt::seq(s->left, base(s->sright));
    case StateKind::ParLeft:
      return stmt::par(base(s->sleft), s->right);
    case StateKind::ParRight:
      return stmt::par(s->left, base(s->sright));
    case StateKind::ParBoth:
      return stmt::par(base(s->sleft), base(s->sright));
    case StateKind::Loop:
      return stmt::loop(base(s->sleft));
    case StateKind::Trap:
      return stmt::trap(base(s->sleft));
    case StateKind::Shift:
      return stmt::shift(base(s->sleft));
    case StateKind::Signal:
      return stmt::local(s->signal, base(s->sleft));
  }
  throw InternalError("base: unhandled state kind");
}

StmtPtr base(const Term& t) { return t.is_state() ? base(t.state()) : t.stmt(); }

StmtPtr expand(const StatePtr& s) {
  switch (s->kind) {
    case StateKind::Pause:
      return stmt::constant(0);
    case StateKind::Await:
      return stmt::awimm(s->signal, s->negated);
    case StateKind::Suspend:
      // awimm ¬s guards the resume; the suspend wrapper survives so
      // later instants keep suspending.
      return stmt::seq(stmt::awimm(s->signal, true),
                       stmt::suspend(s->signal, expand(s->sleft)));
    case StateKind::IfLeft:
      return expand(s->sleft);
    case StateKind::IfRight:
      return expand(s->sright);
    case StateKind::SeqLeft:
      return stmt::seq(expand(s->sleft), s->right);
    case StateKind::SeqRight:
      return expand(s->sright);
    case StateKind::ParLeft:
      return stmt::par(expand(s->sleft), stmt::constant(0));
    case StateKind::ParRight:
      return stmt::par(stmt::constant(0), expand(s->sright));
    case StateKind::ParBoth:
      return stmt::par(expand(s->sleft), expand(s->sright));
    case StateKind::Loop:
      return stmt::seq(expand(s->sleft), stmt::loop(base(s->sleft)));
    case StateKind::Trap:
      return stmt::trap(expand(s->sleft));
    case StateKind::Shift:
      return stmt::shift(expand(s->sleft));
    case StateKind::Signal:
      return stmt::local(s->signal, expand(s->sleft));
  }
  throw InternalError("expand: unhandled state kind");
}

Term delta_term(CompletionCode k, const Term& t) {
  if (k == 1) return t;
  return Term(base(t));
}

Potential must_state(const StatePtr& s, const Event& e) {
  return must(expand(s), e);
}

Potential can_state(CanFlag b, const StatePtr& s, const Event& e) {
  return can(b, expand(s), e);
}

Term term_if(const std::string& s, const Term& l, const Term& r) {
  if (l.is_state() && r.is_state())
    throw InternalError("term_if: both branches active");
  if (l.is_state()) return Term(st::if_left(s, l.state(), r.stmt()));
  if (r.is_state()) return Term(st::if_right(s, l.stmt(), r.state()));
  return Term(stmt::test(s, l.stmt(), r.stmt()));
}
Term term_suspend(const std::string& s, const Term& t) {
  if (t.is_state()) return Term(st::suspend(s, t.state()));
  return Term(stmt::suspend(s, t.stmt()));
}
Term term_seq(const Term& l, const Term& r) {
  if (l.is_state() && r.is_state())
    throw InternalError("term_seq: both components active");
  if (l.is_state()) return Term(st::seq_left(l.state(), r.stmt()));
  if (r.is_state()) return Term(st::seq_right(l.stmt(), r.state()));
  return Term(stmt::seq(l.stmt(), r.stmt()));
}
Term term_par(const Term& l, const Term& r) {
  if (l.is_state() && r.is_state())
    return Term(st::par_both(l.state(), r.state()));
  if (l.is_state()) return Term(st::par_left(l.state(), r.stmt()));
  if (r.is_state()) return Term(st::par_right(l.stmt(), r.state()));
  return Term(stmt::par(l.stmt(), r.stmt()));
}
Term term_loop(const Term& t) {
  if (t.is_state()) return Term(st::loop(t.state()));
  return Term(stmt::loop(t.stmt()));
}
Term term_trap(const Term& t) {
  if (t.is_state()) return Term(st::trap(t.state()));
  return Term(stmt::trap(t.stmt()));
}
Term term_shift(const Term& t) {
  if (t.is_state()) return Term(st::shift(t.state()));
  return Term(stmt::shift(t.stmt()));
}
Term term_local(const std::string& s, const Term& t) {
  if (t.is_state()) return Term(st::local(s, t.state()));
  return Term(stmt::local(s, t.stmt()));
}

namespace {

Status lookup_or_throw(const Event& e, const std::string& s) {
  auto st = e.lookup(s);
  if (!st) throw UnboundSignal(s);
  return *st;
}

Term lift_suspend(const std::string& s, const Term& t) {
  return term_suspend(s, t);
}
Term lift_if_left(const std::string& s, const Term& t, const StmtPtr& q) {
  return term_if(s, t, Term(q));
}
Term lift_if_right(const std::string& s, const StmtPtr& p, const Term& t) {
  return term_if(s, Term(p), t);
}
Term lift_seq_left(const Term& t, const StmtPtr& q) {
  return term_seq(t, Term(q));
}
Term lift_seq_right(const StmtPtr& p, const Term& t) {
  return term_seq(Term(p), t);
}
Term lift_par(const Term& l, const Term& r) { return term_par(l, r); }
Term lift_loop(const Term& t) { return term_loop(t); }
Term lift_trap(const Term& t) { return term_trap(t); }
Term lift_shift(const Term& t) { return term_shift(t); }
Term lift_local(const std::string& s, const Term& t) {
  return term_local(s, t);
}

}  // namespace

CssResult css_surface(const StmtPtr& p, const Event& e) {
  switch (p->kind) {
    case StmtKind::Const:
      if (p->code == 1)
        return TermTransition{e.all_minus(), 1, Term(st::pause())};
      return TermTransition{e.all_minus(), p->code, Term(p)};
    case StmtKind::Emit:
      if (!e.has(p->signal)) throw UnboundSignal(p->signal);
      return TermTransition{e.all_minus().with_status(p->signal, Status::Plus),
                            0, Term(p)};
    case StmtKind::Awimm: {
      Status sat = lookup_or_throw(e, p->signal);
      if (p->negated) sat = status_not(sat);
      if (sat == Status::Plus)
        return TermTransition{e.all_minus(), 0, Term(p)};
      if (sat == Status::Minus)
        return TermTransition{e.all_minus(), 1,
                              Term(st::await(p->signal, p->negated))};
      return NoReaction{NoReaction::Blocked, p->signal};
    }
    case StmtKind::If: {
      Status s = lookup_or_throw(e, p->signal);
      if (s == Status::Bot) return NoReaction{NoReaction::Blocked, p->signal};
      if (s == Status::Plus) {
        CssResult r = css_surface(p->left, e);
        if (!reacted(r)) return r;
        const TermTransition& t = term_transition(r);
        return TermTransition{t.output, t.code,
                              lift_if_left(p->signal, t.term, p->right)};
      }
      CssResult r = css_surface(p->right, e);
      if (!reacted(r)) return r;
      const TermTransition& t = term_transition(r);
      return TermTransition{t.output, t.code,
                            lift_if_right(p->signal, p->left, t.term)};
    }
    case StmtKind::Suspend: {
      CssResult r = css_surface(p->left, e);
      if (!reacted(r)) return r;
      const TermTransition& t = term_transition(r);
      return TermTransition{t.output, t.code, lift_suspend(p->signal, t.term)};
    }
    case StmtKind::Seq: {
      CssResult rp = css_surface(p->left, e);
      if (!reacted(rp)) return rp;
      const TermTransition& tp = term_transition(rp);
      if (tp.code != 0)
        return TermTransition{tp.output, tp.code,
                              lift_seq_left(tp.term, p->right)};
      CssResult rq = css_surface(p->right, e);
      if (!reacted(rq)) return rq;
      const TermTransition& tq = term_transition(rq);
      return TermTransition{tp.output.unioned(tq.output), tq.code,
                            lift_seq_right(p->left, tq.term)};
    }
    case StmtKind::Loop: {
      CssResult r = css_surface(p->left, e);
      if (!reacted(r)) return r;
      const TermTransition& t = term_transition(r);
      if (t.code == 0) throw InstantaneousLoop();
      return TermTransition{t.output, t.code, lift_loop(t.term)};
    }
    case StmtKind::Trap: {
      CssResult r = css_surface(p->left, e);
      if (!reacted(r)) return r;
      const TermTransition& t = term_transition(r);
      return TermTransition{t.output, down_code(t.code), lift_trap(t.term)};
    }
    case StmtKind::Shift: {
      CssResult r = css_surface(p->left, e);
      if (!reacted(r)) return r;
      const TermTransition& t = term_transition(r);
      return TermTransition{t.output, up_code(t.code), lift_shift(t.term)};
    }
    case StmtKind::Par: {
      CssResult rp = css_surface(p->left, e);
      if (!reacted(rp)) return rp;
      CssResult rq = css_surface(p->right, e);
      if (!reacted(rq)) return rq;
      const TermTransition& tp = term_transition(rp);
      const TermTransition& tq = term_transition(rq);
      CompletionCode k = par_code(tp.code, tq.code);
      return TermTransition{tp.output.unioned(tq.output), k,
                            delta_term(k, lift_par(tp.term, tq.term))};
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
      CssResult r = css_surface(p->left, e.add(s, chosen));
      if (!reacted(r)) return r;
      const TermTransition& t = term_transition(r);
      return TermTransition{t.output.restricted(s), t.code,
                            lift_local(s, t.term)};
    }
  }
  throw InternalError("css_surface: unhandled statement kind");
}

CssResult css_depth(const StatePtr& s, const Event& e) {
  switch (s->kind) {
    case StateKind::Pause:
      return TermTransition{e.all_minus(), 0, Term(stmt::constant(1))};
    case StateKind::Await: {
      Status sat = lookup_or_throw(e, s->signal);
      if (s->negated) sat = status_not(sat);
      if (sat == Status::Plus)
        return TermTransition{e.all_minus(), 0,
                              Term(stmt::awimm(s->signal, s->negated))};
      if (sat == Status::Minus)
        return TermTransition{e.all_minus(), 1, Term(s)};
      return NoReaction{NoReaction::Blocked, s->signal};
    }
    case StateKind::Suspend: {
      Status sig = lookup_or_throw(e, s->signal);
      if (sig == Status::Plus) return TermTransition{e.all_minus(), 1, Term(s)};
      if (sig == Status::Bot)
        return NoReaction{NoReaction::Blocked, s->signal};
      CssResult r = css_depth(s->sleft, e);
      if (!reacted(r)) return r;
      const TermTransition& t = term_transition(r);
      return TermTransition{t.output, t.code, lift_suspend(s->signal, t.term)};
    }
    case StateKind::IfLeft: {
      CssResult r = css_depth(s->sleft, e);
      if (!reacted(r)) return r;
      const TermTransition& t = term_transition(r);
      return TermTransition{t.output, t.code,
                            lift_if_left(s->signal, t.term, s->right)};
    }
    case StateKind::IfRight: {
      CssResult r = css_depth(s->sright, e);
      if (!reacted(r)) return r;
      const TermTransition& t = term_transition(r);
      return TermTransition{t.output, t.code,
                            lift_if_right(s->signal, s->left, t.term)};
    }
    case StateKind::SeqLeft: {
      CssResult rp = css_depth(s->sleft, e);
      if (!reacted(rp)) return rp;
      const TermTransition& tp = term_transition(rp);
      if (tp.code != 0)
        return TermTransition{tp.output, tp.code,
                              lift_seq_left(tp.term, s->right)};
      CssResult rq = css_surface(s->right, e);
      if (!reacted(rq)) return rq;
      const TermTransition& tq = term_transition(rq);
      return TermTransition{tp.output.unioned(tq.output), tq.code,
                            lift_seq_right(base(s->sleft), tq.term)};
    }
    case StateKind::SeqRight: {
      CssResult r = css_depth(s->sright, e);
      if (!reacted(r)) return r;
      const TermTransition& t = term_transition(r);
      return TermTransition{t.output, t.code, lift_seq_right(s->left, t.term)};
    }
    case StateKind::Loop: {
      CssResult r = css_depth(s->sleft, e);
      if (!reacted(r)) return r;
      const TermTransition& t = term_transition(r);
      if (t.code != 0)
        return TermTransition{t.output, t.code, lift_loop(t.term)};
      // Body finished: restart it within the instant.
      CssResult rs = css_surface(base(s->sleft), e);
      if (!reacted(rs)) return rs;
      const TermTransition& ts = term_transition(rs);
      if (ts.code == 0) throw InstantaneousLoop();
      return TermTransition{t.output.unioned(ts.output), ts.code,
                            lift_loop(ts.term)};
    }
    case StateKind::Trap: {
      CssResult r = css_depth(s->sleft, e);
      if (!reacted(r)) return r;
      const TermTransition& t = term_transition(r);
      return TermTransition{t.output, down_code(t.code), lift_trap(t.term)};
    }
    case StateKind::Shift: {
      CssResult r = css_depth(s->sleft, e);
      if (!reacted(r)) return r;
      const TermTransition& t = term_transition(r);
      return TermTransition{t.output, up_code(t.code), lift_shift(t.term)};
    }
    case StateKind::ParBoth: {
      CssResult rp = css_depth(s->sleft, e);
      if (!reacted(rp)) return rp;
      CssResult rq = css_depth(s->sright, e);
      if (!reacted(rq)) return rq;
      const TermTransition& tp = term_transition(rp);
      const TermTransition& tq = term_transition(rq);
      CompletionCode k = par_code(tp.code, tq.code);
      return TermTransition{tp.output.unioned(tq.output), k,
                            delta_term(k, lift_par(tp.term, tq.term))};
    }
    case StateKind::ParLeft: {
      CssResult r = css_depth(s->sleft, e);
      if (!reacted(r)) return r;
      const TermTransition& t = term_transition(r);
      return TermTransition{t.output, t.code,
                            lift_par(t.term, Term(s->right))};
    }
    case StateKind::ParRight: {
      CssResult r = css_depth(s->sright, e);
      if (!reacted(r)) return r;
      const TermTransition& t = term_transition(r);
      return TermTransition{t.output, t.code, lift_par(Term(s->left), t.term)};
    }
    case StateKind::Signal: {
      const std::string& sig = s->signal;
      Event ebot = e.add(sig, Status::Bot);
      Status chosen;
      if (must_state(s->sleft, ebot).signals.count(sig))
        chosen = Status::Plus;
      else if (!can_state(CanFlag::Plus, s->sleft, ebot).signals.count(sig))
        chosen = Status::Minus;
      else
        return NoReaction{NoReaction::NonConstructive, sig};
      CssResult r = css_depth(s->sleft, e.add(sig, chosen));
      if (!reacted(r)) return r;
      const TermTransition& t = term_transition(r);
      return TermTransition{t.output.restricted(sig), t.code,
                            lift_local(sig, t.term)};
    }
  }
  throw InternalError("css_depth: unhandled state kind");
}

// ---------------------------------------------------------------------
// Logical state semantics: the same rule bodies with the signal rules
// enumerated (one entry per derivation, as for lbs_transitions).

std::vector<TermTransition> lss_surface(const StmtPtr& p, const Event& e) {
  std::vector<TermTransition> out;
  switch (p->kind) {
    case StmtKind::Const:
      if (p->code == 1)
        out.push_back({e.all_minus(), 1, Term(st::pause())});
      else
        out.push_back({e.all_minus(), p->code, Term(p)});
      break;
    case StmtKind::Emit:
      if (!e.has(p->signal)) throw UnboundSignal(p->signal);
      out.push_back(
          {e.all_minus().with_status(p->signal, Status::Plus), 0, Term(p)});
      break;
    case StmtKind::Awimm: {
      Status sat = lookup_or_throw(e, p->signal);
      if (p->negated) sat = status_not(sat);
      if (sat == Status::Plus)
        out.push_back({e.all_minus(), 0, Term(p)});
      else if (sat == Status::Minus)
        out.push_back(
            {e.all_minus(), 1, Term(st::await(p->signal, p->negated))});
      else
        throw InternalError("lss: non-total input event");
      break;
    }
    case StmtKind::If: {
      Status s = lookup_or_throw(e, p->signal);
      if (s == Status::Bot) throw InternalError("lss: non-total input event");
      if (s == Status::Plus) {
        for (auto& t : lss_surface(p->left, e))
          out.push_back(
              {t.output, t.code, lift_if_left(p->signal, t.term, p->right)});
      } else {
        for (auto& t : lss_surface(p->right, e))
          out.push_back(
              {t.output, t.code, lift_if_right(p->signal, p->left, t.term)});
      }
      break;
    }
    case StmtKind::Suspend:
      for (auto& t : lss_surface(p->left, e))
        out.push_back({t.output, t.code, lift_suspend(p->signal, t.term)});
      break;
    case StmtKind::Seq:
      for (auto& tp : lss_surface(p->left, e)) {
        if (tp.code != 0) {
          out.push_back(
              {tp.output, tp.code, lift_seq_left(tp.term, p->right)});
        } else {
          for (auto& tq : lss_surface(p->right, e))
            out.push_back({tp.output.unioned(tq.output), tq.code,
                           lift_seq_right(p->left, tq.term)});
        }
      }
      break;
    case StmtKind::Loop:
      for (auto& t : lss_surface(p->left, e)) {
        if (t.code == 0) throw InstantaneousLoop();
        out.push_back({t.output, t.code, lift_loop(t.term)});
      }
      break;
    case StmtKind::Trap:
      for (auto& t : lss_surface(p->left, e))
        out.push_back({t.output, down_code(t.code), lift_trap(t.term)});
      break;
    case StmtKind::Shift:
      for (auto& t : lss_surface(p->left, e))
        out.push_back({t.output, up_code(t.code), lift_shift(t.term)});
      break;
    case StmtKind::Par:
      for (auto& tp : lss_surface(p->left, e))
        for (auto& tq : lss_surface(p->right, e)) {
          CompletionCode k = par_code(tp.code, tq.code);
          out.push_back({tp.output.unioned(tq.output), k,
                         delta_term(k, lift_par(tp.term, tq.term))});
        }
      break;
    case StmtKind::Signal: {
      const std::string& s = p->signal;
      for (auto& t : lss_surface(p->left, e.add(s, Status::Plus)))
        if (t.output.lookup(s) == Status::Plus)
          out.push_back({t.output.restricted(s), t.code,
                         lift_local(s, t.term)});
      for (auto& t : lss_surface(p->left, e.add(s, Status::Minus)))
        if (t.output.lookup(s) == Status::Minus)
          out.push_back({t.output.restricted(s), t.code,
                         lift_local(s, t.term)});
      break;
    }
  }
  return out;
}

std::vector<TermTransition> lss_depth(const StatePtr& s, const Event& e) {
  std::vector<TermTransition> out;
  switch (s->kind) {
    case StateKind::Pause:
      out.push_back({e.all_minus(), 0, Term(stmt::constant(1))});
      break;
    case StateKind::Await: {
      Status sat = lookup_or_throw(e, s->signal);
      if (s->negated) sat = status_not(sat);
      if (sat == Status::Plus)
        out.push_back(
            {e.all_minus(), 0, Term(stmt::awimm(s->signal, s->negated))});
      else if (sat == Status::Minus)
        out.push_back({e.all_minus(), 1, Term(s)});
      else
        throw InternalError("lss: non-total input event");
      break;
    }
    case StateKind::Suspend: {
      Status sig = lookup_or_throw(e, s->signal);
      if (sig == Status::Plus) {
        out.push_back({e.all_minus(), 1, Term(s)});
      } else if (sig == Status::Minus) {
        for (auto& t : lss_depth(s->sleft, e))
          out.push_back({t.output, t.code, lift_suspend(s->signal, t.term)});
      } else {
        throw InternalError("lss: non-total input event");
      }
      break;
    }
    case StateKind::IfLeft:
      for (auto& t : lss_depth(s->sleft, e))
        out.push_back(
            {t.output, t.code, lift_if_left(s->signal, t.term, s->right)});
      break;
    case StateKind::IfRight:
      for (auto& t : lss_depth(s->sright, e))
        out.push_back(
            {t.output, t.code, lift_if_right(s->signal, s->left, t.term)});
      break;
    case StateKind::SeqLeft:
      for (auto& tp : lss_depth(s->sleft, e)) {
        if (tp.code != 0) {
          out.push_back(
              {tp.output, tp.code, lift_seq_left(tp.term, s->right)});
        } else {
          for (auto& tq : lss_surface(s->right, e))
            out.push_back({tp.output.unioned(tq.output), tq.code,
                           lift_seq_right(base(s->sleft), tq.term)});
        }
      }
      break;
    case StateKind::SeqRight:
      for (auto& t : lss_depth(s->sright, e))
        out.push_back({t.output, t.code, lift_seq_right(s->left, t.term)});
      break;
    case StateKind::Loop:
      for (auto& t : lss_depth(s->sleft, e)) {
        if (t.code != 0) {
          out.push_back({t.output, t.code, lift_loop(t.term)});
        } else {
          for (auto& ts : lss_surface(base(s->sleft), e)) {
            if (ts.code == 0) throw InstantaneousLoop();
            out.push_back({t.output.unioned(ts.output), ts.code,
                           lift_loop(ts.term)});
          }
        }
      }
      break;
    case StateKind::Trap:
      for (auto& t : lss_depth(s->sleft, e))
        out.push_back({t.output, down_code(t.code), lift_trap(t.term)});
      break;
    case StateKind::Shift:
      for (auto& t : lss_depth(s->sleft, e))
        out.push_back({t.output, up_code(t.code), lift_shift(t.term)});
      break;
    case StateKind::ParBoth:
      for (auto& tp : lss_depth(s->sleft, e))
        for (auto& tq : lss_depth(s->sright, e)) {
          CompletionCode k = par_code(tp.code, tq.code);
          out.push_back({tp.output.unioned(tq.output), k,
                         delta_term(k, lift_par(tp.term, tq.term))});
        }
      break;
    case StateKind::ParLeft:
      for (auto& t : lss_depth(s->sleft, e))
        out.push_back({t.output, t.code, lift_par(t.term, Term(s->right))});
      break;
    case StateKind::ParRight:
      for (auto& t : lss_depth(s->sright, e))
        out.push_back({t.output, t.code, lift_par(Term(s->left), t.term)});
      break;
    case StateKind::Signal: {
      const std::string& sig = s->signal;
      for (auto& t : lss_depth(s->sleft, e.add(sig, Status::Plus)))
        if (t.output.lookup(sig) == Status::Plus)
          out.push_back(
              {t.output.restricted(sig), t.code, lift_local(sig, t.term)});
      for (auto& t : lss_depth(s->sleft, e.add(sig, Status::Minus)))
        if (t.output.lookup(sig) == Status::Minus)
          out.push_back(
              {t.output.restricted(sig), t.code, lift_local(sig, t.term)});
      break;
    }
  }
  return out;
}

namespace {

// Symbolic printing with active leaves marked; levels mirror print().
enum Level {
  kDecl = 0,
  kPar = 1,
  kSeq = 2,
  kTern = 3,
  kSusp = 4,
  kShift = 5,
  kPostfix = 6,
  kPrimary = 7,
};

int state_level(const StatePtr& s) {
  switch (s->kind) {
    case StateKind::Signal:
      return kDecl;
    case StateKind::ParLeft:
    case StateKind::ParRight:
    case StateKind::ParBoth:
      return kPar;
    case StateKind::SeqLeft:
    case StateKind::SeqRight:
      return kSeq;
    case StateKind::IfLeft:
    case StateKind::IfRight:
      return kTern;
    case StateKind::Suspend:
      return kSusp;
    case StateKind::Shift:
      return kShift;
    case StateKind::Loop:
      return kPostfix;
    default:
      return kPrimary;
  }
}

void stmt_sym(const StmtPtr& p, int min_level, std::ostringstream& os) {
  os << print(p, Form::Symbolic);
  (void)min_level;
}

void state_sym(const StatePtr& s, int min_level, std::ostringstream& os);

void side(const StmtPtr& p, int min_level, std::ostringstream& os) {
  // Statement children re-use the plain printer; wrap defensively since
  // its output is already minimally parenthesised for the top level only.
  std::string str = print(p, Form::Symbolic);
  bool atom = p->kind == StmtKind::Const || p->kind == StmtKind::Emit ||
              p->kind == StmtKind::Trap;
  if (!atom && min_level > kDecl) os << '(' << str << ')';
  else os << str;
}

void state_sym(const StatePtr& s, int min_level, std::ostringstream& os) {
  bool parens = state_level(s) < min_level;
  if (parens) os << '(';
  switch (s->kind) {
    case StateKind::Pause:
      os << "^1";
      break;
    case StateKind::Await:
      os << "^awimm " << (s->negated ? "\xc2\xac" : "") << s->signal;
      break;
    case StateKind::Suspend:
      os << s->signal << " \xe2\x8a\x83 ";
      state_sym(s->sleft, kSusp, os);
      break;
    case StateKind::IfLeft:
      os << s->signal << " ? ";
      state_sym(s->sleft, kSusp, os);
      os << " : ";
      side(s->right, kTern, os);
      break;
    case StateKind::IfRight:
      os << s->signal << " ? ";
      side(s->left, kSusp, os);
      os << " : ";
      state_sym(s->sright, kTern, os);
      break;
    case StateKind::SeqLeft:
      state_sym(s->sleft, kTern, os);
      os << " ; ";
      side(s->right, kSeq, os);
      break;
    case StateKind::SeqRight:
      side(s->left, kTern, os);
      os << " ; ";
      state_sym(s->sright, kSeq, os);
      break;
    case StateKind::ParLeft:
      state_sym(s->sleft, kSeq, os);
      os << " || ";
      side(s->right, kPar, os);
      break;
    case StateKind::ParRight:
      side(s->left, kSeq, os);
      os << " || ";
      state_sym(s->sright, kPar, os);
      break;
    case StateKind::ParBoth:
      state_sym(s->sleft, kSeq, os);
      os << " || ";
      state_sym(s->sright, kPar, os);
      break;
    case StateKind::Loop:
      state_sym(s->sleft, kPrimary, os);
      os << "\xc2\xb0";
      break;
    case StateKind::Trap:
      os << '{';
      state_sym(s->sleft, kDecl, os);
      os << '}';
      break;
    case StateKind::Shift:
      os << "\xe2\x86\x91";
      state_sym(s->sleft, kShift, os);
      break;
    case StateKind::Signal:
      os << s->signal << " \\ ";
      state_sym(s->sleft, kDecl, os);
      break;
  }
  if (parens) os << ')';
}

}  // namespace

std::string Term::serialize() const {
  std::ostringstream os;
  if (is_state())
    state_sym(state_, kDecl, os);
  else
    stmt_sym(stmt_, kDecl, os);
  return os.str();
}

}  // namespace esk
