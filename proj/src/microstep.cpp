#include "esk/microstep.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "esk/errors.hpp"
#include "esk/print.hpp"

namespace esk {

std::string OutColor::to_string() const {
  std::ostringstream os;
  if (black_) {
    os << "B" << code_;
  } else {
    os << "W{";
    bool first = true;
    for (int k : codes_) {
      if (!first) os << ',';
      first = false;
      os << k;
    }
    os << '}';
  }
  return os.str();
}

bool out_leq(const OutColor& a, const OutColor& b) {
  if (a.is_white() && b.is_white()) {
    // More information removes candidate wires.
    return std::includes(a.codes().begin(), a.codes().end(),
                         b.codes().begin(), b.codes().end());
  }
  if (a.is_white() && b.is_black()) return a.codes().count(b.code()) > 0;
  if (a.is_black() && b.is_black()) return a.code() == b.code();
  return false;  // Black is maximal
}

OutColor out_union(const OutColor& a, const OutColor& b) {
  if (a.is_black()) return a;
  if (b.is_black()) return b;
  CodeSet k = a.codes();
  k.insert(b.codes().begin(), b.codes().end());
  return OutColor::white(std::move(k));
}

OutColor out_minus_zero(const OutColor& c) {
  if (c.is_black()) {
    if (c.code() == 0) return OutColor::white_all();
    return c;
  }
  CodeSet k = c.codes();
  k.erase(0);
  return OutColor::white(std::move(k));
}

OutColor out_map(const OutColor& c, CompletionCode (*f)(CompletionCode)) {
  if (c.is_black()) return OutColor::black(f(c.code()));
  CodeSet k;
  for (int x : c.codes()) k.insert(f(x));
  return OutColor::white(std::move(k));
}

OutColor susp_now(Status bo, const OutColor& out) {
  switch (bo) {
    case Status::Minus:
      return out;
    case Status::Plus:
      if (out.is_white_all()) return OutColor::black(1);
      if (out.is_black()) return OutColor::black(std::max(1, out.code()));
      {
        CodeSet k = out.codes();
        k.erase(0);
        k.insert(1);
        return OutColor::white(std::move(k));
      }
    case Status::Bot:
      if (out.is_black()) {
        if (out.code() == 0) return OutColor::white({0, 1});
        if (out.code() == 1) return OutColor::black(1);
        return OutColor::white({1, out.code()});
      }
      {
        CodeSet k = out.codes();
        k.insert(1);
        return OutColor::white(std::move(k));
      }
  }
  throw InternalError("susp_now: bad status");
}

OutColor synchronize(bool sel_p, bool sel_q, const OutColor& p,
                     const OutColor& q) {
  // Asymmetric sel marks a resumed one-sided parallel: the unselected
  // branch can only die, so the selected one decides alone. Branches
  // with equal sel share their fate (started or resumed together), so
  // the completion is a definite max over both candidate sets.
  if (sel_p != sel_q) {
    const OutColor& live = sel_p ? p : q;
    const OutColor& dead = sel_p ? q : p;
    if (live.is_white_all()) return dead;  // whole region unexecuted
    return live;
  }
  if (p.is_white_all()) return q;
  if (q.is_white_all()) return p;
  if (p.is_black() && q.is_black())
    return OutColor::black(std::max(p.code(), q.code()));
  if (p.is_black() || q.is_black()) {
    const OutColor& black = p.is_black() ? p : q;
    const OutColor& white = p.is_black() ? q : p;
    if (black.code() >= *white.codes().rbegin()) return black;
    CodeSet k;
    for (int l : white.codes()) k.insert(std::max(black.code(), l));
    return OutColor::white(std::move(k));
  }
  CodeSet k;
  for (int x : p.codes())
    for (int y : q.codes()) k.insert(std::max(x, y));
  return OutColor::white(std::move(k));
}

std::string InColor::to_string() const {
  std::ostringstream os;
  os << 'g' << status_char(go) << 'r' << status_char(res) << 's'
     << status_char(susp);
  return os.str();
}

bool in_leq(const InColor& a, const InColor& b) {
  return status_leq(a.go, b.go) && status_leq(a.res, b.res) &&
         status_leq(a.susp, b.susp);
}

namespace {

bool gores(const Micro& m) {
  return m.in.go == Status::Plus ||
         (m.sel && m.in.res == Status::Plus);
}

bool nogores(const Micro& m) {
  return m.in.go == Status::Minus &&
         (!m.sel || m.in.res == Status::Minus);
}

MicroPtr make(bool sel, InColor in, MKind kind, int wire, std::string signal,
              bool negated, MicroPtr left, MicroPtr right, OutColor out) {
  auto m = std::make_shared<Micro>(Micro{sel, in, kind, wire,
                                         std::move(signal), negated,
                                         std::move(left), std::move(right),
                                         out});
  return m;
}

MicroPtr with_out(const MicroPtr& m, OutColor out) {
  return make(m->sel, m->in, m->kind, m->wire, m->signal, m->negated, m->left,
              m->right, std::move(out));
}

MicroPtr with_in(const MicroPtr& m, InColor in) {
  return make(m->sel, in, m->kind, m->wire, m->signal, m->negated, m->left,
              m->right, m->out);
}

MicroPtr with_left(const MicroPtr& m, MicroPtr child) {
  return make(m->sel, m->in, m->kind, m->wire, m->signal, m->negated,
              std::move(child), m->right, m->out);
}

MicroPtr with_right(const MicroPtr& m, MicroPtr child) {
  return make(m->sel, m->in, m->kind, m->wire, m->signal, m->negated, m->left,
              std::move(child), m->out);
}

Status event_value(const Event& e, const std::string& s) {
  auto st = e.lookup(s);
  return st ? *st : Status::Bot;
}

CodeSet static_codes(const MicroPtr& m) {
  if (m->out.is_black()) throw InternalError("static_codes on black");
  return m->out.codes();
}

}  // namespace

bool mleq(const MicroPtr& a, const MicroPtr& b) {
  if (!a && !b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->sel != b->sel || a->wire != b->wire ||
      a->signal != b->signal || a->negated != b->negated)
    return false;
  if (!in_leq(a->in, b->in) || !out_leq(a->out, b->out)) return false;
  return mleq(a->left, b->left) && mleq(a->right, b->right);
}

bool is_total(const MicroPtr& m) {
  if (!m) return true;
  if (m->in.go == Status::Bot || m->in.res == Status::Bot ||
      m->in.susp == Status::Bot)
    return false;
  if (m->out.is_white() && !m->out.is_white_all()) return false;
  return is_total(m->left) && is_total(m->right);
}

int measure(const MicroPtr& m) {
  if (!m) return 0;
  int n = 0;
  if (m->in.go == Status::Bot) ++n;
  if (m->in.res == Status::Bot) ++n;
  if (m->in.susp == Status::Bot) ++n;
  if (m->out.is_white()) n += static_cast<int>(m->out.codes().size());
  return n + measure(m->left) + measure(m->right);
}

StmtPtr micro_base(const MicroPtr& m) {
  switch (m->kind) {
    case MKind::Nothing:
      return stmt::constant(0);
    case MKind::Pause:
      return stmt::constant(1);
    case MKind::Exit:
      return stmt::constant(m->wire + 2);
    case MKind::Emit:
      return stmt::emit(m->signal);
    case MKind::Awimm:
      return stmt::awimm(m->signal, m->negated);
    case MKind::Trap:
      return stmt::trap(micro_base(m->left));
    case MKind::Shift:
      return stmt::shift(micro_base(m->left));
    case MKind::Suspend:
      return stmt::suspend(m->signal, micro_base(m->left));
    case MKind::If:
      return stmt::test(m->signal, micro_base(m->left), micro_base(m->right));
    case MKind::Seq:
      return stmt::seq(micro_base(m->left), micro_base(m->right));
    case MKind::Par:
      return stmt::par(micro_base(m->left), micro_base(m->right));
    case MKind::Signal:
      return stmt::local(m->signal, micro_base(m->left));
  }
  throw InternalError("micro_base: bad kind");
}

namespace {

// Builds the node with its statically possible code wires; sel comes
// from the caller (false for commands, spine marks for states).
MicroPtr build(MKind kind, int wire, const std::string& signal, bool negated,
               MicroPtr left, MicroPtr right, bool sel) {
  CodeSet k;
  switch (kind) {
    case MKind::Nothing:
      k = {0};
      break;
    case MKind::Pause:
      k = {0, 1};
      break;
    case MKind::Exit:
      k = {wire + 2};
      break;
    case MKind::Emit:
      k = {0};
      break;
    case MKind::Awimm:
      k = {0, 1};
      break;
    case MKind::Trap:
      for (int x : static_codes(left)) k.insert(down_code(x));
      break;
    case MKind::Shift:
      for (int x : static_codes(left)) k.insert(up_code(x));
      break;
    case MKind::Suspend:
      k = static_codes(left);
      k.insert(1);
      break;
    case MKind::If: {
      k = static_codes(left);
      auto r = static_codes(right);
      k.insert(r.begin(), r.end());
      break;
    }
    case MKind::Seq: {
      k = static_codes(left);
      k.erase(0);
      auto r = static_codes(right);
      k.insert(r.begin(), r.end());
      break;
    }
    case MKind::Par: {
      // Mirrors the synchronizer: a one-sided resume keeps only the
      // live branch's codes, otherwise the pairwise maxima.
      if (left->sel != right->sel) {
        k = static_codes(left->sel ? left : right);
        break;
      }
      for (int x : static_codes(left))
        for (int y : static_codes(right)) k.insert(std::max(x, y));
      break;
    }
    case MKind::Signal:
      k = static_codes(left);
      break;
  }
  return make(sel, InColor{}, kind, wire, signal, negated, std::move(left),
              std::move(right), OutColor::white(std::move(k)));
}

}  // namespace

MicroPtr from_cmd(const StmtPtr& p) {
  switch (p->kind) {
    case StmtKind::Const:
      if (p->code == 0)
        return build(MKind::Nothing, 0, "", false, nullptr, nullptr, false);
      if (p->code == 1)
        return build(MKind::Pause, 0, "", false, nullptr, nullptr, false);
      return build(MKind::Exit, p->code - 2, "", false, nullptr, nullptr,
                   false);
    case StmtKind::Emit:
      return build(MKind::Emit, 0, p->signal, false, nullptr, nullptr, false);
    case StmtKind::Awimm:
      return build(MKind::Awimm, 0, p->signal, p->negated, nullptr, nullptr,
                   false);
    case StmtKind::If:
      return build(MKind::If, 0, p->signal, false, from_cmd(p->left),
                   from_cmd(p->right), false);
    case StmtKind::Suspend:
      return build(MKind::Suspend, 0, p->signal, false, from_cmd(p->left),
                   nullptr, false);
    case StmtKind::Seq:
      return build(MKind::Seq, 0, "", false, from_cmd(p->left),
                   from_cmd(p->right), false);
    case StmtKind::Par:
      return build(MKind::Par, 0, "", false, from_cmd(p->left),
                   from_cmd(p->right), false);
    case StmtKind::Loop:
      throw InternalError("from_cmd: loops are not supported");
    case StmtKind::Trap:
      return build(MKind::Trap, 0, "", false, from_cmd(p->left), nullptr,
                   false);
    case StmtKind::Shift:
      return build(MKind::Shift, 0, "", false, from_cmd(p->left), nullptr,
                   false);
    case StmtKind::Signal:
      return build(MKind::Signal, 0, p->signal, false, from_cmd(p->left),
                   nullptr, false);
  }
  throw InternalError("from_cmd: bad kind");
}

MicroPtr from_state(const StatePtr& s) {
  switch (s->kind) {
    case StateKind::Pause:
      return build(MKind::Pause, 0, "", false, nullptr, nullptr, true);
    case StateKind::Await:
      return build(MKind::Awimm, 0, s->signal, s->negated, nullptr, nullptr,
                   true);
    case StateKind::Suspend:
      return build(MKind::Suspend, 0, s->signal, false, from_state(s->sleft),
                   nullptr, true);
    case StateKind::IfLeft:
      return build(MKind::If, 0, s->signal, false, from_state(s->sleft),
                   from_cmd(s->right), true);
    case StateKind::IfRight:
      return build(MKind::If, 0, s->signal, false, from_cmd(s->left),
                   from_state(s->sright), true);
    case StateKind::SeqLeft:
      return build(MKind::Seq, 0, "", false, from_state(s->sleft),
                   from_cmd(s->right), true);
    case StateKind::SeqRight:
      return build(MKind::Seq, 0, "", false, from_cmd(s->left),
                   from_state(s->sright), true);
    case StateKind::ParLeft:
      return build(MKind::Par, 0, "", false, from_state(s->sleft),
                   from_cmd(s->right), true);
    case StateKind::ParRight:
      return build(MKind::Par, 0, "", false, from_cmd(s->left),
                   from_state(s->sright), true);
    case StateKind::ParBoth:
      return build(MKind::Par, 0, "", false, from_state(s->sleft),
                   from_state(s->sright), true);
    case StateKind::Loop:
      throw InternalError("from_state: loops are not supported");
    case StateKind::Trap:
      return build(MKind::Trap, 0, "", false, from_state(s->sleft), nullptr,
                   true);
    case StateKind::Shift:
      return build(MKind::Shift, 0, "", false, from_state(s->sleft), nullptr,
                   true);
    case StateKind::Signal:
      return build(MKind::Signal, 0, s->signal, false, from_state(s->sleft),
                   nullptr, true);
  }
  throw InternalError("from_state: bad kind");
}

MicroPtr from_term(const Term& t) {
  return t.is_state() ? from_state(t.state()) : from_cmd(t.stmt());
}

MicroPtr set_root_in(const MicroPtr& m, InColor in) { return with_in(m, in); }

MicroPtr set_gr(const MicroPtr& m, GrMode mode) {
  if (mode == GrMode::Start) {
    if (m->sel)
      throw InternalError("set_gr: cannot start a selected microstate");
    return with_in(m, InColor{Status::Plus, Status::Minus, Status::Minus});
  }
  if (!m->sel)
    throw InternalError("set_gr: cannot resume an unselected microstate");
  return with_in(m, InColor{Status::Minus, Status::Plus, Status::Minus});
}

// ---------------------------------------------------------------------
// The rewrite rules. Every rule carries a strict-increase guard, so each
// successor is strictly above its source in the Scott order.

namespace {

struct Collector {
  std::vector<MicroStep> steps;

  void add(MicroPtr next, const char* rule, const std::string& before,
           const std::string& after) {
    steps.push_back({std::move(next), {rule, {}, before, after}});
  }
};

void out_rule(Collector& c, const MicroPtr& m, const char* rule,
              const OutColor& target) {
  if (out_lt(m->out, target))
    c.add(with_out(m, target), rule, m->out.to_string(), target.to_string());
}

void shed_rule(Collector& c, const MicroPtr& m, const char* rule, int k,
               bool guard) {
  if (guard && m->out.is_white() && m->out.codes().count(k)) {
    CodeSet codes = m->out.codes();
    codes.erase(k);
    OutColor target = OutColor::white(std::move(codes));
    c.add(with_out(m, target), rule, m->out.to_string(), target.to_string());
  }
}

void go_wire_rule(Collector& c, const MicroPtr& m, bool left_child,
                  const char* rule, Status target) {
  const MicroPtr& ch = left_child ? m->left : m->right;
  if (ch->in.go == Status::Bot && target != Status::Bot) {
    InColor in = ch->in;
    in.go = target;
    MicroPtr next = left_child ? with_left(m, with_in(ch, in))
                               : with_right(m, with_in(ch, in));
    c.add(std::move(next), rule, std::string(1, status_char(ch->in.go)),
          std::string(1, status_char(target)));
  }
}

void res_wire_rule(Collector& c, const MicroPtr& m, bool left_child,
                   const char* rule, Status target) {
  const MicroPtr& ch = left_child ? m->left : m->right;
  if (ch->in.res == Status::Bot && target != Status::Bot) {
    InColor in = ch->in;
    in.res = target;
    MicroPtr next = left_child ? with_left(m, with_in(ch, in))
                               : with_right(m, with_in(ch, in));
    c.add(std::move(next), rule, std::string(1, status_char(ch->in.res)),
          std::string(1, status_char(target)));
  }
}

void susp_wire_rule(Collector& c, const MicroPtr& m, bool left_child,
                    const char* rule, Status target) {
  const MicroPtr& ch = left_child ? m->left : m->right;
  if (ch->in.susp == Status::Bot && target != Status::Bot) {
    InColor in = ch->in;
    in.susp = target;
    MicroPtr next = left_child ? with_left(m, with_in(ch, in))
                               : with_right(m, with_in(ch, in));
    c.add(std::move(next), rule, std::string(1, status_char(ch->in.susp)),
          std::string(1, status_char(target)));
  }
}

void in_copy_rule(Collector& c, const MicroPtr& m, bool left_child,
                  const char* rule) {
  const MicroPtr& ch = left_child ? m->left : m->right;
  if (in_lt(ch->in, m->in)) {
    MicroPtr next = left_child ? with_left(m, with_in(ch, m->in))
                               : with_right(m, with_in(ch, m->in));
    c.add(std::move(next), rule, ch->in.to_string(), m->in.to_string());
  }
}

void context(Collector& c, const Event& e, const MicroPtr& m, bool left_child);

void node_rules(Collector& c, const Event& e, const MicroPtr& m) {
  switch (m->kind) {
    case MKind::Nothing:
      shed_rule(c, m, "nothing.dead", 0, m->in.go == Status::Minus);
      if (m->in.go == Status::Plus)
        out_rule(c, m, "nothing.done", OutColor::black(0));
      break;
    case MKind::Exit:
      shed_rule(c, m, "exit.dead", m->wire + 2, m->in.go == Status::Minus);
      if (m->in.go == Status::Plus)
        out_rule(c, m, "exit.done", OutColor::black(m->wire + 2));
      break;
    case MKind::Emit:
      shed_rule(c, m, "emit.dead", 0, m->in.go == Status::Minus);
      if (m->in.go == Status::Plus)
        out_rule(c, m, "emit.done", OutColor::black(0));
      break;
    case MKind::Pause:
      shed_rule(c, m, "pause.shed0", 0,
                m->in.res == Status::Minus || !m->sel);
      shed_rule(c, m, "pause.shed1", 1, m->in.go == Status::Minus);
      if (m->in.go == Status::Plus)
        out_rule(c, m, "pause.hold", OutColor::black(1));
      if (m->sel && m->in.res == Status::Plus && m->in.susp == Status::Minus)
        out_rule(c, m, "pause.resume", OutColor::black(0));
      break;
    case MKind::Awimm: {
      Status sat = event_value(e, m->signal);
      if (m->negated) sat = status_not(sat);
      shed_rule(c, m, "awimm.shed0", 0, nogores(*m) || sat == Status::Minus);
      shed_rule(c, m, "awimm.shed1", 1, nogores(*m) || sat == Status::Plus);
      if (gores(*m) && sat == Status::Minus)
        out_rule(c, m, "awimm.hold", OutColor::black(1));
      if (gores(*m) && sat == Status::Plus)
        out_rule(c, m, "awimm.done", OutColor::black(0));
      break;
    }
    case MKind::Trap:
      in_copy_rule(c, m, true, "trap.start");
      context(c, e, m, true);
      out_rule(c, m, "trap.end", out_map(m->left->out, down_code));
      break;
    case MKind::Shift:
      in_copy_rule(c, m, true, "shift.start");
      context(c, e, m, true);
      out_rule(c, m, "shift.end", out_map(m->left->out, up_code));
      break;
    case MKind::Suspend: {
      Status sig = event_value(e, m->signal);
      Status selp = lift(m->left->sel);
      go_wire_rule(c, m, true, "susp.go", m->in.go);
      Status resv =
          status_and(status_and(m->in.res, selp), status_not(sig));
      res_wire_rule(c, m, true, "susp.res", resv);
      Status local = status_and(status_and(m->in.res, selp), sig);
      susp_wire_rule(c, m, true, "susp.susp", status_or(m->in.susp, local));
      context(c, e, m, true);
      // The ⊥-keyed end rule keeps the signal rule's context step sound:
      // the status of the suspending signal may always be ignored.
      out_rule(c, m, "susp.end_bot", susp_now(Status::Bot, m->left->out));
      out_rule(c, m, "susp.end", susp_now(local, m->left->out));
      break;
    }
    case MKind::If: {
      Status sig = event_value(e, m->signal);
      go_wire_rule(c, m, true, "if.go_then", status_and(m->in.go, sig));
      go_wire_rule(c, m, false, "if.go_else",
                   status_and(m->in.go, status_not(sig)));
      res_wire_rule(c, m, true, "if.res_then", m->in.res);
      res_wire_rule(c, m, false, "if.res_else", m->in.res);
      susp_wire_rule(c, m, true, "if.susp_then", m->in.susp);
      susp_wire_rule(c, m, false, "if.susp_else", m->in.susp);
      context(c, e, m, true);
      context(c, e, m, false);
      out_rule(c, m, "if.end", out_union(m->left->out, m->right->out));
      break;
    }
    case MKind::Seq:
      in_copy_rule(c, m, true, "seq.start");
      res_wire_rule(c, m, false, "seq.res_q", m->in.res);
      susp_wire_rule(c, m, false, "seq.susp_q", m->in.susp);
      if (m->right->in.go == Status::Bot) {
        if (m->left->out == OutColor::black(0))
          go_wire_rule(c, m, false, "seq.go_q_plus", Status::Plus);
        else if (!out_leq(m->left->out, OutColor::black(0)))
          go_wire_rule(c, m, false, "seq.go_q_minus", Status::Minus);
      }
      context(c, e, m, true);
      context(c, e, m, false);
      out_rule(c, m, "seq.end",
               out_union(out_minus_zero(m->left->out), m->right->out));
      break;
    case MKind::Par:
      in_copy_rule(c, m, true, "par.start_left");
      in_copy_rule(c, m, false, "par.start_right");
      context(c, e, m, true);
      context(c, e, m, false);
      out_rule(c, m, "par.end",
               synchronize(m->left->sel, m->right->sel, m->left->out,
                           m->right->out));
      break;
    case MKind::Signal: {
      in_copy_rule(c, m, true, "sig.start");
      Status b = emitter_status(m->left, m->signal);
      Event inner = e.add(m->signal, b);
      context(c, inner, m, true);
      out_rule(c, m, "sig.end", m->left->out);
      break;
    }
  }
}

void context(Collector& c, const Event& e, const MicroPtr& m,
             bool left_child) {
  const MicroPtr& ch = left_child ? m->left : m->right;
  Collector sub;
  node_rules(sub, e, ch);
  for (auto& s : sub.steps) {
    s.info.path.insert(s.info.path.begin(), left_child ? 0 : 1);
    MicroPtr next = left_child ? with_left(m, std::move(s.next))
                               : with_right(m, std::move(s.next));
    c.steps.push_back({std::move(next), std::move(s.info)});
  }
}

}  // namespace

std::vector<MicroStep> micro_step(const Event& e, const MicroPtr& m) {
  Collector c;
  node_rules(c, e, m);
  return c.steps;
}

MicroPtr micro_run(const Event& e, MicroPtr m, Schedule schedule,
                   uint64_t seed, RunStats* stats) {
  std::mt19937_64 rng(seed);
  int budget = measure(m);
  int steps = 0;
  for (;;) {
    auto succ = micro_step(e, m);
    if (succ.empty()) break;
    if (++steps > budget)
      throw InternalError("micro_run: step budget exceeded");
    size_t pick = 0;
    if (schedule == Schedule::Last) {
      pick = succ.size() - 1;
    } else if (schedule == Schedule::Random) {
      pick = std::uniform_int_distribution<size_t>(0, succ.size() - 1)(rng);
    }
    if (stats) stats->trace.push_back(succ[pick].info);
    m = succ[pick].next;
  }
  if (stats) stats->steps = steps;
  return m;
}

namespace {

void scan_emitters(const MicroPtr& m, const std::string& s, bool& any_plus,
                   bool& all_dead) {
  if (!m) return;
  if (m->kind == MKind::Signal && m->signal == s) return;  // shadowed
  if (m->kind == MKind::Emit && m->signal == s) {
    if (m->out == OutColor::black(0))
      any_plus = true;
    else if (!m->out.is_white_all())
      all_dead = false;
    return;
  }
  scan_emitters(m->left, s, any_plus, all_dead);
  scan_emitters(m->right, s, any_plus, all_dead);
}

}  // namespace

Status emitter_status(const MicroPtr& m, const std::string& s) {
  bool any_plus = false, all_dead = true;
  scan_emitters(m, s, any_plus, all_dead);
  if (any_plus) return Status::Plus;
  if (all_dead) return Status::Minus;
  return Status::Bot;
}

Event to_event(const MicroPtr& m, const Event& e) {
  Event out = e.all_minus();
  for (const auto& b : e.bindings())
    out = out.with_status(b.name, emitter_status(m, b.name));
  return out;
}

namespace {

bool pause_active(const Micro& m) {
  return (m.in.go == Status::Plus && m.out == OutColor::black(1)) ||
         (m.sel && m.in.susp == Status::Plus);
}

Term micro_term(const MicroPtr& m) {
  switch (m->kind) {
    case MKind::Nothing:
    case MKind::Exit:
    case MKind::Emit:
      return Term(micro_base(m));
    case MKind::Pause:
      return pause_active(*m) ? Term(st::pause())
                              : Term(stmt::constant(1));
    case MKind::Awimm: {
      bool active = (gores(*m) && m->out == OutColor::black(1)) ||
                    (m->sel && m->in.susp == Status::Plus);
      return active ? Term(st::await(m->signal, m->negated))
                    : Term(stmt::awimm(m->signal, m->negated));
    }
    case MKind::Trap:
      return term_trap(micro_term(m->left));
    case MKind::Shift:
      return term_shift(micro_term(m->left));
    case MKind::Suspend:
      return term_suspend(m->signal, micro_term(m->left));
    case MKind::If:
      return term_if(m->signal, micro_term(m->left), micro_term(m->right));
    case MKind::Seq:
      return term_seq(micro_term(m->left), micro_term(m->right));
    case MKind::Par: {
      Term l = micro_term(m->left);
      Term r = micro_term(m->right);
      // Kill: a pausing branch dies when its sibling raises a trap.
      if (m->left->out == OutColor::black(1) && m->right->out.is_black() &&
          m->right->out.code() >= 2)
        l = Term(base(l));
      if (m->right->out == OutColor::black(1) && m->left->out.is_black() &&
          m->left->out.code() >= 2)
        r = Term(base(r));
      return term_par(l, r);
    }
    case MKind::Signal:
      return term_local(m->signal, micro_term(m->left));
  }
  throw InternalError("micro_term: bad kind");
}

}  // namespace

ToTermResult to_term(const MicroPtr& m, const Event& e) {
  if (!is_total(m)) throw InternalError("to_term: microstate is not total");
  if (!m->out.is_black())
    throw InternalError("to_term: no completion code at the root");
  return ToTermResult{micro_term(m), m->out.code(), to_event(m, e)};
}

namespace {

bool any_sel(const MicroPtr& m) {
  if (!m) return false;
  return m->sel || any_sel(m->left) || any_sel(m->right);
}

StatePtr sel_state(const MicroPtr& m) {
  if (!m->sel) throw InternalError("back_to_term: sel marks inconsistent");
  switch (m->kind) {
    case MKind::Pause:
      return st::pause();
    case MKind::Awimm:
      return st::await(m->signal, m->negated);
    case MKind::Trap:
      return st::trap(sel_state(m->left));
    case MKind::Shift:
      return st::shift(sel_state(m->left));
    case MKind::Suspend:
      return st::suspend(m->signal, sel_state(m->left));
    case MKind::Signal:
      return st::local(m->signal, sel_state(m->left));
    case MKind::If: {
      bool l = any_sel(m->left), r = any_sel(m->right);
      if (l == r) throw InternalError("back_to_term: bad if selection");
      if (l)
        return st::if_left(m->signal, sel_state(m->left),
                           micro_base(m->right));
      return st::if_right(m->signal, micro_base(m->left),
                          sel_state(m->right));
    }
    case MKind::Seq: {
      bool l = any_sel(m->left), r = any_sel(m->right);
      if (l == r) throw InternalError("back_to_term: bad seq selection");
      if (l) return st::seq_left(sel_state(m->left), micro_base(m->right));
      return st::seq_right(micro_base(m->left), sel_state(m->right));
    }
    case MKind::Par: {
      bool l = any_sel(m->left), r = any_sel(m->right);
      if (l && r) return st::par_both(sel_state(m->left), sel_state(m->right));
      if (l) return st::par_left(sel_state(m->left), micro_base(m->right));
      if (r) return st::par_right(micro_base(m->left), sel_state(m->right));
      throw InternalError("back_to_term: bad par selection");
    }
    default:
      throw InternalError("back_to_term: sel on a dead leaf");
  }
}

}  // namespace

Term back_to_term(const MicroPtr& m) {
  if (!any_sel(m)) return Term(micro_base(m));
  return Term(sel_state(m));
}

namespace {

void vc_node(const Event& e, const MicroPtr& m, std::vector<std::string>& out,
             const std::string& path) {
  auto report = [&](const std::string& what) {
    out.push_back(what + " at " + (path.empty() ? "root" : path));
  };
  if (m->sel && m->in.go == Status::Plus)
    report("Go+ on a selected node");
  if (m->out.is_black() && !gores(*m))
    report("definite code without control (out=" + m->out.to_string() +
           ", in=" + m->in.to_string() + ")");
  if (m->out.is_white_all() && !nogores(*m))
    report("dead output without nogores (in=" + m->in.to_string() + ")");
  switch (m->kind) {
    case MKind::Emit:
    case MKind::Awimm:
      if (!e.has(m->signal)) report("signal " + m->signal + " out of scope");
      break;
    case MKind::If: {
      if (!e.has(m->signal)) report("signal " + m->signal + " out of scope");
      if (gores(*m->left) && gores(*m->right))
        report("both test branches executed");
      break;
    }
    case MKind::Suspend:
      if (!e.has(m->signal)) report("signal " + m->signal + " out of scope");
      break;
    case MKind::Seq:
      if (out_minus_zero(m->left->out).is_black() &&
          m->right->in.go == Status::Plus)
        report("sequence tail started after a non-terminating head");
      break;
    default:
      break;
  }
  Event inner = e;
  if (m->kind == MKind::Signal)
    inner = e.add(m->signal, emitter_status(m->left, m->signal));
  if (m->left) vc_node(inner, m->left, out, path + ".0");
  if (m->right) vc_node(inner, m->right, out, path + ".1");
}

}  // namespace

std::vector<std::string> vc_check(const Event& e, const MicroPtr& m) {
  std::vector<std::string> out;
  vc_node(e, m, out, "");
  if (is_total(m)) {
    try {
      MicroPtr fresh = from_term(back_to_term(m));
      if (!mleq(fresh, m))
        out.push_back("fresh conversion of the underlying term not below m");
    } catch (const InternalError& err) {
      out.push_back(err.what());
    }
  }
  return out;
}

namespace {

void micro_str(const MicroPtr& m, std::ostringstream& os) {
  os << '<' << (m->sel ? "S" : "") << m->in.to_string() << '>';
  switch (m->kind) {
    case MKind::Nothing:
      os << '0';
      break;
    case MKind::Pause:
      os << '1';
      break;
    case MKind::Exit:
      os << (m->wire + 2);
      break;
    case MKind::Emit:
      os << '!' << m->signal;
      break;
    case MKind::Awimm:
      os << "awimm " << (m->negated ? "\xc2\xac" : "") << m->signal;
      break;
    case MKind::Trap:
      os << '{';
      micro_str(m->left, os);
      os << '}';
      break;
    case MKind::Shift:
      os << "\xe2\x86\x91(";
      micro_str(m->left, os);
      os << ')';
      break;
    case MKind::Suspend:
      os << m->signal << " \xe2\x8a\x83 (";
      micro_str(m->left, os);
      os << ')';
      break;
    case MKind::If:
      os << m->signal << " ? (";
      micro_str(m->left, os);
      os << ") : (";
      micro_str(m->right, os);
      os << ')';
      break;
    case MKind::Seq:
      os << '(';
      micro_str(m->left, os);
      os << " ; ";
      micro_str(m->right, os);
      os << ')';
      break;
    case MKind::Par:
      os << '(';
      micro_str(m->left, os);
      os << " || ";
      micro_str(m->right, os);
      os << ')';
      break;
    case MKind::Signal:
      os << m->signal << " \\ (";
      micro_str(m->left, os);
      os << ')';
      break;
  }
  os << m->out.to_string();
}

void dot_node(const MicroPtr& m, int& next_id, std::ostringstream& os) {
  int id = next_id++;
  std::string label;
  switch (m->kind) {
    case MKind::Nothing: label = "0"; break;
    case MKind::Pause: label = "1"; break;
    case MKind::Exit: label = "exit " + std::to_string(m->wire + 2); break;
    case MKind::Emit: label = "emit " + m->signal; break;
    case MKind::Awimm:
      label = std::string("awimm ") + (m->negated ? "not " : "") + m->signal;
      break;
    case MKind::Trap: label = "trap"; break;
    case MKind::Shift: label = "shift"; break;
    case MKind::Suspend: label = "suspend " + m->signal; break;
    case MKind::If: label = "if " + m->signal; break;
    case MKind::Seq: label = "seq"; break;
    case MKind::Par: label = "par"; break;
    case MKind::Signal: label = "signal " + m->signal; break;
  }
  os << "  n" << id << " [label=\"" << label << "\\n"
     << (m->sel ? "sel " : "") << m->in.to_string() << ' '
     << m->out.to_string() << "\"];\n";
  if (m->left) {
    int child = next_id;
    dot_node(m->left, next_id, os);
    os << "  n" << id << " -> n" << child << ";\n";
  }
  if (m->right) {
    int child = next_id;
    dot_node(m->right, next_id, os);
    os << "  n" << id << " -> n" << child << ";\n";
  }
}

}  // namespace

std::string micro_to_string(const MicroPtr& m) {
  std::ostringstream os;
  micro_str(m, os);
  return os.str();
}

std::string format_steps(const RunStats& stats) {
  std::ostringstream os;
  int n = 0;
  for (const auto& info : stats.trace) {
    os << '#' << ++n << " rule=" << info.rule << " path=";
    if (info.path.empty()) os << '.';
    for (size_t i = 0; i < info.path.size(); ++i) {
      if (i) os << '.';
      os << info.path[i];
    }
    os << " before=" << info.before << " after=" << info.after << '\n';
  }
  return os.str();
}

std::string dump_dot(const MicroPtr& m) {
  std::ostringstream os;
  os << "digraph microstate {\n  node [shape=box];\n";
  int id = 0;
  dot_node(m, id, os);
  os << "}\n";
  return os.str();
}

}  // namespace esk
