#include "esk/potentials.hpp"

#include <algorithm>
#include <sstream>

#include "esk/errors.hpp"
#include "esk/faults.hpp"

namespace esk {

bool Potential::subset_of(const Potential& other) const {
  return std::includes(other.signals.begin(), other.signals.end(),
                       signals.begin(), signals.end()) &&
         std::includes(other.codes.begin(), other.codes.end(), codes.begin(),
                       codes.end());
}

std::string Potential::to_string() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const auto& s : signals) {
    if (!first) os << ',';
    first = false;
    os << s;
  }
  os << "} / {";
  first = true;
  for (int k : codes) {
    if (!first) os << ',';
    first = false;
    os << k;
  }
  os << '}';
  return os.str();
}

namespace {

Status lookup_or_throw(const Event& e, const std::string& s) {
  auto st = e.lookup(s);
  if (!st) throw UnboundSignal(s);
  return *st;
}

std::set<std::string> set_union(const std::set<std::string>& a,
                                const std::set<std::string>& b) {
  std::set<std::string> r = a;
  r.insert(b.begin(), b.end());
  return r;
}

std::set<CompletionCode> code_union(const std::set<CompletionCode>& a,
                                    const std::set<CompletionCode>& b) {
  std::set<CompletionCode> r = a;
  r.insert(b.begin(), b.end());
  return r;
}

// Pairwise max; an empty operand yields an empty result (a parallel has
// a definite code only when both branches do).
std::set<CompletionCode> max_codes(const std::set<CompletionCode>& a,
                                   const std::set<CompletionCode>& b) {
  std::set<CompletionCode> r;
  for (int x : a)
    for (int y : b) r.insert(std::max(x, y));
  return r;
}

std::set<CompletionCode> map_codes(const std::set<CompletionCode>& a,
                                   CompletionCode (*f)(CompletionCode)) {
  std::set<CompletionCode> r;
  for (int x : a) r.insert(f(x));
  return r;
}

std::set<CompletionCode> minus_zero(const std::set<CompletionCode>& a) {
  auto r = a;
  r.erase(0);
  return r;
}

}  // namespace

Potential must(const StmtPtr& p, const Event& e) {
  switch (p->kind) {
    case StmtKind::Const:
      return {{}, {p->code}};
    case StmtKind::Emit:
      if (!e.has(p->signal)) throw UnboundSignal(p->signal);
      return {{p->signal}, {0}};
    case StmtKind::Awimm: {
      Status sat = lookup_or_throw(e, p->signal);
      if (p->negated) sat = status_not(sat);
      if (sat == Status::Plus) return {{}, {0}};
      if (sat == Status::Minus) return {{}, {1}};
      return {{}, {}};
    }
    case StmtKind::If: {
      Status st = lookup_or_throw(e, p->signal);
      if (st == Status::Plus) return must(p->left, e);
      if (st == Status::Minus) return must(p->right, e);
      return {{}, {}};
    }
    case StmtKind::Suspend:
    case StmtKind::Loop:
      return must(p->left, e);
    case StmtKind::Seq: {
      Potential mp = must(p->left, e);
      if (!mp.codes.count(0)) return mp;
      Potential mq = must(p->right, e);
      return {set_union(mp.signals, mq.signals), mq.codes};
    }
    case StmtKind::Par: {
      Potential mp = must(p->left, e);
      Potential mq = must(p->right, e);
      return {set_union(mp.signals, mq.signals),
              max_codes(mp.codes, mq.codes)};
    }
    case StmtKind::Trap: {
      Potential mp = must(p->left, e);
      return {mp.signals, map_codes(mp.codes, down_code)};
    }
    case StmtKind::Shift: {
      Potential mp = must(p->left, e);
      return {mp.signals, map_codes(mp.codes, up_code)};
    }
    case StmtKind::Signal: {
      const std::string& s = p->signal;
      Event ebot = e.add(s, Status::Bot);
      Potential r;
      if (must(p->left, ebot).signals.count(s)) {
        r = must(p->left, e.add(s, Status::Plus));
      } else if (!can(CanFlag::Plus, p->left, ebot).signals.count(s)) {
        r = must(p->left, e.add(s, Status::Minus));
      } else {
        r = must(p->left, ebot);
      }
      r.signals.erase(s);
      return r;
    }
  }
  throw InternalError("must: unhandled statement kind");
}

Potential can(CanFlag b, const StmtPtr& p, const Event& e) {
  switch (p->kind) {
    case StmtKind::Const:
      return {{}, {p->code}};
    case StmtKind::Emit:
      if (!e.has(p->signal)) throw UnboundSignal(p->signal);
      return {{p->signal}, {0}};
    case StmtKind::Awimm: {
      Status sat = lookup_or_throw(e, p->signal);
      if (p->negated) sat = status_not(sat);
      if (sat == Status::Plus) return {{}, {0}};
      if (sat == Status::Minus) return {{}, {1}};
      return {{}, {0, 1}};
    }
    case StmtKind::If: {
      Status st = lookup_or_throw(e, p->signal);
      if (st == Status::Plus) return can(b, p->left, e);
      if (st == Status::Minus) return can(b, p->right, e);
      Potential cp = can(CanFlag::Minus, p->left, e);
      Potential cq = can(CanFlag::Minus, p->right, e);
      return {set_union(cp.signals, cq.signals), code_union(cp.codes, cq.codes)};
    }
    case StmtKind::Suspend:
    case StmtKind::Loop:
      return can(b, p->left, e);
    case StmtKind::Seq: {
      Potential cp = can(b, p->left, e);
      if (!cp.codes.count(0)) return cp;
      CanFlag bq = (must(p->left, e).codes.count(0) && b == CanFlag::Plus)
                       ? CanFlag::Plus
                       : CanFlag::Minus;
      if (current_fault() == Fault::SeqCanFlagSwap)
        bq = bq == CanFlag::Plus ? CanFlag::Minus : CanFlag::Plus;
      Potential cq = can(bq, p->right, e);
      return {set_union(cp.signals, cq.signals),
              code_union(minus_zero(cp.codes), cq.codes)};
    }
    case StmtKind::Par: {
      Potential cp = can(b, p->left, e);
      Potential cq = can(b, p->right, e);
      return {set_union(cp.signals, cq.signals),
              max_codes(cp.codes, cq.codes)};
    }
    case StmtKind::Trap: {
      Potential cp = can(b, p->left, e);
      return {cp.signals, map_codes(cp.codes, down_code)};
    }
    case StmtKind::Shift: {
      Potential cp = can(b, p->left, e);
      return {cp.signals, map_codes(cp.codes, up_code)};
    }
    case StmtKind::Signal: {
      const std::string& s = p->signal;
      Event ebot = e.add(s, Status::Bot);
      Potential r;
      if (b == CanFlag::Plus && must(p->left, ebot).signals.count(s)) {
        r = can(b, p->left, e.add(s, Status::Plus));
      } else if (!can(CanFlag::Plus, p->left, ebot).signals.count(s)) {
        r = can(b, p->left, e.add(s, Status::Minus));
      } else {
        r = can(b, p->left, ebot);
      }
      r.signals.erase(s);
      return r;
    }
  }
  throw InternalError("can: unhandled statement kind");
}

}  // namespace esk
