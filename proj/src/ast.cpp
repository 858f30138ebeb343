#include "esk/ast.hpp"

#include <algorithm>
#include <cassert>

namespace esk {
namespace stmt {

static StmtPtr make(StmtKind kind, CompletionCode code, std::string signal,
                    bool negated, StmtPtr left, StmtPtr right) {
  auto s = std::make_shared<Statement>();
  s->kind = kind;
  s->code = code;
  s->signal = std::move(signal);
  s->negated = negated;
  s->left = std::move(left);
  s->right = std::move(right);
  return s;
}

StmtPtr constant(CompletionCode k) {
  assert(k >= 0);
  return make(StmtKind::Const, k, "", false, nullptr, nullptr);
}
StmtPtr emit(const std::string& s) {
  return make(StmtKind::Emit, 0, s, false, nullptr, nullptr);
}
StmtPtr awimm(const std::string& s, bool negated) {
  return make(StmtKind::Awimm, 0, s, negated, nullptr, nullptr);
}
StmtPtr test(const std::string& s, StmtPtr thn, StmtPtr els) {
  return make(StmtKind::If, 0, s, false, std::move(thn), std::move(els));
}
StmtPtr suspend(const std::string& s, StmtPtr body) {
  return make(StmtKind::Suspend, 0, s, false, std::move(body), nullptr);
}
StmtPtr seq(StmtPtr l, StmtPtr r) {
  return make(StmtKind::Seq, 0, "", false, std::move(l), std::move(r));
}
StmtPtr par(StmtPtr l, StmtPtr r) {
  return make(StmtKind::Par, 0, "", false, std::move(l), std::move(r));
}
StmtPtr loop(StmtPtr body) {
  return make(StmtKind::Loop, 0, "", false, std::move(body), nullptr);
}
StmtPtr trap(StmtPtr body) {
  return make(StmtKind::Trap, 0, "", false, std::move(body), nullptr);
}
StmtPtr shift(StmtPtr body) {
  return make(StmtKind::Shift, 0, "", false, std::move(body), nullptr);
}
StmtPtr local(const std::string& s, StmtPtr body) {
  return make(StmtKind::Signal, 0, s, false, std::move(body), nullptr);
}

}  // namespace stmt

int compare(const StmtPtr& a, const StmtPtr& b) {
  if (a == b) return 0;
  if (!a) return -1;
  if (!b) return 1;
  if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
  if (a->code != b->code) return a->code < b->code ? -1 : 1;
  if (int c = a->signal.compare(b->signal)) return c < 0 ? -1 : 1;
  if (a->negated != b->negated) return a->negated ? 1 : -1;
  if (int c = compare(a->left, b->left)) return c;
  return compare(a->right, b->right);
}

bool equal(const StmtPtr& a, const StmtPtr& b) { return compare(a, b) == 0; }

static void free_signals_rec(const StmtPtr& p, std::set<std::string>& bound,
                             std::set<std::string>& out) {
  if (!p) return;
  switch (p->kind) {
    case StmtKind::Emit:
    case StmtKind::Awimm:
      if (!bound.count(p->signal)) out.insert(p->signal);
      return;
    case StmtKind::If:
    case StmtKind::Suspend:
      if (!bound.count(p->signal)) out.insert(p->signal);
      break;
    case StmtKind::Signal: {
      bool was_bound = bound.count(p->signal) > 0;
      bound.insert(p->signal);
      free_signals_rec(p->left, bound, out);
      if (!was_bound) bound.erase(p->signal);
      return;
    }
    default:
      break;
  }
  free_signals_rec(p->left, bound, out);
  free_signals_rec(p->right, bound, out);
}

std::set<std::string> free_signals(const StmtPtr& p) {
  std::set<std::string> bound, out;
  free_signals_rec(p, bound, out);
  return out;
}

bool contains_loop(const StmtPtr& p) {
  if (!p) return false;
  if (p->kind == StmtKind::Loop) return true;
  return contains_loop(p->left) || contains_loop(p->right);
}

int node_count(const StmtPtr& p) {
  if (!p) return 0;
  return 1 + node_count(p->left) + node_count(p->right);
}

static void collect(const StmtPtr& p, std::vector<StmtPtr>& out) {
  if (!p) return;
  out.push_back(p);
  collect(p->left, out);
  collect(p->right, out);
}

std::vector<StmtPtr> subterms(const StmtPtr& p) {
  std::vector<StmtPtr> out;
  collect(p, out);
  return out;
}

CompletionCode down_code(CompletionCode k) {
  if (k <= 1) return k;
  if (k == 2) return 0;
  return k - 1;
}

CompletionCode up_code(CompletionCode k) { return k >= 2 ? k + 1 : k; }

CompletionCode par_code(CompletionCode k1, CompletionCode k2) {
  return std::max(k1, k2);
}

StmtPtr delta(CompletionCode k, StmtPtr p) {
  return k == 1 ? std::move(p) : stmt::constant(0);
}

}  // namespace esk
