#include "esk/gen.hpp"

namespace esk {
namespace {

struct GenCtx {
  const GenOptions* opt;
  std::vector<std::string> scope;
  int trap_depth = 0;
  int decl_nesting = 0;
  int fresh = 0;
};

int pick(Rng& rng, int n) {
  return std::uniform_int_distribution<int>(0, n - 1)(rng);
}

// Bias towards the innermost declared signal: self-referential
// declarations are where the constructive analysis earns its keep.
const std::string& pick_signal(Rng& rng, const GenCtx& ctx) {
  if (ctx.decl_nesting > 0 && pick(rng, 2) == 0) return ctx.scope.back();
  return ctx.scope[pick(rng, ctx.scope.size())];
}

StmtPtr gen(Rng& rng, GenCtx& ctx, int depth);

StmtPtr gen_leaf(Rng& rng, GenCtx& ctx) {
  for (;;) {
    switch (pick(rng, 6)) {
      case 0:
        return stmt::constant(0);
      case 1:
        return stmt::constant(1);
      case 2: {
        if (ctx.trap_depth == 0) continue;  // prefer catchable exits
        return stmt::constant(2 + pick(rng, ctx.trap_depth + 1));
      }
      case 3:
        if (ctx.scope.empty()) continue;
        return stmt::emit(pick_signal(rng, ctx));
      case 4:
        if (ctx.scope.empty()) continue;
        return stmt::awimm(pick_signal(rng, ctx), false);
      default:
        if (ctx.scope.empty()) continue;
        return stmt::awimm(pick_signal(rng, ctx), true);
    }
  }
}

StmtPtr gen_unary(Rng& rng, GenCtx& ctx, int depth) {
  for (;;) {
    switch (pick(rng, 5)) {
      case 0: {
        if (!ctx.opt->allow_loops) continue;
        // A trailing pause keeps the body from terminating instantly.
        StmtPtr body = stmt::seq(gen(rng, ctx, depth - 1), stmt::constant(1));
        return stmt::loop(body);
      }
      case 1: {
        ++ctx.trap_depth;
        StmtPtr body = gen(rng, ctx, depth - 1);
        --ctx.trap_depth;
        return stmt::trap(body);
      }
      case 2:
        return stmt::shift(gen(rng, ctx, depth - 1));
      case 3: {
        if (ctx.scope.empty()) continue;
        std::string s = pick_signal(rng, ctx);
        return stmt::suspend(s, gen(rng, ctx, depth - 1));
      }
      default: {
        if (ctx.decl_nesting >= ctx.opt->max_decl_nesting) continue;
        std::string s = "l" + std::to_string(++ctx.fresh);
        ctx.scope.push_back(s);
        ++ctx.decl_nesting;
        // Declared signals that are never definitely emitted leave the
        // must side of the gating idle, so often emit first; a bare
        // self-test probes the rejection paths instead.
        StmtPtr body;
        switch (pick(rng, 4)) {
          case 0:
            body = stmt::seq(stmt::emit(s), gen(rng, ctx, depth - 1));
            break;
          case 1:
            body = stmt::seq(stmt::emit(s),
                             stmt::test(s, gen(rng, ctx, depth - 1),
                                        gen(rng, ctx, depth - 1)));
            break;
          case 2:
            body = stmt::test(s, gen(rng, ctx, depth - 1),
                              gen(rng, ctx, depth - 1));
            break;
          default:
            body = gen(rng, ctx, depth - 1);
            break;
        }
        --ctx.decl_nesting;
        ctx.scope.pop_back();
        return stmt::local(s, body);
      }
    }
  }
}

StmtPtr gen_binary(Rng& rng, GenCtx& ctx, int depth) {
  switch (pick(rng, 3)) {
    case 0:
      return stmt::seq(gen(rng, ctx, depth - 1), gen(rng, ctx, depth - 1));
    case 1:
      return stmt::par(gen(rng, ctx, depth - 1), gen(rng, ctx, depth - 1));
    default: {
      if (ctx.scope.empty())
        return stmt::seq(gen(rng, ctx, depth - 1), gen(rng, ctx, depth - 1));
      std::string s = pick_signal(rng, ctx);
      return stmt::test(s, gen(rng, ctx, depth - 1),
                        gen(rng, ctx, depth - 1));
    }
  }
}

StmtPtr gen(Rng& rng, GenCtx& ctx, int depth) {
  if (depth <= 0) return gen_leaf(rng, ctx);
  int roll = pick(rng, 100);
  if (roll < 40) return gen_leaf(rng, ctx);
  if (roll < 65) return gen_unary(rng, ctx, depth);
  return gen_binary(rng, ctx, depth);
}

}  // namespace

StmtPtr random_program(Rng& rng, const GenOptions& opt,
                       const std::vector<std::string>& ambient) {
  GenCtx ctx;
  ctx.opt = &opt;
  ctx.scope = ambient;
  return gen(rng, ctx, opt.max_depth);
}

Event random_total_event(Rng& rng, const std::vector<std::string>& names) {
  std::vector<Binding> binds;
  for (const auto& n : names)
    binds.push_back({n, pick(rng, 2) ? Status::Plus : Status::Minus});
  return Event(std::move(binds));
}

Event lower_random(Rng& rng, const Event& e) {
  std::vector<Binding> binds = e.bindings();
  for (auto& b : binds)
    if (pick(rng, 3) == 0) b.status = Status::Bot;
  return Event(std::move(binds));
}

std::vector<std::vector<std::string>> random_input_stream(
    Rng& rng, const std::vector<std::string>& inputs, int max_instants) {
  int n = 1 + pick(rng, max_instants);
  std::vector<std::vector<std::string>> stream;
  for (int i = 0; i < n; ++i) {
    std::vector<std::string> instant;
    for (const auto& s : inputs)
      if (pick(rng, 2)) instant.push_back(s);
    stream.push_back(std::move(instant));
  }
  return stream;
}

}  // namespace esk
