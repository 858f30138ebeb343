#include "esk/print.hpp"

#include <sstream>
#include <vector>

namespace esk {
namespace {

// Symbolic precedence levels, loosest first.
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

int level_of(const StmtPtr& p) {
  switch (p->kind) {
    case StmtKind::Signal:
      return kDecl;
    case StmtKind::Par:
      return kPar;
    case StmtKind::Seq:
      return kSeq;
    case StmtKind::If:
      return kTern;
    case StmtKind::Suspend:
      return kSusp;
    case StmtKind::Shift:
      return kShift;
    case StmtKind::Loop:
      return kPostfix;
    default:
      return kPrimary;
  }
}

void sym(const StmtPtr& p, int min_level, std::ostringstream& os) {
  bool parens = level_of(p) < min_level;
  if (parens) os << '(';
  switch (p->kind) {
    case StmtKind::Const:
      os << p->code;
      break;
    case StmtKind::Emit:
      os << '!' << p->signal;
      break;
    case StmtKind::Awimm:
      os << "awimm " << (p->negated ? "\xc2\xac" : "") << p->signal;
      break;
    case StmtKind::If:
      os << p->signal << " ? ";
      sym(p->left, kSusp, os);
      os << " : ";
      sym(p->right, kTern, os);
      break;
    case StmtKind::Suspend:
      os << p->signal << " \xe2\x8a\x83 ";
      sym(p->left, kSusp, os);
      break;
    case StmtKind::Seq:
      sym(p->left, kTern, os);
      os << " ; ";
      sym(p->right, kSeq, os);
      break;
    case StmtKind::Par:
      sym(p->left, kSeq, os);
      os << " || ";
      sym(p->right, kPar, os);
      break;
    case StmtKind::Loop:
      sym(p->left, kPrimary, os);
      os << "\xc2\xb0";
      break;
    case StmtKind::Trap:
      os << '{';
      sym(p->left, kDecl, os);
      os << '}';
      break;
    case StmtKind::Shift:
      os << "\xe2\x86\x91";
      sym(p->left, kShift, os);
      break;
    case StmtKind::Signal:
      os << p->signal << " \\ ";
      sym(p->left, kDecl, os);
      break;
  }
  if (parens) os << ')';
}

// Textual printing. Trap names are invented (T1, T2, ... by nesting
// depth); exits that cannot name their trap (or would cross a shift
// escape) fall back to raw `exit K`.
struct TextCtx {
  std::vector<std::string> frames;  // "" marks a shift escape
};

enum TextLevel { kTPar = 1, kTSeq = 2, kTAtom = 3 };

int text_level(const StmtPtr& p) {
  switch (p->kind) {
    case StmtKind::Par:
      return kTPar;
    case StmtKind::Seq:
      return kTSeq;
    default:
      return kTAtom;
  }
}

void text(const StmtPtr& p, int min_level, TextCtx& ctx,
          std::ostringstream& os) {
  bool bracket = text_level(p) < min_level;
  if (bracket) os << "[ ";
  switch (p->kind) {
    case StmtKind::Const:
      if (p->code == 0) {
        os << "nothing";
      } else if (p->code == 1) {
        os << "pause";
      } else {
        int need = p->code - 2;
        const std::string* name = nullptr;
        for (auto it = ctx.frames.rbegin(); it != ctx.frames.rend(); ++it) {
          if (it->empty()) break;  // shift escape: stop searching
          if (need == 0) {
            name = &*it;
            break;
          }
          --need;
        }
        if (name)
          os << "exit " << *name << '^' << p->code;
        else
          os << "exit " << p->code;
      }
      break;
    case StmtKind::Emit:
      os << "emit " << p->signal;
      break;
    case StmtKind::Awimm:
      os << "await immediate " << (p->negated ? "not " : "") << p->signal;
      break;
    case StmtKind::If:
      os << "if " << p->signal << " then ";
      text(p->left, kTPar, ctx, os);
      os << " else ";
      text(p->right, kTPar, ctx, os);
      os << " end";
      break;
    case StmtKind::Suspend:
      os << "suspend ";
      text(p->left, kTAtom, ctx, os);
      os << " when " << p->signal;
      break;
    case StmtKind::Seq:
      text(p->left, kTAtom, ctx, os);
      os << " ; ";
      text(p->right, kTSeq, ctx, os);
      break;
    case StmtKind::Par:
      text(p->left, kTSeq, ctx, os);
      os << " || ";
      text(p->right, kTPar, ctx, os);
      break;
    case StmtKind::Loop:
      os << "loop ";
      text(p->left, kTPar, ctx, os);
      os << " end";
      break;
    case StmtKind::Trap: {
      int traps = 0;
      for (const auto& f : ctx.frames)
        if (!f.empty()) ++traps;
      std::string name = "T" + std::to_string(traps + 1);
      os << "trap " << name << " in ";
      ctx.frames.push_back(name);
      text(p->left, kTPar, ctx, os);
      ctx.frames.pop_back();
      os << " end";
      break;
    }
    case StmtKind::Shift:
      os << "\xe2\x86\x91 ";
      ctx.frames.push_back("");
      text(p->left, kTAtom, ctx, os);
      ctx.frames.pop_back();
      break;
    case StmtKind::Signal:
      os << "signal " << p->signal << " in ";
      text(p->left, kTPar, ctx, os);
      os << " end";
      break;
  }
  if (bracket) os << " ]";
}

}  // namespace

std::string print(const StmtPtr& p, Form form) {
  std::ostringstream os;
  if (form == Form::Symbolic) {
    sym(p, kDecl, os);
  } else {
    TextCtx ctx;
    text(p, kTPar, ctx, os);
  }
  return os.str();
}

}  // namespace esk
