#include "esk/events.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "esk/errors.hpp"

namespace esk {

char status_char(Status s) {
  switch (s) {
    case Status::Plus:
      return '+';
    case Status::Minus:
      return '-';
    default:
      return '?';
  }
}

Status status_not(Status a) {
  if (a == Status::Plus) return Status::Minus;
  if (a == Status::Minus) return Status::Plus;
  return Status::Bot;
}

Status status_and(Status a, Status b) {
  if (a == Status::Minus || b == Status::Minus) return Status::Minus;
  if (a == Status::Plus && b == Status::Plus) return Status::Plus;
  return Status::Bot;
}

Status status_or(Status a, Status b) {
  if (a == Status::Plus || b == Status::Plus) return Status::Plus;
  if (a == Status::Minus && b == Status::Minus) return Status::Minus;
  return Status::Bot;
}

Status lift(bool b) { return b ? Status::Plus : Status::Minus; }

bool status_leq(Status a, Status b) { return a == b || a == Status::Bot; }

Event Event::add(const std::string& s, Status st) const {
  auto binds = binds_;
  binds.push_back({s, st});
  return Event(std::move(binds));
}

std::optional<Status> Event::lookup(const std::string& s) const {
  for (auto it = binds_.rbegin(); it != binds_.rend(); ++it)
    if (it->name == s) return it->status;
  return std::nullopt;
}

Event Event::restricted(const std::string& s) const {
  auto binds = binds_;
  int inner = -1;
  for (int i = static_cast<int>(binds.size()) - 1; i >= 0; --i)
    if (binds[i].name == s) {
      inner = i;
      break;
    }
  if (inner < 0) throw InternalError("restrict: no binding of " + s);
  binds.erase(binds.begin() + inner);
  // A previously shadowed outer s becomes visible again; nothing in the
  // restricted scope emitted it, so it reads Minus.
  for (int i = static_cast<int>(binds.size()) - 1; i >= 0; --i)
    if (binds[i].name == s) {
      binds[i].status = Status::Minus;
      break;
    }
  return Event(std::move(binds));
}

static Status join(Status a, Status b) {
  // Emission knowledge: Plus dominant, Minus needs both sides.
  return status_or(a, b);
}

Event Event::unioned(const Event& other) const {
  if (!same_domain(other)) throw InternalError("event union: domain mismatch");
  auto binds = binds_;
  for (size_t i = 0; i < binds.size(); ++i)
    binds[i].status = join(binds[i].status, other.binds_[i].status);
  return Event(std::move(binds));
}

bool Event::total() const {
  return std::none_of(binds_.begin(), binds_.end(), [](const Binding& b) {
    return b.status == Status::Bot;
  });
}

Event Event::all_minus() const {
  auto binds = binds_;
  for (auto& b : binds) b.status = Status::Minus;
  return Event(std::move(binds));
}

Event Event::with_status(const std::string& s, Status st) const {
  auto binds = binds_;
  for (int i = static_cast<int>(binds.size()) - 1; i >= 0; --i)
    if (binds[i].name == s) {
      binds[i].status = st;
      return Event(std::move(binds));
    }
  throw UnboundSignal(s);
}

bool Event::same_domain(const Event& other) const {
  if (binds_.size() != other.binds_.size()) return false;
  for (size_t i = 0; i < binds_.size(); ++i)
    if (binds_[i].name != other.binds_[i].name) return false;
  return true;
}

bool Event::leq(const Event& other) const {
  if (!same_domain(other)) throw InternalError("event leq: domain mismatch");
  for (size_t i = 0; i < binds_.size(); ++i)
    if (!status_leq(binds_[i].status, other.binds_[i].status)) return false;
  return true;
}

bool Event::operator==(const Event& other) const {
  if (binds_.size() != other.binds_.size()) return false;
  for (size_t i = 0; i < binds_.size(); ++i)
    if (binds_[i].name != other.binds_[i].name ||
        binds_[i].status != other.binds_[i].status)
      return false;
  return true;
}

std::string Event::serialize() const {
  std::map<std::string, Status> visible;
  for (const auto& b : binds_) visible[b.name] = b.status;  // later shadows
  std::ostringstream os;
  bool first = true;
  for (const auto& [name, st] : visible) {
    if (!first) os << ',';
    first = false;
    os << name << '=' << status_char(st);
  }
  return os.str();
}

Event c_to_k(const Event& e) {
  if (!e.total()) throw InternalError("c_to_k: event is not total");
  return e;
}

}  // namespace esk
