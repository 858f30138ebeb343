#pragma once

#include <optional>
#include <string>
#include <vector>

namespace esk {

/// Signal status. Logical events use Plus/Minus only; constructive events
/// may carry Bot (no information yet).
enum class Status : unsigned char { Plus, Minus, Bot };

char status_char(Status s);

// Kleene operators on the flat domain (Bot < Plus, Bot < Minus).
Status status_not(Status a);
Status status_and(Status a, Status b);  // Minus dominant
Status status_or(Status a, Status b);   // Plus dominant
Status lift(bool b);

/// Bot below both Plus and Minus; Plus/Minus incomparable.
bool status_leq(Status a, Status b);

struct Binding {
  std::string name;
  Status status;
};

/// An ordered list of signal bindings; a later binding of the same name
/// shadows earlier ones. Output events always cover the full visible
/// domain (non-emitted signals are explicitly Minus).
class Event {
 public:
  Event() = default;
  explicit Event(std::vector<Binding> binds) : binds_(std::move(binds)) {}

  const std::vector<Binding>& bindings() const { return binds_; }
  size_t size() const { return binds_.size(); }
  bool empty() const { return binds_.empty(); }

  /// Pushes an inner binding, shadowing any existing one of the same name.
  Event add(const std::string& s, Status st) const;

  /// Innermost status of s, if bound.
  std::optional<Status> lookup(const std::string& s) const;
  bool has(const std::string& s) const { return lookup(s).has_value(); }

  /// Drops the innermost binding of s; a newly exposed outer binding of s
  /// is reset to Minus (it was shadowed, so nothing emitted it here).
  Event restricted(const std::string& s) const;

  /// Pointwise join over identical binding structures: Plus wins, Minus
  /// only when both sides agree, Bot otherwise.
  Event unioned(const Event& other) const;

  bool total() const;  // no Bot anywhere

  /// Same binding names, every status Minus.
  Event all_minus() const;

  /// Replaces the innermost binding of s (which must exist).
  Event with_status(const std::string& s, Status st) const;

  bool same_domain(const Event& other) const;

  /// Pointwise information order; requires equal domains.
  bool leq(const Event& other) const;

  bool operator==(const Event& other) const;

  /// Sorted `name=+|-|?` pairs, comma separated; shadowed bindings are
  /// reported at their visible (innermost) value.
  std::string serialize() const;

 private:
  std::vector<Binding> binds_;
};

/// Reinterprets a total constructive event as a logical one.
/// The representation is shared, so this just checks totality.
Event c_to_k(const Event& e);

inline bool event_leq(const Event& a, const Event& b) { return a.leq(b); }

}  // namespace esk
