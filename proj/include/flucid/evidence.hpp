#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "flucid/value.hpp"

namespace flucid {

// What an observation witnesses: a concrete Value (Atom or PropertySet) or ANY.
class Property {
 public:
  static Property any() { return Property(); }
  static Property of(Value v);

  bool is_any() const { return !value_.has_value(); }
  const Value& value() const { return *value_; }

  friend bool operator==(const Property&, const Property&) = default;
  friend bool operator<(const Property& a, const Property& b);

 private:
  Property() = default;
  std::optional<Value> value_;
};

std::string to_string(const Property& p);

// (P, min, opt): P held for at least `min` and at most `min + opt` steps.
struct Observation {
  Property property = Property::any();
  std::size_t min = 0;
  std::optional<std::size_t> opt;  // nullopt is +inf

  // `$`, i.e. (ANY, 0, +inf).
  static Observation wildcard() { return Observation{Property::any(), 0, std::nullopt}; }

  bool is_fixed() const { return opt.has_value() && *opt == 0; }
  bool is_wildcard() const { return property.is_any() && min == 0 && !opt.has_value(); }

  friend bool operator==(const Observation&, const Observation&) = default;
};

std::string to_string(const Observation& o);

struct ObservationSequence {
  std::string name;
  std::vector<Observation> observations;

  bool is_fixed() const;

  friend bool operator==(const ObservationSequence&, const ObservationSequence&) = default;
};

std::string to_string(const ObservationSequence& os);

// Unordered: equality ignores the order of `sequences`.
struct EvidentialStatement {
  std::string name;
  std::vector<ObservationSequence> sequences;

  const ObservationSequence* find(std::string_view name) const;

  friend bool operator==(const EvidentialStatement& a, const EvidentialStatement& b);
};

}  // namespace flucid
