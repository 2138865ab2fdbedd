#include "flucid/evidence.hpp"

#include <algorithm>
#include <sstream>

#include "flucid/errors.hpp"

namespace flucid {

Property Property::of(Value v) {
  if (!v.is_atom() && !v.is_set())
    throw ValidationError(std::string("observation property must be an atom or property set, got ") +
                          v.type_name());
  Property p;
  p.value_ = std::move(v);
  return p;
}

bool operator<(const Property& a, const Property& b) {
  if (a.is_any() || b.is_any()) return a.is_any() && !b.is_any();
  return a.value() < b.value();
}

std::string to_string(const Property& p) { return p.is_any() ? "$" : to_string(p.value()); }

std::string to_string(const Observation& o) {
  if (o.is_wildcard()) return "$";
  std::ostringstream os;
  os << '(' << to_string(o.property) << ", " << o.min << ", ";
  if (o.opt)
    os << *o.opt;
  else
    os << "+inf";
  os << ')';
  return os.str();
}

bool ObservationSequence::is_fixed() const {
  return std::all_of(observations.begin(), observations.end(), [](const Observation& o) { return o.is_fixed(); });
}

std::string to_string(const ObservationSequence& os) {
  std::string out;
  for (const auto& o : os.observations) out += to_string(o);
  return out;
}

const ObservationSequence* EvidentialStatement::find(std::string_view name) const {
  for (const auto& os : sequences)
    if (os.name == name) return &os;
  return nullptr;
}

bool operator==(const EvidentialStatement& a, const EvidentialStatement& b) {
  return a.name == b.name && a.sequences.size() == b.sequences.size() &&
         std::is_permutation(a.sequences.begin(), a.sequences.end(), b.sequences.begin());
}

}  // namespace flucid
