#include "flucid/forensic.hpp"

#include "flucid/errors.hpp"

namespace flucid::forensic {

namespace {

std::size_t max_duration(const Observation& o, std::optional<std::size_t> cap) {
  if (o.opt) return o.min + *o.opt;
  if (!cap) throw ExpansionError("observation " + to_string(o) + " has an infinite duration and no cap was given");
  if (*cap < o.min)
    throw ExpansionError("cap " + std::to_string(*cap) + " is below the minimum duration of " + to_string(o));
  return *cap;
}

void require_fixed(const ObservationSequence& os) {
  if (!os.is_fixed())
    throw AmbiguousExpansion("sequence '" + os.name + "' " + to_string(os) +
                             " has optional durations; use expand_sequence to enumerate its readings");
}

std::vector<Property> fixed_properties(const ObservationSequence& os) {
  require_fixed(os);
  std::vector<Property> out;
  for (const auto& o : os.observations) out.insert(out.end(), o.min, o.property);
  return out;
}

}  // namespace

std::vector<std::vector<Property>> expand_observation(const Observation& o, std::optional<std::size_t> cap) {
  const std::size_t hi = max_duration(o, cap);
  std::vector<std::vector<Property>> runs;
  for (std::size_t t = o.min; t <= hi; ++t) runs.emplace_back(t, o.property);
  return runs;
}

TagStream combine(const TagStream& s, const Value& e) {
  TagStream out{s.dimension, {}, true};
  for (const auto& x : s.elements) out.elements.push_back(Value::array({x, e}));
  return out;
}

TagStream product(const TagStream& s1, const TagStream& s2) {
  TagStream out{s1.dimension, {}, true};
  for (const auto& y : s2.elements) {
    TagStream part = combine(s1, y);
    out.elements.insert(out.elements.end(), part.elements.begin(), part.elements.end());
  }
  return out;
}

ExpansionSet expand_sequence(const ObservationSequence& os, std::optional<std::size_t> cap) {
  // Each element of `prefixes` is an array of chosen durations for the
  // observations seen so far. product(choices, prefixes) keeps the prefix
  // as the slow-varying coordinate, which yields lexicographic order.
  TagStream prefixes = TagStream::of("expansion", {Value::array({})});
  for (const auto& o : os.observations) {
    const std::size_t hi = max_duration(o, cap);
    TagStream choices{"expansion", {}, true};
    for (std::size_t t = o.min; t <= hi; ++t) choices.elements.push_back(Value::integer(static_cast<std::int64_t>(t)));

    TagStream paired = product(choices, prefixes);
    TagStream extended{"expansion", {}, true};
    for (const auto& pair : paired.elements) {
      const auto& items = pair.as_array().items;
      auto durations = items[1].as_array().items;
      durations.push_back(items[0]);
      extended.elements.push_back(Value::array(std::move(durations)));
    }
    prefixes = std::move(extended);
  }

  ExpansionSet set{{}, cap};
  for (const auto& choice : prefixes.elements) {
    PropertyStream ps;
    ps.origin = os.name;
    const auto& durations = choice.as_array().items;
    for (std::size_t i = 0; i < durations.size(); ++i) {
      const auto t = static_cast<std::size_t>(durations[i].as_int());
      ps.durations.push_back(t);
      ps.properties.insert(ps.properties.end(), t, os.observations[i].property);
    }
    set.streams.push_back(std::move(ps));
  }
  return set;
}

Value at_obs(const ObservationSequence& os, std::size_t i) {
  auto props = fixed_properties(os);
  if (i >= props.size()) return Value::eod();
  if (props[i].is_any()) return Value::atom("$");
  return props[i].value();
}

std::vector<std::size_t> indices_of(const ObservationSequence& os, const Value& p) {
  auto props = fixed_properties(os);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < props.size(); ++i)
    if (!props[i].is_any() && props[i].value() == p) out.push_back(i);
  return out;
}

}  // namespace flucid::forensic
