#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "flucid/context.hpp"
#include "flucid/evidence.hpp"

namespace flucid::forensic {

// One duration-resolved reading of an observation sequence: the property
// held at each sub-dimension index 0..L-1.
struct PropertyStream {
  std::vector<Property> properties;
  std::vector<std::size_t> durations;  // one per observation of `origin`
  std::string origin;

  std::size_t length() const { return properties.size(); }
};

struct ExpansionSet {
  std::vector<PropertyStream> streams;
  std::optional<std::size_t> cap;
};

// All runs {P^t | t in [min, min+opt]}. An infinite opt is clamped to `cap`,
// which must then be present and at least `min`.
std::vector<std::vector<Property>> expand_observation(const Observation& o, std::optional<std::size_t> cap);

// Every duration assignment of `os`, built by product/combine over the
// per-observation duration choices, in lexicographic duration order.
ExpansionSet expand_sequence(const ObservationSequence& os, std::optional<std::size_t> cap);

// Pairs every element x of `s` with `e` as the two-element array [x, e].
// An empty stream yields the empty (eod) stream.
TagStream combine(const TagStream& s, const Value& e);

// combine(s1, y) for each y of s2 in turn; |result| = |s1| * |s2|.
TagStream product(const TagStream& s1, const TagStream& s2);

// Property at sub-dimension index i of a fixed sequence; eod past the end.
Value at_obs(const ObservationSequence& os, std::size_t i);

// Every sub-dimension index holding property p in a fixed sequence.
std::vector<std::size_t> indices_of(const ObservationSequence& os, const Value& p);

}  // namespace flucid::forensic
