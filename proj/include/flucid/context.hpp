#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "flucid/value.hpp"

namespace flucid {

using Tag = std::int64_t;

// A point in context space: dimension name -> non-negative tag.
class Context {
 public:
  Context() = default;
  Context(std::initializer_list<std::pair<const std::string, Tag>> bindings);

  // Copy of this context with `dim` rebound; throws ValidationError on a negative tag.
  [[nodiscard]] Context with(std::string_view dim, Tag tag) const;

  // Throws UnboundDimension when `dim` has no tag.
  Tag tag(std::string_view dim) const;

  bool binds(std::string_view dim) const;
  const std::map<std::string, Tag, std::less<>>& bindings() const { return bindings_; }

  friend auto operator<=>(const Context&, const Context&) = default;
  friend bool operator==(const Context&, const Context&) = default;

 private:
  std::map<std::string, Tag, std::less<>> bindings_;
};

Context context_override(const Context& ctx, std::string_view dim, Tag tag);
Tag context_query(const Context& ctx, std::string_view dim);

std::string to_string(const Context& ctx);

// A finite run of values along one dimension. When `bounded` is set the
// element list ends where the first eod would be; elements never hold Eod.
struct TagStream {
  std::string dimension;
  std::vector<Value> elements;
  bool bounded = true;

  // Builds a bounded stream, cutting `items` at the first Eod.
  static TagStream of(std::string dimension, std::vector<Value> items);

  std::size_t length() const { return elements.size(); }

  // Element at index `i`; Eod past the end of a bounded stream,
  // UnboundedStream past the known prefix of an unbounded one.
  Value at(std::size_t i) const;

  friend bool operator==(const TagStream&, const TagStream&) = default;
};

std::string to_string(const TagStream& s);

}  // namespace flucid
