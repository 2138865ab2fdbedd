#include "flucid/context.hpp"

#include <sstream>

#include "flucid/errors.hpp"

namespace flucid {

Context::Context(std::initializer_list<std::pair<const std::string, Tag>> bindings) {
  for (const auto& [dim, tag] : bindings) {
    if (tag < 0) throw ValidationError("negative tag " + std::to_string(tag) + " for dimension '" + dim + "'");
    bindings_.insert_or_assign(dim, tag);
  }
}

Context Context::with(std::string_view dim, Tag tag) const {
  if (tag < 0)
    throw ValidationError("negative tag " + std::to_string(tag) + " for dimension '" + std::string(dim) + "'");
  Context out = *this;
  auto it = out.bindings_.find(dim);
  if (it != out.bindings_.end())
    it->second = tag;
  else
    out.bindings_.emplace(std::string(dim), tag);
  return out;
}

Tag Context::tag(std::string_view dim) const {
  auto it = bindings_.find(dim);
  if (it == bindings_.end()) throw UnboundDimension(std::string(dim));
  return it->second;
}

bool Context::binds(std::string_view dim) const { return bindings_.find(dim) != bindings_.end(); }

Context context_override(const Context& ctx, std::string_view dim, Tag tag) { return ctx.with(dim, tag); }

Tag context_query(const Context& ctx, std::string_view dim) { return ctx.tag(dim); }

std::string to_string(const Context& ctx) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const auto& [dim, tag] : ctx.bindings()) {
    if (!first) os << ", ";
    first = false;
    os << dim << ':' << tag;
  }
  os << '}';
  return os.str();
}

TagStream TagStream::of(std::string dimension, std::vector<Value> items) {
  TagStream s{std::move(dimension), {}, true};
  for (auto& v : items) {
    if (v.is_eod()) break;
    s.elements.push_back(std::move(v));
  }
  return s;
}

Value TagStream::at(std::size_t i) const {
  if (i < elements.size()) return elements[i];
  if (bounded) return Value::eod();
  throw UnboundedStream("index " + std::to_string(i) + " lies past the known prefix of stream along '" +
                        dimension + "'");
}

std::string to_string(const TagStream& s) {
  std::ostringstream os;
  os << "<";
  for (std::size_t i = 0; i < s.elements.size(); ++i) {
    if (i) os << ", ";
    os << to_string(s.elements[i]);
  }
  if (!s.bounded) os << (s.elements.empty() ? "..." : ", ...");
  os << ">";
  return os.str();
}

}  // namespace flucid
