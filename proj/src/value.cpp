#include "flucid/value.hpp"

#include <algorithm>
#include <sstream>

namespace flucid {

Value Value::set(std::initializer_list<std::string> names) {
  PropertySet s;
  for (const auto& n : names) s.atoms.insert(Atom{n});
  return Value(std::move(s));
}

const char* Value::type_name() const {
  static constexpr const char* names[] = {"atom", "int", "bool", "property set", "array", "eod", "inf"};
  return names[v_.index()];
}

bool operator==(const Value& a, const Value& b) {
  if (a.v_.index() != b.v_.index()) return false;
  if (a.is_array()) {
    const auto& x = a.as_array().items;
    const auto& y = b.as_array().items;
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (!(x[i] == y[i])) return false;
    return true;
  }
  return std::visit(
      [&](const auto& lhs) -> bool {
        using T = std::decay_t<decltype(lhs)>;
        if constexpr (std::is_same_v<T, Array>) {
          return false;  // handled above
        } else {
          return lhs == std::get<T>(b.v_);
        }
      },
      a.v_);
}

bool operator<(const Value& a, const Value& b) {
  if (a.v_.index() != b.v_.index()) return a.v_.index() < b.v_.index();
  if (a.is_atom()) return a.as_atom() < b.as_atom();
  if (a.is_int()) return a.as_int() < b.as_int();
  if (a.is_bool()) return a.as_bool() < b.as_bool();
  if (a.is_set()) return a.as_set().atoms < b.as_set().atoms;
  if (a.is_array()) {
    const auto& x = a.as_array().items;
    const auto& y = b.as_array().items;
    return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
  }
  return false;
}

namespace {

void render(std::ostream& os, const Value& v, bool quoted) {
  if (v.is_atom()) {
    if (quoted)
      os << '\'' << v.as_atom().name << '\'';
    else
      os << v.as_atom().name;
  } else if (v.is_int()) {
    os << v.as_int();
  } else if (v.is_bool()) {
    os << (v.as_bool() ? "true" : "false");
  } else if (v.is_set()) {
    os << (quoted ? "unordered {" : "{");
    bool first = true;
    for (const auto& a : v.as_set().atoms) {
      if (!first) os << ", ";
      first = false;
      render(os, Value(a), quoted);
    }
    os << '}';
  } else if (v.is_array()) {
    os << '[';
    bool first = true;
    for (const auto& item : v.as_array().items) {
      if (!first) os << ", ";
      first = false;
      render(os, item, quoted);
    }
    os << ']';
  } else if (v.is_eod()) {
    os << "eod";
  } else {
    os << "+inf";
  }
}

}  // namespace

std::string to_string(const Value& v) {
  std::ostringstream os;
  render(os, v, false);
  return os.str();
}

std::string to_source(const Value& v) {
  std::ostringstream os;
  render(os, v, true);
  return os.str();
}

}  // namespace flucid
