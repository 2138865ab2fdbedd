#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace flucid {

// Symbolic label such as 'B_deleted' or 'take'.
struct Atom {
  std::string name;

  friend auto operator<=>(const Atom&, const Atom&) = default;
};

struct Eod {
  friend bool operator==(Eod, Eod) { return true; }
};

// Positive infinity; only meaningful as an observation's optional duration.
struct Inf {
  friend bool operator==(Inf, Inf) { return true; }
};

struct PropertySet {
  std::set<Atom> atoms;

  bool contains(const Atom& a) const { return atoms.count(a) != 0; }
  friend bool operator==(const PropertySet&, const PropertySet&) = default;
};

class Value;

struct Array {
  std::vector<Value> items;
};

class Value {
 public:
  using Variant = std::variant<Atom, std::int64_t, bool, PropertySet, Array, Eod, Inf>;

  Value() : v_(Eod{}) {}
  Value(Atom a) : v_(std::move(a)) {}
  Value(PropertySet s) : v_(std::move(s)) {}
  Value(Array a) : v_(std::move(a)) {}
  Value(Eod e) : v_(e) {}
  Value(Inf i) : v_(i) {}

  static Value atom(std::string name) { return Value(Atom{std::move(name)}); }
  static Value integer(std::int64_t i) {
    Value v;
    v.v_ = i;
    return v;
  }
  static Value boolean(bool b) {
    Value v;
    v.v_ = b;
    return v;
  }
  static Value eod() { return Value(Eod{}); }
  static Value inf() { return Value(Inf{}); }
  static Value array(std::vector<Value> items) { return Value(Array{std::move(items)}); }
  static Value set(std::initializer_list<std::string> names);

  bool is_atom() const { return std::holds_alternative<Atom>(v_); }
  bool is_int() const { return std::holds_alternative<std::int64_t>(v_); }
  bool is_bool() const { return std::holds_alternative<bool>(v_); }
  bool is_set() const { return std::holds_alternative<PropertySet>(v_); }
  bool is_array() const { return std::holds_alternative<Array>(v_); }
  bool is_eod() const { return std::holds_alternative<Eod>(v_); }
  bool is_inf() const { return std::holds_alternative<Inf>(v_); }

  const Atom& as_atom() const { return std::get<Atom>(v_); }
  std::int64_t as_int() const { return std::get<std::int64_t>(v_); }
  bool as_bool() const { return std::get<bool>(v_); }
  const PropertySet& as_set() const { return std::get<PropertySet>(v_); }
  const Array& as_array() const { return std::get<Array>(v_); }

  const Variant& variant() const { return v_; }

  // Name of the alternative, for diagnostics.
  const char* type_name() const;

  friend bool operator==(const Value& a, const Value& b);
  friend bool operator<(const Value& a, const Value& b);

 private:
  Variant v_;
};

inline bool operator!=(const Value& a, const Value& b) { return !(a == b); }

// Compact rendering: atoms bare, arrays as [a, b], sets as {a, b}.
std::string to_string(const Value& v);

// Source-form rendering: atoms quoted, so the text reparses to the same literal.
std::string to_source(const Value& v);

}  // namespace flucid
