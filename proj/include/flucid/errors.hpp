#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace flucid {

// 1-based line/column in a source file.
struct SourcePos {
  int line = 0;
  int column = 0;

  friend bool operator==(const SourcePos&, const SourcePos&) = default;
};

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what, std::optional<SourcePos> pos = {})
      : std::runtime_error(what), pos_(pos) {}

  const std::optional<SourcePos>& pos() const { return pos_; }
  void set_pos(SourcePos pos) { pos_ = pos; }

  virtual const char* kind() const { return "error"; }

 private:
  std::optional<SourcePos> pos_;
};

#define FLUCID_ERROR(Name, label)                                   \
  class Name : public Error {                                       \
   public:                                                          \
    using Error::Error;                                             \
    const char* kind() const override { return label; }             \
  }

FLUCID_ERROR(ValidationError, "validation error");
FLUCID_ERROR(LexError, "lex error");
FLUCID_ERROR(TypeMismatch, "type mismatch");
FLUCID_ERROR(ArityMismatch, "arity mismatch");
FLUCID_ERROR(RuntimeError, "runtime error");
FLUCID_ERROR(UnboundedStream, "unbounded stream");
FLUCID_ERROR(ExpansionError, "expansion error");
FLUCID_ERROR(AmbiguousExpansion, "ambiguous expansion");

#undef FLUCID_ERROR

class UnboundDimension : public Error {
 public:
  explicit UnboundDimension(std::string dim)
      : Error("unbound dimension '" + dim + "'"), dim_(std::move(dim)) {}
  const std::string& dimension() const { return dim_; }
  const char* kind() const override { return "unbound dimension"; }

 private:
  std::string dim_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, SourcePos pos, std::vector<std::string> expected = {})
      : Error(what, pos), expected_(std::move(expected)) {}
  const std::vector<std::string>& expected() const { return expected_; }
  const char* kind() const override { return "parse error"; }

 private:
  std::vector<std::string> expected_;
};

class UnresolvedIdentifier : public Error {
 public:
  UnresolvedIdentifier(std::string name, SourcePos pos)
      : Error("unresolved identifier '" + name + "'", pos), name_(std::move(name)) {}
  const std::string& name() const { return name_; }
  const char* kind() const override { return "unresolved identifier"; }

 private:
  std::string name_;
};

}  // namespace flucid
