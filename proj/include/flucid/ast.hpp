#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "flucid/errors.hpp"
#include "flucid/value.hpp"

namespace flucid {

struct AstNode;
using NodePtr = std::unique_ptr<AstNode>;

enum class StreamOp { First, Next, Last, Prev, IsEod, Fby, Pby, Wvr, Asa, Upon };
enum class BinaryOp { Eq, Ne, And, Or, In };
enum class DeclKind { Dimension, Observation, ObservationSequence, EvidentialStatement, Variable, Function };

const char* to_string(StreamOp op);
const char* to_string(BinaryOp op);
const char* to_string(DeclKind k);

namespace ast {

struct Literal {
  Value value;
};

struct Ident {
  std::string name;
};

// E @.dim I; `dim` is absent for the `E @ es` evidential-statement form.
struct At {
  NodePtr expr;
  std::optional<std::string> dim;
  NodePtr index;
};

struct Hash {
  std::string dim;
};

struct UnaryStreamOp {
  StreamOp op;
  std::string dim;
  NodePtr operand;
};

struct BinaryStreamOp {
  StreamOp op;
  std::string dim;
  NodePtr lhs;
  NodePtr rhs;
};

struct If {
  NodePtr cond;
  NodePtr then_branch;
  NodePtr else_branch;
};

// `juxtaposed` marks the (P,m,o)(P,m,o) spelling of an observation sequence.
struct ArrayExpr {
  std::vector<NodePtr> items;
  bool juxtaposed = false;
};

// `unordered {..}`; `storyboard` marks the bare-brace {[..], [..]} form.
struct UnorderedSet {
  std::vector<NodePtr> items;
  bool storyboard = false;
};

struct TupleObs {
  NodePtr property;
  NodePtr min;
  NodePtr opt;
};

// `$`
struct Wildcard {};

struct Call {
  std::string name;
  std::vector<NodePtr> args;
};

struct Decl {
  DeclKind kind;
  std::string name;
  std::vector<std::string> params;
  NodePtr value;  // null for `dimension d;` and a bare `observation o;`
};

struct Where {
  NodePtr body;
  std::vector<NodePtr> decls;  // each holds a Decl
};

struct BinOp {
  BinaryOp op;
  NodePtr lhs;
  NodePtr rhs;
};

}  // namespace ast

struct AstNode {
  using Variant = std::variant<ast::Literal, ast::Ident, ast::At, ast::Hash, ast::UnaryStreamOp,
                               ast::BinaryStreamOp, ast::If, ast::ArrayExpr, ast::UnorderedSet, ast::TupleObs,
                               ast::Wildcard, ast::Call, ast::Decl, ast::Where, ast::BinOp>;

  Variant node;
  SourcePos pos;

  template <typename T>
  const T* as() const {
    return std::get_if<T>(&node);
  }
  template <typename T>
  bool is() const {
    return std::holds_alternative<T>(node);
  }
};

template <typename T>
NodePtr make_node(T value, SourcePos pos = {}) {
  return std::make_unique<AstNode>(AstNode{std::move(value), pos});
}

// Equality of tree shape and contents, ignoring source positions.
bool same_structure(const AstNode& a, const AstNode& b);

// Source text that parses back to a structurally identical tree.
std::string pretty_print(const AstNode& node);

}  // namespace flucid
