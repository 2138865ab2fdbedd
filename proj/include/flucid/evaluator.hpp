#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>

#include "flucid/ast.hpp"
#include "flucid/context.hpp"
#include "flucid/evidence.hpp"

namespace flucid {

struct Scope;
using Env = std::shared_ptr<const Scope>;

// An unevaluated argument: an expression plus the environment it was written in.
struct Thunk {
  const AstNode* node = nullptr;
  Env env;
};

// A parameter bound to a dimension name rather than to a value.
struct DimensionRef {
  std::string name;
};

using Argument = std::variant<Value, TagStream, Thunk, DimensionRef>;

struct Binding {
  // Decl: a where-clause declaration; the rest are function parameters.
  std::variant<const ast::Decl*, Thunk, DimensionRef, Value, TagStream> target;
};

// One level of lexical scope. Lookups walk `parent` outwards.
struct Scope {
  std::uint64_t id = 0;
  Env parent;
  std::map<std::string, Binding, std::less<>> names;
};

// Memo of declaration values, keyed by (scope instance, declaration, context).
class Warehouse {
 public:
  struct Key {
    std::uint64_t scope;
    const ast::Decl* decl;
    Context ctx;

    friend auto operator<=>(const Key&, const Key&) = default;
    friend bool operator==(const Key&, const Key&) = default;
  };

  const Value* find(const Key& k) const;
  void store(Key k, Value v);

  std::size_t size() const { return entries_.size(); }
  std::size_t hits() const { return hits_; }
  std::size_t misses() const { return misses_; }
  void clear();

 private:
  std::map<Key, Value> entries_;
  mutable std::size_t hits_ = 0;
  mutable std::size_t misses_ = 0;
};

class Evaluator;

// Host function callable from programs; receives its arguments unevaluated.
using Builtin = std::function<Value(Evaluator&, std::span<const Thunk> args, const Context& ctx)>;

class Evaluator {
 public:
  struct Options {
    std::size_t max_depth = 10000;
    std::size_t scan_limit = 10000;
  };

  // Defaults, with max_depth taken from FLUCID_MAX_RECURSION when set.
  static Options options_from_env();

  Evaluator() : Evaluator(Options{}) {}
  explicit Evaluator(Options opts);

  void define_builtin(std::string name, std::size_t arity, Builtin fn);
  std::set<std::string, std::less<>> builtin_names() const;

  const Options& options() const { return opts_; }
  Env global_env() const { return global_; }

  // Demand-driven evaluation without memoization.
  Value eval(const AstNode& node, const Env& env, const Context& ctx);
  // Same result as eval; declaration values are looked up in and stored to `wh`.
  Value eval_cached(const AstNode& node, const Env& env, const Context& ctx, Warehouse& wh);

  // Binds `args` to the parameters of `decl` in a fresh scope under `env`
  // and evaluates the body at `ctx`. Throws ArityMismatch.
  Value apply_function(const ast::Decl& decl, std::span<const Argument> args, const Env& env, const Context& ctx);

  // Evaluates an argument in the current session mode (cached or not).
  Value force(const Thunk& t, const Context& ctx);

  // Reads the evidence hierarchy an argument refers to.
  EvidentialStatement statement_of(const Thunk& t, const Context& ctx);
  ObservationSequence sequence_of(const Thunk& t, const Context& ctx);
  Observation observation_of(const Thunk& t, const Context& ctx);

  struct Resolved {
    const Binding* binding;
    Env scope;
  };
  std::optional<Resolved> lookup(const Env& env, std::string_view name) const;

 private:
  class ModeGuard;
  class DepthGuard;

  Value eval_node(const AstNode& node, const Env& env, const Context& ctx);
  Value eval_decl(const ast::Decl& decl, const Env& scope, const Context& ctx);
  Value eval_observation_var(const Env& scope, const Context& ctx);
  Value eval_call(const ast::Call& call, const AstNode& node, const Env& env, const Context& ctx);
  Value eval_at(const ast::At& at, const Env& env, const Context& ctx);
  Value eval_binop(const ast::BinOp& op, const Env& env, const Context& ctx);
  Value eval_stream_op(const AstNode& node, const Env& env, const Context& ctx);
  Value eval_where(const ast::Where& where, const Env& env, const Context& ctx);

  std::string resolve_dim(const Env& env, const std::string& name) const;
  Env where_scope(const ast::Where& where, const Env& parent);
  Env new_scope(Env parent);

  ObservationSequence build_sequence(std::string name, const AstNode& node, const Env& env, const Context& ctx);
  Observation build_observation(const AstNode& node, const Env& env, const Context& ctx);

  struct BuiltinEntry {
    std::size_t arity;
    Builtin fn;
  };

  Options opts_;
  Env global_;
  std::map<std::string, BuiltinEntry, std::less<>> builtins_;
  std::map<std::pair<const ast::Where*, const Scope*>, Env> where_scopes_;
  std::uint64_t next_scope_id_ = 1;
  Warehouse* wh_ = nullptr;
  std::size_t depth_ = 0;
};

// Runs `fn` on a thread with a large stack so deep evaluations hit the
// depth limit before the native stack. Exceptions propagate to the caller.
void run_with_large_stack(const std::function<void()>& fn, std::size_t stack_bytes = std::size_t{1} << 30);

}  // namespace flucid
