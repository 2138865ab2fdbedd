#include "flucid/evaluator.hpp"

#include <pthread.h>

#include <cstdlib>
#include <exception>

#include "flucid/errors.hpp"
#include "flucid/forensic.hpp"
#include "flucid/stream_ops.hpp"

namespace flucid {

// ---- Warehouse ----

const Value* Warehouse::find(const Key& k) const {
  auto it = entries_.find(k);
  if (it == entries_.end()) {
    ++misses_;
    return nullptr;
  }
  ++hits_;
  return &it->second;
}

void Warehouse::store(Key k, Value v) { entries_.insert_or_assign(std::move(k), std::move(v)); }

void Warehouse::clear() {
  entries_.clear();
  hits_ = misses_ = 0;
}

// ---- Evaluator ----

class Evaluator::ModeGuard {
 public:
  ModeGuard(Evaluator& ev, Warehouse* wh) : ev_(ev), saved_(ev.wh_) { ev.wh_ = wh; }
  ~ModeGuard() { ev_.wh_ = saved_; }

 private:
  Evaluator& ev_;
  Warehouse* saved_;
};

class Evaluator::DepthGuard {
 public:
  explicit DepthGuard(Evaluator& ev) : ev_(ev) {
    if (++ev_.depth_ > ev_.opts_.max_depth) {
      --ev_.depth_;
      throw RuntimeError("evaluation depth limit of " + std::to_string(ev_.opts_.max_depth) + " exceeded");
    }
  }
  ~DepthGuard() { --ev_.depth_; }

 private:
  Evaluator& ev_;
};

Evaluator::Options Evaluator::options_from_env() {
  Options opts;
  if (const char* env = std::getenv("FLUCID_MAX_RECURSION")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0' || v == 0)
      throw ValidationError(std::string("FLUCID_MAX_RECURSION must be a positive integer, got '") + env + "'");
    opts.max_depth = static_cast<std::size_t>(v);
  }
  return opts;
}

Evaluator::Evaluator(Options opts) : opts_(opts) { global_ = new_scope(nullptr); }

Env Evaluator::new_scope(Env parent) {
  auto s = std::make_shared<Scope>();
  s->id = next_scope_id_++;
  s->parent = std::move(parent);
  return s;
}

void Evaluator::define_builtin(std::string name, std::size_t arity, Builtin fn) {
  builtins_.insert_or_assign(std::move(name), BuiltinEntry{arity, std::move(fn)});
}

std::set<std::string, std::less<>> Evaluator::builtin_names() const {
  std::set<std::string, std::less<>> out;
  for (const auto& [name, entry] : builtins_) out.insert(name);
  return out;
}

std::optional<Evaluator::Resolved> Evaluator::lookup(const Env& env, std::string_view name) const {
  for (Env s = env; s; s = s->parent) {
    auto it = s->names.find(name);
    if (it != s->names.end()) return Resolved{&it->second, s};
  }
  return std::nullopt;
}

Value Evaluator::eval(const AstNode& node, const Env& env, const Context& ctx) {
  ModeGuard mode(*this, nullptr);
  return eval_node(node, env, ctx);
}

Value Evaluator::eval_cached(const AstNode& node, const Env& env, const Context& ctx, Warehouse& wh) {
  ModeGuard mode(*this, &wh);
  return eval_node(node, env, ctx);
}

Value Evaluator::force(const Thunk& t, const Context& ctx) { return eval_node(*t.node, t.env, ctx); }

std::string Evaluator::resolve_dim(const Env& env, const std::string& name) const {
  auto r = lookup(env, name);
  if (!r) return name;
  const auto& target = r->binding->target;
  if (const auto* ref = std::get_if<DimensionRef>(&target)) return ref->name;
  if (const auto* t = std::get_if<Thunk>(&target)) {
    if (const auto* id = t->node->as<ast::Ident>()) return resolve_dim(t->env, id->name);
  }
  return name;
}

Env Evaluator::where_scope(const ast::Where& where, const Env& parent) {
  const auto key = std::make_pair(&where, parent.get());
  if (auto it = where_scopes_.find(key); it != where_scopes_.end()) return it->second;
  auto s = std::make_shared<Scope>();
  s->id = next_scope_id_++;
  s->parent = parent;
  for (const auto& dn : where.decls) {
    const auto& d = std::get<ast::Decl>(dn->node);
    s->names.insert_or_assign(d.name, Binding{&d});
  }
  Env env = s;
  where_scopes_.emplace(key, env);
  return env;
}

Value Evaluator::eval_node(const AstNode& node, const Env& env, const Context& ctx) {
  DepthGuard depth(*this);
  try {
    return std::visit(
        [&](const auto& x) -> Value {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, ast::Literal>) {
            return x.value;
          } else if constexpr (std::is_same_v<T, ast::Ident>) {
            auto r = lookup(env, x.name);
            if (!r) throw UnresolvedIdentifier(x.name, node.pos);
            return std::visit(
                [&](const auto& b) -> Value {
                  using B = std::decay_t<decltype(b)>;
                  if constexpr (std::is_same_v<B, const ast::Decl*>) {
                    return eval_decl(*b, r->scope, ctx);
                  } else if constexpr (std::is_same_v<B, Thunk>) {
                    return eval_node(*b.node, b.env, ctx);
                  } else if constexpr (std::is_same_v<B, DimensionRef>) {
                    throw TypeMismatch("dimension '" + b.name + "' used as a value");
                  } else if constexpr (std::is_same_v<B, Value>) {
                    return b;
                  } else {
                    return b.at(static_cast<std::size_t>(ctx.tag(b.dimension)));
                  }
                },
                r->binding->target);
          } else if constexpr (std::is_same_v<T, ast::At>) {
            return eval_at(x, env, ctx);
          } else if constexpr (std::is_same_v<T, ast::Hash>) {
            return Value::integer(context_query(ctx, resolve_dim(env, x.dim)));
          } else if constexpr (std::is_same_v<T, ast::UnaryStreamOp> || std::is_same_v<T, ast::BinaryStreamOp>) {
            return eval_stream_op(node, env, ctx);
          } else if constexpr (std::is_same_v<T, ast::If>) {
            Value c = eval_node(*x.cond, env, ctx);
            if (c.is_eod()) return c;
            if (!c.is_bool()) throw TypeMismatch(std::string("if condition must be boolean, got ") + c.type_name());
            return eval_node(c.as_bool() ? *x.then_branch : *x.else_branch, env, ctx);
          } else if constexpr (std::is_same_v<T, ast::ArrayExpr>) {
            std::vector<Value> items;
            items.reserve(x.items.size());
            for (const auto& item : x.items) items.push_back(eval_node(*item, env, ctx));
            return Value::array(std::move(items));
          } else if constexpr (std::is_same_v<T, ast::UnorderedSet>) {
            std::vector<Value> items;
            bool all_atoms = true;
            for (const auto& item : x.items) {
              items.push_back(eval_node(*item, env, ctx));
              all_atoms = all_atoms && items.back().is_atom();
            }
            if (!all_atoms) {
              if (x.storyboard) return Value::array(std::move(items));
              throw TypeMismatch("unordered set elements must be atoms");
            }
            PropertySet set;
            for (auto& v : items) set.atoms.insert(v.as_atom());
            return Value(std::move(set));
          } else if constexpr (std::is_same_v<T, ast::TupleObs>) {
            return Value::array(
                {eval_node(*x.property, env, ctx), eval_node(*x.min, env, ctx), eval_node(*x.opt, env, ctx)});
          } else if constexpr (std::is_same_v<T, ast::Wildcard>) {
            return Value::array({Value::atom("$"), Value::integer(0), Value::inf()});
          } else if constexpr (std::is_same_v<T, ast::Call>) {
            return eval_call(x, node, env, ctx);
          } else if constexpr (std::is_same_v<T, ast::Decl>) {
            throw RuntimeError("declaration '" + x.name + "' is not an expression");
          } else if constexpr (std::is_same_v<T, ast::Where>) {
            return eval_where(x, env, ctx);
          } else {
            return eval_binop(x, env, ctx);
          }
        },
        node.node);
  } catch (Error& e) {
    if (!e.pos()) e.set_pos(node.pos);
    throw;
  }
}

Value Evaluator::eval_decl(const ast::Decl& decl, const Env& scope, const Context& ctx) {
  switch (decl.kind) {
    case DeclKind::Dimension:
      throw TypeMismatch("dimension '" + decl.name + "' used as a value");
    case DeclKind::Function:
      throw TypeMismatch("function '" + decl.name + "' used without arguments");
    case DeclKind::Observation:
      if (!decl.value) return eval_observation_var(scope, ctx);
      break;
    default:
      break;
  }
  if (wh_) {
    Warehouse::Key key{scope->id, &decl, ctx};
    if (const Value* v = wh_->find(key)) return *v;
    Value v = eval_node(*decl.value, scope, ctx);
    wh_->store(std::move(key), v);
    return v;
  }
  return eval_node(*decl.value, scope, ctx);
}

// A bare `observation o;` reads the sequence whose name is a bound
// dimension of the context, at that dimension's tag.
Value Evaluator::eval_observation_var(const Env& scope, const Context& ctx) {
  for (Env s = scope; s; s = s->parent) {
    for (const auto& [name, binding] : s->names) {
      const auto* decl = std::get_if<const ast::Decl*>(&binding.target);
      if (!decl || (*decl)->kind != DeclKind::ObservationSequence || !ctx.binds(name)) continue;
      ObservationSequence os = build_sequence(name, *(*decl)->value, s, ctx);
      return forensic::at_obs(os, static_cast<std::size_t>(ctx.tag(name)));
    }
  }
  throw UnboundDimension("observation sequence");
}

Value Evaluator::eval_at(const ast::At& at, const Env& env, const Context& ctx) {
  if (at.dim) {
    Value idx = eval_node(*at.index, env, ctx);
    if (idx.is_eod()) return idx;
    if (!idx.is_int()) throw TypeMismatch(std::string("context tag must be an integer, got ") + idx.type_name());
    return eval_node(*at.expr, env, ctx.with(resolve_dim(env, *at.dim), idx.as_int()));
  }
  // E @ es: evaluate E within the evidential-statement context.
  if (const auto* id = at.index->as<ast::Ident>()) {
    auto r = lookup(env, id->name);
    const auto* decl = r ? std::get_if<const ast::Decl*>(&r->binding->target) : nullptr;
    if (decl && (*decl)->kind == DeclKind::EvidentialStatement)
      return eval_node(*at.expr, env, ctx.with(id->name, 0));
  }
  if (const auto* set = at.index->as<ast::UnorderedSet>(); set && set->storyboard)
    return eval_node(*at.expr, env, ctx.with("storyboard", 0));
  throw TypeMismatch("'@' without a dimension requires an evidential statement on its right");
}

Value Evaluator::eval_binop(const ast::BinOp& op, const Env& env, const Context& ctx) {
  Value lhs = eval_node(*op.lhs, env, ctx);
  Value rhs = eval_node(*op.rhs, env, ctx);
  if (lhs.is_eod() || rhs.is_eod()) return Value::eod();
  switch (op.op) {
    case BinaryOp::Eq: return Value::boolean(lhs == rhs);
    case BinaryOp::Ne: return Value::boolean(lhs != rhs);
    case BinaryOp::And:
    case BinaryOp::Or:
      if (!lhs.is_bool() || !rhs.is_bool())
        throw TypeMismatch(std::string("'") + to_string(op.op) + "' expects booleans, got " + lhs.type_name() +
                           " and " + rhs.type_name());
      return Value::boolean(op.op == BinaryOp::And ? lhs.as_bool() && rhs.as_bool()
                                                   : lhs.as_bool() || rhs.as_bool());
    case BinaryOp::In:
      if (rhs.is_set()) {
        if (!lhs.is_atom()) throw TypeMismatch(std::string("'in' on a property set needs an atom, got ") + lhs.type_name());
        return Value::boolean(rhs.as_set().contains(lhs.as_atom()));
      }
      if (rhs.is_array()) {
        for (const auto& item : rhs.as_array().items)
          if (item == lhs) return Value::boolean(true);
        return Value::boolean(false);
      }
      throw TypeMismatch(std::string("'in' expects a property set or array, got ") + rhs.type_name());
  }
  return Value::eod();
}

Value Evaluator::eval_stream_op(const AstNode& node, const Env& env, const Context& ctx) {
  auto intension = [this, &env](const AstNode& n) -> ops::Intension {
    return [this, &n, &env](const Context& c) { return eval_node(n, env, c); };
  };
  if (const auto* u = node.as<ast::UnaryStreamOp>()) {
    const std::string dim = resolve_dim(env, u->dim);
    const ops::Intension x = intension(*u->operand);
    switch (u->op) {
      case StreamOp::First: return ops::first(dim, x, ctx);
      case StreamOp::Next: return ops::next(dim, x, ctx);
      case StreamOp::Last: return ops::last(dim, x, ctx, opts_.scan_limit);
      case StreamOp::Prev: return ops::prev(dim, x, ctx);
      case StreamOp::IsEod: return ops::iseod(dim, x, ctx);
      default: break;
    }
    throw RuntimeError(std::string("'") + to_string(u->op) + "' is not a prefix operator");
  }
  const auto& b = std::get<ast::BinaryStreamOp>(node.node);
  const std::string dim = resolve_dim(env, b.dim);
  const ops::Intension lhs = intension(*b.lhs);
  const ops::Intension rhs = intension(*b.rhs);
  switch (b.op) {
    case StreamOp::Fby: return ops::fby(dim, lhs, rhs, ctx);
    case StreamOp::Pby: return ops::pby(dim, lhs, rhs, ctx);
    case StreamOp::Wvr: return ops::wvr(dim, lhs, rhs, ctx, opts_.scan_limit);
    case StreamOp::Asa: return ops::asa(dim, lhs, rhs, ctx, opts_.scan_limit);
    case StreamOp::Upon: return ops::upon(dim, lhs, rhs, ctx);
    default: break;
  }
  throw RuntimeError(std::string("'") + to_string(b.op) + "' is not an infix operator");
}

Value Evaluator::eval_where(const ast::Where& where, const Env& env, const Context& ctx) {
  Env scope = where_scope(where, env);
  // A locally declared dimension starts at tag 0 unless the caller fixed it.
  Context inner = ctx;
  for (const auto& dn : where.decls) {
    const auto& d = std::get<ast::Decl>(dn->node);
    if (d.kind == DeclKind::Dimension && !inner.binds(d.name)) inner = inner.with(d.name, 0);
  }
  return eval_node(*where.body, scope, inner);
}

Value Evaluator::eval_call(const ast::Call& call, const AstNode& node, const Env& env, const Context& ctx) {
  auto r = lookup(env, call.name);
  const auto* decl = r ? std::get_if<const ast::Decl*>(&r->binding->target) : nullptr;
  if (decl && (*decl)->kind == DeclKind::Function) {
    std::vector<Argument> args;
    args.reserve(call.args.size());
    for (const auto& a : call.args) {
      if (const auto* id = a->as<ast::Ident>()) {
        auto ar = lookup(env, id->name);
        if (ar) {
          const auto& target = ar->binding->target;
          const auto* adecl = std::get_if<const ast::Decl*>(&target);
          if (std::holds_alternative<DimensionRef>(target) || (adecl && (*adecl)->kind == DeclKind::Dimension)) {
            args.emplace_back(DimensionRef{resolve_dim(env, id->name)});
            continue;
          }
        }
      }
      args.emplace_back(Thunk{a.get(), env});
    }
    return apply_function(**decl, args, r->scope, ctx);
  }
  if (r) throw TypeMismatch("'" + call.name + "' is not a function");
  auto it = builtins_.find(call.name);
  if (it == builtins_.end()) throw UnresolvedIdentifier(call.name, node.pos);
  if (it->second.arity != call.args.size())
    throw ArityMismatch("'" + call.name + "' takes " + std::to_string(it->second.arity) + " arguments, got " +
                        std::to_string(call.args.size()));
  std::vector<Thunk> thunks;
  for (const auto& a : call.args) thunks.push_back(Thunk{a.get(), env});
  return it->second.fn(*this, thunks, ctx);
}

Value Evaluator::apply_function(const ast::Decl& decl, std::span<const Argument> args, const Env& env,
                                const Context& ctx) {
  if (decl.kind != DeclKind::Function) throw TypeMismatch("'" + decl.name + "' is not a function");
  if (args.size() != decl.params.size())
    throw ArityMismatch("'" + decl.name + "' takes " + std::to_string(decl.params.size()) + " arguments, got " +
                        std::to_string(args.size()));
  DepthGuard depth(*this);
  auto frame = std::make_shared<Scope>();
  frame->id = next_scope_id_++;
  frame->parent = env;
  for (std::size_t i = 0; i < args.size(); ++i) {
    Binding b = std::visit([](const auto& a) { return Binding{a}; }, args[i]);
    frame->names.insert_or_assign(decl.params[i], std::move(b));
  }
  return eval_node(*decl.value, frame, ctx);
}

// ---- evidence hierarchy ----

namespace {

const ast::Decl* decl_of(const std::optional<Evaluator::Resolved>& r) {
  if (!r) return nullptr;
  const auto* d = std::get_if<const ast::Decl*>(&r->binding->target);
  return d ? *d : nullptr;
}

std::size_t non_negative(const Value& v, const char* what) {
  if (!v.is_int() || v.as_int() < 0)
    throw TypeMismatch(std::string("observation ") + what + " must be a non-negative integer, got " + to_string(v));
  return static_cast<std::size_t>(v.as_int());
}

}  // namespace

Observation Evaluator::build_observation(const AstNode& node, const Env& env, const Context& ctx) {
  if (node.is<ast::Wildcard>()) return Observation::wildcard();
  if (const auto* w = node.as<ast::Where>()) return build_observation(*w->body, where_scope(*w, env), ctx);
  if (const auto* t = node.as<ast::TupleObs>()) {
    Observation o;
    if (!t->property->is<ast::Wildcard>()) o.property = Property::of(eval_node(*t->property, env, ctx));
    o.min = non_negative(eval_node(*t->min, env, ctx), "min");
    Value opt = eval_node(*t->opt, env, ctx);
    if (!opt.is_inf()) o.opt = non_negative(opt, "opt");
    return o;
  }
  if (const auto* id = node.as<ast::Ident>()) {
    auto r = lookup(env, id->name);
    if (r) {
      if (const auto* t = std::get_if<Thunk>(&r->binding->target)) return build_observation(*t->node, t->env, ctx);
      const ast::Decl* d = decl_of(r);
      if (d && d->kind == DeclKind::Observation && d->value) return build_observation(*d->value, r->scope, ctx);
    }
  }
  throw TypeMismatch("expected an observation (P, min, opt)");
}

ObservationSequence Evaluator::build_sequence(std::string name, const AstNode& node, const Env& env,
                                              const Context& ctx) {
  if (const auto* w = node.as<ast::Where>()) return build_sequence(std::move(name), *w->body, where_scope(*w, env), ctx);
  ObservationSequence os{std::move(name), {}};
  if (const auto* arr = node.as<ast::ArrayExpr>()) {
    for (const auto& item : arr->items) os.observations.push_back(build_observation(*item, env, ctx));
    return os;
  }
  if (const auto* id = node.as<ast::Ident>()) {
    auto r = lookup(env, id->name);
    if (r) {
      if (const auto* t = std::get_if<Thunk>(&r->binding->target)) return build_sequence(os.name, *t->node, t->env, ctx);
      const ast::Decl* d = decl_of(r);
      if (d && d->kind == DeclKind::ObservationSequence) return build_sequence(os.name, *d->value, r->scope, ctx);
    }
  }
  os.observations.push_back(build_observation(node, env, ctx));
  return os;
}

Observation Evaluator::observation_of(const Thunk& t, const Context& ctx) {
  return build_observation(*t.node, t.env, ctx);
}

ObservationSequence Evaluator::sequence_of(const Thunk& t, const Context& ctx) {
  std::string name;
  if (const auto* id = t.node->as<ast::Ident>()) name = id->name;
  return build_sequence(std::move(name), *t.node, t.env, ctx);
}

EvidentialStatement Evaluator::statement_of(const Thunk& t, const Context& ctx) {
  const AstNode* node = t.node;
  Env env = t.env;
  EvidentialStatement es;
  if (const auto* id = node->as<ast::Ident>()) {
    auto r = lookup(env, id->name);
    if (r) {
      if (const auto* th = std::get_if<Thunk>(&r->binding->target)) {
        EvidentialStatement inner = statement_of(*th, ctx);
        inner.name = id->name;
        return inner;
      }
    }
    const ast::Decl* d = decl_of(r);
    if (!d || d->kind != DeclKind::EvidentialStatement)
      throw TypeMismatch("'" + id->name + "' is not an evidential statement");
    es.name = d->name;
    node = d->value.get();
    env = r->scope;
  }
  const std::vector<NodePtr>* items = nullptr;
  if (const auto* arr = node->as<ast::ArrayExpr>()) items = &arr->items;
  if (const auto* set = node->as<ast::UnorderedSet>()) items = &set->items;
  if (!items) throw TypeMismatch("an evidential statement must list observation sequences");
  if (es.name.empty()) es.name = "storyboard";
  for (std::size_t i = 0; i < items->size(); ++i) {
    const AstNode& item = *(*items)[i];
    std::string name = es.name + "[" + std::to_string(i) + "]";
    if (const auto* id = item.as<ast::Ident>()) name = id->name;
    es.sequences.push_back(build_sequence(std::move(name), item, env, ctx));
  }
  return es;
}

// ---- large stack runner ----

namespace {

struct StackTask {
  const std::function<void()>* fn;
  std::exception_ptr error;
};

void* run_task(void* p) {
  auto* task = static_cast<StackTask*>(p);
  try {
    (*task->fn)();
  } catch (...) {
    task->error = std::current_exception();
  }
  return nullptr;
}

}  // namespace

void run_with_large_stack(const std::function<void()>& fn, std::size_t stack_bytes) {
  StackTask task{&fn, nullptr};
  pthread_attr_t attr;
  pthread_attr_init(&attr);
  pthread_attr_setstacksize(&attr, stack_bytes);
  pthread_t thread;
  const int rc = pthread_create(&thread, &attr, run_task, &task);
  pthread_attr_destroy(&attr);
  if (rc != 0) {
    fn();
    return;
  }
  pthread_join(thread, nullptr);
  if (task.error) std::rethrow_exception(task.error);
}

}  // namespace flucid
