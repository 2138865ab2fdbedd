#include <sstream>

#include "flucid/ast.hpp"
#include "flucid/parser.hpp"

namespace flucid {

const char* to_string(StreamOp op) {
  switch (op) {
    case StreamOp::First: return "first";
    case StreamOp::Next: return "next";
    case StreamOp::Last: return "last";
    case StreamOp::Prev: return "prev";
    case StreamOp::IsEod: return "iseod";
    case StreamOp::Fby: return "fby";
    case StreamOp::Pby: return "pby";
    case StreamOp::Wvr: return "wvr";
    case StreamOp::Asa: return "asa";
    case StreamOp::Upon: return "upon";
  }
  return "?";
}

const char* to_string(BinaryOp op) {
  switch (op) {
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::And: return "&&";
    case BinaryOp::Or: return "||";
    case BinaryOp::In: return "in";
  }
  return "?";
}

const char* to_string(DeclKind k) {
  switch (k) {
    case DeclKind::Dimension: return "dimension";
    case DeclKind::Observation: return "observation";
    case DeclKind::ObservationSequence: return "observation sequence";
    case DeclKind::EvidentialStatement: return "evidential statement";
    case DeclKind::Variable: return "variable";
    case DeclKind::Function: return "function";
  }
  return "?";
}

namespace {

bool same(const NodePtr& a, const NodePtr& b) {
  if (!a || !b) return !a && !b;
  return same_structure(*a, *b);
}

bool same(const std::vector<NodePtr>& a, const std::vector<NodePtr>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!same(a[i], b[i])) return false;
  return true;
}

struct SameVisitor {
  const AstNode& other;

  template <typename T>
  const T& rhs() const {
    return std::get<T>(other.node);
  }

  bool operator()(const ast::Literal& x) const { return x.value == rhs<ast::Literal>().value; }
  bool operator()(const ast::Ident& x) const { return x.name == rhs<ast::Ident>().name; }
  bool operator()(const ast::At& x) const {
    const auto& y = rhs<ast::At>();
    return x.dim == y.dim && same(x.expr, y.expr) && same(x.index, y.index);
  }
  bool operator()(const ast::Hash& x) const { return x.dim == rhs<ast::Hash>().dim; }
  bool operator()(const ast::UnaryStreamOp& x) const {
    const auto& y = rhs<ast::UnaryStreamOp>();
    return x.op == y.op && x.dim == y.dim && same(x.operand, y.operand);
  }
  bool operator()(const ast::BinaryStreamOp& x) const {
    const auto& y = rhs<ast::BinaryStreamOp>();
    return x.op == y.op && x.dim == y.dim && same(x.lhs, y.lhs) && same(x.rhs, y.rhs);
  }
  bool operator()(const ast::If& x) const {
    const auto& y = rhs<ast::If>();
    return same(x.cond, y.cond) && same(x.then_branch, y.then_branch) && same(x.else_branch, y.else_branch);
  }
  bool operator()(const ast::ArrayExpr& x) const {
    const auto& y = rhs<ast::ArrayExpr>();
    return x.juxtaposed == y.juxtaposed && same(x.items, y.items);
  }
  bool operator()(const ast::UnorderedSet& x) const {
    const auto& y = rhs<ast::UnorderedSet>();
    return x.storyboard == y.storyboard && same(x.items, y.items);
  }
  bool operator()(const ast::TupleObs& x) const {
    const auto& y = rhs<ast::TupleObs>();
    return same(x.property, y.property) && same(x.min, y.min) && same(x.opt, y.opt);
  }
  bool operator()(const ast::Wildcard&) const { return true; }
  bool operator()(const ast::Call& x) const {
    const auto& y = rhs<ast::Call>();
    return x.name == y.name && same(x.args, y.args);
  }
  bool operator()(const ast::Decl& x) const {
    const auto& y = rhs<ast::Decl>();
    return x.kind == y.kind && x.name == y.name && x.params == y.params && same(x.value, y.value);
  }
  bool operator()(const ast::Where& x) const {
    const auto& y = rhs<ast::Where>();
    return same(x.body, y.body) && same(x.decls, y.decls);
  }
  bool operator()(const ast::BinOp& x) const {
    const auto& y = rhs<ast::BinOp>();
    return x.op == y.op && same(x.lhs, y.lhs) && same(x.rhs, y.rhs);
  }
};

bool is_atomic(const AstNode& n) {
  return n.is<ast::Literal>() || n.is<ast::Ident>() || n.is<ast::Hash>() || n.is<ast::Call>() ||
         n.is<ast::ArrayExpr>() || n.is<ast::UnorderedSet>() || n.is<ast::TupleObs>() || n.is<ast::Wildcard>();
}

std::string quote_atom(const std::string& text) {
  const char q = text.find('\'') == std::string::npos ? '\'' : '"';
  std::string out(1, q);
  for (char c : text) {
    if (c == q || c == '\\') out += '\\';
    out += c;
  }
  out += q;
  return out;
}

class Printer {
 public:
  std::string str() const { return os_.str(); }

  // Expression level: anything goes, including where and if.
  void expr(const AstNode& n) { std::visit([&](const auto& x) { print(x, n); }, n.node); }

  // Operand of an operator: compound forms are parenthesized.
  void operand(const AstNode& n) {
    if (is_atomic(n)) return expr(n);
    os_ << '(';
    expr(n);
    os_ << ')';
  }

  // Branch of if/then/else: only a where clause needs parentheses there.
  void branch(const AstNode& n) {
    if (!n.is<ast::Where>()) return expr(n);
    os_ << '(';
    expr(n);
    os_ << ')';
  }

 private:
  void list(const std::vector<NodePtr>& items) {
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i) os_ << ", ";
      expr(*items[i]);
    }
  }

  void newline() {
    os_ << '\n';
    for (int i = 0; i < indent_; ++i) os_ << "  ";
  }

  void print(const ast::Literal& x, const AstNode&) {
    if (x.value.is_atom())
      os_ << quote_atom(x.value.as_atom().name);
    else
      os_ << to_source(x.value);
  }
  void print(const ast::Ident& x, const AstNode&) { os_ << x.name; }
  void print(const ast::At& x, const AstNode&) {
    operand(*x.expr);
    os_ << " @";
    if (x.dim) os_ << '.' << *x.dim;
    os_ << ' ';
    operand(*x.index);
  }
  void print(const ast::Hash& x, const AstNode&) { os_ << '#' << x.dim; }
  void print(const ast::UnaryStreamOp& x, const AstNode&) {
    os_ << to_string(x.op) << '.' << x.dim << ' ';
    operand(*x.operand);
  }
  void print(const ast::BinaryStreamOp& x, const AstNode&) {
    operand(*x.lhs);
    os_ << ' ' << to_string(x.op) << '.' << x.dim << ' ';
    operand(*x.rhs);
  }
  void print(const ast::If& x, const AstNode&) {
    os_ << "if ";
    expr(*x.cond);
    os_ << " then ";
    branch(*x.then_branch);
    os_ << " else ";
    branch(*x.else_branch);
  }
  void print(const ast::ArrayExpr& x, const AstNode&) {
    if (x.juxtaposed) {
      for (const auto& item : x.items) expr(*item);
      return;
    }
    os_ << '[';
    list(x.items);
    os_ << ']';
  }
  void print(const ast::UnorderedSet& x, const AstNode&) {
    os_ << (x.storyboard ? "{" : "unordered {");
    list(x.items);
    os_ << '}';
  }
  void print(const ast::TupleObs& x, const AstNode&) {
    os_ << '(';
    expr(*x.property);
    os_ << ", ";
    expr(*x.min);
    os_ << ", ";
    expr(*x.opt);
    os_ << ')';
  }
  void print(const ast::Wildcard&, const AstNode&) { os_ << '$'; }
  void print(const ast::Call& x, const AstNode&) {
    os_ << x.name << '(';
    list(x.args);
    os_ << ')';
  }
  void print(const ast::Decl& x, const AstNode&) {
    switch (x.kind) {
      case DeclKind::Dimension: os_ << "dimension " << x.name; break;
      case DeclKind::Observation: os_ << "observation " << x.name; break;
      case DeclKind::ObservationSequence: os_ << "observation sequence " << x.name; break;
      case DeclKind::EvidentialStatement: os_ << "evidential statement " << x.name; break;
      case DeclKind::Variable: os_ << x.name; break;
      case DeclKind::Function:
        os_ << x.name << '(';
        for (std::size_t i = 0; i < x.params.size(); ++i) os_ << (i ? ", " : "") << x.params[i];
        os_ << ')';
        break;
    }
    if (x.value) {
      os_ << " = ";
      expr(*x.value);
    }
    os_ << ';';
  }
  void print(const ast::Where& x, const AstNode&) {
    expr(*x.body);
    newline();
    os_ << "where";
    ++indent_;
    for (const auto& d : x.decls) {
      newline();
      expr(*d);
    }
    --indent_;
    newline();
    os_ << "end";
  }
  void print(const ast::BinOp& x, const AstNode&) {
    operand(*x.lhs);
    os_ << ' ' << to_string(x.op) << ' ';
    operand(*x.rhs);
  }

  std::ostringstream os_;
  int indent_ = 0;
};

// ---- binding pass ----

enum class NameKind { Value, Dimension, Sequence, Function, Param };

class Binder {
 public:
  explicit Binder(const std::set<std::string, std::less<>>& externals) : externals_(externals) {}

  void check(const AstNode& n) { std::visit([&](const auto& x) { visit(x, n); }, n.node); }

 private:
  using Scope = std::vector<std::pair<std::string, NameKind>>;

  const NameKind* lookup(const std::string& name) const {
    for (auto s = scopes_.rbegin(); s != scopes_.rend(); ++s)
      for (const auto& [n, k] : *s)
        if (n == name) return &k;
    return nullptr;
  }

  void value_name(const std::string& name, SourcePos pos) const {
    if (lookup(name) || externals_.count(name)) return;
    throw UnresolvedIdentifier(name, pos);
  }

  void dim_name(const std::string& name, SourcePos pos) const {
    const NameKind* k = lookup(name);
    if (k && (*k == NameKind::Dimension || *k == NameKind::Param || *k == NameKind::Sequence)) return;
    throw UnresolvedIdentifier(name, pos);
  }

  void check(const NodePtr& n) {
    if (n) check(*n);
  }

  void visit(const ast::Literal&, const AstNode&) {}
  void visit(const ast::Wildcard&, const AstNode&) {}
  void visit(const ast::Ident& x, const AstNode& n) { value_name(x.name, n.pos); }
  void visit(const ast::At& x, const AstNode& n) {
    if (x.dim) dim_name(*x.dim, n.pos);
    check(x.expr);
    check(x.index);
  }
  void visit(const ast::Hash& x, const AstNode& n) { dim_name(x.dim, n.pos); }
  void visit(const ast::UnaryStreamOp& x, const AstNode& n) {
    dim_name(x.dim, n.pos);
    check(x.operand);
  }
  void visit(const ast::BinaryStreamOp& x, const AstNode& n) {
    dim_name(x.dim, n.pos);
    check(x.lhs);
    check(x.rhs);
  }
  void visit(const ast::If& x, const AstNode&) {
    check(x.cond);
    check(x.then_branch);
    check(x.else_branch);
  }
  void visit(const ast::ArrayExpr& x, const AstNode&) {
    for (const auto& i : x.items) check(i);
  }
  void visit(const ast::UnorderedSet& x, const AstNode&) {
    for (const auto& i : x.items) check(i);
  }
  void visit(const ast::TupleObs& x, const AstNode&) {
    check(x.property);
    check(x.min);
    check(x.opt);
  }
  void visit(const ast::Call& x, const AstNode& n) {
    const NameKind* k = lookup(x.name);
    if (!(k && *k == NameKind::Function) && !externals_.count(x.name)) throw UnresolvedIdentifier(x.name, n.pos);
    for (const auto& a : x.args) check(a);
  }
  void visit(const ast::Decl& x, const AstNode&) {
    if (x.kind == DeclKind::Function) {
      Scope params;
      for (const auto& p : x.params) params.emplace_back(p, NameKind::Param);
      scopes_.push_back(std::move(params));
      check(x.value);
      scopes_.pop_back();
    } else {
      check(x.value);
    }
  }
  void visit(const ast::Where& x, const AstNode&) {
    Scope scope;
    for (const auto& dn : x.decls) {
      const auto& d = std::get<ast::Decl>(dn->node);
      NameKind k = NameKind::Value;
      if (d.kind == DeclKind::Dimension) k = NameKind::Dimension;
      if (d.kind == DeclKind::ObservationSequence) k = NameKind::Sequence;
      if (d.kind == DeclKind::Function) k = NameKind::Function;
      scope.emplace_back(d.name, k);
    }
    scopes_.push_back(std::move(scope));
    check(x.body);
    for (const auto& d : x.decls) check(d);
    scopes_.pop_back();
  }
  void visit(const ast::BinOp& x, const AstNode&) {
    check(x.lhs);
    check(x.rhs);
  }

  const std::set<std::string, std::less<>>& externals_;
  std::vector<Scope> scopes_;
};

}  // namespace

bool same_structure(const AstNode& a, const AstNode& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(SameVisitor{b}, a.node);
}

std::string pretty_print(const AstNode& node) {
  Printer p;
  p.expr(node);
  return p.str();
}

void check_bindings(const AstNode& program, const std::set<std::string, std::less<>>& externals) {
  Binder(externals).check(program);
}

}  // namespace flucid
