#include "flucid/parser.hpp"

#include <charconv>

namespace flucid {

namespace {

class Parser {
 public:
  explicit Parser(const std::vector<Token>& tokens) : toks_(tokens) {
    if (toks_.empty() || toks_.back().kind != TokenKind::End)
      throw ParseError("token sequence is not terminated", {});
  }

  NodePtr program() {
    NodePtr e = expr();
    accept_punct(";");
    if (cur().kind != TokenKind::End) fail({"end of input"});
    return e;
  }

 private:
  const Token& cur() const { return toks_[i_]; }
  const Token& peek(std::size_t k = 1) const { return toks_[std::min(i_ + k, toks_.size() - 1)]; }
  const Token& take() {
    const Token& t = toks_[i_];
    if (t.kind != TokenKind::End) ++i_;
    return t;
  }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const Token& t = cur();
    std::string msg = "expected ";
    for (std::size_t k = 0; k < expected.size(); ++k) {
      if (k) msg += k + 1 == expected.size() ? " or " : ", ";
      msg += expected[k];
    }
    msg += ", found ";
    msg += t.kind == TokenKind::End ? "end of input" : "'" + t.lexeme + "'";
    throw ParseError(msg, t.pos(), std::move(expected));
  }

  bool at_punct(std::string_view p) const { return cur().is(TokenKind::Punct, p); }
  bool at_op(std::string_view p) const { return cur().is(TokenKind::Operator, p); }
  bool at_kw(std::string_view k) const { return cur().is_keyword(k); }

  bool accept_punct(std::string_view p) {
    if (!at_punct(p)) return false;
    take();
    return true;
  }
  void expect_punct(std::string_view p) {
    if (!accept_punct(p)) fail({"'" + std::string(p) + "'"});
  }
  void expect_kw(std::string_view k) {
    if (!at_kw(k)) fail({"'" + std::string(k) + "'"});
    take();
  }
  std::string expect_ident() {
    if (cur().kind != TokenKind::Identifier) fail({"identifier"});
    return take().lexeme;
  }

  // `.ident` suffix of stream operators and `@`.
  std::string dim_suffix() {
    if (!at_op(".")) fail({"'.'"});
    take();
    return expect_ident();
  }

  NodePtr expr() {
    NodePtr e = if_expr();
    while (at_kw("where")) {
      const SourcePos pos = cur().pos();
      take();
      ast::Where w{std::move(e), {}};
      while (!at_kw("end")) w.decls.push_back(decl());
      take();
      e = make_node(std::move(w), pos);
    }
    return e;
  }

  NodePtr if_expr() {
    if (!at_kw("if")) return or_expr();
    const SourcePos pos = take().pos();
    NodePtr cond = expr();
    expect_kw("then");
    NodePtr then_branch = if_expr();
    accept_punct(";");
    expect_kw("else");
    NodePtr else_branch = if_expr();
    return make_node(ast::If{std::move(cond), std::move(then_branch), std::move(else_branch)}, pos);
  }

  NodePtr binop_chain(NodePtr (Parser::*operand)(), std::initializer_list<std::pair<const char*, BinaryOp>> ops) {
    NodePtr lhs = (this->*operand)();
    for (;;) {
      std::optional<BinaryOp> found;
      for (const auto& [text, op] : ops) {
        if (at_op(text) || at_kw(text)) found = op;
      }
      if (!found) return lhs;
      const SourcePos pos = take().pos();
      NodePtr rhs = (this->*operand)();
      lhs = make_node(ast::BinOp{*found, std::move(lhs), std::move(rhs)}, pos);
    }
  }

  NodePtr or_expr() { return binop_chain(&Parser::and_expr, {{"||", BinaryOp::Or}}); }
  NodePtr and_expr() { return binop_chain(&Parser::cmp_expr, {{"&&", BinaryOp::And}}); }
  NodePtr cmp_expr() {
    return binop_chain(&Parser::at_expr, {{"==", BinaryOp::Eq}, {"!=", BinaryOp::Ne}, {"in", BinaryOp::In}});
  }

  NodePtr at_expr() {
    NodePtr lhs = fby_expr();
    while (at_op("@")) {
      const SourcePos pos = take().pos();
      std::optional<std::string> dim;
      if (at_op(".")) dim = dim_suffix();
      NodePtr rhs = fby_expr();
      lhs = make_node(ast::At{std::move(lhs), std::move(dim), std::move(rhs)}, pos);
    }
    return lhs;
  }

  // fby is right-associative and binds looser than pby/wvr/asa/upon.
  NodePtr fby_expr() {
    NodePtr lhs = pby_expr();
    if (!at_kw("fby")) return lhs;
    const SourcePos pos = take().pos();
    std::string dim = dim_suffix();
    NodePtr rhs = fby_expr();
    return make_node(ast::BinaryStreamOp{StreamOp::Fby, std::move(dim), std::move(lhs), std::move(rhs)}, pos);
  }

  // Left-associative, so `x pby.d a pby.d b` prepends a, then b.
  NodePtr pby_expr() {
    NodePtr lhs = unary();
    for (;;) {
      std::optional<StreamOp> op;
      if (at_kw("pby")) op = StreamOp::Pby;
      else if (at_kw("wvr")) op = StreamOp::Wvr;
      else if (at_kw("asa")) op = StreamOp::Asa;
      else if (at_kw("upon")) op = StreamOp::Upon;
      if (!op) return lhs;
      const SourcePos pos = take().pos();
      std::string dim = dim_suffix();
      NodePtr rhs = unary();
      lhs = make_node(ast::BinaryStreamOp{*op, std::move(dim), std::move(lhs), std::move(rhs)}, pos);
    }
  }

  NodePtr unary() {
    std::optional<StreamOp> op;
    if (at_kw("first")) op = StreamOp::First;
    else if (at_kw("next")) op = StreamOp::Next;
    else if (at_kw("last")) op = StreamOp::Last;
    else if (at_kw("prev")) op = StreamOp::Prev;
    else if (at_kw("iseod")) op = StreamOp::IsEod;
    if (op) {
      const SourcePos pos = take().pos();
      std::string dim = dim_suffix();
      NodePtr operand = unary();
      return make_node(ast::UnaryStreamOp{*op, std::move(dim), std::move(operand)}, pos);
    }
    if (at_op("#")) {
      const SourcePos pos = take().pos();
      if (at_op(".")) take();
      return make_node(ast::Hash{expect_ident()}, pos);
    }
    return primary();
  }

  std::vector<NodePtr> list_until(std::string_view close) {
    std::vector<NodePtr> items;
    if (accept_punct(close)) return items;
    for (;;) {
      items.push_back(expr());
      if (accept_punct(close)) return items;
      if (!accept_punct(",")) fail({"','", "'" + std::string(close) + "'"});
    }
  }

  NodePtr primary() {
    const Token& t = cur();
    const SourcePos pos = t.pos();
    switch (t.kind) {
      case TokenKind::Integer: {
        std::int64_t v = 0;
        const auto& s = t.lexeme;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size()) throw ParseError("integer literal out of range", pos);
        take();
        return make_node(ast::Literal{Value::integer(v)}, pos);
      }
      case TokenKind::Atom:
        return make_node(ast::Literal{Value::atom(take().lexeme)}, pos);
      case TokenKind::PlusInf:
        take();
        return make_node(ast::Literal{Value::inf()}, pos);
      case TokenKind::Dollar:
        take();
        return make_node(ast::Wildcard{}, pos);
      case TokenKind::Identifier: {
        std::string name = take().lexeme;
        if (!at_punct("(")) return make_node(ast::Ident{std::move(name)}, pos);
        take();
        return make_node(ast::Call{std::move(name), list_until(")")}, pos);
      }
      case TokenKind::Keyword:
        if (t.lexeme == "eod") {
          take();
          return make_node(ast::Literal{Value::eod()}, pos);
        }
        if (t.lexeme == "true" || t.lexeme == "false") {
          return make_node(ast::Literal{Value::boolean(take().lexeme == "true")}, pos);
        }
        if (t.lexeme == "unordered") {
          take();
          expect_punct("{");
          return make_node(ast::UnorderedSet{list_until("}"), false}, pos);
        }
        if (t.lexeme == "if") return if_expr();
        break;
      case TokenKind::Punct:
        if (t.lexeme == "[") {
          take();
          return make_node(ast::ArrayExpr{list_until("]"), false}, pos);
        }
        if (t.lexeme == "{") {
          take();
          return make_node(ast::UnorderedSet{list_until("}"), true}, pos);
        }
        if (t.lexeme == "(") return paren();
        break;
      default:
        break;
    }
    fail({"expression"});
  }

  // ( expr ) or an observation tuple, possibly juxtaposed: (A,3,0)(B,2,0)
  NodePtr paren() {
    NodePtr first = paren_one();
    if (!first->is<ast::TupleObs>() || !at_punct("(")) return first;
    const SourcePos pos = first->pos;
    ast::ArrayExpr seq{{}, true};
    seq.items.push_back(std::move(first));
    while (at_punct("(")) {
      NodePtr next = paren_one();
      if (!next->is<ast::TupleObs>()) throw ParseError("only observation tuples may be juxtaposed", next->pos);
      seq.items.push_back(std::move(next));
    }
    return make_node(std::move(seq), pos);
  }

  NodePtr paren_one() {
    const SourcePos pos = cur().pos();
    expect_punct("(");
    NodePtr e = expr();
    if (accept_punct(")")) return e;
    if (!accept_punct(",")) fail({"','", "')'"});
    NodePtr min = expr();
    expect_punct(",");
    NodePtr opt = expr();
    expect_punct(")");
    return make_node(ast::TupleObs{std::move(e), std::move(min), std::move(opt)}, pos);
  }

  void end_decl(const NodePtr& value) {
    if (accept_punct(";")) return;
    if (value && value->is<ast::Where>()) return;
    fail({"';'"});
  }

  NodePtr decl() {
    const SourcePos pos = cur().pos();
    ast::Decl d{DeclKind::Variable, {}, {}, nullptr};
    if (at_kw("dimension")) {
      take();
      d.kind = DeclKind::Dimension;
      d.name = expect_ident();
      expect_punct(";");
      return make_node(std::move(d), pos);
    }
    if (at_kw("observation")) {
      take();
      d.kind = DeclKind::Observation;
      if (at_kw("sequence")) {
        take();
        d.kind = DeclKind::ObservationSequence;
      }
      d.name = expect_ident();
      if (d.kind == DeclKind::Observation && accept_punct(";")) return make_node(std::move(d), pos);
      expect_punct("=");
      d.value = expr();
      end_decl(d.value);
      return make_node(std::move(d), pos);
    }
    if (at_kw("evidential")) {
      take();
      expect_kw("statement");
      d.kind = DeclKind::EvidentialStatement;
      d.name = expect_ident();
      expect_punct("=");
      d.value = expr();
      end_decl(d.value);
      return make_node(std::move(d), pos);
    }
    if (cur().kind != TokenKind::Identifier)
      fail({"'dimension'", "'observation'", "'evidential'", "identifier", "'end'"});
    d.name = take().lexeme;
    if (accept_punct("(")) {
      d.kind = DeclKind::Function;
      if (!accept_punct(")")) {
        for (;;) {
          d.params.push_back(expect_ident());
          if (accept_punct(")")) break;
          if (!accept_punct(",")) fail({"','", "')'"});
        }
      }
    }
    expect_punct("=");
    d.value = expr();
    end_decl(d.value);
    return make_node(std::move(d), pos);
  }

  const std::vector<Token>& toks_;
  std::size_t i_ = 0;
};

}  // namespace

NodePtr parse_program(const std::vector<Token>& tokens) { return Parser(tokens).program(); }

NodePtr parse_source(std::string_view source) { return parse_program(tokenize(source)); }

}  // namespace flucid
