#include "reenact/condition.hpp"

#include <cctype>
#include <sstream>

namespace reenact {

struct ScalarExpr::Node {
  Tag tag;
  std::string attr;
  Value value;
  std::shared_ptr<const Node> l, r;
};

ScalarExpr ScalarExpr::attr(std::string name) {
  auto n = std::make_shared<Node>();
  n->tag = Tag::Attr;
  n->attr = std::move(name);
  return ScalarExpr(std::move(n));
}

ScalarExpr ScalarExpr::constant(Value v) {
  auto n = std::make_shared<Node>();
  n->tag = Tag::Const;
  n->value = std::move(v);
  return ScalarExpr(std::move(n));
}

ScalarExpr ScalarExpr::arith(Tag op, ScalarExpr l, ScalarExpr r) {
  auto n = std::make_shared<Node>();
  n->tag = op;
  n->l = std::move(l.node_);
  n->r = std::move(r.node_);
  return ScalarExpr(std::move(n));
}

ScalarExpr::Tag ScalarExpr::tag() const { return node_->tag; }
const std::string& ScalarExpr::attrName() const { return node_->attr; }
const Value& ScalarExpr::constant() const { return node_->value; }
ScalarExpr ScalarExpr::left() const { return ScalarExpr(node_->l); }
ScalarExpr ScalarExpr::right() const { return ScalarExpr(node_->r); }

Value ScalarExpr::eval(const Schema& schema, const Tuple& t) const {
  switch (tag()) {
    case Tag::Attr: return t.values[schema.indexOf(attrName())];
    case Tag::Const: return constant();
    default: {
      Value a = left().eval(schema, t);
      Value b = right().eval(schema, t);
      if (!std::holds_alternative<int64_t>(a) || !std::holds_alternative<int64_t>(b))
        throw TypeMismatchError("arithmetic requires integer operands");
      int64_t x = std::get<int64_t>(a), y = std::get<int64_t>(b);
      switch (tag()) {
        case Tag::Add: return x + y;
        case Tag::Sub: return x - y;
        case Tag::Mul: return x * y;
        default: break;
      }
    }
  }
  throw Error("unreachable scalar tag");
}

ValueType ScalarExpr::resultType(const Schema& schema) const {
  switch (tag()) {
    case Tag::Attr: return schema.attrs[schema.indexOf(attrName())].type;
    case Tag::Const: return typeOf(constant());
    default: {
      if (left().resultType(schema) != ValueType::Int ||
          right().resultType(schema) != ValueType::Int)
        throw TypeMismatchError("arithmetic requires integer operands");
      return ValueType::Int;
    }
  }
}

std::string ScalarExpr::render() const {
  switch (tag()) {
    case Tag::Attr: return attrName();
    case Tag::Const: return renderValue(constant());
    default: {
      const char* op = tag() == Tag::Add ? " + " : tag() == Tag::Sub ? " - " : " * ";
      auto part = [](const ScalarExpr& e) {
        std::string s = e.render();
        if (e.tag() == Tag::Add || e.tag() == Tag::Sub || e.tag() == Tag::Mul)
          return "(" + s + ")";
        return s;
      };
      return part(left()) + op + part(right());
    }
  }
}

bool ScalarExpr::operator==(const ScalarExpr& o) const {
  if (tag() != o.tag()) return false;
  switch (tag()) {
    case Tag::Attr: return attrName() == o.attrName();
    case Tag::Const: return constant() == o.constant();
    default: return left() == o.left() && right() == o.right();
  }
}

std::string cmpOpSymbol(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "<>";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

struct Condition::Node {
  Tag tag;
  CmpOp op = CmpOp::Eq;
  std::shared_ptr<const ScalarExpr> el, er;
  std::shared_ptr<const Node> l, r;
  bool lit = false;
};

Condition Condition::cmp(CmpOp op, ScalarExpr l, ScalarExpr r) {
  auto n = std::make_shared<Node>();
  n->tag = Tag::Cmp;
  n->op = op;
  n->el = std::make_shared<ScalarExpr>(std::move(l));
  n->er = std::make_shared<ScalarExpr>(std::move(r));
  return Condition(std::move(n));
}

Condition Condition::conj(Condition l, Condition r) {
  auto n = std::make_shared<Node>();
  n->tag = Tag::And;
  n->l = std::move(l.node_);
  n->r = std::move(r.node_);
  return Condition(std::move(n));
}

Condition Condition::disj(Condition l, Condition r) {
  auto n = std::make_shared<Node>();
  n->tag = Tag::Or;
  n->l = std::move(l.node_);
  n->r = std::move(r.node_);
  return Condition(std::move(n));
}

Condition Condition::negation(Condition c) {
  auto n = std::make_shared<Node>();
  n->tag = Tag::Not;
  n->l = std::move(c.node_);
  return Condition(std::move(n));
}

Condition Condition::literal(bool b) {
  auto n = std::make_shared<Node>();
  n->tag = Tag::Literal;
  n->lit = b;
  return Condition(std::move(n));
}

Condition::Tag Condition::tag() const { return node_->tag; }
CmpOp Condition::cmpOp() const { return node_->op; }
ScalarExpr Condition::cmpLeft() const { return *node_->el; }
ScalarExpr Condition::cmpRight() const { return *node_->er; }
Condition Condition::left() const { return Condition(node_->l); }
Condition Condition::right() const { return Condition(node_->r); }
Condition Condition::child() const { return Condition(node_->l); }
bool Condition::literalValue() const { return node_->lit; }

static bool compareValues(CmpOp op, const Value& a, const Value& b) {
  if (typeOf(a) != typeOf(b))
    throw TypeMismatchError("comparison between values of different types");
  int c;
  if (std::holds_alternative<int64_t>(a)) {
    int64_t x = std::get<int64_t>(a), y = std::get<int64_t>(b);
    c = x < y ? -1 : x > y ? 1 : 0;
  } else {
    const auto& x = std::get<std::string>(a);
    const auto& y = std::get<std::string>(b);
    c = x < y ? -1 : x > y ? 1 : 0;
  }
  switch (op) {
    case CmpOp::Eq: return c == 0;
    case CmpOp::Ne: return c != 0;
    case CmpOp::Lt: return c < 0;
    case CmpOp::Le: return c <= 0;
    case CmpOp::Gt: return c > 0;
    case CmpOp::Ge: return c >= 0;
  }
  return false;
}

bool Condition::eval(const Schema& schema, const Tuple& t) const {
  switch (tag()) {
    case Tag::Cmp:
      return compareValues(cmpOp(), cmpLeft().eval(schema, t),
                           cmpRight().eval(schema, t));
    case Tag::And: return left().eval(schema, t) && right().eval(schema, t);
    case Tag::Or: return left().eval(schema, t) || right().eval(schema, t);
    case Tag::Not: return !child().eval(schema, t);
    case Tag::Literal: return literalValue();
  }
  throw Error("unreachable condition tag");
}

void Condition::check(const Schema& schema) const {
  switch (tag()) {
    case Tag::Cmp: {
      ValueType a = cmpLeft().resultType(schema);
      ValueType b = cmpRight().resultType(schema);
      if (a != b)
        throw TypeMismatchError("comparison between " + cmpLeft().render() +
                                " and " + cmpRight().render() +
                                " of different types");
      return;
    }
    case Tag::And:
    case Tag::Or:
      left().check(schema);
      right().check(schema);
      return;
    case Tag::Not: child().check(schema); return;
    case Tag::Literal: return;
  }
}

std::string Condition::render() const {
  switch (tag()) {
    case Tag::Cmp:
      return cmpLeft().render() + " " + cmpOpSymbol(cmpOp()) + " " +
             cmpRight().render();
    case Tag::And: {
      auto part = [](const Condition& c) {
        std::string s = c.render();
        if (c.tag() == Tag::Or) return "(" + s + ")";
        return s;
      };
      return part(left()) + " and " + part(right());
    }
    case Tag::Or:
      return left().render() + " or " + right().render();
    case Tag::Not: {
      std::string s = child().render();
      return "not (" + s + ")";
    }
    case Tag::Literal: return literalValue() ? "true" : "false";
  }
  return "?";
}

bool Condition::operator==(const Condition& o) const {
  if (tag() != o.tag()) return false;
  switch (tag()) {
    case Tag::Cmp:
      return cmpOp() == o.cmpOp() && cmpLeft() == o.cmpLeft() &&
             cmpRight() == o.cmpRight();
    case Tag::And:
    case Tag::Or:
      return left() == o.left() && right() == o.right();
    case Tag::Not: return child() == o.child();
    case Tag::Literal: return literalValue() == o.literalValue();
  }
  return false;
}

std::string renderProjection(const ProjExprList& items) {
  std::ostringstream os;
  for (size_t i = 0; i < items.size(); ++i) {
    if (i) os << ", ";
    // identity projections print as the bare attribute
    if (items[i].expr.tag() == ScalarExpr::Tag::Attr &&
        items[i].expr.attrName() == items[i].name)
      os << items[i].name;
    else
      os << items[i].expr.render() << " -> " << items[i].name;
  }
  return os.str();
}

const Schema& versionPseudoSchema() {
  static Schema s{"$version", {{"V", ValueType::Int}}};
  return s;
}

}  // namespace reenact
