#ifndef REENACT_CONDITION_HPP
#define REENACT_CONDITION_HPP

#include <memory>
#include <string>
#include <vector>

#include "reenact/relation.hpp"

namespace reenact {

// Scalar expression over a tuple: attribute reference, constant, or integer
// arithmetic. Strings support only comparison, no arithmetic.
class ScalarExpr {
public:
  enum class Tag { Attr, Const, Add, Sub, Mul };

  static ScalarExpr attr(std::string name);
  static ScalarExpr constant(Value v);
  static ScalarExpr arith(Tag op, ScalarExpr l, ScalarExpr r);

  Tag tag() const;
  const std::string& attrName() const;
  const Value& constant() const;
  ScalarExpr left() const;
  ScalarExpr right() const;

  Value eval(const Schema& schema, const Tuple& t) const;
  ValueType resultType(const Schema& schema) const;
  std::string render() const;

  bool operator==(const ScalarExpr& o) const;

private:
  struct Node;
  explicit ScalarExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

std::string cmpOpSymbol(CmpOp op);

// Boolean condition over a tuple: comparisons combined with and/or/not.
class Condition {
public:
  enum class Tag { Cmp, And, Or, Not, Literal };

  static Condition cmp(CmpOp op, ScalarExpr l, ScalarExpr r);
  static Condition conj(Condition l, Condition r);
  static Condition disj(Condition l, Condition r);
  static Condition negation(Condition c);
  static Condition literal(bool b);

  Tag tag() const;
  CmpOp cmpOp() const;
  ScalarExpr cmpLeft() const;
  ScalarExpr cmpRight() const;
  Condition left() const;
  Condition right() const;
  Condition child() const;
  bool literalValue() const;

  bool eval(const Schema& schema, const Tuple& t) const;
  // Validates attribute references and operand types against the schema.
  void check(const Schema& schema) const;
  std::string render() const;

  bool operator==(const Condition& o) const;

private:
  struct Node;
  explicit Condition(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// Projection: output attribute name plus the expression computing it.
struct ProjItem {
  ScalarExpr expr;
  std::string name;
  bool operator==(const ProjItem& o) const { return name == o.name && expr == o.expr; }
};

using ProjExprList = std::vector<ProjItem>;

std::string renderProjection(const ProjExprList& items);

// Pseudo-schema with the single attribute V used by version-filter conditions.
const Schema& versionPseudoSchema();

// Parses a condition from text (used by the CLI); same dialect as the audit
// log's WHERE clauses.
Condition parseCondition(const std::string& text, const Schema& schema);

}  // namespace reenact

#endif
