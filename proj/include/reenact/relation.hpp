#ifndef REENACT_RELATION_HPP
#define REENACT_RELATION_HPP

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "reenact/mvexpr.hpp"

namespace reenact {

enum class ValueType { Int, Str };

using Value = std::variant<int64_t, std::string>;

ValueType typeOf(const Value& v);
std::string renderValue(const Value& v);

struct Attribute {
  std::string name;
  ValueType type;
  bool operator==(const Attribute&) const = default;
};

struct Schema {
  std::string relation;
  std::vector<Attribute> attrs;

  // Index of an attribute by name; throws SchemaError when absent.
  size_t indexOf(const std::string& name) const;
  std::optional<size_t> tryIndexOf(const std::string& name) const;
  bool sameAttributes(const Schema& o) const;
  std::string render() const;
};

struct Tuple {
  std::vector<Value> values;
  bool operator==(const Tuple&) const = default;
  bool operator<(const Tuple& o) const { return values < o.values; }
};

std::string renderTuple(const Tuple& t);

// A relation whose tuples carry normalized, nonzero annotations. Absent
// tuples are implicitly annotated zero.
class AnnotatedRelation {
public:
  AnnotatedRelation() = default;
  explicit AnnotatedRelation(Schema schema) : schema_(std::move(schema)) {}

  const Schema& schema() const { return schema_; }
  const std::map<Tuple, NormalForm>& rows() const { return rows_; }
  size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }

  // Adds `ann` to the tuple's current annotation; drops the row if the result
  // is zero. The tuple must match the schema.
  void addAnnotation(const Tuple& t, const NormalForm& ann, const BaseSemiring& K);
  void setAnnotation(const Tuple& t, NormalForm ann);
  NormalForm annotationOf(const Tuple& t, const BaseSemiring& K) const;

  bool operator==(const AnnotatedRelation& o) const;

  // Checks tuple arity/types against the schema.
  void checkTuple(const Tuple& t) const;

  // Every summand of every annotation is wrapped in a version annotation.
  bool allSummandsVersioned() const;

  std::string renderText() const;
  std::string renderJson() const;

private:
  Schema schema_;
  std::map<Tuple, NormalForm> rows_;
};

using Database = std::map<std::string, AnnotatedRelation>;

}  // namespace reenact

#endif
