#ifndef REENACT_PLAN_HPP
#define REENACT_PLAN_HPP

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "reenact/condition.hpp"

namespace reenact {

// Relational-algebra plan over annotated relations, extended with the
// version-annotation, version-merge and version-filter operators. Immutable;
// subtrees are shared, so plans form DAGs.
class QueryPlan {
public:
  enum class Tag {
    BaseRel,      // named relation, optionally pinned to a committed version
    EmptyRel,     // constant empty relation with a fixed schema
    Select,
    Project,
    Join,         // product over disjoint attribute sets
    Union,
    Singleton,    // one tuple with a base-semiring annotation
    AnnotOp,      // wrap every summand (or commit-wrap) at a fixed version
    VersionMerge,
    VersionFilter
  };

  static QueryPlan baseRel(std::string name);
  static QueryPlan committedAt(std::string name, VersionId at);
  static QueryPlan emptyRel(Schema schema);
  static QueryPlan select(Condition cond, QueryPlan child);
  static QueryPlan project(ProjExprList items, QueryPlan child);
  static QueryPlan join(QueryPlan l, QueryPlan r);
  static QueryPlan unite(QueryPlan l, QueryPlan r);
  static QueryPlan singleton(Schema schema, Tuple t, BaseElem k);
  static QueryPlan annotOp(AnnotKind kind, TxnId txn, VersionId time, QueryPlan child);
  static QueryPlan versionMerge(QueryPlan l, QueryPlan r);
  static QueryPlan versionFilter(Condition vcond, QueryPlan child);

  Tag tag() const;
  const std::string& relName() const;                 // BaseRel
  const std::optional<VersionId>& relVersion() const; // BaseRel
  const Schema& fixedSchema() const;                  // EmptyRel / Singleton
  const Condition& condition() const;                 // Select / VersionFilter
  const ProjExprList& projection() const;             // Project
  QueryPlan left() const;                             // Join/Union/VersionMerge
  QueryPlan right() const;
  QueryPlan child() const;                            // Select/Project/AnnotOp/VersionFilter
  const Tuple& singletonTuple() const;
  const BaseElem& singletonAnnotation() const;
  AnnotKind annotKind() const;                        // AnnotOp
  TxnId annotTxn() const;
  VersionId annotTime() const;

  // Stable identity of the shared node, used for evaluation memoization.
  const void* key() const;

  std::string render() const;

  // Visits every node of the DAG once.
  void visit(const std::function<void(const QueryPlan&)>& f) const;

private:
  struct Node;
  explicit QueryPlan(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// Counts BaseRel leaves pinned to committed versions, per relation name.
std::map<std::string, size_t> committedAccessProfile(const QueryPlan& p);

}  // namespace reenact

#endif
