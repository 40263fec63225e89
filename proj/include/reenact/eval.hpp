#ifndef REENACT_EVAL_HPP
#define REENACT_EVAL_HPP

#include <functional>
#include <map>
#include <optional>

#include "reenact/plan.hpp"

namespace reenact {

// Supplies tuple identifiers for summands wrapped by an insert executed at a
// given time. Implementations must be deterministic.
class IdAllocator {
public:
  virtual ~IdAllocator() = default;
  // Identifier for the index-th summand (in canonical output order) produced
  // by the insert whose annotation time is `annotTime` (operation time + 1).
  virtual TupleId idFor(VersionId annotTime, size_t index) = 0;
};

// Free-running allocator for standalone evaluation and tests.
class CountingAllocator : public IdAllocator {
public:
  explicit CountingAllocator(TupleId first = 1) : next_(first) {}
  TupleId idFor(VersionId annotTime, size_t index) override;

private:
  std::map<std::pair<VersionId, size_t>, TupleId> assigned_;
  TupleId next_;
};

struct EvalContext {
  const BaseSemiring* K;
  // Resolves BaseRel leaves; a null result raises UnboundRelationError.
  std::function<const AnnotatedRelation*(const std::string& name,
                                         const std::optional<VersionId>& at)>
      resolve;
  IdAllocator* allocator = nullptr;  // needed by AnnotOp(Insert)
};

AnnotatedRelation evalPlan(const QueryPlan& p, const EvalContext& ctx);

// Individual operators (evalPlan dispatches to these).
AnnotatedRelation evalSelect(const Condition& theta, const AnnotatedRelation& r,
                             const BaseSemiring& K);
AnnotatedRelation evalProject(const ProjExprList& items, const AnnotatedRelation& r,
                              const BaseSemiring& K);
AnnotatedRelation evalJoin(const AnnotatedRelation& l, const AnnotatedRelation& r,
                           const BaseSemiring& K);
AnnotatedRelation evalUnion(const AnnotatedRelation& l, const AnnotatedRelation& r,
                            const BaseSemiring& K);
AnnotatedRelation evalSingleton(const Schema& schema, const Tuple& t,
                                const BaseElem& k, const BaseSemiring& K);
AnnotatedRelation evalAnnotOp(AnnotKind kind, TxnId txn, VersionId time,
                              const AnnotatedRelation& r, const BaseSemiring& K,
                              IdAllocator* allocator);
AnnotatedRelation evalVersionMerge(const AnnotatedRelation& l,
                                   const AnnotatedRelation& r,
                                   const BaseSemiring& K);
AnnotatedRelation evalVersionFilter(const Condition& vcond,
                                    const AnnotatedRelation& r,
                                    const BaseSemiring& K);

// 1 unless the relation holds a strictly newer (isMax) or at least as new
// (isStrictMax) version of the summand's tuple id.
bool isMax(const AnnotatedRelation& r, const Summand& s);
bool isStrictMax(const AnnotatedRelation& r, const Summand& s);

// Sum / product of normalized annotations without re-expanding expressions.
NormalForm nfAdd(const NormalForm& a, const NormalForm& b, const BaseSemiring& K);
NormalForm nfMul(const NormalForm& a, const NormalForm& b, const BaseSemiring& K);

}  // namespace reenact

#endif
