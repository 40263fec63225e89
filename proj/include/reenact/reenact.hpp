#ifndef REENACT_REENACT_HPP
#define REENACT_REENACT_HPP

#include "reenact/history.hpp"

namespace reenact {

// Compiled reenactment query for one relation, with the number of committed
// relation-version reads it performs.
struct ReenactPlan {
  std::string rel;
  QueryPlan plan;
  std::map<std::string, size_t> accessProfile;
};

// Reenactment query for a single write operation over the given input plan.
// The result evaluates, over the relation version the operation saw, to the
// operation's output. Throws on commit operations.
QueryPlan reenactUpdate(const Operation& op, QueryPlan input);

// Chained reenactment for all of txn's writes on rel: between consecutive
// writes, freshly committed tuple versions are folded in with a version
// merge; a commit annotation tops the chain. Evaluating the plan over the
// history state yields relationInTxn(rel, txn, finish+1).
ReenactPlan reenactTransaction(const History& h, TxnId txn, const std::string& rel);

// Single-scan variant: reads one committed version (finish-1) and routes
// tuple versions through visible / not-yet-visible branches per update using
// version filters. Requires all inserts of the transaction to be VALUES
// inserts; throws OptimizationInapplicableError otherwise.
ReenactPlan reenactTransactionOpt(const History& h, TxnId txn,
                                  const std::string& rel);

// Reenactment of the whole history up to nu: committed-version reads are
// replaced by left-deep version-merge folds, in commit order, of the
// reenactment queries of the transactions committed before that version.
// The resulting plan reads no stored relation at all. Evaluating it yields
// committedAt(rel, nu).
ReenactPlan reenactHistory(const History& h, const std::string& rel, VersionId nu);

size_t accessCount(const ReenactPlan& p, const std::string& rel);

// Evaluates a compiled plan against the executed history (committed-version
// reads and fresh-id assignment come from the state).
AnnotatedRelation evalReenact(const ReenactPlan& p, HistoryState& state);
AnnotatedRelation evalReenact(const QueryPlan& p, HistoryState& state);

}  // namespace reenact

#endif
