#ifndef REENACT_HISTORY_HPP
#define REENACT_HISTORY_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "reenact/eval.hpp"

namespace reenact {

// One SQL-level write operation. Update carries the full projection list
// (unlisted attributes are identity entries, filled in by the log parser).
struct UpdateSpec {
  std::string rel;
  Condition where;
  ProjExprList set;
};

struct InsertSpec {
  std::string rel;
  QueryPlan query;
  bool valuesOnly;  // query consists of singletons/unions only
};

struct DeleteSpec {
  std::string rel;
  Condition where;
};

struct CommitSpec {};

struct Operation {
  VersionId time;
  TxnId txn;
  std::variant<UpdateSpec, InsertSpec, DeleteSpec, CommitSpec> body;

  bool isCommit() const { return std::holds_alternative<CommitSpec>(body); }
  bool isWrite() const { return !isCommit(); }
  // Relation a write op targets; throws for commits.
  const std::string& targetRel() const;
};

struct Transaction {
  TxnId id;
  std::vector<Operation> ops;  // increasing time, last one a commit

  VersionId start() const { return ops.front().time; }
  VersionId finish() const { return ops.back().time; }
  // Write operations targeting `rel`, in time order.
  std::vector<const Operation*> writesOn(const std::string& rel) const;
  std::set<std::string> modifiedRelations() const;
  bool insertsAreValuesOnly() const;
};

class History {
public:
  History() = default;

  void addRelation(Schema schema);
  void addTransaction(Transaction t);

  const std::map<std::string, Schema>& schemas() const { return schemas_; }
  const Schema& schemaOf(const std::string& rel) const;
  const std::map<TxnId, Transaction>& transactions() const { return txns_; }
  const Transaction& transaction(TxnId id) const;
  bool hasTransaction(TxnId id) const { return txns_.count(id) > 0; }

  // Latest operation time in the history (0 when empty).
  VersionId horizon() const;
  // All operations across transactions in time order.
  std::vector<const Operation*> operationsInOrder() const;

  // Checks the structural rules: per-transaction times strictly increasing,
  // exactly one trailing commit, at most one operation per version, known
  // relations/attributes. Throws HistoryError.
  void validate() const;

private:
  std::map<std::string, Schema> schemas_;
  std::map<TxnId, Transaction> txns_;
};

// Memoized evaluation of the state a history induces: committed relation
// versions, per-transaction relation versions, and the per-statement visible
// versions. Construction runs the whole history (rejecting histories no
// locking scheduler could have produced) and freezes fresh-id assignment;
// afterwards the object is immutable and usable as the id allocator for
// reenactment.
class HistoryState : public IdAllocator {
public:
  HistoryState(const History& h, const BaseSemiring& K);

  const History& history() const { return *h_; }
  const BaseSemiring& semiring() const { return *K_; }
  VersionId horizon() const { return horizon_; }

  // Committed tuple versions of rel at time nu (changes of transactions that
  // committed strictly before nu).
  const AnnotatedRelation& committedAt(const std::string& rel, VersionId nu);
  // Version of rel seen by transaction T at time nu.
  const AnnotatedRelation& relationInTxn(const std::string& rel, TxnId txn,
                                         VersionId nu);
  // Version of rel visible to a statement of T executing at time nu:
  // committed tuple versions not yet overwritten by T plus T's own versions.
  const AnnotatedRelation& visibleToUpdate(const std::string& rel, TxnId txn,
                                           VersionId nu);

  Database committedDatabaseAt(VersionId nu);

  // Validity predicates over summands.
  bool validIn(TxnId txn, const Summand& k) const;
  bool validEx(TxnId txn, const std::string& rel, const Summand& k, VersionId nu);
  bool validAt(TxnId txn, const std::string& rel, const Summand& k, VersionId nu);
  // True iff some write of txn before nu turned k into a newer U/D-wrapped
  // version of itself.
  bool updatedBefore(TxnId txn, const std::string& rel, const Summand& k,
                     VersionId nu);

  // Recorded fresh-id assignment; throws once frozen when asked for an
  // unrecorded (time, index) pair.
  TupleId idFor(VersionId annotTime, size_t index) override;

private:
  const AnnotatedRelation& emptyRel(const std::string& rel);
  void acquireLock(TupleId id, TxnId txn, VersionId time);

  const History* h_;
  const BaseSemiring* K_;
  VersionId horizon_ = 0;

  std::map<std::tuple<std::string, TxnId, VersionId>, AnnotatedRelation> memoTxn_;
  std::map<std::pair<std::string, VersionId>, AnnotatedRelation> memoCommitted_;
  std::map<std::tuple<std::string, TxnId, VersionId>, AnnotatedRelation> memoVisible_;
  std::map<std::string, AnnotatedRelation> empties_;

  std::map<std::pair<VersionId, size_t>, TupleId> idAssignment_;
  TupleId nextId_ = 1;
  bool frozen_ = false;

  std::map<TupleId, TxnId> lockOwner_;
};

// Standalone update application used by unit tests and the reenactment
// differential: the definitional per-tuple semantics.
AnnotatedRelation applyUpdate(const UpdateSpec& u, VersionId time, TxnId txn,
                              const AnnotatedRelation& r, const BaseSemiring& K,
                              std::vector<TupleId>* touched = nullptr);
AnnotatedRelation applyDelete(const DeleteSpec& d, VersionId time, TxnId txn,
                              const AnnotatedRelation& r, const BaseSemiring& K,
                              std::vector<TupleId>* touched = nullptr);
AnnotatedRelation applyInsert(const InsertSpec& ins, VersionId time, TxnId txn,
                              const AnnotatedRelation& r, const Database& visibleDb,
                              const BaseSemiring& K, IdAllocator& alloc);
AnnotatedRelation applyCommit(TxnId txn, VersionId time,
                              const AnnotatedRelation& r, const BaseSemiring& K);

}  // namespace reenact

#endif
