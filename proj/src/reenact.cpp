#include "reenact/reenact.hpp"

#include <algorithm>

namespace reenact {

namespace {

Condition versionLe(VersionId nu) {
  return Condition::cmp(CmpOp::Le, ScalarExpr::attr("V"),
                        ScalarExpr::constant(static_cast<int64_t>(nu)));
}

Condition versionGt(VersionId nu) {
  return Condition::cmp(CmpOp::Gt, ScalarExpr::attr("V"),
                        ScalarExpr::constant(static_cast<int64_t>(nu)));
}

// Pins plain relation reads inside an insert query to the committed version
// at the statement's time.
QueryPlan bindReads(const QueryPlan& q, VersionId at) {
  switch (q.tag()) {
    case QueryPlan::Tag::BaseRel:
      if (q.relVersion()) return q;
      return QueryPlan::committedAt(q.relName(), at);
    case QueryPlan::Tag::Select:
      return QueryPlan::select(q.condition(), bindReads(q.child(), at));
    case QueryPlan::Tag::Project:
      return QueryPlan::project(q.projection(), bindReads(q.child(), at));
    case QueryPlan::Tag::Join:
      return QueryPlan::join(bindReads(q.left(), at), bindReads(q.right(), at));
    case QueryPlan::Tag::Union:
      return QueryPlan::unite(bindReads(q.left(), at), bindReads(q.right(), at));
    default:
      return q;
  }
}

}  // namespace

QueryPlan reenactUpdate(const Operation& op, QueryPlan input) {
  VersionId nu = op.time;
  if (const auto* u = std::get_if<UpdateSpec>(&op.body)) {
    QueryPlan updated = QueryPlan::annotOp(
        AnnotKind::Update, op.txn, nu + 1,
        QueryPlan::project(u->set, QueryPlan::select(u->where, input)));
    QueryPlan untouched = QueryPlan::select(Condition::negation(u->where), input);
    return QueryPlan::unite(updated, untouched);
  }
  if (const auto* ins = std::get_if<InsertSpec>(&op.body)) {
    QueryPlan inserted = QueryPlan::annotOp(AnnotKind::Insert, op.txn, nu + 1,
                                            bindReads(ins->query, nu));
    return QueryPlan::unite(input, inserted);
  }
  if (const auto* d = std::get_if<DeleteSpec>(&op.body)) {
    QueryPlan deleted = QueryPlan::annotOp(
        AnnotKind::Delete, op.txn, nu + 1, QueryPlan::select(d->where, input));
    QueryPlan untouched = QueryPlan::select(Condition::negation(d->where), input);
    return QueryPlan::unite(deleted, untouched);
  }
  throw Error("commit operations are reenacted by the transaction chain, not "
              "as single updates");
}

ReenactPlan reenactTransaction(const History& h, TxnId txn,
                               const std::string& rel) {
  const Transaction& t = h.transaction(txn);
  auto writes = t.writesOn(rel);
  if (writes.empty())
    throw HistoryError("transaction T" + std::to_string(txn) +
                       " does not modify relation '" + rel + "'");
  QueryPlan input = QueryPlan::committedAt(rel, writes[0]->time);
  QueryPlan chain = reenactUpdate(*writes[0], input);
  for (size_t i = 1; i < writes.size(); ++i) {
    QueryPlan merged = QueryPlan::versionMerge(
        chain, QueryPlan::committedAt(rel, writes[i]->time));
    chain = reenactUpdate(*writes[i], merged);
  }
  QueryPlan full =
      QueryPlan::annotOp(AnnotKind::Commit, txn, t.finish() + 1, chain);
  return ReenactPlan{rel, full, committedAccessProfile(full)};
}

ReenactPlan reenactTransactionOpt(const History& h, TxnId txn,
                                  const std::string& rel) {
  const Transaction& t = h.transaction(txn);
  if (!t.insertsAreValuesOnly())
    throw OptimizationInapplicableError(
        "single-scan reenactment requires all inserts of T" +
        std::to_string(txn) + " to use VALUES payloads");
  auto writes = t.writesOn(rel);
  if (writes.empty())
    throw HistoryError("transaction T" + std::to_string(txn) +
                       " does not modify relation '" + rel + "'");
  QueryPlan chain = QueryPlan::committedAt(rel, t.finish() - 1);
  for (const Operation* op : writes) {
    VersionId nu = op->time;
    if (const auto* u = std::get_if<UpdateSpec>(&op->body)) {
      QueryPlan visible = QueryPlan::versionFilter(versionLe(nu), chain);
      QueryPlan updated = QueryPlan::annotOp(
          AnnotKind::Update, txn, nu + 1,
          QueryPlan::project(u->set, QueryPlan::select(u->where, visible)));
      QueryPlan untouched =
          QueryPlan::select(Condition::negation(u->where), visible);
      QueryPlan later = QueryPlan::versionFilter(versionGt(nu), chain);
      chain = QueryPlan::unite(QueryPlan::unite(updated, untouched), later);
    } else if (const auto* d = std::get_if<DeleteSpec>(&op->body)) {
      QueryPlan visible = QueryPlan::versionFilter(versionLe(nu), chain);
      QueryPlan deleted = QueryPlan::annotOp(
          AnnotKind::Delete, txn, nu + 1, QueryPlan::select(d->where, visible));
      QueryPlan untouched =
          QueryPlan::select(Condition::negation(d->where), visible);
      QueryPlan later = QueryPlan::versionFilter(versionGt(nu), chain);
      chain = QueryPlan::unite(QueryPlan::unite(deleted, untouched), later);
    } else {
      const auto& ins = std::get<InsertSpec>(op->body);
      QueryPlan inserted =
          QueryPlan::annotOp(AnnotKind::Insert, txn, nu + 1, ins.query);
      chain = QueryPlan::unite(chain, inserted);
    }
  }
  QueryPlan full =
      QueryPlan::annotOp(AnnotKind::Commit, txn, t.finish() + 1, chain);
  return ReenactPlan{rel, full, committedAccessProfile(full)};
}

namespace {

// Builds history reenactment plans: committed-version reads become shared
// left-deep merge folds over per-transaction reenactment chains.
struct HistoryReenactor {
  const History& h;
  // per relation: transactions that modified it, in commit order
  std::map<std::string, std::vector<TxnId>> committers;
  // per relation: memoized fold prefixes (index = number of merged txns)
  std::map<std::string, std::vector<std::optional<QueryPlan>>> folds;

  explicit HistoryReenactor(const History& hist) : h(hist) {
    for (const auto& [id, t] : h.transactions())
      for (const auto& rel : t.modifiedRelations()) committers[rel].push_back(id);
    for (auto& [rel, ids] : committers) {
      std::sort(ids.begin(), ids.end(), [&](TxnId a, TxnId b) {
        return h.transaction(a).finish() < h.transaction(b).finish();
      });
      folds[rel].resize(ids.size() + 1);
    }
  }

  QueryPlan foldAt(const std::string& rel, VersionId nu) {
    size_t k = 0;
    auto it = committers.find(rel);
    if (it != committers.end())
      while (k < it->second.size() &&
             h.transaction(it->second[k]).finish() < nu)
        ++k;
    return foldPrefix(rel, k);
  }

  QueryPlan foldPrefix(const std::string& rel, size_t k) {
    auto fit = folds.find(rel);
    if (fit == folds.end()) return QueryPlan::emptyRel(h.schemaOf(rel));
    if (fit->second[k]) return *fit->second[k];
    QueryPlan result =
        k == 0 ? QueryPlan::emptyRel(h.schemaOf(rel))
               : QueryPlan::versionMerge(foldPrefix(rel, k - 1),
                                         txnChain(committers[rel][k - 1], rel));
    fit->second[k] = result;
    return result;
  }

  // Unoptimized transaction chain with every committed-version read replaced
  // by the fold of previously committed transactions.
  QueryPlan txnChain(TxnId txn, const std::string& rel) {
    const Transaction& t = h.transaction(txn);
    auto writes = t.writesOn(rel);
    QueryPlan chain = foldAt(rel, writes[0]->time);
    chain = chainOp(*writes[0], chain);
    for (size_t i = 1; i < writes.size(); ++i) {
      QueryPlan merged =
          QueryPlan::versionMerge(chain, foldAt(rel, writes[i]->time));
      chain = chainOp(*writes[i], merged);
    }
    return QueryPlan::annotOp(AnnotKind::Commit, txn, t.finish() + 1, chain);
  }

  QueryPlan chainOp(const Operation& op, QueryPlan input) {
    if (const auto* ins = std::get_if<InsertSpec>(&op.body)) {
      QueryPlan inserted = QueryPlan::annotOp(
          AnnotKind::Insert, op.txn, op.time + 1, bindQuery(ins->query, op.time));
      return QueryPlan::unite(input, inserted);
    }
    return reenactUpdate(op, input);
  }

  QueryPlan bindQuery(const QueryPlan& q, VersionId at) {
    switch (q.tag()) {
      case QueryPlan::Tag::BaseRel:
        return foldAt(q.relName(), at);
      case QueryPlan::Tag::Select:
        return QueryPlan::select(q.condition(), bindQuery(q.child(), at));
      case QueryPlan::Tag::Project:
        return QueryPlan::project(q.projection(), bindQuery(q.child(), at));
      case QueryPlan::Tag::Join:
        return QueryPlan::join(bindQuery(q.left(), at), bindQuery(q.right(), at));
      case QueryPlan::Tag::Union:
        return QueryPlan::unite(bindQuery(q.left(), at), bindQuery(q.right(), at));
      default:
        return q;
    }
  }
};

}  // namespace

ReenactPlan reenactHistory(const History& h, const std::string& rel, VersionId nu) {
  h.schemaOf(rel);
  HistoryReenactor r(h);
  QueryPlan plan = r.foldAt(rel, nu);
  return ReenactPlan{rel, plan, committedAccessProfile(plan)};
}

size_t accessCount(const ReenactPlan& p, const std::string& rel) {
  auto it = p.accessProfile.find(rel);
  return it == p.accessProfile.end() ? 0 : it->second;
}

AnnotatedRelation evalReenact(const QueryPlan& p, HistoryState& state) {
  EvalContext ctx;
  ctx.K = &state.semiring();
  ctx.allocator = &state;
  ctx.resolve = [&state](const std::string& name,
                         const std::optional<VersionId>& at)
      -> const AnnotatedRelation* {
    if (!at) return nullptr;
    return &state.committedAt(name, *at);
  };
  return evalPlan(p, ctx);
}

AnnotatedRelation evalReenact(const ReenactPlan& p, HistoryState& state) {
  return evalReenact(p.plan, state);
}

}  // namespace reenact
