#include "reenact/history.hpp"

#include <algorithm>

namespace reenact {

const std::string& Operation::targetRel() const {
  if (const auto* u = std::get_if<UpdateSpec>(&body)) return u->rel;
  if (const auto* i = std::get_if<InsertSpec>(&body)) return i->rel;
  if (const auto* d = std::get_if<DeleteSpec>(&body)) return d->rel;
  throw HistoryError("commit operation has no target relation");
}

std::vector<const Operation*> Transaction::writesOn(const std::string& rel) const {
  std::vector<const Operation*> out;
  for (const auto& op : ops)
    if (op.isWrite() && op.targetRel() == rel) out.push_back(&op);
  return out;
}

std::set<std::string> Transaction::modifiedRelations() const {
  std::set<std::string> out;
  for (const auto& op : ops)
    if (op.isWrite()) out.insert(op.targetRel());
  return out;
}

bool Transaction::insertsAreValuesOnly() const {
  for (const auto& op : ops)
    if (const auto* ins = std::get_if<InsertSpec>(&op.body))
      if (!ins->valuesOnly) return false;
  return true;
}

void History::addRelation(Schema schema) {
  std::set<std::string> names;
  for (const auto& a : schema.attrs)
    if (!names.insert(a.name).second)
      throw SchemaError("duplicate attribute '" + a.name + "' in relation '" +
                        schema.relation + "'");
  std::string key = schema.relation;
  schemas_[key] = std::move(schema);
}

void History::addTransaction(Transaction t) {
  TxnId id = t.id;
  if (!txns_.emplace(id, std::move(t)).second)
    throw HistoryError("duplicate transaction T" + std::to_string(id));
}

const Schema& History::schemaOf(const std::string& rel) const {
  auto it = schemas_.find(rel);
  if (it == schemas_.end())
    throw UnknownRelationError("unknown relation '" + rel + "'");
  return it->second;
}

const Transaction& History::transaction(TxnId id) const {
  auto it = txns_.find(id);
  if (it == txns_.end())
    throw UnknownTransactionError("unknown transaction T" + std::to_string(id));
  return it->second;
}

VersionId History::horizon() const {
  VersionId h = 0;
  for (const auto& [id, t] : txns_)
    for (const auto& op : t.ops) h = std::max(h, op.time);
  return h;
}

std::vector<const Operation*> History::operationsInOrder() const {
  std::vector<const Operation*> ops;
  for (const auto& [id, t] : txns_)
    for (const auto& op : t.ops) ops.push_back(&op);
  std::sort(ops.begin(), ops.end(),
            [](const Operation* a, const Operation* b) { return a->time < b->time; });
  return ops;
}

// Structural shape allowed for insert queries.
static void checkInsertQueryShape(const QueryPlan& q) {
  switch (q.tag()) {
    case QueryPlan::Tag::Singleton:
    case QueryPlan::Tag::BaseRel:
      return;
    case QueryPlan::Tag::Select:
    case QueryPlan::Tag::Project:
      checkInsertQueryShape(q.child());
      return;
    case QueryPlan::Tag::Union:
    case QueryPlan::Tag::Join:
      checkInsertQueryShape(q.left());
      checkInsertQueryShape(q.right());
      return;
    default:
      throw HistoryError(
          "insert query may only use singletons, select, project, join and "
          "union over base relations");
  }
}

void History::validate() const {
  std::map<VersionId, TxnId> opAt;
  for (const auto& [id, t] : txns_) {
    if (t.ops.empty())
      throw HistoryError("transaction T" + std::to_string(id) + " has no operations");
    if (!t.ops.back().isCommit())
      throw HistoryError("transaction T" + std::to_string(id) +
                         " does not end in a commit");
    VersionId prev = 0;
    for (size_t i = 0; i < t.ops.size(); ++i) {
      const Operation& op = t.ops[i];
      if (op.txn != id)
        throw HistoryError("operation tagged with wrong transaction id");
      if (op.time == 0 || (i > 0 && op.time <= prev))
        throw HistoryError("operation times of T" + std::to_string(id) +
                           " are not strictly increasing");
      prev = op.time;
      if (op.isCommit() && i + 1 != t.ops.size())
        throw HistoryError("operation of T" + std::to_string(id) +
                           " after its commit");
      auto [it, fresh] = opAt.emplace(op.time, id);
      if (!fresh)
        throw HistoryError("two operations at version " + std::to_string(op.time));
      if (op.isWrite()) {
        const Schema& s = schemaOf(op.targetRel());
        if (const auto* u = std::get_if<UpdateSpec>(&op.body)) {
          u->where.check(s);
          if (u->set.size() != s.attrs.size())
            throw SchemaError("update projection arity mismatch on " + u->rel);
          for (size_t j = 0; j < u->set.size(); ++j) {
            if (u->set[j].name != s.attrs[j].name)
              throw SchemaError("update projection must list attributes in "
                                "schema order");
            if (u->set[j].expr.resultType(s) != s.attrs[j].type)
              throw TypeMismatchError("update expression type mismatch for '" +
                                      u->set[j].name + "'");
          }
        } else if (const auto* d = std::get_if<DeleteSpec>(&op.body)) {
          d->where.check(s);
        } else if (const auto* ins = std::get_if<InsertSpec>(&op.body)) {
          checkInsertQueryShape(ins->query);
        }
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Definitional operation semantics.
// ---------------------------------------------------------------------------

static Summand wrapOne(const VersionAnnotation& ann, const Summand& s) {
  auto in = std::make_shared<Summand>();
  in->coeff = 1;
  in->mono = s.mono;
  in->factors = s.factors;
  Summand out;
  out.coeff = s.coeff;
  out.factors.push_back(WrappedFactor{ann, std::move(in)});
  return out;
}

AnnotatedRelation applyUpdate(const UpdateSpec& u, VersionId time, TxnId txn,
                              const AnnotatedRelation& r, const BaseSemiring& K,
                              std::vector<TupleId>* touched) {
  u.where.check(r.schema());
  AnnotatedRelation out(r.schema());
  for (const auto& [t, ann] : r.rows()) {
    if (!u.where.eval(r.schema(), t)) {
      out.addAnnotation(t, ann, K);
      continue;
    }
    Tuple o;
    o.values.reserve(u.set.size());
    for (const auto& item : u.set) o.values.push_back(item.expr.eval(r.schema(), t));
    std::vector<Summand> wrapped;
    for (const auto& s : ann.summands()) {
      TupleId tid = idOf(s);
      if (touched) touched->push_back(tid);
      wrapped.push_back(wrapOne({AnnotKind::Update, txn, time + 1, tid}, s));
    }
    out.addAnnotation(o, NormalForm(std::move(wrapped), K), K);
  }
  return out;
}

AnnotatedRelation applyDelete(const DeleteSpec& d, VersionId time, TxnId txn,
                              const AnnotatedRelation& r, const BaseSemiring& K,
                              std::vector<TupleId>* touched) {
  d.where.check(r.schema());
  AnnotatedRelation out(r.schema());
  for (const auto& [t, ann] : r.rows()) {
    if (!d.where.eval(r.schema(), t)) {
      out.addAnnotation(t, ann, K);
      continue;
    }
    // Deleted tuple versions stay attached to the tuple they had, with the
    // delete recorded as one more derivation layer.
    std::vector<Summand> wrapped;
    for (const auto& s : ann.summands()) {
      TupleId tid = idOf(s);
      if (touched) touched->push_back(tid);
      wrapped.push_back(wrapOne({AnnotKind::Delete, txn, time + 1, tid}, s));
    }
    out.addAnnotation(t, NormalForm(std::move(wrapped), K), K);
  }
  return out;
}

AnnotatedRelation applyInsert(const InsertSpec& ins, VersionId time, TxnId txn,
                              const AnnotatedRelation& r, const Database& visibleDb,
                              const BaseSemiring& K, IdAllocator& alloc) {
  EvalContext ctx;
  ctx.K = &K;
  ctx.resolve = [&visibleDb](const std::string& name,
                             const std::optional<VersionId>&)
      -> const AnnotatedRelation* {
    auto it = visibleDb.find(name);
    return it == visibleDb.end() ? nullptr : &it->second;
  };
  AnnotatedRelation q = evalPlan(ins.query, ctx);
  if (!q.schema().sameAttributes(r.schema()))
    throw SchemaError("insert query schema does not match relation " + ins.rel);

  AnnotatedRelation out = r;
  size_t index = 0;
  for (const auto& [t, ann] : q.rows()) {
    std::vector<Summand> wrapped;
    for (const auto& s : ann.summands()) {
      TupleId tid = alloc.idFor(time + 1, index++);
      Summand body = s;
      if (K.id() == SemiringId::ProvPoly && body.factors.empty() &&
          body.mono.isOne()) {
        Monomial m;
        m.vars[static_cast<uint32_t>(tid)] = 1;
        body.mono = m;
      }
      wrapped.push_back(wrapOne({AnnotKind::Insert, txn, time + 1, tid}, body));
    }
    out.addAnnotation(t, NormalForm(std::move(wrapped), K), K);
  }
  return out;
}

AnnotatedRelation applyCommit(TxnId txn, VersionId time,
                              const AnnotatedRelation& r, const BaseSemiring& K) {
  AnnotatedRelation out(r.schema());
  for (const auto& [t, ann] : r.rows()) {
    std::vector<Summand> committed;
    for (const auto& s : ann.summands()) committed.push_back(doCommit(txn, time, s));
    out.addAnnotation(t, NormalForm(std::move(committed), K), K);
  }
  return out;
}

// ---------------------------------------------------------------------------
// HistoryState
// ---------------------------------------------------------------------------

HistoryState::HistoryState(const History& h, const BaseSemiring& K)
    : h_(&h), K_(&K) {
  h.validate();
  horizon_ = h.horizon();
  // Drive evaluation in time order so fresh ids are assigned deterministically
  // and write locks are checked in schedule order.
  for (const Operation* op : h.operationsInOrder()) {
    if (op->isWrite()) {
      relationInTxn(op->targetRel(), op->txn, op->time + 1);
    } else {
      for (const auto& [rel, schema] : h.schemas())
        relationInTxn(rel, op->txn, op->time + 1);
      for (auto it = lockOwner_.begin(); it != lockOwner_.end();) {
        if (it->second == op->txn)
          it = lockOwner_.erase(it);
        else
          ++it;
      }
    }
  }
  for (const auto& [rel, schema] : h.schemas()) committedAt(rel, horizon_ + 1);
  frozen_ = true;
}

const AnnotatedRelation& HistoryState::emptyRel(const std::string& rel) {
  auto it = empties_.find(rel);
  if (it == empties_.end())
    it = empties_.emplace(rel, AnnotatedRelation(h_->schemaOf(rel))).first;
  return it->second;
}

void HistoryState::acquireLock(TupleId id, TxnId txn, VersionId time) {
  auto it = lockOwner_.find(id);
  if (it != lockOwner_.end() && it->second != txn)
    throw LockViolationError(
        "write lock violation at version " + std::to_string(time) + ": T" +
        std::to_string(txn) + " writes tuple id " + std::to_string(id) +
        " locked by uncommitted T" + std::to_string(it->second));
  lockOwner_[id] = txn;
}

TupleId HistoryState::idFor(VersionId annotTime, size_t index) {
  auto key = std::make_pair(annotTime, index);
  auto it = idAssignment_.find(key);
  if (it != idAssignment_.end()) return it->second;
  if (frozen_)
    throw HistoryError("no tuple id recorded for insert at version " +
                       std::to_string(annotTime) + ", row " +
                       std::to_string(index));
  TupleId id = nextId_++;
  idAssignment_.emplace(key, id);
  return id;
}

const AnnotatedRelation& HistoryState::relationInTxn(const std::string& rel,
                                                     TxnId txn, VersionId nu) {
  auto key = std::make_tuple(rel, txn, nu);
  auto it = memoTxn_.find(key);
  if (it != memoTxn_.end()) return it->second;

  const Transaction& t = h_->transaction(txn);
  h_->schemaOf(rel);
  AnnotatedRelation result;
  if (nu < t.start()) {
    result = emptyRel(rel);
  } else if (nu == t.start()) {
    result = committedAt(rel, nu);
  } else {
    // write on rel at nu-1 (and nu-1 is not the commit)?
    const Operation* writeOp = nullptr;
    if (t.finish() != nu - 1)
      for (const auto& op : t.ops)
        if (op.time == nu - 1 && op.isWrite() && op.targetRel() == rel)
          writeOp = &op;
    if (writeOp) {
      const AnnotatedRelation& in = visibleToUpdate(rel, txn, nu - 1);
      if (const auto* u = std::get_if<UpdateSpec>(&writeOp->body)) {
        std::vector<TupleId> touched;
        result = applyUpdate(*u, nu - 1, txn, in, *K_, &touched);
        for (TupleId id : touched) acquireLock(id, txn, nu - 1);
      } else if (const auto* d = std::get_if<DeleteSpec>(&writeOp->body)) {
        std::vector<TupleId> touched;
        result = applyDelete(*d, nu - 1, txn, in, *K_, &touched);
        for (TupleId id : touched) acquireLock(id, txn, nu - 1);
      } else {
        const auto& ins = std::get<InsertSpec>(writeOp->body);
        // Insert queries read the committed snapshot as of the statement.
        Database db = committedDatabaseAt(nu - 1);
        result = applyInsert(ins, nu - 1, txn, in, db, *K_, *this);
      }
    } else if (t.finish() == nu - 1) {
      result = applyCommit(txn, nu - 1, relationInTxn(rel, txn, nu - 1), *K_);
    } else {
      result = relationInTxn(rel, txn, nu - 1);
    }
  }
  return memoTxn_.emplace(std::move(key), std::move(result)).first->second;
}

bool HistoryState::validIn(TxnId txn, const Summand& k) const {
  if (k.factors.size() != 1) return false;
  const VersionAnnotation& a = k.factors[0].ann;
  return a.txn == txn && a.kind != AnnotKind::Commit;
}

bool HistoryState::updatedBefore(TxnId txn, const std::string& rel,
                                 const Summand& k, VersionId nu) {
  if (!isVersioned(k)) return false;
  const Transaction& t = h_->transaction(txn);
  for (const auto& op : t.ops) {
    if (!op.isWrite() || op.time >= nu || op.targetRel() != rel) continue;
    bool isUpdate = std::holds_alternative<UpdateSpec>(op.body);
    bool isDelete = std::holds_alternative<DeleteSpec>(op.body);
    if (!isUpdate && !isDelete) continue;
    AnnotKind kind = isUpdate ? AnnotKind::Update : AnnotKind::Delete;
    Summand successor =
        wrapOne({kind, txn, op.time + 1, idOf(k)}, k);
    const AnnotatedRelation& after = relationInTxn(rel, txn, op.time + 1);
    for (const auto& [t2, ann] : after.rows())
      for (const auto& s : ann.summands())
        if (compareSummandShape(s, successor) == 0) return true;
  }
  return false;
}

bool HistoryState::validEx(TxnId txn, const std::string& rel, const Summand& k,
                           VersionId nu) {
  return !updatedBefore(txn, rel, k, nu);
}

bool HistoryState::validAt(TxnId txn, const std::string& rel, const Summand& k,
                           VersionId nu) {
  if (k.factors.size() != 1) return false;
  const VersionAnnotation& a = k.factors[0].ann;
  if (a.kind != AnnotKind::Commit || a.txn != txn) return false;
  for (const auto& [otherId, other] : h_->transactions()) {
    if (otherId == txn || other.finish() > nu) continue;
    if (updatedBefore(otherId, rel, k, nu)) return false;
  }
  return true;
}

const AnnotatedRelation& HistoryState::visibleToUpdate(const std::string& rel,
                                                       TxnId txn, VersionId nu) {
  auto key = std::make_tuple(rel, txn, nu);
  auto it = memoVisible_.find(key);
  if (it != memoVisible_.end()) return it->second;

  AnnotatedRelation out(h_->schemaOf(rel));
  const AnnotatedRelation& committed = committedAt(rel, nu);
  for (const auto& [t, ann] : committed.rows()) {
    std::vector<Summand> keep;
    for (const auto& s : ann.summands())
      if (validEx(txn, rel, s, nu)) keep.push_back(s);
    out.addAnnotation(t, NormalForm(std::move(keep), *K_), *K_);
  }
  const AnnotatedRelation& own = relationInTxn(rel, txn, nu);
  for (const auto& [t, ann] : own.rows()) {
    std::vector<Summand> keep;
    for (const auto& s : ann.summands())
      if (validIn(txn, s)) keep.push_back(s);
    out.addAnnotation(t, NormalForm(std::move(keep), *K_), *K_);
  }
  return memoVisible_.emplace(std::move(key), std::move(out)).first->second;
}

const AnnotatedRelation& HistoryState::committedAt(const std::string& rel,
                                                   VersionId nu) {
  auto key = std::make_pair(rel, nu);
  auto it = memoCommitted_.find(key);
  if (it != memoCommitted_.end()) return it->second;

  AnnotatedRelation out(h_->schemaOf(rel));
  for (const auto& [txnId, t] : h_->transactions()) {
    if (t.finish() >= nu) continue;
    const AnnotatedRelation& view = relationInTxn(rel, txnId, nu);
    for (const auto& [tup, ann] : view.rows()) {
      std::vector<Summand> keep;
      for (const auto& s : ann.summands())
        if (validAt(txnId, rel, s, nu)) keep.push_back(s);
      out.addAnnotation(tup, NormalForm(std::move(keep), *K_), *K_);
    }
  }
  return memoCommitted_.emplace(std::move(key), std::move(out)).first->second;
}

Database HistoryState::committedDatabaseAt(VersionId nu) {
  Database db;
  for (const auto& [rel, schema] : h_->schemas()) db.emplace(rel, committedAt(rel, nu));
  return db;
}

}  // namespace reenact
