#include "reenact/eval.hpp"

#include <unordered_map>

namespace reenact {

TupleId CountingAllocator::idFor(VersionId annotTime, size_t index) {
  auto key = std::make_pair(annotTime, index);
  auto it = assigned_.find(key);
  if (it != assigned_.end()) return it->second;
  TupleId id = next_++;
  assigned_.emplace(key, id);
  return id;
}

NormalForm nfAdd(const NormalForm& a, const NormalForm& b, const BaseSemiring& K) {
  std::vector<Summand> v = a.summands();
  const auto& bs = b.summands();
  v.insert(v.end(), bs.begin(), bs.end());
  return NormalForm(std::move(v), K);
}

NormalForm nfMul(const NormalForm& a, const NormalForm& b, const BaseSemiring& K) {
  std::vector<Summand> v;
  v.reserve(a.numSummands() * b.numSummands());
  for (const auto& x : a.summands())
    for (const auto& y : b.summands()) {
      Summand s;
      s.coeff = K.id() == SemiringId::Bool ? 1 : x.coeff * y.coeff;
      s.mono = x.mono * y.mono;
      s.factors = x.factors;
      s.factors.insert(s.factors.end(), y.factors.begin(), y.factors.end());
      v.push_back(std::move(s));
    }
  return NormalForm(std::move(v), K);
}

AnnotatedRelation evalSelect(const Condition& theta, const AnnotatedRelation& r,
                             const BaseSemiring& K) {
  theta.check(r.schema());
  AnnotatedRelation out(r.schema());
  for (const auto& [t, ann] : r.rows())
    if (theta.eval(r.schema(), t)) out.setAnnotation(t, ann);
  (void)K;
  return out;
}

AnnotatedRelation evalProject(const ProjExprList& items, const AnnotatedRelation& r,
                              const BaseSemiring& K) {
  Schema outSchema;
  outSchema.relation = r.schema().relation;
  for (const auto& it : items)
    outSchema.attrs.push_back({it.name, it.expr.resultType(r.schema())});
  AnnotatedRelation out(outSchema);
  for (const auto& [t, ann] : r.rows()) {
    Tuple o;
    o.values.reserve(items.size());
    for (const auto& it : items) o.values.push_back(it.expr.eval(r.schema(), t));
    out.addAnnotation(o, ann, K);
  }
  return out;
}

AnnotatedRelation evalJoin(const AnnotatedRelation& l, const AnnotatedRelation& r,
                           const BaseSemiring& K) {
  Schema outSchema;
  outSchema.relation = l.schema().relation + "_x_" + r.schema().relation;
  outSchema.attrs = l.schema().attrs;
  for (const auto& a : r.schema().attrs) {
    if (outSchema.tryIndexOf(a.name))
      throw SchemaError("join operands share attribute '" + a.name + "'");
    outSchema.attrs.push_back(a);
  }
  AnnotatedRelation out(outSchema);
  for (const auto& [lt, lann] : l.rows())
    for (const auto& [rt, rann] : r.rows()) {
      Tuple t = lt;
      t.values.insert(t.values.end(), rt.values.begin(), rt.values.end());
      out.addAnnotation(t, nfMul(lann, rann, K), K);
    }
  return out;
}

AnnotatedRelation evalUnion(const AnnotatedRelation& l, const AnnotatedRelation& r,
                            const BaseSemiring& K) {
  if (!l.schema().sameAttributes(r.schema()))
    throw SchemaError("union operands have different schemas: " +
                      l.schema().render() + " vs " + r.schema().render());
  AnnotatedRelation out = l;
  for (const auto& [t, ann] : r.rows()) out.addAnnotation(t, ann, K);
  return out;
}

AnnotatedRelation evalSingleton(const Schema& schema, const Tuple& t,
                                const BaseElem& k, const BaseSemiring& K) {
  if (!K.contains(k))
    throw TypeMismatchError("singleton annotation must be a base-semiring element");
  AnnotatedRelation out(schema);
  NormalForm ann = normalize(AnnotExpr::base(k), K);
  if (!ann.isZero()) out.setAnnotation(t, ann);
  return out;
}

// Wraps one summand in a version annotation, pulling the natural-number
// multiplicity out of the wrapper.
static Summand wrapSummand(const VersionAnnotation& ann, const Summand& s) {
  auto in = std::make_shared<Summand>();
  in->coeff = 1;
  in->mono = s.mono;
  in->factors = s.factors;
  Summand out;
  out.coeff = s.coeff;
  out.factors.push_back(WrappedFactor{ann, std::move(in)});
  return out;
}

AnnotatedRelation evalAnnotOp(AnnotKind kind, TxnId txn, VersionId time,
                              const AnnotatedRelation& r, const BaseSemiring& K,
                              IdAllocator* allocator) {
  AnnotatedRelation out(r.schema());
  size_t insertIndex = 0;
  for (const auto& [t, ann] : r.rows()) {
    std::vector<Summand> wrapped;
    wrapped.reserve(ann.numSummands());
    for (const auto& s : ann.summands()) {
      switch (kind) {
        case AnnotKind::Commit:
          wrapped.push_back(doCommit(txn, time - 1, s));
          break;
        case AnnotKind::Update:
        case AnnotKind::Delete: {
          TupleId tid = idOf(s);  // throws NotAdmissible on unversioned input
          wrapped.push_back(wrapSummand({kind, txn, time, tid}, s));
          break;
        }
        case AnnotKind::Insert: {
          if (!allocator)
            throw Error("insert annotation requires an id allocator");
          TupleId tid = allocator->idFor(time, insertIndex++);
          Summand body = s;
          // Freshly inserted rows carry their own provenance variable; a row
          // built from a bare VALUES payload has none yet, so name it after
          // the new tuple id.
          if (K.id() == SemiringId::ProvPoly && body.factors.empty() &&
              body.mono.isOne()) {
            Monomial m;
            m.vars[static_cast<uint32_t>(tid)] = 1;
            body.mono = m;
          }
          wrapped.push_back(wrapSummand({kind, txn, time, tid}, body));
          break;
        }
      }
    }
    out.setAnnotation(t, NormalForm(std::move(wrapped), K));
  }
  return out;
}

bool isMax(const AnnotatedRelation& r, const Summand& s) {
  TupleId id = idOf(s);
  VersionId v = versionOf(s);
  for (const auto& [t, ann] : r.rows())
    for (const auto& o : ann.summands())
      if (idOf(o) == id && versionOf(o) > v) return false;
  return true;
}

bool isStrictMax(const AnnotatedRelation& r, const Summand& s) {
  TupleId id = idOf(s);
  VersionId v = versionOf(s);
  for (const auto& [t, ann] : r.rows())
    for (const auto& o : ann.summands())
      if (idOf(o) == id && versionOf(o) >= v) return false;
  return true;
}

AnnotatedRelation evalVersionMerge(const AnnotatedRelation& l,
                                   const AnnotatedRelation& r,
                                   const BaseSemiring& K) {
  if (!l.schema().sameAttributes(r.schema()))
    throw SchemaError("version merge operands have different schemas");
  AnnotatedRelation out(l.schema());
  for (const auto& [t, ann] : l.rows()) {
    std::vector<Summand> keep;
    for (const auto& s : ann.summands())
      if (isMax(r, s)) keep.push_back(s);
    out.addAnnotation(t, NormalForm(std::move(keep), K), K);
  }
  for (const auto& [t, ann] : r.rows()) {
    std::vector<Summand> keep;
    for (const auto& s : ann.summands())
      if (isStrictMax(l, s)) keep.push_back(s);
    out.addAnnotation(t, NormalForm(std::move(keep), K), K);
  }
  return out;
}

AnnotatedRelation evalVersionFilter(const Condition& vcond,
                                    const AnnotatedRelation& r,
                                    const BaseSemiring& K) {
  vcond.check(versionPseudoSchema());
  AnnotatedRelation out(r.schema());
  for (const auto& [t, ann] : r.rows()) {
    std::vector<Summand> keep;
    for (const auto& s : ann.summands()) {
      Tuple pseudo{{static_cast<int64_t>(versionOf(s))}};
      if (vcond.eval(versionPseudoSchema(), pseudo)) keep.push_back(s);
    }
    out.addAnnotation(t, NormalForm(std::move(keep), K), K);
  }
  return out;
}

namespace {

struct Evaluator {
  const EvalContext& ctx;
  std::unordered_map<const void*, AnnotatedRelation> memo;

  const AnnotatedRelation& eval(const QueryPlan& p) {
    auto it = memo.find(p.key());
    if (it != memo.end()) return it->second;
    AnnotatedRelation r = compute(p);
    return memo.emplace(p.key(), std::move(r)).first->second;
  }

  AnnotatedRelation compute(const QueryPlan& p) {
    const BaseSemiring& K = *ctx.K;
    switch (p.tag()) {
      case QueryPlan::Tag::BaseRel: {
        const AnnotatedRelation* r =
            ctx.resolve ? ctx.resolve(p.relName(), p.relVersion()) : nullptr;
        if (!r)
          throw UnboundRelationError("no binding for relation '" + p.relName() +
                                     "'");
        return *r;
      }
      case QueryPlan::Tag::EmptyRel:
        return AnnotatedRelation(p.fixedSchema());
      case QueryPlan::Tag::Select:
        return evalSelect(p.condition(), eval(p.child()), K);
      case QueryPlan::Tag::Project:
        return evalProject(p.projection(), eval(p.child()), K);
      case QueryPlan::Tag::Join:
        return evalJoin(eval(p.left()), eval(p.right()), K);
      case QueryPlan::Tag::Union:
        return evalUnion(eval(p.left()), eval(p.right()), K);
      case QueryPlan::Tag::Singleton:
        return evalSingleton(p.fixedSchema(), p.singletonTuple(),
                             p.singletonAnnotation(), K);
      case QueryPlan::Tag::AnnotOp:
        return evalAnnotOp(p.annotKind(), p.annotTxn(), p.annotTime(),
                           eval(p.child()), K, ctx.allocator);
      case QueryPlan::Tag::VersionMerge:
        return evalVersionMerge(eval(p.left()), eval(p.right()), K);
      case QueryPlan::Tag::VersionFilter:
        return evalVersionFilter(p.condition(), eval(p.child()), K);
    }
    throw Error("unreachable plan tag");
  }
};

}  // namespace

AnnotatedRelation evalPlan(const QueryPlan& p, const EvalContext& ctx) {
  Evaluator ev{ctx, {}};
  return ev.eval(p);
}

}  // namespace reenact
