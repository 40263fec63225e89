#include "reenact/plan.hpp"

#include <set>
#include <sstream>

namespace reenact {

struct QueryPlan::Node {
  Tag tag;
  std::string rel;
  std::optional<VersionId> at;
  Schema schema;
  std::shared_ptr<const Condition> cond;
  ProjExprList proj;
  std::shared_ptr<const Node> l, r, c;
  Tuple tuple;
  BaseElem annot;
  AnnotKind kind = AnnotKind::Insert;
  TxnId txn = 0;
  VersionId time = 0;
};

QueryPlan QueryPlan::baseRel(std::string name) {
  auto n = std::make_shared<Node>();
  n->tag = Tag::BaseRel;
  n->rel = std::move(name);
  return QueryPlan(std::move(n));
}

QueryPlan QueryPlan::committedAt(std::string name, VersionId at) {
  auto n = std::make_shared<Node>();
  n->tag = Tag::BaseRel;
  n->rel = std::move(name);
  n->at = at;
  return QueryPlan(std::move(n));
}

QueryPlan QueryPlan::emptyRel(Schema schema) {
  auto n = std::make_shared<Node>();
  n->tag = Tag::EmptyRel;
  n->schema = std::move(schema);
  return QueryPlan(std::move(n));
}

QueryPlan QueryPlan::select(Condition cond, QueryPlan child) {
  auto n = std::make_shared<Node>();
  n->tag = Tag::Select;
  n->cond = std::make_shared<Condition>(std::move(cond));
  n->c = std::move(child.node_);
  return QueryPlan(std::move(n));
}

QueryPlan QueryPlan::project(ProjExprList items, QueryPlan child) {
  auto n = std::make_shared<Node>();
  n->tag = Tag::Project;
  n->proj = std::move(items);
  n->c = std::move(child.node_);
  return QueryPlan(std::move(n));
}

QueryPlan QueryPlan::join(QueryPlan l, QueryPlan r) {
  auto n = std::make_shared<Node>();
  n->tag = Tag::Join;
  n->l = std::move(l.node_);
  n->r = std::move(r.node_);
  return QueryPlan(std::move(n));
}

QueryPlan QueryPlan::unite(QueryPlan l, QueryPlan r) {
  auto n = std::make_shared<Node>();
  n->tag = Tag::Union;
  n->l = std::move(l.node_);
  n->r = std::move(r.node_);
  return QueryPlan(std::move(n));
}

QueryPlan QueryPlan::singleton(Schema schema, Tuple t, BaseElem k) {
  auto n = std::make_shared<Node>();
  n->tag = Tag::Singleton;
  n->schema = std::move(schema);
  n->tuple = std::move(t);
  n->annot = std::move(k);
  return QueryPlan(std::move(n));
}

QueryPlan QueryPlan::annotOp(AnnotKind kind, TxnId txn, VersionId time,
                             QueryPlan child) {
  auto n = std::make_shared<Node>();
  n->tag = Tag::AnnotOp;
  n->kind = kind;
  n->txn = txn;
  n->time = time;
  n->c = std::move(child.node_);
  return QueryPlan(std::move(n));
}

QueryPlan QueryPlan::versionMerge(QueryPlan l, QueryPlan r) {
  auto n = std::make_shared<Node>();
  n->tag = Tag::VersionMerge;
  n->l = std::move(l.node_);
  n->r = std::move(r.node_);
  return QueryPlan(std::move(n));
}

QueryPlan QueryPlan::versionFilter(Condition vcond, QueryPlan child) {
  auto n = std::make_shared<Node>();
  n->tag = Tag::VersionFilter;
  n->cond = std::make_shared<Condition>(std::move(vcond));
  n->c = std::move(child.node_);
  return QueryPlan(std::move(n));
}

QueryPlan::Tag QueryPlan::tag() const { return node_->tag; }
const std::string& QueryPlan::relName() const { return node_->rel; }
const std::optional<VersionId>& QueryPlan::relVersion() const { return node_->at; }
const Schema& QueryPlan::fixedSchema() const { return node_->schema; }
const Condition& QueryPlan::condition() const { return *node_->cond; }
const ProjExprList& QueryPlan::projection() const { return node_->proj; }
QueryPlan QueryPlan::left() const { return QueryPlan(node_->l); }
QueryPlan QueryPlan::right() const { return QueryPlan(node_->r); }
QueryPlan QueryPlan::child() const { return QueryPlan(node_->c); }
const Tuple& QueryPlan::singletonTuple() const { return node_->tuple; }
const BaseElem& QueryPlan::singletonAnnotation() const { return node_->annot; }
AnnotKind QueryPlan::annotKind() const { return node_->kind; }
TxnId QueryPlan::annotTxn() const { return node_->txn; }
VersionId QueryPlan::annotTime() const { return node_->time; }
const void* QueryPlan::key() const { return node_.get(); }

static void renderNode(const QueryPlan& p, std::ostringstream& os, int depth) {
  for (int i = 0; i < depth; ++i) os << "  ";
  switch (p.tag()) {
    case QueryPlan::Tag::BaseRel:
      if (p.relVersion())
        os << "CommittedAt[" << p.relName() << ", " << *p.relVersion() << "]\n";
      else
        os << "BaseRel[" << p.relName() << "]\n";
      return;
    case QueryPlan::Tag::EmptyRel:
      os << "Empty[" << p.fixedSchema().render() << "]\n";
      return;
    case QueryPlan::Tag::Select:
      os << "Select[" << p.condition().render() << "]\n";
      renderNode(p.child(), os, depth + 1);
      return;
    case QueryPlan::Tag::Project:
      os << "Project[" << renderProjection(p.projection()) << "]\n";
      renderNode(p.child(), os, depth + 1);
      return;
    case QueryPlan::Tag::Join:
      os << "Join\n";
      renderNode(p.left(), os, depth + 1);
      renderNode(p.right(), os, depth + 1);
      return;
    case QueryPlan::Tag::Union:
      os << "Union\n";
      renderNode(p.left(), os, depth + 1);
      renderNode(p.right(), os, depth + 1);
      return;
    case QueryPlan::Tag::Singleton:
      os << "Singleton[" << p.fixedSchema().relation << ", "
         << renderTuple(p.singletonTuple()) << ", "
         << renderBaseElem(p.singletonAnnotation()) << "]\n";
      return;
    case QueryPlan::Tag::AnnotOp:
      os << "AnnotOp[" << annotKindLetter(p.annotKind()) << ",T" << p.annotTxn()
         << "," << p.annotTime() << "]\n";
      renderNode(p.child(), os, depth + 1);
      return;
    case QueryPlan::Tag::VersionMerge:
      os << "VersionMerge\n";
      renderNode(p.left(), os, depth + 1);
      renderNode(p.right(), os, depth + 1);
      return;
    case QueryPlan::Tag::VersionFilter:
      os << "VersionFilter[" << p.condition().render() << "]\n";
      renderNode(p.child(), os, depth + 1);
      return;
  }
}

std::string QueryPlan::render() const {
  std::ostringstream os;
  renderNode(*this, os, 0);
  return os.str();
}

static void visitRec(const QueryPlan& p, std::set<const void*>& seen,
                     const std::function<void(const QueryPlan&)>& f) {
  if (!seen.insert(p.key()).second) return;
  f(p);
  switch (p.tag()) {
    case QueryPlan::Tag::Select:
    case QueryPlan::Tag::Project:
    case QueryPlan::Tag::AnnotOp:
    case QueryPlan::Tag::VersionFilter:
      visitRec(p.child(), seen, f);
      return;
    case QueryPlan::Tag::Join:
    case QueryPlan::Tag::Union:
    case QueryPlan::Tag::VersionMerge:
      visitRec(p.left(), seen, f);
      visitRec(p.right(), seen, f);
      return;
    default:
      return;
  }
}

void QueryPlan::visit(const std::function<void(const QueryPlan&)>& f) const {
  std::set<const void*> seen;
  visitRec(*this, seen, f);
}

std::map<std::string, size_t> committedAccessProfile(const QueryPlan& p) {
  std::map<std::string, size_t> out;
  p.visit([&](const QueryPlan& n) {
    if (n.tag() == QueryPlan::Tag::BaseRel && n.relVersion()) out[n.relName()]++;
  });
  return out;
}

}  // namespace reenact
