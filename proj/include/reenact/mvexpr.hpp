#ifndef REENACT_MVEXPR_HPP
#define REENACT_MVEXPR_HPP

#include <memory>
#include <string>
#include <vector>

#include "reenact/base.hpp"
#include "reenact/semiring.hpp"

namespace reenact {

enum class AnnotKind : uint8_t { Insert, Update, Delete, Commit };

char annotKindLetter(AnnotKind k);

// One derivation layer: operation kind, transaction, the version at which the
// produced tuple version becomes current (operation time + 1), and the id of
// the affected tuple version.
struct VersionAnnotation {
  AnnotKind kind;
  TxnId txn;
  VersionId time;
  TupleId tid;

  bool operator==(const VersionAnnotation&) const = default;
};

// Order used everywhere a deterministic total order over annotations is
// needed: (time, txn, kind, tid).
int compareAnnotation(const VersionAnnotation& a, const VersionAnnotation& b);

// Symbolic annotation expression: a base-semiring element, a sum, a product,
// or a version annotation wrapped around a subexpression. Immutable; nodes
// are shared.
class AnnotExpr {
public:
  enum class Tag { Base, Add, Mul, Wrap };

  static AnnotExpr base(BaseElem k);
  static AnnotExpr add(AnnotExpr l, AnnotExpr r);
  static AnnotExpr mul(AnnotExpr l, AnnotExpr r);
  static AnnotExpr wrap(VersionAnnotation a, AnnotExpr child);

  Tag tag() const;
  const BaseElem& baseElem() const;          // Tag::Base
  AnnotExpr left() const;                    // Add/Mul
  AnnotExpr right() const;                   // Add/Mul
  const VersionAnnotation& annotation() const;  // Wrap
  AnnotExpr child() const;                   // Wrap

  std::string render() const;

private:
  struct Node;
  explicit AnnotExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct Summand;

// One annotation-wrapped factor of an addition-free product.
struct WrappedFactor {
  VersionAnnotation ann;
  std::shared_ptr<const Summand> inner;  // inner->coeff is always 1
};

// One addition-free term of a normal form: coeff * mono * factors. The
// natural-number coefficient doubles as bag multiplicity; the monomial part
// is empty outside the provenance-polynomial semiring. Factors are sorted
// canonically so that product order is irrelevant.
struct Summand {
  uint64_t coeff = 1;
  Monomial mono;
  std::vector<WrappedFactor> factors;
};

int compareSummand(const Summand& a, const Summand& b);
// compare ignoring the coefficient (the merge key)
int compareSummandShape(const Summand& a, const Summand& b);
bool summandEqual(const Summand& a, const Summand& b);

// Canonical sum of addition-free summands: sorted, merged, zero-free.
class NormalForm {
public:
  NormalForm() : semiring_(SemiringId::Nat) {}
  NormalForm(std::vector<Summand> summands, const BaseSemiring& K);  // canonicalizes

  size_t numSummands() const { return summands_.size(); }
  const Summand& summandAt(size_t i) const;
  const std::vector<Summand>& summands() const { return summands_; }
  bool isZero() const { return summands_.empty(); }
  SemiringId semiring() const { return semiring_; }

  AnnotExpr toExpr() const;
  std::string render() const;

  bool operator==(const NormalForm& o) const;

private:
  std::vector<Summand> summands_;
  SemiringId semiring_;
};

NormalForm normalize(const AnnotExpr& e, const BaseSemiring& K);
bool equivalent(const AnnotExpr& a, const AnnotExpr& b, const BaseSemiring& K);

std::string renderSummand(const Summand& s, const BaseSemiring& K);
AnnotExpr summandToExpr(const Summand& s, const BaseSemiring& K);

// Accessors over admissible summands (exactly one factor, annotation on the
// outside). Throw NotAdmissibleError otherwise.
TupleId idOf(const Summand& s);
VersionId versionOf(const Summand& s);
const VersionAnnotation& outermostAnnotation(const Summand& s);

// True iff the summand is a single annotation-wrapped factor (idOf/versionOf
// are defined on it).
bool isVersioned(const Summand& s);

// Commit operation on one summand: wraps it in C[T,commitTime+1,id] when its
// outermost annotation is an uncommitted operation of T, otherwise identity.
Summand doCommit(TxnId txn, VersionId commitTime, const Summand& s);

// True iff the summand's outermost annotation was produced by txn.
bool hasCreated(TxnId txn, const Summand& s);

// True iff a delete layer occurs anywhere in the summand's derivation; such
// tuple versions carry history but no live row.
bool containsDelete(const Summand& s);

// Applies a base-semiring homomorphism underneath all version annotations.
AnnotExpr applyLifted(const BaseHom& h, const AnnotExpr& e);
NormalForm applyLifted(const BaseHom& h, const NormalForm& n);

// Parses the textual rendering produced by NormalForm::render / AnnotExpr::render.
AnnotExpr parseAnnotation(const std::string& text, const BaseSemiring& K);

}  // namespace reenact

#endif
