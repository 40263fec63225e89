#include "reenact/mvexpr.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace reenact {

char annotKindLetter(AnnotKind k) {
  switch (k) {
    case AnnotKind::Insert: return 'I';
    case AnnotKind::Update: return 'U';
    case AnnotKind::Delete: return 'D';
    case AnnotKind::Commit: return 'C';
  }
  return '?';
}

int compareAnnotation(const VersionAnnotation& a, const VersionAnnotation& b) {
  if (a.time != b.time) return a.time < b.time ? -1 : 1;
  if (a.txn != b.txn) return a.txn < b.txn ? -1 : 1;
  if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
  if (a.tid != b.tid) return a.tid < b.tid ? -1 : 1;
  return 0;
}

struct AnnotExpr::Node {
  Tag tag;
  BaseElem base;
  VersionAnnotation ann{};
  std::shared_ptr<const Node> l, r, c;
};

AnnotExpr AnnotExpr::base(BaseElem k) {
  auto n = std::make_shared<Node>();
  n->tag = Tag::Base;
  n->base = std::move(k);
  return AnnotExpr(std::move(n));
}

AnnotExpr AnnotExpr::add(AnnotExpr l, AnnotExpr r) {
  auto n = std::make_shared<Node>();
  n->tag = Tag::Add;
  n->l = std::move(l.node_);
  n->r = std::move(r.node_);
  return AnnotExpr(std::move(n));
}

AnnotExpr AnnotExpr::mul(AnnotExpr l, AnnotExpr r) {
  auto n = std::make_shared<Node>();
  n->tag = Tag::Mul;
  n->l = std::move(l.node_);
  n->r = std::move(r.node_);
  return AnnotExpr(std::move(n));
}

AnnotExpr AnnotExpr::wrap(VersionAnnotation a, AnnotExpr child) {
  auto n = std::make_shared<Node>();
  n->tag = Tag::Wrap;
  n->ann = a;
  n->c = std::move(child.node_);
  return AnnotExpr(std::move(n));
}

AnnotExpr::Tag AnnotExpr::tag() const { return node_->tag; }
const BaseElem& AnnotExpr::baseElem() const { return node_->base; }
AnnotExpr AnnotExpr::left() const { return AnnotExpr(node_->l); }
AnnotExpr AnnotExpr::right() const { return AnnotExpr(node_->r); }
const VersionAnnotation& AnnotExpr::annotation() const { return node_->ann; }
AnnotExpr AnnotExpr::child() const { return AnnotExpr(node_->c); }

static std::string renderAnnHead(const VersionAnnotation& a) {
  std::ostringstream os;
  os << annotKindLetter(a.kind) << "[T" << a.txn << "," << a.time << "," << a.tid
     << "]";
  return os.str();
}

std::string AnnotExpr::render() const {
  switch (tag()) {
    case Tag::Base: {
      std::string s = renderBaseElem(baseElem());
      if (s.find(" + ") != std::string::npos) return "(" + s + ")";
      return s;
    }
    case Tag::Add:
      return left().render() + " + " + right().render();
    case Tag::Mul: {
      auto part = [](const AnnotExpr& e) {
        std::string s = e.render();
        if (e.tag() == Tag::Add) return "(" + s + ")";
        return s;
      };
      return part(left()) + " * " + part(right());
    }
    case Tag::Wrap:
      return renderAnnHead(annotation()) + "(" + child().render() + ")";
  }
  return "?";
}

int compareSummand(const Summand& a, const Summand& b) {
  int c = compareSummandShape(a, b);
  if (c != 0) return c;
  if (a.coeff != b.coeff) return a.coeff < b.coeff ? -1 : 1;
  return 0;
}

int compareSummandShape(const Summand& a, const Summand& b) {
  size_t n = std::min(a.factors.size(), b.factors.size());
  for (size_t i = 0; i < n; ++i) {
    int c = compareAnnotation(a.factors[i].ann, b.factors[i].ann);
    if (c != 0) return c;
    c = compareSummand(*a.factors[i].inner, *b.factors[i].inner);
    if (c != 0) return c;
  }
  if (a.factors.size() != b.factors.size())
    return a.factors.size() < b.factors.size() ? -1 : 1;
  if (a.mono != b.mono) return a.mono < b.mono ? -1 : 1;
  return 0;
}

bool summandEqual(const Summand& a, const Summand& b) {
  return compareSummand(a, b) == 0;
}

static void sortFactors(Summand& s) {
  std::sort(s.factors.begin(), s.factors.end(),
            [](const WrappedFactor& a, const WrappedFactor& b) {
              int c = compareAnnotation(a.ann, b.ann);
              if (c != 0) return c < 0;
              return compareSummand(*a.inner, *b.inner) < 0;
            });
}

static std::vector<Summand> canonicalize(std::vector<Summand> v,
                                         const BaseSemiring& K) {
  std::vector<Summand> out;
  out.reserve(v.size());
  for (auto& s : v)
    if (s.coeff != 0) out.push_back(std::move(s));
  std::sort(out.begin(), out.end(),
            [](const Summand& a, const Summand& b) { return compareSummand(a, b) < 0; });
  std::vector<Summand> merged;
  for (auto& s : out) {
    if (!merged.empty() && compareSummandShape(merged.back(), s) == 0) {
      if (K.id() == SemiringId::Bool)
        merged.back().coeff = 1;
      else
        merged.back().coeff += s.coeff;
    } else {
      merged.push_back(std::move(s));
    }
  }
  return merged;
}

// Normalizes an expression into a list of addition-free summands. Sums are
// pushed to the top, products distributed, and natural-number multiplicities
// pulled out of annotation wrappers into the summand coefficient (an
// annotation over an n-fold sum splits into n equal summands which re-merge
// with coefficient n).
static std::vector<Summand> normSummands(const AnnotExpr& e, const BaseSemiring& K) {
  switch (e.tag()) {
    case AnnotExpr::Tag::Base: {
      const BaseElem& k = e.baseElem();
      if (!K.contains(k))
        throw TypeMismatchError("annotation leaf of wrong semiring carrier");
      std::vector<Summand> v;
      switch (K.id()) {
        case SemiringId::Nat: {
          uint64_t n = std::get<uint64_t>(k);
          if (n > 0) v.push_back(Summand{n, Monomial{}, {}});
          break;
        }
        case SemiringId::Bool: {
          if (std::get<bool>(k)) v.push_back(Summand{1, Monomial{}, {}});
          break;
        }
        case SemiringId::ProvPoly: {
          for (const auto& [m, c] : std::get<Polynomial>(k).terms)
            v.push_back(Summand{c, m, {}});
          break;
        }
      }
      return v;
    }
    case AnnotExpr::Tag::Add: {
      std::vector<Summand> v = normSummands(e.left(), K);
      std::vector<Summand> r = normSummands(e.right(), K);
      v.insert(v.end(), std::make_move_iterator(r.begin()),
               std::make_move_iterator(r.end()));
      return v;
    }
    case AnnotExpr::Tag::Mul: {
      std::vector<Summand> ls = normSummands(e.left(), K);
      std::vector<Summand> rs = normSummands(e.right(), K);
      std::vector<Summand> v;
      v.reserve(ls.size() * rs.size());
      for (const auto& a : ls)
        for (const auto& b : rs) {
          Summand s;
          s.coeff = K.id() == SemiringId::Bool ? 1 : a.coeff * b.coeff;
          s.mono = a.mono * b.mono;
          s.factors = a.factors;
          s.factors.insert(s.factors.end(), b.factors.begin(), b.factors.end());
          sortFactors(s);
          v.push_back(std::move(s));
        }
      return v;
    }
    case AnnotExpr::Tag::Wrap: {
      std::vector<Summand> inner = normSummands(e.child(), K);
      std::vector<Summand> v;
      v.reserve(inner.size());
      for (auto& s : inner) {
        auto in = std::make_shared<Summand>();
        in->coeff = 1;
        in->mono = s.mono;
        in->factors = std::move(s.factors);
        Summand w;
        w.coeff = s.coeff;
        w.factors.push_back(WrappedFactor{e.annotation(), std::move(in)});
        v.push_back(std::move(w));
      }
      return v;
    }
  }
  return {};
}

NormalForm::NormalForm(std::vector<Summand> summands, const BaseSemiring& K)
    : summands_(canonicalize(std::move(summands), K)), semiring_(K.id()) {}

const Summand& NormalForm::summandAt(size_t i) const {
  if (i >= summands_.size())
    throw IndexError("summand index " + std::to_string(i) + " out of range (" +
                     std::to_string(summands_.size()) + " summands)");
  return summands_[i];
}

bool NormalForm::operator==(const NormalForm& o) const {
  if (summands_.size() != o.summands_.size()) return false;
  for (size_t i = 0; i < summands_.size(); ++i)
    if (!summandEqual(summands_[i], o.summands_[i])) return false;
  return true;
}

NormalForm normalize(const AnnotExpr& e, const BaseSemiring& K) {
  return NormalForm(normSummands(e, K), K);
}

bool equivalent(const AnnotExpr& a, const AnnotExpr& b, const BaseSemiring& K) {
  return normalize(a, K) == normalize(b, K);
}

AnnotExpr summandToExpr(const Summand& s, const BaseSemiring& K) {
  AnnotExpr acc = AnnotExpr::base(K.one());
  bool have = false;
  // scalar part
  if (K.id() == SemiringId::ProvPoly) {
    if (s.coeff != 1 || !s.mono.isOne()) {
      Polynomial p;
      p.terms[s.mono] = s.coeff;
      acc = AnnotExpr::base(p);
      have = true;
    }
  } else if (K.id() == SemiringId::Nat) {
    if (s.coeff != 1) {
      acc = AnnotExpr::base(uint64_t{s.coeff});
      have = true;
    }
  }
  for (const auto& f : s.factors) {
    AnnotExpr w = AnnotExpr::wrap(f.ann, summandToExpr(*f.inner, K));
    acc = have ? AnnotExpr::mul(acc, w) : w;
    have = true;
  }
  return acc;
}

AnnotExpr NormalForm::toExpr() const {
  const BaseSemiring& K = BaseSemiring::byId(semiring_);
  if (summands_.empty()) return AnnotExpr::base(K.zero());
  AnnotExpr acc = summandToExpr(summands_[0], K);
  for (size_t i = 1; i < summands_.size(); ++i)
    acc = AnnotExpr::add(acc, summandToExpr(summands_[i], K));
  return acc;
}

std::string renderSummand(const Summand& s, const BaseSemiring& K) {
  std::vector<std::string> parts;
  if (K.id() == SemiringId::ProvPoly) {
    if (s.coeff != 1 || !s.mono.isOne()) {
      Polynomial p;
      p.terms[s.mono] = s.coeff;
      parts.push_back(p.render());
    }
  } else if (K.id() == SemiringId::Nat) {
    if (s.coeff != 1) parts.push_back(std::to_string(s.coeff));
  }
  for (const auto& f : s.factors)
    parts.push_back(renderAnnHead(f.ann) + "(" + renderSummand(*f.inner, K) + ")");
  if (parts.empty())
    return K.id() == SemiringId::Bool ? "true" : "1";
  std::string out = parts[0];
  for (size_t i = 1; i < parts.size(); ++i) out += " * " + parts[i];
  return out;
}

std::string NormalForm::render() const {
  const BaseSemiring& K = BaseSemiring::byId(semiring_);
  if (summands_.empty()) return K.id() == SemiringId::Bool ? "false" : "0";
  std::string out = renderSummand(summands_[0], K);
  for (size_t i = 1; i < summands_.size(); ++i)
    out += " + " + renderSummand(summands_[i], K);
  return out;
}

const VersionAnnotation& outermostAnnotation(const Summand& s) {
  if (s.factors.size() != 1)
    throw NotAdmissibleError(
        "summand has no unique outermost version annotation");
  return s.factors[0].ann;
}

TupleId idOf(const Summand& s) { return outermostAnnotation(s).tid; }
VersionId versionOf(const Summand& s) { return outermostAnnotation(s).time; }

bool isVersioned(const Summand& s) { return s.factors.size() == 1; }

Summand doCommit(TxnId txn, VersionId commitTime, const Summand& s) {
  if (s.factors.size() != 1) return s;
  const VersionAnnotation& a = s.factors[0].ann;
  if (a.txn != txn || a.kind == AnnotKind::Commit) return s;
  auto in = std::make_shared<Summand>();
  in->coeff = 1;
  in->mono = s.mono;
  in->factors = s.factors;
  Summand out;
  out.coeff = s.coeff;
  out.factors.push_back(WrappedFactor{
      VersionAnnotation{AnnotKind::Commit, txn, commitTime + 1, a.tid},
      std::move(in)});
  return out;
}

bool hasCreated(TxnId txn, const Summand& s) {
  return s.factors.size() == 1 && s.factors[0].ann.txn == txn;
}

bool containsDelete(const Summand& s) {
  for (const auto& f : s.factors) {
    if (f.ann.kind == AnnotKind::Delete) return true;
    if (containsDelete(*f.inner)) return true;
  }
  return false;
}

AnnotExpr applyLifted(const BaseHom& h, const AnnotExpr& e) {
  switch (e.tag()) {
    case AnnotExpr::Tag::Base:
      return AnnotExpr::base(h.apply(e.baseElem()));
    case AnnotExpr::Tag::Add:
      return AnnotExpr::add(applyLifted(h, e.left()), applyLifted(h, e.right()));
    case AnnotExpr::Tag::Mul:
      return AnnotExpr::mul(applyLifted(h, e.left()), applyLifted(h, e.right()));
    case AnnotExpr::Tag::Wrap:
      return AnnotExpr::wrap(e.annotation(), applyLifted(h, e.child()));
  }
  throw Error("unreachable expr tag");
}

NormalForm applyLifted(const BaseHom& h, const NormalForm& n) {
  return normalize(applyLifted(h, n.toExpr()), BaseSemiring::byId(h.target()));
}

namespace {

// Recursive-descent parser for the textual annotation format.
class AnnotParser {
public:
  AnnotParser(const std::string& text, const BaseSemiring& K) : s_(text), K_(K) {}

  AnnotExpr parse() {
    AnnotExpr e = parseSum();
    skipWs();
    if (pos_ != s_.size()) fail("end of input");
    return e;
  }

private:
  [[noreturn]] void fail(const std::string& expected) {
    throw ParseError(1, pos_ + 1, expected,
                     "annotation parse error at offset " + std::to_string(pos_) +
                         ": expected " + expected);
  }

  void skipWs() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }

  bool eat(char c) {
    skipWs();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!eat(c)) fail(std::string("'") + c + "'");
  }

  uint64_t parseInt() {
    skipWs();
    size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
    if (start == pos_) fail("integer");
    return std::stoull(s_.substr(start, pos_ - start));
  }

  AnnotExpr parseSum() {
    AnnotExpr e = parseProduct();
    while (eat('+')) e = AnnotExpr::add(e, parseProduct());
    return e;
  }

  AnnotExpr parseProduct() {
    AnnotExpr e = parseAtom();
    while (eat('*')) e = AnnotExpr::mul(e, parseAtom());
    return e;
  }

  AnnotExpr parseAtom() {
    skipWs();
    if (pos_ >= s_.size()) fail("annotation atom");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      AnnotExpr e = parseSum();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      uint64_t n = parseInt();
      switch (K_.id()) {
        case SemiringId::Nat: return AnnotExpr::base(uint64_t{n});
        case SemiringId::Bool: return AnnotExpr::base(n != 0);
        case SemiringId::ProvPoly:
          return AnnotExpr::base(Polynomial::constant(n));
      }
    }
    if ((c == 'I' || c == 'U' || c == 'D' || c == 'C') && pos_ + 1 < s_.size() &&
        s_[pos_ + 1] == '[') {
      AnnotKind kind = c == 'I'   ? AnnotKind::Insert
                       : c == 'U' ? AnnotKind::Update
                       : c == 'D' ? AnnotKind::Delete
                                  : AnnotKind::Commit;
      pos_ += 2;
      skipWs();
      if (pos_ >= s_.size() || s_[pos_] != 'T') fail("'T'");
      ++pos_;
      TxnId txn = static_cast<TxnId>(parseInt());
      expect(',');
      VersionId time = parseInt();
      expect(',');
      TupleId tid = parseInt();
      expect(']');
      expect('(');
      AnnotExpr inner = parseSum();
      expect(')');
      return AnnotExpr::wrap(VersionAnnotation{kind, txn, time, tid}, inner);
    }
    if (c == 'x' && pos_ + 1 < s_.size() &&
        std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]))) {
      ++pos_;
      uint32_t idx = static_cast<uint32_t>(parseInt());
      AnnotExpr v = AnnotExpr::base(Polynomial::variable(idx));
      if (eat('^')) {
        uint64_t e = parseInt();
        if (e == 0) fail("positive exponent");
        AnnotExpr acc = v;
        for (uint64_t i = 1; i < e; ++i) acc = AnnotExpr::mul(acc, v);
        return acc;
      }
      return v;
    }
    if (s_.compare(pos_, 4, "true") == 0) {
      pos_ += 4;
      return AnnotExpr::base(true);
    }
    if (s_.compare(pos_, 5, "false") == 0) {
      pos_ += 5;
      return AnnotExpr::base(false);
    }
    fail("annotation atom");
  }

  const std::string& s_;
  const BaseSemiring& K_;
  size_t pos_ = 0;
};

}  // namespace

AnnotExpr parseAnnotation(const std::string& text, const BaseSemiring& K) {
  return AnnotParser(text, K).parse();
}

}  // namespace reenact
