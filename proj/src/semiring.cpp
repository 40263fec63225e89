#include "reenact/semiring.hpp"

#include <sstream>

namespace reenact {

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r = *this;
  for (const auto& [v, e] : o.vars) r.vars[v] += e;
  return r;
}

Polynomial Polynomial::constant(uint64_t c) {
  Polynomial p;
  if (c != 0) p.terms[Monomial{}] = c;
  return p;
}

Polynomial Polynomial::variable(uint32_t idx) {
  Polynomial p;
  Monomial m;
  m.vars[idx] = 1;
  p.terms[m] = 1;
  return p;
}

bool Polynomial::isOne() const {
  return terms.size() == 1 && terms.begin()->first.isOne() &&
         terms.begin()->second == 1;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial r = *this;
  for (const auto& [m, c] : o.terms) {
    auto it = r.terms.find(m);
    if (it == r.terms.end())
      r.terms[m] = c;
    else
      it->second += c;
  }
  return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  Polynomial r;
  for (const auto& [m1, c1] : terms)
    for (const auto& [m2, c2] : o.terms) {
      Monomial m = m1 * m2;
      r.terms[m] += c1 * c2;
    }
  return r;
}

static std::string renderMonomial(const Monomial& m, uint64_t coeff) {
  std::ostringstream os;
  bool first = true;
  if (coeff != 1 || m.isOne()) {
    os << coeff;
    first = false;
  }
  for (const auto& [v, e] : m.vars) {
    if (!first) os << "*";
    os << "x" << v;
    if (e > 1) os << "^" << e;
    first = false;
  }
  return os.str();
}

std::string Polynomial::render() const {
  if (terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms) {
    if (!first) os << " + ";
    os << renderMonomial(m, c);
    first = false;
  }
  return os.str();
}

std::string renderBaseElem(const BaseElem& e) {
  if (std::holds_alternative<uint64_t>(e))
    return std::to_string(std::get<uint64_t>(e));
  if (std::holds_alternative<bool>(e)) return std::get<bool>(e) ? "true" : "false";
  return std::get<Polynomial>(e).render();
}

BaseElem BaseSemiring::zero() const {
  switch (id_) {
    case SemiringId::Nat: return uint64_t{0};
    case SemiringId::Bool: return false;
    case SemiringId::ProvPoly: return Polynomial{};
  }
  throw Error("unreachable semiring id");
}

BaseElem BaseSemiring::one() const {
  switch (id_) {
    case SemiringId::Nat: return uint64_t{1};
    case SemiringId::Bool: return true;
    case SemiringId::ProvPoly: return Polynomial::constant(1);
  }
  throw Error("unreachable semiring id");
}

BaseElem BaseSemiring::add(const BaseElem& a, const BaseElem& b) const {
  if (!contains(a) || !contains(b))
    throw TypeMismatchError("semiring element of wrong carrier in add");
  switch (id_) {
    case SemiringId::Nat: return std::get<uint64_t>(a) + std::get<uint64_t>(b);
    case SemiringId::Bool: return std::get<bool>(a) || std::get<bool>(b);
    case SemiringId::ProvPoly:
      return std::get<Polynomial>(a) + std::get<Polynomial>(b);
  }
  throw Error("unreachable semiring id");
}

BaseElem BaseSemiring::mul(const BaseElem& a, const BaseElem& b) const {
  if (!contains(a) || !contains(b))
    throw TypeMismatchError("semiring element of wrong carrier in mul");
  switch (id_) {
    case SemiringId::Nat: return std::get<uint64_t>(a) * std::get<uint64_t>(b);
    case SemiringId::Bool: return std::get<bool>(a) && std::get<bool>(b);
    case SemiringId::ProvPoly:
      return std::get<Polynomial>(a) * std::get<Polynomial>(b);
  }
  throw Error("unreachable semiring id");
}

bool BaseSemiring::eq(const BaseElem& a, const BaseElem& b) const {
  return a == b;
}

bool BaseSemiring::contains(const BaseElem& a) const {
  switch (id_) {
    case SemiringId::Nat: return std::holds_alternative<uint64_t>(a);
    case SemiringId::Bool: return std::holds_alternative<bool>(a);
    case SemiringId::ProvPoly: return std::holds_alternative<Polynomial>(a);
  }
  return false;
}

const BaseSemiring& BaseSemiring::nat() {
  static BaseSemiring k(SemiringId::Nat);
  return k;
}

const BaseSemiring& BaseSemiring::boolean() {
  static BaseSemiring k(SemiringId::Bool);
  return k;
}

const BaseSemiring& BaseSemiring::provPoly() {
  static BaseSemiring k(SemiringId::ProvPoly);
  return k;
}

const BaseSemiring& BaseSemiring::byId(SemiringId id) {
  switch (id) {
    case SemiringId::Nat: return nat();
    case SemiringId::Bool: return boolean();
    case SemiringId::ProvPoly: return provPoly();
  }
  throw Error("unreachable semiring id");
}

BaseHom BaseHom::allVariablesToOne(SemiringId target) {
  BaseHom h(SemiringId::ProvPoly, target);
  h.varDefault_ = BaseSemiring::byId(target).one();
  return h;
}

BaseHom BaseHom::fromVariableMap(SemiringId target,
                                 std::map<uint32_t, BaseElem> mapping,
                                 BaseElem deflt) {
  BaseHom h(SemiringId::ProvPoly, target);
  h.varMap_ = std::move(mapping);
  h.varDefault_ = std::move(deflt);
  return h;
}

BaseHom BaseHom::identity(SemiringId id) {
  BaseHom h(id, id);
  h.identity_ = true;
  return h;
}

BaseElem BaseHom::apply(const BaseElem& e) const {
  if (identity_) return e;
  const BaseSemiring& tgt = BaseSemiring::byId(target_);
  if (!std::holds_alternative<Polynomial>(e))
    throw TypeMismatchError("homomorphism source element must be a polynomial");
  const Polynomial& p = std::get<Polynomial>(e);
  BaseElem result = tgt.zero();
  for (const auto& [m, c] : p.terms) {
    // image of one monomial: coeff * prod(var images ^ exponent)
    BaseElem term = tgt.one();
    if (target_ == SemiringId::Nat) {
      term = uint64_t{c};
    } else if (target_ == SemiringId::Bool) {
      term = c > 0;
    } else {
      term = Polynomial::constant(c);
    }
    for (const auto& [v, exp] : m.vars) {
      auto it = varMap_.find(v);
      const BaseElem& img = it != varMap_.end() ? it->second : varDefault_;
      for (uint32_t i = 0; i < exp; ++i) term = tgt.mul(term, img);
    }
    result = tgt.add(result, term);
  }
  return result;
}

}  // namespace reenact
