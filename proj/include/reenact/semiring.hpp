#ifndef REENACT_SEMIRING_HPP
#define REENACT_SEMIRING_HPP

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <variant>

#include "reenact/base.hpp"

namespace reenact {

// A monomial over variables x0, x1, ... with positive exponents, e.g. x1^2*x4.
// The empty monomial is 1.
struct Monomial {
  std::map<uint32_t, uint32_t> vars;  // variable index -> exponent (> 0)

  bool isOne() const { return vars.empty(); }
  Monomial operator*(const Monomial& o) const;
  auto operator<=>(const Monomial&) const = default;
};

// Polynomial over variables with natural-number coefficients, kept canonical:
// monomials sorted (std::map order), no zero coefficients.
struct Polynomial {
  std::map<Monomial, uint64_t> terms;

  static Polynomial constant(uint64_t c);
  static Polynomial variable(uint32_t idx);

  bool isZero() const { return terms.empty(); }
  bool isOne() const;
  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  auto operator<=>(const Polynomial&) const = default;

  std::string render() const;
};

enum class SemiringId { Nat, Bool, ProvPoly };

// An element of one of the supported base semirings. Which alternative is
// active must agree with the semiring the surrounding computation runs in.
using BaseElem = std::variant<uint64_t, bool, Polynomial>;

std::string renderBaseElem(const BaseElem& e);

// Operations of a commutative semiring over BaseElem values. The three
// supported instances are natural numbers (bag multiplicities), booleans
// (set semantics) and provenance polynomials.
class BaseSemiring {
public:
  explicit BaseSemiring(SemiringId id) : id_(id) {}

  SemiringId id() const { return id_; }
  BaseElem zero() const;
  BaseElem one() const;
  BaseElem add(const BaseElem& a, const BaseElem& b) const;
  BaseElem mul(const BaseElem& a, const BaseElem& b) const;
  bool eq(const BaseElem& a, const BaseElem& b) const;
  bool isZero(const BaseElem& a) const { return eq(a, zero()); }
  bool isOne(const BaseElem& a) const { return eq(a, one()); }

  // Checks that an element belongs to this semiring's carrier.
  bool contains(const BaseElem& a) const;

  static const BaseSemiring& nat();
  static const BaseSemiring& boolean();
  static const BaseSemiring& provPoly();
  static const BaseSemiring& byId(SemiringId id);

private:
  SemiringId id_;
};

// A semiring homomorphism between two of the supported base semirings,
// represented by its action on variables (for ProvPoly sources) and extended
// to all elements so that 0, 1, + and * are preserved.
class BaseHom {
public:
  // hom from ProvPoly that maps every variable to `target.one()`.
  static BaseHom allVariablesToOne(SemiringId target);
  // hom from ProvPoly mapping selected variables; unlisted variables map to
  // `deflt` (an element of the target semiring).
  static BaseHom fromVariableMap(SemiringId target,
                                 std::map<uint32_t, BaseElem> mapping,
                                 BaseElem deflt);
  static BaseHom identity(SemiringId id);

  SemiringId source() const { return source_; }
  SemiringId target() const { return target_; }
  BaseElem apply(const BaseElem& e) const;

private:
  BaseHom(SemiringId source, SemiringId target) : source_(source), target_(target) {}
  SemiringId source_;
  SemiringId target_;
  std::map<uint32_t, BaseElem> varMap_;
  BaseElem varDefault_ = uint64_t{1};
  bool identity_ = false;
};

}  // namespace reenact

#endif
