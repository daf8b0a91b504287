#pragma once

// The polynomial ring A = F_q[T]: arithmetic, monic normalization, enumeration, factorization and the divisor
// lattices (ordinary and unitary).

#include <boost/multiprecision/cpp_int.hpp>
#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "polyram/field.hpp"

namespace polyram {

using BigInt = boost::multiprecision::cpp_int;

/// Element of F_q[T]; coefficients lowest degree first, no trailing zeros.
class Poly {
 public:
  explicit Poly(FieldSpec field) : field_(std::move(field)) {}
  Poly(FieldSpec field, std::vector<std::uint32_t> codes);
  Poly(FieldSpec field, const std::vector<FieldElement>& coeffs);

  static Poly constant(const FieldElement& c);
  static Poly monomial(const FieldElement& c, int degree);
  static Poly T(const FieldSpec& field) { return monomial(field.one(), 1); }
  static Poly one(const FieldSpec& field) { return constant(field.one()); }

  const FieldSpec& field() const noexcept { return field_; }
  /// -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(codes_.size()) - 1; }
  bool is_zero() const noexcept { return codes_.empty(); }
  bool is_monic() const noexcept { return !codes_.empty() && codes_.back() == 1; }
  bool is_one() const noexcept { return codes_.size() == 1 && codes_[0] == 1; }
  FieldElement coeff(int i) const;
  FieldElement leading() const;
  const std::vector<std::uint32_t>& codes() const noexcept { return codes_; }

  Poly operator-() const;
  Poly scaled(const FieldElement& c) const;
  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  friend bool operator==(const Poly& a, const Poly& b);
  /// Degree first, then coefficient codes from the top down (base-q order of the coefficient vector).
  friend std::strong_ordering operator<=>(const Poly& a, const Poly& b);

  std::string to_string() const;

 private:
  void trim();
  FieldSpec field_;
  std::vector<std::uint32_t> codes_;
};

/// A nonzero polynomial with leading coefficient 1.
class MonicPoly {
 public:
  /// Throws DomainError unless `p` is monic.
  explicit MonicPoly(Poly p);
  static MonicPoly one(const FieldSpec& field) { return MonicPoly(Poly::one(field)); }
  static MonicPoly T(const FieldSpec& field) { return MonicPoly(Poly::T(field)); }

  const Poly& poly() const noexcept { return p_; }
  operator const Poly&() const noexcept { return p_; }  // NOLINT(google-explicit-constructor)
  const FieldSpec& field() const noexcept { return p_.field(); }
  int degree() const noexcept { return p_.degree(); }
  bool is_one() const noexcept { return p_.is_one(); }
  std::string to_string() const { return p_.to_string(); }

  friend bool operator==(const MonicPoly& a, const MonicPoly& b) { return a.p_ == b.p_; }
  friend std::strong_ordering operator<=>(const MonicPoly& a, const MonicPoly& b) { return a.p_ <=> b.p_; }
  friend MonicPoly operator*(const MonicPoly& a, const MonicPoly& b) { return MonicPoly(a.p_ * b.p_); }

 private:
  Poly p_;
};

struct Factorization {
  FieldElement unit;
  std::vector<std::pair<MonicPoly, int>> factors;  // sorted, distinct, irreducible

  Poly recombine() const;
  /// nu_P of the factored polynomial (0 if P does not occur).
  int valuation(const MonicPoly& prime) const;
};

// --- parsing ----------------------------------------------------------------------------------------------------

/// Grammar: term ('+' term)*, term = coef '*' 'T' '^' e | coef '*' 'T' | 'T^' e | 'T' | coef. A coefficient is a
/// decimal integer in [0, p), or for extension fields a parenthesized element `(x+1)` or a bare x-term.
Poly parse_poly(std::string_view text, const FieldSpec& field);
std::string format_poly(const Poly& p);
MonicPoly parse_monic(std::string_view text, const FieldSpec& field);

// --- arithmetic -------------------------------------------------------------------------------------------------

/// A = Q*B + R with deg R < deg B. Throws DivisionByZero when B = 0.
std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
Poly mod(const Poly& a, const Poly& b);
bool divides(const Poly& d, const Poly& a);
/// Exact quotient; throws InvariantError when d does not divide a.
MonicPoly exact_quotient(const MonicPoly& a, const MonicPoly& d);

/// A = unit * M with M monic. Throws DomainError for A = 0.
std::pair<FieldElement, MonicPoly> monic_normalize(const Poly& a);

/// Greatest common monic divisor. Throws DomainError when both inputs are zero.
MonicPoly gcd(const Poly& a, const Poly& b);
/// Least common multiple via prime decompositions; 1 for an empty list.
MonicPoly lcm(const std::vector<MonicPoly>& polys, const FieldSpec& field);

/// |A| = q^deg A. Throws DomainError for A = 0.
BigInt norm(const Poly& a);
/// q^degree as a double.
double norm_real(const FieldSpec& field, int degree);
double norm_real(const Poly& a);

// --- enumeration ------------------------------------------------------------------------------------------------

/// All q^d monic polynomials of degree d in base-q order of their lower coefficients.
std::vector<MonicPoly> enumerate_monic(const FieldSpec& field, int degree);
/// All monic polynomials of degree <= max_degree, degree by degree.
std::vector<MonicPoly> enumerate_monic_up_to(const FieldSpec& field, int max_degree);
/// The q^{deg H} polynomials of degree < deg H, in base-q order.
std::vector<Poly> residues_mod(const Poly& h);
/// Position of a monic polynomial in the degree-then-base-q enumeration.
std::uint64_t monic_rank(const MonicPoly& m);

// --- factorization ----------------------------------------------------------------------------------------------

/// All monic irreducibles of degree <= max_degree, in enumeration order. Results are cached per field.
std::vector<MonicPoly> irreducible_sieve(const FieldSpec& field, int max_degree);
bool is_irreducible(const Poly& a);

/// Complete factorization by trial division against the sieve. Throws DomainError for A = 0.
Factorization factor(const Poly& a);

/// Monic divisors (or unitary divisors), sorted by (degree, base-q order).
std::vector<MonicPoly> divisors(const MonicPoly& a, bool unitary = false);
std::vector<MonicPoly> divisors(const Factorization& f, const FieldSpec& field, bool unitary = false);

/// D || G: D | G and gcd(D, G/D) = 1.
bool is_unitary_divisor(const MonicPoly& d, const MonicPoly& g);

/// (H, G)_*: product of P^{nu_P(G)} over primes of G whose full power divides H. H = 0 is divisible by everything.
MonicPoly unitary_gcd_star(const Poly& h, const MonicPoly& g);

MonicPoly power(const MonicPoly& base, int exponent);

}  // namespace polyram
