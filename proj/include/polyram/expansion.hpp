#pragma once

// Ramanujan expansions f(G_1..G_k) = sum_{H_1..H_k} C_{H_1..H_k} eta(G_1,H_1)...eta(G_k,H_k) (or with eta* and
// C*), truncated to tuples of bounded degree, together with the coefficient formulas and the zeta function of
// F_q[T].

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "polyram/arith.hpp"
#include "polyram/poly.hpp"

namespace polyram {

/// Default cap on the number of tuples any single enumeration may visit.
inline constexpr std::uint64_t kDefaultBudget = 10'000'000;
/// Environment variable that overrides kDefaultBudget.
inline constexpr const char* kBudgetEnvVar = "POLYRAM_BUDGET";

std::uint64_t default_budget();

/// Throws ResourceError when `count` exceeds `budget`.
void check_budget(std::uint64_t count, std::uint64_t budget, const std::string& what);

// --- zeta ---------------------------------------------------------------------------------------------------------

/// zeta_A(s) = 1 / (1 - q^{1-s}). Throws DomainError for s <= 1.
double zeta_A(std::uint32_t q, double s);
/// sum over monic f of degree <= max_degree of |f|^{-s}, by enumeration.
double zeta_partial(const FieldSpec& field, double s, int max_degree);

// --- monic catalog ------------------------------------------------------------------------------------------------

/// Every monic polynomial of degree <= max_degree with its factorization, indexed in enumeration order so that the
/// polynomials of degree <= b form a prefix.
class MonicCatalog {
 public:
  struct PrimePower {
    std::uint32_t prime;  // index into primes()
    int exponent;
  };

  MonicCatalog(FieldSpec field, int max_degree);

  const FieldSpec& field() const noexcept { return field_; }
  int max_degree() const noexcept { return max_degree_; }
  std::size_t size() const noexcept { return polys_.size(); }
  /// Number of monic polynomials of degree <= d.
  std::size_t prefix(int d) const;
  const MonicPoly& poly(std::size_t i) const { return polys_[i]; }
  int degree(std::size_t i) const { return polys_[i].degree(); }
  const std::vector<PrimePower>& factorization(std::size_t i) const { return factors_[i]; }
  const std::vector<MonicPoly>& primes() const noexcept { return primes_; }
  std::size_t index_of(const MonicPoly& m) const;

 private:
  FieldSpec field_;
  int max_degree_;
  std::vector<MonicPoly> polys_;
  std::vector<std::vector<PrimePower>> factors_;
  std::vector<MonicPoly> primes_;
  std::vector<std::size_t> prefix_;
};

// --- coefficients -------------------------------------------------------------------------------------------------

enum class Family { sigma, tau, beta, phi };

Family parse_family(const std::string& name);
std::string to_string(Family family);

/// g(G) = family_s(G) / |G|^s (tau: g = tau).
ArithFn family_function(Family family, double s);

/// True when, for every prime P, all nonzero nu_P(H_i) coincide. For k = 1 this always holds. A unitary
/// coefficient of g o gcd vanishes on incompatible tuples: H_i || G for every i is impossible there.
bool unitary_compatible(std::span<const MonicPoly> tuple);

/// Partial sum of C = sum_{M_i} (mu_k * f)(M_1 H_1, ..., M_k H_k) / (|M_1 H_1| ... |M_k H_k|) over M_i of degree
/// <= bound; the unitary variant keeps only (M_i, H_i) = 1.
double coeff_general(const ArithFn& f, std::span<const MonicPoly> tuple, int bound, bool unitary,
                     std::uint64_t budget = default_budget());

/// Partial sum of C = |Q|^{-k} sum_M (mu * g)(M Q) / |M|^k over M of degree <= bound, Q = lcm(H_1..H_k). The
/// unitary variant keeps (M, Q) = 1 and is zero on tuples that are not unitary_compatible.
double coeff_special(const ArithFn& g, std::span<const MonicPoly> tuple, int bound, bool unitary,
                     std::uint64_t budget = default_budget());

/// Euler product of local sums of (mu_k * f)(P^{e_1}..P^{e_k}) / |P|^{e_1+...+e_k} over primes of degree <=
/// prime_degree_bound (plus every prime of the tuple), exponents capped at max(exponent_bound, nu_P(H_i)).
/// Throws DomainError unless f claims multiplicativity.
double coeff_euler(const ArithFn& f, std::span<const MonicPoly> tuple, int prime_degree_bound, int exponent_bound,
                   bool unitary);

/// Closed-form coefficient of g = family_s / |.|^s as a function of Q. Throws DomainError when k + s <= 1.
double coeff_closed_form(Family family, double s, int k, const MonicPoly& q_poly, bool unitary);

/// Closed-form coefficient of a tuple: coeff_closed_form at Q = lcm, times the compatibility indicator when
/// unitary.
double coeff_closed_form_tuple(Family family, double s, std::span<const MonicPoly> tuple, bool unitary);

enum class Provenance { general_sum, euler_product, closed_form };

std::string to_string(Provenance p);
Provenance parse_provenance(const std::string& name);

struct CoeffTable {
  int k = 1;
  bool unitary = false;
  Provenance provenance = Provenance::closed_form;
  std::map<std::vector<MonicPoly>, double> entries;

  /// Throws DomainError when the tuple is not tabulated.
  double at(std::span<const MonicPoly> tuple) const;
};

/// Closed-form coefficients for every tuple of degree <= max_degree. Asserts (InvariantError) that compatible
/// tuples sharing an lcm share a coefficient.
CoeffTable tabulate_closed_form(Family family, double s, int k, const FieldSpec& field, int max_degree, bool unitary,
                                std::uint64_t budget = default_budget());
/// coeff_general for every tuple of degree <= max_degree, truncated at m_bound.
CoeffTable tabulate_general(const ArithFn& f, const FieldSpec& field, int max_degree, int m_bound, bool unitary,
                            std::uint64_t budget = default_budget());

/// Coefficient lookup used by expand_truncated. Tuples are given as catalog indices.
class CoefficientSource {
 public:
  virtual ~CoefficientSource() = default;
  virtual int arity() const = 0;
  virtual double coefficient(const MonicCatalog& catalog, std::span<const std::size_t> tuple) const = 0;
};

class ClosedFormSource final : public CoefficientSource {
 public:
  ClosedFormSource(Family family, double s, int k, bool unitary);
  int arity() const override { return k_; }
  double coefficient(const MonicCatalog& catalog, std::span<const std::size_t> tuple) const override;

 private:
  Family family_;
  double s_;
  int k_;
  bool unitary_;
};

class TableSource final : public CoefficientSource {
 public:
  explicit TableSource(const CoeffTable& table) : table_(table) {}
  int arity() const override { return table_.k; }
  double coefficient(const MonicCatalog& catalog, std::span<const std::size_t> tuple) const override;

 private:
  const CoeffTable& table_;
};

// --- truncated expansions -----------------------------------------------------------------------------------------

struct PartialSum {
  int degree_bound;
  double value;
};

/// For each b <= bound, the sum over tuples with max_i deg H_i <= b of C_H eta(G_1,H_1)...eta(G_k,H_k), eta values
/// from the exact divisor path (eta* when unitary). Strata are reduced in a fixed order.
std::vector<PartialSum> expand_truncated(std::span<const MonicPoly> g_tuple, const CoefficientSource& coeffs,
                                         int bound, bool unitary, std::uint64_t budget = default_budget());

struct IdentityReport {
  std::string identity;
  std::uint32_t q = 0;
  int k = 1;
  double s = 0.0;
  bool unitary = false;
  std::vector<std::string> g_tuple;
  double lhs = 0.0;
  std::vector<PartialSum> partials;
  std::vector<double> residuals;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct VerifyOptions {
  int degree_bound = 4;
  bool unitary = false;
  std::optional<double> tolerance;
  std::uint64_t budget = default_budget();
};

/// max(1e-6, 4 q^{-(bound - margin)}), margin = largest degree among the G_i.
double default_tolerance(std::uint32_t q, int bound, int margin);

/// Checks LHS = family_s(gcd)/|gcd|^s against the truncated closed-form expansion. Enforces each identity's side
/// condition: k >= 1, k + s > 1, and k >= 2 for tau.
IdentityReport verify_identity(Family family, double s, int k, std::span<const MonicPoly> g_tuple,
                               const VerifyOptions& options);

struct WintnerReport {
  double weighted = 0.0;    // sum 2^{omega(G_1)+...+omega(G_k)} |(mu_k * f)(G)| / (|G_1|...|G_k|)
  double unweighted = 0.0;  // same without the 2^omega factor
};

/// Truncated value of the summability hypothesis over tuples of degree <= bound. Diagnostic only.
WintnerReport wintner_diagnostic(const ArithFn& f, const FieldSpec& field, int bound,
                                 std::uint64_t budget = default_budget());

}  // namespace polyram
