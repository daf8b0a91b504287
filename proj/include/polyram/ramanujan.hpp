#pragma once

// Polynomial Ramanujan sums eta(G, H) and their unitary analogue eta*(G, H).
//
// Two independent evaluation paths exist. The divisor path is exact:
//   eta(G, H)  = sum_{D | (G, H)}    |D| mu(H / D)
//   eta*(G, H) = sum_{D || (G, H)_*} |D| mu*(H / D)
// The character path sums the additive character E(G, H)(D) = lambda(t(G D)) over the residues D mod H that are
// coprime (resp. unitarily coprime) to H, in double-precision complex arithmetic.

#include <complex>
#include <optional>

#include "polyram/arith.hpp"
#include "polyram/poly.hpp"

namespace polyram {

enum class EtaMethod { divisor, character, both };

struct EtaValue {
  BigInt exact;                                // divisor path; always present
  std::optional<std::complex<double>> approx;  // character path, when requested
  std::optional<double> agreement;             // |approx - exact|, when both ran
};

/// Coefficient of T^{m-1} in (A mod H), m = deg H. Throws DomainError when deg H = 0.
FieldElement t_coeff(const Poly& a, const MonicPoly& h);

/// E(G, H)(D) = lambda(t(G D)). Throws DomainError when deg H = 0.
std::complex<double> eval_char(const Poly& g, const MonicPoly& h, const Poly& d);

/// Character sum over residues D mod H with (D, H) = 1 (or (D, H)_* = 1).
std::complex<double> eta_character_sum(const Poly& g, const MonicPoly& h, bool unitary);

/// Exact divisor-path value. G is arbitrary; only G mod H matters.
BigInt eta_divisor_sum(const Poly& g, const MonicPoly& h, bool unitary);

/// Agreement tolerance between the two paths: 1e-6 * max(1, |H|).
double eta_tolerance(const MonicPoly& h);

EtaValue eta(const Poly& g, const MonicPoly& h, EtaMethod method = EtaMethod::divisor);
EtaValue eta_star(const Poly& g, const MonicPoly& h, EtaMethod method = EtaMethod::divisor);

/// Closed form at a prime power P^e: the non-unitary cases of the P^a || G rule, or |P|^e - 1 / -1 for the unitary
/// sum. Throws DomainError when P is not irreducible or e < 1.
BigInt eta_prime_power(const MonicPoly& g, const MonicPoly& prime, int e, bool unitary);

/// sum_{D | H} eta(G, D) (or sum_{D || H} eta*(G, D)). The result must be |H| when H | G and 0 otherwise; a
/// violation raises InvariantError.
BigInt divisor_sum_identity(const Poly& g, const MonicPoly& h, bool unitary);

struct AbsSumReport {
  BigInt unitary_sum;       // sum_{D || H} |eta*(G, D)|
  BigInt unitary_closed;    // 2^{omega(H / (G,H)_*)} |(G,H)_*|
  BigInt divisor_sum;       // sum_{D | H} |eta(G, D)|
  BigInt bound;             // 2^{omega(H)} |G|
  bool closed_form_holds = false;
  bool unitary_bound_holds = false;
  bool divisor_bound_holds = false;

  bool ok() const { return closed_form_holds && unitary_bound_holds && divisor_bound_holds; }
};

AbsSumReport abs_sum_bounds(const MonicPoly& g, const MonicPoly& h);

}  // namespace polyram
