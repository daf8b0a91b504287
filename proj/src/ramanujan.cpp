#include "polyram/ramanujan.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "polyram/errors.hpp"

namespace polyram {

namespace {

BigInt norm_of(const FieldSpec& field, int degree) {
  return boost::multiprecision::pow(BigInt(field.q()), static_cast<unsigned>(degree));
}

BigInt abs_big(const BigInt& v) { return v < 0 ? BigInt(-v) : v; }

void require_modulus(const MonicPoly& h) {
  if (h.degree() < 1) throw DomainError("the t-function needs deg H >= 1");
}

// t(A) for A already reduced mod H.
std::uint32_t t_of_reduced(const Poly& reduced, int m) {
  return static_cast<int>(reduced.codes().size()) >= m ? reduced.codes()[static_cast<std::size_t>(m - 1)] : 0U;
}

}  // namespace

FieldElement t_coeff(const Poly& a, const MonicPoly& h) {
  require_modulus(h);
  const Poly r = mod(a, h.poly());
  return r.coeff(h.degree() - 1);
}

std::complex<double> eval_char(const Poly& g, const MonicPoly& h, const Poly& d) {
  require_modulus(h);
  return additive_char_value(t_coeff(g * d, h));
}

std::complex<double> eta_character_sum(const Poly& g, const MonicPoly& h, bool unitary) {
  if (h.is_one()) return {1.0, 0.0};
  const auto& field = h.field();
  const int m = h.degree();
  const Poly reduced_g = mod(g, h.poly());

  std::vector<std::complex<double>> lambda(static_cast<std::size_t>(field.p()));
  for (int t = 0; t < field.p(); ++t) lambda[static_cast<std::size_t>(t)] = std::polar(1.0, 2.0 * std::numbers::pi * t / field.p());

  std::complex<double> acc{0.0, 0.0};
  for (const auto& d : residues_mod(h.poly())) {
    if (d.is_zero()) continue;  // (0, H) = H and (0, H)_* = H, neither is 1 for deg H >= 1
    const bool admissible = unitary ? unitary_gcd_star(d, h).is_one() : gcd(d, h.poly()).is_one();
    if (!admissible) continue;
    const std::uint32_t t = t_of_reduced(mod(reduced_g * d, h.poly()), m);
    acc += lambda[static_cast<std::size_t>(field.trace(t))];
  }
  return acc;
}

BigInt eta_divisor_sum(const Poly& g, const MonicPoly& h, bool unitary) {
  if (h.is_one()) return 1;
  const Poly r = mod(g, h.poly());
  const auto& field = h.field();
  BigInt acc = 0;
  if (unitary) {
    const MonicPoly star = unitary_gcd_star(r, h);
    for (const auto& d : divisors(star, true)) acc += norm_of(field, d.degree()) * mobius_star(exact_quotient(h, d));
  } else {
    const MonicPoly common = r.is_zero() ? h : gcd(r, h.poly());
    for (const auto& d : divisors(common)) {
      const int mu = mobius(exact_quotient(h, d));
      if (mu != 0) acc += mu * norm_of(field, d.degree());
    }
  }
  return acc;
}

double eta_tolerance(const MonicPoly& h) { return 1e-6 * std::max(1.0, norm_real(h.poly())); }

namespace {

EtaValue eta_impl(const Poly& g, const MonicPoly& h, EtaMethod method, bool unitary) {
  EtaValue out;
  out.exact = eta_divisor_sum(g, h, unitary);
  if (method == EtaMethod::divisor) return out;
  out.approx = eta_character_sum(g, h, unitary);
  if (method == EtaMethod::both) {
    const double exact = out.exact.convert_to<double>();
    out.agreement = std::abs(*out.approx - std::complex<double>(exact, 0.0));
    if (*out.agreement >= eta_tolerance(h))
      throw InvariantError("character and divisor paths disagree for G=" + g.to_string() + ", H=" + h.to_string());
  }
  return out;
}

}  // namespace

EtaValue eta(const Poly& g, const MonicPoly& h, EtaMethod method) { return eta_impl(g, h, method, false); }

EtaValue eta_star(const Poly& g, const MonicPoly& h, EtaMethod method) { return eta_impl(g, h, method, true); }

BigInt eta_prime_power(const MonicPoly& g, const MonicPoly& prime, int e, bool unitary) {
  if (e < 1) throw DomainError("prime-power exponent must be >= 1");
  if (!is_irreducible(prime.poly())) throw DomainError(prime.to_string() + " is not irreducible");
  int a = 0;
  Poly rest = g.poly();
  while (true) {
    auto [q, r] = divmod(rest, prime.poly());
    if (!r.is_zero()) break;
    rest = std::move(q);
    ++a;
  }
  const auto& field = g.field();
  const int d = prime.degree();
  if (unitary) return a >= e ? BigInt(norm_of(field, d * e) - 1) : BigInt(-1);
  if (a == 0) return e == 1 ? BigInt(-1) : BigInt(0);
  if (e <= a) return norm_of(field, d * e) - norm_of(field, d * (e - 1));
  if (e == a + 1) return -norm_of(field, d * a);
  return 0;
}

BigInt divisor_sum_identity(const Poly& g, const MonicPoly& h, bool unitary) {
  BigInt acc = 0;
  for (const auto& d : divisors(h, unitary)) acc += eta_divisor_sum(g, d, unitary);
  const BigInt expected = divides(h.poly(), g) ? norm(h.poly()) : BigInt(0);
  if (acc != expected)
    throw InvariantError(std::string(unitary ? "unitary " : "") + "divisor-sum identity fails for G=" + g.to_string() +
                         ", H=" + h.to_string() + ": got " + acc.str() + ", expected " + expected.str());
  return acc;
}

AbsSumReport abs_sum_bounds(const MonicPoly& g, const MonicPoly& h) {
  AbsSumReport out;
  for (const auto& d : divisors(h, true)) out.unitary_sum += abs_big(eta_divisor_sum(g.poly(), d, true));
  for (const auto& d : divisors(h, false)) out.divisor_sum += abs_big(eta_divisor_sum(g.poly(), d, false));

  const MonicPoly star = unitary_gcd_star(g.poly(), h);
  const int omega_rest = counts(exact_quotient(h, star)).omega;
  out.unitary_closed = (BigInt(1) << omega_rest) * norm(star.poly());
  out.bound = (BigInt(1) << counts(h).omega) * norm(g.poly());

  out.closed_form_holds = out.unitary_sum == out.unitary_closed;
  out.unitary_bound_holds = out.unitary_sum <= out.bound;
  out.divisor_bound_holds = out.divisor_sum <= out.bound;
  return out;
}

}  // namespace polyram
