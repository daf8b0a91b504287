#include <doctest.h>

#include <complex>

#include "polyram/errors.hpp"
#include "polyram/ramanujan.hpp"

using namespace polyram;

namespace {

const FieldSpec& f2() {
  static const FieldSpec f = FieldSpec::create(2);
  return f;
}

Poly P(const char* text, const FieldSpec& f = f2()) { return parse_poly(text, f); }
MonicPoly M(const char* text, const FieldSpec& f = f2()) { return parse_monic(text, f); }

BigInt phi1(const MonicPoly& h) { return phi_s(h, 1).as_exact(); }

}  // namespace

TEST_CASE("t-function") {
  CHECK(t_coeff(P("T+1"), M("T^2")).code() == 1);
  CHECK(t_coeff(P("T^2+T"), M("T^2")).code() == 1);
  CHECK(t_coeff(P("1"), M("T^2")).code() == 0);
  CHECK_THROWS_AS(t_coeff(P("T"), M("1")), DomainError);

  const FieldSpec f3 = FieldSpec::create(3);
  const MonicPoly h = M("T^3+2*T+1", f3);
  const auto rs = residues_mod(power(MonicPoly::T(f3), 4));
  for (const auto& a : rs) {
    CHECK(t_coeff(a * h.poly(), h).is_zero());
    for (std::size_t j = 0; j < rs.size(); j += 7) CHECK(t_coeff(a + rs[j], h) == t_coeff(a, h) + t_coeff(rs[j], h));
  }
}

TEST_CASE("additive character E(G,H)") {
  CHECK(std::abs(eval_char(P("T"), M("T^2"), P("1")) - std::complex<double>(-1, 0)) < 1e-12);
  CHECK(std::abs(eval_char(P("T"), M("T^2"), P("T+1")) - std::complex<double>(-1, 0)) < 1e-12);
  for (std::int64_t q : {2, 3, 4}) {
    const FieldSpec f = FieldSpec::from_order(q);
    for (const auto& h : enumerate_monic_up_to(f, 2)) {
      if (h.degree() == 0) continue;
      const auto rs = residues_mod(h.poly());
      for (const auto& g : enumerate_monic_up_to(f, 3)) {
        CHECK(std::abs(eval_char(g, h, Poly(f)) - 1.0) < 1e-12);
        std::complex<double> total = 0;
        for (const auto& d1 : rs) {
          total += eval_char(g, h, d1);
          for (const auto& d2 : rs)
            CHECK(std::abs(eval_char(g, h, d1 + d2) - eval_char(g, h, d1) * eval_char(g, h, d2)) < 1e-10);
        }
        // orthogonality: |H| when H | G, else 0
        const double want = divides(h, g) ? norm_real(h.poly()) : 0.0;
        CHECK(std::abs(total - want) < 1e-8);
      }
    }
  }
}

TEST_CASE("eta values") {
  CHECK(eta(P("T"), M("T^2")).exact == -2);
  CHECK(eta(P("T^2"), M("T^2")).exact == 2);
  CHECK(eta(P("T^3+T"), M("1")).exact == 1);
  CHECK(eta(Poly(f2()), M("1")).exact == 1);
  CHECK(eta_star(P("T"), M("T^2")).exact == -1);
  CHECK(eta_star(P("T^2"), M("T^2")).exact == 3);
  CHECK(eta_star(P("T+1"), M("1")).exact == 1);

  const EtaValue both = eta(P("T"), M("T^2"), EtaMethod::both);
  REQUIRE(both.approx.has_value());
  REQUIRE(both.agreement.has_value());
  CHECK(*both.agreement < 1e-9);
  CHECK_FALSE(eta(P("T"), M("T^2")).approx.has_value());
}

TEST_CASE("eta matches the closed form mu(H/(G,H)) phi(H) / phi(H/(G,H))") {
  for (std::int64_t q : {2, 3}) {
    const FieldSpec f = FieldSpec::from_order(q);
    const int d = q == 2 ? 4 : 3;
    for (const auto& h : enumerate_monic_up_to(f, d))
      for (const auto& g : enumerate_monic_up_to(f, d)) {
        const MonicPoly c = gcd(g, h);
        const MonicPoly r = exact_quotient(h, c);
        CHECK(eta(g, h).exact == mobius(r) * phi1(h) / phi1(r));
      }
  }
}

TEST_CASE("dual path agreement, periodicity and zero argument") {
  for (std::int64_t q : {2, 3, 4}) {
    const FieldSpec f = FieldSpec::from_order(q);
    const int d = q == 4 ? 2 : 3;
    for (const auto& h : enumerate_monic_up_to(f, d)) {
      CHECK(eta(Poly(f), h).exact == phi1(h));
      CHECK(eta_star(Poly(f), h).exact == unitary_basics(h).phi_star);
      for (const auto& g : enumerate_monic_up_to(f, d)) {
        for (const bool unitary : {false, true}) {
          const EtaValue v = unitary ? eta_star(g, h, EtaMethod::both) : eta(g, h, EtaMethod::both);
          CHECK(*v.agreement < eta_tolerance(h));
          CHECK(std::abs(v.approx->imag()) < 1e-9);
          CHECK(eta_divisor_sum(g.poly() + h.poly() * P("T^2+1", f), h, unitary) == v.exact);
        }
      }
    }
  }
}

TEST_CASE("multiplicativity in the modulus") {
  for (std::int64_t q : {2, 3}) {
    const FieldSpec f = FieldSpec::from_order(q);
    const auto hs = enumerate_monic_up_to(f, 2);
    for (const auto& g : enumerate_monic_up_to(f, 3))
      for (const auto& h1 : hs)
        for (const auto& h2 : hs)
          if (gcd(h1, h2).is_one())
            for (const bool unitary : {false, true})
              CHECK(eta_divisor_sum(g, h1 * h2, unitary) ==
                    eta_divisor_sum(g, h1, unitary) * eta_divisor_sum(g, h2, unitary));
  }
}

TEST_CASE("prime-power closed forms") {
  CHECK(eta_prime_power(M("T^2"), M("T"), 3, false) == -4);
  CHECK(eta_prime_power(M("T^2"), M("T"), 5, false) == 0);
  CHECK(eta_prime_power(M("T"), M("T+1"), 1, false) == -1);
  CHECK(eta_prime_power(M("T"), M("T"), 2, true) == -1);
  CHECK(eta_prime_power(M("T^2"), M("T"), 2, true) == 3);
  CHECK_THROWS_AS(eta_prime_power(M("T"), M("T^2"), 1, false), DomainError);
  CHECK_THROWS_AS(eta_prime_power(M("T"), M("T"), 0, false), DomainError);
  const FieldSpec f3 = FieldSpec::create(3);
  for (const auto& p : irreducible_sieve(f3, 2))
    for (int e = 1; e <= 3; ++e)
      for (const auto& g : enumerate_monic_up_to(f3, 3))
        for (const bool unitary : {false, true})
          CHECK(eta_prime_power(g, p, e, unitary) == eta_divisor_sum(g, power(p, e), unitary));
}

TEST_CASE("divisor-sum identities") {
  CHECK(divisor_sum_identity(P("T^2"), M("T^2"), false) == 4);
  CHECK(divisor_sum_identity(P("T"), M("T^2"), false) == 0);
  CHECK(divisor_sum_identity(P("T"), M("T^2"), true) == 0);
  const FieldSpec f3 = FieldSpec::create(3);
  for (const auto& h : enumerate_monic_up_to(f3, 3))
    for (const auto& g : residues_mod(power(MonicPoly::T(f3), 4)))
      for (const bool unitary : {false, true}) CHECK_NOTHROW(divisor_sum_identity(g, h, unitary));
}

TEST_CASE("broken mu* is caught by the unitary divisor-sum identity") {
  fault::ScopedMobiusStarSignFlip flip;
  CHECK_THROWS_AS(divisor_sum_identity(P("1"), M("T"), true), InvariantError);
  CHECK_NOTHROW(divisor_sum_identity(P("1"), M("T"), false));
}

TEST_CASE("absolute sums") {
  auto r = abs_sum_bounds(M("T"), M("T^2"));
  CHECK(r.unitary_sum == 2);
  CHECK(r.unitary_closed == 2);
  r = abs_sum_bounds(M("T^2"), M("T^2"));
  CHECK(r.unitary_sum == 4);
  CHECK(r.unitary_closed == 4);
  r = abs_sum_bounds(M("T"), M("T"));
  CHECK(r.divisor_sum == 2);
  CHECK(r.bound == 4);
  CHECK(r.ok());
  const FieldSpec f3 = FieldSpec::create(3);
  for (const auto& h : enumerate_monic_up_to(f3, 3))
    for (const auto& g : enumerate_monic_up_to(f3, 3)) CHECK(abs_sum_bounds(g, h).ok());
}
