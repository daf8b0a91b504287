#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "polyram/errors.hpp"
#include "polyram/expansion.hpp"
#include "polyram/ramanujan.hpp"

using namespace polyram;

namespace {

const FieldSpec& f2() {
  static const FieldSpec f = FieldSpec::create(2);
  return f;
}

MonicPoly M(const char* text, const FieldSpec& f = f2()) { return parse_monic(text, f); }

// sum_{d <= n} q^d q^{-d s}
double geometric_zeta(double q, double s, int n) {
  double acc = 0.0;
  for (int d = 0; d <= n; ++d) acc += std::pow(q, d * (1.0 - s));
  return acc;
}

ArithFn sigma_normalized() { return family_function(Family::sigma, 1.0); }

// omega by brute force: irreducible monic divisors.
int brute_omega(const MonicPoly& g) {
  int count = 0;
  for (const auto& d : enumerate_monic_up_to(g.field(), g.degree()))
    if (d.degree() >= 1 && divides(d, g) && is_irreducible(d)) ++count;
  return count;
}

std::vector<double> values(const std::vector<PartialSum>& ps) {
  std::vector<double> out;
  for (const auto& p : ps) out.push_back(p.value);
  return out;
}

}  // namespace

TEST_CASE("zeta of F_q[T]") {
  CHECK(zeta_A(2, 2.0) == doctest::Approx(geometric_zeta(2, 2, 200)).epsilon(1e-15));
  CHECK(zeta_A(2, 2.0) == doctest::Approx(2.0));
  CHECK(zeta_A(2, 3.0) == doctest::Approx(4.0 / 3.0));
  CHECK(zeta_A(3, 2.0) == doctest::Approx(1.5));
  CHECK_THROWS_AS(zeta_A(2, 1.0), DomainError);
  CHECK_THROWS_AS(zeta_A(2, 0.5), DomainError);
  for (auto [q, s] : {std::pair{2u, 2.0}, {2u, 3.0}, {3u, 2.0}, {4u, 1.5}}) {
    const FieldSpec f = FieldSpec::from_order(q);
    for (int b = 0; b <= 6; ++b) {
      const double partial = zeta_partial(f, s, b);
      CHECK(partial == doctest::Approx(geometric_zeta(q, s, b)).epsilon(1e-12));
      CHECK(std::abs(partial - zeta_A(q, s)) <= std::pow(q, b * (1.0 - s) + 1.0));
    }
  }
}

TEST_CASE("monic catalog") {
  const FieldSpec f3 = FieldSpec::create(3);
  const MonicCatalog cat(f3, 3);
  CHECK(cat.size() == 40);
  CHECK(cat.prefix(0) == 1);
  CHECK(cat.prefix(2) == 13);
  CHECK(cat.prefix(-1) == 0);
  for (std::size_t i = 0; i < cat.size(); ++i) {
    CHECK(cat.index_of(cat.poly(i)) == i);
    MonicPoly rebuilt = MonicPoly::one(f3);
    for (const auto& pp : cat.factorization(i)) rebuilt = rebuilt * power(cat.primes()[pp.prime], pp.exponent);
    CHECK(rebuilt == cat.poly(i));
  }
  CHECK_THROWS_AS(cat.index_of(M("T^4", f3)), DomainError);
}

TEST_CASE("general coefficient sums") {
  const std::vector<MonicPoly> t{M("T")};
  const ArithFn f = fn::compose_gcd(sigma_normalized(), 1);
  for (int b : {0, 3, 10}) CHECK(coeff_general(f, t, b, false) == doctest::Approx(0.25 * geometric_zeta(2, 2, b)));
  CHECK(std::abs(coeff_general(f, t, 12, false) - 0.5) < 1e-3);

  // mu * delta = mu, and sum_{deg M = d} mu(M) is 1, -q, 0, 0, ...
  const std::vector<MonicPoly> one{M("1")};
  CHECK(coeff_general(fn::delta(1), one, 0, false) == 1.0);
  for (int b : {1, 2, 5}) CHECK(coeff_general(fn::delta(1), one, b, false) == doctest::Approx(0.0));

  // only M_1 T = M_2 T survives; both cofactors have degree <= 2
  const std::vector<MonicPoly> tt{M("T"), M("T")};
  double diagonal = 0.0;
  for (const auto& m : enumerate_monic_up_to(f2(), 2)) diagonal += 1.0 / std::pow(norm_real(m.poly()) * 2.0, 2);
  CHECK(coeff_general(fn::compose_gcd(fn::tau(), 2), tt, 2, false) == doctest::Approx(diagonal).epsilon(1e-14));
  CHECK(diagonal == doctest::Approx(0.4375));

  try {
    coeff_general(fn::compose_gcd(fn::tau(), 2), tt, 6, false, 1000);
    FAIL("expected a resource error");
  } catch (const ResourceError& e) {
    CHECK(std::string(e.what()).find("16129") != std::string::npos);
  }
  CHECK_THROWS_AS(coeff_general(fn::tau(), tt, 2, false), DomainError);
  CHECK_THROWS_AS(coeff_general(f, t, -1, false), DomainError);
}

TEST_CASE("special coefficient sums") {
  const std::vector<MonicPoly> t{M("T")};
  const double c4 = coeff_special(sigma_normalized(), t, 4, false);
  CHECK(c4 == doctest::Approx(0.25 * geometric_zeta(2, 2, 4)));
  CHECK(std::abs(c4 - 0.5) < std::pow(2.0, -4));

  const std::vector<MonicPoly> ones{M("1"), M("1")};
  CHECK(coeff_special(fn::tau(), ones, 3, false) == doctest::Approx(geometric_zeta(2, 2, 3)));

  CHECK(std::abs(coeff_special(sigma_normalized(), t, 14, true) - 3.0 / 8.0) < 1e-4);
  CHECK_THROWS_AS(coeff_special(fn::compose_gcd(fn::tau(), 2), t, 2, false), DomainError);
}

TEST_CASE("special and general sums coincide at matched truncation") {
  // coeff_general on g o gcd sums over M Q with deg(M Q / H_i) <= B', which is deg M <= B for
  // B' = B + deg Q - min deg H_i.
  const auto hs = enumerate_monic_up_to(f2(), 2);
  const int b = 2;
  for (const ArithFn& g : {sigma_normalized(), fn::tau()})
    for (const bool unitary : {false, true}) {
      for (const auto& h : hs) {
        const std::vector<MonicPoly> tuple{h};
        CHECK(coeff_special(g, tuple, b, unitary) ==
              doctest::Approx(coeff_general(fn::compose_gcd(g, 1), tuple, b, unitary)).epsilon(1e-9));
      }
      for (const auto& h1 : hs)
        for (const auto& h2 : hs) {
          const std::vector<MonicPoly> tuple{h1, h2};
          const int shift = lcm(tuple, f2()).degree() - std::min(h1.degree(), h2.degree());
          const double special = coeff_special(g, tuple, b - 1, unitary);
          const double general = coeff_general(fn::compose_gcd(g, 2), tuple, b - 1 + shift, unitary);
          CAPTURE(h1.to_string());
          CAPTURE(h2.to_string());
          CAPTURE(unitary);
          CHECK(std::abs(special - general) < 1e-9);
        }
    }
}

TEST_CASE("unitary coefficients vanish on incompatible tuples") {
  const std::vector<MonicPoly> bad{M("T"), M("T^2")};
  const std::vector<MonicPoly> good{M("T^2"), M("T^3+T^2")};
  CHECK_FALSE(unitary_compatible(bad));
  CHECK(unitary_compatible(good));
  CHECK(unitary_compatible(std::vector<MonicPoly>{M("T^3")}));
  const ArithFn tau2 = fn::compose_gcd(fn::tau(), 2);
  CHECK(coeff_general(tau2, bad, 4, true) == 0.0);
  CHECK(coeff_closed_form_tuple(Family::tau, 0.0, bad, true) == 0.0);
  CHECK(coeff_closed_form_tuple(Family::tau, 0.0, bad, false) != 0.0);
  // compatible: the closed form at Q is the limit of the general sum
  const double closed = coeff_closed_form_tuple(Family::tau, 0.0, good, true);
  CHECK(closed == doctest::Approx(coeff_closed_form(Family::tau, 0.0, 2, lcm(good, f2()), true)));
  CHECK(std::abs(coeff_special(fn::tau(), good, 10, true) - closed) < 1e-5);
}

TEST_CASE("Euler products") {
  const std::vector<MonicPoly> one{M("1")};
  const ArithFn f1 = fn::compose_gcd(sigma_normalized(), 1);
  double oracle = 1.0;  // local sums sum_{e <= 4} |P|^{-2e}
  for (const auto& p : irreducible_sieve(f2(), 3)) {
    double local = 0.0;
    for (int e = 0; e <= 4; ++e) local += std::pow(norm_real(p.poly()), -2.0 * e);
    oracle *= local;
  }
  const double euler = coeff_euler(f1, one, 3, 4, false);
  CHECK(euler == doctest::Approx(oracle).epsilon(1e-13));
  CHECK(std::abs(euler - 2.0) < 0.1);

  const std::vector<MonicPoly> t1{M("T"), M("1")};
  const ArithFn tau2 = fn::compose_gcd(fn::tau(), 2);
  const double e2 = coeff_euler(tau2, t1, 3, 4, false);
  const double g2 = coeff_general(tau2, t1, 4, false);
  CHECK(std::abs(e2 - 0.5) < 0.02);
  CHECK(g2 == doctest::Approx(0.25 * geometric_zeta(2, 2, 3)));
  CHECK(std::abs(e2 - g2) < 0.02 + 1.0 / 32.0);

  // delta_k: a squared prime in some H_i kills its local factor
  const std::vector<MonicPoly> sq{M("T^2"), M("1")};
  CHECK(coeff_euler(fn::delta(2), sq, 3, 4, false) == 0.0);
  // for squarefree H the product only tends to 0 as more primes enter
  const std::vector<MonicPoly> t{M("T")};
  double prev = 1.0;
  for (int pd = 1; pd <= 6; ++pd) {
    const double v = std::abs(coeff_euler(fn::delta(1), t, pd, 3, false));
    CHECK(v < prev);
    prev = v;
  }

  // unitary Euler product agrees with the unitary general sum
  for (const char* h : {"T", "T^2", "T^2+T"}) {
    const std::vector<MonicPoly> tuple{M(h)};
    const double closed = coeff_closed_form(Family::sigma, 1.0, 1, M(h), true);
    CHECK(std::abs(coeff_euler(f1, tuple, 8, 8, true) - closed) < 2e-3);
    CHECK(std::abs(coeff_euler(f1, tuple, 8, 8, false) - coeff_closed_form(Family::sigma, 1.0, 1, M(h), false)) <
          2e-3);
  }

  CHECK_THROWS_AS(coeff_euler(fn::compose_gcd(fn::omega(), 1), one, 3, 4, false), DomainError);
  CHECK_THROWS_AS(coeff_euler(f1, one, 0, 4, false), DomainError);
}

TEST_CASE("closed-form coefficients") {
  CHECK(coeff_closed_form(Family::sigma, 1.0, 1, M("T"), false) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(coeff_closed_form(Family::phi, 1.0, 1, M("T"), true) == doctest::Approx(-1.0 / 6.0).epsilon(1e-12));
  CHECK(coeff_closed_form(Family::beta, 1.0, 1, M("T"), false) == doctest::Approx(-1.0 / 7.0).epsilon(1e-12));
  CHECK(coeff_closed_form(Family::sigma, 1.0, 1, M("T"), true) == doctest::Approx(3.0 / 8.0).epsilon(1e-12));
  CHECK(coeff_closed_form(Family::phi, 1.0, 1, M("T^2"), false) == 0.0);
  CHECK_THROWS_AS(coeff_closed_form(Family::sigma, 0.0, 1, M("T"), false), DomainError);
  CHECK_THROWS_AS(coeff_closed_form(Family::tau, 5.0, 1, M("T"), false), DomainError);
  CHECK_THROWS_AS(coeff_closed_form(Family::sigma, 1.0, 0, M("T"), false), DomainError);

  for (const char* q : {"1", "T", "T+1", "T^2"}) {
    const std::vector<MonicPoly> tuple{M(q)};
    for (const bool unitary : {false, true})
      CHECK(std::abs(coeff_special(sigma_normalized(), tuple, 8, unitary) -
                     coeff_closed_form(Family::sigma, 1.0, 1, M(q), unitary)) < std::pow(2.0, -7));
  }
}

TEST_CASE("closed-form coefficients depend only on the lcm") {
  const FieldSpec f3 = FieldSpec::create(3);
  for (const Family fam : {Family::sigma, Family::tau, Family::beta, Family::phi}) {
    for (const bool unitary : {false, true}) {
      CHECK_NOTHROW(tabulate_closed_form(fam, 1.0, 2, f3, 2, unitary));
      const std::vector<MonicPoly> a{M("T", f3), M("T+1", f3)}, b{M("T+1", f3), M("T", f3)},
          c{M("T^2+T", f3), M("1", f3)}, d{M("T^2+T", f3), M("T", f3)};
      const double ca = coeff_closed_form_tuple(fam, 1.0, a, unitary);
      CHECK(ca == coeff_closed_form_tuple(fam, 1.0, b, unitary));
      CHECK(ca == coeff_closed_form_tuple(fam, 1.0, c, unitary));
      CHECK(ca == coeff_closed_form_tuple(fam, 1.0, d, unitary));
    }
  }
  const CoeffTable table = tabulate_closed_form(Family::sigma, 1.0, 1, f2(), 2, false);
  CHECK(table.entries.size() == 7);
  CHECK(table.provenance == Provenance::closed_form);
  const std::vector<MonicPoly> t{M("T")};
  CHECK(table.at(t) == doctest::Approx(0.5));
  const std::vector<MonicPoly> t3{M("T^3")};
  CHECK_THROWS_AS(table.at(t3), DomainError);
  for (const Provenance p : {Provenance::general_sum, Provenance::euler_product, Provenance::closed_form})
    CHECK(parse_provenance(to_string(p)) == p);
  for (const Family fam : {Family::sigma, Family::tau, Family::beta, Family::phi})
    CHECK(parse_family(to_string(fam)) == fam);
  CHECK_THROWS_AS(parse_family("zeta"), DomainError);
}

TEST_CASE("truncated expansions") {
  const std::vector<MonicPoly> t{M("T")};
  const ClosedFormSource sigma1(Family::sigma, 1.0, 1, false);
  const auto ps = expand_truncated(t, sigma1, 2, false);
  REQUIRE(ps.size() == 3);
  CHECK(ps[2].degree_bound == 2);
  CHECK(ps[2].value == 1.5);

  // the same sum written out over the 7 monic H of degree <= 2
  double brute = 0.0;
  for (const auto& h : enumerate_monic_up_to(f2(), 2))
    brute += 2.0 / std::pow(norm_real(h.poly()), 2) * eta(M("T"), h).exact.convert_to<double>();
  CHECK(brute == 1.5);

  const std::vector<MonicPoly> one{M("1")};
  CHECK(expand_truncated(one, sigma1, 0, false)[0].value == doctest::Approx(2.0));

  const std::vector<MonicPoly> tt{M("T"), M("T")};
  const ClosedFormSource tau2(Family::tau, 0.0, 2, false);
  const auto pt = expand_truncated(tt, tau2, 4, false);
  CHECK(pt[1].value == doctest::Approx(2.75).epsilon(1e-14));
  // brute-force partials with explicit lcm coefficients
  for (int b = 2; b <= 4; ++b) {
    double acc = 0.0;
    const auto hs = enumerate_monic_up_to(f2(), b);
    for (const auto& h1 : hs)
      for (const auto& h2 : hs) {
        const double c = 2.0 / std::pow(norm_real(lcm({h1, h2}, f2()).poly()), 2);
        acc += c * (eta(M("T"), h1).exact * eta(M("T"), h2).exact).convert_to<double>();
      }
    CHECK(pt[static_cast<std::size_t>(b)].value == doctest::Approx(acc).epsilon(1e-12));
  }

  // table-backed coefficients reproduce the closed-form source
  const CoeffTable table = tabulate_closed_form(Family::tau, 0.0, 2, f2(), 3, false);
  const TableSource from_table(table);
  CHECK(values(expand_truncated(tt, from_table, 3, false)) == values(expand_truncated(tt, tau2, 3, false)));
  const TableSource short_table(tabulate_closed_form(Family::tau, 0.0, 2, f2(), 1, false));
  CHECK_THROWS_AS(expand_truncated(tt, short_table, 2, false), DomainError);

  // deterministic reduction
  CHECK(values(expand_truncated(tt, tau2, 4, true)) == values(expand_truncated(tt, tau2, 4, true)));

  CHECK_THROWS_AS(expand_truncated(tt, tau2, 8, false, 1000), ResourceError);
  CHECK_THROWS_AS(expand_truncated(t, tau2, 2, false), DomainError);
}

TEST_CASE("general-sum table converges toward the closed form") {
  const CoeffTable table = tabulate_general(fn::compose_gcd(sigma_normalized(), 1), f2(), 2, 12, false);
  CHECK(table.provenance == Provenance::general_sum);
  for (const auto& [key, value] : table.entries)
    CHECK(std::abs(value - coeff_closed_form(Family::sigma, 1.0, 1, key.front(), false)) < 1e-3);
  const std::vector<MonicPoly> t{M("T")};
  const TableSource src(table);
  CHECK(std::abs(expand_truncated(t, src, 2, false).back().value - 1.5) < 1e-3);
}

TEST_CASE("identity verification") {
  const std::vector<MonicPoly> t{M("T")};
  VerifyOptions opt;
  opt.degree_bound = 2;
  opt.tolerance = 1e-9;
  const IdentityReport r = verify_identity(Family::sigma, 1.0, 1, t, opt);
  CHECK(r.pass);
  CHECK(r.residual == 0.0);
  CHECK(r.lhs == 1.5);
  CHECK(r.partials.size() == 3);
  CHECK(r.residuals.size() == 3);
  CHECK(r.g_tuple == std::vector<std::string>{"T"});
  CHECK(r.q == 2);

  const std::vector<MonicPoly> tt{M("T"), M("T")};
  opt.degree_bound = 4;
  opt.tolerance = 0.1;
  const IdentityReport rt = verify_identity(Family::tau, 0.0, 2, tt, opt);
  CHECK(rt.pass);
  CHECK(rt.lhs == 2.0);
  CHECK(rt.s == 0.0);

  try {
    verify_identity(Family::tau, 0.0, 1, t, opt);
    FAIL("expected a domain error");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("(k≥2)") != std::string::npos);
  }
  opt.unitary = true;
  CHECK_THROWS_AS(verify_identity(Family::tau, 0.0, 1, t, opt), DomainError);
  CHECK_THROWS_AS(verify_identity(Family::sigma, 0.0, 1, t, opt), DomainError);
  CHECK_THROWS_AS(verify_identity(Family::sigma, 1.0, 2, t, opt), DomainError);
  CHECK_THROWS_AS(verify_identity(Family::sigma, 1.0, 0, {}, opt), DomainError);

  CHECK(default_tolerance(2, 5, 2) == doctest::Approx(0.5));
  CHECK(default_tolerance(3, 5, 2) == doctest::Approx(4.0 / 27.0));
  CHECK(default_tolerance(2, 40, 0) == 1e-6);
}

TEST_CASE("residuals settle monotonically on the shipped fixtures") {
  struct Fixture {
    Family family;
    int k;
    std::vector<const char*> g;
    bool unitary;
    int from;  // first degree from which the residuals no longer increase, observed
  };
  // the unitary sigma expansion at T^2+T crosses its limit near degree 5, so it is left out of this list
  const std::vector<Fixture> fixtures{
      {Family::sigma, 1, {"T^2"}, false, 0},       {Family::tau, 2, {"T", "T"}, false, 1},
      {Family::tau, 2, {"T", "T+1"}, true, 0},     {Family::sigma, 2, {"T^2", "T"}, false, 3},
      {Family::beta, 1, {"T^2"}, false, 0},        {Family::phi, 2, {"T+1", "T^2+1"}, true, 0},
  };
  for (const auto& fx : fixtures) {
    std::vector<MonicPoly> gs;
    for (const char* g : fx.g) gs.push_back(M(g));
    VerifyOptions opt;
    opt.degree_bound = 6;
    opt.unitary = fx.unitary;
    const auto r = verify_identity(fx.family, 1.0, fx.k, gs, opt);
    CAPTURE(to_string(fx.family));
    CAPTURE(fx.g[0]);
    for (std::size_t b = static_cast<std::size_t>(fx.from) + 1; b < r.residuals.size(); ++b)
      CHECK(r.residuals[b] <= r.residuals[b - 1] + 1e-15);
    CHECK(r.pass);
  }
}

TEST_CASE("Wintner diagnostic") {
  for (int k : {1, 2}) {
    const auto w = wintner_diagnostic(fn::constant_one(k), f2(), 3);
    CHECK(w.weighted == 1.0);
    CHECK(w.unweighted == 1.0);
  }
  // mu * (sigma_1(gcd)/|gcd|) = 1/|G|
  double oracle = 0.0, plain = 0.0;
  for (const auto& g : enumerate_monic_up_to(f2(), 3)) {
    oracle += std::pow(2.0, brute_omega(g)) / std::pow(norm_real(g.poly()), 2);
    plain += 1.0 / std::pow(norm_real(g.poly()), 2);
  }
  const auto w = wintner_diagnostic(fn::compose_gcd(sigma_normalized(), 1), f2(), 3);
  CHECK(w.weighted == doctest::Approx(oracle).epsilon(1e-14));
  CHECK(w.unweighted == doctest::Approx(plain).epsilon(1e-14));

  // delta_1: mu * delta = mu, so the sum runs over squarefree G
  double sq = 0.0;
  for (const auto& g : enumerate_monic_up_to(f2(), 3))
    if (mobius(g) != 0) sq += std::pow(2.0, brute_omega(g)) / norm_real(g.poly());
  CHECK(wintner_diagnostic(fn::delta(1), f2(), 3).weighted == doctest::Approx(sq).epsilon(1e-14));
  CHECK_THROWS_AS(wintner_diagnostic(fn::constant_one(2), f2(), 12, 1000), ResourceError);
}
