#include <doctest.h>

#include <cmath>
#include <map>

#include "polyram/arith.hpp"
#include "polyram/errors.hpp"

using namespace polyram;

namespace {

// mu from its defining recursion sum_{D | G} mu(D) = [G = 1].
int mobius_oracle(const MonicPoly& g, std::map<MonicPoly, int>& memo) {
  if (g.is_one()) return 1;
  if (auto it = memo.find(g); it != memo.end()) return it->second;
  int acc = 0;
  for (const auto& d : enumerate_monic_up_to(g.field(), g.degree() - 1))
    if (divides(d, g)) acc -= mobius_oracle(d, memo);
  memo.emplace(g, acc);
  return acc;
}

std::vector<MonicPoly> brute_divisors(const MonicPoly& g) {
  std::vector<MonicPoly> out;
  for (const auto& d : enumerate_monic_up_to(g.field(), g.degree()))
    if (divides(d, g)) out.push_back(d);
  return out;
}

bool brute_unitary(const MonicPoly& d, const MonicPoly& g) { return gcd(d, exact_quotient(g, d)).is_one(); }

long long ipow(long long b, long long e) {
  long long r = 1;
  while (e-- > 0) r *= b;
  return r;
}

BigInt exact_of(const FnValue& v) { return v.as_exact(); }

}  // namespace

TEST_CASE("Moebius and counting functions") {
  for (std::int64_t q : {2, 3, 4}) {
    const FieldSpec f = FieldSpec::from_order(q);
    std::map<MonicPoly, int> memo;
    for (const auto& g : enumerate_monic_up_to(f, q == 4 ? 3 : 5)) {
      CHECK(mobius(g) == mobius_oracle(g, memo));
      const Counts c = counts(g);
      int omega = 0, big = 0;
      for (const auto& [p, e] : factor(g.poly()).factors) {
        ++omega;
        big += e;
      }
      CHECK(c.omega == omega);
      CHECK(c.big_omega == big);
      CHECK(liouville(g) == (big % 2 == 0 ? 1 : -1));
      CHECK(mobius_star(g) == (omega % 2 == 0 ? 1 : -1));
      // sum over unitary divisors of mu* is [G = 1]
      int s = 0;
      for (const auto& d : divisors(g, true)) s += mobius_star(d);
      CHECK(s == (g.is_one() ? 1 : 0));
    }
  }
}

TEST_CASE("divisor-type functions against brute-force sums") {
  for (std::int64_t q : {2, 3}) {
    const FieldSpec f = FieldSpec::from_order(q);
    for (const auto& g : enumerate_monic_up_to(f, 4)) {
      const auto divs = brute_divisors(g);
      CHECK(exact_of(tau(g)) == static_cast<long long>(divs.size()));
      for (int s : {0, 1, 2}) {
        long long sigma = 0, phi = 0, psi = 0, beta = 0;
        for (const auto& d : divs) {
          const MonicPoly rest = exact_quotient(g, d);
          const long long nd = ipow(q, (long long)d.degree() * s);
          const long long nr = ipow(q, (long long)rest.degree() * s);
          sigma += nd;
          phi += mobius(d) * nr;
          psi += mobius(d) * mobius(d) * nr;
          beta += liouville(rest) * nd;
        }
        CAPTURE(g.to_string());
        CAPTURE(s);
        CHECK(exact_of(sigma_s(g, s)) == sigma);
        CHECK(exact_of(phi_s(g, s)) == phi);
        CHECK(exact_of(psi_s(g, s)) == psi);
        CHECK(exact_of(beta_s(g, s)) == beta);
      }
      // phi_1 counts residues coprime to G
      long long coprime = 0;
      for (const auto& r : residues_mod(g.poly()))
        if (!r.is_zero() && gcd(r, g.poly()).is_one()) ++coprime;
      if (g.is_one()) coprime = 1;
      CHECK(exact_of(phi_s(g, 1)) == coprime);
    }
  }
}

TEST_CASE("real exponents") {
  const FieldSpec f = FieldSpec::create(2);
  for (const auto& g : enumerate_monic_up_to(f, 4)) {
    double sigma = 0.0, phi = 0.0;
    for (const auto& d : brute_divisors(g)) {
      sigma += std::pow(norm_real(d.poly()), 0.5);
      phi += mobius(d) * std::pow(norm_real(exact_quotient(g, d).poly()), 0.5);
    }
    const FnValue sv = sigma_s(g, 0.5);
    CHECK_FALSE(sv.is_exact());
    CHECK(sv.to_double() == doctest::Approx(sigma).epsilon(1e-12));
    CHECK(phi_s(g, 0.5).to_double() == doctest::Approx(phi).epsilon(1e-12));
    CHECK_THROWS_AS(sv.as_exact(), DomainError);
  }
  CHECK(exact_exponent(3.0));
  CHECK_FALSE(exact_exponent(0.5));
  CHECK_FALSE(exact_exponent(-1.0));
}

TEST_CASE("unitary functions") {
  for (std::int64_t q : {2, 3}) {
    const FieldSpec f = FieldSpec::from_order(q);
    for (const auto& g : enumerate_monic_up_to(f, 4)) {
      long long tau_s = 0, sigma_s = 0;
      for (const auto& d : brute_divisors(g))
        if (brute_unitary(d, g)) {
          ++tau_s;
          sigma_s += ipow(q, d.degree());
        }
      long long phi_s = 0;  // residues D with (D, G)_* = 1
      for (const auto& r : residues_mod(g.poly()))
        if (!r.is_zero() && unitary_gcd_star(r, g).is_one()) ++phi_s;
      if (g.is_one()) phi_s = 1;
      const UnitaryBasics u = unitary_basics(g);
      CHECK(u.tau_star == tau_s);
      CHECK(u.sigma_star == sigma_s);
      CHECK(u.phi_star == phi_s);
      CHECK(u.mobius_star == mobius_star(g));
    }
  }
}

TEST_CASE("multiplicativity on coprime pairs") {
  const FieldSpec f = FieldSpec::create(3);
  const auto ms = enumerate_monic_up_to(f, 2);
  const std::vector<ArithFn> fns{fn::mobius(), fn::tau(),      fn::sigma(1), fn::phi(2),        fn::psi(1),
                                 fn::beta(1),  fn::mobius_star(), fn::tau_star(), fn::sigma_star(), fn::phi_star()};
  for (const auto& fun : fns) {
    CHECK(fun.multiplicative);
    for (const auto& a : ms)
      for (const auto& b : ms)
        if (gcd(a, b).is_one()) CHECK(fun(a * b) == fun(a) * fun(b));
  }
  CHECK_FALSE(fn::omega().multiplicative);
}

TEST_CASE("Dirichlet convolution identities") {
  const FieldSpec f = FieldSpec::create(2);
  const ArithFn mu = fn::mobius(), one = fn::constant_one(), id = fn::norm_power(1);
  for (const auto& g : enumerate_monic_up_to(f, 5)) {
    CHECK(dirichlet_convolve(mu, one, g) == FnValue::exact(g.is_one() ? 1 : 0));
    CHECK(dirichlet_convolve(one, one, g) == tau(g));
    CHECK(dirichlet_convolve(id, mu, g) == phi_s(g, 1));
    CHECK(dirichlet_convolve(id, one, g) == sigma_s(g, 1));
    CHECK(dirichlet_convolve(fn::mobius_star(), one, g, true) == FnValue::exact(g.is_one() ? 1 : 0));
    CHECK(dirichlet_convolve(one, one, g, true) == FnValue::exact(unitary_basics(g).tau_star));
  }
}

TEST_CASE("multivariable Moebius transform") {
  const FieldSpec f = FieldSpec::create(2);
  const auto ms = enumerate_monic_up_to(f, 3);
  const ArithFn mu = fn::mobius();
  for (const ArithFn& g : {fn::tau(), fn::sigma(1)}) {
    const ArithFn fk = fn::compose_gcd(g, 2);
    const ArithFn transformed{2, "t", false, [&](std::span<const MonicPoly> a) { return multivar_mobius_transform(fk, a); }};
    for (const auto& a : ms)
      for (const auto& b : ms) {
        const std::vector<MonicPoly> args{a, b};
        // the transform of g o gcd lives on the diagonal
        const FnValue want = a == b ? dirichlet_convolve(mu, g, a) : FnValue::exact(0);
        CHECK(multivar_mobius_transform(fk, args) == want);
        // and the zeta transform undoes it
        CHECK(multivar_zeta_transform(transformed, args) == fk(args));
      }
  }
  // delta_k is the identity: mu_k * delta_k = mu_k
  const ArithFn d3 = fn::delta(3);
  const std::vector<MonicPoly> args{parse_monic("T", f), parse_monic("1", f), parse_monic("T^2+T", f)};
  CHECK(multivar_mobius_transform(d3, args) == FnValue::exact(mobius(args[0]) * mobius(args[2])));
  CHECK(tuple_gcd(args).is_one());
}

TEST_CASE("function registry and errors") {
  const FieldSpec f = FieldSpec::create(2);
  const MonicPoly t2 = parse_monic("T^2", f);
  for (const auto& name : fn::names()) CHECK(fn::by_name(name, 1).name.size() > 0);
  CHECK(fn::by_name("tau")(t2) == FnValue::exact(3));
  CHECK(fn::by_name("phi", 1)(t2) == FnValue::exact(2));
  CHECK_THROWS_AS(fn::by_name("nope"), DomainError);
  const std::vector<MonicPoly> two{t2, t2};
  CHECK_THROWS_AS(fn::tau()(two), DomainError);
  CHECK(fn::normalized(fn::sigma(1), 1)(t2).to_double() == doctest::Approx(7.0 / 4.0));
}

TEST_CASE("fault flip of mu* is scoped") {
  const FieldSpec f = FieldSpec::create(2);
  const MonicPoly t = MonicPoly::T(f);
  CHECK(mobius_star(t) == -1);
  {
    fault::ScopedMobiusStarSignFlip flip;
    CHECK(fault::mobius_star_sign_flipped());
    CHECK(mobius_star(t) == 1);
    CHECK(mobius_star(MonicPoly::one(f)) == 1);
  }
  CHECK_FALSE(fault::mobius_star_sign_flipped());
  CHECK(mobius_star(t) == -1);
}
