#include "polyram/selftest.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <optional>

#include "polyram/arith.hpp"
#include "polyram/errors.hpp"
#include "polyram/expansion.hpp"
#include "polyram/ramanujan.hpp"

namespace polyram {

namespace {

constexpr std::size_t kMaxSamples = 5;

CheckResult timed(std::string name, const std::function<void(CheckResult&)>& body) {
  CheckResult r;
  r.name = std::move(name);
  const auto start = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const Error& e) {
    r.fail(std::string("aborted: ") + e.what());
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::string pair_label(const Poly& g, const MonicPoly& h) { return "G=" + g.to_string() + " H=" + h.to_string(); }

// All polynomials of degree <= d, including 0.
std::vector<Poly> all_polys(const FieldSpec& field, int d) {
  return residues_mod(Poly::monomial(field.one(), d + 1));
}

std::string suffix(const FieldSpec& field) { return " over " + field.describe(); }

}  // namespace

void CheckResult::fail(std::string what) {
  ++failures;
  if (samples.size() < kMaxSamples) samples.push_back(std::move(what));
}

namespace checks {

CheckResult dual_path(const FieldSpec& field, int h_degree, std::uint64_t min_pairs) {
  return timed("dual-path eta/eta* agreement" + suffix(field), [&](CheckResult& r) {
    const auto hs = enumerate_monic_up_to(field, h_degree);
    int g_degree = h_degree;
    while (enumerate_monic_up_to(field, g_degree).size() * hs.size() < min_pairs) ++g_degree;
    const auto gs = enumerate_monic_up_to(field, g_degree);
    for (const auto& h : hs)
      for (const auto& g : gs)
        for (const bool unitary : {false, true}) {
          const double exact = eta_divisor_sum(g.poly(), h, unitary).convert_to<double>();
          const double err = std::abs(eta_character_sum(g.poly(), h, unitary) - std::complex<double>(exact, 0.0));
          r.worst = std::max(r.worst, err);
          ++r.checked;
          if (!(err < eta_tolerance(h))) r.fail((unitary ? "eta* " : "eta ") + pair_label(g.poly(), h));
        }
  });
}

CheckResult divisor_sum(const FieldSpec& field, int max_degree, bool unitary) {
  return timed(std::string(unitary ? "unitary " : "") + "divisor-sum identity" + suffix(field), [&](CheckResult& r) {
    for (const auto& h : enumerate_monic_up_to(field, max_degree))
      for (const auto& g : all_polys(field, max_degree)) {
        ++r.checked;
        try {
          divisor_sum_identity(g, h, unitary);
        } catch (const InvariantError&) {
          r.fail(pair_label(g, h));
        }
      }
  });
}

CheckResult prime_power_rule(const FieldSpec& field, int prime_degree, int max_exponent, int g_degree) {
  return timed("prime-power closed forms" + suffix(field), [&](CheckResult& r) {
    const auto gs = enumerate_monic_up_to(field, g_degree);
    for (const auto& p : irreducible_sieve(field, prime_degree))
      for (int e = 1; e <= max_exponent; ++e) {
        const MonicPoly pe = power(p, e);
        for (const auto& g : gs)
          for (const bool unitary : {false, true}) {
            ++r.checked;
            if (eta_prime_power(g, p, e, unitary) != eta_divisor_sum(g.poly(), pe, unitary))
              r.fail(std::string(unitary ? "eta* " : "eta ") + pair_label(g.poly(), pe));
          }
      }
  });
}

CheckResult abs_sum(const FieldSpec& field, int max_degree) {
  return timed("absolute-sum closed form and bounds" + suffix(field), [&](CheckResult& r) {
    const auto ms = enumerate_monic_up_to(field, max_degree);
    for (const auto& h : ms)
      for (const auto& g : ms) {
        ++r.checked;
        const auto rep = abs_sum_bounds(g, h);
        if (!rep.ok())
          r.fail(pair_label(g.poly(), h) + (rep.closed_form_holds ? "" : " closed") +
                 (rep.unitary_bound_holds ? "" : " unitary-bound") + (rep.divisor_bound_holds ? "" : " bound"));
      }
  });
}

CheckResult mobius_transform_diagonal(const FieldSpec& field, int max_degree) {
  return timed("2-variable Moebius transform of g(gcd)" + suffix(field), [&](CheckResult& r) {
    const auto ms = enumerate_monic_up_to(field, max_degree);
    const ArithFn mu = fn::mobius();
    for (const ArithFn& g : {fn::tau(), fn::sigma(1.0)}) {
      const ArithFn f = fn::compose_gcd(g, 2);
      for (const auto& a : ms)
        for (const auto& b : ms) {
          ++r.checked;
          const std::vector<MonicPoly> args{a, b};
          const FnValue got = multivar_mobius_transform(f, args);
          const FnValue want = a == b ? dirichlet_convolve(mu, g, a) : FnValue::exact(0);
          if (!(got.is_exact() && want.is_exact() && got.as_exact() == want.as_exact()))
            r.fail(g.name + " at (" + a.to_string() + ", " + b.to_string() + "): " + got.to_string() +
                   " != " + want.to_string());
        }
    }
  });
}

CheckResult zeta_partials(const std::vector<std::pair<std::uint32_t, double>>& cases, int bound) {
  return timed("zeta partial sums", [&](CheckResult& r) {
    for (const auto& [q, s] : cases) {
      const FieldSpec field = FieldSpec::from_order(q);
      const double err = std::abs(zeta_partial(field, s, bound) - zeta_A(q, s));
      const double allowed = std::pow(static_cast<double>(q), bound * (1.0 - s) + 1.0);
      r.worst = std::max(r.worst, err);
      ++r.checked;
      if (!(err <= allowed))
        r.fail("q=" + std::to_string(q) + " s=" + std::to_string(s) + " error " + std::to_string(err));
    }
  });
}

CheckResult corollary_sweep(const FieldSpec& field, int bound, int g_degree) {
  return timed("sigma/tau expansions at degree " + std::to_string(bound) + suffix(field), [&](CheckResult& r) {
    const auto ms = enumerate_monic_up_to(field, g_degree);
    const double tol = default_tolerance(field.q(), bound, g_degree);
    for (const Family family : {Family::sigma, Family::tau})
      for (const int k : {1, 2}) {
        if (family == Family::tau && k == 1) continue;
        for (const bool unitary : {false, true}) {
          VerifyOptions opt;
          opt.degree_bound = bound;
          opt.unitary = unitary;
          opt.tolerance = tol;
          std::vector<std::size_t> idx(static_cast<std::size_t>(k), 0);
          std::vector<MonicPoly> gs(static_cast<std::size_t>(k), ms.front());
          while (true) {
            for (std::size_t i = 0; i < idx.size(); ++i) gs[i] = ms[idx[i]];
            const auto rep = verify_identity(family, 1.0, k, gs, opt);
            ++r.checked;
            r.worst = std::max(r.worst, rep.residual);
            if (!rep.pass) {
              std::string label = to_string(family) + (unitary ? "* " : " ") + "k=" + std::to_string(k) + " G=(";
              for (std::size_t i = 0; i < gs.size(); ++i) label += (i ? "," : "") + gs[i].to_string();
              r.fail(label + ") residual " + std::to_string(rep.residual));
            }
            std::size_t i = 0;
            for (; i < idx.size(); ++i) {
              if (++idx[i] < ms.size()) break;
              idx[i] = 0;
            }
            if (i == idx.size()) break;
          }
        }
      }
  });
}

CheckResult exact_cancellation() {
  return timed("sigma expansion at G=T is exact at degree 2 over F_2", [&](CheckResult& r) {
    const FieldSpec f2 = FieldSpec::create(2);
    const MonicPoly t = MonicPoly::T(f2);
    VerifyOptions opt;
    opt.degree_bound = 2;
    opt.tolerance = 1e-12;
    const auto rep = verify_identity(Family::sigma, 1.0, 1, std::span<const MonicPoly>(&t, 1), opt);
    ++r.checked;
    r.worst = rep.residual;
    if (!rep.pass || rep.lhs != 1.5) r.fail("residual " + std::to_string(rep.residual));
  });
}

CheckResult closed_vs_special(int bound) {
  return timed("closed-form beta/phi coefficients against the special sum", [&](CheckResult& r) {
    const FieldSpec f2 = FieldSpec::create(2);
    const double tol = std::pow(2.0, -6);
    for (const char* text : {"1", "T", "T+1", "T^2"}) {
      const MonicPoly q_poly = parse_monic(text, f2);
      for (const Family family : {Family::beta, Family::phi})
        for (const bool unitary : {false, true}) {
          const double closed = coeff_closed_form(family, 1.0, 1, q_poly, unitary);
          const double special =
              coeff_special(family_function(family, 1.0), std::span<const MonicPoly>(&q_poly, 1), bound, unitary);
          const double err = std::abs(closed - special);
          r.worst = std::max(r.worst, err);
          ++r.checked;
          if (!(err < tol))
            r.fail(to_string(family) + (unitary ? "* " : " ") + "Q=" + text + " error " + std::to_string(err));
        }
    }
  });
}

}  // namespace checks

bool SelftestReport::passed() const {
  for (const auto& c : checks)
    if (!c.passed()) return false;
  return !checks.empty();
}

SelftestReport run_selftest(SelftestLevel level, bool inject_fault) {
  SelftestReport report;
  report.level = level == SelftestLevel::quick ? "quick" : "full";
  report.fault_injected = inject_fault;
  std::optional<fault::ScopedMobiusStarSignFlip> flip;
  if (inject_fault) flip.emplace();

  const int degree = level == SelftestLevel::quick ? 3 : 4;
  std::vector<FieldSpec> fields{FieldSpec::create(2)};
  if (level == SelftestLevel::full) fields.push_back(FieldSpec::create(3));

  auto& out = report.checks;
  for (const auto& field : fields) {
    out.push_back(checks::dual_path(field, degree));
    out.push_back(checks::divisor_sum(field, degree, false));
    out.push_back(checks::divisor_sum(field, degree, true));
    out.push_back(checks::prime_power_rule(field, 2, degree, degree));
    out.push_back(checks::abs_sum(field, degree));
    out.push_back(checks::mobius_transform_diagonal(field, 3));
  }
  out.push_back(checks::zeta_partials({{2, 2.0}, {2, 3.0}, {3, 2.0}}, 10));
  out.push_back(checks::exact_cancellation());
  if (level == SelftestLevel::full) {
    out.push_back(checks::closed_vs_special(8));
    for (const auto& field : fields) out.push_back(checks::corollary_sweep(field, 5, 2));
  } else {
    out.push_back(checks::corollary_sweep(fields.front(), 4, 1));
  }
  return report;
}

}  // namespace polyram
