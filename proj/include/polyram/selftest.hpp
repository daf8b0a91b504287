#pragma once

// Exhaustive small-instance checks of the library's identities. Used by `polyram selftest` and the acceptance
// binary.

#include <cstdint>
#include <string>
#include <vector>

#include "polyram/field.hpp"

namespace polyram {

struct CheckResult {
  std::string name;
  std::uint64_t checked = 0;
  std::uint64_t failures = 0;
  std::vector<std::string> samples;  // first few failures
  double seconds = 0.0;
  double worst = 0.0;  // largest observed error, where meaningful

  bool passed() const { return checked > 0 && failures == 0; }
  void fail(std::string what);
};

namespace checks {

/// Character path vs divisor path for eta and eta*, H monic of degree <= h_degree. G runs over monic polynomials of
/// degree <= h_degree, extended to larger degrees until at least min_pairs (G, H) pairs are covered.
CheckResult dual_path(const FieldSpec& field, int h_degree, std::uint64_t min_pairs = 1000);

/// sum_{D | H} eta(G, D) = |H| [H | G] (or the unitary analogue), G of degree <= max_degree including 0.
CheckResult divisor_sum(const FieldSpec& field, int max_degree, bool unitary);

/// Closed prime-power values against the divisor path, both variants.
CheckResult prime_power_rule(const FieldSpec& field, int prime_degree, int max_exponent, int g_degree);

/// Exact unitary absolute sum and the 2^omega(H) |G| bounds.
CheckResult abs_sum(const FieldSpec& field, int max_degree);

/// The 2-variable Moebius transform of g o gcd is (mu * g) on the diagonal and 0 elsewhere, g in {tau, sigma_1}.
CheckResult mobius_transform_diagonal(const FieldSpec& field, int max_degree);

/// |zeta partial - zeta_A| <= q^{B(1-s)+1}.
CheckResult zeta_partials(const std::vector<std::pair<std::uint32_t, double>>& cases, int bound);

/// sigma (s = 1) and tau expansions for k in {1, 2}, both variants, every G-tuple of degree <= g_degree, checked at
/// `bound` against max(1e-6, 4 q^{-(bound - g_degree)}). tau with k = 1 is skipped.
CheckResult corollary_sweep(const FieldSpec& field, int bound, int g_degree);

/// The sigma, k = 1, G = T expansion over F_2 is exact at degree 2.
CheckResult exact_cancellation();

/// Closed-form beta and phi coefficients against coeff_special at degree `bound`, Q in {1, T, T+1, T^2}, q = 2.
CheckResult closed_vs_special(int bound);

}  // namespace checks

enum class SelftestLevel { quick, full };

struct SelftestReport {
  std::string level;
  bool fault_injected = false;
  std::vector<CheckResult> checks;

  bool passed() const;
};

/// quick: degree <= 3 over F_2. full: degree <= 4 over F_2 and F_3 plus every expansion fixture. With
/// inject_fault the sign of mu* is flipped for the duration of the run.
SelftestReport run_selftest(SelftestLevel level, bool inject_fault = false);

}  // namespace polyram
