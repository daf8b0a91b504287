#pragma once

// Arithmetic functions on monic polynomials: Moebius and its unitary analogue, the divisor-type functions
// sigma_s / phi_s / psi_s / beta_s, Dirichlet and unitary convolution, and the k-variable Moebius transform.

#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "polyram/poly.hpp"

namespace polyram {

/// Value of an arithmetic function: an exact integer, or a double when the function is real-valued.
class FnValue {
 public:
  FnValue() : value_(BigInt(0)) {}
  static FnValue exact(BigInt v) { return FnValue(std::move(v)); }
  static FnValue exact(long long v) { return FnValue(BigInt(v)); }
  static FnValue real(double v) { return FnValue(v); }

  bool is_exact() const noexcept { return std::holds_alternative<BigInt>(value_); }
  /// Throws DomainError for a real value.
  const BigInt& as_exact() const;
  double to_double() const;
  bool is_zero() const;

  friend FnValue operator+(const FnValue& a, const FnValue& b);
  friend FnValue operator-(const FnValue& a, const FnValue& b);
  friend FnValue operator*(const FnValue& a, const FnValue& b);
  FnValue& operator+=(const FnValue& b) { return *this = *this + b; }
  FnValue operator-() const;
  /// Exact equality for two exact values; otherwise compares as doubles.
  friend bool operator==(const FnValue& a, const FnValue& b);

  std::string to_string() const;

 private:
  explicit FnValue(BigInt v) : value_(std::move(v)) {}
  explicit FnValue(double v) : value_(v) {}
  std::variant<BigInt, double> value_;
};

/// An arithmetic function of `arity` monic arguments.
struct ArithFn {
  int arity = 1;
  std::string name;
  /// Claimed multiplicativity: f(G_1 H_1, ..., G_k H_k) = f(G) f(H) whenever gcd(G_1...G_k, H_1...H_k) = 1.
  bool multiplicative = false;
  std::function<FnValue(std::span<const MonicPoly>)> eval;

  FnValue operator()(std::span<const MonicPoly> args) const;
  FnValue operator()(const MonicPoly& g) const { return (*this)(std::span<const MonicPoly>(&g, 1)); }
};

struct Counts {
  int omega = 0;      // distinct prime factors
  int big_omega = 0;  // prime factors with multiplicity
  int liouville = 1;  // (-1)^big_omega
};

struct UnitaryBasics {
  int mobius_star = 1;
  BigInt tau_star = 1;
  BigInt sigma_star = 1;
  BigInt phi_star = 1;
};

int mobius(const MonicPoly& g);
int mobius(const Factorization& f);
Counts counts(const MonicPoly& g);
Counts counts(const Factorization& f);
int liouville(const MonicPoly& g);

/// (-1)^omega(G).
int mobius_star(const MonicPoly& g);
int mobius_star(const Factorization& f);

/// True when s is a nonnegative integer small enough to evaluate exactly.
bool exact_exponent(double s);

FnValue tau(const MonicPoly& g);
FnValue sigma_s(const MonicPoly& g, double s);
/// Jordan totient; the divisor-sum and Euler-product forms are both evaluated and must agree.
FnValue phi_s(const MonicPoly& g, double s);
FnValue psi_s(const MonicPoly& g, double s);
FnValue beta_s(const MonicPoly& g, double s);
UnitaryBasics unitary_basics(const MonicPoly& g);

/// sum_{D | G} f(D) g(G/D), restricted to D || G when `unitary` is set.
FnValue dirichlet_convolve(const ArithFn& f, const ArithFn& g, const MonicPoly& G, bool unitary = false);

/// (mu_k * f)(G_1..G_k) = sum_{D_i | G_i} mu(G_1/D_1)...mu(G_k/D_k) f(D_1..D_k).
FnValue multivar_mobius_transform(const ArithFn& f, std::span<const MonicPoly> args);

/// (f * 1_k)(G_1..G_k) = sum_{D_i | G_i} f(D_1..D_k); inverse of the transform above.
FnValue multivar_zeta_transform(const ArithFn& f, std::span<const MonicPoly> args);

/// Monic gcd of a nonempty tuple.
MonicPoly tuple_gcd(std::span<const MonicPoly> args);

namespace fn {

ArithFn constant_one(int arity = 1);
/// delta_k: 1 at (1, ..., 1), else 0.
ArithFn delta(int arity = 1);
ArithFn mobius();
ArithFn mobius_star();
ArithFn liouville();
ArithFn omega();
ArithFn big_omega();
ArithFn tau();
ArithFn sigma(double s);
ArithFn phi(double s);
ArithFn psi(double s);
ArithFn beta(double s);
ArithFn tau_star();
ArithFn sigma_star();
ArithFn phi_star();
/// G -> |G|^s (exact for nonnegative integer s).
ArithFn norm_power(double s);

/// g(G) / |G|^s as a real-valued function.
ArithFn normalized(const ArithFn& g, double s);
/// (G_1..G_k) -> g(gcd(G_1..G_k)).
ArithFn compose_gcd(const ArithFn& g, int arity);

/// CLI identifiers: mobius, liouville, omega, bigomega, tau, sigma, phi, psi, beta, mobius-star, tau-star,
/// sigma-star, phi-star. Throws DomainError for an unknown name.
ArithFn by_name(const std::string& name, double s = 1.0);
const std::vector<std::string>& names();

}  // namespace fn

namespace fault {

/// Flips the sign of mu*(G) for G != 1 on the current thread while alive. Exists so the verification suites can
/// prove that they notice a broken unitary Moebius function.
class ScopedMobiusStarSignFlip {
 public:
  ScopedMobiusStarSignFlip();
  ~ScopedMobiusStarSignFlip();
  ScopedMobiusStarSignFlip(const ScopedMobiusStarSignFlip&) = delete;
  ScopedMobiusStarSignFlip& operator=(const ScopedMobiusStarSignFlip&) = delete;

 private:
  bool previous_;
};

bool mobius_star_sign_flipped() noexcept;

}  // namespace fault

}  // namespace polyram
