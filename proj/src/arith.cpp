#include "polyram/arith.hpp"

#include <cmath>
#include <sstream>

#include "polyram/errors.hpp"

namespace polyram {

// --- FnValue ----------------------------------------------------------------------------------------------------

const BigInt& FnValue::as_exact() const {
  if (!is_exact()) throw DomainError("value " + to_string() + " is not an exact integer");
  return std::get<BigInt>(value_);
}

double FnValue::to_double() const {
  if (is_exact()) return std::get<BigInt>(value_).convert_to<double>();
  return std::get<double>(value_);
}

bool FnValue::is_zero() const { return is_exact() ? std::get<BigInt>(value_) == 0 : std::get<double>(value_) == 0.0; }

FnValue operator+(const FnValue& a, const FnValue& b) {
  if (a.is_exact() && b.is_exact()) return FnValue(std::get<BigInt>(a.value_) + std::get<BigInt>(b.value_));
  return FnValue(a.to_double() + b.to_double());
}

FnValue operator-(const FnValue& a, const FnValue& b) {
  if (a.is_exact() && b.is_exact()) return FnValue(std::get<BigInt>(a.value_) - std::get<BigInt>(b.value_));
  return FnValue(a.to_double() - b.to_double());
}

FnValue operator*(const FnValue& a, const FnValue& b) {
  if (a.is_exact() && b.is_exact()) return FnValue(std::get<BigInt>(a.value_) * std::get<BigInt>(b.value_));
  return FnValue(a.to_double() * b.to_double());
}

FnValue FnValue::operator-() const {
  if (is_exact()) return FnValue(BigInt(-std::get<BigInt>(value_)));
  return FnValue(-std::get<double>(value_));
}

bool operator==(const FnValue& a, const FnValue& b) {
  if (a.is_exact() && b.is_exact()) return std::get<BigInt>(a.value_) == std::get<BigInt>(b.value_);
  return a.to_double() == b.to_double();
}

std::string FnValue::to_string() const {
  if (is_exact()) return std::get<BigInt>(value_).str();
  std::ostringstream os;
  os.precision(17);
  os << std::get<double>(value_);
  return os.str();
}

FnValue ArithFn::operator()(std::span<const MonicPoly> args) const {
  if (static_cast<int>(args.size()) != arity)
    throw DomainError(name + " expects " + std::to_string(arity) + " arguments, got " + std::to_string(args.size()));
  return eval(args);
}

// --- fault injection --------------------------------------------------------------------------------------------

namespace fault {

namespace {
thread_local bool g_flip_mobius_star = false;
}

ScopedMobiusStarSignFlip::ScopedMobiusStarSignFlip() : previous_(g_flip_mobius_star) { g_flip_mobius_star = true; }
ScopedMobiusStarSignFlip::~ScopedMobiusStarSignFlip() { g_flip_mobius_star = previous_; }
bool mobius_star_sign_flipped() noexcept { return g_flip_mobius_star; }

}  // namespace fault

// --- single-variable functions ----------------------------------------------------------------------------------

namespace {

BigInt norm_of(const FieldSpec& field, int degree) {
  return boost::multiprecision::pow(BigInt(field.q()), static_cast<unsigned>(degree));
}

BigInt ipow(const BigInt& base, unsigned e) { return boost::multiprecision::pow(base, e); }

}  // namespace

bool exact_exponent(double s) { return s >= 0.0 && s <= 64.0 && std::floor(s) == s; }

int mobius(const Factorization& f) {
  for (const auto& [p, e] : f.factors)
    if (e > 1) return 0;
  return f.factors.size() % 2 == 0 ? 1 : -1;
}

int mobius(const MonicPoly& g) { return mobius(factor(g.poly())); }

Counts counts(const Factorization& f) {
  Counts c;
  c.omega = static_cast<int>(f.factors.size());
  for (const auto& [p, e] : f.factors) c.big_omega += e;
  c.liouville = c.big_omega % 2 == 0 ? 1 : -1;
  return c;
}

Counts counts(const MonicPoly& g) { return counts(factor(g.poly())); }

int liouville(const MonicPoly& g) { return counts(g).liouville; }

int mobius_star(const Factorization& f) {
  const int value = f.factors.size() % 2 == 0 ? 1 : -1;
  if (fault::mobius_star_sign_flipped() && !f.factors.empty()) return -value;
  return value;
}

int mobius_star(const MonicPoly& g) { return mobius_star(factor(g.poly())); }

FnValue tau(const MonicPoly& g) { return sigma_s(g, 0.0); }

FnValue sigma_s(const MonicPoly& g, double s) {
  const auto divs = divisors(g);
  if (exact_exponent(s)) {
    BigInt acc = 0;
    for (const auto& d : divs) acc += ipow(norm_of(g.field(), d.degree()), static_cast<unsigned>(s));
    return FnValue::exact(acc);
  }
  double acc = 0.0;
  for (const auto& d : divs) acc += std::pow(norm_real(g.field(), d.degree()), s);
  return FnValue::real(acc);
}

FnValue phi_s(const MonicPoly& g, double s) {
  const auto f = factor(g.poly());
  const auto divs = divisors(f, g.field());
  if (exact_exponent(s)) {
    const auto us = static_cast<unsigned>(s);
    BigInt by_divisors = 0;
    for (const auto& d : divs) {
      const int m = mobius(exact_quotient(g, d));
      if (m != 0) by_divisors += m * ipow(norm_of(g.field(), d.degree()), us);
    }
    BigInt by_product = 1;
    for (const auto& [p, e] : f.factors) {
      const BigInt np = norm_of(g.field(), p.degree());
      by_product *= ipow(np, us * static_cast<unsigned>(e)) - ipow(np, us * static_cast<unsigned>(e - 1));
    }
    if (by_divisors != by_product)
      throw InvariantError("phi_s mismatch at " + g.to_string() + ": " + by_divisors.str() + " vs " + by_product.str());
    return FnValue::exact(by_divisors);
  }
  double by_divisors = 0.0;
  for (const auto& d : divs) {
    const int m = mobius(exact_quotient(g, d));
    if (m != 0) by_divisors += m * std::pow(norm_real(g.field(), d.degree()), s);
  }
  double by_product = std::pow(norm_real(g.field(), g.degree()), s);
  for (const auto& [p, e] : f.factors) by_product *= 1.0 - std::pow(norm_real(g.field(), p.degree()), -s);
  const double scale = std::max({1.0, std::fabs(by_divisors), std::fabs(by_product)});
  if (std::fabs(by_divisors - by_product) > 1e-9 * scale)
    throw InvariantError("phi_s mismatch at " + g.to_string());
  return FnValue::real(by_product);
}

FnValue psi_s(const MonicPoly& g, double s) {
  const auto f = factor(g.poly());
  if (exact_exponent(s)) {
    const auto us = static_cast<unsigned>(s);
    BigInt acc = 1;
    for (const auto& [p, e] : f.factors) {
      const BigInt np = norm_of(g.field(), p.degree());
      acc *= ipow(np, us * static_cast<unsigned>(e)) + ipow(np, us * static_cast<unsigned>(e - 1));
    }
    return FnValue::exact(acc);
  }
  double acc = std::pow(norm_real(g.field(), g.degree()), s);
  for (const auto& [p, e] : f.factors) acc *= 1.0 + std::pow(norm_real(g.field(), p.degree()), -s);
  return FnValue::real(acc);
}

FnValue beta_s(const MonicPoly& g, double s) {
  const auto divs = divisors(g);
  if (exact_exponent(s)) {
    BigInt acc = 0;
    for (const auto& d : divs)
      acc += liouville(exact_quotient(g, d)) * ipow(norm_of(g.field(), d.degree()), static_cast<unsigned>(s));
    return FnValue::exact(acc);
  }
  double acc = 0.0;
  for (const auto& d : divs) acc += liouville(exact_quotient(g, d)) * std::pow(norm_real(g.field(), d.degree()), s);
  return FnValue::real(acc);
}

UnitaryBasics unitary_basics(const MonicPoly& g) {
  const auto f = factor(g.poly());
  UnitaryBasics out;
  out.mobius_star = mobius_star(f);
  for (const auto& [p, e] : f.factors) {
    const BigInt pe = norm_of(g.field(), p.degree() * e);
    out.tau_star *= 2;
    out.sigma_star *= pe + 1;
    out.phi_star *= pe - 1;
  }
  return out;
}

// --- convolutions -----------------------------------------------------------------------------------------------

FnValue dirichlet_convolve(const ArithFn& f, const ArithFn& g, const MonicPoly& G, bool unitary) {
  if (f.arity != 1 || g.arity != 1) throw DomainError("dirichlet_convolve takes single-variable functions");
  FnValue acc;
  for (const auto& d : divisors(G, unitary)) acc += f(d) * g(exact_quotient(G, d));
  return acc;
}

MonicPoly tuple_gcd(std::span<const MonicPoly> args) {
  if (args.empty()) throw DomainError("gcd of an empty tuple");
  MonicPoly acc = args[0];
  for (std::size_t i = 1; i < args.size(); ++i) acc = gcd(acc.poly(), args[i].poly());
  return acc;
}

namespace {

struct WeightedDivisor {
  MonicPoly divisor;
  int weight;
};

// Divisors D of G with mu(G/D) != 0, paired with mu(G/D).
std::vector<WeightedDivisor> mobius_divisors(const MonicPoly& g) {
  const auto f = factor(g.poly());
  std::vector<WeightedDivisor> out{{g, 1}};
  for (const auto& [prime, e] : f.factors) {
    const std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i) out.push_back({exact_quotient(out[i].divisor, prime), -out[i].weight});
  }
  return out;
}

template <typename Visit>
void for_each_product(const std::vector<std::vector<WeightedDivisor>>& lists, Visit&& visit) {
  const std::size_t k = lists.size();
  for (const auto& l : lists)
    if (l.empty()) return;
  std::vector<std::size_t> idx(k, 0);
  std::vector<MonicPoly> args;
  args.reserve(k);
  while (true) {
    args.clear();
    int weight = 1;
    for (std::size_t i = 0; i < k; ++i) {
      args.push_back(lists[i][idx[i]].divisor);
      weight *= lists[i][idx[i]].weight;
    }
    visit(std::span<const MonicPoly>(args), weight);
    std::size_t pos = 0;
    while (pos < k && ++idx[pos] == lists[pos].size()) idx[pos++] = 0;
    if (pos == k) return;
  }
}

FnValue weighted_sum(const ArithFn& f, const std::vector<std::vector<WeightedDivisor>>& lists) {
  FnValue acc;
  for_each_product(lists, [&](std::span<const MonicPoly> args, int weight) {
    const FnValue v = f(args);
    if (weight == 1)
      acc += v;
    else
      acc = acc - v;
  });
  return acc;
}

}  // namespace

FnValue multivar_mobius_transform(const ArithFn& f, std::span<const MonicPoly> args) {
  if (static_cast<int>(args.size()) != f.arity) throw DomainError("argument count does not match arity of " + f.name);
  std::vector<std::vector<WeightedDivisor>> lists;
  lists.reserve(args.size());
  for (const auto& g : args) lists.push_back(mobius_divisors(g));
  return weighted_sum(f, lists);
}

FnValue multivar_zeta_transform(const ArithFn& f, std::span<const MonicPoly> args) {
  if (static_cast<int>(args.size()) != f.arity) throw DomainError("argument count does not match arity of " + f.name);
  std::vector<std::vector<WeightedDivisor>> lists;
  for (const auto& g : args) {
    std::vector<WeightedDivisor> l;
    for (auto& d : divisors(g)) l.push_back({std::move(d), 1});
    lists.push_back(std::move(l));
  }
  return weighted_sum(f, lists);
}

// --- function objects -------------------------------------------------------------------------------------------

namespace fn {

namespace {

ArithFn unary(std::string name, bool multiplicative, std::function<FnValue(const MonicPoly&)> body) {
  ArithFn out;
  out.arity = 1;
  out.name = std::move(name);
  out.multiplicative = multiplicative;
  out.eval = [body = std::move(body)](std::span<const MonicPoly> args) { return body(args[0]); };
  return out;
}

std::string with_s(const std::string& base, double s) {
  std::ostringstream os;
  os << base << "_" << s;
  return os.str();
}

}  // namespace

ArithFn constant_one(int arity) {
  return {arity, "1", true, [](std::span<const MonicPoly>) { return FnValue::exact(1); }};
}

ArithFn delta(int arity) {
  return {arity, "delta", true, [](std::span<const MonicPoly> args) {
            for (const auto& a : args)
              if (!a.is_one()) return FnValue::exact(0);
            return FnValue::exact(1);
          }};
}

ArithFn mobius() { return unary("mobius", true, [](const MonicPoly& g) { return FnValue::exact(polyram::mobius(g)); }); }
ArithFn mobius_star() {
  return unary("mobius-star", true, [](const MonicPoly& g) { return FnValue::exact(polyram::mobius_star(g)); });
}
ArithFn liouville() {
  return unary("liouville", true, [](const MonicPoly& g) { return FnValue::exact(polyram::liouville(g)); });
}
ArithFn omega() { return unary("omega", false, [](const MonicPoly& g) { return FnValue::exact(counts(g).omega); }); }
ArithFn big_omega() {
  return unary("bigomega", false, [](const MonicPoly& g) { return FnValue::exact(counts(g).big_omega); });
}
ArithFn tau() { return unary("tau", true, [](const MonicPoly& g) { return polyram::tau(g); }); }
ArithFn sigma(double s) { return unary(with_s("sigma", s), true, [s](const MonicPoly& g) { return sigma_s(g, s); }); }
ArithFn phi(double s) { return unary(with_s("phi", s), true, [s](const MonicPoly& g) { return phi_s(g, s); }); }
ArithFn psi(double s) { return unary(with_s("psi", s), true, [s](const MonicPoly& g) { return psi_s(g, s); }); }
ArithFn beta(double s) { return unary(with_s("beta", s), true, [s](const MonicPoly& g) { return beta_s(g, s); }); }
ArithFn tau_star() {
  return unary("tau-star", true, [](const MonicPoly& g) { return FnValue::exact(unitary_basics(g).tau_star); });
}
ArithFn sigma_star() {
  return unary("sigma-star", true, [](const MonicPoly& g) { return FnValue::exact(unitary_basics(g).sigma_star); });
}
ArithFn phi_star() {
  return unary("phi-star", true, [](const MonicPoly& g) { return FnValue::exact(unitary_basics(g).phi_star); });
}

ArithFn norm_power(double s) {
  return unary(with_s("norm^", s), true, [s](const MonicPoly& g) {
    if (exact_exponent(s)) return FnValue::exact(ipow(norm_of(g.field(), g.degree()), static_cast<unsigned>(s)));
    return FnValue::real(std::pow(norm_real(g.field(), g.degree()), s));
  });
}

ArithFn normalized(const ArithFn& g, double s) {
  if (g.arity != 1) throw DomainError("normalized expects a single-variable function");
  return unary(g.name + "/|.|^" + with_s("", s).substr(1), g.multiplicative, [g, s](const MonicPoly& x) {
    return FnValue::real(g(x).to_double() / std::pow(norm_real(x.field(), x.degree()), s));
  });
}

ArithFn compose_gcd(const ArithFn& g, int arity) {
  if (g.arity != 1) throw DomainError("compose_gcd expects a single-variable function");
  if (arity < 1) throw DomainError("arity must be >= 1");
  return {arity, g.name + "(gcd)", g.multiplicative, [g](std::span<const MonicPoly> args) { return g(tuple_gcd(args)); }};
}

const std::vector<std::string>& names() {
  static const std::vector<std::string> all{"mobius", "liouville", "omega",       "bigomega", "tau",
                                            "sigma",  "phi",       "psi",         "beta",     "mobius-star",
                                            "tau-star", "sigma-star", "phi-star"};
  return all;
}

ArithFn by_name(const std::string& name, double s) {
  if (name == "mobius") return mobius();
  if (name == "liouville") return liouville();
  if (name == "omega") return omega();
  if (name == "bigomega") return big_omega();
  if (name == "tau") return tau();
  if (name == "sigma") return sigma(s);
  if (name == "phi") return phi(s);
  if (name == "psi") return psi(s);
  if (name == "beta") return beta(s);
  if (name == "mobius-star") return mobius_star();
  if (name == "tau-star") return tau_star();
  if (name == "sigma-star") return sigma_star();
  if (name == "phi-star") return phi_star();
  throw DomainError("unknown arithmetic function '" + name + "'");
}

}  // namespace fn

}  // namespace polyram
