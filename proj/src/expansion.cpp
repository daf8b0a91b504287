#include "polyram/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <unordered_map>

#include "polyram/errors.hpp"
#include "polyram/ramanujan.hpp"

namespace polyram {

namespace {

// Saturating n^k, enough for budget comparisons.
std::uint64_t tuple_count(std::uint64_t n, int k) {
  std::uint64_t out = 1;
  for (int i = 0; i < k; ++i) {
    if (n != 0 && out > std::numeric_limits<std::uint64_t>::max() / n) return std::numeric_limits<std::uint64_t>::max();
    out *= n;
  }
  return out;
}

std::uint64_t monic_count(std::uint32_t q, int max_degree) {
  std::uint64_t total = 0, layer = 1;
  for (int d = 0; d <= max_degree; ++d) {
    total += layer;
    if (layer > std::numeric_limits<std::uint64_t>::max() / q) return std::numeric_limits<std::uint64_t>::max();
    layer *= q;
  }
  return total;
}

void require_bound(int b) {
  if (b < 0) throw DomainError("degree bound must be >= 0");
}

const FieldSpec& common_field(std::span<const MonicPoly> tuple) {
  if (tuple.empty()) throw DomainError("empty polynomial tuple");
  const auto& f = tuple.front().field();
  for (const auto& h : tuple)
    if (!(h.field() == f)) throw DomainError("polynomials over different fields");
  return f;
}

// Advances an odometer over [0, n)^k; false once it wraps.
bool next_tuple(std::vector<std::size_t>& idx, std::size_t n) {
  for (auto& i : idx) {
    if (++i < n) return true;
    i = 0;
  }
  return false;
}

struct LocalPower {
  int degree;    // degree of the prime
  int exponent;  // exponent in Q
};

bool compatible_from(const std::vector<std::vector<std::pair<std::uint64_t, int>>>& parts) {
  std::unordered_map<std::uint64_t, int> seen;
  for (const auto& part : parts)
    for (const auto& [prime, e] : part) {
      auto [it, fresh] = seen.emplace(prime, e);
      if (!fresh && it->second != e) return false;
    }
  return true;
}

double closed_from_shape(Family family, double ks, double zeta_ks, double zeta_2ks, std::uint32_t q,
                         const std::vector<LocalPower>& shape, bool unitary) {
  int total = 0, big_omega = 0;
  bool squarefree = true;
  for (const auto& lp : shape) {
    total += lp.degree * lp.exponent;
    big_omega += lp.exponent;
    if (lp.exponent > 1) squarefree = false;
  }
  const double qd = static_cast<double>(q);
  const double inv_norm = std::pow(qd, -ks * total);  // |Q|^{-(k+s)}
  auto prime_product = [&](double sign) {
    double acc = 1.0;
    for (const auto& lp : shape) acc *= 1.0 + sign * std::pow(qd, -ks * lp.degree);
    return acc;
  };
  switch (family) {
    case Family::sigma:
    case Family::tau:
      return zeta_ks * inv_norm * (unitary ? prime_product(-1.0) : 1.0);
    case Family::beta: {
      const double liouville = big_omega % 2 == 0 ? 1.0 : -1.0;
      return zeta_2ks / zeta_ks * liouville * inv_norm * (unitary ? prime_product(1.0) : 1.0);
    }
    case Family::phi: {
      if (!squarefree) return 0.0;
      const double mu = shape.size() % 2 == 0 ? 1.0 : -1.0;
      return mu * inv_norm / (zeta_ks * prime_product(-1.0));
    }
  }
  return 0.0;
}

double effective_s(Family family, double s) { return family == Family::tau ? 0.0 : s; }

void require_convergent(int k, double s) {
  if (k < 1) throw DomainError("k must be >= 1");
  if (k + s <= 1.0) throw DomainError("closed-form coefficients require k+s > 1");
}

std::vector<std::vector<std::pair<std::uint64_t, int>>> prime_parts(std::span<const MonicPoly> tuple) {
  std::vector<std::vector<std::pair<std::uint64_t, int>>> parts;
  for (const auto& h : tuple) {
    auto& part = parts.emplace_back();
    for (const auto& [p, e] : factor(h.poly()).factors) part.emplace_back(monic_rank(p), e);
  }
  return parts;
}

}  // namespace

std::uint64_t default_budget() {
  if (const char* env = std::getenv(kBudgetEnvVar)) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return kDefaultBudget;
}

void check_budget(std::uint64_t count, std::uint64_t budget, const std::string& what) {
  if (count > budget)
    throw ResourceError(what + " needs " + std::to_string(count) + " tuples, budget is " + std::to_string(budget));
}

double zeta_A(std::uint32_t q, double s) {
  if (!(s > 1.0)) throw DomainError("zeta_A diverges for s <= 1");
  return 1.0 / (1.0 - std::pow(static_cast<double>(q), 1.0 - s));
}

double zeta_partial(const FieldSpec& field, double s, int max_degree) {
  require_bound(max_degree);
  double acc = 0.0;
  for (int d = 0; d <= max_degree; ++d) {
    double layer = 0.0;
    for (const auto& m : enumerate_monic(field, d)) layer += std::pow(norm_real(m.poly()), -s);
    acc += layer;
  }
  return acc;
}

// --- catalog ------------------------------------------------------------------------------------------------------

MonicCatalog::MonicCatalog(FieldSpec field, int max_degree) : field_(std::move(field)), max_degree_(max_degree) {
  require_bound(max_degree);
  polys_ = enumerate_monic_up_to(field_, max_degree);
  primes_ = irreducible_sieve(field_, std::max(1, max_degree));
  std::unordered_map<std::uint64_t, std::uint32_t> prime_index;
  for (std::uint32_t i = 0; i < primes_.size(); ++i) prime_index.emplace(monic_rank(primes_[i]), i);
  factors_.reserve(polys_.size());
  for (const auto& m : polys_) {
    auto& row = factors_.emplace_back();
    if (m.is_one()) continue;
    for (const auto& [p, e] : factor(m.poly()).factors) row.push_back({prime_index.at(monic_rank(p)), e});
  }
  std::size_t acc = 0, layer = 1;
  for (int d = 0; d <= max_degree; ++d) {
    acc += layer;
    layer *= field_.q();
    prefix_.push_back(acc);
  }
}

std::size_t MonicCatalog::prefix(int d) const {
  if (d < 0) return 0;
  return prefix_[static_cast<std::size_t>(std::min(d, max_degree_))];
}

std::size_t MonicCatalog::index_of(const MonicPoly& m) const {
  if (!(m.field() == field_) || m.degree() > max_degree_) throw DomainError(m.to_string() + " is not in the catalog");
  return static_cast<std::size_t>(monic_rank(m));
}

// --- families -----------------------------------------------------------------------------------------------------

Family parse_family(const std::string& name) {
  if (name == "sigma") return Family::sigma;
  if (name == "tau") return Family::tau;
  if (name == "beta") return Family::beta;
  if (name == "phi") return Family::phi;
  throw DomainError("unknown identity family '" + name + "' (expected sigma, tau, beta or phi)");
}

std::string to_string(Family family) {
  switch (family) {
    case Family::sigma: return "sigma";
    case Family::tau: return "tau";
    case Family::beta: return "beta";
    case Family::phi: return "phi";
  }
  return "?";
}

ArithFn family_function(Family family, double s) {
  switch (family) {
    case Family::sigma: return fn::normalized(fn::sigma(s), s);
    case Family::tau: return fn::tau();
    case Family::beta: return fn::normalized(fn::beta(s), s);
    case Family::phi: return fn::normalized(fn::phi(s), s);
  }
  throw DomainError("unknown family");
}

bool unitary_compatible(std::span<const MonicPoly> tuple) {
  if (tuple.size() <= 1) return true;
  return compatible_from(prime_parts(tuple));
}

// --- coefficient sums ---------------------------------------------------------------------------------------------

double coeff_general(const ArithFn& f, std::span<const MonicPoly> tuple, int bound, bool unitary,
                     std::uint64_t budget) {
  require_bound(bound);
  const auto& field = common_field(tuple);
  const int k = static_cast<int>(tuple.size());
  if (k != f.arity) throw DomainError("tuple length does not match the arity of " + f.name);
  check_budget(tuple_count(monic_count(field.q(), bound), k), budget, "coefficient sum");

  const auto ms = enumerate_monic_up_to(field, bound);
  std::vector<std::vector<char>> allowed(static_cast<std::size_t>(k), std::vector<char>(ms.size(), 1));
  if (unitary)
    for (int i = 0; i < k; ++i)
      for (std::size_t m = 0; m < ms.size(); ++m)
        allowed[static_cast<std::size_t>(i)][m] = gcd(ms[m], tuple[static_cast<std::size_t>(i)]).is_one();

  double acc = 0.0;
  std::vector<std::size_t> idx(static_cast<std::size_t>(k), 0);
  std::vector<MonicPoly> args(tuple.begin(), tuple.end());
  do {
    bool ok = true;
    double denom = 1.0;
    for (std::size_t i = 0; i < idx.size() && ok; ++i) {
      ok = allowed[i][idx[i]];
      args[i] = ms[idx[i]] * tuple[i];
      denom *= norm_real(field, args[i].degree());
    }
    if (!ok) continue;
    const double v = multivar_mobius_transform(f, args).to_double();
    if (v != 0.0) acc += v / denom;
  } while (next_tuple(idx, ms.size()));
  return acc;
}

double coeff_special(const ArithFn& g, std::span<const MonicPoly> tuple, int bound, bool unitary,
                     std::uint64_t budget) {
  require_bound(bound);
  const auto& field = common_field(tuple);
  if (g.arity != 1) throw DomainError("coeff_special expects a single-variable function");
  const int k = static_cast<int>(tuple.size());
  if (unitary && !unitary_compatible(tuple)) return 0.0;
  check_budget(monic_count(field.q(), bound), budget, "coefficient sum");

  const MonicPoly q_poly = lcm(std::vector<MonicPoly>(tuple.begin(), tuple.end()), field);
  const ArithFn mu = fn::mobius();
  double acc = 0.0;
  for (const auto& m : enumerate_monic_up_to(field, bound)) {
    if (unitary && !gcd(m, q_poly).is_one()) continue;
    const double v = dirichlet_convolve(mu, g, m * q_poly).to_double();
    if (v != 0.0) acc += v / std::pow(norm_real(field, m.degree()), k);
  }
  return acc / std::pow(norm_real(field, q_poly.degree()), k);
}

double coeff_euler(const ArithFn& f, std::span<const MonicPoly> tuple, int prime_degree_bound, int exponent_bound,
                   bool unitary) {
  if (!f.multiplicative) throw DomainError(f.name + " does not claim multiplicativity; no Euler product");
  if (prime_degree_bound < 1 || exponent_bound < 1) throw DomainError("Euler-product bounds must be >= 1");
  const auto& field = common_field(tuple);
  const int k = static_cast<int>(tuple.size());
  if (k != f.arity) throw DomainError("tuple length does not match the arity of " + f.name);

  std::vector<Factorization> facts;
  for (const auto& h : tuple) facts.push_back(factor(h.poly()));
  std::vector<MonicPoly> primes = irreducible_sieve(field, prime_degree_bound);
  for (const auto& fz : facts)
    for (const auto& [p, e] : fz.factors)
      if (std::find(primes.begin(), primes.end(), p) == primes.end()) primes.push_back(p);

  double product = 1.0;
  for (const auto& p : primes) {
    std::vector<int> lo(static_cast<std::size_t>(k)), hi(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
      const int nu = facts[static_cast<std::size_t>(i)].valuation(p);
      const auto u = static_cast<std::size_t>(i);
      if (unitary) {
        lo[u] = nu >= 1 ? nu : 0;
        hi[u] = nu >= 1 ? nu : exponent_bound;
      } else {
        lo[u] = nu;
        hi[u] = std::max(nu, exponent_bound);
      }
    }
    std::vector<int> e = lo;
    std::vector<MonicPoly> args(static_cast<std::size_t>(k), MonicPoly::one(field));
    double local = 0.0;
    while (true) {
      int total = 0;
      for (std::size_t i = 0; i < e.size(); ++i) {
        args[i] = power(p, e[i]);
        total += e[i];
      }
      const double v = multivar_mobius_transform(f, args).to_double();
      if (v != 0.0) local += v / norm_real(field, p.degree() * total);
      std::size_t i = 0;
      for (; i < e.size(); ++i) {
        if (++e[i] <= hi[i]) break;
        e[i] = lo[i];
      }
      if (i == e.size()) break;
    }
    product *= local;
  }
  return product;
}

double coeff_closed_form(Family family, double s, int k, const MonicPoly& q_poly, bool unitary) {
  s = effective_s(family, s);
  require_convergent(k, s);
  const auto q = q_poly.field().q();
  const double ks = k + s;
  std::vector<LocalPower> shape;
  for (const auto& [p, e] : factor(q_poly.poly()).factors) shape.push_back({p.degree(), e});
  return closed_from_shape(family, ks, zeta_A(q, ks), zeta_A(q, 2 * ks), q, shape, unitary);
}

double coeff_closed_form_tuple(Family family, double s, std::span<const MonicPoly> tuple, bool unitary) {
  const auto& field = common_field(tuple);
  if (unitary && !unitary_compatible(tuple)) {
    require_convergent(static_cast<int>(tuple.size()), effective_s(family, s));
    return 0.0;
  }
  return coeff_closed_form(family, s, static_cast<int>(tuple.size()),
                           lcm(std::vector<MonicPoly>(tuple.begin(), tuple.end()), field), unitary);
}

// --- tables -------------------------------------------------------------------------------------------------------

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::general_sum: return "general-sum";
    case Provenance::euler_product: return "euler-product";
    case Provenance::closed_form: return "closed-form";
  }
  return "?";
}

Provenance parse_provenance(const std::string& name) {
  if (name == "general-sum") return Provenance::general_sum;
  if (name == "euler-product") return Provenance::euler_product;
  if (name == "closed-form") return Provenance::closed_form;
  throw DomainError("unknown provenance '" + name + "'");
}

double CoeffTable::at(std::span<const MonicPoly> tuple) const {
  const auto it = entries.find(std::vector<MonicPoly>(tuple.begin(), tuple.end()));
  if (it == entries.end()) {
    std::string key;
    for (const auto& h : tuple) key += (key.empty() ? "" : ", ") + h.to_string();
    throw DomainError("no coefficient tabulated for (" + key + ")");
  }
  return it->second;
}

namespace {

template <class Fn>
void for_each_tuple(const FieldSpec& field, int k, int max_degree, std::uint64_t budget, Fn&& body) {
  if (k < 1) throw DomainError("k must be >= 1");
  require_bound(max_degree);
  const auto ms = enumerate_monic_up_to(field, max_degree);
  check_budget(tuple_count(ms.size(), k), budget, "coefficient table");
  std::vector<std::size_t> idx(static_cast<std::size_t>(k), 0);
  std::vector<MonicPoly> tuple(static_cast<std::size_t>(k), ms.front());
  do {
    for (std::size_t i = 0; i < idx.size(); ++i) tuple[i] = ms[idx[i]];
    body(tuple);
  } while (next_tuple(idx, ms.size()));
}

}  // namespace

CoeffTable tabulate_closed_form(Family family, double s, int k, const FieldSpec& field, int max_degree, bool unitary,
                                std::uint64_t budget) {
  CoeffTable table{k, unitary, Provenance::closed_form, {}};
  std::map<MonicPoly, double> by_lcm;
  for_each_tuple(field, k, max_degree, budget, [&](const std::vector<MonicPoly>& tuple) {
    const double c = coeff_closed_form_tuple(family, s, tuple, unitary);
    table.entries.emplace(tuple, c);
    if (unitary && !unitary_compatible(tuple)) return;
    const MonicPoly q_poly = lcm(tuple, field);
    const auto [it, fresh] = by_lcm.emplace(q_poly, c);
    if (!fresh && it->second != c)
      throw InvariantError("closed-form coefficient is not a function of the lcm at Q=" + q_poly.to_string());
  });
  return table;
}

CoeffTable tabulate_general(const ArithFn& f, const FieldSpec& field, int max_degree, int m_bound, bool unitary,
                            std::uint64_t budget) {
  CoeffTable table{f.arity, unitary, Provenance::general_sum, {}};
  check_budget(tuple_count(monic_count(field.q(), max_degree), f.arity) *
                   std::min<std::uint64_t>(tuple_count(monic_count(field.q(), m_bound), f.arity), budget + 1),
               budget, "coefficient table");
  for_each_tuple(field, f.arity, max_degree, budget, [&](const std::vector<MonicPoly>& tuple) {
    table.entries.emplace(tuple, coeff_general(f, tuple, m_bound, unitary, budget));
  });
  return table;
}

ClosedFormSource::ClosedFormSource(Family family, double s, int k, bool unitary)
    : family_(family), s_(effective_s(family, s)), k_(k), unitary_(unitary) {
  require_convergent(k, s_);
}

double ClosedFormSource::coefficient(const MonicCatalog& catalog, std::span<const std::size_t> tuple) const {
  if (static_cast<int>(tuple.size()) != k_) throw DomainError("tuple length does not match k");
  // Merge exponent vectors into the shape of Q = lcm.
  std::vector<std::pair<std::uint32_t, int>> merged;
  bool compatible = true;
  for (const auto i : tuple)
    for (const auto& pp : catalog.factorization(i)) {
      auto it = std::find_if(merged.begin(), merged.end(), [&](const auto& m) { return m.first == pp.prime; });
      if (it == merged.end()) {
        merged.emplace_back(pp.prime, pp.exponent);
      } else {
        if (it->second != pp.exponent) compatible = false;
        it->second = std::max(it->second, pp.exponent);
      }
    }
  if (unitary_ && !compatible) return 0.0;
  std::vector<LocalPower> shape;
  shape.reserve(merged.size());
  for (const auto& [p, e] : merged) shape.push_back({catalog.primes()[p].degree(), e});
  const auto q = catalog.field().q();
  const double ks = k_ + s_;
  return closed_from_shape(family_, ks, zeta_A(q, ks), zeta_A(q, 2 * ks), q, shape, unitary_);
}

double TableSource::coefficient(const MonicCatalog& catalog, std::span<const std::size_t> tuple) const {
  std::vector<MonicPoly> key;
  key.reserve(tuple.size());
  for (const auto i : tuple) key.push_back(catalog.poly(i));
  return table_.at(key);
}

// --- expansions ---------------------------------------------------------------------------------------------------

std::vector<PartialSum> expand_truncated(std::span<const MonicPoly> g_tuple, const CoefficientSource& coeffs,
                                         int bound, bool unitary, std::uint64_t budget) {
  require_bound(bound);
  const auto& field = common_field(g_tuple);
  const int k = static_cast<int>(g_tuple.size());
  if (k != coeffs.arity()) throw DomainError("G-tuple length does not match the coefficient arity");
  check_budget(tuple_count(monic_count(field.q(), bound), k), budget, "expansion");

  const MonicCatalog catalog(field, bound);
  const std::size_t n = catalog.size();
  std::vector<std::vector<double>> eta_values;
  for (const auto& g : g_tuple) {
    auto& row = eta_values.emplace_back(n);
    for (std::size_t h = 0; h < n; ++h)
      row[h] = eta_divisor_sum(g.poly(), catalog.poly(h), unitary).convert_to<double>();
  }

  std::vector<double> strata(static_cast<std::size_t>(bound) + 1, 0.0);
  std::vector<std::size_t> idx(static_cast<std::size_t>(k), 0);
  do {
    double prod = 1.0;
    int top = 0;
    for (std::size_t i = 0; i < idx.size() && prod != 0.0; ++i) {
      prod *= eta_values[i][idx[i]];
      top = std::max(top, catalog.degree(idx[i]));
    }
    if (prod == 0.0) continue;
    strata[static_cast<std::size_t>(top)] += coeffs.coefficient(catalog, idx) * prod;
  } while (next_tuple(idx, n));

  std::vector<PartialSum> out;
  double running = 0.0;
  for (int b = 0; b <= bound; ++b) {
    running += strata[static_cast<std::size_t>(b)];
    out.push_back({b, running});
  }
  return out;
}

double default_tolerance(std::uint32_t q, int bound, int margin) {
  return std::max(1e-6, 4.0 * std::pow(static_cast<double>(q), -(bound - margin)));
}

IdentityReport verify_identity(Family family, double s, int k, std::span<const MonicPoly> g_tuple,
                               const VerifyOptions& options) {
  if (k < 1) throw DomainError("k must be >= 1");
  if (static_cast<int>(g_tuple.size()) != k)
    throw DomainError("expected " + std::to_string(k) + " G polynomials, got " + std::to_string(g_tuple.size()));
  s = effective_s(family, s);
  if (family == Family::tau && k < 2)
    throw DomainError("the tau expansion requires (k≥2); k=1 gives a divergent coefficient series");
  if (k + s <= 1.0) throw DomainError("the " + to_string(family) + " expansion requires k+s > 1");
  const auto& field = common_field(g_tuple);

  IdentityReport report;
  report.identity = to_string(family);
  report.q = field.q();
  report.k = k;
  report.s = s;
  report.unitary = options.unitary;
  int margin = 0;
  for (const auto& g : g_tuple) {
    report.g_tuple.push_back(g.to_string());
    margin = std::max(margin, g.degree());
  }
  report.lhs = family_function(family, s)(tuple_gcd(g_tuple)).to_double();

  const ClosedFormSource source(family, s, k, options.unitary);
  report.partials = expand_truncated(g_tuple, source, options.degree_bound, options.unitary, options.budget);
  for (const auto& ps : report.partials) report.residuals.push_back(std::abs(ps.value - report.lhs));
  report.residual = report.residuals.back();
  report.tolerance = options.tolerance.value_or(default_tolerance(field.q(), options.degree_bound, margin));
  report.pass = report.residual < report.tolerance;
  return report;
}

WintnerReport wintner_diagnostic(const ArithFn& f, const FieldSpec& field, int bound, std::uint64_t budget) {
  require_bound(bound);
  const int k = f.arity;
  check_budget(tuple_count(monic_count(field.q(), bound), k), budget, "Wintner diagnostic");
  const MonicCatalog catalog(field, bound);
  WintnerReport out;
  std::vector<std::size_t> idx(static_cast<std::size_t>(k), 0);
  std::vector<MonicPoly> args(static_cast<std::size_t>(k), MonicPoly::one(field));
  do {
    int omega = 0, degree = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      args[i] = catalog.poly(idx[i]);
      omega += static_cast<int>(catalog.factorization(idx[i]).size());
      degree += catalog.degree(idx[i]);
    }
    const double v = std::abs(multivar_mobius_transform(f, args).to_double());
    if (v == 0.0) continue;
    const double term = v / norm_real(field, degree);
    out.unweighted += term;
    out.weighted += std::ldexp(term, omega);
  } while (next_tuple(idx, catalog.size()));
  return out;
}

}  // namespace polyram
