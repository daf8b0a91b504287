#include "polyram/poly.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <mutex>

#include "polyram/errors.hpp"

namespace polyram {

namespace {

void require_same(const FieldSpec& a, const FieldSpec& b) {
  if (!(a == b)) throw DomainError("polynomials over different fields: " + a.describe() + " vs " + b.describe());
}

}  // namespace

// --- Poly -------------------------------------------------------------------------------------------------------

Poly::Poly(FieldSpec field, std::vector<std::uint32_t> codes) : field_(std::move(field)), codes_(std::move(codes)) {
  for (auto c : codes_)
    if (c >= field_.q()) throw DomainError("coefficient code out of range for " + field_.describe());
  trim();
}

Poly::Poly(FieldSpec field, const std::vector<FieldElement>& coeffs) : field_(std::move(field)) {
  codes_.reserve(coeffs.size());
  for (const auto& c : coeffs) {
    require_same(field_, c.field());
    codes_.push_back(c.code());
  }
  trim();
}

Poly Poly::constant(const FieldElement& c) { return Poly(c.field(), std::vector<std::uint32_t>{c.code()}); }

Poly Poly::monomial(const FieldElement& c, int degree) {
  std::vector<std::uint32_t> codes(static_cast<std::size_t>(degree + 1), 0);
  codes.back() = c.code();
  return Poly(c.field(), std::move(codes));
}

void Poly::trim() {
  while (!codes_.empty() && codes_.back() == 0) codes_.pop_back();
}

FieldElement Poly::coeff(int i) const {
  if (i < 0 || i > degree()) return field_.zero();
  return {field_, codes_[static_cast<std::size_t>(i)]};
}

FieldElement Poly::leading() const {
  if (is_zero()) return field_.zero();
  return {field_, codes_.back()};
}

Poly Poly::operator-() const {
  Poly out(field_);
  out.codes_.reserve(codes_.size());
  for (auto c : codes_) out.codes_.push_back(field_.neg(c));
  return out;
}

Poly Poly::scaled(const FieldElement& c) const {
  require_same(field_, c.field());
  Poly out(field_);
  out.codes_.reserve(codes_.size());
  for (auto v : codes_) out.codes_.push_back(field_.mul(v, c.code()));
  out.trim();
  return out;
}

Poly operator+(const Poly& a, const Poly& b) {
  require_same(a.field_, b.field_);
  Poly out(a.field_);
  out.codes_.resize(std::max(a.codes_.size(), b.codes_.size()), 0);
  for (std::size_t i = 0; i < out.codes_.size(); ++i) {
    const std::uint32_t x = i < a.codes_.size() ? a.codes_[i] : 0;
    const std::uint32_t y = i < b.codes_.size() ? b.codes_[i] : 0;
    out.codes_[i] = a.field_.add(x, y);
  }
  out.trim();
  return out;
}

Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

Poly operator*(const Poly& a, const Poly& b) {
  require_same(a.field_, b.field_);
  Poly out(a.field_);
  if (a.is_zero() || b.is_zero()) return out;
  const auto& f = a.field_;
  out.codes_.assign(a.codes_.size() + b.codes_.size() - 1, 0);
  for (std::size_t i = 0; i < a.codes_.size(); ++i) {
    if (a.codes_[i] == 0) continue;
    for (std::size_t j = 0; j < b.codes_.size(); ++j)
      out.codes_[i + j] = f.add(out.codes_[i + j], f.mul(a.codes_[i], b.codes_[j]));
  }
  out.trim();
  return out;
}

bool operator==(const Poly& a, const Poly& b) { return a.field_ == b.field_ && a.codes_ == b.codes_; }

std::strong_ordering operator<=>(const Poly& a, const Poly& b) {
  if (auto c = a.degree() <=> b.degree(); c != 0) return c;
  for (int i = a.degree(); i >= 0; --i) {
    if (auto c = a.codes_[static_cast<std::size_t>(i)] <=> b.codes_[static_cast<std::size_t>(i)]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

std::string Poly::to_string() const { return format_poly(*this); }

MonicPoly::MonicPoly(Poly p) : p_(std::move(p)) {
  if (!p_.is_monic()) throw DomainError("polynomial " + p_.to_string() + " is not monic");
}

Poly Factorization::recombine() const {
  Poly acc = Poly::constant(unit);
  for (const auto& [prime, e] : factors)
    for (int i = 0; i < e; ++i) acc = acc * prime.poly();
  return acc;
}

int Factorization::valuation(const MonicPoly& prime) const {
  for (const auto& [p, e] : factors)
    if (p == prime) return e;
  return 0;
}

// --- parsing ----------------------------------------------------------------------------------------------------

namespace {

struct PolyParser {
  const FieldSpec& field;
  std::string_view text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool peek(char c) {
    skip_ws();
    return pos < text.size() && text[pos] == c;
  }
  // Next non-space character after the current '*', without consuming anything.
  char after_star() const {
    std::size_t i = pos + 1;
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    return i < text.size() ? text[i] : '\0';
  }

  long number() {
    skip_ws();
    if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos]))) throw ParseError("expected a number", pos);
    long v = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      v = v * 10 + (text[pos] - '0');
      if (v > 1'000'000) throw ParseError("number too large", pos);
      ++pos;
    }
    return v;
  }

  // x-term inside an extension-field coefficient: 'x' ['^' e], already scaled by `scale`.
  std::uint32_t x_term(std::uint32_t scale) {
    if (field.n() == 1) throw ParseError("'x' is not available in a prime field", pos);
    ++pos;  // 'x'
    long e = 1;
    if (peek('^')) {
      ++pos;
      e = number();
    }
    return field.mul(scale, field.generator().pow(static_cast<std::uint64_t>(e)).code());
  }

  std::uint32_t coefficient_atom() {
    skip_ws();
    if (pos >= text.size()) throw ParseError("unexpected end of input", pos);
    const char c = text[pos];
    if (c == '(') {
      const std::size_t open = pos;
      const std::size_t close = text.find(')', pos);
      if (close == std::string_view::npos) throw ParseError("unbalanced '('", open);
      if (field.n() == 1) {
        // Prime fields accept a parenthesized integer only.
        ++pos;
        const std::size_t at = pos;
        const long v = number();
        if (v >= field.p()) throw ParseError("coefficient " + std::to_string(v) + " not in F_" + std::to_string(field.p()), at);
        if (!peek(')')) throw ParseError("expected ')'", pos);
        ++pos;
        return static_cast<std::uint32_t>(v);
      }
      try {
        const auto elem = field.parse(text.substr(open + 1, close - open - 1));
        pos = close + 1;
        return elem.code();
      } catch (const ParseError& e) {
        throw ParseError("bad field element", open + 1 + e.position());
      }
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t at = pos;
      const long v = number();
      if (v >= field.p()) throw ParseError("coefficient " + std::to_string(v) + " not in F_" + std::to_string(field.p()), at);
      if (peek('*') && after_star() == 'x') {
        ++pos;
        skip_ws();
        return x_term(static_cast<std::uint32_t>(v));
      }
      return static_cast<std::uint32_t>(v);
    }
    if (c == 'x') return x_term(1);
    throw ParseError("unexpected character '" + std::string(1, c) + "'", pos);
  }

  long t_power() {
    ++pos;  // 'T'
    if (peek('^')) {
      ++pos;
      return number();
    }
    return 1;
  }

  void term(std::vector<std::uint32_t>& acc) {
    skip_ws();
    std::uint32_t coeff = 1;
    long e = 0;
    if (pos < text.size() && text[pos] == 'T') {
      e = t_power();
    } else {
      coeff = coefficient_atom();
      if (peek('*')) {
        if (after_star() != 'T') throw ParseError("expected 'T' after '*'", pos + 1);
        ++pos;
        skip_ws();
        e = t_power();
      }
    }
    if (e > 4096) throw ParseError("exponent too large", pos);
    if (acc.size() <= static_cast<std::size_t>(e)) acc.resize(static_cast<std::size_t>(e + 1), 0);
    acc[static_cast<std::size_t>(e)] = field.add(acc[static_cast<std::size_t>(e)], coeff);
  }

  Poly parse() {
    std::vector<std::uint32_t> acc;
    term(acc);
    while (peek('+')) {
      ++pos;
      term(acc);
    }
    skip_ws();
    if (pos != text.size()) throw ParseError("unexpected character '" + std::string(1, text[pos]) + "'", pos);
    return Poly(field, std::move(acc));
  }
};

std::string format_coefficient(const FieldElement& c, bool standalone) {
  if (c.in_prime_field()) return c.to_string();
  const std::string s = c.to_string();
  if (standalone && s.find('+') == std::string::npos) return s;
  return "(" + s + ")";
}

}  // namespace

Poly parse_poly(std::string_view text, const FieldSpec& field) {
  PolyParser parser{field, text};
  return parser.parse();
}

MonicPoly parse_monic(std::string_view text, const FieldSpec& field) {
  auto p = parse_poly(text, field);
  if (!p.is_monic()) throw DomainError("expected a monic polynomial, got " + format_poly(p));
  return MonicPoly(std::move(p));
}

std::string format_poly(const Poly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (int i = p.degree(); i >= 0; --i) {
    const auto c = p.coeff(i);
    if (c.is_zero()) continue;
    if (!out.empty()) out += "+";
    if (i == 0) {
      out += format_coefficient(c, true);
      continue;
    }
    if (!c.is_one()) out += format_coefficient(c, false) + "*";
    out += "T";
    if (i > 1) out += "^" + std::to_string(i);
  }
  return out;
}

// --- arithmetic -------------------------------------------------------------------------------------------------

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
  require_same(a.field(), b.field());
  if (b.is_zero()) throw DivisionByZero("division by the zero polynomial");
  const auto& f = a.field();
  if (a.degree() < b.degree()) return {Poly(f), a};
  std::vector<std::uint32_t> r = a.codes();
  const auto& bc = b.codes();
  const int db = b.degree();
  const std::uint32_t lead_inv = f.inv(bc.back());
  std::vector<std::uint32_t> q(static_cast<std::size_t>(a.degree() - db + 1), 0);
  for (int top = a.degree(); top >= db; --top) {
    const std::uint32_t c = r[static_cast<std::size_t>(top)];
    if (c == 0) continue;
    const std::uint32_t factor = f.mul(c, lead_inv);
    q[static_cast<std::size_t>(top - db)] = factor;
    for (int i = 0; i <= db; ++i) {
      auto& slot = r[static_cast<std::size_t>(top - db + i)];
      slot = f.sub(slot, f.mul(factor, bc[static_cast<std::size_t>(i)]));
    }
  }
  r.resize(static_cast<std::size_t>(db));
  return {Poly(f, std::move(q)), Poly(f, std::move(r))};
}

Poly mod(const Poly& a, const Poly& b) { return divmod(a, b).second; }

bool divides(const Poly& d, const Poly& a) { return mod(a, d).is_zero(); }

MonicPoly exact_quotient(const MonicPoly& a, const MonicPoly& d) {
  auto [q, r] = divmod(a.poly(), d.poly());
  if (!r.is_zero()) throw InvariantError(d.to_string() + " does not divide " + a.to_string());
  return MonicPoly(std::move(q));
}

std::pair<FieldElement, MonicPoly> monic_normalize(const Poly& a) {
  if (a.is_zero()) throw DomainError("the zero polynomial has no monic normalization");
  const auto unit = a.leading();
  return {unit, MonicPoly(a.scaled(unit.inverse()))};
}

MonicPoly gcd(const Poly& a, const Poly& b) {
  require_same(a.field(), b.field());
  if (a.is_zero() && b.is_zero()) throw DomainError("gcd(0, 0) is undefined");
  Poly x = a, y = b;
  while (!y.is_zero()) {
    Poly r = mod(x, y);
    x = std::move(y);
    y = std::move(r);
  }
  return monic_normalize(x).second;
}

MonicPoly lcm(const std::vector<MonicPoly>& polys, const FieldSpec& field) {
  std::map<MonicPoly, int> exps;
  for (const auto& m : polys) {
    require_same(field, m.field());
    for (const auto& [prime, e] : factor(m.poly()).factors) {
      auto [it, inserted] = exps.try_emplace(prime, e);
      if (!inserted) it->second = std::max(it->second, e);
    }
  }
  MonicPoly acc = MonicPoly::one(field);
  for (const auto& [prime, e] : exps) acc = acc * power(prime, e);
  return acc;
}

BigInt norm(const Poly& a) {
  if (a.is_zero()) throw DomainError("|0| is undefined");
  BigInt q = a.field().q();
  return boost::multiprecision::pow(q, static_cast<unsigned>(a.degree()));
}

double norm_real(const FieldSpec& field, int degree) {
  double v = 1.0;
  for (int i = 0; i < degree; ++i) v *= field.q();
  return v;
}

double norm_real(const Poly& a) {
  if (a.is_zero()) throw DomainError("|0| is undefined");
  return norm_real(a.field(), a.degree());
}

MonicPoly power(const MonicPoly& base, int exponent) {
  MonicPoly acc = MonicPoly::one(base.field());
  for (int i = 0; i < exponent; ++i) acc = acc * base;
  return acc;
}

// --- enumeration ------------------------------------------------------------------------------------------------

std::vector<MonicPoly> enumerate_monic(const FieldSpec& field, int degree) {
  if (degree < 0) throw DomainError("degree must be >= 0");
  const std::uint32_t q = field.q();
  std::uint64_t total = 1;
  for (int i = 0; i < degree; ++i) total *= q;
  std::vector<MonicPoly> out;
  out.reserve(total);
  std::vector<std::uint32_t> codes(static_cast<std::size_t>(degree + 1), 0);
  codes.back() = 1;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t c = idx;
    for (int i = 0; i < degree; ++i) {
      codes[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(c % q);
      c /= q;
    }
    out.emplace_back(Poly(field, codes));
  }
  return out;
}

std::vector<MonicPoly> enumerate_monic_up_to(const FieldSpec& field, int max_degree) {
  std::vector<MonicPoly> out;
  for (int d = 0; d <= max_degree; ++d) {
    auto layer = enumerate_monic(field, d);
    std::move(layer.begin(), layer.end(), std::back_inserter(out));
  }
  return out;
}

std::vector<Poly> residues_mod(const Poly& h) {
  if (h.is_zero()) throw DomainError("residues modulo the zero polynomial");
  const auto& field = h.field();
  const int m = h.degree();
  const std::uint32_t q = field.q();
  std::uint64_t total = 1;
  for (int i = 0; i < m; ++i) total *= q;
  std::vector<Poly> out;
  out.reserve(total);
  std::vector<std::uint32_t> codes(static_cast<std::size_t>(m), 0);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t c = idx;
    for (int i = 0; i < m; ++i) {
      codes[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(c % q);
      c /= q;
    }
    out.emplace_back(field, codes);
  }
  return out;
}

std::uint64_t monic_rank(const MonicPoly& m) {
  const std::uint64_t q = m.field().q();
  std::uint64_t below = 0, layer = 1;
  for (int d = 0; d < m.degree(); ++d) {
    below += layer;
    layer *= q;
  }
  std::uint64_t within = 0;
  const auto& codes = m.poly().codes();
  for (int i = m.degree() - 1; i >= 0; --i) within = within * q + codes[static_cast<std::size_t>(i)];
  return below + within;
}

// --- factorization ----------------------------------------------------------------------------------------------

namespace {

struct SieveCache {
  std::mutex mutex;
  // Keyed by (p, n); the stored list covers every degree <= the stored bound.
  std::map<std::pair<int, int>, std::pair<int, std::shared_ptr<const std::vector<MonicPoly>>>> tables;
};

SieveCache& sieve_cache() {
  static SieveCache cache;
  return cache;
}

std::shared_ptr<const std::vector<MonicPoly>> build_sieve(const FieldSpec& field, int max_degree) {
  auto primes = std::make_shared<std::vector<MonicPoly>>();
  for (int d = 1; d <= max_degree; ++d) {
    for (auto& candidate : enumerate_monic(field, d)) {
      bool composite = false;
      for (const auto& p : *primes) {
        if (2 * p.degree() > d) break;
        if (divides(p.poly(), candidate.poly())) {
          composite = true;
          break;
        }
      }
      if (!composite) primes->push_back(std::move(candidate));
    }
  }
  return primes;
}

std::shared_ptr<const std::vector<MonicPoly>> sieve_table(const FieldSpec& field, int max_degree) {
  auto& cache = sieve_cache();
  std::lock_guard lock(cache.mutex);
  const auto key = std::make_pair(field.p(), field.n());
  auto it = cache.tables.find(key);
  if (it != cache.tables.end() && it->second.first >= max_degree) return it->second.second;
  auto table = build_sieve(field, max_degree);
  cache.tables[key] = {max_degree, table};
  return table;
}

}  // namespace

std::vector<MonicPoly> irreducible_sieve(const FieldSpec& field, int max_degree) {
  if (max_degree < 1) throw DomainError("sieve degree must be >= 1");
  const auto table = sieve_table(field, max_degree);
  std::vector<MonicPoly> out;
  for (const auto& p : *table) {
    if (p.degree() > max_degree) break;
    out.push_back(p);
  }
  return out;
}

bool is_irreducible(const Poly& a) {
  if (a.degree() < 1) return false;
  const auto f = factor(a);
  return f.factors.size() == 1 && f.factors[0].second == 1;
}

namespace {

Poly derivative(const Poly& a) {
  std::vector<FieldElement> out;
  for (int i = 1; i <= a.degree(); ++i) out.push_back(a.coeff(i) * a.field().from_int(i));
  return Poly(a.field(), out);
}

// a(T) = b(T)^p; requires every exponent of a to be a multiple of p.
Poly pth_root(const Poly& a) {
  const auto& f = a.field();
  const std::uint64_t e = f.q() / static_cast<std::uint32_t>(f.p());
  std::vector<FieldElement> out;
  for (int i = 0; i <= a.degree(); i += f.p()) out.push_back(a.coeff(i).pow(e));
  return Poly(f, out);
}

Poly mulmod(const Poly& a, const Poly& b, const Poly& m) { return mod(a * b, m); }

Poly powmod(Poly base, std::uint64_t e, const Poly& m) {
  Poly acc = mod(Poly::one(base.field()), m);
  base = mod(base, m);
  while (e > 0) {
    if (e & 1U) acc = mulmod(acc, base, m);
    base = mulmod(base, base, m);
    e >>= 1U;
  }
  return acc;
}

// Squarefree parts of a monic polynomial with their multiplicities.
void squarefree_parts(const Poly& a, int scale, std::vector<std::pair<Poly, int>>& out) {
  if (a.degree() < 1) return;
  Poly c = gcd(a, derivative(a)).poly();
  Poly w = divmod(a, c).first;
  for (int i = 1; w.degree() >= 1; ++i) {
    const Poly y = gcd(w, c).poly();
    const Poly part = divmod(w, y).first;
    if (part.degree() >= 1) out.emplace_back(part, i * scale);
    w = y;
    c = divmod(c, y).first;
  }
  if (c.degree() >= 1) squarefree_parts(pth_root(c), scale * a.field().p(), out);
}

// Irreducible factors of a monic squarefree polynomial: distinct-degree splitting, then trial division inside a
// degree class.
void split_squarefree(Poly g, std::vector<MonicPoly>& out) {
  const auto& field = g.field();
  const Poly x = Poly::T(field);
  Poly h = mod(x, g);
  for (int d = 1; 2 * d <= g.degree(); ++d) {
    h = powmod(h, field.q(), g);
    Poly t = gcd(g, h - x).poly();
    if (t.degree() < 1) continue;
    g = divmod(g, t).first;
    h = mod(h, g);
    if (t.degree() == d) {
      out.emplace_back(t);
      continue;
    }
    for (const auto& prime : *sieve_table(field, d)) {
      if (prime.degree() < d) continue;
      if (prime.degree() > d || t.degree() < d) break;
      auto [q, r] = divmod(t, prime.poly());
      if (r.is_zero()) {
        out.push_back(prime);
        t = std::move(q);
      }
    }
  }
  if (g.degree() >= 1) out.emplace_back(g);
}

}  // namespace

// Trial division while the candidate divisors number at most this many.
constexpr double kTrialDivisionLimit = 4096;

Factorization factor(const Poly& a) {
  if (a.is_zero()) throw DomainError("cannot factor the zero polynomial");
  auto [unit, monic] = monic_normalize(a);
  Factorization out{unit, {}};
  if (norm_real(a.field(), monic.degree() / 2) <= kTrialDivisionLimit) {
    Poly rest = monic.poly();
    for (const auto& prime : *sieve_table(a.field(), std::max(1, rest.degree() / 2))) {
      if (2 * prime.degree() > rest.degree()) break;
      int e = 0;
      for (auto qr = divmod(rest, prime.poly()); qr.second.is_zero(); qr = divmod(rest, prime.poly())) {
        rest = std::move(qr.first);
        ++e;
      }
      if (e > 0) out.factors.emplace_back(prime, e);
    }
    if (rest.degree() >= 1) out.factors.emplace_back(MonicPoly(rest), 1);
    std::sort(out.factors.begin(), out.factors.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    return out;
  }
  std::vector<std::pair<Poly, int>> parts;
  squarefree_parts(monic.poly(), 1, parts);
  std::map<MonicPoly, int> merged;
  for (const auto& [part, mult] : parts) {
    std::vector<MonicPoly> primes;
    split_squarefree(part, primes);
    for (const auto& p : primes) merged[p] += mult;
  }
  out.factors.assign(merged.begin(), merged.end());
  return out;
}

std::vector<MonicPoly> divisors(const Factorization& f, const FieldSpec& field, bool unitary) {
  std::vector<MonicPoly> out{MonicPoly::one(field)};
  for (const auto& [prime, e] : f.factors) {
    std::vector<MonicPoly> next;
    next.reserve(out.size() * static_cast<std::size_t>(unitary ? 2 : e + 1));
    std::vector<MonicPoly> powers{MonicPoly::one(field)};
    for (int i = 1; i <= e; ++i) powers.push_back(powers.back() * prime);
    for (const auto& d : out) {
      if (unitary) {
        next.push_back(d);
        next.push_back(d * powers.back());
      } else {
        for (const auto& pw : powers) next.push_back(d * pw);
      }
    }
    out = std::move(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<MonicPoly> divisors(const MonicPoly& a, bool unitary) { return divisors(factor(a.poly()), a.field(), unitary); }

bool is_unitary_divisor(const MonicPoly& d, const MonicPoly& g) {
  if (!divides(d.poly(), g.poly())) return false;
  return gcd(d.poly(), exact_quotient(g, d).poly()).is_one();
}

MonicPoly unitary_gcd_star(const Poly& h, const MonicPoly& g) {
  MonicPoly acc = MonicPoly::one(g.field());
  for (const auto& [prime, e] : factor(g.poly()).factors) {
    const auto full = power(prime, e);
    if (h.is_zero() || divides(full.poly(), h)) acc = acc * full;
  }
  return acc;
}

}  // namespace polyram
