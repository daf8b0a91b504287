#include "polyram/field.hpp"

#include <cctype>
#include <cmath>
#include <numbers>

#include "polyram/errors.hpp"

namespace polyram {

namespace detail {

struct FieldData {
  int p = 2;
  int n = 1;
  std::uint32_t q = 2;
  std::vector<int> modulus;               // low-first, length n + 1 (empty when n == 1)
  std::vector<std::uint32_t> pow_p;       // p^i for i < n
  std::vector<std::uint32_t> mul_table;   // q*q entries, only when q <= kTableLimit and n > 1
  std::vector<std::uint32_t> inv_table;   // q entries
  std::vector<int> trace_table;           // q entries

  static constexpr std::uint32_t kTableLimit = 1024;

  std::vector<int> digits(std::uint32_t code) const {
    std::vector<int> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      out[static_cast<std::size_t>(i)] = static_cast<int>(code % static_cast<std::uint32_t>(p));
      code /= static_cast<std::uint32_t>(p);
    }
    return out;
  }

  std::uint32_t encode(const std::vector<int>& d) const {
    std::uint32_t code = 0;
    for (int i = n - 1; i >= 0; --i) code = code * static_cast<std::uint32_t>(p) + static_cast<std::uint32_t>(d[i]);
    return code;
  }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
    if (n == 1) return (a + b) % q;
    std::uint32_t out = 0;
    for (int i = 0; i < n; ++i) {
      const std::uint32_t da = a % p, db = b % p;
      out += ((da + db) % p) * pow_p[i];
      a /= p;
      b /= p;
    }
    return out;
  }

  std::uint32_t neg(std::uint32_t a) const {
    if (n == 1) return (q - a) % q;
    std::uint32_t out = 0;
    for (int i = 0; i < n; ++i) {
      const std::uint32_t da = a % p;
      out += ((p - da) % p) * pow_p[i];
      a /= p;
    }
    return out;
  }

  std::uint32_t mul_slow(std::uint32_t a, std::uint32_t b) const {
    if (n == 1) return static_cast<std::uint32_t>((static_cast<std::uint64_t>(a) * b) % q);
    const auto da = digits(a), db = digits(b);
    std::vector<int> prod(static_cast<std::size_t>(2 * n - 1), 0);
    for (int i = 0; i < n; ++i) {
      if (da[i] == 0) continue;
      for (int j = 0; j < n; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
    }
    // Reduce modulo the monic modulus, from the top.
    for (int deg = 2 * n - 2; deg >= n; --deg) {
      const int c = prod[deg];
      if (c == 0) continue;
      for (int i = 0; i <= n; ++i) {
        prod[deg - n + i] = ((prod[deg - n + i] - c * modulus[i]) % p + p) % p;
      }
    }
    prod.resize(static_cast<std::size_t>(n));
    return encode(prod);
  }

  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    if (!mul_table.empty()) return mul_table[static_cast<std::size_t>(a) * q + b];
    return mul_slow(a, b);
  }

  std::uint32_t pow(std::uint32_t a, std::uint64_t e) const {
    std::uint32_t result = 1, base = a;
    while (e > 0) {
      if (e & 1U) result = mul(result, base);
      base = mul(base, base);
      e >>= 1U;
    }
    return result;
  }
};

}  // namespace detail

namespace {

// Trial division of a monic polynomial over F_p (low-first coefficients) by every monic of degree <= deg/2.
bool irreducible_over_prime_field(const std::vector<int>& f, int p) {
  const int deg = static_cast<int>(f.size()) - 1;
  auto rem_is_zero = [&](const std::vector<int>& d) {
    std::vector<int> r = f;
    const int dd = static_cast<int>(d.size()) - 1;
    for (int top = deg; top >= dd; --top) {
      const int c = r[top];
      if (c == 0) continue;
      for (int i = 0; i <= dd; ++i) r[top - dd + i] = ((r[top - dd + i] - c * d[i]) % p + p) % p;
    }
    for (int i = 0; i < dd; ++i)
      if (r[i] != 0) return false;
    return true;
  };
  for (int dd = 1; 2 * dd <= deg; ++dd) {
    std::vector<int> d(static_cast<std::size_t>(dd + 1), 0);
    d[dd] = 1;
    long total = 1;
    for (int i = 0; i < dd; ++i) total *= p;
    for (long code = 0; code < total; ++code) {
      long c = code;
      for (int i = 0; i < dd; ++i) {
        d[i] = static_cast<int>(c % p);
        c /= p;
      }
      if (rem_is_zero(d)) return false;
    }
  }
  return true;
}

std::vector<int> smallest_irreducible(int p, int n) {
  // Low-to-high lexicographic order: c_0 is the most significant digit.
  long total = 1;
  for (int i = 0; i < n; ++i) total *= p;
  std::vector<int> f(static_cast<std::size_t>(n + 1), 0);
  f[n] = 1;
  for (long idx = 0; idx < total; ++idx) {
    long c = idx;
    for (int i = n - 1; i >= 0; --i) {
      f[i] = static_cast<int>(c % p);
      c /= p;
    }
    if (irreducible_over_prime_field(f, p)) return f;
  }
  throw InvariantError("no irreducible polynomial of degree " + std::to_string(n) + " over F_" + std::to_string(p));
}

void require_same(const FieldSpec& a, const FieldSpec& b) {
  if (!(a == b)) throw DomainError("field elements belong to different fields: " + a.describe() + " vs " + b.describe());
}

}  // namespace

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

FieldSpec FieldSpec::create(int p, int n, FieldLimits limits) {
  if (!is_prime(p)) throw DomainError("characteristic " + std::to_string(p) + " is not prime");
  if (n < 1) throw DomainError("extension degree must be >= 1, got " + std::to_string(n));
  if (p > limits.max_p) throw DomainError("characteristic " + std::to_string(p) + " exceeds cap " + std::to_string(limits.max_p));
  if (n > limits.max_n) throw DomainError("extension degree " + std::to_string(n) + " exceeds cap " + std::to_string(limits.max_n));

  auto data = std::make_shared<detail::FieldData>();
  data->p = p;
  data->n = n;
  std::uint64_t q = 1;
  for (int i = 0; i < n; ++i) {
    data->pow_p.push_back(static_cast<std::uint32_t>(q));
    q *= static_cast<std::uint64_t>(p);
    if (q > (1U << 24)) throw DomainError("field order too large");
  }
  data->q = static_cast<std::uint32_t>(q);
  if (n > 1) data->modulus = smallest_irreducible(p, n);

  if (n > 1 && data->q <= detail::FieldData::kTableLimit) {
    data->mul_table.resize(static_cast<std::size_t>(data->q) * data->q);
    for (std::uint32_t a = 0; a < data->q; ++a)
      for (std::uint32_t b = a; b < data->q; ++b) {
        const auto v = data->mul_slow(a, b);
        data->mul_table[static_cast<std::size_t>(a) * data->q + b] = v;
        data->mul_table[static_cast<std::size_t>(b) * data->q + a] = v;
      }
  }

  data->inv_table.assign(data->q, 0);
  data->trace_table.assign(data->q, 0);
  for (std::uint32_t a = 1; a < data->q; ++a) data->inv_table[a] = data->pow(a, data->q - 2);
  for (std::uint32_t a = 0; a < data->q; ++a) {
    std::uint32_t acc = 0, frob = a;
    for (int i = 0; i < n; ++i) {
      acc = data->add(acc, frob);
      frob = data->pow(frob, static_cast<std::uint64_t>(p));
    }
    // The trace is Frobenius-invariant, hence lies in F_p.
    if (acc >= static_cast<std::uint32_t>(p)) throw InvariantError("trace left the prime subfield");
    data->trace_table[a] = static_cast<int>(acc);
  }
  return FieldSpec(std::move(data));
}

FieldSpec FieldSpec::from_order(std::int64_t q, FieldLimits limits) {
  if (q < 2) throw DomainError("field order must be >= 2, got " + std::to_string(q));
  std::int64_t p = 2;
  while (q % p != 0) ++p;
  int n = 0;
  std::int64_t rest = q;
  while (rest % p == 0) {
    rest /= p;
    ++n;
  }
  if (rest != 1) throw DomainError(std::to_string(q) + " is not a prime power");
  return create(static_cast<int>(p), n, limits);
}

int FieldSpec::p() const noexcept { return data_->p; }
int FieldSpec::n() const noexcept { return data_->n; }
std::uint32_t FieldSpec::q() const noexcept { return data_->q; }
const std::vector<int>& FieldSpec::modulus() const noexcept { return data_->modulus; }

FieldElement FieldSpec::zero() const { return {*this, 0}; }
FieldElement FieldSpec::one() const { return {*this, 1}; }
FieldElement FieldSpec::generator() const { return {*this, data_->n > 1 ? static_cast<std::uint32_t>(data_->p) : 0U}; }

FieldElement FieldSpec::from_int(std::int64_t value) const {
  const std::int64_t r = ((value % data_->p) + data_->p) % data_->p;
  return {*this, static_cast<std::uint32_t>(r)};
}

FieldElement FieldSpec::from_coeffs(const std::vector<int>& coeffs) const {
  if (coeffs.size() != static_cast<std::size_t>(data_->n))
    throw DomainError("expected " + std::to_string(data_->n) + " coefficients, got " + std::to_string(coeffs.size()));
  for (int c : coeffs)
    if (c < 0 || c >= data_->p) throw DomainError("coefficient " + std::to_string(c) + " not reduced mod p");
  return {*this, data_->encode(coeffs)};
}

FieldElement FieldSpec::from_code(std::uint32_t code) const {
  if (code >= data_->q) throw DomainError("element code out of range");
  return {*this, code};
}

std::vector<FieldElement> FieldSpec::elements() const {
  std::vector<FieldElement> out;
  out.reserve(data_->q);
  for (std::uint32_t c = 0; c < data_->q; ++c) out.emplace_back(*this, c);
  return out;
}

std::uint32_t FieldSpec::add(std::uint32_t a, std::uint32_t b) const { return data_->add(a, b); }
std::uint32_t FieldSpec::sub(std::uint32_t a, std::uint32_t b) const { return data_->add(a, data_->neg(b)); }
std::uint32_t FieldSpec::neg(std::uint32_t a) const { return data_->neg(a); }
std::uint32_t FieldSpec::mul(std::uint32_t a, std::uint32_t b) const { return data_->mul(a, b); }

std::uint32_t FieldSpec::inv(std::uint32_t a) const {
  if (a == 0) throw DivisionByZero("inverse of zero in " + describe());
  return data_->inv_table[a];
}

int FieldSpec::trace(std::uint32_t a) const { return data_->trace_table[a]; }

std::string FieldSpec::describe() const {
  return "F_" + std::to_string(data_->q);
}

bool operator==(const FieldSpec& a, const FieldSpec& b) noexcept {
  return a.data_ == b.data_ || (a.data_->p == b.data_->p && a.data_->n == b.data_->n);
}

// ---------------------------------------------------------------------------------------------------------------

namespace {

struct ElementParser {
  const FieldSpec& field;
  std::string_view text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  long number() {
    skip_ws();
    if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
      throw ParseError("expected a number", pos);
    long v = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      v = v * 10 + (text[pos] - '0');
      if (v > 1'000'000) throw ParseError("number too large", pos);
      ++pos;
    }
    return v;
  }

  bool peek(char c) {
    skip_ws();
    return pos < text.size() && text[pos] == c;
  }

  // term := c '*' 'x' ['^' e] | 'x' ['^' e] | c
  std::uint32_t term() {
    skip_ws();
    std::uint32_t coeff = 1;
    bool have_coeff = false;
    if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      const std::size_t at = pos;
      const long c = number();
      if (c >= field.p()) throw ParseError("coefficient " + std::to_string(c) + " not in F_" + std::to_string(field.p()), at);
      coeff = static_cast<std::uint32_t>(c);
      have_coeff = true;
      if (!peek('*')) return coeff;
      ++pos;
      skip_ws();
    }
    if (pos >= text.size() || text[pos] != 'x') throw ParseError(have_coeff ? "expected 'x' after '*'" : "expected a term", pos);
    if (field.n() == 1) throw ParseError("'x' is not available in a prime field", pos);
    ++pos;
    long e = 1;
    if (peek('^')) {
      ++pos;
      e = number();
    }
    const std::uint32_t power = field.generator().pow(static_cast<std::uint64_t>(e)).code();
    return field.mul(coeff, power);
  }

  std::uint32_t parse() {
    std::uint32_t acc = term();
    while (peek('+')) {
      ++pos;
      acc = field.add(acc, term());
    }
    skip_ws();
    if (pos != text.size()) throw ParseError("unexpected character '" + std::string(1, text[pos]) + "'", pos);
    return acc;
  }
};

}  // namespace

FieldElement FieldSpec::parse(std::string_view text) const {
  ElementParser parser{*this, text};
  return {*this, parser.parse()};
}

// ---------------------------------------------------------------------------------------------------------------

std::vector<int> FieldElement::coeffs() const {
  std::vector<int> out(static_cast<std::size_t>(field_.n()));
  std::uint32_t c = code_;
  for (auto& d : out) {
    d = static_cast<int>(c % static_cast<std::uint32_t>(field_.p()));
    c /= static_cast<std::uint32_t>(field_.p());
  }
  return out;
}

bool FieldElement::in_prime_field() const noexcept { return code_ < static_cast<std::uint32_t>(field_.p()); }

FieldElement FieldElement::operator-() const { return {field_, field_.neg(code_)}; }

FieldElement FieldElement::inverse() const { return {field_, field_.inv(code_)}; }

FieldElement FieldElement::pow(std::uint64_t exponent) const {
  std::uint32_t result = 1, base = code_;
  while (exponent > 0) {
    if (exponent & 1U) result = field_.mul(result, base);
    base = field_.mul(base, base);
    exponent >>= 1U;
  }
  return {field_, result};
}

FieldElement operator+(const FieldElement& a, const FieldElement& b) {
  require_same(a.field_, b.field_);
  return {a.field_, a.field_.add(a.code_, b.code_)};
}

FieldElement operator-(const FieldElement& a, const FieldElement& b) {
  require_same(a.field_, b.field_);
  return {a.field_, a.field_.sub(a.code_, b.code_)};
}

FieldElement operator*(const FieldElement& a, const FieldElement& b) {
  require_same(a.field_, b.field_);
  return {a.field_, a.field_.mul(a.code_, b.code_)};
}

bool operator==(const FieldElement& a, const FieldElement& b) { return a.field_ == b.field_ && a.code_ == b.code_; }

std::string FieldElement::to_string() const {
  if (field_.n() == 1) return std::to_string(code_);
  const auto c = coeffs();
  std::string out;
  for (int i = field_.n() - 1; i >= 0; --i) {
    if (c[i] == 0) continue;
    if (!out.empty()) out += "+";
    if (i == 0) {
      out += std::to_string(c[i]);
      continue;
    }
    if (c[i] != 1) out += std::to_string(c[i]) + "*";
    out += "x";
    if (i > 1) out += "^" + std::to_string(i);
  }
  return out.empty() ? "0" : out;
}

int trace(const FieldElement& a) { return a.field().trace(a.code()); }

std::complex<double> additive_char_value(const FieldElement& a) {
  const double angle = 2.0 * std::numbers::pi * trace(a) / a.field().p();
  return std::polar(1.0, angle);
}

}  // namespace polyram
