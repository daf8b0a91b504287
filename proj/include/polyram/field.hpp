#pragma once

// Finite fields F_q = F_p[x]/(m(x)), q = p^n.
//
// Elements are stored as a single integer code: the coefficient vector (c_0, ..., c_{n-1}) of the residue
// c_0 + c_1 x + ... + c_{n-1} x^{n-1} read as base-p digits, lowest first. The code order is the order used for
// every "lexicographic" comparison in the library.

#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace polyram {

class FieldElement;

/// Caps that keep every enumeration desk-scale. Overridable per call.
struct FieldLimits {
  int max_p = 13;
  int max_n = 3;
};

namespace detail {
struct FieldData;
}

/// Immutable description of F_{p^n}; cheap to copy and safe to share between threads.
class FieldSpec {
 public:
  /// Builds F_{p^n}. For n > 1 the modulus is the smallest monic irreducible of degree n over F_p, comparing
  /// coefficient vectors from the constant term upwards. Throws DomainError when p is not prime, n < 1 or a cap
  /// is exceeded.
  static FieldSpec create(int p, int n = 1, FieldLimits limits = {});

  /// Accepts a prime power q and splits it into p^n.
  static FieldSpec from_order(std::int64_t q, FieldLimits limits = {});

  int p() const noexcept;
  int n() const noexcept;
  std::uint32_t q() const noexcept;

  /// Modulus coefficients, constant term first, length n + 1. Empty for prime fields.
  const std::vector<int>& modulus() const noexcept;

  FieldElement zero() const;
  FieldElement one() const;
  /// The class of x. Only meaningful for n > 1; equals 0 in a prime field.
  FieldElement generator() const;
  FieldElement from_int(std::int64_t value) const;
  FieldElement from_coeffs(const std::vector<int>& coeffs) const;
  FieldElement from_code(std::uint32_t code) const;
  /// All q elements in code order.
  std::vector<FieldElement> elements() const;

  /// Parses the element text format: a decimal integer (reduced into F_p is NOT done; it must lie in [0, p)), or a
  /// sum of terms `c*x^e`, `c*x`, `x^e`, `x`, `c` when n > 1.
  FieldElement parse(std::string_view text) const;

  // Code-level arithmetic used by the polynomial layer.
  std::uint32_t add(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t neg(std::uint32_t a) const;
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t inv(std::uint32_t a) const;
  int trace(std::uint32_t a) const;

  std::string describe() const;

  friend bool operator==(const FieldSpec& a, const FieldSpec& b) noexcept;

 private:
  explicit FieldSpec(std::shared_ptr<const detail::FieldData> data) : data_(std::move(data)) {}
  std::shared_ptr<const detail::FieldData> data_;
};

class FieldElement {
 public:
  FieldElement(FieldSpec field, std::uint32_t code) : field_(std::move(field)), code_(code) {}

  const FieldSpec& field() const noexcept { return field_; }
  std::uint32_t code() const noexcept { return code_; }
  std::vector<int> coeffs() const;
  bool is_zero() const noexcept { return code_ == 0; }
  bool is_one() const noexcept { return code_ == 1; }
  /// True when the element lies in the prime subfield F_p.
  bool in_prime_field() const noexcept;

  FieldElement operator-() const;
  FieldElement inverse() const;
  FieldElement pow(std::uint64_t exponent) const;

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
  friend bool operator==(const FieldElement& a, const FieldElement& b);

  std::string to_string() const;

 private:
  FieldSpec field_;
  std::uint32_t code_;
};

/// tr(a) = a + a^p + ... + a^{p^{n-1}}, returned as an integer in [0, p).
int trace(const FieldElement& a);

/// lambda(a) = exp(2 pi i tr(a) / p).
std::complex<double> additive_char_value(const FieldElement& a);

bool is_prime(std::int64_t n);

}  // namespace polyram
