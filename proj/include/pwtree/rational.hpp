#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace pwtree {

/// Exact rational number.
///
/// Values whose reduced numerator and denominator fit in 64 bits are kept
/// inline and combined with 128-bit intermediates; anything larger is promoted
/// to a GMP rational. The two representations are never both active, and a
/// big value is demoted back to the inline form whenever it fits again, so
/// equality is structural on the canonical form.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t value) : num_(value) {  // NOLINT(google-explicit-constructor)
    if (value == INT64_MIN) assign_wide(value, 1);
  }
  Rational(std::int64_t num, std::int64_t den);
  explicit Rational(const mpq_class& value);

  Rational(const Rational& other);
  Rational(Rational&&) noexcept = default;
  Rational& operator=(const Rational& other);
  Rational& operator=(Rational&&) noexcept = default;
  ~Rational() = default;

  /// Parses "p", "-p" or "p/q" (q > 0 after sign normalization).
  static Rational parse(std::string_view text);

  bool is_small() const noexcept { return !big_; }
  bool is_zero() const noexcept { return !big_ && num_ == 0; }
  int sign() const noexcept;

  mpq_class to_mpq() const;
  double to_double() const;
  /// Canonical text: "p" when the denominator is 1, else "p/q".
  std::string to_string() const;

  Rational& operator+=(const Rational& rhs);
  Rational& operator-=(const Rational& rhs);
  Rational& operator*=(const Rational& rhs);
  Rational& operator/=(const Rational& rhs);

  friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
  friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
  friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
  friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }
  Rational operator-() const;

  friend bool operator==(const Rational& a, const Rational& b);
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  void assign_wide(__int128 num, __int128 den);
  void assign_mpq(mpq_class value);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  std::unique_ptr<mpq_class> big_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);

}  // namespace pwtree
