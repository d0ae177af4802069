#include "pwtree/rational.hpp"

#include <limits>
#include <ostream>
#include <stdexcept>

#include "pwtree/error.hpp"

namespace pwtree {
namespace {

using u128 = unsigned __int128;
using i128 = __int128;

u128 gcd_u128(u128 a, u128 b) {
  while (b != 0) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

u128 abs_u128(i128 v) { return v < 0 ? u128(0) - u128(v) : u128(v); }

mpz_class mpz_from_u128(u128 v) {
  mpz_class hi(static_cast<unsigned long>(static_cast<std::uint64_t>(v >> 64)));
  mpz_class lo(static_cast<unsigned long>(static_cast<std::uint64_t>(v)));
  mpz_class out = hi;
  out <<= 64;
  out += lo;
  return out;
}

mpz_class mpz_from_i128(i128 v) {
  mpz_class m = mpz_from_u128(abs_u128(v));
  return v < 0 ? mpz_class(-m) : m;
}

constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw Error(ErrorKind::ParseError, "zero denominator");
  assign_wide(num, den);
}

Rational::Rational(const mpq_class& value) { assign_mpq(value); }

Rational::Rational(const Rational& other)
    : num_(other.num_), den_(other.den_),
      big_(other.big_ ? std::make_unique<mpq_class>(*other.big_) : nullptr) {}

Rational& Rational::operator=(const Rational& other) {
  if (this != &other) {
    num_ = other.num_;
    den_ = other.den_;
    big_ = other.big_ ? std::make_unique<mpq_class>(*other.big_) : nullptr;
  }
  return *this;
}

void Rational::assign_wide(i128 num, i128 den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  u128 g = gcd_u128(abs_u128(num), u128(den));
  if (g > 1) {
    num /= i128(g);
    den /= i128(g);
  }
  if (num >= -i128(kMax) && num <= i128(kMax) && den <= i128(kMax)) {
    num_ = static_cast<std::int64_t>(num);
    den_ = static_cast<std::int64_t>(den);
    big_.reset();
    return;
  }
  mpq_class q(mpz_from_i128(num), mpz_from_i128(den));
  q.canonicalize();
  big_ = std::make_unique<mpq_class>(std::move(q));
  num_ = 0;
  den_ = 1;
}

void Rational::assign_mpq(mpq_class value) {
  value.canonicalize();
  const mpz_class& n = value.get_num();
  const mpz_class& d = value.get_den();
  if (n.fits_slong_p() && d.fits_slong_p() && n.get_si() != std::numeric_limits<long>::min()) {
    num_ = n.get_si();
    den_ = d.get_si();
    big_.reset();
    return;
  }
  big_ = std::make_unique<mpq_class>(std::move(value));
  num_ = 0;
  den_ = 1;
}

Rational Rational::parse(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  auto valid_int = [](std::string_view s, bool allow_sign) {
    if (!s.empty() && allow_sign && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s)
      if (c < '0' || c > '9') return false;
    return true;
  };
  std::string_view num_text = text;
  std::string_view den_text = "1";
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    num_text = trim(text.substr(0, slash));
    den_text = trim(text.substr(slash + 1));
  }
  if (!valid_int(num_text, true) || !valid_int(den_text, false))
    throw Error(ErrorKind::ParseError, "not a rational: '" + std::string(text) + "'");
  std::string n(num_text);
  if (!n.empty() && n.front() == '+') n.erase(0, 1);
  mpz_class num(n, 10);
  mpz_class den(std::string(den_text), 10);
  if (den == 0) throw Error(ErrorKind::ParseError, "zero denominator in '" + std::string(text) + "'");
  Rational out;
  out.assign_mpq(mpq_class(num, den));
  return out;
}

int Rational::sign() const noexcept {
  if (big_) return sgn(*big_);
  return (num_ > 0) - (num_ < 0);
}

mpq_class Rational::to_mpq() const {
  if (big_) return *big_;
  return mpq_class(mpz_class(static_cast<long>(num_)), mpz_class(static_cast<long>(den_)));
}

double Rational::to_double() const {
  if (big_) return big_->get_d();
  if (den_ == 1) return static_cast<double>(num_);
  return to_mpq().get_d();
}

std::string Rational::to_string() const {
  if (big_) return big_->get_str();
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational& Rational::operator+=(const Rational& rhs) {
  if (!big_ && !rhs.big_) {
    if (den_ == 1 && rhs.den_ == 1) {
      std::int64_t s;
      if (!__builtin_add_overflow(num_, rhs.num_, &s) && s != std::numeric_limits<std::int64_t>::min()) {
        num_ = s;
        return *this;
      }
    }
    assign_wide(i128(num_) * rhs.den_ + i128(rhs.num_) * den_, i128(den_) * rhs.den_);
    return *this;
  }
  assign_mpq(to_mpq() + rhs.to_mpq());
  return *this;
}

Rational& Rational::operator-=(const Rational& rhs) {
  if (!big_ && !rhs.big_) {
    if (den_ == 1 && rhs.den_ == 1) {
      std::int64_t s;
      if (!__builtin_sub_overflow(num_, rhs.num_, &s) && s != std::numeric_limits<std::int64_t>::min()) {
        num_ = s;
        return *this;
      }
    }
    assign_wide(i128(num_) * rhs.den_ - i128(rhs.num_) * den_, i128(den_) * rhs.den_);
    return *this;
  }
  assign_mpq(to_mpq() - rhs.to_mpq());
  return *this;
}

Rational& Rational::operator*=(const Rational& rhs) {
  if (!big_ && !rhs.big_) {
    assign_wide(i128(num_) * rhs.num_, i128(den_) * rhs.den_);
    return *this;
  }
  assign_mpq(to_mpq() * rhs.to_mpq());
  return *this;
}

Rational& Rational::operator/=(const Rational& rhs) {
  if (rhs.is_zero()) throw std::domain_error("Rational division by zero");
  if (!big_ && !rhs.big_) {
    assign_wide(i128(num_) * rhs.den_, i128(den_) * rhs.num_);
    return *this;
  }
  assign_mpq(to_mpq() / rhs.to_mpq());
  return *this;
}

Rational Rational::operator-() const {
  Rational out(*this);
  if (out.big_) {
    *out.big_ = -*out.big_;
  } else {
    out.num_ = -out.num_;
  }
  return out;
}

bool operator==(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
  if (a.big_ && b.big_) return *a.big_ == *b.big_;
  return false;  // canonical forms differ in representation only when values differ
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) {
    if (a.den_ == b.den_) return a.num_ <=> b.num_;
    __int128 lhs = __int128(a.num_) * b.den_;
    __int128 rhs = __int128(b.num_) * a.den_;
    return lhs < rhs ? std::strong_ordering::less
                     : (lhs > rhs ? std::strong_ordering::greater : std::strong_ordering::equal);
  }
  int c = cmp(a.to_mpq(), b.to_mpq());
  return c < 0 ? std::strong_ordering::less
               : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace pwtree
