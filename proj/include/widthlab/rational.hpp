#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>

namespace widthlab {

// Exact rational arithmetic for scaling exponents. Component counts are tiny,
// so 64-bit numerators never get anywhere near overflow.
class Rational {
  public:
    constexpr Rational() = default;
    constexpr Rational(std::int64_t value) : num_(value) {}
    constexpr Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) { normalize(); }

    static constexpr Rational half(std::int64_t halves) { return Rational(halves, 2); }

    constexpr std::int64_t num() const { return num_; }
    constexpr std::int64_t den() const { return den_; }

    constexpr Rational operator+(Rational o) const {
        return Rational(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
    }
    constexpr Rational operator-(Rational o) const {
        return Rational(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
    }
    constexpr Rational operator-() const { return Rational(-num_, den_); }
    constexpr Rational operator*(Rational o) const {
        return Rational(num_ * o.num_, den_ * o.den_);
    }

    constexpr bool operator==(const Rational&) const = default;
    constexpr bool operator<(Rational o) const { return num_ * o.den_ < o.num_ * den_; }
    constexpr bool operator<=(Rational o) const { return num_ * o.den_ <= o.num_ * den_; }
    constexpr bool operator>(Rational o) const { return o < *this; }
    constexpr bool operator>=(Rational o) const { return o <= *this; }

    double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

  private:
    constexpr void normalize() {
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        const std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
        if (num_ == 0) den_ = 1;
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

inline std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace widthlab
