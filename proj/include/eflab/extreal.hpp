#pragma once

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace eflab {

/// Extended real number: a finite double or a ±∞ sentinel.
///
/// Growth exponents Π and Ξ live on the extended real line; keeping the
/// sentinels out of ordinary floating-point arithmetic means a regression
/// can never silently absorb an infinity. Comparisons follow the usual
/// extended-real order: -∞ < every finite value < +∞.
class ExtReal {
  public:
    constexpr ExtReal() : kind_(Kind::Finite), value_(0.0) {}

    static constexpr ExtReal finite(double v) { return ExtReal(Kind::Finite, v); }
    static constexpr ExtReal pos_inf() { return ExtReal(Kind::PosInf, 0.0); }
    static constexpr ExtReal neg_inf() { return ExtReal(Kind::NegInf, 0.0); }

    constexpr bool is_finite() const { return kind_ == Kind::Finite; }
    constexpr bool is_pos_inf() const { return kind_ == Kind::PosInf; }
    constexpr bool is_neg_inf() const { return kind_ == Kind::NegInf; }

    /// Finite value; throws on a sentinel.
    double value() const {
        if (!is_finite()) throw std::logic_error("ExtReal: sentinel has no finite value");
        return value_;
    }

    friend constexpr bool operator==(const ExtReal& a, const ExtReal& b) {
        if (a.kind_ != b.kind_) return false;
        return a.kind_ != Kind::Finite || a.value_ == b.value_;
    }
    friend constexpr bool operator!=(const ExtReal& a, const ExtReal& b) { return !(a == b); }
    friend constexpr bool operator<(const ExtReal& a, const ExtReal& b) {
        if (a.kind_ == Kind::NegInf) return b.kind_ != Kind::NegInf;
        if (a.kind_ == Kind::PosInf) return false;
        if (b.kind_ == Kind::PosInf) return true;
        if (b.kind_ == Kind::NegInf) return false;
        return a.value_ < b.value_;
    }
    friend constexpr bool operator<=(const ExtReal& a, const ExtReal& b) { return !(b < a); }
    friend constexpr bool operator>(const ExtReal& a, const ExtReal& b) { return b < a; }
    friend constexpr bool operator>=(const ExtReal& a, const ExtReal& b) { return !(a < b); }

    std::string str() const {
        if (is_pos_inf()) return "+inf";
        if (is_neg_inf()) return "-inf";
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", value_);
        return buf;
    }

  private:
    enum class Kind { Finite, PosInf, NegInf };
    constexpr ExtReal(Kind k, double v) : kind_(k), value_(v) {}
    Kind kind_;
    double value_;
};

}  // namespace eflab
