#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

#include "ldev/log_value.hpp"

namespace ldev {

/// Renormalization policy for ScaledFloat: the mantissa is pulled back into
/// [1/2, 1) whenever its magnitude leaves [2^-bits, 2^bits].
struct RenormPolicy {
    int bits = 128;
};

/// value = mantissa * 2^exponent with a 64-bit exponent.  Used for polynomial
/// recurrences whose intermediate values leave the double range.
class ScaledFloat {
public:
    ScaledFloat() = default;
    ScaledFloat(double m, std::int64_t e = 0, RenormPolicy policy = {}) : m_(m), e_(e), policy_(policy) { renorm(); }

    double mantissa() const { return m_; }
    std::int64_t exponent() const { return e_; }
    RenormPolicy policy() const { return policy_; }

    bool is_zero() const { return m_ == 0.0; }
    int sign() const { return m_ > 0.0 ? 1 : (m_ < 0.0 ? -1 : 0); }

    double log_abs() const
    {
        if (m_ == 0.0) return -std::numeric_limits<double>::infinity();
        return std::log(std::fabs(m_)) + static_cast<double>(e_) * std::numbers::ln2;
    }

    LogValue to_log() const { return LogValue::from_log(log_abs(), sign()); }

    double to_double() const
    {
        if (m_ == 0.0) return 0.0;
        if (e_ > 4096) return std::copysign(std::numeric_limits<double>::infinity(), m_);
        if (e_ < -4096) return std::copysign(0.0, m_);
        return std::ldexp(m_, static_cast<int>(e_));
    }

    ScaledFloat& operator*=(double s)
    {
        m_ *= s;
        renorm();
        return *this;
    }

    friend ScaledFloat operator*(ScaledFloat a, double s) { return a *= s; }
    friend ScaledFloat operator*(double s, ScaledFloat a) { return a *= s; }

    friend ScaledFloat operator*(const ScaledFloat& a, const ScaledFloat& b)
    {
        ScaledFloat r(a.m_ * b.m_, 0, a.policy_);
        r.e_ += a.e_ + b.e_;
        return r;
    }

    friend ScaledFloat operator+(const ScaledFloat& a, const ScaledFloat& b)
    {
        if (a.m_ == 0.0) return b;
        if (b.m_ == 0.0) return a;
        const std::int64_t e = a.e_ > b.e_ ? a.e_ : b.e_;
        const double ma = shift(a.m_, a.e_ - e), mb = shift(b.m_, b.e_ - e);
        ScaledFloat r(ma + mb, 0, a.policy_);
        r.e_ += e;
        return r;
    }

    friend ScaledFloat operator-(const ScaledFloat& a) { ScaledFloat r = a; r.m_ = -r.m_; return r; }
    friend ScaledFloat operator-(const ScaledFloat& a, const ScaledFloat& b) { return a + (-b); }

private:
    static double shift(double m, std::int64_t d)
    {
        if (d < -2000) return 0.0;
        return std::ldexp(m, static_cast<int>(d));
    }

    void renorm()
    {
        if (m_ == 0.0 || !std::isfinite(m_)) return;
        const double a = std::fabs(m_);
        const int bits = policy_.bits;
        if (a > std::ldexp(1.0, bits) || a < std::ldexp(1.0, -bits)) {
            int k;
            m_ = std::frexp(m_, &k);
            e_ += k;
        }
    }

    double m_ = 0.0;
    std::int64_t e_ = 0;
    RenormPolicy policy_{};
};

} // namespace ldev
