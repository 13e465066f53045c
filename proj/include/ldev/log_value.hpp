#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace ldev {

/// Signed real number stored as sign and natural log of magnitude.
///
/// Tail densities of the ensembles underflow ordinary doubles for moderate N,
/// so every density in the library travels in this form and is materialized
/// with to_double() only at the API boundary.
class LogValue {
public:
    constexpr LogValue() = default;

    static LogValue from_log(double log_abs, int sign = 1)
    {
        LogValue v;
        if (sign == 0 || log_abs == -std::numeric_limits<double>::infinity()) return v;
        v.sign_ = sign > 0 ? 1 : -1;
        v.log_abs_ = log_abs;
        return v;
    }

    static LogValue from_double(double x)
    {
        if (x == 0.0) return LogValue{};
        return from_log(std::log(std::fabs(x)), x > 0 ? 1 : -1);
    }

    static constexpr LogValue zero() { return LogValue{}; }

    int sign() const { return sign_; }
    double log_abs() const { return log_abs_; }
    bool is_zero() const { return sign_ == 0; }

    double to_double() const { return sign_ == 0 ? 0.0 : sign_ * std::exp(log_abs_); }

    LogValue operator-() const { return from_log(log_abs_, -sign_); }

    friend LogValue operator*(LogValue a, LogValue b)
    {
        if (a.is_zero() || b.is_zero()) return {};
        return from_log(a.log_abs_ + b.log_abs_, a.sign_ * b.sign_);
    }

    friend LogValue operator/(LogValue a, LogValue b)
    {
        if (a.is_zero()) return {};
        return from_log(a.log_abs_ - b.log_abs_, a.sign_ * b.sign_);
    }

    friend LogValue operator+(LogValue a, LogValue b)
    {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        if (a.log_abs_ < b.log_abs_) std::swap(a, b);
        const double d = b.log_abs_ - a.log_abs_;
        if (a.sign_ == b.sign_) return from_log(a.log_abs_ + std::log1p(std::exp(d)), a.sign_);
        if (d == 0.0) return {};
        return from_log(a.log_abs_ + std::log1p(-std::exp(d)), a.sign_);
    }

    friend LogValue operator-(LogValue a, LogValue b) { return a + (-b); }

    LogValue& operator*=(LogValue o) { return *this = *this * o; }
    LogValue& operator+=(LogValue o) { return *this = *this + o; }

    /// Multiplies by exp(log_factor).
    LogValue scaled(double log_factor) const
    {
        return is_zero() ? LogValue{} : from_log(log_abs_ + log_factor, sign_);
    }

private:
    int sign_ = 0;
    double log_abs_ = -std::numeric_limits<double>::infinity();
};

} // namespace ldev
