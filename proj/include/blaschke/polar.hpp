#pragma once

#include <cmath>
#include <complex>
#include <limits>

namespace blaschke {

/// A complex number stored as (log|f|, f/|f|).
///
/// Canonical products grow like exp(C/d^{rho+1}) near the singular set, which
/// overflows a double long before the growth estimators are interested in
/// the value. Everything in the product layer therefore multiplies in this
/// form. An exact zero has log_abs == -inf and phase 1.
struct PolarValue {
    double log_abs = 0.0;
    std::complex<double> phase{1.0, 0.0};

    static PolarValue zero() {
        return {-std::numeric_limits<double>::infinity(), {1.0, 0.0}};
    }

    static PolarValue from_complex(std::complex<double> z) {
        const double a = std::abs(z);
        if (a == 0.0) return zero();
        return {std::log(a), z / a};
    }

    bool is_zero() const { return std::isinf(log_abs) && log_abs < 0; }

    std::complex<double> to_complex() const {
        if (is_zero()) return {0.0, 0.0};
        return std::exp(log_abs) * phase;
    }

    PolarValue& operator*=(const PolarValue& o) {
        log_abs += o.log_abs;
        phase *= o.phase;
        // Renormalise so the phase does not drift off the unit circle over
        // long products.
        const double m = std::abs(phase);
        if (m > 0.0) phase /= m;
        return *this;
    }

    PolarValue pow(int k) const {
        PolarValue r{log_abs * k, std::pow(phase, k)};
        const double m = std::abs(r.phase);
        if (m > 0.0) r.phase /= m;
        return r;
    }
};

inline PolarValue operator*(PolarValue a, const PolarValue& b) { return a *= b; }

}  // namespace blaschke
