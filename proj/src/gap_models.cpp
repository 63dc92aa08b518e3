#include "gap_models.hpp"

#include <algorithm>
#include <cmath>

namespace blaschke::detail {

namespace {

// Euler-Maclaurin starting points; below them the series is summed directly.
constexpr double kPowerDirect = 32.0;
constexpr double kLogDirect = 256.0;

double power_tail_em(double a, double g) {
    const double t1 = std::pow(a, 1.0 - g) / (g - 1.0);
    const double f = std::pow(a, -g);
    const double d1 = g * std::pow(a, -g - 1.0) / 12.0;
    const double d3 = g * (g + 1.0) * (g + 2.0) * std::pow(a, -g - 3.0) / 720.0;
    const double d5 = g * (g + 1.0) * (g + 2.0) * (g + 3.0) * (g + 4.0) * std::pow(a, -g - 5.0) / 30240.0;
    return t1 + 0.5 * f + d1 - d3 + d5;
}

double log_tail_em(double a) {
    const double L = std::log(a);
    const double f = 1.0 / (a * L * L);
    const double fp = -(L + 2.0) / (a * a * L * L * L);
    return 1.0 / L + 0.5 * f - fp / 12.0;
}

}  // namespace

TailFamily::TailFamily(TailKind kind, double gamma) : kind_(kind), gamma_(gamma) {
    n0_ = (kind == TailKind::Log) ? 2.0 : 1.0;
    c_ = 1.0 / raw_tail(n0_);
}

double TailFamily::raw_term(double n) const {
    switch (kind_) {
        case TailKind::Geometric:
            return std::exp2(-n);
        case TailKind::Power:
            return std::pow(n, -gamma_);
        case TailKind::Log: {
            const double L = std::log(n);
            return 1.0 / (n * L * L);
        }
    }
    return 0.0;
}

double TailFamily::raw_tail(double n) const {
    switch (kind_) {
        case TailKind::Geometric:
            return std::exp2(1.0 - n);
        case TailKind::Power: {
            double s = 0.0;
            double k = n;
            for (; k < kPowerDirect; k += 1.0) s += std::pow(k, -gamma_);
            // sum small terms last for accuracy
            return power_tail_em(k, gamma_) + s;
        }
        case TailKind::Log: {
            double s = 0.0;
            double k = n;
            for (; k < kLogDirect; k += 1.0) s += raw_term(k);
            return log_tail_em(k) + s;
        }
    }
    return 0.0;
}

double TailFamily::gap(double n) const { return c_ * raw_term(n); }

double TailFamily::phi(double n) const { return c_ * raw_tail(n); }

double TailFamily::last_gap_above(double s_rad) const {
    if (!(gap(n0_) > s_rad)) return n0_ - 1.0;
    const double S = s_rad / c_;
    double y = 0.0;
    switch (kind_) {
        case TailKind::Geometric:
            y = std::ceil(-std::log2(S)) - 1.0;
            break;
        case TailKind::Power:
            y = std::floor(std::pow(S, -1.0 / gamma_));
            break;
        case TailKind::Log: {
            // n log^2 n = 1/S, solved for u = log n by Newton.
            const double target = -std::log(S);
            double u = std::max(target, 1.0);
            for (int it = 0; it < 60; ++it) {
                const double f = u + 2.0 * std::log(u) - target;
                const double step = f / (1.0 + 2.0 / u);
                u -= step;
                if (u < 0.5) u = 0.5;
                if (std::abs(step) < 1e-14 * u) break;
            }
            y = std::floor(std::exp(u));
            break;
        }
    }
    double n = std::max(y, n0_);
    if (n < 0x1p50) {
        while (n > n0_ && !(gap(n) > s_rad)) n -= 1.0;
        while (gap(n + 1.0) > s_rad) n += 1.0;
    }
    return n;
}

std::size_t TailFamily::default_depth(double threshold) const {
    constexpr double kCap = 4.0e6;
    const double last = last_gap_above(threshold * kTwoPi);
    const double points = std::min(kCap, last - n0_ + 2.0);
    return static_cast<std::size_t>(std::max(points, 2.0));
}

double TailGapModel::count_above(double s) const {
    const double big = (kTwoPi - 1.0) / kTwoPi;
    const double last = family_.last_gap_above(s * kTwoPi);
    return (big > s ? 1.0 : 0.0) + std::max(0.0, last - family_.first_index() + 1.0);
}

double TailGapModel::sum_at_or_below(double s) const {
    const double big = (kTwoPi - 1.0) / kTwoPi;
    const double last = family_.last_gap_above(s * kTwoPi);
    const double from = std::max(last + 1.0, family_.first_index());
    return (big <= s ? big : 0.0) + family_.phi(from) / kTwoPi;
}

int CantorGapModel::levels_above(double s) const {
    const double first = arc_ * omega_;
    if (!(first > s)) return 0;
    const double r = 0.5 * (1.0 - omega_);
    int J = 1 + static_cast<int>(std::floor(std::log(s / first) / std::log(r)));
    J = std::clamp(J, 0, 2000);
    while (J > 0 && !(first * std::pow(r, J - 1) > s)) --J;
    while (J < 2000 && first * std::pow(r, J) > s) ++J;
    return J;
}

double CantorGapModel::count_above(double s) const {
    const double complement = 1.0 - arc_;
    const int J = levels_above(s);
    return (complement > 0.0 && complement > s ? 1.0 : 0.0) + (std::ldexp(1.0, J) - 1.0);
}

double CantorGapModel::sum_at_or_below(double s) const {
    const double complement = 1.0 - arc_;
    const int J = levels_above(s);
    return (complement > 0.0 && complement <= s ? complement : 0.0) + arc_ * std::pow(1.0 - omega_, J);
}

}  // namespace blaschke::detail
