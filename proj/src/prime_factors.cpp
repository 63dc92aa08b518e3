#include "blaschke/prime_factors.hpp"

#include <cmath>
#include <numbers>

#include "blaschke/errors.hpp"

namespace blaschke {

namespace {

constexpr double kTermCutoff = 1e-18;
constexpr int kTermCap = 10000;
constexpr double kSlack = 1e-12;

void check_order(int p, int min_p = 0) {
    if (p < min_p || p > kMaxFactorOrder)
        throw ParameterError("factor order must lie in [" + std::to_string(min_p) + ", " +
                             std::to_string(kMaxFactorOrder) + "]");
}

BoundReport report(BoundId id, double lhs, double rhs) { return {lhs, rhs, lhs <= rhs + kSlack, id}; }

// -sum_{k>p} z^k / k
std::complex<double> series_tail(std::complex<double> z, int p) {
    std::complex<double> sum{0.0, 0.0};
    std::complex<double> zk = std::pow(z, p + 1);
    for (int k = p + 1; k < p + 1 + kTermCap; ++k) {
        const std::complex<double> term = zk / static_cast<double>(k);
        sum -= term;
        if (std::abs(term) < kTermCutoff) break;
        zk *= z;
    }
    return sum;
}

// sum_{k=1}^p z^k / k
std::complex<double> series_head(std::complex<double> z, int p) {
    std::complex<double> sum{0.0, 0.0};
    std::complex<double> zk = z;
    for (int k = 1; k <= p; ++k) {
        sum += zk / static_cast<double>(k);
        zk *= z;
    }
    return sum;
}

// (w/omega)^k - (w/conj omega)^k = -2i sin(k tau) u^k with u = w/|omega|.
// coefficient(k) = -2i sin(k tau) / k
std::complex<double> nev_head(std::complex<double> u, double tau, int p) {
    std::complex<double> sum{0.0, 0.0};
    std::complex<double> uk = u;
    for (int k = 1; k <= p; ++k) {
        sum += std::complex<double>(0.0, -2.0 * std::sin(k * tau) / k) * uk;
        uk *= u;
    }
    return sum;
}

std::complex<double> nev_tail(std::complex<double> u, double tau, int p) {
    std::complex<double> sum{0.0, 0.0};
    std::complex<double> uk = std::pow(u, p + 1);
    for (int k = p + 1; k < p + 1 + kTermCap; ++k) {
        // log N = log W(a) - log W(b) = -sum_{k>p} (a^k - b^k)/k
        const std::complex<double> term = std::complex<double>(0.0, 2.0 * std::sin(k * tau) / k) * uk;
        sum += term;
        if (std::abs(uk) / k < kTermCutoff) break;
        uk *= u;
    }
    return sum;
}

PolarValue polar_exp(std::complex<double> l) { return {l.real(), std::polar(1.0, l.imag())}; }

// exp(l) - 1 without cancellation for small l.
std::complex<double> expm1_complex(std::complex<double> l) {
    const double h = std::sin(0.5 * l.imag());
    const std::complex<double> rot_minus_one{-2.0 * h * h, std::sin(l.imag())};
    return std::expm1(l.real()) * std::polar(1.0, l.imag()) + rot_minus_one;
}

}  // namespace

std::string to_string(BoundId id) {
    switch (id) {
        case BoundId::W1: return "W1";
        case BoundId::W2: return "W2";
        case BoundId::W3: return "W3";
        case BoundId::N1: return "N1";
        case BoundId::N2: return "N2";
        case BoundId::NM1: return "NM1";
    }
    return "?";
}

double weierstrass_constant(int p) { return 3.0 * std::numbers::e * (2.0 + std::log(static_cast<double>(p))); }

double nevanlinna_constant(int p) { return std::pow(3.0, p) - 1.0; }

PolarValue weierstrass_polar(std::complex<double> z, int p) {
    check_order(p);
    if (z == 1.0) return PolarValue::zero();
    if (std::abs(z) < 1.0 / 3.0) return polar_exp(series_tail(z, p));
    PolarValue v = PolarValue::from_complex(1.0 - z);
    v *= polar_exp(series_head(z, p));
    return v;
}

std::complex<double> weierstrass_factor(std::complex<double> z, int p) {
    check_order(p);
    if (z == 1.0) return {0.0, 0.0};
    if (std::abs(z) < 1.0 / 3.0) return std::exp(series_tail(z, p));
    return (1.0 - z) * std::exp(series_head(z, p));
}

std::complex<double> weierstrass_log(std::complex<double> z, int p) {
    check_order(p);
    if (!(std::abs(z) < 1.0 / 3.0)) throw ParameterError("weierstrass_log requires |z| < 1/3");
    return series_tail(z, p);
}

std::vector<BoundReport> check_weierstrass_bounds(std::complex<double> z, int p) {
    check_order(p);
    std::vector<BoundReport> out;
    const double r = std::abs(z);
    if (r < 1.0 / 3.0) {
        const std::complex<double> l = series_tail(z, p);
        out.push_back(report(BoundId::W1, std::abs(l), 1.5 * std::pow(r, p + 1)));
    } else if (p >= 1) {
        out.push_back(report(BoundId::W2, weierstrass_polar(z, p).log_abs, weierstrass_constant(p) * std::pow(r, p)));
    }
    if (r <= 1.0) {
        double lhs = 0.0;
        if (r < 1.0 / 3.0) {
            // |1 - W| = |expm1(log W)| without cancellation
            lhs = std::abs(expm1_complex(series_tail(z, p)));
        } else {
            lhs = std::abs(1.0 - weierstrass_factor(z, p));
        }
        out.push_back(report(BoundId::W3, lhs, std::pow(r, p + 1)));
    }
    return out;
}

PolarValue nevanlinna_polar(std::complex<double> w, std::complex<double> omega, int p) {
    check_order(p, 1);
    if (omega == 0.0) throw ParameterError("nevanlinna factor requires omega != 0");
    if (omega.imag() == 0.0) return {};
    if (w == omega) return PolarValue::zero();
    if (w == std::conj(omega)) throw PoleError("nevanlinna factor has a pole at w = conj(omega)");
    const double tau = std::arg(omega);
    const std::complex<double> u = w / std::abs(omega);
    const std::complex<double> a = w / omega;
    if (std::abs(a) < 1.0 / 3.0) return polar_exp(nev_tail(u, tau, p));
    const std::complex<double> b = w / std::conj(omega);
    PolarValue v = PolarValue::from_complex((1.0 - a) / (1.0 - b));
    v *= polar_exp(nev_head(u, tau, p));
    return v;
}

std::complex<double> nevanlinna_factor(std::complex<double> w, std::complex<double> omega, int p) {
    return nevanlinna_polar(w, omega, p).to_complex();
}

std::complex<double> nevanlinna_log(std::complex<double> w, std::complex<double> omega, int p) {
    check_order(p, 1);
    if (omega == 0.0) throw ParameterError("nevanlinna factor requires omega != 0");
    if (!(std::abs(w / omega) < 1.0 / 3.0)) throw ParameterError("nevanlinna_log requires |w/omega| < 1/3");
    if (omega.imag() == 0.0) return {0.0, 0.0};
    return nev_tail(w / std::abs(omega), std::arg(omega), p);
}

std::vector<BoundReport> check_nevanlinna_bounds(std::complex<double> w, std::complex<double> omega, int p) {
    check_order(p, 1);
    std::vector<BoundReport> out;
    const double s = std::abs(std::sin(std::arg(omega)));
    const double r = std::abs(w / omega);
    if (r < 1.0 / 3.0) {
        const std::complex<double> l = nevanlinna_log(w, omega, p);
        out.push_back(report(BoundId::N1, std::abs(l), 3.0 * s * std::pow(r, p + 1)));
        out.push_back(report(BoundId::NM1, std::abs(expm1_complex(l)), 6.0 * s * std::pow(r, p + 1)));
    } else if (w.imag() > 0.0 && omega.imag() > 0.0) {
        out.push_back(
            report(BoundId::N2, nevanlinna_polar(w, omega, p).log_abs, nevanlinna_constant(p) * s * std::pow(r, p)));
    }
    return out;
}

}  // namespace blaschke
