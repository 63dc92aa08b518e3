#pragma once

// Weierstrass and Nevanlinna prime factors and their quantitative bounds.

#include <complex>
#include <string>
#include <vector>

#include "blaschke/polar.hpp"

namespace blaschke {

/// Largest supported factor order; beyond it exp of the partial sum leaves
/// double range near |z| = 1.
inline constexpr int kMaxFactorOrder = 30;

enum class BoundId { W1, W2, W3, N1, N2, NM1 };

std::string to_string(BoundId id);

struct BoundReport {
    double lhs = 0.0;
    double rhs = 0.0;
    bool satisfied = true;  // lhs <= rhs + 1e-12
    BoundId bound_id = BoundId::W1;
};

/// A_p = 3e(2 + log p).
double weierstrass_constant(int p);

/// C_p = 3^p - 1.
double nevanlinna_constant(int p);

/// W(z, p) = (1 - z) exp(sum_{k=1}^p z^k / k).
std::complex<double> weierstrass_factor(std::complex<double> z, int p);

/// W(z, p) in polar form; never overflows.
PolarValue weierstrass_polar(std::complex<double> z, int p);

/// log W(z, p) = -sum_{k>p} z^k / k for |z| < 1/3.
std::complex<double> weierstrass_log(std::complex<double> z, int p);

std::vector<BoundReport> check_weierstrass_bounds(std::complex<double> z, int p);

/// N_p(w, omega) = W(w/omega, p) / W(w/conj(omega), p).
std::complex<double> nevanlinna_factor(std::complex<double> w, std::complex<double> omega, int p);

PolarValue nevanlinna_polar(std::complex<double> w, std::complex<double> omega, int p);

/// log N_p for |w/omega| < 1/3, as the difference of the two series logs.
std::complex<double> nevanlinna_log(std::complex<double> w, std::complex<double> omega, int p);

std::vector<BoundReport> check_nevanlinna_bounds(std::complex<double> w, std::complex<double> omega, int p);

}  // namespace blaschke
