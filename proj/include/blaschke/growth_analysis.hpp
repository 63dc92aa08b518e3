#pragma once

// Blaschke-type sums, convergence exponents, growth orders, box counts and
// argument-principle zero counts.

#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "blaschke/canonical_products.hpp"
#include "blaschke/circle_geometry.hpp"
#include "blaschke/polar.hpp"

namespace blaschke {

/// Outcome of the partial-sum classifier.
///
/// Summands are sorted non-increasing and the dyadic increments
/// D(m) = S_m - S_{m/2}, m = 64, 128, ..., are fitted twice:
///   power:  log D = a + b log m + c / m
///   log:    log D = a + c / m            (S_m ~ A log m)
/// Converges when b < 0 and the power model beats the log model by more
/// than 2 AIC units; Diverges when b >= 0 or the log model is at least as
/// good; Indeterminate in between.
struct ConvergenceFit {
    Verdict verdict = Verdict::Indeterminate;
    bool finite = false;  // fewer than 64 summands: a finite sum, trivially convergent
    double slope = 0.0;   // b
    double aic_power = 0.0;
    double aic_log = 0.0;
    std::size_t points = 0;
};

ConvergenceFit classify_series(std::vector<double> summands);

struct BlaschkeSum {
    std::vector<double> partial_sums;
    ConvergenceFit fit;
};

/// Partial sums of sum (1 - |z_n|) d^q(z_n, E), with multiplicity, over
/// the first m zeros (all when m is omitted).
BlaschkeSum blaschke_type_sum(const std::vector<ZeroEntry>& zeros, const ClosedCircularSet& E, double q,
                              std::size_t m = std::numeric_limits<std::size_t>::max());

enum class EstimateMethod { PartialSumFit, ShellFit, ClosedForm };

struct ExponentEstimate {
    double value = 0.0;
    double lower_witness = 0.0;
    double upper_witness = 0.0;
    EstimateMethod method = EstimateMethod::PartialSumFit;
    bool finite = false;         // finite zero set: clamped at 0
    bool bounded = false;        // growth order of a bounded function
    bool indeterminate = false;  // bisection stopped on an indeterminate verdict
};

/// Bisection on q in [0, q_max] for the infimum of convergent exponents.
ExponentEstimate convergence_exponent(const std::vector<ZeroEntry>& zeros, const ClosedCircularSet& E,
                                      double q_max = 8.0, double resolution = 1e-3);

/// Shells z = e (1 - d e^{i psi}) around sample anchors e of E.
struct ShellGrid {
    double d_min = 1e-3;
    double d_max = 0.25;
    int shells = 24;
    int angles = 33;
    int max_anchors = 16;
};

/// Order of growth near E from the slope of log(max over shell of log|f|)
/// against -log d.
ExponentEstimate growth_order(const std::function<double(std::complex<double>)>& log_abs_f,
                              const ClosedCircularSet& E, const ShellGrid& grid = {});

/// Number of zeros, with multiplicity, in the box {r <= |z| <= (1+r)/2,
/// |arg z - theta| <= pi (1 - r)}.
std::size_t box_count(const std::vector<ZeroEntry>& zeros, double r, double theta);

/// z_n = 1 - (n+1)^{-1/(rho+1)}, n = 1..n_max.
std::vector<ZeroEntry> example_zero_set(double rho, std::size_t n_max);

/// r_n of the example family.
double example_radius(double rho, double n);

/// k(r): first index with r_k >= r, and l_k: number of r_n in [r, (1+r)/2].
struct BoxIndices {
    std::size_t k = 0;
    std::size_t l = 0;
};
BoxIndices example_box_indices(double rho, double r);

/// (1/2pi) times the winding of f along |z - center| = radius. Raises
/// ContourError when |f| drops below min_modulus on the contour.
double count_zeros_contour(const std::function<PolarValue(std::complex<double>)>& f, std::complex<double> center,
                           double radius, int samples = 256, double min_modulus = 1e-12);

struct TwoSidedReport {
    ExponentEstimate rho_Z;
    double beta = 0.0;
    ExponentEstimate rho_f;
    bool right_holds = false;  // rho_f <= rho_Z + 1 + tolerance
    bool left_holds = false;   // rho_Z + beta <= rho_f + tolerance (informational)
};

TwoSidedReport two_sided_check(const std::vector<ZeroEntry>& zeros, const ClosedCircularSet& E,
                               const std::function<double(std::complex<double>)>& log_abs_f, double beta,
                               double tolerance = 0.15, const ShellGrid& grid = {});

}  // namespace blaschke
