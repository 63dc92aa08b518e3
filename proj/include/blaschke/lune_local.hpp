#pragma once

// Lunes L_tau(t) = D cap B(t, tau), their explicit conformal map onto the
// disk, and the local and disjoint-union Blaschke-type sums.

#include <complex>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "blaschke/canonical_products.hpp"
#include "blaschke/circle_geometry.hpp"
#include "blaschke/growth_analysis.hpp"

namespace blaschke {

struct Lune {
    CirclePoint t;
    double tau = 0.0;
    double alpha = 0.0;  // vertices t e^{+-i alpha}
    double kappa = 0.0;  // interior angle pi kappa at the vertices
    std::complex<double> vertex_plus;
    std::complex<double> vertex_minus;

    bool contains(std::complex<double> z) const { return std::abs(z) < 1.0 && std::abs(z - t.value()) < tau; }
};

/// alpha = 2 arcsin(tau/2), kappa = 1/2 + arcsin(tau/2)/pi; requires 0 < tau < 1.
Lune lune_geometry(CirclePoint t, double tau);

/// F_tau: closure of the lune (minus its vertices) onto the closed disk.
std::complex<double> lune_map_forward(const Lune& lune, std::complex<double> z);

/// Phi_tau = F_tau^{-1}.
std::complex<double> lune_map_inverse(const Lune& lune, std::complex<double> w);

/// Points t (1 - s e^{i psi}) of the lune L_delta(t), s in (0, delta).
std::vector<std::complex<double>> lune_grid(CirclePoint t, double delta, int n_radial = 40, int n_angular = 41);

struct DistortionProfile {
    double min_ratio = 0.0;  // of (1 - |F(z)|) / (1 - |z|)
    double max_ratio = 0.0;
    double min_deriv = 0.0;  // of |F'(z)|
    double max_deriv = 0.0;
    std::size_t points = 0;
};

DistortionProfile distortion_profile(const Lune& lune, double delta);

struct DistanceRatio {
    double min_ratio = 0.0;  // of d(z, E) / d(z, E^xi) over L_xi
    double max_ratio = 0.0;
    bool empty = false;      // E^xi is empty
    std::size_t points = 0;
};

DistanceRatio restricted_distance_check(const ClosedCircularSet& E, CirclePoint t, double xi);

struct LocalSum {
    double delta = 0.0;
    double eta = 0.0;
    double beta_t = 0.0;    // +inf when t is not in E
    double exponent = 0.0;  // (rho - beta(t) + eps)_+, 0 off E
    std::vector<double> partial_sums;
    ConvergenceFit fit;
    std::size_t zeros_in_lune = 0;
};

/// Blaschke-type sum restricted to Z cap L_delta(t), with
/// delta found on the grid tau/2, tau/4, ... (first that passes both tests).
LocalSum local_blaschke_sum(const std::vector<ZeroEntry>& zeros, const ClosedCircularSet& E, CirclePoint t,
                            double tau, double rho, double epsilon, int max_halvings = 12);

struct SetPart {
    ClosedCircularSet set;
    double rho = 1.0;
};

struct CoveringBall {
    CirclePoint center;
    double radius = 0.0;
};

struct DisjointWeight {
    double weight = 0.0;
    std::size_t part = 0;  // index attaining the minimum
};

struct DisjointSum {
    std::vector<double> q;  // (rho_k - beta(E_k) + eps)_+
    std::vector<double> partial_sums;
    std::vector<DisjointWeight> weights;
    ConvergenceFit fit;
    double separation = 0.0;  // Delta
    std::vector<CoveringBall> covering;
};

/// Minimal chordal distance between two closed subsets of T (0 if they meet).
double set_separation(const ClosedCircularSet& a, const ClosedCircularSet& b);

/// min_k d^{q_k}(z, E_k) and the part attaining it.
DisjointWeight disjoint_weight(std::complex<double> z, const std::vector<SetPart>& parts, const std::vector<double>& q);

DisjointSum disjoint_union_sum(const std::vector<ZeroEntry>& zeros, const std::vector<SetPart>& parts, double epsilon);

/// Image of E under a map that sends its containing arc into T.
ClosedCircularSet map_set(const ClosedCircularSet& E, const std::function<std::complex<double>(std::complex<double>)>& F);

/// (beta(E), beta(F(E))) by log-log fits on the explicit arcs.
std::pair<double, double> conformal_type_invariance_check(
    const ClosedCircularSet& E, const std::function<std::complex<double>(std::complex<double>)>& F);

}  // namespace blaschke
