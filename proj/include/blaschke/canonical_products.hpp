#pragma once

// Golubev, Nevanlinna and Blaschke canonical products with certified
// truncation, plus sampled growth certificates.

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "blaschke/circle_geometry.hpp"
#include "blaschke/polar.hpp"

namespace blaschke {

struct ZeroEntry {
    std::complex<double> point;
    int multiplicity = 1;
};

/// Zeros together with the anchors e_n in E nearest to each of them.
struct ZeroSet {
    std::vector<ZeroEntry> entries;
    std::vector<CirclePoint> anchors;

    static ZeroSet with_anchors(std::vector<ZeroEntry> entries, const ClosedCircularSet& E);
    std::size_t total_multiplicity() const;
};

/// Rejects points outside the open disk and multiplicities below 1.
void validate_zeros(const std::vector<ZeroEntry>& zeros);

/// The integer p with rho <= p < rho + 1.
int choose_order(double rho);

enum class SumKind {
    Nevanlinna,  // sum (1 - |z_n|) d^rho(z_n, E)
    Golubev      // sum d^{rho+1}(z_n, E)
};

double blaschke_sum_K(const std::vector<ZeroEntry>& zeros, const ClosedCircularSet& E, double rho, SumKind kind);

/// Closest point of E to z, ties to the smaller angle.
CirclePoint nearest_anchor(std::complex<double> z, const ClosedCircularSet& E);

/// g_t(lambda) = i e^{i theta/2} (1 + lambda) / (t - lambda), t = e^{i theta}, |theta| < pi.
std::complex<double> halfplane_map(CirclePoint t, std::complex<double> lambda);

/// prod (|a|/a) (a - z) / (1 - conj(a) z), with the factor z when a = 0.
PolarValue blaschke_polar(const std::vector<ZeroEntry>& zeros, std::complex<double> z);
std::complex<double> blaschke_product(const std::vector<ZeroEntry>& zeros, std::complex<double> z);

enum class ProductKind { Golubev, Nevanlinna, Blaschke };

std::string to_string(ProductKind kind);

struct CertifiedValue {
    PolarValue polar;
    double tail_bound = 0.0;  // bound on |log| of the omitted tail
    std::size_t terms_used = 0;

    std::complex<double> value() const { return polar.to_complex(); }
    double log_abs() const { return polar.log_abs; }
};

struct ProductOptions {
    double tolerance = 1e-8;
    std::size_t term_cap = 1'000'000;
};

class CanonicalProduct {
public:
    static CanonicalProduct golubev(std::vector<ZeroEntry> zeros, const ClosedCircularSet& E, double rho,
                                    ProductOptions options = {});
    static CanonicalProduct nevanlinna(std::vector<ZeroEntry> zeros, const ClosedCircularSet& E, double rho,
                                       ProductOptions options = {});
    static CanonicalProduct blaschke(std::vector<ZeroEntry> zeros, const ClosedCircularSet& E);

    CertifiedValue evaluate(std::complex<double> z) const;

    /// f_m for m = 0..N factors of the main product in evaluation order,
    /// each with the certified bound on the omitted tail (+inf when the
    /// tail is not yet in the region where the bound applies).
    struct Partial {
        std::size_t terms = 0;
        PolarValue value;
        double tail_bound = 0.0;
    };
    std::vector<Partial> partial_products(std::complex<double> z) const;

    ProductKind kind() const { return kind_; }
    int order() const { return p_; }
    double rho() const { return rho_; }
    const ClosedCircularSet& singular_set() const { return E_; }
    /// Rotation e^{i sigma} applied so that -1 lies outside E (Nevanlinna).
    double rotation() const { return sigma_; }
    /// d(-1, E) / 2 in the rotated frame (Nevanlinna only).
    double delta() const { return delta_; }
    /// Zeros handled by the main product, in evaluation order (original frame).
    const std::vector<ZeroEntry>& main_zeros() const { return main_; }
    /// Zeros diverted to the Blaschke sub-product (original frame).
    const std::vector<ZeroEntry>& near_minus_one() const { return near_; }
    std::vector<ZeroEntry> all_zeros() const;

    double distance_to_singular_set(std::complex<double> z) const { return distance_to_set(z, E_); }

private:
    struct Factor {
        std::complex<double> zero;  // rotated frame for Nevanlinna
        std::complex<double> anchor;
        CirclePoint anchor_point;
        std::complex<double> omega;  // g_n(z_n), Nevanlinna only
        int multiplicity = 1;
    };

    CanonicalProduct() : E_(ClosedCircularSet::full_circle()), E_frame_(ClosedCircularSet::full_circle()) {}
    std::complex<double> to_frame(std::complex<double> z) const;
    PolarValue factor_value(const Factor& f, std::complex<double> z_frame) const;
    // First index m from which the tail bound applies, and the bound itself.
    double tail_bound_from(std::size_t m, double scale) const;
    std::size_t first_valid(double threshold) const;
    double tail_scale(std::complex<double> z_frame, double d) const;

    ProductKind kind_ = ProductKind::Blaschke;
    int p_ = 1;
    double rho_ = 0.0;
    double sigma_ = 0.0;
    std::complex<double> rotor_{1.0, 0.0};
    double delta_ = 0.0;
    ProductOptions options_;
    ClosedCircularSet E_;        // original frame
    ClosedCircularSet E_frame_;  // rotated frame
    std::vector<ZeroEntry> main_;
    std::vector<ZeroEntry> near_;
    std::vector<ZeroEntry> near_frame_;
    std::vector<Factor> factors_;
    std::vector<double> suffix_weight_;  // sum over [m, N) of the per-factor bound weights
    std::vector<double> suffix_key_;     // Golubev: max d_n; Nevanlinna: min |omega_n| over [m, N)
};

struct GridSpec {
    double d_min = 0.02;
    double d_max = 2.0;
    int n_radial = 100;
    int n_angular = 100;
};

/// Points r e^{i phi} with 1 - r geometric in [d_min, 1] and phi uniform,
/// kept when d_min <= d(z, E) <= d_max.
std::vector<std::complex<double>> disk_grid(const GridSpec& spec, const ClosedCircularSet& E);

struct GrowthCertificate {
    double exponent = 0.0;
    double fitted_constant = 0.0;
    GridSpec grid;
    std::size_t points = 0;
    double max_violation = 0.0;
};

/// C = max over the grid of (log|f| + tail bound) d^exponent, clipped below
/// at 0; max_violation = max of (log|f| + tail) - C / d^exponent.
GrowthCertificate growth_certificate(const CanonicalProduct& f, double exponent, const GridSpec& grid = {});

}  // namespace blaschke
