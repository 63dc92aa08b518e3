#include "blaschke/canonical_products.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "blaschke/errors.hpp"
#include "blaschke/parallel.hpp"
#include "blaschke/prime_factors.hpp"

namespace blaschke {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Midpoint of the longest complementary arc of E.
double largest_gap_midpoint(const ClosedCircularSet& E) {
    const auto& arcs = E.arcs();
    double best_len = -1.0, best_mid = 0.0;
    for (std::size_t i = 0; i < arcs.size(); ++i) {
        const double from = arcs[i].end();
        const double to = (i + 1 < arcs.size()) ? arcs[i + 1].start : arcs.front().start + kTwoPi;
        if (to - from > best_len) {
            best_len = to - from;
            best_mid = 0.5 * (from + to);
        }
    }
    return normalize_angle(best_mid);
}

}  // namespace

void validate_zeros(const std::vector<ZeroEntry>& zeros) {
    for (const auto& z : zeros) {
        if (!(std::abs(z.point) < 1.0)) throw ParameterError("zeros must lie in the open unit disk");
        if (z.multiplicity < 1) throw ParameterError("zero multiplicity must be >= 1");
    }
}

ZeroSet ZeroSet::with_anchors(std::vector<ZeroEntry> entries, const ClosedCircularSet& E) {
    validate_zeros(entries);
    ZeroSet Z;
    Z.anchors.reserve(entries.size());
    for (const auto& z : entries) Z.anchors.push_back(nearest_anchor(z.point, E));
    Z.entries = std::move(entries);
    return Z;
}

std::size_t ZeroSet::total_multiplicity() const {
    std::size_t n = 0;
    for (const auto& z : entries) n += static_cast<std::size_t>(z.multiplicity);
    return n;
}

int choose_order(double rho) {
    if (!(rho > 0.0)) throw ParameterError("rho must be positive");
    return static_cast<int>(std::ceil(rho));
}

double blaschke_sum_K(const std::vector<ZeroEntry>& zeros, const ClosedCircularSet& E, double rho, SumKind kind) {
    double K = 0.0;
    for (const auto& z : zeros) {
        const double d = distance_to_set(z.point, E);
        const double term = kind == SumKind::Golubev ? std::pow(d, rho + 1.0) : (1.0 - std::abs(z.point)) * std::pow(d, rho);
        K += z.multiplicity * term;
    }
    return K;
}

CirclePoint nearest_anchor(std::complex<double> z, const ClosedCircularSet& E) { return nearest_point(z, E); }

std::complex<double> halfplane_map(CirclePoint t, std::complex<double> lambda) {
    const double theta = signed_angle(t.angle());
    if (!(std::abs(theta) < kPi)) throw ParameterError("halfplane_map: t = -1 is not allowed");
    const std::complex<double> tv = std::polar(1.0, theta);
    if (lambda == tv) throw PoleError("halfplane_map: lambda = t");
    return std::complex<double>(0.0, 1.0) * std::polar(1.0, 0.5 * theta) * (1.0 + lambda) / (tv - lambda);
}

PolarValue blaschke_polar(const std::vector<ZeroEntry>& zeros, std::complex<double> z) {
    PolarValue v;
    for (const auto& e : zeros) {
        const std::complex<double> a = e.point;
        PolarValue f;
        if (a == 0.0) {
            f = PolarValue::from_complex(z);
        } else {
            const double r = std::abs(a);
            f = PolarValue::from_complex((r / a) * (a - z) / (1.0 - std::conj(a) * z));
        }
        v *= f.pow(e.multiplicity);
    }
    return v;
}

std::complex<double> blaschke_product(const std::vector<ZeroEntry>& zeros, std::complex<double> z) {
    return blaschke_polar(zeros, z).to_complex();
}

std::string to_string(ProductKind kind) {
    switch (kind) {
        case ProductKind::Golubev: return "golubev";
        case ProductKind::Nevanlinna: return "nevanlinna";
        case ProductKind::Blaschke: return "blaschke";
    }
    return "?";
}

CanonicalProduct CanonicalProduct::golubev(std::vector<ZeroEntry> zeros, const ClosedCircularSet& E, double rho,
                                           ProductOptions options) {
    validate_zeros(zeros);
    CanonicalProduct f;
    f.kind_ = ProductKind::Golubev;
    f.p_ = choose_order(rho);
    f.rho_ = rho;
    f.options_ = options;
    f.E_ = E;
    f.E_frame_ = E;

    struct Item {
        Factor factor;
        double d;
    };
    std::vector<Item> items;
    items.reserve(zeros.size());
    for (const auto& z : zeros) {
        const CirclePoint e = nearest_anchor(z.point, E);
        items.push_back({{z.point, e.value(), e, {}, z.multiplicity}, std::abs(z.point - e.value())});
    }
    std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) { return a.d > b.d; });

    const std::size_t n = items.size();
    f.suffix_weight_.assign(n + 1, 0.0);
    f.suffix_key_.assign(n + 1, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        f.suffix_weight_[i] = f.suffix_weight_[i + 1] + items[i].factor.multiplicity * std::pow(items[i].d, f.p_ + 1);
        f.suffix_key_[i] = std::max(f.suffix_key_[i + 1], items[i].d);
    }
    for (auto& it : items) {
        f.main_.push_back({it.factor.zero, it.factor.multiplicity});
        f.factors_.push_back(it.factor);
    }
    return f;
}

CanonicalProduct CanonicalProduct::nevanlinna(std::vector<ZeroEntry> zeros, const ClosedCircularSet& E, double rho,
                                              ProductOptions options) {
    validate_zeros(zeros);
    if (E.is_full_circle()) throw ConfigurationError("nevanlinna product: E = T leaves no room for -1");
    CanonicalProduct f;
    f.kind_ = ProductKind::Nevanlinna;
    f.p_ = choose_order(rho);
    f.rho_ = rho;
    f.options_ = options;
    f.E_ = E;
    f.E_frame_ = E;
    if (E.contains(kPi)) {
        f.sigma_ = signed_angle(kPi - largest_gap_midpoint(E));
        f.rotor_ = std::polar(1.0, f.sigma_);
        f.E_frame_ = E.rotated(f.sigma_);
        if (f.E_frame_.contains(kPi)) throw ConfigurationError("nevanlinna product: -1 in E after rotation");
    }
    f.delta_ = 0.5 * distance_to_set(-1.0, f.E_frame_);

    struct Item {
        Factor factor;
        ZeroEntry original;
        double key;
    };
    std::vector<Item> items;
    for (const auto& z : zeros) {
        const std::complex<double> zf = f.to_frame(z.point);
        if (std::abs(zf + 1.0) < f.delta_) {
            f.near_.push_back(z);
            f.near_frame_.push_back({zf, z.multiplicity});
            continue;
        }
        const CirclePoint e = nearest_anchor(zf, f.E_frame_);
        const std::complex<double> ev = e.value();
        const double key = (1.0 - std::abs(zf)) * std::pow(std::abs(ev - zf), rho);
        items.push_back({{zf, ev, e, halfplane_map(e, zf), z.multiplicity}, z, key});
    }
    std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) { return a.key > b.key; });

    const std::size_t n = items.size();
    f.suffix_weight_.assign(n + 1, 0.0);
    f.suffix_key_.assign(n + 1, kInf);
    for (std::size_t i = n; i-- > 0;) {
        const std::complex<double> om = items[i].factor.omega;
        const double b = std::abs(om.imag()) / std::pow(std::abs(om), f.p_ + 2);
        f.suffix_weight_[i] = f.suffix_weight_[i + 1] + items[i].factor.multiplicity * b;
        f.suffix_key_[i] = std::min(f.suffix_key_[i + 1], std::abs(om));
    }
    for (auto& it : items) {
        f.main_.push_back(it.original);
        f.factors_.push_back(it.factor);
    }
    return f;
}

CanonicalProduct CanonicalProduct::blaschke(std::vector<ZeroEntry> zeros, const ClosedCircularSet& E) {
    validate_zeros(zeros);
    CanonicalProduct f;
    f.kind_ = ProductKind::Blaschke;
    f.E_ = E;
    f.E_frame_ = E;
    f.near_ = zeros;
    f.near_frame_ = std::move(zeros);
    f.suffix_weight_.assign(1, 0.0);
    f.suffix_key_.assign(1, 0.0);
    return f;
}

std::vector<ZeroEntry> CanonicalProduct::all_zeros() const {
    std::vector<ZeroEntry> out = main_;
    out.insert(out.end(), near_.begin(), near_.end());
    return out;
}

std::complex<double> CanonicalProduct::to_frame(std::complex<double> z) const {
    return sigma_ == 0.0 ? z : z * rotor_;
}

PolarValue CanonicalProduct::factor_value(const Factor& f, std::complex<double> zf) const {
    if (kind_ == ProductKind::Golubev) {
        const std::complex<double> v = (f.zero - f.anchor) / (zf - f.anchor);
        return weierstrass_polar(v, p_).pow(f.multiplicity);
    }
    return nevanlinna_polar(halfplane_map(f.anchor_point, zf), f.omega, p_).pow(f.multiplicity);
}

// Golubev: scale = d(z, E); tail valid when every omitted d_n < d/3, where
// |v_n| < 1/3 and |log W| <= 1.5 |v_n|^{p+1} <= 1.5 d_n^{p+1} / d^{p+1}.
// Nevanlinna: scale = |1 + z| / d(z, E) >= |g_n(z)|; tail valid when every
// omitted |omega_n| > 3 scale, where |log N_p| <= 3 |sin tau| |w/omega|^{p+1}
// <= 3 b_n scale^{p+1} with b_n = Im omega_n / |omega_n|^{p+2}.
double CanonicalProduct::tail_scale(std::complex<double> zf, double d) const {
    return kind_ == ProductKind::Golubev ? d : std::abs(1.0 + zf) / d;
}

std::size_t CanonicalProduct::first_valid(double scale) const {
    const std::size_t n = factors_.size();
    std::size_t lo = 0, hi = n;
    auto valid = [&](std::size_t m) {
        return kind_ == ProductKind::Golubev ? suffix_key_[m] < scale / 3.0 : suffix_key_[m] > 3.0 * scale;
    };
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (valid(mid)) hi = mid;
        else lo = mid + 1;
    }
    return lo;
}

double CanonicalProduct::tail_bound_from(std::size_t m, double scale) const {
    if (suffix_weight_[m] == 0.0) return 0.0;
    if (kind_ == ProductKind::Golubev) return 1.5 * suffix_weight_[m] / std::pow(scale, p_ + 1);
    return 3.0 * suffix_weight_[m] * std::pow(scale, p_ + 1);
}

CertifiedValue CanonicalProduct::evaluate(std::complex<double> z) const {
    if (!(std::abs(z) <= 1.0)) throw ParameterError("product evaluation requires |z| <= 1");
    CertifiedValue out;
    if (kind_ == ProductKind::Blaschke) {
        out.polar = blaschke_polar(near_frame_, z);
        out.terms_used = near_frame_.size();
        return out;
    }
    const std::complex<double> zf = to_frame(z);
    const double d = distance_to_set(zf, E_frame_);
    if (d == 0.0) throw PoleError("product evaluated on the singular set");
    const double scale = tail_scale(zf, d);

    std::size_t m = first_valid(scale);
    const std::size_t n = factors_.size();
    std::size_t lo = m, hi = n;
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (tail_bound_from(mid, scale) <= options_.tolerance) hi = mid;
        else lo = mid + 1;
    }
    m = lo;
    if (m > options_.term_cap) throw BudgetError("tolerance needs more factors than the term cap allows");

    PolarValue v = blaschke_polar(near_frame_, zf);
    for (std::size_t i = 0; i < m && !v.is_zero(); ++i) v *= factor_value(factors_[i], zf);
    out.polar = v;
    out.tail_bound = tail_bound_from(m, scale);
    out.terms_used = m;
    return out;
}

std::vector<CanonicalProduct::Partial> CanonicalProduct::partial_products(std::complex<double> z) const {
    const std::complex<double> zf = to_frame(z);
    std::vector<Partial> out;
    PolarValue v = blaschke_polar(near_frame_, zf);
    if (kind_ == ProductKind::Blaschke) {
        out.push_back({0, v, 0.0});
        return out;
    }
    const double d = distance_to_set(zf, E_frame_);
    if (d == 0.0) throw PoleError("product evaluated on the singular set");
    const double scale = tail_scale(zf, d);
    const std::size_t valid_from = first_valid(scale);
    const std::size_t n = factors_.size();
    out.reserve(n + 1);
    for (std::size_t m = 0; m <= n; ++m) {
        out.push_back({m, v, m >= valid_from ? tail_bound_from(m, scale) : kInf});
        if (m < n) v *= factor_value(factors_[m], zf);
    }
    return out;
}

std::vector<std::complex<double>> disk_grid(const GridSpec& spec, const ClosedCircularSet& E) {
    if (spec.n_radial < 1 || spec.n_angular < 1 || !(spec.d_min > 0.0) || !(spec.d_max >= spec.d_min))
        throw ParameterError("invalid grid specification");
    std::vector<std::complex<double>> out;
    const double ld = std::log(spec.d_min);
    for (int i = 0; i < spec.n_radial; ++i) {
        const double r = 1.0 - std::exp(ld * (i + 0.5) / spec.n_radial);
        for (int j = 0; j < spec.n_angular; ++j) {
            const std::complex<double> z = std::polar(r, kTwoPi * (j + 0.5) / spec.n_angular);
            const double d = distance_to_set(z, E);
            if (d >= spec.d_min && d <= spec.d_max) out.push_back(z);
        }
    }
    return out;
}

GrowthCertificate growth_certificate(const CanonicalProduct& f, double exponent, const GridSpec& grid) {
    const auto points = disk_grid(grid, f.singular_set());
    struct Sample {
        double log_upper;
        double d;
    };
    const auto samples = parallel_map<Sample>(points.size(), [&](std::size_t i) {
        const CertifiedValue v = f.evaluate(points[i]);
        return Sample{v.log_abs() + v.tail_bound, f.distance_to_singular_set(points[i])};
    });
    GrowthCertificate cert;
    cert.exponent = exponent;
    cert.grid = grid;
    cert.points = points.size();
    double C = 0.0;
    for (const auto& s : samples)
        if (std::isfinite(s.log_upper)) C = std::max(C, s.log_upper * std::pow(s.d, exponent));
    // round up past the few ulps lost in d^exponent so the attaining point
    // does not report a spurious positive violation
    C *= 1.0 + 16.0 * std::numeric_limits<double>::epsilon();
    cert.fitted_constant = C;
    double worst = -kInf;
    for (const auto& s : samples)
        if (std::isfinite(s.log_upper)) worst = std::max(worst, s.log_upper - C / std::pow(s.d, exponent));
    cert.max_violation = samples.empty() ? 0.0 : worst;
    return cert;
}

}  // namespace blaschke
