#include "blaschke/lune_local.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "blaschke/errors.hpp"
#include "blaschke/parallel.hpp"

namespace blaschke {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const std::complex<double> kI{0.0, 1.0};

// Mobius factor c = (1 - v) / (1 - conj v) with v = e^{i alpha}.
std::complex<double> mobius_constant(double alpha) {
    const std::complex<double> v = std::polar(1.0, alpha);
    return (1.0 - v) / (1.0 - std::conj(v));
}

// Angular distance from an angle to the nearest point of E (0 if inside).
double angular_gap(const ClosedCircularSet& E, double angle) {
    return std::abs(signed_angle(E.nearest(angle).angle() - angle));
}

}  // namespace

Lune lune_geometry(CirclePoint t, double tau) {
    if (!(tau > 0.0 && tau < 1.0)) throw ParameterError("lune: tau must lie in (0, 1)");
    Lune L;
    L.t = t;
    L.tau = tau;
    const double h = std::asin(0.5 * tau);
    L.alpha = 2.0 * h;
    L.kappa = 0.5 + h / kPi;
    L.vertex_plus = t.value() * std::polar(1.0, L.alpha);
    L.vertex_minus = t.value() * std::polar(1.0, -L.alpha);
    return L;
}

std::complex<double> lune_map_forward(const Lune& lune, std::complex<double> z) {
    const std::complex<double> zr = z * std::conj(lune.t.value());
    const std::complex<double> v = std::polar(1.0, lune.alpha);
    if (zr == v || zr == std::conj(v)) throw PoleError("lune map evaluated at a vertex");
    // (z - conj v)/(z - v) * c sends the lune onto {0 < arg < pi kappa}
    const std::complex<double> M = (zr - std::conj(v)) / (zr - v) * mobius_constant(lune.alpha);
    const std::complex<double> lambda = std::pow(M, 1.0 / lune.kappa);
    return (kI * lambda + 1.0) / (lambda + kI);
}

std::complex<double> lune_map_inverse(const Lune& lune, std::complex<double> w) {
    if (w == kI) throw PoleError("lune inverse evaluated at the image of a vertex");
    const std::complex<double> lambda = (1.0 - kI * w) / (w - kI);
    const std::complex<double> M = std::pow(lambda, lune.kappa);
    const std::complex<double> m = M / mobius_constant(lune.alpha);
    const std::complex<double> v = std::polar(1.0, lune.alpha);
    if (m == 1.0) throw PoleError("lune inverse evaluated at the image of a vertex");
    return (m * v - std::conj(v)) / (m - 1.0) * lune.t.value();
}

std::vector<std::complex<double>> lune_grid(CirclePoint t, double delta, int n_radial, int n_angular) {
    std::vector<std::complex<double>> out;
    const std::complex<double> tv = t.value();
    for (int i = 0; i < n_radial; ++i) {
        const double s = delta * (i + 0.5) / n_radial;
        for (int j = 0; j < n_angular; ++j) {
            const double psi = -0.5 * kPi + kPi * (j + 0.5) / n_angular;
            const std::complex<double> z = tv * (1.0 - s * std::polar(1.0, psi));
            if (std::abs(z) < 1.0 && std::abs(z - tv) < delta) out.push_back(z);
        }
    }
    return out;
}

DistortionProfile distortion_profile(const Lune& lune, double delta) {
    if (!(delta > 0.0 && delta < lune.tau)) throw ParameterError("distortion_profile: need 0 < delta < tau");
    const auto pts = lune_grid(lune.t, delta);
    struct Sample {
        double ratio, deriv;
    };
    const double h = 1e-6;
    const auto samples = parallel_map<Sample>(pts.size(), [&](std::size_t i) {
        const std::complex<double> z = pts[i];
        const double ratio = (1.0 - std::abs(lune_map_forward(lune, z))) / (1.0 - std::abs(z));
        const std::complex<double> d = (lune_map_forward(lune, z + h) - lune_map_forward(lune, z - h)) / (2.0 * h);
        return Sample{ratio, std::abs(d)};
    });
    DistortionProfile p;
    p.points = pts.size();
    p.min_ratio = p.min_deriv = kInf;
    p.max_ratio = p.max_deriv = 0.0;
    for (const auto& s : samples) {
        p.min_ratio = std::min(p.min_ratio, s.ratio);
        p.max_ratio = std::max(p.max_ratio, s.ratio);
        p.min_deriv = std::min(p.min_deriv, s.deriv);
        p.max_deriv = std::max(p.max_deriv, s.deriv);
    }
    return p;
}

DistanceRatio restricted_distance_check(const ClosedCircularSet& E, CirclePoint t, double xi) {
    DistanceRatio out;
    const auto part = E.restrict_to_ball(t, xi);
    if (!part) {
        out.empty = true;
        return out;
    }
    const auto pts = lune_grid(t, xi);
    out.points = pts.size();
    out.min_ratio = kInf;
    for (const auto& z : pts) {
        const double r = distance_to_set(z, E) / distance_to_set(z, *part);
        out.min_ratio = std::min(out.min_ratio, r);
        out.max_ratio = std::max(out.max_ratio, r);
    }
    return out;
}

LocalSum local_blaschke_sum(const std::vector<ZeroEntry>& zeros, const ClosedCircularSet& E, CirclePoint t,
                            double tau, double rho, double epsilon, int max_halvings) {
    if (!(tau > 0.0 && tau < 1.0) || !(rho > 0.0) || !(epsilon > 0.0) || max_halvings < 1)
        throw ParameterError("local_blaschke_sum: bad parameters");
    validate_zeros(zeros);
    LocalSum out;
    std::vector<double> grid;
    for (int j = 1; j <= max_halvings; ++j) grid.push_back(tau * std::ldexp(1.0, -j));

    const bool on_set = E.contains(t.angle());
    std::string failures;
    if (!on_set) {
        // off E the lune eventually misses E: the classical local condition
        out.beta_t = kInf;
        for (double d : grid) {
            if (!E.restrict_to_ball(t, d)) {
                out.delta = out.eta = d;
                break;
            }
        }
        if (out.delta == 0.0) throw ConfigurationError("local_blaschke_sum: every lune on the grid meets E");
        out.exponent = 0.0;
    } else {
        out.beta_t = local_type(E, t, {grid.back()}).front().beta;
        out.exponent = std::max(0.0, rho - out.beta_t + epsilon);
        for (double d : grid) {
            const Lune L = lune_geometry(t, d);
            const double a_plus = t.angle() + L.alpha, a_minus = t.angle() - L.alpha;
            const double beta_d = local_type(E, t, {d}).front().beta;
            const bool cond1 = beta_d > out.beta_t - 0.5 * epsilon;
            const bool cond2 = !E.contains(a_plus) && !E.contains(a_minus);
            if (cond1 && cond2) {
                // widen into the gaps next to both vertices; E^eta = E^delta
                const double room = 0.5 * std::min(angular_gap(E, a_plus), angular_gap(E, a_minus));
                const double eta_angle = std::min(L.alpha + room, 0.5 * (L.alpha + 2.0 * std::asin(0.5 * tau)));
                out.delta = d;
                out.eta = 2.0 * std::sin(0.5 * eta_angle);
                break;
            }
            char buf[160];
            std::snprintf(buf, sizeof buf, "delta=%.17g:%s%s; ", d, cond1 ? "" : " beta(E^delta) too small",
                          cond2 ? "" : " vertex in E");
            failures += buf;
        }
        if (out.delta == 0.0) throw ConfigurationError("local_blaschke_sum: no admissible delta (" + failures + ")");
    }

    const std::complex<double> tv = t.value();
    std::vector<double> terms;
    for (const auto& z : zeros) {
        if (!(std::abs(z.point - tv) < out.delta)) continue;
        out.zeros_in_lune += static_cast<std::size_t>(z.multiplicity);
        terms.push_back(z.multiplicity * (1.0 - std::abs(z.point)) *
                        std::pow(distance_to_set(z.point, E), out.exponent));
    }
    double s = 0.0;
    for (double x : terms) out.partial_sums.push_back(s += x);
    out.fit = classify_series(terms);
    return out;
}

double set_separation(const ClosedCircularSet& a, const ClosedCircularSet& b) {
    double best = kInf;
    for (const auto& x : a.arcs()) {
        for (const auto& y : b.arcs()) {
            // arcs meet when either contains an endpoint of the other
            auto inside = [](const Arc& arc, double angle) {
                return normalize_angle(angle - arc.start) <= arc.length;
            };
            if (inside(x, y.start) || inside(y, x.start)) return 0.0;
            for (double p : {x.start, x.end()})
                for (double q : {y.start, y.end()})
                    best = std::min(best, std::abs(std::polar(1.0, p) - std::polar(1.0, q)));
        }
    }
    return best;
}

DisjointWeight disjoint_weight(std::complex<double> z, const std::vector<SetPart>& parts, const std::vector<double>& q) {
    DisjointWeight w{kInf, 0};
    for (std::size_t k = 0; k < parts.size(); ++k) {
        const double v = std::pow(distance_to_set(z, parts[k].set), q[k]);
        if (v < w.weight) w = {v, k};
    }
    return w;
}

DisjointSum disjoint_union_sum(const std::vector<ZeroEntry>& zeros, const std::vector<SetPart>& parts, double epsilon) {
    if (parts.empty()) throw ParameterError("disjoint_union_sum: no parts");
    if (!(epsilon > 0.0)) throw ParameterError("disjoint_union_sum: epsilon must be positive");
    validate_zeros(zeros);
    DisjointSum out;
    out.separation = parts.size() == 1 ? 2.0 : kInf;
    for (std::size_t i = 0; i < parts.size(); ++i)
        for (std::size_t j = i + 1; j < parts.size(); ++j)
            out.separation = std::min(out.separation, set_separation(parts[i].set, parts[j].set));
    if (!(out.separation > 0.0)) throw ConfigurationError("disjoint_union_sum: parts overlap");

    for (const auto& p : parts)
        out.q.push_back(std::max(0.0, p.rho - type_beta(p.set, TypeMethod::LogLogFit).beta + epsilon));

    // net of T with chord spacing below the radius Delta/8
    const double radius = out.separation / 8.0;
    const int n = static_cast<int>(std::ceil(kPi / std::asin(std::min(1.0, radius / 2.0))));
    for (int i = 0; i < n; ++i) out.covering.push_back({CirclePoint(kTwoPi * i / n), radius});

    std::vector<double> terms;
    for (const auto& z : zeros) {
        const DisjointWeight w = disjoint_weight(z.point, parts, out.q);
        out.weights.push_back(w);
        terms.push_back(z.multiplicity * (1.0 - std::abs(z.point)) * w.weight);
    }
    double s = 0.0;
    for (double x : terms) out.partial_sums.push_back(s += x);
    out.fit = classify_series(terms);
    return out;
}

ClosedCircularSet map_set(const ClosedCircularSet& E,
                          const std::function<std::complex<double>(std::complex<double>)>& F) {
    std::vector<Arc> arcs;
    arcs.reserve(E.arcs().size());
    for (const auto& a : E.arcs()) {
        const double s = std::arg(F(std::polar(1.0, a.start)));
        if (a.length == 0.0) {
            arcs.push_back({normalize_angle(s), 0.0});
            continue;
        }
        const double e = std::arg(F(std::polar(1.0, a.end())));
        arcs.push_back({normalize_angle(s), normalize_angle(e - s)});
    }
    // the truncation scale moves with the local stretch of F
    double stretch = 1.0;
    if (E.resolution() > 0.0 && !E.arcs().empty()) {
        const double a0 = E.arcs().front().start;
        const double h = 1e-6;
        stretch = std::abs(signed_angle(std::arg(F(std::polar(1.0, a0 + h))) - std::arg(F(std::polar(1.0, a0 - h))))) /
                  (2.0 * h);
    }
    return ClosedCircularSet::from_arcs(std::move(arcs), E.metric(), E.resolution() * stretch);
}

std::pair<double, double> conformal_type_invariance_check(
    const ClosedCircularSet& E, const std::function<std::complex<double>(std::complex<double>)>& F) {
    const ClosedCircularSet before = E.truncated();
    const ClosedCircularSet after = map_set(before, F);
    const FitWindow w = default_fit_window(before);
    return {type_beta(before, TypeMethod::LogLogFit, w).beta, type_beta(after, TypeMethod::LogLogFit, w).beta};
}

}  // namespace blaschke
