#include "blaschke/circle_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "blaschke/errors.hpp"
#include "gap_models.hpp"

namespace blaschke {

namespace {

// Arcs closer than this (radians) are merged; it absorbs the rounding in
// recursively built Cantor endpoints.
constexpr double kMergeTol = 1e-13;

constexpr double kDefaultGapThreshold = 1e-9;
constexpr int kMaxCantorDepth = 24;

struct LeastSquares {
    double slope = 0.0;
    double intercept = 0.0;
    double rms = 0.0;
};

LeastSquares fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    LeastSquares r;
    r.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    r.intercept = my - r.slope * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - (r.intercept + r.slope * x[i]);
        rss += e * e;
    }
    r.rms = std::sqrt(rss / n);
    return r;
}

// Angular distance from angle a to the arc, and the closest angle of the arc.
std::pair<double, double> arc_distance(const Arc& arc, double a) {
    const double rel = normalize_angle(a - arc.start);
    if (rel <= arc.length) return {0.0, normalize_angle(a)};
    const double to_end = rel - arc.length;
    const double to_start = kTwoPi - rel;
    if (to_end < to_start) return {to_end, normalize_angle(arc.end())};
    if (to_start < to_end) return {to_start, arc.start};
    // equidistant from both ends of the same arc
    return {to_start, std::min(arc.start, normalize_angle(arc.end()))};
}

double one_sided_extension(double x, Metric metric) {
    if (metric == Metric::Arc) return x;
    return 2.0 * std::asin(std::min(x, 2.0) / 2.0);
}

double analytic_beta(const Generator& g, double direct_measure) {
    struct Visitor {
        double direct;
        double operator()(const FinitePoints&) const { return 1.0; }
        double operator()(const ClosedArcs&) const { return direct > 0.0 ? 0.0 : 1.0; }
        double operator()(const GeometricTail&) const { return 1.0; }
        double operator()(const PowerTail& p) const { return 1.0 - 1.0 / p.gamma; }
        double operator()(const LogTail&) const { return 0.0; }
        double operator()(const Cantor& c) const {
            return 1.0 - std::log(2.0) / (std::log(2.0) - std::log(1.0 - c.omega));
        }
    };
    return std::visit(Visitor{direct_measure}, g);
}

}  // namespace

double normalize_angle(double a) {
    double r = std::fmod(a, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    return r;
}

double signed_angle(double a) {
    double r = normalize_angle(a);
    if (r > kPi) r -= kTwoPi;
    return r;
}

CirclePoint CirclePoint::from_complex(std::complex<double> z) { return CirclePoint(std::arg(z)); }

double circular_distance(CirclePoint t1, CirclePoint t2, Metric metric) {
    if (metric == Metric::Chord) return std::abs(t1.value() - t2.value());
    const double d = normalize_angle(t1.angle() - t2.angle());
    return std::min(d, kTwoPi - d);
}

std::string generator_name(const Generator& g) {
    struct Visitor {
        std::string operator()(const FinitePoints&) const { return "points"; }
        std::string operator()(const ClosedArcs&) const { return "arcs"; }
        std::string operator()(const GeometricTail&) const { return "geometric_tail"; }
        std::string operator()(const PowerTail&) const { return "power_tail"; }
        std::string operator()(const LogTail&) const { return "log_tail"; }
        std::string operator()(const Cantor&) const { return "cantor"; }
    };
    return std::visit(Visitor{}, g);
}

// ClosedCircularSet ---------------------------------------------------------

void ClosedCircularSet::finalize() {
    if (arcs_.empty()) throw ParameterError("closed set must be nonempty");
    for (auto& a : arcs_) {
        if (!(a.length >= 0.0) || !std::isfinite(a.start)) throw ParameterError("invalid arc");
        if (a.length >= kTwoPi - kMergeTol) {
            arcs_ = {Arc{0.0, kTwoPi}};
            break;
        }
        a.start = normalize_angle(a.start);
    }
    std::sort(arcs_.begin(), arcs_.end(),
              [](const Arc& x, const Arc& y) { return x.start < y.start || (x.start == y.start && x.length > y.length); });

    std::vector<Arc> merged;
    merged.reserve(arcs_.size());
    for (const auto& a : arcs_) {
        if (!merged.empty() && a.start <= merged.back().end() + kMergeTol) {
            Arc& m = merged.back();
            m.length = std::max(m.end(), a.end()) - m.start;
        } else {
            merged.push_back(a);
        }
    }
    // wrap-around: the last arc may reach past 2*pi into the first ones
    while (merged.size() > 1 && merged.back().end() + kMergeTol >= merged.front().start + kTwoPi) {
        Arc& last = merged.back();
        last.length = std::max(last.end(), merged.front().end() + kTwoPi) - last.start;
        merged.erase(merged.begin());
    }
    if (merged.size() == 1 && merged.front().length >= kTwoPi - kMergeTol) merged = {Arc{0.0, kTwoPi}};
    arcs_ = std::move(merged);

    gaps_.clear();
    direct_measure_ = 0.0;
    for (const auto& a : arcs_) direct_measure_ += a.length;
    direct_measure_ /= kTwoPi;
    if (!is_full_circle()) {
        const std::size_t m = arcs_.size();
        gaps_.reserve(m);
        for (std::size_t i = 0; i < m; ++i) {
            const double next = (i + 1 < m) ? arcs_[i + 1].start : arcs_[0].start + kTwoPi;
            const double g = (next - arcs_[i].end()) / kTwoPi;
            if (g > 0.0) gaps_.push_back(g);
        }
        std::sort(gaps_.begin(), gaps_.end(), std::greater<>());
    } else {
        direct_measure_ = 1.0;
    }
    gaps_tail_sum_.assign(gaps_.size() + 1, 0.0);
    for (std::size_t j = gaps_.size(); j-- > 0;) gaps_tail_sum_[j] = gaps_tail_sum_[j + 1] + gaps_[j];
}

ClosedCircularSet ClosedCircularSet::from_arcs(std::vector<Arc> arcs, Metric metric, double resolution) {
    ClosedCircularSet E;
    E.arcs_ = std::move(arcs);
    E.metric_ = metric;
    E.resolution_ = resolution;
    E.finalize();
    return E;
}

ClosedCircularSet ClosedCircularSet::full_circle(Metric metric) {
    return from_arcs({Arc{0.0, kTwoPi}}, metric);
}

ClosedCircularSet ClosedCircularSet::from_generator(const Generator& generator, Metric metric) {
    ClosedCircularSet E;
    E.metric_ = metric;
    E.generator_ = generator;

    if (const auto* pts = std::get_if<FinitePoints>(&generator)) {
        for (double a : pts->angles) E.arcs_.push_back({a, 0.0});
    } else if (const auto* arcs = std::get_if<ClosedArcs>(&generator)) {
        for (const auto& [start, len] : arcs->arcs) {
            if (len < 0.0) throw ParameterError("arc length must be >= 0");
            E.arcs_.push_back({start, len});
        }
    } else if (const auto* cantor = std::get_if<Cantor>(&generator)) {
        const double omega = cantor->omega;
        if (!(omega > 0.0 && omega < 1.0)) throw ParameterError("cantor: omega must lie in (0,1)");
        if (!(cantor->arc_length > 0.0 && cantor->arc_length <= kTwoPi))
            throw ParameterError("cantor: arc length must lie in (0, 2*pi]");
        const double frac = cantor->arc_length / kTwoPi;
        const double r = 0.5 * (1.0 - omega);
        int depth = cantor->depth;
        if (depth == 0) {
            depth = 1 + static_cast<int>(std::floor(std::log(kDefaultGapThreshold / (frac * omega)) / std::log(r)));
            depth = std::clamp(depth, 1, 20);
        }
        if (depth < 1 || depth > kMaxCantorDepth) throw ParameterError("cantor: depth must lie in [1, 24]");
        std::vector<double> starts{cantor->arc_start};
        double len = cantor->arc_length;
        for (int level = 0; level < depth; ++level) {
            const double piece = len * r;
            std::vector<double> next;
            next.reserve(starts.size() * 2);
            for (double s : starts) {
                next.push_back(s);
                next.push_back(s + len - piece);
            }
            starts = std::move(next);
            len = piece;
        }
        for (double s : starts) E.arcs_.push_back({s, len});
        E.resolution_ = frac * std::pow(r, depth);
        E.truncation_measure_ = frac * std::pow(1.0 - omega, depth);
        E.model_ = std::make_shared<detail::CantorGapModel>(omega, frac);
        auto g = *cantor;
        g.depth = depth;
        E.generator_ = g;
    } else {
        detail::TailFamily family = [&] {
            if (std::holds_alternative<GeometricTail>(generator)) return detail::TailFamily(detail::TailKind::Geometric);
            if (const auto* p = std::get_if<PowerTail>(&generator)) {
                if (!(p->gamma > 1.0)) throw ParameterError("power_tail: gamma must exceed 1");
                return detail::TailFamily(detail::TailKind::Power, p->gamma);
            }
            return detail::TailFamily(detail::TailKind::Log);
        }();
        std::size_t depth = std::visit(
            [](const auto& g) -> std::size_t {
                if constexpr (requires { g.depth; }) return static_cast<std::size_t>(g.depth);
                return 0;
            },
            generator);
        if (depth == 0) depth = family.default_depth(kDefaultGapThreshold);
        if (depth > 8'000'000) throw ParameterError("tail depth too large");
        E.arcs_.reserve(depth + 1);
        E.arcs_.push_back({0.0, 0.0});
        const double n0 = family.first_index();
        double last_phi = 0.0;
        for (std::size_t i = 0; i < depth; ++i) {
            last_phi = family.phi(n0 + static_cast<double>(i));
            E.arcs_.push_back({last_phi, 0.0});
        }
        E.truncation_measure_ = last_phi / kTwoPi;
        E.resolution_ = last_phi / kTwoPi;
        E.model_ = std::make_shared<detail::TailGapModel>(family);
        std::visit(
            [depth](auto& g) {
                if constexpr (requires { g.depth; }) g.depth = static_cast<decltype(g.depth)>(depth);
            },
            *E.generator_);
    }
    E.finalize();
    return E;
}

ClosedCircularSet ClosedCircularSet::with_metric(Metric metric) const {
    ClosedCircularSet E = *this;
    E.metric_ = metric;
    return E;
}

ClosedCircularSet ClosedCircularSet::truncated() const {
    ClosedCircularSet E = *this;
    E.model_.reset();
    return E;
}

ClosedCircularSet ClosedCircularSet::rotated(double sigma) const {
    ClosedCircularSet E = *this;
    for (auto& a : E.arcs_) a.start += sigma;
    E.finalize();
    return E;
}

std::optional<ClosedCircularSet> ClosedCircularSet::restrict_to_ball(CirclePoint t, double r) const {
    if (r >= 2.0) {
        ClosedCircularSet E = *this;
        E.model_.reset();
        E.generator_.reset();
        return E;
    }
    if (r < 0.0) return std::nullopt;
    const double h = 2.0 * std::asin(r / 2.0);
    const double w0 = normalize_angle(t.angle() - h);
    const double w1 = w0 + 2.0 * h;
    std::vector<Arc> out;
    for (const auto& a : arcs_) {
        for (int k = -1; k <= 1; ++k) {
            const double s = a.start + k * kTwoPi;
            const double e = a.end() + k * kTwoPi;
            const double lo = std::max(s, w0);
            const double hi = std::min(e, w1);
            if (lo <= hi) out.push_back({lo, hi - lo});
        }
    }
    if (out.empty()) return std::nullopt;
    return from_arcs(std::move(out), metric_, resolution_);
}

ClosedCircularSet ClosedCircularSet::unite(const ClosedCircularSet& a, const ClosedCircularSet& b) {
    std::vector<Arc> arcs = a.arcs_;
    arcs.insert(arcs.end(), b.arcs_.begin(), b.arcs_.end());
    ClosedCircularSet E = from_arcs(std::move(arcs), a.metric_, std::max(a.resolution_, b.resolution_));
    E.truncation_measure_ = a.truncation_measure_ + b.truncation_measure_;
    return E;
}

CirclePoint ClosedCircularSet::nearest(double angle) const {
    const double a = normalize_angle(angle);
    if (is_full_circle()) return CirclePoint(a);
    const std::size_t m = arcs_.size();
    auto it = std::upper_bound(arcs_.begin(), arcs_.end(), a,
                               [](double v, const Arc& arc) { return v < arc.start; });
    const std::size_t after = static_cast<std::size_t>(it - arcs_.begin()) % m;
    const std::size_t before = (it == arcs_.begin()) ? m - 1 : static_cast<std::size_t>(it - arcs_.begin()) - 1;
    double best_d = std::numeric_limits<double>::infinity();
    double best_a = 0.0;
    for (std::size_t idx : {before, after, m - 1, std::size_t{0}}) {
        const auto [d, p] = arc_distance(arcs_[idx], a);
        if (d < best_d || (d == best_d && p < best_a)) {
            best_d = d;
            best_a = p;
        }
    }
    return CirclePoint(best_a);
}

bool ClosedCircularSet::contains(double angle) const {
    const double a = normalize_angle(angle);
    return normalize_angle(nearest(a).angle() - a) == 0.0;
}

ClosedCircularSet::GapSplit ClosedCircularSet::gap_split(double s) const {
    if (model_) return {model_->count_above(s), model_->sum_at_or_below(s), model_->direct_measure()};
    const auto it = std::partition_point(gaps_.begin(), gaps_.end(), [s](double g) { return g > s; });
    const auto n = static_cast<std::size_t>(it - gaps_.begin());
    return {static_cast<double>(n), gaps_tail_sum_[n], direct_measure_};
}

GapList gaps_from_generator(const Generator& generator) {
    const auto E = ClosedCircularSet::from_generator(generator);
    return {E.gaps(), E.direct_measure()};
}

// Distances -----------------------------------------------------------------

CirclePoint nearest_point(std::complex<double> z, const ClosedCircularSet& E) {
    if (z == std::complex<double>(0.0, 0.0)) {
        // every point of T is equidistant from the origin
        const auto& arcs = E.arcs();
        if (arcs.back().end() >= kTwoPi) return CirclePoint(0.0);
        return CirclePoint(arcs.front().start);
    }
    return E.nearest(std::arg(z));
}

double distance_to_set(std::complex<double> z, const ClosedCircularSet& E) {
    return std::abs(z - nearest_point(z, E).value());
}

// Neighbourhood measures ----------------------------------------------------

double cover_length(double x, Metric metric) {
    if (metric == Metric::Arc) return std::min(x / kPi, 1.0);
    return (2.0 / kPi) * std::asin(std::min(x, 2.0) / 2.0);
}

double neighborhood_measure(const ClosedCircularSet& E, double x) {
    if (!(x > 0.0)) throw ParameterError("neighborhood_measure: x must be positive");
    if (E.is_full_circle()) return 1.0;
    const double s = cover_length(x, E.metric());
    const auto split = E.gap_split(s);
    return std::min(1.0, split.direct + split.tail + split.count * s);
}

double neighborhood_measure_oracle(const ClosedCircularSet& E, double x) {
    if (!(x > 0.0)) throw ParameterError("neighborhood_measure_oracle: x must be positive");
    const double h = one_sided_extension(x, E.metric());
    std::vector<std::pair<double, double>> iv;
    iv.reserve(E.arcs().size() + 2);
    for (const auto& a : E.arcs()) {
        const double len = a.length + 2.0 * h;
        if (len >= kTwoPi) return 1.0;
        const double s = normalize_angle(a.start - h);
        const double e = s + len;
        if (e <= kTwoPi) {
            iv.emplace_back(s, e);
        } else {
            iv.emplace_back(s, kTwoPi);
            iv.emplace_back(0.0, e - kTwoPi);
        }
    }
    std::sort(iv.begin(), iv.end());
    double total = 0.0;
    double cs = iv.front().first, ce = iv.front().second;
    for (std::size_t i = 1; i < iv.size(); ++i) {
        if (iv[i].first <= ce) {
            ce = std::max(ce, iv[i].second);
        } else {
            total += ce - cs;
            cs = iv[i].first;
            ce = iv[i].second;
        }
    }
    total += ce - cs;
    return std::min(1.0, total / kTwoPi);
}

// Type ----------------------------------------------------------------------

FitWindow default_fit_window(const ClosedCircularSet& E) {
    if (E.has_exact_spectrum()) return {30, 120};
    // x ~ pi * s for small x; stay a factor 16 above the truncation scale
    const double x_res = kPi * E.resolution();
    const int k_hi = std::min(120, static_cast<int>(std::floor(-std::log2(16.0 * x_res))));
    return {std::max(4, k_hi - 20), k_hi};
}

TypeEstimate type_beta(const ClosedCircularSet& E, TypeMethod method, std::optional<FitWindow> window) {
    TypeEstimate est;
    est.method = method;
    if (method == TypeMethod::Analytic) {
        if (!E.generator()) throw ParameterError("type_beta: no closed form for this set");
        est.beta = analytic_beta(*E.generator(), E.direct_measure());
        return est;
    }
    const FitWindow w = window.value_or(default_fit_window(E));
    if (w.k_hi - w.k_lo + 1 < 4) throw ParameterError("type_beta: fit window has fewer than 4 points");
    est.fit_window = {std::ldexp(1.0, -w.k_hi), std::ldexp(1.0, -w.k_lo)};
    // an exactly represented set of positive measure has type 0
    if (E.gap_split(0.0).direct > 0.0 && E.resolution() == 0.0) {
        est.beta = 0.0;
        return est;
    }
    std::vector<double> lx, ly;
    for (int k = w.k_lo; k <= w.k_hi; ++k) {
        const double x = std::ldexp(1.0, -k);
        lx.push_back(std::log(x));
        ly.push_back(std::log(neighborhood_measure(E, x)));
    }
    const auto fit = fit_line(lx, ly);
    est.beta = std::clamp(fit.slope, 0.0, 1.0);
    est.residual = fit.rms;
    return est;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Converges:
            return "converges";
        case Verdict::Diverges:
            return "diverges";
        case Verdict::Indeterminate:
            return "indeterminate";
    }
    return "indeterminate";
}

IntegralResult integral_I(double beta, const ClosedCircularSet& E, double x_floor) {
    if (!(x_floor > 0.0 && x_floor < kPi)) throw ParameterError("integral_I: x_floor must lie in (0, pi)");
    IntegralResult res;

    // local power of |E_x| just below the cutoff
    std::vector<double> lx, ly;
    for (int j = 0; j <= 8; ++j) {
        const double x = x_floor * std::ldexp(1.0, -j);
        lx.push_back(std::log(x));
        ly.push_back(std::log(neighborhood_measure(E, x)));
    }
    const double a = fit_line(lx, ly).slope;
    res.local_exponent = a - beta - 1.0;

    // x = e^u removes the endpoint singularity of the weight
    auto integrand = [&](double u) {
        const double x = std::exp(u);
        return neighborhood_measure(E, x) * std::exp(-beta * u);
    };
    // |E_x| has a kink wherever a gap is swallowed and where the cover
    // saturates; integrate piecewise between those points.
    std::vector<double> cuts{std::log(x_floor), std::log(kPi)};
    auto add_cut = [&](double x) {
        if (x > x_floor && x < kPi) cuts.push_back(std::log(x));
    };
    add_cut(2.0);
    const std::size_t n_kinks = std::min<std::size_t>(E.gaps().size(), 64);
    for (std::size_t j = 0; j < n_kinks; ++j) {
        const double s = E.gaps()[j];
        add_cut(E.metric() == Metric::Chord ? 2.0 * std::sin(0.5 * kPi * s) : kPi * s);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    double body = 0.0, err = 0.0;
    for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
        double e = 0.0;
        body += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, cuts[j], cuts[j + 1], 15,
                                                                                1e-12, &e);
        err += e;
    }
    res.quadrature_error = err;

    if (res.local_exponent <= -1.0 + 1e-6) {
        res.verdict = Verdict::Diverges;
        res.value = std::numeric_limits<double>::infinity();
        return res;
    }
    const double tail = neighborhood_measure(E, x_floor) * std::pow(x_floor, -beta) / (res.local_exponent + 1.0);
    res.value = body + tail;
    const bool resolved = std::isfinite(body) && err <= 1e-6 * std::abs(body) + 1e-9;
    res.verdict = resolved ? Verdict::Converges : Verdict::Indeterminate;
    return res;
}

std::vector<TypeEstimate> local_type(const ClosedCircularSet& E, CirclePoint t, const std::vector<double>& deltas) {
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        if (!(deltas[i] > 0.0) || (i > 0 && !(deltas[i] < deltas[i - 1])))
            throw ParameterError("local_type: deltas must be positive and strictly decreasing");
    }
    std::vector<TypeEstimate> out;
    out.reserve(deltas.size());
    for (double delta : deltas) {
        const auto part = E.restrict_to_ball(t, delta);
        if (!part) {
            TypeEstimate off;
            off.beta = std::numeric_limits<double>::infinity();
            off.method = TypeMethod::LogLogFit;
            out.push_back(off);
            continue;
        }
        out.push_back(type_beta(*part, TypeMethod::LogLogFit));
    }
    return out;
}

}  // namespace blaschke
