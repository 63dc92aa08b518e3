#include "blaschke/growth_analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "blaschke/errors.hpp"
#include "blaschke/parallel.hpp"

namespace blaschke {

namespace {

constexpr std::size_t kMinDyadic = 64;
constexpr double kRssFloor = 1e-26;
constexpr double kAicMargin = 2.0;

// Least squares y ~ X beta for up to three columns, via normal equations
// solved by Gaussian elimination with partial pivoting. Returns the RSS.
template <std::size_t K>
double least_squares(const std::vector<std::array<double, K>>& X, const std::vector<double>& y,
                     std::array<double, K>& beta) {
    std::array<std::array<double, K + 1>, K> A{};
    for (std::size_t r = 0; r < X.size(); ++r)
        for (std::size_t i = 0; i < K; ++i) {
            for (std::size_t j = 0; j < K; ++j) A[i][j] += X[r][i] * X[r][j];
            A[i][K] += X[r][i] * y[r];
        }
    for (std::size_t c = 0; c < K; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < K; ++r)
            if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
        std::swap(A[c], A[piv]);
        for (std::size_t r = 0; r < K; ++r) {
            if (r == c || A[c][c] == 0.0) continue;
            const double f = A[r][c] / A[c][c];
            for (std::size_t j = c; j <= K; ++j) A[r][j] -= f * A[c][j];
        }
    }
    for (std::size_t i = 0; i < K; ++i) beta[i] = A[i][i] == 0.0 ? 0.0 : A[i][K] / A[i][i];
    double rss = 0.0;
    for (std::size_t r = 0; r < X.size(); ++r) {
        double fit = 0.0;
        for (std::size_t i = 0; i < K; ++i) fit += X[r][i] * beta[i];
        rss += (y[r] - fit) * (y[r] - fit);
    }
    return rss;
}

struct Line {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
};

Line fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    Line l;
    l.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    l.intercept = my - l.slope * mx;
    if (x.size() > 2 && sxx > 0.0) {
        double rss = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double e = y[i] - l.intercept - l.slope * x[i];
            rss += e * e;
        }
        l.slope_stderr = std::sqrt(rss / (n - 2.0) / sxx);
    }
    return l;
}

struct ZeroGeometry {
    std::vector<double> one_minus_r;
    std::vector<double> log_d;
    std::vector<double> mult;
};

ZeroGeometry zero_geometry(const std::vector<ZeroEntry>& zeros, const ClosedCircularSet& E, std::size_t m) {
    ZeroGeometry g;
    const std::size_t n = std::min(m, zeros.size());
    g.one_minus_r.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        g.one_minus_r.push_back(1.0 - std::abs(zeros[i].point));
        g.log_d.push_back(std::log(distance_to_set(zeros[i].point, E)));
        g.mult.push_back(zeros[i].multiplicity);
    }
    return g;
}

std::vector<double> summands(const ZeroGeometry& g, double q) {
    std::vector<double> s(g.one_minus_r.size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = g.mult[i] * g.one_minus_r[i] * std::exp(q * g.log_d[i]);
    return s;
}

}  // namespace

ConvergenceFit classify_series(std::vector<double> terms) {
    ConvergenceFit fit;
    for (double t : terms)
        if (!(t >= 0.0) || !std::isfinite(t)) throw ParameterError("series terms must be finite and non-negative");
    if (terms.size() < kMinDyadic) {
        fit.finite = true;
        fit.verdict = Verdict::Converges;
        return fit;
    }
    std::sort(terms.begin(), terms.end(), std::greater<>());
    std::vector<double> S(terms.size() + 1, 0.0);
    for (std::size_t i = 0; i < terms.size(); ++i) S[i + 1] = S[i] + terms[i];
    const double total = S.back();
    if (total == 0.0) {
        fit.verdict = Verdict::Converges;
        return fit;
    }

    std::vector<std::array<double, 3>> Xp;
    std::vector<std::array<double, 2>> Xl;
    std::vector<double> y;
    for (std::size_t m = kMinDyadic; m <= terms.size(); m *= 2) {
        const double D = S[m] - S[m / 2];
        // increments lost below rounding: the sum has settled
        if (!(D > 0.0) || D < 1e-15 * S[m]) {
            fit.verdict = Verdict::Converges;
            fit.points = y.size();
            return fit;
        }
        const double lm = std::log(static_cast<double>(m));
        Xp.push_back({1.0, lm, 1.0 / m});
        Xl.push_back({1.0, 1.0 / m});
        y.push_back(std::log(D));
    }
    fit.points = y.size();
    if (y.size() < 4) {
        // too few dyadic scales to fit three parameters; fall back to the trend
        fit.slope = y.size() >= 2 ? (y.back() - y.front()) / (std::log(2.0) * (y.size() - 1)) : 0.0;
        fit.verdict = Verdict::Indeterminate;
        return fit;
    }
    std::array<double, 3> bp{};
    std::array<double, 2> bl{};
    const double rss_p = std::max(least_squares(Xp, y, bp), kRssFloor);
    const double rss_l = std::max(least_squares(Xl, y, bl), kRssFloor);
    const double n = static_cast<double>(y.size());
    fit.slope = bp[1];
    fit.aic_power = n * std::log(rss_p / n) + 2.0 * 3.0;
    fit.aic_log = n * std::log(rss_l / n) + 2.0 * 2.0;
    const double gain = fit.aic_log - fit.aic_power;
    if (fit.slope >= 0.0 || gain <= 0.0) fit.verdict = Verdict::Diverges;
    else if (gain > kAicMargin) fit.verdict = Verdict::Converges;
    else fit.verdict = Verdict::Indeterminate;
    return fit;
}

BlaschkeSum blaschke_type_sum(const std::vector<ZeroEntry>& zeros, const ClosedCircularSet& E, double q,
                              std::size_t m) {
    const auto g = zero_geometry(zeros, E, m);
    BlaschkeSum out;
    const auto terms = summands(g, q);
    out.partial_sums.resize(terms.size());
    double s = 0.0;
    for (std::size_t i = 0; i < terms.size(); ++i) out.partial_sums[i] = (s += terms[i]);
    out.fit = classify_series(terms);
    return out;
}

ExponentEstimate convergence_exponent(const std::vector<ZeroEntry>& zeros, const ClosedCircularSet& E, double q_max,
                                      double resolution) {
    if (!(q_max > 0.0) || !(resolution > 0.0)) throw ParameterError("convergence_exponent: bad search range");
    ExponentEstimate est;
    est.method = EstimateMethod::PartialSumFit;
    const auto g = zero_geometry(zeros, E, zeros.size());
    auto verdict = [&](double q) { return classify_series(summands(g, q)); };

    const auto at0 = verdict(0.0);
    if (at0.finite) {
        est.finite = true;
        est.upper_witness = resolution;
        return est;
    }
    if (at0.verdict == Verdict::Converges) return est;
    if (verdict(q_max).verdict != Verdict::Converges) {
        est.value = est.lower_witness = q_max;
        est.upper_witness = std::numeric_limits<double>::infinity();
        est.indeterminate = true;
        return est;
    }
    double lo = 0.0, hi = q_max;
    while (hi - lo > resolution) {
        const double mid = 0.5 * (lo + hi);
        const auto v = verdict(mid).verdict;
        if (v == Verdict::Indeterminate) {
            est.indeterminate = true;
            break;
        }
        (v == Verdict::Converges ? hi : lo) = mid;
    }
    est.lower_witness = lo;
    est.upper_witness = hi;
    est.value = 0.5 * (lo + hi);
    return est;
}

ExponentEstimate growth_order(const std::function<double(std::complex<double>)>& log_abs_f,
                              const ClosedCircularSet& E, const ShellGrid& grid) {
    if (grid.shells < 2 || grid.angles < 1 || !(grid.d_min > 0.0) || !(grid.d_max > grid.d_min))
        throw ParameterError("growth_order: invalid shell grid");
    // anchors: evenly spaced arcs of E, each contributing its start point
    const auto& arcs = E.arcs();
    std::vector<std::complex<double>> anchors;
    const std::size_t na = std::min<std::size_t>(arcs.size(), static_cast<std::size_t>(grid.max_anchors));
    for (std::size_t i = 0; i < na; ++i) anchors.push_back(std::polar(1.0, arcs[i * arcs.size() / na].start));

    struct Job {
        int shell;
        std::complex<double> z;
    };
    std::vector<Job> jobs;
    std::vector<double> shell_d(grid.shells);
    const double psi_max = 0.45 * kPi;
    for (int s = 0; s < grid.shells; ++s) {
        const double d = grid.d_max * std::pow(grid.d_min / grid.d_max, static_cast<double>(s) / (grid.shells - 1));
        shell_d[s] = d;
        for (const auto& e : anchors) {
            for (int j = 0; j < grid.angles; ++j) {
                const double psi = grid.angles == 1 ? 0.0 : -psi_max + 2.0 * psi_max * j / (grid.angles - 1);
                const std::complex<double> z = e * (1.0 - d * std::polar(1.0, psi));
                if (!(std::abs(z) < 1.0)) continue;
                if (distance_to_set(z, E) < 0.5 * d) continue;
                jobs.push_back({s, z});
            }
        }
    }
    const auto values = parallel_map<double>(jobs.size(), [&](std::size_t i) { return log_abs_f(jobs[i].z); });
    std::vector<double> shell_max(grid.shells, -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < jobs.size(); ++i)
        shell_max[jobs[i].shell] = std::max(shell_max[jobs[i].shell], values[i]);

    std::vector<double> x, y;
    for (int s = 0; s < grid.shells; ++s) {
        if (shell_max[s] > 0.0 && std::isfinite(shell_max[s])) {
            x.push_back(-std::log(shell_d[s]));
            y.push_back(std::log(shell_max[s]));
        }
    }
    ExponentEstimate est;
    est.method = EstimateMethod::ShellFit;
    if (x.size() < 2) {
        est.bounded = x.empty();
        return est;
    }
    const Line l = fit_line(x, y);
    est.value = std::max(0.0, l.slope);
    est.lower_witness = std::max(0.0, l.slope - 2.0 * l.slope_stderr);
    est.upper_witness = std::max(est.value, l.slope + 2.0 * l.slope_stderr);
    return est;
}

std::size_t box_count(const std::vector<ZeroEntry>& zeros, double r, double theta) {
    if (!(r > 0.0 && r < 1.0)) throw ParameterError("box_count: r must lie in (0, 1)");
    const double outer = 0.5 * (1.0 + r);
    const double half_width = kPi * (1.0 - r);
    std::size_t n = 0;
    for (const auto& z : zeros) {
        const double a = std::abs(z.point);
        if (a < r || a > outer) continue;
        if (std::abs(signed_angle(std::arg(z.point) - theta)) > half_width) continue;
        n += static_cast<std::size_t>(z.multiplicity);
    }
    return n;
}

double example_radius(double rho, double n) { return 1.0 - std::pow(1.0 / (n + 1.0), 1.0 / (rho + 1.0)); }

std::vector<ZeroEntry> example_zero_set(double rho, std::size_t n_max) {
    if (!(rho > 0.0) || n_max < 1) throw ParameterError("example_zero_set: need rho > 0 and n_max >= 1");
    std::vector<ZeroEntry> out;
    out.reserve(n_max);
    for (std::size_t n = 1; n <= n_max; ++n) out.push_back({example_radius(rho, static_cast<double>(n)), 1});
    return out;
}

BoxIndices example_box_indices(double rho, double r) {
    if (!(r > 0.0 && r < 1.0)) throw ParameterError("example_box_indices: r must lie in (0, 1)");
    const double X = std::pow(1.0 - r, -(rho + 1.0));
    const double outer = 0.5 * (1.0 + r);
    auto radius = [&](std::size_t n) { return example_radius(rho, static_cast<double>(n)); };
    // closed-form guesses, then corrected against the floating-point radii
    std::size_t k = static_cast<std::size_t>(std::max(1.0, std::ceil(X - 1.0)));
    while (k > 1 && radius(k - 1) >= r) --k;
    while (radius(k) < r) ++k;
    std::size_t last = static_cast<std::size_t>(std::max(0.0, std::floor(std::exp2(rho + 1.0) * X) - 1.0));
    while (last > 0 && radius(last) > outer) --last;
    while (radius(last + 1) <= outer) ++last;
    return {k, last >= k ? last - k + 1 : 0};
}

double count_zeros_contour(const std::function<PolarValue(std::complex<double>)>& f, std::complex<double> center,
                           double radius, int samples, double min_modulus) {
    if (!(radius > 0.0) || samples < 8) throw ParameterError("count_zeros_contour: bad contour");
    const double log_min = std::log(min_modulus);
    struct Sample {
        PolarValue value;
        double velocity = 0.0;  // d arg f / d phi
    };
    // the phase velocity comes from a one-sided difference over a step far
    // below any rotation scale the sampling has to resolve
    constexpr double h = 1e-8;
    auto eval = [&](double phi) {
        const PolarValue v = f(center + std::polar(radius, phi));
        if (!(v.log_abs > log_min)) throw ContourError("function too close to zero on the contour");
        const PolarValue w = f(center + std::polar(radius, phi + h));
        return Sample{v, std::arg(w.phase / v.phase) / h};
    };
    // arg increment along [a, b]; a segment is accepted once the phase turns
    // less than pi/4 across it and agrees with the endpoint velocities, so
    // whole turns cannot hide between two samples
    std::function<double(double, const Sample&, double, const Sample&, int)> segment =
        [&](double a, const Sample& sa, double b, const Sample& sb, int depth) -> double {
        const double step = std::arg(sb.value.phase / sa.value.phase);
        const double len = b - a;
        const double predicted = 0.5 * (sa.velocity + sb.velocity) * len;
        const bool smooth = std::max(std::abs(sa.velocity), std::abs(sb.velocity)) * len <= 0.25 * kPi &&
                            std::abs(step - predicted) <= 0.125 * kPi;
        if (smooth || depth == 0) return step;
        const double mid = 0.5 * (a + b);
        const Sample sm = eval(mid);
        return segment(a, sa, mid, sm, depth - 1) + segment(mid, sm, b, sb, depth - 1);
    };
    std::vector<double> phis(samples + 1);
    for (int j = 0; j <= samples; ++j) phis[j] = kTwoPi * j / samples;
    std::vector<Sample> vals(samples + 1);
    for (int j = 0; j < samples; ++j) vals[j] = eval(phis[j]);
    vals[samples] = vals[0];
    double total = 0.0;
    for (int j = 0; j < samples; ++j) total += segment(phis[j], vals[j], phis[j + 1], vals[j + 1], 30);
    return total / kTwoPi;
}

TwoSidedReport two_sided_check(const std::vector<ZeroEntry>& zeros, const ClosedCircularSet& E,
                               const std::function<double(std::complex<double>)>& log_abs_f, double beta,
                               double tolerance, const ShellGrid& grid) {
    TwoSidedReport rep;
    rep.rho_Z = convergence_exponent(zeros, E);
    rep.beta = beta;
    rep.rho_f = growth_order(log_abs_f, E, grid);
    rep.right_holds = rep.rho_f.value <= rep.rho_Z.value + 1.0 + tolerance;
    rep.left_holds = rep.rho_Z.value + beta <= rep.rho_f.value + tolerance;
    return rep;
}

}  // namespace blaschke
