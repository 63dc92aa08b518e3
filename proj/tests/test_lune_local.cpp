#include <doctest.h>

#include <cmath>
#include <random>

#include "blaschke/errors.hpp"
#include "blaschke/growth_analysis.hpp"
#include "blaschke/lune_local.hpp"

using namespace blaschke;
using cd = std::complex<double>;

namespace {

ClosedCircularSet points(std::vector<double> angles) { return ClosedCircularSet::from_generator(FinitePoints{angles}); }

}  // namespace

TEST_CASE("lune geometry") {
    const Lune L = lune_geometry(CirclePoint(0.0), 2.0 * std::sin(kPi / 8));
    CHECK(L.alpha == doctest::Approx(kPi / 4));
    CHECK(L.kappa == doctest::Approx(5.0 / 8.0));
    CHECK(std::abs(L.vertex_plus - std::polar(1.0, kPi / 4)) < 1e-15);
    CHECK(std::abs(L.vertex_minus - std::polar(1.0, -kPi / 4)) < 1e-15);

    // kappa tends to 1/2 for thin lunes and to 2/3 as tau -> 1
    CHECK(lune_geometry(CirclePoint(1.0), 1e-9).kappa == doctest::Approx(0.5));
    CHECK(lune_geometry(CirclePoint(1.0), 1.0 - 1e-12).kappa == doctest::Approx(2.0 / 3.0));
    CHECK(lune_geometry(CirclePoint(1.0), 1.0 - 1e-12).alpha == doctest::Approx(kPi / 3));

    const Lune M = lune_geometry(CirclePoint(2.0), 0.4);
    CHECK(std::abs(std::abs(M.vertex_plus) - 1.0) < 1e-15);
    CHECK(std::abs(M.vertex_plus - M.t.value()) == doctest::Approx(0.4));
    CHECK(std::abs(M.vertex_minus - M.t.value()) == doctest::Approx(0.4));
    CHECK(M.contains(std::polar(0.9, 2.0)));
    CHECK_FALSE(M.contains(std::polar(0.9, 2.5)));
    CHECK_FALSE(M.contains(std::polar(1.0, 2.0)));

    CHECK_THROWS_AS(lune_geometry(CirclePoint(0.0), 1.0), ParameterError);
    CHECK_THROWS_AS(lune_geometry(CirclePoint(0.0), 0.0), ParameterError);
}

TEST_CASE("lune map sends the boundary to the circle and is inverted") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (double tau : {0.1, 0.5, 0.9}) {
        const Lune L = lune_geometry(CirclePoint(0.7), tau);
        for (int i = 1; i < 200; ++i) {
            const double s = i / 200.0;
            const cd on_t = L.t.value() * std::polar(1.0, L.alpha * (2.0 * s - 1.0));
            CHECK(std::abs(std::abs(lune_map_forward(L, on_t)) - 1.0) < 1e-10);
            const double half = 0.5 * kPi - 0.5 * L.alpha;
            const cd on_c = L.t.value() * (1.0 + L.tau * std::polar(-1.0, (2.0 * s - 1.0) * half));
            CHECK(std::abs(std::abs(lune_map_forward(L, on_c)) - 1.0) < 1e-10);
        }
        for (int i = 0; i < 300; ++i) {
            const cd z = L.t.value() * (1.0 - L.tau * u(rng) * std::polar(1.0, kPi * (u(rng) - 0.5)));
            if (!L.contains(z)) continue;
            const cd w = lune_map_forward(L, z);
            CHECK(std::abs(w) < 1.0);
            CHECK(std::abs(lune_map_inverse(L, w) - z) < 1e-11);
        }
        // the inverse reaches the whole disk
        for (int i = 0; i < 100; ++i) {
            const cd w = std::polar(0.98 * u(rng), kTwoPi * u(rng));
            const cd z = lune_map_inverse(L, w);
            CHECK(L.contains(z));
            CHECK(std::abs(lune_map_forward(L, z) - w) < 1e-11);
        }
    }
    const Lune L = lune_geometry(CirclePoint(0.0), 0.5);
    CHECK_THROWS_AS(lune_map_forward(L, L.vertex_plus), PoleError);
}

TEST_CASE("lune grid and distortion") {
    const auto grid = lune_grid(CirclePoint(1.0), 0.2, 10, 11);
    CHECK(grid.size() > 50);
    for (const auto& z : grid) {
        CHECK(std::abs(z) < 1.0);
        CHECK(std::abs(z - std::polar(1.0, 1.0)) < 0.2);
    }
    for (double tau : {0.3, 0.5, 0.8}) {
        const auto p = distortion_profile(lune_geometry(CirclePoint(0.0), tau), tau / 2);
        CHECK(p.points > 100);
        CHECK(p.min_ratio > 0.0);
        CHECK(p.max_ratio / p.min_ratio < 1e3);
        CHECK(p.min_deriv > 0.0);
        CHECK(std::isfinite(p.max_deriv));
    }
    CHECK_THROWS_AS(distortion_profile(lune_geometry(CirclePoint(0.0), 0.5), 0.6), ParameterError);
}

TEST_CASE("restricted distance ratios") {
    const auto single = restricted_distance_check(points({0.0}), CirclePoint(0.0), 0.3);
    CHECK(single.min_ratio == doctest::Approx(1.0));
    CHECK(single.max_ratio == doctest::Approx(1.0));

    const auto cantor = ClosedCircularSet::from_generator(Cantor{1.0 / 3.0, 10});
    const auto r = restricted_distance_check(cantor, CirclePoint(0.0), 0.2);
    CHECK_FALSE(r.empty);
    CHECK(r.min_ratio > 0.0);
    CHECK(r.max_ratio <= 1.0 + 1e-12);

    const auto far = restricted_distance_check(points({0.0}), CirclePoint(2.0), 0.2);
    CHECK(far.empty);
}

TEST_CASE("local blaschke sum at a point of E") {
    const auto E = points({0.0});
    const auto zs = example_zero_set(1.0, 100000);
    // f in the class of order 2; beta(1) = 1, so the exponent is 2 - 1 + 0.1
    const auto s = local_blaschke_sum(zs, E, CirclePoint(0.0), 0.5, 2.0, 0.1);
    CHECK(s.beta_t == doctest::Approx(1.0).epsilon(0.02));
    CHECK(s.exponent == doctest::Approx(1.1).epsilon(0.02));
    CHECK(s.delta > 0.0);
    CHECK(s.delta <= 0.25);
    CHECK(s.eta > 0.0);
    CHECK(s.zeros_in_lune > 0);
    CHECK(s.fit.verdict == Verdict::Converges);

    // below the threshold the local sum diverges
    const auto low = local_blaschke_sum(zs, E, CirclePoint(0.0), 0.5, 1.0, 0.01);
    CHECK(low.exponent == doctest::Approx(0.01).epsilon(0.5));
    CHECK(low.fit.verdict == Verdict::Diverges);
}

TEST_CASE("local blaschke sum away from E") {
    const auto E = points({0.0});
    std::vector<ZeroEntry> zs;
    for (int n = 1; n <= 2000; ++n) zs.push_back({std::polar(1.0 - 1.0 / (n * (n + 1.0)), kPi), 1});
    const auto s = local_blaschke_sum(zs, E, CirclePoint(kPi), 0.5, 2.0, 0.1);
    CHECK(s.exponent == 0.0);
    CHECK(std::isinf(s.beta_t));
    CHECK(s.zeros_in_lune > 0);
    CHECK(s.fit.verdict == Verdict::Converges);

    CHECK_THROWS_AS(local_blaschke_sum(zs, E, CirclePoint(0.0), 1.5, 1.0, 0.1), ParameterError);
    CHECK_THROWS_AS(local_blaschke_sum(zs, E, CirclePoint(0.0), 0.5, 1.0, 0.0), ParameterError);
}

TEST_CASE("set separation") {
    CHECK(set_separation(points({0.0}), points({kPi})) == doctest::Approx(2.0));
    CHECK(set_separation(points({0.0}), points({kPi / 2})) == doctest::Approx(std::sqrt(2.0)));
    CHECK(set_separation(points({0.0, 1.0}), points({1.0})) == 0.0);
    const auto arc = ClosedCircularSet::from_generator(ClosedArcs{{{0.0, 1.0}}});
    CHECK(set_separation(arc, points({1.5})) == doctest::Approx(2.0 * std::sin(0.25)));
}

TEST_CASE("disjoint union weights") {
    const std::vector<SetPart> parts = {{points({0.0}), 1.0}, {points({kPi}), 2.0}};
    // beta of a point is 1, so q = (rho - 1 + eps)_+
    const std::vector<double> q = {0.1, 1.1};
    const cd z(0.5, 0.0);
    const auto w = disjoint_weight(z, parts, q);
    CHECK(w.part == 0);
    CHECK(w.weight == doctest::Approx(std::min(std::pow(0.5, 0.1), std::pow(1.5, 1.1))));
    const auto w2 = disjoint_weight(cd(0.0, 0.0), parts, {1.0, 1.0});
    CHECK(w2.weight == doctest::Approx(1.0));

    std::vector<ZeroEntry> zs;
    for (int n = 1; n <= 500; ++n) {
        zs.push_back({cd(1.0 - 1.0 / (n + 1.0), 0.0), 1});
        zs.push_back({cd(-1.0 + 1.0 / (n + 1.0), 0.0), 1});
    }
    const auto sum = disjoint_union_sum(zs, parts, 0.1);
    REQUIRE(sum.q.size() == 2);
    CHECK(sum.q[0] == doctest::Approx(0.1).epsilon(0.05));
    CHECK(sum.q[1] == doctest::Approx(1.1).epsilon(0.05));
    CHECK(sum.separation == doctest::Approx(2.0));
    REQUIRE(sum.weights.size() == zs.size());
    CHECK(sum.partial_sums.size() == zs.size());
    for (const auto& b : sum.covering) CHECK(b.radius == doctest::Approx(0.25));
    // the covering balls are a net of T
    for (int i = 0; i < 360; ++i) {
        const cd t = std::polar(1.0, kTwoPi * i / 360);
        double best = 9.0;
        for (const auto& b : sum.covering) best = std::min(best, std::abs(t - b.center.value()));
        CHECK(best <= 0.25);
    }
    // a zero close to one part uses that part's weight exactly
    for (std::size_t i = 0; i < zs.size(); ++i) {
        const double d0 = std::abs(zs[i].point - 1.0), d1 = std::abs(zs[i].point + 1.0);
        if (std::max(d0, d1) <= 3.0 * std::min(d0, d1)) continue;
        const std::size_t k = d0 < d1 ? 0 : 1;
        CHECK(sum.weights[i].part == k);
        CHECK(sum.weights[i].weight == std::pow(std::min(d0, d1), sum.q[k]));
    }

    const std::vector<SetPart> overlapping = {{points({0.0, 1.0}), 1.0}, {points({1.0}), 1.0}};
    CHECK_THROWS_AS(disjoint_union_sum(zs, overlapping, 0.1), ConfigurationError);
    CHECK_THROWS_AS(disjoint_union_sum(zs, {}, 0.1), ParameterError);
}

TEST_CASE("type is preserved by the lune map") {
    const Lune L = lune_geometry(CirclePoint(0.0), 0.5);
    const auto E = ClosedCircularSet::from_generator(Cantor{1.0 / 3.0, 14, -0.1, 0.2});
    const auto F = [&](cd z) { return lune_map_forward(L, z); };
    const auto [before, after] = conformal_type_invariance_check(E, F);
    CHECK(before == doctest::Approx(1.0 - std::log(2.0) / std::log(3.0)).epsilon(0.05));
    CHECK(std::abs(before - after) <= 0.1);

    const auto image = map_set(E.truncated(), F);
    CHECK(image.arcs().size() == E.truncated().arcs().size());
    const auto pt = map_set(points({0.05}), F);
    REQUIRE(pt.arcs().size() == 1);
    CHECK(std::abs(std::abs(F(std::polar(1.0, 0.05))) - 1.0) < 1e-12);
}
