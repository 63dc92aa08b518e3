#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "blaschke/canonical_products.hpp"
#include "blaschke/errors.hpp"
#include "blaschke/growth_analysis.hpp"
#include "blaschke/prime_factors.hpp"

using namespace blaschke;
using cd = std::complex<double>;

namespace {

ClosedCircularSet points(std::vector<double> angles) { return ClosedCircularSet::from_generator(FinitePoints{angles}); }

std::vector<ZeroEntry> zone(double rho, std::size_t n) { return example_zero_set(rho, n); }

}  // namespace

TEST_CASE("choose_order picks rho <= p < rho + 1") {
    CHECK(choose_order(0.5) == 1);
    CHECK(choose_order(2.0) == 2);
    CHECK(choose_order(3.2) == 4);
    CHECK(choose_order(1e-9) == 1);
    CHECK_THROWS_AS(choose_order(0.0), ParameterError);
    CHECK_THROWS_AS(choose_order(-1.0), ParameterError);
}

TEST_CASE("zero validation") {
    CHECK_THROWS_AS(validate_zeros({{cd(1.0, 0.0), 1}}), ParameterError);
    CHECK_THROWS_AS(validate_zeros({{cd(0.2, 0.0), 0}}), ParameterError);
    CHECK_NOTHROW(validate_zeros({{cd(0.2, 0.3), 2}}));
}

TEST_CASE("blaschke_sum_K") {
    const auto one = points({0.0});
    CHECK(blaschke_sum_K({}, one, 1.0, SumKind::Nevanlinna) == 0.0);
    CHECK(blaschke_sum_K({{cd(0.0, 0.0), 1}}, one, 2.0, SumKind::Nevanlinna) == doctest::Approx(1.0));
    CHECK(blaschke_sum_K({{cd(0.0, 0.0), 1}}, one, 2.0, SumKind::Golubev) == doctest::Approx(1.0));
    // multiplicity counts
    CHECK(blaschke_sum_K({{cd(0.5, 0.0), 3}}, one, 1.0, SumKind::Nevanlinna) == doctest::Approx(3 * 0.5 * 0.5));
    // zone terms: (1 - r_n) d^rho = (n+1)^{-1}
    const auto z = zone(1.0, 10);
    double expected = 0.0;
    for (int n = 1; n <= 10; ++n) expected += 1.0 / (n + 1);
    CHECK(blaschke_sum_K(z, one, 1.0, SumKind::Nevanlinna) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("nearest_anchor") {
    const auto pm = points({0.0, kPi});
    CHECK(nearest_anchor(cd(0.5, 0.0), pm).angle() == 0.0);
    CHECK(nearest_anchor(cd(0.0, 0.0), pm).angle() == 0.0);
    CHECK(nearest_anchor(cd(-0.5, 0.1), pm).angle() == doctest::Approx(kPi));

    const auto cantor = ClosedCircularSet::from_generator(Cantor{1.0 / 3.0, 8}).truncated();
    const cd z = std::polar(0.3, kPi / 7);
    double best = 1e9;
    for (const auto& a : cantor.arcs()) {
        // brute force over fine samples of each arc
        for (int k = 0; k <= 64; ++k) best = std::min(best, std::abs(z - std::polar(1.0, a.start + a.length * k / 64)));
    }
    const auto e = nearest_anchor(z, cantor);
    CHECK(std::abs(z - e.value()) == doctest::Approx(distance_to_set(z, cantor)).epsilon(1e-12));
    CHECK(std::abs(z - e.value()) <= best + 1e-12);
}

TEST_CASE("anchors realise the distance") {
    const auto E = ClosedCircularSet::from_generator(Cantor{0.4, 8});
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<ZeroEntry> zs;
    for (int i = 0; i < 200; ++i) zs.push_back({std::polar(0.99 * u(rng), kTwoPi * u(rng)), 1});
    const auto set = ZeroSet::with_anchors(zs, E);
    REQUIRE(set.anchors.size() == zs.size());
    for (std::size_t i = 0; i < zs.size(); ++i)
        CHECK(std::abs(std::abs(zs[i].point - set.anchors[i].value()) - distance_to_set(zs[i].point, E)) < 1e-12);
    CHECK(set.total_multiplicity() == 200);
}

TEST_CASE("halfplane map values and bounds") {
    const CirclePoint one(0.0);
    CHECK(std::abs(halfplane_map(one, cd(-1.0, 0.0))) == 0.0);
    const cd at0 = halfplane_map(one, cd(0.0, 0.0));
    CHECK(at0.real() == doctest::Approx(0.0));
    CHECK(at0.imag() == doctest::Approx(1.0));
    const cd half = halfplane_map(one, cd(0.5, 0.0));
    CHECK(half.real() == doctest::Approx(0.0));
    CHECK(half.imag() == doctest::Approx(3.0));
    CHECK_THROWS_AS(halfplane_map(one, cd(1.0, 0.0)), PoleError);
    CHECK_THROWS_AS(halfplane_map(CirclePoint(kPi), cd(0.0, 0.0)), ParameterError);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0), th(-3.0, 3.0);
    for (int i = 0; i < 5000; ++i) {
        const CirclePoint t(th(rng));
        const cd lambda = std::polar(std::sqrt(u(rng)) * 0.999, kTwoPi * u(rng));
        const cd g = halfplane_map(t, lambda);
        const double dist = std::abs(t.value() - lambda);
        const double im = std::cos(t.angle() > kPi ? (t.angle() - kTwoPi) / 2 : t.angle() / 2) *
                          (1.0 - std::norm(lambda)) / (dist * dist);
        CHECK(g.imag() == doctest::Approx(im).epsilon(1e-9));
        CHECK(g.imag() > 0.0);
        CHECK(std::abs(g) <= 2.0 / dist + 1e-12);
        const double delta = std::abs(lambda + 1.0);
        CHECK(std::abs(g) >= delta / dist - 1e-12);
    }
}

TEST_CASE("classical blaschke products") {
    CHECK(blaschke_product({}, cd(0.3, 0.2)) == cd(1.0, 0.0));
    CHECK(std::abs(blaschke_product({{cd(0.0, 0.0), 1}}, cd(0.0, 0.0))) == 0.0);
    const cd b = blaschke_product({{cd(0.5, 0.0), 1}}, cd(0.0, 0.0));
    CHECK(b.real() == doctest::Approx(0.5));
    CHECK(b.imag() == doctest::Approx(0.0));
    const std::vector<ZeroEntry> zs = {{cd(0.3, 0.4), 2}, {cd(-0.6, 0.1), 1}, {cd(0.0, 0.0), 1}};
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-0.7, 0.7);
    for (int i = 0; i < 200; ++i) CHECK(std::abs(blaschke_product(zs, cd(u(rng), u(rng)))) < 1.0);
    // unimodular on the circle
    CHECK(std::abs(blaschke_product(zs, std::polar(1.0, 0.7))) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(blaschke_product(zs, cd(0.3, 0.4))) == 0.0);
}

TEST_CASE("golubev product matches a term-by-term product") {
    const auto E = points({0.0});
    CHECK(CanonicalProduct::golubev({}, E, 1.0).evaluate(cd(0.1, 0.2)).value() == cd(1.0, 0.0));
    CHECK(CanonicalProduct::golubev({}, E, 1.0).evaluate(cd(0.1, 0.2)).tail_bound == 0.0);

    const auto zs = zone(1.0, 50);
    const auto G = CanonicalProduct::golubev(zs, E, 1.0);
    CHECK(G.order() == 1);
    const auto v = G.evaluate(cd(-0.5, 0.0));
    // independent loop over W((z_n - 1) / (z - 1), 1)
    cd direct(1.0, 0.0);
    for (const auto& z : zs) direct *= weierstrass_factor((z.point - 1.0) / (cd(-0.5, 0.0) - 1.0), 1);
    CHECK(std::abs(v.value() - direct) < 1e-12);
    // mpmath, 40 digits
    CHECK(v.value().real() == doctest::Approx(0.38358291462506829058).epsilon(1e-12));
    CHECK(std::abs(v.value().imag()) < 1e-15);

    const auto G2 = CanonicalProduct::golubev(zone(1.5, 50), E, 1.5);
    CHECK(G2.order() == 2);
    const cd w = G2.evaluate(cd(0.3, 0.4)).value();
    CHECK(w.real() == doctest::Approx(-0.98377488173583900596).epsilon(1e-11));
    CHECK(w.imag() == doctest::Approx(-2.3063952534511340444).epsilon(1e-11));
}

TEST_CASE("products vanish exactly at their zeros") {
    const auto E = points({0.0});
    const std::vector<ZeroEntry> single = {{cd(0.4, 0.3), 1}};
    CHECK(CanonicalProduct::golubev(single, E, 1.0).evaluate(cd(0.4, 0.3)).polar.is_zero());
    CHECK(CanonicalProduct::nevanlinna(single, E, 1.0).evaluate(cd(0.4, 0.3)).polar.is_zero());
    CHECK(CanonicalProduct::blaschke(single, E).evaluate(cd(0.4, 0.3)).polar.is_zero());
    CHECK_FALSE(CanonicalProduct::nevanlinna(single, E, 1.0).evaluate(cd(0.4, 0.31)).polar.is_zero());

    const auto zs = zone(1.0, 200);
    const auto f = CanonicalProduct::nevanlinna(zs, E, 1.0);
    const auto eval = [&](cd z) { return f.evaluate(z).polar; };
    for (std::size_t i : {0u, 7u, 50u, 199u}) {
        CHECK(f.evaluate(zs[i].point).polar.is_zero());
        const double gap = std::abs(zs[i].point - zs[i == 0 ? 1 : i - 1].point);
        CHECK(count_zeros_contour(eval, zs[i].point, std::min(1e-3, gap / 2), 64, 0.0) ==
              doctest::Approx(1.0).epsilon(0.1));
    }
    // a double zero counts twice
    const std::vector<ZeroEntry> dbl = {{cd(-0.2, 0.5), 2}, {cd(0.3, -0.1), 1}};
    const auto g = CanonicalProduct::golubev(dbl, E, 2.0);
    CHECK(count_zeros_contour([&](cd z) { return g.evaluate(z).polar; }, cd(-0.2, 0.5), 0.05) ==
          doctest::Approx(2.0).epsilon(1e-6));
    CHECK(count_zeros_contour([&](cd z) { return g.evaluate(z).polar; }, cd(0.0, 0.0), 0.6) ==
          doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("nevanlinna product single factor") {
    // g(z) = i (1 + z) / (1 - z): w = g(0) = i, omega = g(0.5) = 3i, N_1 = W(1/3)/W(-1/3) = e^{2/3}/2
    const auto E = points({0.0});
    const auto f = CanonicalProduct::nevanlinna({{cd(0.5, 0.0), 1}}, E, 1.0);
    const cd v = f.evaluate(cd(0.0, 0.0)).value();
    CHECK(v.real() == doctest::Approx(0.97386702052733792832).epsilon(1e-13));
    CHECK(std::abs(v.imag()) < 1e-15);
    CHECK(CanonicalProduct::nevanlinna({}, E, 1.0).evaluate(cd(0.3, 0.0)).value() == cd(1.0, 0.0));
}

TEST_CASE("nevanlinna configuration: rotation, delta and the Blaschke branch") {
    const auto one = points({0.0});
    const auto f = CanonicalProduct::nevanlinna({{cd(-0.9, 0.0), 1}, {cd(0.5, 0.0), 1}}, one, 1.0);
    CHECK(f.rotation() == 0.0);
    CHECK(f.delta() == doctest::Approx(1.0));
    CHECK(f.near_minus_one().size() == 1);
    CHECK(f.main_zeros().size() == 1);
    CHECK(f.all_zeros().size() == 2);
    CHECK(f.evaluate(cd(-0.9, 0.0)).polar.is_zero());

    // -1 in E: the configuration is rotated so the largest gap straddles -1
    const auto pm = points({0.0, kPi});
    const auto r = CanonicalProduct::nevanlinna({{cd(0.0, 0.5), 1}}, pm, 1.0);
    CHECK(std::abs(std::abs(r.rotation()) - kPi / 2) < 1e-12);
    CHECK(r.delta() == doctest::Approx(std::sqrt(2.0) / 2));
    CHECK(r.evaluate(cd(0.0, 0.5)).polar.is_zero());
    CHECK(std::isfinite(r.evaluate(cd(0.0, -0.5)).log_abs()));

    CHECK_THROWS_AS(CanonicalProduct::nevanlinna({}, ClosedCircularSet::full_circle(), 1.0), ConfigurationError);
    CHECK_THROWS_AS(f.evaluate(cd(1.0, 0.0)), PoleError);
    CHECK_THROWS_AS(f.evaluate(cd(1.5, 0.0)), ParameterError);
}

TEST_CASE("certified truncation") {
    const auto E = points({0.0});
    const auto zs = zone(1.0, 2000);
    ProductOptions tight;
    tight.tolerance = 1e-10;
    const auto f = CanonicalProduct::nevanlinna(zs, E, 1.0, tight);
    const auto v = f.evaluate(cd(-0.3, 0.2));
    CHECK(v.tail_bound <= 1e-10);
    CHECK(v.terms_used <= zs.size());
    const auto parts = f.partial_products(cd(-0.3, 0.2));
    const auto& full = parts.back();
    const cd diff(full.value.log_abs - v.polar.log_abs, std::arg(full.value.phase / v.polar.phase));
    CHECK(std::abs(diff) <= v.tail_bound + 1e-13);

    ProductOptions capped;
    capped.tolerance = 1e-14;
    capped.term_cap = 5;
    CHECK_THROWS_AS(CanonicalProduct::nevanlinna(zs, E, 1.0, capped).evaluate(cd(-0.3, 0.2)), BudgetError);
}

TEST_CASE("nevanlinna partial products on the interval near -1") {
    const auto E = points({0.0});
    const auto f = CanonicalProduct::nevanlinna(zone(1.0, 100), E, 1.0);
    const double eta = f.delta() * f.delta() / 4.0;
    for (double s : {0.1, 0.5, 0.9}) {
        const double x = -1.0 + eta * s;
        const auto parts = f.partial_products(x);
        REQUIRE(parts.size() == 101);
        const auto& last = parts.back();
        CHECK(std::isfinite(last.value.log_abs));
        std::size_t certified = 0;
        for (const auto& p : parts) {
            if (!std::isfinite(p.tail_bound)) continue;
            ++certified;
            const cd diff(last.value.log_abs - p.value.log_abs, std::arg(last.value.phase / p.value.phase));
            CHECK(std::abs(diff) <= p.tail_bound + 1e-13);
        }
        CHECK(certified > 50);
    }
}

TEST_CASE("zero order does not change the value") {
    const auto E = points({0.0, 2.0});
    std::vector<ZeroEntry> zs = zone(1.0, 300);
    for (auto& z : zs) z.point *= std::polar(1.0, 0.3 * std::sin(17.0 * z.point.real()));
    std::vector<ZeroEntry> shuffled = zs;
    std::shuffle(shuffled.begin(), shuffled.end(), std::mt19937_64(3));
    for (const cd z : {cd(-0.4, 0.1), cd(0.2, -0.6)}) {
        const auto a = CanonicalProduct::golubev(zs, E, 1.0).evaluate(z);
        const auto b = CanonicalProduct::golubev(shuffled, E, 1.0).evaluate(z);
        CHECK(std::abs(a.log_abs() - b.log_abs()) <= a.tail_bound + b.tail_bound + 1e-12);
        const auto c = CanonicalProduct::nevanlinna(zs, E, 1.0).evaluate(z);
        const auto d = CanonicalProduct::nevanlinna(shuffled, E, 1.0).evaluate(z);
        CHECK(std::abs(c.log_abs() - d.log_abs()) <= c.tail_bound + d.tail_bound + 1e-12);
    }
}

TEST_CASE("per-factor upper bounds along the construction") {
    const auto zs = zone(1.0, 100);
    const CirclePoint one(0.0);
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-0.95, 0.95);
    for (int i = 0; i < 200; ++i) {
        const cd z(u(rng), u(rng));
        if (std::abs(z) >= 0.99) continue;
        const cd w = halfplane_map(one, z);
        for (const auto& zn : zs) {
            const cd omega = halfplane_map(one, zn.point);
            for (const auto& r : check_nevanlinna_bounds(w, omega, 1)) CHECK(r.lhs <= r.rhs + 1e-10);
        }
    }
}

TEST_CASE("growth certificates") {
    const auto E = points({0.0});
    const GridSpec coarse{0.02, 2.0, 20, 20};
    const auto unit = growth_certificate(CanonicalProduct::golubev({}, E, 1.0), 2.0, coarse);
    CHECK(unit.fitted_constant == 0.0);
    CHECK(unit.max_violation <= 0.0);

    const auto G = CanonicalProduct::golubev(zone(1.0, 50), E, 1.0);
    const auto c1 = growth_certificate(G, 2.0, coarse);
    const auto c2 = growth_certificate(G, 2.0, GridSpec{0.02, 2.0, 40, 40});
    CHECK(c1.fitted_constant > 0.0);
    CHECK(c2.fitted_constant < 2.0 * c1.fitted_constant);
    CHECK(c1.fitted_constant < 2.0 * c2.fitted_constant);
    CHECK(c1.max_violation <= 0.0);
    CHECK(c2.max_violation <= 0.0);
    CHECK(c2.points > c1.points);

    const auto N = CanonicalProduct::nevanlinna(zone(1.0, 50), E, 1.0);
    const auto cn = growth_certificate(N, 2.0, coarse);
    CHECK(std::isfinite(cn.fitted_constant));
    CHECK(cn.max_violation <= 0.0);

    for (const auto& z : disk_grid(coarse, E)) {
        CHECK(std::abs(z) < 1.0);
        CHECK(distance_to_set(z, E) >= 0.02);
    }
    CHECK_THROWS_AS(disk_grid(GridSpec{0.0, 2.0, 10, 10}, E), ParameterError);
}

TEST_CASE("product kinds are named") {
    CHECK(to_string(ProductKind::Golubev) == "golubev");
    CHECK(to_string(ProductKind::Nevanlinna) == "nevanlinna");
    CHECK(to_string(ProductKind::Blaschke) == "blaschke");
}
