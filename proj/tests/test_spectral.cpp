#include <doctest.h>

#include <cmath>
#include <random>

#include "snls/grid.hpp"
#include "snls/spectral.hpp"

using namespace snls;

namespace {
const double kInf = std::numeric_limits<double>::infinity();

double field_distance(const ComplexField& a, const ComplexField& b) {
    ComplexField d = a;
    for (int j = 0; j < d.n(); ++j) d.values[j] -= b.values[j];
    return l2_norm(d);
}
}  // namespace

TEST_CASE("free_propagate at t = 0 is the identity") {
    const GridPtr g = make_grid(16.0, 128);
    const ComplexField f = make_field(g, [](double x) {
        return cdouble(std::exp(-x * x), 0.4 * std::sin(x));
    });
    CHECK(field_distance(free_propagate(f, 0.0), f) < 1e-14);
}

TEST_CASE("plane waves are Fourier eigenfunctions") {
    const GridPtr g = make_grid(16.0, 128);
    const double k = 3.0 * M_PI / 16.0;  // grid wavenumber, signed index 3
    const ComplexField f = make_field(g, [&](double x) { return std::polar(1.0, k * x); });
    const double t = 0.37;
    const ComplexField u = free_propagate(f, t);
    const cdouble expected_factor = std::polar(1.0, -k * k * t);
    for (int j = 0; j < g->n; ++j) {
        CHECK(std::abs(u.values[j] - expected_factor * f.values[j]) < 1e-12);
    }
}

TEST_CASE("Gaussian free evolution matches the closed form") {
    // u0 = e^{-x^2/2}  ->  u(t,x) = (1+2it)^{-1/2} exp(-x^2 / (2 (1+2it)))
    const GridPtr g = make_grid(16.0, 512);
    const ComplexField f =
        make_field(g, [](double x) { return cdouble(std::exp(-0.5 * x * x), 0.0); });
    const double t = 1.0;
    const ComplexField u = free_propagate(f, t);
    const cdouble w(1.0, 2.0 * t);
    double worst = 0.0;
    for (int j = 0; j < g->n; ++j) {
        const double x = g->points[j];
        const cdouble ref = std::exp(-x * x / (2.0 * w)) / std::sqrt(w);
        worst = std::max(worst, std::abs(u.values[j] - ref));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("unitarity, group law, and time reversal") {
    const GridPtr g = make_grid(16.0, 256);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> gauss;
    ComplexField f = make_field(g, [&](double x) {
        return cdouble(std::exp(-0.3 * x * x), 0.1 * x * std::exp(-0.2 * x * x));
    });
    for (auto& v : f.values) v += 0.01 * cdouble(gauss(rng), gauss(rng));

    for (double t : {0.1, 1.7, -2.3}) {
        const ComplexField u = free_propagate(f, t);
        CHECK(std::abs(l2_norm(u) - l2_norm(f)) < 1e-12 * l2_norm(f));
        CHECK(field_distance(free_propagate(u, -t), f) < 1e-12);
    }
    const ComplexField a = free_propagate(free_propagate(f, 0.4), 0.9);
    const ComplexField b = free_propagate(f, 1.3);
    CHECK(field_distance(a, b) < 1e-12);
}

TEST_CASE("spectral_derivative differentiates trigonometric data exactly") {
    const GridPtr g = make_grid(M_PI, 64);
    const ComplexField f = make_field(g, [](double x) { return cdouble(std::sin(3 * x), 0.0); });
    const ComplexField d2 = spectral_derivative(f, 2);
    for (int j = 0; j < g->n; ++j) {
        CHECK(std::abs(d2.values[j].real() + 9.0 * std::sin(3 * g->points[j])) < 1e-11);
    }
}

TEST_CASE("dispersive decay fit for a narrow Gaussian") {
    const GridPtr g = make_grid(128.0, 4096);
    const double sigma = 0.6;
    const ComplexField f = make_field(g, [&](double x) {
        return cdouble(std::exp(-x * x / (2 * sigma * sigma)), 0.0);
    });
    const double slope = dispersive_decay_fit(f, {1.0, 2.0, 4.0, 8.0});
    CHECK(slope == doctest::Approx(-0.5).epsilon(0.06));
    CHECK(std::abs(slope + 0.5) < 0.03);
}

TEST_CASE("dispersive decay fit rejects bad inputs") {
    const GridPtr g = make_grid(64.0, 1024);
    // A plane wave never decays and fills the whole torus: wrap-around signal.
    const double k = M_PI / 64.0;
    const ComplexField pw = make_field(g, [&](double x) { return std::polar(1.0, k * x); });
    CHECK_THROWS_AS(dispersive_decay_fit(pw, {1.0, 2.0, 4.0}), std::invalid_argument);
    CHECK_THROWS_AS(dispersive_decay_fit(zero_field(g), {1.0, 2.0}), std::invalid_argument);
    const ComplexField f =
        make_field(g, [](double x) { return cdouble(std::exp(-x * x), 0.0); });
    CHECK_THROWS_AS(dispersive_decay_fit(f, {0.5, 2.0}), std::invalid_argument);
}

TEST_CASE("strichartz_ratio endpoints and admissibility") {
    const GridPtr g = make_grid(16.0, 256);
    const ComplexField f = make_field(g, [](double x) {
        return cdouble(std::exp(-0.5 * x * x) / std::pow(M_PI, 0.25), 0.0);
    });
    CHECK(strichartz_ratio(f, kInf, 2.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(strichartz_ratio(f, 4.0, 4.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(strichartz_ratio(zero_field(g), 5.0, 10.0, 1.0), std::invalid_argument);
}

TEST_CASE("strichartz_ratio (5,10) is stable under grid refinement") {
    auto gaussian = [](double x) { return cdouble(std::exp(-0.5 * x * x), 0.0); };
    const double r1 = strichartz_ratio(make_field(make_grid(16.0, 256), gaussian), 5, 10, 1.0);
    const double r2 = strichartz_ratio(make_field(make_grid(16.0, 512), gaussian), 5, 10, 1.0);
    CHECK(r1 > 0.0);
    CHECK(std::abs(r1 - r2) < 1e-6);
}
