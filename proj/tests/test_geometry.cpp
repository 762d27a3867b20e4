#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "presslab/geometry.hpp"

using namespace presslab;
using namespace presslab::geometry;

TEST_CASE("ratio closed forms") {
    CHECK(ratio(StarDomain::ball(3, 1.0)) == 1.0);
    CHECK(ratio(StarDomain::ball(2, 0.37)) == 1.0);
    CHECK(ratio(StarDomain::cube(3, 1.0)) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
    CHECK(ratio(StarDomain::cube(2, 2.0)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(ratio(StarDomain::ellipsoid(3, {3.0, 1.5, 1.0})) == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("ratio invariance under scaling and translation is exact") {
    const StarDomain cube = StarDomain::cube(3, 1.0);
    const StarDomain moved = StarDomain::scaled_translated(cube, 2.5, Vec(0.3, -1.0, 4.0));
    CHECK(ratio(moved) == ratio(cube)); // bitwise, not approximate

    const StarDomain ell = StarDomain::ellipsoid(2, {1.7, 0.9, 1.0});
    const StarDomain wrapped2 = StarDomain::scaled_translated(
        StarDomain::scaled_translated(ell, 0.1, Vec(5.0, 5.0)), 7.0, Vec(-2.0, 0.0));
    CHECK(ratio(wrapped2) == ratio(ell));

    CHECK(ratio(ell) >= 1.0);
    CHECK(moved.inscribed_radius() > 0.0);
    CHECK(moved.circumscribed_radius() >= moved.inscribed_radius());
}

TEST_CASE("scaled-translated membership") {
    const StarDomain ball = StarDomain::ball(2, 1.0);
    const StarDomain moved = StarDomain::scaled_translated(ball, 2.0, Vec(10.0, 0.0));
    CHECK(moved.contains(Vec(10.0, 0.0)));
    CHECK(moved.contains(Vec(11.9, 0.0)));
    CHECK(!moved.contains(Vec(12.1, 0.0)));
    CHECK(moved.center()[0] == doctest::Approx(10.0));
}

TEST_CASE("flatten") {
    const BoundaryChart flat = charts::flat(2, 1.0);
    const Vec y(0.3, 0.1);
    const Vec x = flatten(flat, y);
    CHECK(x[0] == 0.3);
    CHECK(x[1] == 0.1);

    const BoundaryChart quad = charts::quadratic(2, 1.0, 0.1);
    const Vec x2 = flatten(quad, Vec(0.2, 0.5));
    CHECK(x2[0] == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(x2[1] == doctest::Approx(0.504).epsilon(1e-15));

    // y_n = 0 maps onto the graph {(y', h(y'))}
    const Vec on_graph = flatten(quad, Vec(0.4, 0.0));
    CHECK(on_graph[1] == doctest::Approx(quad.height(Vec(0.4, 0.0))).epsilon(1e-15));

    CHECK_THROWS_AS(flatten(quad, Vec(1.5, 0.0)), DomainError);
    CHECK_THROWS_AS(flatten(quad, Vec(0.0, 1.5)), DomainError);
}

TEST_CASE("jacobian structure and inverse") {
    const BoundaryChart flat = charts::flat(3, 1.0);
    const Mat id = jacobian(flat, Vec(0.1, 0.2, 0.3));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(id(i, j) == (i == j ? 1.0 : 0.0));

    const BoundaryChart tilt = charts::tilt(2, 1.0, 0.7);
    const Mat J = jacobian(tilt, Vec(0.2, 0.1));
    CHECK(J(1, 0) == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(J(1, 1) == 1.0);
    CHECK(J(0, 1) == 0.0);

    // product is the identity to machine precision for random charts
    oracles::Rng rng(2024);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = trial % 2 ? 2 : 3;
        const BoundaryChart c = charts::cosine(n, 1.0, rng.uniform(-0.5, 0.5), rng.uniform(0.5, 3.0));
        Vec y = Vec::zero(n);
        for (int a = 0; a < n; ++a) y[a] = rng.uniform(-0.4, 0.4);
        const Mat P = jacobian(c, y) * inverse_jacobian(c, y);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) CHECK(std::abs(P(i, j) - (i == j ? 1.0 : 0.0)) < 1e-12);
    }

    // det D Phi = 1: unit triangular
    const Mat Jq = jacobian(charts::quadratic(2, 1.0, 0.3), Vec(0.25, 0.1));
    CHECK(Jq(0, 0) * Jq(1, 1) - Jq(0, 1) * Jq(1, 0) == 1.0);
}

TEST_CASE("outward normal") {
    const BoundaryChart flat = charts::flat(2, 1.0);
    const Vec nf = outward_normal(flat, Vec(0.2, 0.0));
    CHECK(nf[0] == 0.0);
    CHECK(nf[1] == -1.0);

    const BoundaryChart tilt = charts::tilt(2, 1.0, 1.0);
    const Vec nt = outward_normal(tilt, Vec(0.1, 0.0));
    CHECK(nt[0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(nt[1] == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-15));

    oracles::Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = trial % 2 ? 2 : 3;
        const BoundaryChart c = charts::cosine(n, 1.0, rng.uniform(-0.5, 0.5), rng.uniform(0.5, 3.0));
        Vec yp = Vec::zero(n);
        for (int a = 0; a < n - 1; ++a) yp[a] = rng.uniform(-0.4, 0.4);
        CHECK(std::abs(outward_normal(c, yp).norm() - 1.0) < 1e-12);
    }
}

TEST_CASE("find_rho") {
    const double R = 1.0;
    const double cap = R / 2.0;
    const double q = std::pow(1.0 / 512.0, 1.0 / 64.0);

    // h == 0: every candidate admissible, returns one lattice step below R/2
    const double rho_flat = find_rho(charts::flat(2, R), 0.05);
    CHECK(rho_flat == doctest::Approx(cap * q).epsilon(1e-12));
    CHECK(rho_flat < cap);

    // quadratic chart: analytic rho* = delta/(4c), found within one step
    const double c = 0.8, delta = 0.2;
    const double rho_star = delta / (4.0 * c); // 0.0625 < cap
    const double rho = find_rho(charts::quadratic(2, R, c), delta);
    CHECK(rho <= rho_star * (1.0 + 1e-12));
    CHECK(rho > rho_star * q * (1.0 - 1e-12));

    // delta large: constraint inactive, saturates at the cap's first step
    const double rho_big = find_rho(charts::quadratic(2, R, c), 100.0);
    CHECK(rho_big == doctest::Approx(cap * q).epsilon(1e-12));

    // re-check the delta bound by dense sampling at 10x lattice resolution
    const BoundaryChart chart3 = charts::cosine(3, R, 0.3, 2.0);
    const double rho3 = find_rho(chart3, 0.15);
    double sup = 0.0;
    for (int d = 0; d < 2560; ++d) {
        const double th = 2.0 * M_PI * d / 2560.0;
        for (int r = 0; r <= 320; ++r) {
            Vec yp = Vec::zero(3);
            yp[0] = std::cos(th) * 2.0 * rho3 * r / 320.0;
            yp[1] = std::sin(th) * 2.0 * rho3 * r / 320.0;
            sup = std::max(sup, chart3.gradient(yp).norm());
        }
    }
    CHECK(sup <= 0.15 * (1.0 + 1e-9));

    CHECK_THROWS_AS(find_rho(charts::tilt(2, R, 0.5), 0.1), ConfigError); // not normalized
    CHECK_THROWS_AS(find_rho(charts::quadratic(2, R, 1e9), 1e-9), DomainError);
}

TEST_CASE("cutoff plateau and support") {
    const Cutoff zeta = make_cutoff(0.5);
    CHECK(zeta.value(Vec(0.0, 0.0)) == 1.0);
    CHECK(zeta.value(Vec(0.3, 0.2)) == 1.0);       // |y| < rho
    CHECK(zeta.value(Vec(0.49, 0.0)) == 1.0);
    CHECK(zeta.value(Vec(1.0, 0.0)) == 0.0);       // |y| = 2 rho
    CHECK(zeta.value(Vec(1.5, 0.2)) == 0.0);
    const double mid = zeta.value(Vec(0.7, 0.0));
    CHECK(mid > 0.0);
    CHECK(mid < 1.0);

    // gradient supported in the open annulus rho < |y| < 2 rho
    CHECK(zeta.gradient(Vec(0.2, 0.1)).norm() == 0.0);
    CHECK(zeta.gradient(Vec(1.2, 0.0)).norm() == 0.0);
    CHECK(zeta.gradient(Vec(0.7, 0.0)).norm() > 0.0);

    // monotone: 0 <= zeta <= 1 everywhere on a sweep
    for (int i = 0; i <= 200; ++i) {
        const double r = 1.5 * i / 200.0;
        const double v = zeta.profile(r);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("cutoff analytic derivatives match finite differences") {
    const Cutoff zeta = make_cutoff(0.4);
    for (double r : {0.45, 0.55, 0.6, 0.7, 0.75}) {
        const double fd1 = oracles::fd_derivative([&](double t) { return zeta.profile(t); }, r);
        CHECK(zeta.profile_d1(r) == doctest::Approx(fd1).epsilon(1e-6));
        const double fd2 = oracles::fd_derivative([&](double t) { return zeta.profile_d1(t); }, r);
        CHECK(zeta.profile_d2(r) == doctest::Approx(fd2).epsilon(1e-6));
    }

    // n-dim gradient and laplacian against finite differences, 2D and 3D
    for (int n : {2, 3}) {
        Vec y = Vec::zero(n);
        y[0] = 0.52;
        y[1] = 0.31;
        if (n == 3) y[2] = -0.2;
        const Vec g = zeta.gradient(y);
        double lap_fd = 0.0;
        for (int a = 0; a < n; ++a) {
            const double h = 1e-5;
            Vec yp = y, ym = y;
            yp[a] += h;
            ym[a] -= h;
            CHECK(g[a] == doctest::Approx((zeta.value(yp) - zeta.value(ym)) / (2 * h)).epsilon(1e-5));
            lap_fd += (zeta.value(yp) - 2.0 * zeta.value(y) + zeta.value(ym)) / (h * h);
        }
        CHECK(zeta.laplacian(y) == doctest::Approx(lap_fd).epsilon(1e-4));
    }
}

TEST_CASE("slab cutoff covers the cylinder U_rho") {
    const SlabCutoff zeta(0.5);
    // corners of U_rho that a radial cutoff would miss
    CHECK(zeta.value(Vec(0.49, 0.49)) == 1.0);
    CHECK(zeta.value(Vec(0.49, -0.49)) == 1.0);
    CHECK(zeta.value(Vec(1.01, 0.0)) == 0.0);
    CHECK(zeta.value(Vec(0.0, 1.01)) == 0.0);
    CHECK(zeta.value(Vec(0.7, 0.7)) > 0.0);

    // derivative closures against finite differences off the axes
    const Vec y(0.62, -0.55);
    const double h = 1e-5;
    const Vec g = zeta.gradient(y);
    double lap_fd = 0.0;
    for (int a = 0; a < 2; ++a) {
        Vec yp = y, ym = y;
        yp[a] += h;
        ym[a] -= h;
        CHECK(g[a] == doctest::Approx((zeta.value(yp) - zeta.value(ym)) / (2 * h)).epsilon(1e-5));
        lap_fd += (zeta.value(yp) - 2.0 * zeta.value(y) + zeta.value(ym)) / (h * h);
    }
    CHECK(zeta.laplacian(y) == doctest::Approx(lap_fd).epsilon(1e-4));

    const SlabCutoff z3(0.4);
    const Vec y3(0.45, 0.3, -0.42);
    const Vec g3 = z3.gradient(y3);
    double lap3 = 0.0;
    for (int a = 0; a < 3; ++a) {
        Vec yp = y3, ym = y3;
        yp[a] += h;
        ym[a] -= h;
        CHECK(g3[a] == doctest::Approx((z3.value(yp) - z3.value(ym)) / (2 * h)).epsilon(1e-5));
        lap3 += (z3.value(yp) - 2.0 * z3.value(y3) + z3.value(ym)) / (h * h);
    }
    CHECK(z3.laplacian(y3) == doctest::Approx(lap3).epsilon(1e-4));
}
