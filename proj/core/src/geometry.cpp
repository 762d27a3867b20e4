#include "presslab/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace presslab::geometry {

namespace {

// C^infty ramp machinery: psi(t) = e^{-1/t} for t > 0, glued into the
// monotone step s(t) = psi(t) / (psi(t) + psi(1-t)) with s(0)=0, s(1)=1.
double psi(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }
double psi_d1(double t) { return t > 0.0 ? std::exp(-1.0 / t) / (t * t) : 0.0; }
double psi_d2(double t) { return t > 0.0 ? std::exp(-1.0 / t) * (1.0 - 2.0 * t) / (t * t * t * t) : 0.0; }

double step_s(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double A = psi(t), B = psi(1.0 - t);
    return A / (A + B);
}
double step_s_d1(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    const double A = psi(t), B = psi(1.0 - t);
    const double a = psi_d1(t), b = psi_d1(1.0 - t);
    const double D = A + B;
    return (a * B + A * b) / (D * D);
}
double step_s_d2(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    const double A = psi(t), B = psi(1.0 - t);
    const double a = psi_d1(t), b = psi_d1(1.0 - t);
    const double D = A + B;
    const double N = a * B + A * b;
    const double Np = psi_d2(t) * B - A * psi_d2(1.0 - t);
    return (Np * D - 2.0 * N * (a - b)) / (D * D * D);
}

} // namespace

// ---------------------------------------------------------------------------
// StarDomain
// ---------------------------------------------------------------------------

StarDomain StarDomain::ball(int dim, double r, Vec center) {
    if (!(r > 0.0)) throw ConfigError("StarDomain::ball: radius must be positive");
    StarDomain d;
    d.shape_ = Shape::Ball;
    d.n_ = dim;
    d.scale_ = r;
    d.center_ = center;
    d.center_.n = dim;
    return d;
}

StarDomain StarDomain::cube(int dim, double a, Vec center) {
    if (!(a > 0.0)) throw ConfigError("StarDomain::cube: half-edge must be positive");
    StarDomain d;
    d.shape_ = Shape::Cube;
    d.n_ = dim;
    d.scale_ = a;
    d.center_ = center;
    d.center_.n = dim;
    return d;
}

StarDomain StarDomain::ellipsoid(int dim, std::array<double, 3> semi_axes, Vec center) {
    for (int i = 0; i < dim; ++i)
        if (!(semi_axes[i] > 0.0)) throw ConfigError("StarDomain::ellipsoid: semi-axes must be positive");
    StarDomain d;
    d.shape_ = Shape::Ellipsoid;
    d.n_ = dim;
    d.semi_axes_ = semi_axes;
    d.center_ = center;
    d.center_.n = dim;
    return d;
}

StarDomain StarDomain::scaled_translated(const StarDomain& base, double lambda, Vec shift) {
    if (!(lambda > 0.0)) throw ConfigError("StarDomain: scaling factor must be positive");
    StarDomain d;
    d.shape_ = Shape::ScaledTranslated;
    d.n_ = base.n_;
    d.base_ = std::make_shared<StarDomain>(base);
    d.lambda_ = lambda;
    d.shift_ = shift;
    d.shift_.n = base.n_;
    return d;
}

Vec StarDomain::center() const {
    if (shape_ == Shape::ScaledTranslated) return base_->center() * lambda_ + shift_;
    return center_;
}

double StarDomain::circumscribed_radius() const {
    switch (shape_) {
        case Shape::Ball: return scale_;
        case Shape::Cube: return scale_ * std::sqrt(static_cast<double>(n_));
        case Shape::Ellipsoid: {
            double m = 0.0;
            for (int i = 0; i < n_; ++i) m = std::max(m, semi_axes_[i]);
            return m;
        }
        case Shape::ScaledTranslated: return lambda_ * base_->circumscribed_radius();
    }
    throw Error("StarDomain: unsupported shape");
}

double StarDomain::inscribed_radius() const {
    switch (shape_) {
        case Shape::Ball: return scale_;
        case Shape::Cube: return scale_;
        case Shape::Ellipsoid: {
            double m = semi_axes_[0];
            for (int i = 1; i < n_; ++i) m = std::min(m, semi_axes_[i]);
            return m;
        }
        case Shape::ScaledTranslated: return lambda_ * base_->inscribed_radius();
    }
    throw Error("StarDomain: unsupported shape");
}

bool StarDomain::contains(const Vec& p) const {
    switch (shape_) {
        case Shape::Ball: return (p - center_).norm2() < scale_ * scale_;
        case Shape::Cube: {
            for (int i = 0; i < n_; ++i)
                if (std::abs(p[i] - center_[i]) >= scale_) return false;
            return true;
        }
        case Shape::Ellipsoid: {
            double s = 0.0;
            for (int i = 0; i < n_; ++i) {
                const double t = (p[i] - center_[i]) / semi_axes_[i];
                s += t * t;
            }
            return s < 1.0;
        }
        case Shape::ScaledTranslated: return base_->contains((p - shift_) / lambda_);
    }
    throw Error("StarDomain: unsupported shape");
}

std::string StarDomain::describe() const {
    switch (shape_) {
        case Shape::Ball: return "ball";
        case Shape::Cube: return "cube";
        case Shape::Ellipsoid: return "ellipsoid";
        case Shape::ScaledTranslated: return "scaled(" + base_->describe() + ")";
    }
    return "unknown";
}

double ratio(const StarDomain& dom) {
    // Wrappers recurse to the base closed forms so the scale/translation
    // invariance is exact, not a quotient of two scaled floats.
    if (dom.shape() == Shape::ScaledTranslated) return ratio(*dom.wrapped_base());
    return dom.circumscribed_radius() / dom.inscribed_radius();
}

// ---------------------------------------------------------------------------
// BoundaryChart
// ---------------------------------------------------------------------------

BoundaryChart::BoundaryChart(int dim, double patch_radius, int order, ValueFn h, GradFn grad,
                             HessFn hess, std::string name)
    : n_(dim), R_(patch_radius), order_(order), h_(std::move(h)), grad_(std::move(grad)),
      hess_(std::move(hess)), name_(std::move(name)) {
    if (dim != 2 && dim != 3) throw ConfigError("BoundaryChart: dimension must be 2 or 3");
    if (!(patch_radius > 0.0)) throw ConfigError("BoundaryChart: patch radius must be positive");
    const Vec origin = Vec::zero(dim);
    normalized_ = std::abs(h_(origin)) <= 1e-14 && grad_(origin).norm() <= 1e-14;
}

Vec BoundaryChart::gradient(const Vec& yp) const {
    Vec g = grad_(yp);
    Vec out = Vec::zero(n_);
    for (int i = 0; i < n_ - 1; ++i) out[i] = g[i];
    out[n_ - 1] = 0.0; // h is independent of the normal coordinate
    return out;
}

double BoundaryChart::laplacian(const Vec& yp) const {
    const Mat H = hess_(yp);
    double tr = 0.0;
    for (int i = 0; i < n_ - 1; ++i) tr += H(i, i);
    return tr;
}

bool BoundaryChart::in_patch(const Vec& y) const {
    double tang2 = 0.0;
    for (int i = 0; i < n_ - 1; ++i) tang2 += y[i] * y[i];
    return tang2 < R_ * R_ && std::abs(y[n_ - 1]) < R_;
}

namespace charts {

BoundaryChart flat(int dim, double R) {
    return BoundaryChart(
        dim, R, 4, [](const Vec&) { return 0.0; },
        [dim](const Vec&) { return Vec::zero(dim); },
        [dim](const Vec&) { Mat m; m.n = dim; return m; }, "flat");
}

BoundaryChart quadratic(int dim, double R, double c) {
    return BoundaryChart(
        dim, R, 4,
        [dim, c](const Vec& yp) {
            double r2 = 0.0;
            for (int i = 0; i < dim - 1; ++i) r2 += yp[i] * yp[i];
            return c * r2;
        },
        [dim, c](const Vec& yp) {
            Vec g = Vec::zero(dim);
            for (int i = 0; i < dim - 1; ++i) g[i] = 2.0 * c * yp[i];
            return g;
        },
        [dim, c](const Vec&) {
            Mat m;
            m.n = dim;
            for (int i = 0; i < dim - 1; ++i) m(i, i) = 2.0 * c;
            return m;
        },
        "quadratic");
}

BoundaryChart tilt(int dim, double R, double a) {
    return BoundaryChart(
        dim, R, 4,
        [dim, a](const Vec& yp) {
            double s = 0.0;
            for (int i = 0; i < dim - 1; ++i) s += yp[i];
            return a * s;
        },
        [dim, a](const Vec&) {
            Vec g = Vec::zero(dim);
            for (int i = 0; i < dim - 1; ++i) g[i] = a;
            return g;
        },
        [dim](const Vec&) { Mat m; m.n = dim; return m; }, "tilt");
}

BoundaryChart cosine(int dim, double R, double a, double w) {
    auto prod_cos = [dim, w](const Vec& yp) {
        double p = 1.0;
        for (int i = 0; i < dim - 1; ++i) p *= std::cos(w * yp[i]);
        return p;
    };
    return BoundaryChart(
        dim, R, 4, [a, prod_cos](const Vec& yp) { return a * (prod_cos(yp) - 1.0); },
        [dim, a, w](const Vec& yp) {
            Vec g = Vec::zero(dim);
            for (int i = 0; i < dim - 1; ++i) {
                double p = -a * w * std::sin(w * yp[i]);
                for (int j = 0; j < dim - 1; ++j)
                    if (j != i) p *= std::cos(w * yp[j]);
                g[i] = p;
            }
            return g;
        },
        [dim, a, w](const Vec& yp) {
            Mat m;
            m.n = dim;
            for (int i = 0; i < dim - 1; ++i)
                for (int j = 0; j < dim - 1; ++j) {
                    double p = a;
                    for (int l = 0; l < dim - 1; ++l) {
                        if (l == i && l == j)
                            p *= -w * w * std::cos(w * yp[l]);
                        else if (l == i || l == j)
                            p *= -w * std::sin(w * yp[l]);
                        else
                            p *= std::cos(w * yp[l]);
                    }
                    m(i, j) = p;
                }
            return m;
        },
        "cosine");
}

} // namespace charts

Vec flatten(const BoundaryChart& chart, const Vec& y) {
    if (!chart.in_patch(y)) throw DomainError("flatten: point outside U_R");
    Vec x = y;
    x[chart.dim() - 1] = chart.height(y) + y[chart.dim() - 1];
    return x;
}

Mat jacobian(const BoundaryChart& chart, const Vec& y) {
    if (!chart.in_patch(y)) throw DomainError("jacobian: point outside U_R");
    const int n = chart.dim();
    Mat m = Mat::identity(n);
    const Vec g = chart.gradient(y);
    for (int i = 0; i < n - 1; ++i) m(n - 1, i) = g[i];
    return m;
}

Mat inverse_jacobian(const BoundaryChart& chart, const Vec& y) {
    if (!chart.in_patch(y)) throw DomainError("inverse_jacobian: point outside U_R");
    const int n = chart.dim();
    Mat m = Mat::identity(n);
    const Vec g = chart.gradient(y);
    for (int i = 0; i < n - 1; ++i) m(n - 1, i) = -g[i];
    return m;
}

Vec outward_normal(const BoundaryChart& chart, const Vec& yp) {
    const int n = chart.dim();
    const Vec g = chart.gradient(yp);
    Vec v = Vec::zero(n);
    for (int i = 0; i < n - 1; ++i) v[i] = g[i];
    v[n - 1] = -1.0;
    return v / std::sqrt(1.0 + g.norm2());
}

double find_rho(const BoundaryChart& chart, double delta) {
    if (!(delta > 0.0)) throw ConfigError("find_rho: delta must be positive");
    if (!chart.normalized()) throw ConfigError("find_rho: chart must be normalized (grad h(0) = 0)");

    const int n = chart.dim();
    const double cap = chart.patch_radius() / 2.0;
    // Geometric lattice of 64 candidates below the cap, spanning ~3 decades.
    const int lattice = 64;
    const double q = std::pow(1.0 / 512.0, 1.0 / lattice);

    const int n_dirs = (n == 2) ? 2 : 256;
    const int n_radii = (n == 2) ? 256 : 32;

    auto sup_grad = [&](double two_rho) {
        double sup = 0.0;
        for (int d = 0; d < n_dirs; ++d) {
            Vec dir = Vec::zero(n);
            if (n == 2) {
                dir[0] = (d == 0) ? 1.0 : -1.0;
            } else {
                const double th = 2.0 * M_PI * d / n_dirs;
                dir[0] = std::cos(th);
                dir[1] = std::sin(th);
            }
            for (int r = 0; r <= n_radii; ++r) {
                const Vec yp = dir * (two_rho * r / n_radii);
                sup = std::max(sup, chart.gradient(yp).norm());
            }
        }
        return sup;
    };

    for (int m = 1; m <= lattice; ++m) {
        const double rho = cap * std::pow(q, m);
        if (sup_grad(2.0 * rho) <= delta) return rho;
    }
    throw DomainError("find_rho: no admissible rho on the candidate lattice");
}

// ---------------------------------------------------------------------------
// Cutoff
// ---------------------------------------------------------------------------

Cutoff::Cutoff(double rho) : rho_(rho) {
    if (!(rho > 0.0)) throw ConfigError("Cutoff: rho must be positive");
}

double Cutoff::profile(double r) const { return step_s((2.0 * rho_ - r) / rho_); }

double Cutoff::profile_d1(double r) const { return -step_s_d1((2.0 * rho_ - r) / rho_) / rho_; }

double Cutoff::profile_d2(double r) const { return step_s_d2((2.0 * rho_ - r) / rho_) / (rho_ * rho_); }

Vec Cutoff::gradient(const Vec& y) const {
    const double r = y.norm();
    if (r <= rho_ || r >= 2.0 * rho_) return Vec::zero(y.n);
    return y * (profile_d1(r) / r);
}

double Cutoff::laplacian(const Vec& y) const {
    const double r = y.norm();
    if (r <= rho_ || r >= 2.0 * rho_) return 0.0;
    return profile_d2(r) + profile_d1(r) * (y.n - 1) / r;
}

Cutoff make_cutoff(double rho) { return Cutoff(rho); }

double SlabCutoff::value(const Vec& y) const {
    double tang = 0.0;
    for (int i = 0; i < y.n - 1; ++i) tang += y[i] * y[i];
    return radial_.profile(std::sqrt(tang)) * radial_.profile(std::abs(y[y.n - 1]));
}

Vec SlabCutoff::gradient(const Vec& y) const {
    const int n = y.n;
    double tang2 = 0.0;
    for (int i = 0; i < n - 1; ++i) tang2 += y[i] * y[i];
    const double rt = std::sqrt(tang2);
    const double rn = std::abs(y[n - 1]);
    const double Pt = radial_.profile(rt), Pn = radial_.profile(rn);
    Vec g = Vec::zero(n);
    if (rt > 0.0) {
        const double d = radial_.profile_d1(rt) * Pn / rt;
        for (int i = 0; i < n - 1; ++i) g[i] = d * y[i];
    }
    const double sign_n = y[n - 1] >= 0.0 ? 1.0 : -1.0;
    g[n - 1] = Pt * radial_.profile_d1(rn) * sign_n;
    return g;
}

double SlabCutoff::laplacian(const Vec& y) const {
    const int n = y.n;
    double tang2 = 0.0;
    for (int i = 0; i < n - 1; ++i) tang2 += y[i] * y[i];
    const double rt = std::sqrt(tang2);
    const double rn = std::abs(y[n - 1]);
    const double Pt = radial_.profile(rt), Pn = radial_.profile(rn);
    double lap_t = radial_.profile_d2(rt);
    if (n - 1 > 1 && rt > 0.0) lap_t += radial_.profile_d1(rt) * (n - 2) / rt;
    return lap_t * Pn + Pt * radial_.profile_d2(rn);
}

} // namespace presslab::geometry
