#pragma once

#include <functional>
#include <memory>
#include <string>

#include "presslab/grid.hpp"

namespace presslab::geometry {

// ---------------------------------------------------------------------------
// Star-shaped domains
// ---------------------------------------------------------------------------

enum class Shape { Ball, Cube, Ellipsoid, ScaledTranslated };

/// Analytic description of a bounded star-shaped domain. The circumscribed
/// radius R_a and the largest star-center ball radius R_i come from closed
/// forms (all supported shapes are convex, so R_i is the inradius), which
/// makes the scale/translation invariance of R_a/R_i exact.
class StarDomain {
public:
    /// Ball of radius `r` centered at `center`.
    static StarDomain ball(int dim, double r, Vec center = {});
    /// Axis-aligned cube with half-edge `a` centered at `center`.
    static StarDomain cube(int dim, double a, Vec center = {});
    /// Axis-aligned ellipsoid with the given semi-axes.
    static StarDomain ellipsoid(int dim, std::array<double, 3> semi_axes, Vec center = {});
    /// The set lambda*G + shift for an existing domain G.
    static StarDomain scaled_translated(const StarDomain& base, double lambda, Vec shift);

    Shape shape() const { return shape_; }
    int dim() const { return n_; }
    /// Center of the largest star-center ball.
    Vec center() const;
    double circumscribed_radius() const; // R_a
    double inscribed_radius() const;     // R_i
    bool contains(const Vec& p) const;
    std::string describe() const;
    /// Base domain of a scaled-translated wrapper; nullptr otherwise.
    const StarDomain* wrapped_base() const { return base_.get(); }

private:
    StarDomain() = default;
    Shape shape_ = Shape::Ball;
    int n_ = 2;
    Vec center_;
    double scale_ = 1.0;                 // radius / half-edge
    std::array<double, 3> semi_axes_{1.0, 1.0, 1.0};
    std::shared_ptr<const StarDomain> base_; // ScaledTranslated only
    double lambda_ = 1.0;
    Vec shift_;
};

/// ratio(G) = R_a(G) / R_i(G); >= 1, exactly invariant under the
/// scaled-translated wrapper (computed from the base's closed forms).
double ratio(const StarDomain& dom);

// ---------------------------------------------------------------------------
// Boundary charts and the flattening map
// ---------------------------------------------------------------------------

/// Graph description of a boundary patch: the boundary is {(y', h(y'))} for
/// y' in the (n-1)-ball of radius R, with analytic closures for h and its
/// first two derivative tensors. `order` records the C^{2+k} smoothness the
/// chart is good for. Charts are immutable after construction.
class BoundaryChart {
public:
    using ValueFn = std::function<double(const Vec&)>;   // y' has n-1 live comps
    using GradFn = std::function<Vec(const Vec&)>;       // tangential gradient
    using HessFn = std::function<Mat(const Vec&)>;       // (n-1)x(n-1) block

    BoundaryChart(int dim, double patch_radius, int order, ValueFn h, GradFn grad, HessFn hess,
                  std::string name = "chart");

    int dim() const { return n_; }
    double patch_radius() const { return R_; }
    int order() const { return order_; }
    const std::string& name() const { return name_; }
    /// True when h(0) = 0 and grad h(0) = 0 (boundary tangent to the wall at
    /// the chart origin).
    bool normalized() const { return normalized_; }

    double height(const Vec& yp) const { return h_(yp); }
    /// Tangential gradient of h, returned as an n-vector with zero last entry
    /// (h does not depend on the normal coordinate).
    Vec gradient(const Vec& yp) const;
    Mat hessian(const Vec& yp) const { return hess_(yp); }
    double laplacian(const Vec& yp) const;

    /// True if y (n components, flattened coordinates) lies in
    /// U_R = B'_R x (-R, R).
    bool in_patch(const Vec& y) const;

private:
    int n_;
    double R_;
    int order_;
    ValueFn h_;
    GradFn grad_;
    HessFn hess_;
    std::string name_;
    bool normalized_;
};

namespace charts {
/// h == 0: the patch is already flat.
BoundaryChart flat(int dim, double R);
/// h(y') = c*|y'|^2 (normalized; curvature c).
BoundaryChart quadratic(int dim, double R, double c);
/// h(y') = a*(y'_1 + ... + y'_{n-1}): a tilted plane, not normalized.
BoundaryChart tilt(int dim, double R, double a);
/// h(y') = a*(cos(w*y'_1)*...*cos(w*y'_{n-1}) - 1): normalized, smooth.
BoundaryChart cosine(int dim, double R, double a, double w);
} // namespace charts

/// Phi(y) = (y', h(y') + y_n). Throws DomainError if y is outside U_R.
Vec flatten(const BoundaryChart& chart, const Vec& y);

/// D Phi: unit lower-triangular, last row (d1 h, ..., d_{n-1} h, 1).
Mat jacobian(const BoundaryChart& chart, const Vec& y);
/// Explicit inverse: same structure with negated h-derivatives.
Mat inverse_jacobian(const BoundaryChart& chart, const Vec& y);

/// Outward unit normal (d1 h, ..., d_{n-1} h, -1)/sqrt(1+|grad h|^2) at the
/// boundary point over y'.
Vec outward_normal(const BoundaryChart& chart, const Vec& yp);

/// Largest rho < R/2 on a geometric lattice of 64 candidates such that
/// sup |grad h| <= delta over U_{2 rho}, checked by dense direction/radius
/// sampling. Requires a normalized chart. Throws if no candidate works.
double find_rho(const BoundaryChart& chart, double delta);

// ---------------------------------------------------------------------------
// Smooth cutoffs
// ---------------------------------------------------------------------------

/// C^infty plateau function built from the e^{-1/t} ramp: identically 1 for
/// r <= rho, identically 0 for r >= 2*rho, smooth and monotone between.
/// Exposes the 1D profile plus radial n-dimensional closures.
class Cutoff {
public:
    explicit Cutoff(double rho);

    double rho() const { return rho_; }

    /// 1D profile in the radial variable r >= 0.
    double profile(double r) const;
    double profile_d1(double r) const;
    double profile_d2(double r) const;

    /// zeta(y) = profile(|y|).
    double value(const Vec& y) const { return profile(y.norm()); }
    Vec gradient(const Vec& y) const;
    double laplacian(const Vec& y) const;

private:
    double rho_;
};

/// make_cutoff(rho): the radial plateau of the paper's zeta.
Cutoff make_cutoff(double rho);

/// Cylindrical plateau zeta(y) = profile(|y'|) * profile(|y_n|): identically
/// 1 on U_rho = B'_rho x (-rho, rho) and supported in U_{2 rho}. This is the
/// cutoff shape the flattened half-space construction needs.
class SlabCutoff {
public:
    explicit SlabCutoff(double rho) : radial_(rho) {}

    double rho() const { return radial_.rho(); }
    double value(const Vec& y) const;
    Vec gradient(const Vec& y) const;
    double laplacian(const Vec& y) const;

private:
    Cutoff radial_;
};

} // namespace presslab::geometry
