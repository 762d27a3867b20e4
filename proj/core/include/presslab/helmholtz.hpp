#pragma once

#include "presslab/grid.hpp"

namespace presslab::helmholtz {

/// Periodic box approximating R^n: cell-centered samples of a scalar or
/// vector field on [corner, corner+L)^n with N cells per axis.
struct PeriodicField {
    GridField field;
    double box_length = 0.0;

    int resolution() const { return field.dims()[0]; }
    void validate() const;
};

/// Geometry of the periodic box an extension lands in.
struct BoxSpec {
    int resolution = 0;
    double length = 0.0;
    Vec corner;

    /// Box with edge `factor` times the extent of v's grid, aligned with v's
    /// lattice and roughly centered on it.
    static BoxSpec around(const GridField& v, double factor = 4.0);
};

/// Extension operator E: embed v into the box by lattice alignment, clamp the
/// values outward, and taper them to zero over a collar of the given width
/// outside v's bounding box. Ev = v on the mask exactly. Throws DomainError
/// when the bounding box plus collar does not fit strictly inside the box.
PeriodicField extend(const GridField& v, const BoxSpec& box, double collar_width);

/// Helmholtz-Leray projection, Fourier side: vhat -> (I - xi xi^T/|xi|^2) vhat,
/// zero mode untouched. Output is divergence-free in the spectral sense.
PeriodicField leray_project(const PeriodicField& v);

/// (I - P) v = grad(Delta^{-1} div v): the curl-free complement. The exact
/// decomposition v = leray_project(v) + gradient_part(v) holds spectrally.
PeriodicField gradient_part(const PeriodicField& v);

/// -Delta^{-1} div v: the scalar potential whose negative gradient is the
/// curl-free part (zero mode set to zero).
PeriodicField neg_inv_laplace_divergence(const PeriodicField& v);

/// Spectral gradient of a scalar periodic field.
PeriodicField spectral_gradient(const PeriodicField& s);

/// max_xi |xi . vhat| / max_xi |xi| |vhat|: dimensionless witness that a
/// field is solenoidal on the Fourier side.
double spectral_divergence_max(const PeriodicField& v);

/// Same for the curl (scalar in 2D, 3 components in 3D).
double spectral_curl_max(const PeriodicField& v);

/// L2 inner product over the box.
double inner_product(const PeriodicField& a, const PeriodicField& b);

/// Sample a box field back onto the lattice of `pattern` (which must align
/// with the box lattice); copies pattern's mask.
GridField restrict_to(const PeriodicField& p, const GridField& pattern);

/// Step-1 reduction: per time slice, f_sol = P E f restricted to the domain
/// grid and pressure_shift = -Delta^{-1} div E f restricted likewise, so that
/// f = f_sol + grad(-pressure_shift) up to spectral/restriction tolerance.
struct ReducedProblem {
    SpaceTimeField f_sol;         // divergence-free forcing, vector slices
    SpaceTimeField pressure_shift; // scalar slices
};
ReducedProblem reduce_problem(const SpaceTimeField& f, const BoxSpec& box, double collar_width);

} // namespace presslab::helmholtz
