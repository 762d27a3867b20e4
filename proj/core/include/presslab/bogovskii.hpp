#pragma once

#include <functional>
#include <vector>

#include "presslab/geometry.hpp"
#include "presslab/grid.hpp"

namespace presslab::bogovskii {

/// Smooth C^infty bump supported in the ball of radius `support`:
/// phi(x) = C * exp(-1/(1 - |x/support|^2)). With the normalized flag the
/// constant C is chosen so the integral over the support ball is 1.
class BumpFunction {
public:
    BumpFunction(int dim, double support, bool normalized = true);

    int dim() const { return n_; }
    double support_radius() const { return support_; }
    bool normalized() const { return normalized_; }
    double normalization() const { return c_; }

    double value(const Vec& x) const;
    Vec gradient(const Vec& x) const;

    /// Callable for d_i phi, used to build the operator with kernel K_{d_i phi}.
    std::function<double(const Vec&)> component_derivative(int axis) const;

private:
    int n_;
    double support_;
    bool normalized_;
    double c_;
};

/// Quadrature knobs for the kernel integrals. The y-integral runs over f's
/// own grid, refined `supersample` ways per axis with multilinearly
/// interpolated f values. `epsilon` is the singular cutoff length on the grid
/// the kernel integrates on; 0 means one grid spacing. Integration nodes with
/// |y| < epsilon are split another `subdiv` ways per axis and the kernel is
/// averaged over the subcell centers.
struct BogovskiiConfig {
    int radial_order = 32;
    int supersample = 2;
    double epsilon = 0.0;
    int subdiv = 4;

    void validate() const;
};

/// Kernel K_phi(x,y) = y/|y|^n * int_0^inf phi(x + r*y/|y|) (|y|+r)^{n-1} dr.
/// The r-integral is truncated to the exact window where the bump's support
/// makes the integrand vanish. Throws DomainError when y = 0.
Vec eval_kernel(const BumpFunction& phi, const Vec& x, const Vec& y, const BogovskiiConfig& cfg);

/// B_phi f(x) = int f(x-y) K_phi(x,y) dy on f's own grid. f must vanish
/// (to 1e-12 of its peak) outside its mask and on the outermost mask layer.
GridField apply_bogovskii(const BumpFunction& phi, const GridField& f, const BogovskiiConfig& cfg);

/// Same, with an arbitrary kernel profile (used for the commutator terms).
GridField apply_bogovskii_fn(const std::function<double(const Vec&)>& phi, double support,
                             const GridField& f, const BogovskiiConfig& cfg);

/// The rescaled operator B(f)(x) = R * B_phi(f(R.))(x/R) with R = R_i(G)/2
/// and the star center translated to the origin. phi is the canonical
/// normalized bump on B_1.
GridField apply_scaled(const geometry::StarDomain& dom, const GridField& f,
                       const BogovskiiConfig& cfg);

/// Rescaled operator around an explicit star ball (center, r_inner); the
/// geometry-free entry point the boundary-flattening construction uses.
/// check_support = false skips the compact-support screen (inputs supported
/// up to the flat wall are legitimate there).
GridField apply_scaled_at(const Vec& center, double r_inner, const GridField& f,
                          const BogovskiiConfig& cfg, bool check_support = true);

/// Relative L2 residual of div B(f) = f - phi(x/R) R^{-n} int_G f against
/// centered differences of v = apply_scaled(dom, f). Requires at least 4
/// points per axis.
double divergence_residual(const GridField& v, const GridField& f, const BumpFunction& phi,
                           const geometry::StarDomain& dom, const BogovskiiConfig& cfg);

/// Relative L2 residual of the mixed-derivative identity
/// d_j B_phi(d_i f) = d_i B_phi(d_j f) + d_i B_{d_j phi}(f) - d_j B_{d_i phi}(f),
/// all four terms computed independently. Throws ConfigError when i = j.
double commutator_residual(const BumpFunction& phi, const GridField& f, int i, int j,
                           const BogovskiiConfig& cfg);

/// max over the family of ||grad^k B f||_q / ||grad^{k-1} f||_q, an empirical
/// lower witness for the operator-norm constant. Zero fields are skipped;
/// throws ConfigError if nothing remains.
double norm_bound_probe(const geometry::StarDomain& dom, const std::vector<GridField>& family,
                        int k, double q, const BogovskiiConfig& cfg);

} // namespace presslab::bogovskii
