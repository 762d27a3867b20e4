#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "presslab/errors.hpp"

namespace presslab {

/// Small dimension-generic point/vector, n in {2,3}. Unused trailing
/// components stay zero so 2D and 3D share one code path.
struct Vec {
    int n = 2;
    std::array<double, 3> c{0.0, 0.0, 0.0};

    Vec() = default;
    Vec(double x, double y) : n(2), c{x, y, 0.0} {}
    Vec(double x, double y, double z) : n(3), c{x, y, z} {}
    static Vec zero(int dim) {
        Vec v;
        v.n = dim;
        return v;
    }

    double& operator[](int i) { return c[static_cast<size_t>(i)]; }
    double operator[](int i) const { return c[static_cast<size_t>(i)]; }

    Vec operator+(const Vec& o) const {
        Vec r = *this;
        for (int i = 0; i < n; ++i) r.c[i] += o.c[i];
        return r;
    }
    Vec operator-(const Vec& o) const {
        Vec r = *this;
        for (int i = 0; i < n; ++i) r.c[i] -= o.c[i];
        return r;
    }
    Vec operator*(double s) const {
        Vec r = *this;
        for (int i = 0; i < n; ++i) r.c[i] *= s;
        return r;
    }
    Vec operator/(double s) const { return *this * (1.0 / s); }

    double dot(const Vec& o) const {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += c[i] * o.c[i];
        return s;
    }
    double norm2() const { return dot(*this); }
    double norm() const { return std::sqrt(norm2()); }
};

inline Vec operator*(double s, const Vec& v) { return v * s; }

/// Row-major n-by-n matrix for chart Jacobians and Hessians.
struct Mat {
    int n = 2;
    std::array<double, 9> a{};

    static Mat identity(int dim) {
        Mat m;
        m.n = dim;
        for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }
    double& operator()(int i, int j) { return a[static_cast<size_t>(i * n + j)]; }
    double operator()(int i, int j) const { return a[static_cast<size_t>(i * n + j)]; }

    Mat operator*(const Mat& o) const {
        Mat r;
        r.n = n;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                for (int k = 0; k < n; ++k) s += (*this)(i, k) * o(k, j);
                r(i, j) = s;
            }
        return r;
    }
    Vec operator*(const Vec& v) const {
        Vec r = Vec::zero(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) r[i] += (*this)(i, j) * v[j];
        return r;
    }
};

using Index3 = std::array<int, 3>;

/// Uniform-grid sampled field with an arbitrary number of components.
///
/// Sample positions are origin + i*h per axis (the origin already carries any
/// half-cell shift, so the same type holds cell-centered and node-centered
/// data). Storage is component-major, x fastest. An optional mask marks the
/// cells that belong to the domain; an empty mask means "everything".
class GridField {
public:
    GridField() = default;
    GridField(int dim, int comps, Index3 dims, Vec origin, double spacing);

    int dim() const { return n_; }
    int comps() const { return comps_; }
    const Index3& dims() const { return dims_; }
    double spacing() const { return h_; }
    const Vec& origin() const { return origin_; }

    /// Number of sample points per component.
    size_t points() const { return npts_; }
    /// Cell volume h^n used as the quadrature weight.
    double cell_volume() const;

    size_t flat(int i, int j, int k = 0) const {
        return (static_cast<size_t>(k) * dims_[1] + j) * dims_[0] + i;
    }
    double& at(int comp, int i, int j, int k = 0) { return data_[comp * npts_ + flat(i, j, k)]; }
    double at(int comp, int i, int j, int k = 0) const { return data_[comp * npts_ + flat(i, j, k)]; }
    double& at_flat(int comp, size_t idx) { return data_[comp * npts_ + idx]; }
    double at_flat(int comp, size_t idx) const { return data_[comp * npts_ + idx]; }

    Vec position(int i, int j, int k = 0) const {
        Vec p = origin_;
        p[0] += i * h_;
        p[1] += j * h_;
        if (n_ == 3) p[2] += k * h_;
        return p;
    }
    Index3 unflat(size_t idx) const {
        Index3 r{0, 0, 0};
        r[0] = static_cast<int>(idx % dims_[0]);
        r[1] = static_cast<int>((idx / dims_[0]) % dims_[1]);
        r[2] = static_cast<int>(idx / (static_cast<size_t>(dims_[0]) * dims_[1]));
        return r;
    }

    bool has_mask() const { return !mask_.empty(); }
    void set_mask(std::vector<uint8_t> mask);
    const std::vector<uint8_t>& mask() const { return mask_; }
    bool in_mask(size_t idx) const { return mask_.empty() ? true : mask_[idx] != 0; }
    bool in_mask(int i, int j, int k = 0) const { return in_mask(flat(i, j, k)); }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    /// Fill one component from a callable of the sample position.
    template <class F>
    void fill(int comp, F&& f) {
        for (int k = 0; k < dims_[2]; ++k)
            for (int j = 0; j < dims_[1]; ++j)
                for (int i = 0; i < dims_[0]; ++i) at(comp, i, j, k) = f(position(i, j, k));
    }

    GridField& operator+=(const GridField& o);
    GridField& operator-=(const GridField& o);
    GridField& operator*=(double s);

    /// Largest |value| over all components (mask ignored).
    double max_abs() const;
    bool all_finite() const;

private:
    int n_ = 2;
    int comps_ = 1;
    Index3 dims_{0, 0, 1};
    Vec origin_;
    double h_ = 0.0;
    size_t npts_ = 0;
    std::vector<double> data_;
    std::vector<uint8_t> mask_;
};

/// Time-indexed sequence of grid fields on the uniform time grid
/// t_m = m*dt, m = 0..steps; slice 0 is t = 0.
struct SpaceTimeField {
    std::vector<GridField> slices;
    double dt = 0.0;

    int steps() const { return static_cast<int>(slices.size()) - 1; }
    double final_time() const { return dt * steps(); }
};

// ---------------------------------------------------------------------------
// Stencil and mask utilities shared by the numerical modules.
// ---------------------------------------------------------------------------

/// Centered first derivative along `axis` of one component. Cells without a
/// full stencil (grid edge or mask edge) are set to zero; callers restrict
/// norms to the eroded interior.
GridField diff_central(const GridField& f, int comp, int axis);

/// All n^order repeated centered derivatives of every component, ordered by
/// axis sequence (axis of the outermost derivative slowest). The result is a
/// single field with comps * n^order components on the same grid.
GridField tensor_derivatives(const GridField& f, int order);

/// Mask of cells at Chebyshev distance >= m from the grid boundary and from
/// every non-mask cell. Used to shrink derivative norms to valid cells.
std::vector<uint8_t> eroded_mask(const GridField& f, int margin);

/// Multilinear interpolation of component `comp` at point p.
/// Throws DomainError if p lies outside the sample hull.
double interpolate(const GridField& f, int comp, const Vec& p);

/// L^q norm of all components over the masked cells:
/// (sum_c sum_cells |f_c|^q * h^n)^(1/q). `keep` may further restrict cells
/// (empty = use the field's own mask only).
double lq_norm(const GridField& f, double q, const std::vector<uint8_t>& keep = {});

/// L^2 distance between matching components of two fields on the same grid.
double l2_diff(const GridField& a, const GridField& b, const std::vector<uint8_t>& keep = {});

} // namespace presslab
