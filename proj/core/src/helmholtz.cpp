#include "presslab/helmholtz.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>

#include "presslab/geometry.hpp"

namespace presslab::helmholtz {

namespace {

std::mutex fftw_planner_mutex; // FFTW plan creation is not thread-safe

using cplx = std::complex<double>;

struct Spectrum {
    int n = 2;
    int comps = 1;
    int N = 0;
    double L = 0.0;
    std::vector<cplx> data; // comp-major, same layout as PeriodicField

    size_t points() const {
        size_t p = static_cast<size_t>(N) * N;
        if (n == 3) p *= N;
        return p;
    }
    cplx& at(int comp, size_t idx) { return data[comp * points() + idx]; }
    cplx at(int comp, size_t idx) const { return data[comp * points() + idx]; }
};

void run_fft(cplx* buf, int n, int N, int sign) {
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex);
        auto* p = reinterpret_cast<fftw_complex*>(buf);
        plan = (n == 2) ? fftw_plan_dft_2d(N, N, p, p, sign, FFTW_ESTIMATE)
                        : fftw_plan_dft_3d(N, N, N, p, p, sign, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex);
        fftw_destroy_plan(plan);
    }
}

Spectrum forward(const PeriodicField& p) {
    const GridField& f = p.field;
    Spectrum s;
    s.n = f.dim();
    s.comps = f.comps();
    s.N = p.resolution();
    s.L = p.box_length;
    s.data.assign(static_cast<size_t>(s.comps) * f.points(), cplx(0.0, 0.0));
    std::vector<cplx> buf(f.points());
    for (int c = 0; c < s.comps; ++c) {
        for (size_t i = 0; i < f.points(); ++i) buf[i] = f.at_flat(c, i);
        run_fft(buf.data(), s.n, s.N, FFTW_FORWARD);
        for (size_t i = 0; i < f.points(); ++i) s.at(c, i) = buf[i];
    }
    return s;
}

PeriodicField inverse(const Spectrum& s, const GridField& pattern) {
    PeriodicField out;
    out.box_length = s.L;
    out.field = GridField(s.n, s.comps, pattern.dims(), pattern.origin(), pattern.spacing());
    const double scale = 1.0 / static_cast<double>(s.points());
    std::vector<cplx> buf(s.points());
    for (int c = 0; c < s.comps; ++c) {
        for (size_t i = 0; i < s.points(); ++i) buf[i] = s.at(c, i);
        run_fft(buf.data(), s.n, s.N, FFTW_BACKWARD);
        for (size_t i = 0; i < s.points(); ++i) out.field.at_flat(c, i) = buf[i].real() * scale;
    }
    return out;
}

// Integer frequency for mode k; the Nyquist mode maps to -N/2 (sign is
// irrelevant for even multipliers) or to 0 for odd multipliers so real
// fields stay real.
int freq_even(int k, int N) { return k <= N / 2 ? k : k - N; }
int freq_odd(int k, int N) {
    if (N % 2 == 0 && k == N / 2) return 0;
    return k <= N / 2 ? k : k - N;
}

template <class F>
void for_each_mode(const Spectrum& s, F&& body) {
    const int N = s.N;
    const int kmax = (s.n == 3) ? N : 1;
    size_t idx = 0;
    for (int k = 0; k < kmax; ++k)
        for (int j = 0; j < N; ++j)
            for (int i = 0; i < N; ++i, ++idx) body(idx, i, j, k);
}

Vec xi_vector(int i, int j, int k, const Spectrum& s, bool odd) {
    const double unit = 2.0 * M_PI / s.L;
    Vec xi = Vec::zero(s.n);
    const int fi = odd ? freq_odd(i, s.N) : freq_even(i, s.N);
    const int fj = odd ? freq_odd(j, s.N) : freq_even(j, s.N);
    xi[0] = unit * fi;
    xi[1] = unit * fj;
    if (s.n == 3) xi[2] = unit * (odd ? freq_odd(k, s.N) : freq_even(k, s.N));
    return xi;
}

} // namespace

void PeriodicField::validate() const {
    if (field.dims()[0] < 4) throw ConfigError("PeriodicField: resolution must be >= 4 per axis");
    if (!(box_length > 0.0)) throw ConfigError("PeriodicField: box length must be positive");
    if (!field.all_finite()) throw DomainError("PeriodicField: non-finite samples");
}

BoxSpec BoxSpec::around(const GridField& v, double factor) {
    const int n = v.dim();
    const double h = v.spacing();
    double extent = 0.0;
    for (int a = 0; a < n; ++a) extent = std::max(extent, v.dims()[a] * h);
    const int N = static_cast<int>(std::ceil(factor * extent / h / 2.0)) * 2; // even
    BoxSpec box;
    box.resolution = N;
    box.length = N * h;
    // corner on v's lattice, shifted to center v's grid in the box
    Vec corner = Vec::zero(n);
    for (int a = 0; a < n; ++a) {
        const int pad = (N - v.dims()[a]) / 2;
        corner[a] = v.origin()[a] - 0.5 * h - pad * h;
    }
    box.corner = corner;
    return box;
}

PeriodicField extend(const GridField& v, const BoxSpec& box, double collar_width) {
    const int n = v.dim();
    const double h = v.spacing();
    if (std::abs(box.length / box.resolution - h) > 1e-9 * h)
        throw ConfigError("extend: domain grid spacing must match the box lattice");

    // index offset of v's first sample inside the box
    int off[3] = {0, 0, 0};
    for (int a = 0; a < n; ++a) {
        const double s = (v.origin()[a] - (box.corner[a] + 0.5 * h)) / h;
        off[a] = static_cast<int>(std::lround(s));
        if (std::abs(s - off[a]) > 1e-6)
            throw ConfigError("extend: domain grid is not aligned with the box lattice");
        if (off[a] < 0 || off[a] + v.dims()[a] > box.resolution)
            throw DomainError("extend: domain grid exceeds the box");
    }
    const int collar_cells = static_cast<int>(std::ceil(collar_width / h));
    for (int a = 0; a < n; ++a)
        if (off[a] - collar_cells <= 0 || off[a] + v.dims()[a] + collar_cells >= box.resolution)
            throw DomainError("extend: no room for the collar between the mask and the box boundary");

    PeriodicField out;
    out.box_length = box.length;
    Vec origin = box.corner;
    for (int a = 0; a < n; ++a) origin[a] += 0.5 * h;
    out.field = GridField(n, v.comps(), {box.resolution, box.resolution, n == 3 ? box.resolution : 1},
                          origin, h);

    // clamp-and-taper: values copy outward from the bounding box and decay to
    // zero across the collar
    const geometry::Cutoff ramp(collar_width);
    const Index3& bd = out.field.dims();
    for (int k = 0; k < bd[2]; ++k)
        for (int j = 0; j < bd[1]; ++j)
            for (int i = 0; i < bd[0]; ++i) {
                const int bidx[3] = {i, j, k};
                int src[3] = {0, 0, 0};
                double dist = 0.0; // Chebyshev distance outside the bounding box, in cells
                for (int a = 0; a < n; ++a) {
                    const int rel = bidx[a] - off[a];
                    const int clamped = std::clamp(rel, 0, v.dims()[a] - 1);
                    dist = std::max(dist, static_cast<double>(std::abs(rel - clamped)));
                    src[a] = clamped;
                }
                if (dist * h >= collar_width) continue; // stays zero
                const double factor =
                    dist == 0.0 ? 1.0 : ramp.profile(collar_width + dist * h);
                if (!v.in_mask(src[0], src[1], src[2]) && dist == 0.0) continue;
                for (int c = 0; c < v.comps(); ++c)
                    out.field.at(c, i, j, k) = factor * v.at(c, src[0], src[1], src[2]);
            }
    return out;
}

PeriodicField leray_project(const PeriodicField& v) {
    v.validate();
    if (v.field.comps() != v.field.dim()) throw ConfigError("leray_project: need a vector field");
    Spectrum s = forward(v);
    for_each_mode(s, [&](size_t idx, int i, int j, int k) {
        const Vec xi = xi_vector(i, j, k, s, false);
        const double xi2 = xi.norm2();
        if (xi2 == 0.0) return; // zero mode untouched
        cplx dot(0.0, 0.0);
        for (int c = 0; c < s.comps; ++c) dot += xi[c] * s.at(c, idx);
        for (int c = 0; c < s.comps; ++c) s.at(c, idx) -= xi[c] * dot / xi2;
    });
    return inverse(s, v.field);
}

PeriodicField gradient_part(const PeriodicField& v) {
    v.validate();
    if (v.field.comps() != v.field.dim()) throw ConfigError("gradient_part: need a vector field");
    Spectrum s = forward(v);
    for_each_mode(s, [&](size_t idx, int i, int j, int k) {
        const Vec xi = xi_vector(i, j, k, s, false);
        const double xi2 = xi.norm2();
        if (xi2 == 0.0) {
            for (int c = 0; c < s.comps; ++c) s.at(c, idx) = 0.0;
            return;
        }
        cplx dot(0.0, 0.0);
        for (int c = 0; c < s.comps; ++c) dot += xi[c] * s.at(c, idx);
        for (int c = 0; c < s.comps; ++c) s.at(c, idx) = xi[c] * dot / xi2;
    });
    return inverse(s, v.field);
}

PeriodicField neg_inv_laplace_divergence(const PeriodicField& v) {
    v.validate();
    Spectrum s = forward(v);
    Spectrum w;
    w.n = s.n;
    w.comps = 1;
    w.N = s.N;
    w.L = s.L;
    w.data.assign(s.points(), cplx(0.0, 0.0));
    for_each_mode(s, [&](size_t idx, int i, int j, int k) {
        const Vec xi = xi_vector(i, j, k, s, true);
        const double xi2 = xi.norm2();
        if (xi2 == 0.0) return;
        cplx dot(0.0, 0.0);
        for (int c = 0; c < s.comps; ++c) dot += xi[c] * s.at(c, idx);
        // -Delta^{-1} div v  ->  + i (xi . vhat) / |xi|^2
        w.data[idx] = cplx(0.0, 1.0) * dot / xi2;
    });
    GridField pattern(v.field.dim(), 1, v.field.dims(), v.field.origin(), v.field.spacing());
    return inverse(w, pattern);
}

PeriodicField spectral_gradient(const PeriodicField& p) {
    p.validate();
    if (p.field.comps() != 1) throw ConfigError("spectral_gradient: need a scalar field");
    Spectrum s = forward(p);
    Spectrum g;
    g.n = s.n;
    g.comps = s.n;
    g.N = s.N;
    g.L = s.L;
    g.data.assign(static_cast<size_t>(g.comps) * s.points(), cplx(0.0, 0.0));
    for_each_mode(s, [&](size_t idx, int i, int j, int k) {
        const Vec xi = xi_vector(i, j, k, s, true);
        for (int c = 0; c < g.comps; ++c) g.at(c, idx) = cplx(0.0, 1.0) * xi[c] * s.data[idx];
    });
    GridField pattern(p.field.dim(), p.field.dim(), p.field.dims(), p.field.origin(),
                      p.field.spacing());
    return inverse(g, pattern);
}

double spectral_divergence_max(const PeriodicField& v) {
    Spectrum s = forward(v);
    double num = 0.0, den = 0.0;
    for_each_mode(s, [&](size_t idx, int i, int j, int k) {
        const Vec xi = xi_vector(i, j, k, s, true);
        cplx dot(0.0, 0.0);
        double vmag = 0.0;
        for (int c = 0; c < s.comps; ++c) {
            dot += xi[c] * s.at(c, idx);
            vmag += std::norm(s.at(c, idx));
        }
        num = std::max(num, std::abs(dot));
        den = std::max(den, xi.norm() * std::sqrt(vmag));
    });
    return den > 0.0 ? num / den : 0.0;
}

double spectral_curl_max(const PeriodicField& v) {
    Spectrum s = forward(v);
    double num = 0.0, den = 0.0;
    for_each_mode(s, [&](size_t idx, int i, int j, int k) {
        const Vec xi = xi_vector(i, j, k, s, true);
        double cmag = 0.0;
        if (s.n == 2) {
            cmag = std::abs(xi[0] * s.at(1, idx) - xi[1] * s.at(0, idx));
        } else {
            const cplx cx = xi[1] * s.at(2, idx) - xi[2] * s.at(1, idx);
            const cplx cy = xi[2] * s.at(0, idx) - xi[0] * s.at(2, idx);
            const cplx cz = xi[0] * s.at(1, idx) - xi[1] * s.at(0, idx);
            cmag = std::sqrt(std::norm(cx) + std::norm(cy) + std::norm(cz));
        }
        double vmag = 0.0;
        for (int c = 0; c < s.comps; ++c) vmag += std::norm(s.at(c, idx));
        num = std::max(num, cmag);
        den = std::max(den, xi.norm() * std::sqrt(vmag));
    });
    return den > 0.0 ? num / den : 0.0;
}

double inner_product(const PeriodicField& a, const PeriodicField& b) {
    double acc = 0.0;
    for (size_t i = 0; i < a.field.data().size(); ++i) acc += a.field.data()[i] * b.field.data()[i];
    return acc * a.field.cell_volume();
}

GridField restrict_to(const PeriodicField& p, const GridField& pattern) {
    const int n = pattern.dim();
    const double h = pattern.spacing();
    if (std::abs(p.field.spacing() - h) > 1e-9 * h)
        throw ConfigError("restrict_to: lattice spacing mismatch");
    int off[3] = {0, 0, 0};
    for (int a = 0; a < n; ++a) {
        const double s = (pattern.origin()[a] - p.field.origin()[a]) / h;
        off[a] = static_cast<int>(std::lround(s));
        if (std::abs(s - off[a]) > 1e-6) throw ConfigError("restrict_to: lattice misalignment");
        if (off[a] < 0 || off[a] + pattern.dims()[a] > p.field.dims()[a])
            throw DomainError("restrict_to: pattern exceeds the box");
    }
    GridField out(n, p.field.comps(), pattern.dims(), pattern.origin(), h);
    if (pattern.has_mask()) out.set_mask(pattern.mask());
    const Index3& pd = pattern.dims();
    for (int c = 0; c < out.comps(); ++c)
        for (int k = 0; k < pd[2]; ++k)
            for (int j = 0; j < pd[1]; ++j)
                for (int i = 0; i < pd[0]; ++i)
                    out.at(c, i, j, k) =
                        p.field.at(c, i + off[0], j + off[1], k + (n == 3 ? off[2] : 0));
    return out;
}

ReducedProblem reduce_problem(const SpaceTimeField& f, const BoxSpec& box, double collar_width) {
    if (f.slices.empty()) throw ConfigError("reduce_problem: empty forcing");
    ReducedProblem out;
    out.f_sol.dt = f.dt;
    out.pressure_shift.dt = f.dt;
    for (const GridField& slice : f.slices) {
        const PeriodicField ext = extend(slice, box, collar_width);
        const PeriodicField proj = leray_project(ext);
        const PeriodicField shift = neg_inv_laplace_divergence(ext);
        out.f_sol.slices.push_back(restrict_to(proj, slice));
        GridField pattern(slice.dim(), 1, slice.dims(), slice.origin(), slice.spacing());
        if (slice.has_mask()) pattern.set_mask(slice.mask());
        out.pressure_shift.slices.push_back(restrict_to(shift, pattern));
    }
    return out;
}

} // namespace presslab::helmholtz
