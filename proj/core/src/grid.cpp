#include "presslab/grid.hpp"

#include <algorithm>
#include <cmath>

namespace presslab {

GridField::GridField(int dim, int comps, Index3 dims, Vec origin, double spacing)
    : n_(dim), comps_(comps), dims_(dims), origin_(origin), h_(spacing) {
    if (dim != 2 && dim != 3) throw ConfigError("GridField: dimension must be 2 or 3");
    if (dim == 2) dims_[2] = 1;
    if (comps < 1) throw ConfigError("GridField: need at least one component");
    if (dims_[0] < 1 || dims_[1] < 1 || dims_[2] < 1) throw ConfigError("GridField: empty grid");
    if (!(spacing > 0.0)) throw ConfigError("GridField: spacing must be positive");
    origin_.n = dim;
    npts_ = static_cast<size_t>(dims_[0]) * dims_[1] * dims_[2];
    data_.assign(static_cast<size_t>(comps_) * npts_, 0.0);
}

double GridField::cell_volume() const {
    double v = h_ * h_;
    if (n_ == 3) v *= h_;
    return v;
}

void GridField::set_mask(std::vector<uint8_t> mask) {
    if (mask.size() != npts_) throw ConfigError("GridField: mask size mismatch");
    mask_ = std::move(mask);
}

GridField& GridField::operator+=(const GridField& o) {
    for (size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
}
GridField& GridField::operator-=(const GridField& o) {
    for (size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
}
GridField& GridField::operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
}

double GridField::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

bool GridField::all_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

GridField diff_central(const GridField& f, int comp, int axis) {
    GridField d(f.dim(), 1, f.dims(), f.origin(), f.spacing());
    if (f.has_mask()) d.set_mask(f.mask());
    const Index3& dims = f.dims();
    const double inv2h = 1.0 / (2.0 * f.spacing());
    Index3 step{0, 0, 0};
    step[axis] = 1;
    for (int k = 0; k < dims[2]; ++k)
        for (int j = 0; j < dims[1]; ++j)
            for (int i = 0; i < dims[0]; ++i) {
                const int ip = i + step[0], jp = j + step[1], kp = k + step[2];
                const int im = i - step[0], jm = j - step[1], km = k - step[2];
                if (im < 0 || jm < 0 || km < 0 || ip >= dims[0] || jp >= dims[1] || kp >= dims[2])
                    continue;
                d.at(0, i, j, k) = (f.at(comp, ip, jp, kp) - f.at(comp, im, jm, km)) * inv2h;
            }
    return d;
}

GridField tensor_derivatives(const GridField& f, int order) {
    if (order == 0) return f;
    const int n = f.dim();
    GridField cur = f;
    for (int level = 0; level < order; ++level) {
        GridField next(n, cur.comps() * n, cur.dims(), cur.origin(), cur.spacing());
        if (f.has_mask()) next.set_mask(f.mask());
        for (int c = 0; c < cur.comps(); ++c)
            for (int a = 0; a < n; ++a) {
                GridField d = diff_central(cur, c, a);
                const int out = c * n + a;
                for (size_t idx = 0; idx < next.points(); ++idx) next.at_flat(out, idx) = d.at_flat(0, idx);
            }
        cur = std::move(next);
    }
    return cur;
}

std::vector<uint8_t> eroded_mask(const GridField& f, int margin) {
    const Index3& dims = f.dims();
    const int kmargin = f.dim() == 3 ? margin : 0;
    std::vector<uint8_t> keep(f.points(), 0);
    for (int k = 0; k < dims[2]; ++k)
        for (int j = 0; j < dims[1]; ++j)
            for (int i = 0; i < dims[0]; ++i) {
                if (i < margin || j < margin || k < kmargin || i >= dims[0] - margin ||
                    j >= dims[1] - margin || k >= dims[2] - kmargin)
                    continue;
                bool ok = true;
                for (int dk = -kmargin; dk <= kmargin && ok; ++dk)
                    for (int dj = -margin; dj <= margin && ok; ++dj)
                        for (int di = -margin; di <= margin && ok; ++di)
                            if (!f.in_mask(i + di, j + dj, k + dk)) ok = false;
                if (ok) keep[f.flat(i, j, k)] = 1;
            }
    return keep;
}

double interpolate(const GridField& f, int comp, const Vec& p) {
    const int n = f.dim();
    const Index3& dims = f.dims();
    int base[3] = {0, 0, 0};
    double w[3] = {0.0, 0.0, 0.0};
    for (int a = 0; a < n; ++a) {
        const double s = (p[a] - f.origin()[a]) / f.spacing();
        double fl = std::floor(s);
        int i0 = static_cast<int>(fl);
        // tolerate roundoff at the hull edges
        if (i0 == dims[a] - 1 && s - fl < 1e-9) { i0 -= 1; fl -= 1.0; }
        if (i0 == -1 && fl + 1.0 - s < 1e-9) { i0 = 0; fl = 0.0; }
        if (i0 < 0 || i0 + 1 >= dims[a])
            throw DomainError("interpolate: point outside grid hull");
        base[a] = i0;
        w[a] = s - fl;
    }
    double value = 0.0;
    const int kc = (n == 3) ? 2 : 1;
    for (int dk = 0; dk < kc; ++dk)
        for (int dj = 0; dj < 2; ++dj)
            for (int di = 0; di < 2; ++di) {
                double weight = (di ? w[0] : 1.0 - w[0]) * (dj ? w[1] : 1.0 - w[1]);
                if (n == 3) weight *= dk ? w[2] : 1.0 - w[2];
                value += weight * f.at(comp, base[0] + di, base[1] + dj, base[2] + dk);
            }
    return value;
}

double lq_norm(const GridField& f, double q, const std::vector<uint8_t>& keep) {
    double acc = 0.0;
    for (int c = 0; c < f.comps(); ++c)
        for (size_t idx = 0; idx < f.points(); ++idx) {
            if (!f.in_mask(idx)) continue;
            if (!keep.empty() && !keep[idx]) continue;
            acc += std::pow(std::abs(f.at_flat(c, idx)), q);
        }
    return std::pow(acc * f.cell_volume(), 1.0 / q);
}

double l2_diff(const GridField& a, const GridField& b, const std::vector<uint8_t>& keep) {
    double acc = 0.0;
    for (int c = 0; c < a.comps(); ++c)
        for (size_t idx = 0; idx < a.points(); ++idx) {
            if (!a.in_mask(idx)) continue;
            if (!keep.empty() && !keep[idx]) continue;
            const double d = a.at_flat(c, idx) - b.at_flat(c, idx);
            acc += d * d;
        }
    return std::sqrt(acc * a.cell_volume());
}

} // namespace presslab
