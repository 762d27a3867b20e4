#include "presslab/norms.hpp"

#include <algorithm>
#include <cmath>

namespace presslab::norms {

void NormSpec::validate() const {
    const bool s_ok = s == inf || s > 1.0;
    if (!s_ok) throw ConfigError("NormSpec: need s > 1 or s = inf");
    if (!(q > 1.0) || q == inf) throw ConfigError("NormSpec: need 1 < q < inf");
    if (k < 0) throw ConfigError("NormSpec: need k >= 0");
}

namespace {

int min_axis_points(const GridField& f) {
    int m = std::min(f.dims()[0], f.dims()[1]);
    if (f.dim() == 3) m = std::min(m, f.dims()[2]);
    return m;
}

// q-th power of the L^q norm of all components over `keep`.
double lq_pow(const GridField& f, double q, const std::vector<uint8_t>& keep) {
    double acc = 0.0;
    for (int c = 0; c < f.comps(); ++c)
        for (size_t idx = 0; idx < f.points(); ++idx) {
            if (!f.in_mask(idx)) continue;
            if (!keep.empty() && !keep[idx]) continue;
            acc += std::pow(std::abs(f.at_flat(c, idx)), q);
        }
    return acc * f.cell_volume();
}

} // namespace

double sobolev_norm(const GridField& field, double q, int k) {
    if (2 * k + 1 > min_axis_points(field))
        throw ConfigError("sobolev_norm: k exceeds the available stencil width");
    const std::vector<uint8_t> keep = k > 0 ? eroded_mask(field, k) : std::vector<uint8_t>{};
    double acc = 0.0;
    GridField deriv = field;
    for (int j = 0; j <= k; ++j) {
        if (j > 0) deriv = tensor_derivatives(deriv, 1);
        acc += lq_pow(deriv, q, keep);
    }
    return std::pow(acc, 1.0 / q);
}

double derivative_seminorm(const GridField& field, double q, int k, int erode) {
    if (erode < 0) erode = k;
    if (2 * k + 1 > min_axis_points(field))
        throw ConfigError("derivative_seminorm: k exceeds the available stencil width");
    const GridField d = tensor_derivatives(field, k);
    const std::vector<uint8_t> keep = erode > 0 ? eroded_mask(field, erode) : std::vector<uint8_t>{};
    return std::pow(lq_pow(d, q, keep), 1.0 / q);
}

double bochner_norm(const SpaceTimeField& field, const NormSpec& spec) {
    spec.validate();
    if (field.slices.empty()) throw ConfigError("bochner_norm: empty time sequence");
    if (spec.s == NormSpec::inf) {
        double m = 0.0;
        for (const GridField& slice : field.slices) m = std::max(m, sobolev_norm(slice, spec.q, spec.k));
        return m;
    }
    // Right-endpoint rule over (0, T]: slice 0 carries t = 0.
    double acc = 0.0;
    for (size_t m = 1; m < field.slices.size(); ++m)
        acc += std::pow(sobolev_norm(field.slices[m], spec.q, spec.k), spec.s);
    return std::pow(field.dt * acc, 1.0 / spec.s);
}

double mean_value(const GridField& field, const std::vector<uint8_t>& region) {
    double acc = 0.0;
    size_t count = 0;
    for (size_t idx = 0; idx < field.points(); ++idx) {
        if (!field.in_mask(idx)) continue;
        if (!region.empty() && !region[idx]) continue;
        acc += field.at_flat(0, idx);
        ++count;
    }
    if (count == 0) throw DomainError("mean_value: empty region");
    return acc / static_cast<double>(count);
}

double estimate_ratio(const SpaceTimeField& p, const SpaceTimeField& f, const NormSpec& spec) {
    spec.validate();
    const NormSpec denom_spec = spec;
    const NormSpec num_spec{spec.s, spec.q, 0};

    SpaceTimeField grad_kp1;
    grad_kp1.dt = p.dt;
    grad_kp1.slices.reserve(p.slices.size());
    for (const GridField& slice : p.slices) {
        GridField d = tensor_derivatives(slice, spec.k + 1);
        std::vector<uint8_t> keep = eroded_mask(slice, spec.k + 1);
        // Bake the erosion into the slice mask so the plain L^q norm applies.
        if (slice.has_mask())
            for (size_t i = 0; i < keep.size(); ++i) keep[i] = keep[i] && slice.mask()[i];
        d.set_mask(std::move(keep));
        grad_kp1.slices.push_back(std::move(d));
    }

    const double denom = bochner_norm(f, denom_spec);
    if (!(denom > 0.0)) throw ConfigError("estimate_ratio: forcing norm is zero");
    return bochner_norm(grad_kp1, num_spec) / denom;
}

} // namespace presslab::norms
