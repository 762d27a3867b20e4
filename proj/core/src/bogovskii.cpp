#include "presslab/bogovskii.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "presslab/norms.hpp"
#include "presslab/parallel.hpp"

namespace presslab::bogovskii {

namespace {

// Gauss-Legendre nodes/weights on [-1,1], cached per order.
struct GaussRule {
    std::vector<double> x, w;
};

const GaussRule& gauss_rule(int order) {
    static std::map<int, GaussRule> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(order);
    if (it != cache.end()) return it->second;

    GaussRule rule;
    rule.x.resize(order);
    rule.w.resize(order);
    for (int i = 0; i < order; ++i) {
        // Newton iteration from the Chebyshev estimate.
        double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= order; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = order * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.x[i] = x;
        rule.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return cache.emplace(order, std::move(rule)).first->second;
}

// Radial integral int phi(x + r*yhat) (|y|+r)^{n-1} dr over the exact window
// where the bump support meets the ray.
double radial_integral(const std::function<double(const Vec&)>& phi, double support, const Vec& x,
                       const Vec& yhat, double ynorm, int n, const GaussRule& rule) {
    const double b = x.dot(yhat);
    const double disc = b * b - x.norm2() + support * support;
    if (disc <= 0.0) return 0.0;
    const double sq = std::sqrt(disc);
    const double lo = std::max(0.0, -b - sq);
    const double hi = -b + sq;
    if (hi <= lo) return 0.0;

    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    double acc = 0.0;
    for (size_t g = 0; g < rule.x.size(); ++g) {
        const double r = mid + half * rule.x[g];
        const Vec p = x + yhat * r;
        const double fac = (n == 2) ? (ynorm + r) : (ynorm + r) * (ynorm + r);
        acc += rule.w[g] * phi(p) * fac;
    }
    return acc * half;
}

Vec kernel_fn(const std::function<double(const Vec&)>& phi, double support, const Vec& x,
              const Vec& y, int n, const GaussRule& rule) {
    const double ynorm = y.norm();
    const Vec yhat = y / ynorm;
    const double integral = radial_integral(phi, support, x, yhat, ynorm, n, rule);
    const double scale = integral / std::pow(ynorm, n);
    return y * scale;
}

// f must vanish outside its mask and on the outermost mask layer; a smooth
// bump sampled with margin passes, a field spilling to the edge does not.
void check_compact_support(const GridField& f) {
    const double tol = 1e-12 * std::max(f.max_abs(), 1e-300);
    const std::vector<uint8_t> interior = eroded_mask(f, 1);
    for (size_t idx = 0; idx < f.points(); ++idx) {
        if (interior[idx]) continue;
        for (int c = 0; c < f.comps(); ++c)
            if (std::abs(f.at_flat(c, idx)) > tol)
                throw DomainError("bogovskii: f is not compactly supported in its domain");
    }
}

std::vector<uint8_t> box_interior(const GridField& f, int margin) {
    GridField unmasked(f.dim(), 1, f.dims(), f.origin(), f.spacing());
    return eroded_mask(unmasked, margin);
}

GridField apply_fn_impl(const std::function<double(const Vec&)>& phi, double support,
                        const GridField& f, const BogovskiiConfig& cfg, bool check_support) {
    cfg.validate();
    if (f.comps() != 1) throw ConfigError("apply_bogovskii: f must be scalar");
    if (check_support) check_compact_support(f);

    const int n = f.dim();
    const double h = f.spacing();
    const double hq = h / cfg.supersample; // integration lattice spacing
    const double eps = cfg.epsilon > 0.0 ? cfg.epsilon : hq;
    const GaussRule& rule = gauss_rule(cfg.radial_order);

    // Interpolating f at a point, zero outside the sample hull (the support
    // screen already guarantees f vanishes there).
    auto interp0 = [&f, n](const Vec& p) -> double {
        int base[3] = {0, 0, 0};
        double w[3] = {0.0, 0.0, 0.0};
        for (int a = 0; a < n; ++a) {
            const double s = (p[a] - f.origin()[a]) / f.spacing();
            const double fl = std::floor(s);
            const int i0 = static_cast<int>(fl);
            if (i0 < 0 || i0 + 1 >= f.dims()[a]) return 0.0;
            base[a] = i0;
            w[a] = s - fl;
        }
        double v = 0.0;
        const int kc = (n == 3) ? 2 : 1;
        for (int dk = 0; dk < kc; ++dk)
            for (int dj = 0; dj < 2; ++dj)
                for (int di = 0; di < 2; ++di) {
                    double weight = (di ? w[0] : 1.0 - w[0]) * (dj ? w[1] : 1.0 - w[1]);
                    if (n == 3) weight *= dk ? w[2] : 1.0 - w[2];
                    v += weight * f.at(0, base[0] + di, base[1] + dj, base[2] + dk);
                }
        return v;
    };

    // Integration nodes that actually contribute: the supersampled lattice
    // over the cells where f lives, with interpolated weights.
    struct Source {
        Vec pos;
        double weight; // f(z) * node volume
    };
    std::vector<Source> sources;
    {
        const int m = cfg.supersample;
        const double node_vol = std::pow(hq, n);
        std::vector<Vec> offsets;
        const int kc = (n == 3) ? m : 1;
        for (int dk = 0; dk < kc; ++dk)
            for (int dj = 0; dj < m; ++dj)
                for (int di = 0; di < m; ++di) {
                    Vec o = Vec::zero(n);
                    o[0] = (di + 0.5) * hq - 0.5 * h;
                    o[1] = (dj + 0.5) * hq - 0.5 * h;
                    if (n == 3) o[2] = (dk + 0.5) * hq - 0.5 * h;
                    offsets.push_back(o);
                }
        for (size_t idx = 0; idx < f.points(); ++idx) {
            // a node can draw from neighbors, so keep cells whose 1-ring has data
            bool live = f.at_flat(0, idx) != 0.0;
            const Index3 ijk = f.unflat(idx);
            if (!live) {
                for (int dk = (n == 3 ? -1 : 0); dk <= (n == 3 ? 1 : 0) && !live; ++dk)
                    for (int dj = -1; dj <= 1 && !live; ++dj)
                        for (int di = -1; di <= 1 && !live; ++di) {
                            const int i2 = ijk[0] + di, j2 = ijk[1] + dj, k2 = ijk[2] + dk;
                            if (i2 < 0 || j2 < 0 || k2 < 0 || i2 >= f.dims()[0] ||
                                j2 >= f.dims()[1] || k2 >= f.dims()[2])
                                continue;
                            live = f.at(0, i2, j2, k2) != 0.0;
                        }
            }
            if (!live) continue;
            const Vec center = f.position(ijk[0], ijk[1], ijk[2]);
            if (m == 1) {
                const double v = f.at_flat(0, idx);
                if (v != 0.0) sources.push_back({center, v * node_vol});
                continue;
            }
            for (const Vec& o : offsets) {
                const Vec p = center + o;
                const double v = interp0(p);
                if (v != 0.0) sources.push_back({p, v * node_vol});
            }
        }
    }

    // Subcell offsets for the singular-node refinement.
    std::vector<Vec> sub_offsets;
    {
        const int s = cfg.subdiv;
        const double sh = hq / s;
        const int kc = (n == 3) ? s : 1;
        for (int dk = 0; dk < kc; ++dk)
            for (int dj = 0; dj < s; ++dj)
                for (int di = 0; di < s; ++di) {
                    Vec o = Vec::zero(n);
                    o[0] = (di + 0.5) * sh - 0.5 * hq;
                    o[1] = (dj + 0.5) * sh - 0.5 * hq;
                    if (n == 3) o[2] = (dk + 0.5) * sh - 0.5 * hq;
                    sub_offsets.push_back(o);
                }
    }
    const double sub_frac = 1.0 / static_cast<double>(sub_offsets.size());

    GridField out(n, n, f.dims(), f.origin(), f.spacing());
    if (f.has_mask()) out.set_mask(f.mask());

    parallel_for(out.points(), [&](size_t idx) {
        const Index3 ijk = out.unflat(idx);
        const Vec x = out.position(ijk[0], ijk[1], ijk[2]);
        Vec acc = Vec::zero(n);
        for (const Source& src : sources) {
            const Vec y = x - src.pos;
            const double ynorm = y.norm();
            if (ynorm < eps) {
                for (const Vec& off : sub_offsets) {
                    const Vec ys = x - (src.pos + off);
                    acc = acc + kernel_fn(phi, support, x, ys, n, rule) * (src.weight * sub_frac);
                }
            } else {
                acc = acc + kernel_fn(phi, support, x, y, n, rule) * src.weight;
            }
        }
        for (int c = 0; c < n; ++c) out.at_flat(c, idx) = acc[c];
    });
    return out;
}

} // namespace

void BogovskiiConfig::validate() const {
    if (radial_order < 2) throw ConfigError("BogovskiiConfig: radial_order must be >= 2");
    if (supersample < 1) throw ConfigError("BogovskiiConfig: supersample must be >= 1");
    if (epsilon < 0.0) throw ConfigError("BogovskiiConfig: epsilon must be >= 0");
    if (subdiv < 2) throw ConfigError("BogovskiiConfig: subdiv must be >= 2");
}

BumpFunction::BumpFunction(int dim, double support, bool normalized)
    : n_(dim), support_(support), normalized_(normalized), c_(1.0) {
    if (dim != 2 && dim != 3) throw ConfigError("BumpFunction: dimension must be 2 or 3");
    if (!(support > 0.0)) throw ConfigError("BumpFunction: support radius must be positive");
    if (normalized_) {
        // int_{B_s} e^{-1/(1-|x/s|^2)} dx = sigma_{n-1} s^n int_0^1 e^{-1/(1-t^2)} t^{n-1} dt
        const GaussRule& rule = gauss_rule(64);
        double radial = 0.0;
        for (size_t g = 0; g < rule.x.size(); ++g) {
            const double t = 0.5 * (rule.x[g] + 1.0);
            radial += 0.5 * rule.w[g] * std::exp(-1.0 / (1.0 - t * t)) *
                      (dim == 2 ? t : t * t);
        }
        const double sigma = (dim == 2) ? 2.0 * M_PI : 4.0 * M_PI;
        c_ = 1.0 / (sigma * std::pow(support, dim) * radial);
    }
}

double BumpFunction::value(const Vec& x) const {
    const double u = x.norm2() / (support_ * support_);
    if (u >= 1.0) return 0.0;
    return c_ * std::exp(-1.0 / (1.0 - u));
}

Vec BumpFunction::gradient(const Vec& x) const {
    const double s2 = support_ * support_;
    const double u = x.norm2() / s2;
    if (u >= 1.0) return Vec::zero(n_);
    const double inv = 1.0 / (1.0 - u);
    const double dv = -c_ * std::exp(-inv) * inv * inv; // d/du of the profile
    return x * (dv * 2.0 / s2);
}

std::function<double(const Vec&)> BumpFunction::component_derivative(int axis) const {
    if (axis < 0 || axis >= n_) throw ConfigError("BumpFunction: bad derivative axis");
    BumpFunction copy = *this;
    return [copy, axis](const Vec& x) { return copy.gradient(x)[axis]; };
}

Vec eval_kernel(const BumpFunction& phi, const Vec& x, const Vec& y, const BogovskiiConfig& cfg) {
    cfg.validate();
    if (y.norm2() == 0.0) throw DomainError("eval_kernel: kernel is singular at y = 0");
    auto fn = [&phi](const Vec& p) { return phi.value(p); };
    return kernel_fn(fn, phi.support_radius(), x, y, phi.dim(), gauss_rule(cfg.radial_order));
}

GridField apply_bogovskii(const BumpFunction& phi, const GridField& f, const BogovskiiConfig& cfg) {
    auto fn = [&phi](const Vec& p) { return phi.value(p); };
    return apply_fn_impl(fn, phi.support_radius(), f, cfg, true);
}

GridField apply_bogovskii_fn(const std::function<double(const Vec&)>& phi, double support,
                             const GridField& f, const BogovskiiConfig& cfg) {
    return apply_fn_impl(phi, support, f, cfg, true);
}

GridField apply_scaled_at(const Vec& center, double r_inner, const GridField& f,
                          const BogovskiiConfig& cfg, bool check_support) {
    if (!(r_inner > 0.0)) throw ConfigError("apply_scaled_at: inner radius must be positive");
    const int n = f.dim();
    const double R = 0.5 * r_inner;

    // f~(y) = f(R y + center) on the rescaled grid; same samples, new metadata.
    GridField ftilde(n, 1, f.dims(), (f.origin() - center) / R, f.spacing() / R);
    ftilde.data() = f.data();
    if (f.has_mask()) ftilde.set_mask(f.mask());

    BumpFunction phi(n, 1.0, true);
    auto fn = [&phi](const Vec& p) { return phi.value(p); };
    GridField vtilde = apply_fn_impl(fn, 1.0, ftilde, cfg, check_support);

    // B(f)(x) = R * vtilde((x - center)/R), mapped back onto f's grid.
    GridField out(n, n, f.dims(), f.origin(), f.spacing());
    if (f.has_mask()) out.set_mask(f.mask());
    for (int c = 0; c < n; ++c)
        for (size_t idx = 0; idx < out.points(); ++idx) out.at_flat(c, idx) = R * vtilde.at_flat(c, idx);
    return out;
}

GridField apply_scaled(const geometry::StarDomain& dom, const GridField& f,
                       const BogovskiiConfig& cfg) {
    const double tol = 1e-12 * std::max(f.max_abs(), 1e-300);
    for (size_t idx = 0; idx < f.points(); ++idx) {
        if (std::abs(f.at_flat(0, idx)) <= tol) continue;
        const Index3 ijk = f.unflat(idx);
        if (!dom.contains(f.position(ijk[0], ijk[1], ijk[2])))
            throw DomainError("apply_scaled: f is not supported inside the domain");
    }
    return apply_scaled_at(dom.center(), dom.inscribed_radius(), f, cfg);
}

double divergence_residual(const GridField& v, const GridField& f, const BumpFunction& phi,
                           const geometry::StarDomain& dom, const BogovskiiConfig& cfg) {
    cfg.validate();
    const int n = f.dim();
    for (int a = 0; a < n; ++a)
        if (f.dims()[a] < 4) throw ConfigError("divergence_residual: need >= 4 points per axis");

    GridField div(n, 1, v.dims(), v.origin(), v.spacing());
    for (int c = 0; c < n; ++c) {
        const GridField d = diff_central(v, c, c);
        for (size_t idx = 0; idx < div.points(); ++idx) div.at_flat(0, idx) += d.at_flat(0, idx);
    }

    const double R = 0.5 * dom.inscribed_radius();
    const Vec center = dom.center();
    double f_integral = 0.0;
    for (size_t idx = 0; idx < f.points(); ++idx) f_integral += f.at_flat(0, idx);
    f_integral *= f.cell_volume();

    GridField target(n, 1, f.dims(), f.origin(), f.spacing());
    const double rn = std::pow(R, n);
    for (size_t idx = 0; idx < target.points(); ++idx) {
        const Index3 ijk = target.unflat(idx);
        const Vec x = target.position(ijk[0], ijk[1], ijk[2]);
        target.at_flat(0, idx) =
            f.at_flat(0, idx) - phi.value((x - center) / R) / rn * f_integral;
    }

    // The identity extends by zero outside G, so integrate over the whole
    // grid interior; that also catches support leaks.
    const std::vector<uint8_t> keep = box_interior(f, 1);
    const double num = l2_diff(div, target, keep);
    const double den = lq_norm(target, 2.0, keep);
    return den > 0.0 ? num / den : num;
}

double commutator_residual(const BumpFunction& phi, const GridField& f, int i, int j,
                           const BogovskiiConfig& cfg) {
    if (i == j) throw ConfigError("commutator_residual: identity needs mixed indices i != j");
    const int n = f.dim();
    if (i < 0 || i >= n || j < 0 || j >= n) throw ConfigError("commutator_residual: bad axis");
    check_compact_support(f);

    const GridField di_f = diff_central(f, 0, i);
    const GridField dj_f = diff_central(f, 0, j);

    const GridField b_di = apply_bogovskii(phi, di_f, cfg);
    const GridField b_dj = apply_bogovskii(phi, dj_f, cfg);
    const GridField bdphi_j = apply_bogovskii_fn(phi.component_derivative(j), phi.support_radius(), f, cfg);
    const GridField bdphi_i = apply_bogovskii_fn(phi.component_derivative(i), phi.support_radius(), f, cfg);

    const std::vector<uint8_t> keep = box_interior(f, 2);
    double num = 0.0;
    double t1n = 0.0, t2n = 0.0, t3n = 0.0, t4n = 0.0;
    for (int c = 0; c < n; ++c) {
        const GridField t1 = diff_central(b_di, c, j);
        const GridField t2 = diff_central(b_dj, c, i);
        const GridField t3 = diff_central(bdphi_j, c, i);
        const GridField t4 = diff_central(bdphi_i, c, j);
        for (size_t idx = 0; idx < f.points(); ++idx) {
            if (!keep[idx]) continue;
            const double a = t1.at_flat(0, idx), b = t2.at_flat(0, idx);
            const double cc = t3.at_flat(0, idx), d = t4.at_flat(0, idx);
            const double r = (a - b) - (cc - d);
            num += r * r;
            t1n += a * a;
            t2n += b * b;
            t3n += cc * cc;
            t4n += d * d;
        }
    }
    const double den = std::sqrt(std::max(std::max(t1n, t2n), std::max(t3n, t4n)));
    return den > 0.0 ? std::sqrt(num) / den : std::sqrt(num * f.cell_volume());
}

double norm_bound_probe(const geometry::StarDomain& dom, const std::vector<GridField>& family,
                        int k, double q, const BogovskiiConfig& cfg) {
    if (family.empty()) throw ConfigError("norm_bound_probe: empty family");
    if (k < 1) throw ConfigError("norm_bound_probe: k must be >= 1");
    double best = 0.0;
    bool any = false;
    for (const GridField& f : family) {
        if (f.max_abs() == 0.0) continue; // zero fields have no defined ratio
        const GridField v = apply_scaled(dom, f, cfg);
        const double num = norms::derivative_seminorm(v, q, k, k);
        const double den = norms::derivative_seminorm(f, q, k - 1, k);
        if (!(den > 0.0)) continue;
        best = std::max(best, num / den);
        any = true;
    }
    if (!any) throw ConfigError("norm_bound_probe: family contains only zero fields");
    return best;
}

} // namespace presslab::bogovskii
