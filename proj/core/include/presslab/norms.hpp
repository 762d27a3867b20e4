#pragma once

#include <limits>

#include "presslab/grid.hpp"

namespace presslab::norms {

/// Selects the mixed norm L^s(0,T; W^{k,q}). s may be infinity.
struct NormSpec {
    double s = 2.0;
    double q = 2.0;
    int k = 0;

    static constexpr double inf = std::numeric_limits<double>::infinity();
    void validate() const;
};

/// Discrete W^{k,q} norm: (sum_{|alpha| <= k} ||D^alpha f||_q^q)^{1/q} with
/// repeated centered differences, counted over the full derivative tensor
/// (all n^j axis sequences at order j). All terms integrate over the mask
/// eroded by k cells so refinements stay comparable.
double sobolev_norm(const GridField& field, double q, int k);

/// Seminorm of just the order-k derivative tensor (the ||grad^k f||_q piece),
/// over the mask eroded by `erode` cells (defaults to k).
double derivative_seminorm(const GridField& field, double q, int k, int erode = -1);

/// L^s(0,T; W^{k,q}) norm: right-endpoint time quadrature over slices
/// 1..M (slice 0 is t = 0), or the max slice norm when s = infinity.
double bochner_norm(const SpaceTimeField& field, const NormSpec& spec);

/// Cell-volume-weighted average of a scalar field over the masked region
/// (optionally further restricted). Throws on an empty region.
double mean_value(const GridField& field, const std::vector<uint8_t>& region = {});

/// The Theorem-1 ratio ||grad^{k+1} p||_{L^s L^q} / ||f||_{L^s W^{k,q}}.
/// Throws ConfigError when the denominator vanishes.
double estimate_ratio(const SpaceTimeField& p, const SpaceTimeField& f, const NormSpec& spec);

} // namespace presslab::norms
