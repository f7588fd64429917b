#include "sfcm/engines.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "random.hpp"
#include "sfcm/core.hpp"
#include "sfcm/error.hpp"
#include "sfcm/spatial.hpp"

namespace sfcm {

std::string_view algorithm_name(Algorithm algo) {
    switch (algo) {
        case Algorithm::kmeans: return "kmeans";
        case Algorithm::fcm: return "fcm";
        case Algorithm::sfcm: return "sfcm";
    }
    return "unknown";
}

Initialization init_centroids(const ClusterParams& params, const FeatureVector& features, int bit_depth) {
    params.validate();
    if (features.empty()) throw ContractViolation("cannot initialize centroids from no features");

    if (const auto* list = std::get_if<ExplicitInit>(&params.init)) {
        const double max = static_cast<double>(bit_depth_max(bit_depth));
        std::vector<double> values;
        values.reserve(list->values.size());
        for (double raw : list->values) {
            if (!(raw >= 0.0 && raw <= max)) {
                throw ParameterError("initial centroid " + std::to_string(raw) + " outside [0, " +
                                     std::to_string(static_cast<long>(max)) + "]");
            }
            values.push_back(raw / max);
        }
        return {Centroids(std::move(values)), false};
    }

    const auto [lo, hi] = std::minmax_element(features.begin(), features.end());
    const std::set<double> distinct(features.begin(), features.end());
    const bool allow_duplicates = distinct.size() < params.clusters;

    detail::Rng rng(params.seed);
    std::vector<double> values;
    values.reserve(params.clusters);
    const std::size_t max_attempts = 1000 * params.clusters;
    std::size_t attempts = 0;
    while (values.size() < params.clusters) {
        const double v = *lo + detail::unit_uniform(rng) * (*hi - *lo);
        const bool dup = std::find(values.begin(), values.end(), v) != values.end();
        if (dup && !allow_duplicates && ++attempts < max_attempts) continue;
        values.push_back(v);
    }
    std::sort(values.begin(), values.end());
    return {Centroids(std::move(values)), allow_duplicates};
}

std::vector<Label> kmeans_assign(const FeatureVector& features, const Centroids& centroids) {
    if (centroids.empty()) throw ContractViolation("no centroids");
    std::vector<Label> labels(features.size());
    for (std::size_t i = 0; i < features.size(); ++i) {
        Label best = 0;
        double best_d = std::abs(features[i] - centroids[0]);
        for (std::size_t j = 1; j < centroids.size(); ++j) {
            const double d = std::abs(features[i] - centroids[j]);
            if (d < best_d) {
                best_d = d;
                best = static_cast<Label>(j);
            }
        }
        labels[i] = best;
    }
    return labels;
}

Centroids kmeans_update(const FeatureVector& features, std::span<const Label> labels,
                        const Centroids& previous) {
    if (labels.size() != features.size()) throw ContractViolation("label count does not match features");
    const std::size_t c = previous.size();
    std::vector<double> sum(c, 0.0);
    std::vector<std::size_t> count(c, 0);
    for (std::size_t i = 0; i < features.size(); ++i) {
        if (labels[i] >= c) throw ContractViolation("label out of range");
        sum[labels[i]] += features[i];
        ++count[labels[i]];
    }
    Centroids out = previous;
    for (std::size_t j = 0; j < c; ++j) {
        if (count[j] > 0) out[j] = sum[j] / static_cast<double>(count[j]);
    }
    return out;
}

LabelMap defuzzify(const MembershipMatrix& u, std::size_t width, std::size_t height) {
    if (u.rows() != width * height) throw ContractViolation("membership rows do not match image size");
    LabelMap out{width, height, std::vector<Label>(u.rows())};
    for (std::size_t i = 0; i < u.rows(); ++i) {
        const auto row = u.row(i);
        // max_element returns the first maximum, which is the lowest index
        out.labels[i] = static_cast<Label>(std::max_element(row.begin(), row.end()) - row.begin());
    }
    return out;
}

double max_abs_delta(const MembershipMatrix& prev, const MembershipMatrix& next) {
    if (prev.rows() != next.rows() || prev.cols() != next.cols()) {
        throw ContractViolation("membership shapes differ");
    }
    double delta = 0.0;
    const auto a = prev.data();
    const auto b = next.data();
    for (std::size_t k = 0; k < a.size(); ++k) delta = std::max(delta, std::abs(b[k] - a[k]));
    return delta;
}

bool converged(const MembershipMatrix& prev, const MembershipMatrix& next, double epsilon) {
    return max_abs_delta(prev, next) < epsilon;
}

namespace {

void check_inputs(const FeatureVector& features, std::size_t width, std::size_t height,
                  const ClusterParams& params, const Initialization& init) {
    params.validate();
    if (features.empty() || features.size() != width * height) {
        throw ContractViolation("feature count does not match image dimensions");
    }
    if (init.centroids.size() != params.clusters) {
        throw ContractViolation("initial centroid count does not match clusters");
    }
}

// Shared FCM/SFCM driver. Iteration 0 derives memberships from the initial
// centroids; each counted iteration starts with a centroid update.
SegmentationResult fuzzy_iterate(const FeatureVector& x, std::size_t width, std::size_t height,
                                 const ClusterParams& params, const Initialization& init, bool spatial) {
    check_inputs(x, width, height, params, init);
    const double m = params.fuzziness;
    if (spatial && params.membership_exponent == 0.0 && params.spatial_exponent == 0.0) {
        throw ParameterError("exponents p and q must not both be 0");
    }

    SegmentationResult result;
    result.params = params;
    result.diagnostics.duplicate_init = init.duplicate_warning;

    auto memberships_for = [&](const Centroids& centroids, DistanceMatrix& dist) {
        dist = distance_matrix(x, centroids);
        auto u = update_membership(dist, m);
        if (!spatial) return u;
        const auto h = spatial_function(u, width, height, params.radius);
        auto mod = modulate(u, h, params.membership_exponent, params.spatial_exponent);
        result.diagnostics.modulation_fallback_rows += mod.fallback_rows;
        return std::move(mod.memberships);
    };

    Centroids centroids = init.centroids;
    DistanceMatrix dist;
    MembershipMatrix u = memberships_for(centroids, dist);

    for (std::size_t t = 1; t <= params.max_iter; ++t) {
        centroids = update_centroids(x, u, m);
        MembershipMatrix next = memberships_for(centroids, dist);
        const double delta = max_abs_delta(u, next);
        result.trace.push_back({t, objective(dist, next, m), delta});
        result.iterations_run = t;
        u = std::move(next);
        if (delta < params.epsilon) {
            result.converged = true;
            break;
        }
    }

    result.labels = defuzzify(u, width, height);
    result.centroids = std::move(centroids);
    result.memberships = std::move(u);
    return result;
}

}  // namespace

SegmentationResult run_kmeans(const FeatureVector& x, std::size_t width, std::size_t height,
                              const ClusterParams& params, const Initialization& init) {
    check_inputs(x, width, height, params, init);

    SegmentationResult result;
    result.params = params;
    result.diagnostics.duplicate_init = init.duplicate_warning;

    Centroids centroids = init.centroids;
    std::vector<Label> labels;
    for (std::size_t t = 1; t <= params.max_iter; ++t) {
        auto next_labels = kmeans_assign(x, centroids);
        auto next = kmeans_update(x, next_labels, centroids);

        double movement = 0.0;
        for (std::size_t j = 0; j < next.size(); ++j) {
            movement = std::max(movement, std::abs(next[j] - centroids[j]));
        }
        double wcss = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double d = x[i] - next[next_labels[i]];
            wcss += d * d;
        }
        result.trace.push_back({t, wcss, movement});
        result.iterations_run = t;

        const bool stable = labels == next_labels;
        labels = std::move(next_labels);
        centroids = std::move(next);
        if (stable || movement < params.epsilon) {
            result.converged = true;
            break;
        }
    }

    result.labels = LabelMap{width, height, std::move(labels)};
    result.centroids = std::move(centroids);
    return result;
}

SegmentationResult run_fcm(const FeatureVector& x, std::size_t width, std::size_t height,
                           const ClusterParams& params, const Initialization& init) {
    return fuzzy_iterate(x, width, height, params, init, false);
}

SegmentationResult run_sfcm(const FeatureVector& x, std::size_t width, std::size_t height,
                            const ClusterParams& params, const Initialization& init) {
    return fuzzy_iterate(x, width, height, params, init, true);
}

SegmentationResult run(Algorithm algo, const FeatureVector& x, std::size_t width, std::size_t height,
                       const ClusterParams& params, const Initialization& init) {
    switch (algo) {
        case Algorithm::kmeans: return run_kmeans(x, width, height, params, init);
        case Algorithm::fcm: return run_fcm(x, width, height, params, init);
        case Algorithm::sfcm: return run_sfcm(x, width, height, params, init);
    }
    throw ParameterError("unknown algorithm");
}

SegmentationResult run(Algorithm algo, const ImageGrid& image, const ClusterParams& params) {
    const auto x = normalize_intensities(image);
    const auto init = init_centroids(params, x, image.bit_depth);
    return run(algo, x, image.width, image.height, params, init);
}

SegmentationResult run_kmeans(const ImageGrid& image, const ClusterParams& params) {
    return run(Algorithm::kmeans, image, params);
}

SegmentationResult run_fcm(const ImageGrid& image, const ClusterParams& params) {
    return run(Algorithm::fcm, image, params);
}

SegmentationResult run_sfcm(const ImageGrid& image, const ClusterParams& params) {
    return run(Algorithm::sfcm, image, params);
}

}  // namespace sfcm
