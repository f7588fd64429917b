#ifndef SFCM_ENGINES_HPP
#define SFCM_ENGINES_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sfcm/types.hpp"

namespace sfcm {

enum class Algorithm { kmeans, fcm, sfcm };

std::string_view algorithm_name(Algorithm algo);

struct Initialization {
    Centroids centroids;
    /// Set when the data had fewer distinct values than clusters, so a random
    /// draw could not be made distinct.
    bool duplicate_warning = false;
};

struct Diagnostics {
    bool duplicate_init = false;
    /// Total rows, over all iterations, where spatial modulation fell back to raw memberships.
    std::size_t modulation_fallback_rows = 0;

    friend bool operator==(const Diagnostics&, const Diagnostics&) = default;
};

struct SegmentationResult {
    LabelMap labels;
    Centroids centroids;
    std::optional<MembershipMatrix> memberships;  // absent for k-means
    ObjectiveTrace trace;
    std::size_t iterations_run = 0;
    bool converged = false;
    ClusterParams params;
    Diagnostics diagnostics;

    friend bool operator==(const SegmentationResult&, const SegmentationResult&) = default;
};

/// Explicit lists are divided by the bit-depth maximum; random draws are
/// uniform over [min(x), max(x)], distinct when possible, sorted ascending.
Initialization init_centroids(const ClusterParams& params, const FeatureVector& features, int bit_depth);

/// Nearest centroid per feature, ties to the lowest index.
std::vector<Label> kmeans_assign(const FeatureVector& features, const Centroids& centroids);

/// Cluster means; an empty cluster keeps its entry from `previous`.
Centroids kmeans_update(const FeatureVector& features, std::span<const Label> labels,
                        const Centroids& previous);

/// Per-pixel argmax, ties to the lowest index.
LabelMap defuzzify(const MembershipMatrix& u, std::size_t width, std::size_t height);

double max_abs_delta(const MembershipMatrix& prev, const MembershipMatrix& next);

/// True iff max |next - prev| < epsilon. Throws ContractViolation on shape mismatch.
bool converged(const MembershipMatrix& prev, const MembershipMatrix& next, double epsilon);

SegmentationResult run_kmeans(const ImageGrid& image, const ClusterParams& params);
SegmentationResult run_fcm(const ImageGrid& image, const ClusterParams& params);
SegmentationResult run_sfcm(const ImageGrid& image, const ClusterParams& params);

SegmentationResult run(Algorithm algo, const ImageGrid& image, const ClusterParams& params);

// Feature-space entry points. `init` supplies the starting centroids, which
// lets several algorithms share one initialization; params.init is ignored.
SegmentationResult run_kmeans(const FeatureVector& features, std::size_t width, std::size_t height,
                              const ClusterParams& params, const Initialization& init);
SegmentationResult run_fcm(const FeatureVector& features, std::size_t width, std::size_t height,
                           const ClusterParams& params, const Initialization& init);
SegmentationResult run_sfcm(const FeatureVector& features, std::size_t width, std::size_t height,
                            const ClusterParams& params, const Initialization& init);

SegmentationResult run(Algorithm algo, const FeatureVector& features, std::size_t width,
                       std::size_t height, const ClusterParams& params, const Initialization& init);

}  // namespace sfcm

#endif  // SFCM_ENGINES_HPP
