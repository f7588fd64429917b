#include "sfcm/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sfcm/error.hpp"

namespace sfcm {

std::uint32_t bit_depth_max(int bit_depth) {
    if (bit_depth != 8 && bit_depth != 16) {
        throw ParameterError("bit depth must be 8 or 16, got " + std::to_string(bit_depth));
    }
    return (1u << bit_depth) - 1u;
}

ImageGrid ImageGrid::create(std::size_t width, std::size_t height, int bit_depth,
                            std::vector<std::uint16_t> samples) {
    const auto max = bit_depth_max(bit_depth);
    if (width == 0 || height == 0) {
        throw ParameterError("image dimensions must be positive");
    }
    if (samples.size() != width * height) {
        throw ParameterError("sample count " + std::to_string(samples.size()) + " does not match " +
                             std::to_string(width) + "x" + std::to_string(height));
    }
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples[i] > max) {
            throw ParameterError("sample " + std::to_string(i) + " exceeds maximum " + std::to_string(max));
        }
    }
    return ImageGrid{width, height, bit_depth, std::move(samples)};
}

void ClusterParams::validate() const {
    if (clusters < 1) throw ParameterError("clusters must be at least 1");
    if (!(fuzziness > 1.0) || !std::isfinite(fuzziness)) {
        throw ParameterError("fuzziness must be a finite value > 1");
    }
    if (!(membership_exponent >= 0.0) || !std::isfinite(membership_exponent)) {
        throw ParameterError("membership exponent p must be >= 0");
    }
    if (!(spatial_exponent >= 0.0) || !std::isfinite(spatial_exponent)) {
        throw ParameterError("spatial exponent q must be >= 0");
    }
    if (radius < 1) throw ParameterError("window radius must be at least 1");
    if (!(epsilon > 0.0)) throw ParameterError("epsilon must be > 0");
    if (max_iter < 1) throw ParameterError("max_iter must be at least 1");
    if (const auto* list = std::get_if<ExplicitInit>(&init); list && list->values.size() != clusters) {
        throw ParameterError("explicit init has " + std::to_string(list->values.size()) +
                             " entries but clusters = " + std::to_string(clusters));
    }
}

FeatureVector normalize_intensities(const ImageGrid& image) {
    const double scale = static_cast<double>(bit_depth_max(image.bit_depth));
    std::vector<double> values(image.samples.size());
    std::transform(image.samples.begin(), image.samples.end(), values.begin(),
                   [scale](std::uint16_t s) { return static_cast<double>(s) / scale; });
    return FeatureVector(std::move(values));
}

DistanceMatrix distance_matrix(const FeatureVector& features, const Centroids& centroids) {
    DistanceMatrix d(features.size(), centroids.size());
    for (std::size_t i = 0; i < features.size(); ++i) {
        auto row = d.row(i);
        for (std::size_t j = 0; j < centroids.size(); ++j) {
            row[j] = std::abs(features[i] - centroids[j]);
        }
    }
    return d;
}

MembershipMatrix update_membership(const DistanceMatrix& dist, double m) {
    if (!(m > 1.0)) throw ParameterError("fuzziness must be > 1");
    const double exponent = 2.0 / (m - 1.0);
    const std::size_t c = dist.cols();
    MembershipMatrix u(dist.rows(), c);

    for (std::size_t i = 0; i < dist.rows(); ++i) {
        const auto d = dist.row(i);
        auto out = u.row(i);

        const auto zeros = static_cast<std::size_t>(std::count(d.begin(), d.end(), 0.0));
        if (zeros > 0) {
            const double share = 1.0 / static_cast<double>(zeros);
            for (std::size_t j = 0; j < c; ++j) out[j] = d[j] == 0.0 ? share : 0.0;
            continue;
        }

        for (std::size_t j = 0; j < c; ++j) {
            double sum = 0.0;
            for (std::size_t k = 0; k < c; ++k) sum += std::pow(d[j] / d[k], exponent);
            out[j] = 1.0 / sum;
        }
    }
    return u;
}

Centroids update_centroids(const FeatureVector& features, const MembershipMatrix& u, double m) {
    if (u.rows() != features.size()) {
        throw ContractViolation("membership rows do not match feature count");
    }
    if (features.empty()) throw ContractViolation("no features");

    const auto [lo, hi] = std::minmax_element(features.begin(), features.end());
    const std::size_t c = u.cols();
    std::vector<double> num(c, 0.0);
    std::vector<double> den(c, 0.0);
    for (std::size_t i = 0; i < features.size(); ++i) {
        const auto row = u.row(i);
        for (std::size_t j = 0; j < c; ++j) {
            const double w = std::pow(row[j], m);
            num[j] += w * features[i];
            den[j] += w;
        }
    }

    std::vector<double> out(c);
    for (std::size_t j = 0; j < c; ++j) {
        if (!(den[j] > 0.0)) throw DegenerateClusterError(j);
        // rounding may nudge a weighted mean just outside the data range
        out[j] = std::clamp(num[j] / den[j], *lo, *hi);
    }
    return Centroids(std::move(out));
}

double objective(const DistanceMatrix& dist, const MembershipMatrix& u, double m) {
    if (dist.rows() != u.rows() || dist.cols() != u.cols()) {
        throw ContractViolation("distance and membership shapes differ");
    }
    double j = 0.0;
    for (std::size_t i = 0; i < dist.rows(); ++i) {
        const auto d = dist.row(i);
        const auto w = u.row(i);
        for (std::size_t k = 0; k < dist.cols(); ++k) j += std::pow(w[k], m) * d[k] * d[k];
    }
    return j;
}

}  // namespace sfcm
