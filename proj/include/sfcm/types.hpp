#ifndef SFCM_TYPES_HPP
#define SFCM_TYPES_HPP

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace sfcm {

/// 2-D grayscale raster, row-major. Samples are raw integers in [0, 2^bit_depth - 1].
struct ImageGrid {
    std::size_t width = 0;
    std::size_t height = 0;
    int bit_depth = 8;
    std::vector<std::uint16_t> samples;

    /// Builds a grid and checks every invariant; throws ParameterError on violation.
    static ImageGrid create(std::size_t width, std::size_t height, int bit_depth,
                            std::vector<std::uint16_t> samples);

    std::size_t size() const noexcept { return samples.size(); }
    std::uint32_t max_value() const noexcept { return (1u << bit_depth) - 1u; }

    friend bool operator==(const ImageGrid&, const ImageGrid&) = default;
};

/// Maximum representable sample for a bit depth (255 or 65535).
std::uint32_t bit_depth_max(int bit_depth);

/// A sequence of reals tagged with its role so features and centroids do not mix.
template <class Tag>
struct Series {
    std::vector<double> values;

    Series() = default;
    explicit Series(std::vector<double> v) : values(std::move(v)) {}
    Series(std::initializer_list<double> v) : values(v) {}

    std::size_t size() const noexcept { return values.size(); }
    bool empty() const noexcept { return values.empty(); }
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
    auto begin() const noexcept { return values.begin(); }
    auto end() const noexcept { return values.end(); }
    std::span<const double> view() const noexcept { return values; }

    friend bool operator==(const Series&, const Series&) = default;
};

struct FeatureTag;
struct CentroidTag;

/// Normalized intensities x_i in [0, 1], one per pixel.
using FeatureVector = Series<FeatureTag>;
/// Cluster centers in normalized intensity space.
using Centroids = Series<CentroidTag>;

/// Dense row-major n x c matrix; the tag distinguishes distances, memberships
/// and spatial sums.
template <class Tag>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    std::span<const double> data() const noexcept { return data_; }
    std::span<double> data() noexcept { return data_; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

struct DistanceTag;
struct MembershipTag;
struct SpatialTag;

/// d_ij = |x_i - c_j|.
using DistanceMatrix = Matrix<DistanceTag>;
/// Row-stochastic degrees of membership.
using MembershipMatrix = Matrix<MembershipTag>;
/// Per-pixel window sums of memberships.
using SpatialMatrix = Matrix<SpatialTag>;

using Label = std::uint32_t;

struct LabelMap {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<Label> labels;

    std::size_t size() const noexcept { return labels.size(); }

    friend bool operator==(const LabelMap&, const LabelMap&) = default;
};

struct TraceRecord {
    std::size_t iteration = 0;
    double objective = 0.0;
    double max_delta = 0.0;

    friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

using ObjectiveTrace = std::vector<TraceRecord>;

/// Draw c centroids uniformly from the feature range using the seed.
struct RandomInit {
    friend bool operator==(const RandomInit&, const RandomInit&) = default;
};

/// Centroids given in raw intensity units (e.g. 25, 50, ... for 8-bit data).
struct ExplicitInit {
    std::vector<double> values;
    friend bool operator==(const ExplicitInit&, const ExplicitInit&) = default;
};

using CentroidInit = std::variant<RandomInit, ExplicitInit>;

struct ClusterParams {
    std::size_t clusters = 2;
    double fuzziness = 2.0;            // m
    double membership_exponent = 1.0;  // p
    double spatial_exponent = 1.0;     // q
    std::size_t radius = 1;
    double epsilon = 1e-5;
    std::size_t max_iter = 100;
    CentroidInit init = RandomInit{};
    std::uint64_t seed = 0;

    /// Throws ParameterError naming the offending knob.
    void validate() const;

    friend bool operator==(const ClusterParams&, const ClusterParams&) = default;
};

}  // namespace sfcm

#endif  // SFCM_TYPES_HPP
