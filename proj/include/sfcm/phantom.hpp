#ifndef SFCM_PHANTOM_HPP
#define SFCM_PHANTOM_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "sfcm/types.hpp"

namespace sfcm {

/// Rows [row_begin, row_end).
struct HorizontalBand {
    std::size_t row_begin = 0;
    std::size_t row_end = 0;
};

/// Pixels whose centers lie within `radius` of the image center.
struct CenteredDisc {
    double radius = 0.0;
};

using RegionShape = std::variant<HorizontalBand, CenteredDisc>;

struct Region {
    RegionShape shape;
    std::uint8_t intensity = 0;
};

struct NoNoise {};

/// Each pixel becomes 0 or max with probability fraction/2 each.
struct SaltNoise {
    double fraction = 0.0;
};

/// Additive N(0, sigma) in intensity units, clamped and rounded.
struct GaussianNoise {
    double sigma = 0.0;
};

using NoiseModel = std::variant<NoNoise, SaltNoise, GaussianNoise>;

/// Regions are painted in order, later ones on top; every pixel must be covered.
/// The truth label of a pixel is the index of the last region painted on it.
struct PhantomSpec {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<Region> regions;
    NoiseModel noise = NoNoise{};
    std::uint64_t seed = 0;
};

struct Phantom {
    ImageGrid image;  // 8-bit
    LabelMap truth;
};

/// Equal-height horizontal bands, top to bottom, one per intensity.
PhantomSpec band_phantom(std::size_t width, std::size_t height, std::span<const std::uint8_t> intensities,
                         NoiseModel noise = NoNoise{}, std::uint64_t seed = 0);

/// A background filling the frame plus concentric discs given as (radius, intensity).
PhantomSpec disc_phantom(std::size_t width, std::size_t height, std::uint8_t background,
                         std::span<const std::pair<double, std::uint8_t>> discs,
                         NoiseModel noise = NoNoise{}, std::uint64_t seed = 0);

Phantom generate_phantom(const PhantomSpec& spec);

ImageGrid add_noise(const ImageGrid& image, const NoiseModel& model, std::uint64_t seed);

/// Smallest mismatch fraction over all relabelings of `pred`. Requires c <= 8.
double misclassification_rate(const LabelMap& pred, const LabelMap& truth, std::size_t c);

/// Pixels whose label differs from every other pixel in their clipped window.
/// A pixel with no neighbors (1x1 image) is not counted.
std::size_t isolated_pixel_count(const LabelMap& labels, std::size_t radius);

}  // namespace sfcm

#endif  // SFCM_PHANTOM_HPP
