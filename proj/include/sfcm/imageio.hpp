#ifndef SFCM_IMAGEIO_HPP
#define SFCM_IMAGEIO_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sfcm/types.hpp"

namespace sfcm {

/// Decodes binary PGM (P5, maxval 255 or 65535, 16-bit big-endian) or a
/// single-channel 8/16-bit PNG. Format is detected from the leading bytes.
ImageGrid load_grayscale(std::span<const std::uint8_t> bytes);
ImageGrid load_grayscale_file(const std::filesystem::path& path);

/// P5 with maxval 255 or 65535 according to the image's bit depth.
void save_pgm(const ImageGrid& image, std::ostream& out);

/// P5, maxval 255, value = floor(label * 255 / (c - 1)). Requires 2 <= c <= 256.
void save_label_map(const LabelMap& labels, std::size_t c, std::ostream& out);

/// Inverse of save_label_map's quantization.
LabelMap labels_from_quantized(const ImageGrid& image, std::size_t c);

/// Ranks the distinct gray levels of an image: darkest -> 0, next -> 1, ...
/// Reads truth maps without knowing how many classes they were written with.
LabelMap labels_from_gray_levels(const ImageGrid& image);

using Rgb = std::array<std::uint8_t, 3>;

class Palette {
public:
    /// Throws ParameterError if any two entries coincide.
    explicit Palette(std::vector<Rgb> colors);

    /// Deterministic palette of `size` distinct colors.
    static Palette make_default(std::size_t size);

    std::size_t size() const noexcept { return colors_.size(); }
    const Rgb& operator[](std::size_t i) const { return colors_[i]; }

private:
    std::vector<Rgb> colors_;
};

/// P6, maxval 255, pixel = palette[label].
void save_pseudocolor(const LabelMap& labels, const Palette& palette, std::ostream& out);

/// Header "iteration,objective,max_delta", LF line endings. The objective
/// carries 9 significant digits, max_delta 9 decimal places, both without exponents.
void write_convergence_csv(const ObjectiveTrace& trace, std::ostream& out);

/// `value` in plain decimal with `digits` significant digits.
std::string format_significant(double value, int digits);

/// Shortest round-tripping representation in plain decimal (never an exponent).
std::string format_decimal(double value);

/// Runs `writer` on `path` opened for binary output; failures raise IoError.
void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& writer);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);

}  // namespace sfcm

#endif  // SFCM_IMAGEIO_HPP
