#include "sfcm/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <set>
#include <string>

#include "random.hpp"
#include "sfcm/error.hpp"
#include "sfcm/spatial.hpp"

namespace sfcm {

namespace {

constexpr std::size_t kMaxMatchedClusters = 8;

void validate_noise(const NoiseModel& noise) {
    if (const auto* salt = std::get_if<SaltNoise>(&noise)) {
        if (!(salt->fraction >= 0.0 && salt->fraction < 1.0)) {
            throw ParameterError("salt fraction must be in [0, 1)");
        }
    } else if (const auto* gauss = std::get_if<GaussianNoise>(&noise)) {
        if (!(gauss->sigma >= 0.0) || !std::isfinite(gauss->sigma)) {
            throw ParameterError("gaussian sigma must be >= 0");
        }
    }
}

bool covers(const RegionShape& shape, std::size_t x, std::size_t y, std::size_t width, std::size_t height) {
    if (const auto* band = std::get_if<HorizontalBand>(&shape)) {
        return y >= band->row_begin && y < band->row_end;
    }
    const auto& disc = std::get<CenteredDisc>(shape);
    const double dx = (static_cast<double>(x) + 0.5) - static_cast<double>(width) / 2.0;
    const double dy = (static_cast<double>(y) + 0.5) - static_cast<double>(height) / 2.0;
    return std::hypot(dx, dy) <= disc.radius;
}

// Box-Muller on the portable uniform source.
double standard_normal(detail::Rng& rng) {
    const double u1 = 1.0 - detail::unit_uniform(rng);  // (0, 1]
    const double u2 = detail::unit_uniform(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace

PhantomSpec band_phantom(std::size_t width, std::size_t height, std::span<const std::uint8_t> intensities,
                         NoiseModel noise, std::uint64_t seed) {
    PhantomSpec spec{width, height, {}, noise, seed};
    const std::size_t n = intensities.size();
    for (std::size_t k = 0; k < n; ++k) {
        spec.regions.push_back({HorizontalBand{k * height / n, (k + 1) * height / n}, intensities[k]});
    }
    return spec;
}

PhantomSpec disc_phantom(std::size_t width, std::size_t height, std::uint8_t background,
                         std::span<const std::pair<double, std::uint8_t>> discs, NoiseModel noise,
                         std::uint64_t seed) {
    PhantomSpec spec{width, height, {}, noise, seed};
    const double frame = std::hypot(static_cast<double>(width), static_cast<double>(height));
    spec.regions.push_back({CenteredDisc{frame}, background});
    for (const auto& [radius, intensity] : discs) spec.regions.push_back({CenteredDisc{radius}, intensity});
    return spec;
}

Phantom generate_phantom(const PhantomSpec& spec) {
    if (spec.regions.empty()) throw ParameterError("phantom needs at least one region");
    if (spec.width == 0 || spec.height == 0) throw ParameterError("phantom dimensions must be positive");
    std::set<std::uint8_t> seen;
    for (const auto& r : spec.regions) {
        if (!seen.insert(r.intensity).second) {
            throw ParameterError("region intensities must be distinct (" + std::to_string(r.intensity) +
                                 " repeats)");
        }
    }
    validate_noise(spec.noise);

    const std::size_t n = spec.width * spec.height;
    std::vector<std::uint16_t> samples(n);
    LabelMap truth{spec.width, spec.height, std::vector<Label>(n)};
    for (std::size_t y = 0; y < spec.height; ++y) {
        for (std::size_t x = 0; x < spec.width; ++x) {
            std::optional<std::size_t> region;
            for (std::size_t k = 0; k < spec.regions.size(); ++k) {
                if (covers(spec.regions[k].shape, x, y, spec.width, spec.height)) region = k;
            }
            if (!region) {
                throw ParameterError("pixel (" + std::to_string(x) + ", " + std::to_string(y) +
                                     ") is not covered by any region");
            }
            const std::size_t i = y * spec.width + x;
            samples[i] = spec.regions[*region].intensity;
            truth.labels[i] = static_cast<Label>(*region);
        }
    }

    auto clean = ImageGrid::create(spec.width, spec.height, 8, std::move(samples));
    return {add_noise(clean, spec.noise, spec.seed), std::move(truth)};
}

ImageGrid add_noise(const ImageGrid& image, const NoiseModel& model, std::uint64_t seed) {
    validate_noise(model);
    ImageGrid out = image;
    detail::Rng rng(seed);
    const auto max = image.max_value();

    if (const auto* salt = std::get_if<SaltNoise>(&model)) {
        if (salt->fraction == 0.0) return out;
        const double half = salt->fraction / 2.0;
        for (auto& s : out.samples) {
            const double u = detail::unit_uniform(rng);
            if (u < half) {
                s = 0;
            } else if (u < salt->fraction) {
                s = static_cast<std::uint16_t>(max);
            }
        }
    } else if (const auto* gauss = std::get_if<GaussianNoise>(&model)) {
        if (gauss->sigma == 0.0) return out;
        for (auto& s : out.samples) {
            const double v = static_cast<double>(s) + gauss->sigma * standard_normal(rng);
            s = static_cast<std::uint16_t>(std::lround(std::clamp(v, 0.0, static_cast<double>(max))));
        }
    }
    return out;
}

double misclassification_rate(const LabelMap& pred, const LabelMap& truth, std::size_t c) {
    if (c > kMaxMatchedClusters) {
        throw ParameterError("label matching supports at most " + std::to_string(kMaxMatchedClusters) +
                             " clusters, got " + std::to_string(c));
    }
    if (pred.width != truth.width || pred.height != truth.height || pred.size() != truth.size()) {
        throw ContractViolation("prediction and truth dimensions differ");
    }
    if (pred.size() == 0) return 0.0;

    std::vector<std::size_t> confusion(c * c, 0);
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (pred.labels[i] >= c || truth.labels[i] >= c) throw ContractViolation("label exceeds cluster count");
        ++confusion[pred.labels[i] * c + truth.labels[i]];
    }

    std::vector<std::size_t> perm(c);
    std::iota(perm.begin(), perm.end(), 0);
    std::size_t best = 0;
    do {
        std::size_t matched = 0;
        for (std::size_t p = 0; p < c; ++p) matched += confusion[p * c + perm[p]];
        best = std::max(best, matched);
    } while (std::next_permutation(perm.begin(), perm.end()));

    return static_cast<double>(pred.size() - best) / static_cast<double>(pred.size());
}

std::size_t isolated_pixel_count(const LabelMap& labels, std::size_t radius) {
    if (labels.size() != labels.width * labels.height) throw ContractViolation("label map size mismatch");
    std::size_t count = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto window = window_indices(i, labels.width, labels.height, radius);
        if (window.size() < 2) continue;
        const bool isolated = std::none_of(window.begin(), window.end(), [&](std::size_t k) {
            return k != i && labels.labels[k] == labels.labels[i];
        });
        if (isolated) ++count;
    }
    return count;
}

}  // namespace sfcm
