#include "sfcm/spatial.hpp"

#include <algorithm>
#include <cmath>

#include "sfcm/error.hpp"

namespace sfcm {

namespace {

struct Span1D {
    std::size_t begin;
    std::size_t end;  // exclusive
};

Span1D clip(std::size_t center, std::size_t radius, std::size_t extent) {
    return {center > radius ? center - radius : 0, std::min(extent, center + radius + 1)};
}

}  // namespace

std::vector<std::size_t> window_indices(std::size_t idx, std::size_t width, std::size_t height,
                                        std::size_t radius) {
    if (idx >= width * height) throw ContractViolation("pixel index out of range");
    const auto rows = clip(idx / width, radius, height);
    const auto cols = clip(idx % width, radius, width);
    std::vector<std::size_t> out;
    out.reserve((rows.end - rows.begin) * (cols.end - cols.begin));
    for (std::size_t y = rows.begin; y < rows.end; ++y) {
        for (std::size_t x = cols.begin; x < cols.end; ++x) out.push_back(y * width + x);
    }
    return out;
}

SpatialMatrix spatial_function(const MembershipMatrix& u, std::size_t width, std::size_t height,
                               std::size_t radius) {
    if (u.rows() != width * height) {
        throw ContractViolation("membership rows do not match image size");
    }
    const std::size_t c = u.cols();
    SpatialMatrix h(u.rows(), c);
    for (std::size_t y = 0; y < height; ++y) {
        const auto rows = clip(y, radius, height);
        for (std::size_t x = 0; x < width; ++x) {
            const auto cols = clip(x, radius, width);
            auto out = h.row(y * width + x);
            for (std::size_t wy = rows.begin; wy < rows.end; ++wy) {
                for (std::size_t wx = cols.begin; wx < cols.end; ++wx) {
                    const auto src = u.row(wy * width + wx);
                    for (std::size_t j = 0; j < c; ++j) out[j] += src[j];
                }
            }
        }
    }
    return h;
}

Modulation modulate(const MembershipMatrix& u, const SpatialMatrix& h, double p, double q) {
    if (u.rows() != h.rows() || u.cols() != h.cols()) {
        throw ContractViolation("membership and spatial shapes differ");
    }
    if (!(p >= 0.0) || !(q >= 0.0)) throw ParameterError("exponents p and q must be >= 0");
    if (p == 0.0 && q == 0.0) throw ParameterError("exponents p and q must not both be 0");

    Modulation result{u, 0};
    if (p == 1.0 && q == 0.0) return result;

    const std::size_t c = u.cols();
    std::vector<double> weights(c);
    for (std::size_t i = 0; i < u.rows(); ++i) {
        const auto mu = u.row(i);
        const auto hi = h.row(i);
        double sum = 0.0;
        for (std::size_t j = 0; j < c; ++j) {
            weights[j] = std::pow(mu[j], p) * std::pow(hi[j], q);
            sum += weights[j];
        }
        if (!(sum > 0.0) || !std::isfinite(sum)) {
            ++result.fallback_rows;
            continue;
        }
        auto out = result.memberships.row(i);
        for (std::size_t j = 0; j < c; ++j) out[j] = weights[j] / sum;
    }
    return result;
}

}  // namespace sfcm
