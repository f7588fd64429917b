#ifndef SFCM_SPATIAL_HPP
#define SFCM_SPATIAL_HPP

#include <cstddef>
#include <vector>

#include "sfcm/types.hpp"

namespace sfcm {

/// Row-major indices of the (2r+1)x(2r+1) window around idx, clipped at the
/// borders, center included, ascending.
std::vector<std::size_t> window_indices(std::size_t idx, std::size_t width, std::size_t height,
                                        std::size_t radius);

/// h_ij = sum of u_kj over the window of pixel i.
SpatialMatrix spatial_function(const MembershipMatrix& u, std::size_t width, std::size_t height,
                               std::size_t radius);

struct Modulation {
    MembershipMatrix memberships;
    /// Rows whose weights all underflowed to zero; those rows keep the input memberships.
    std::size_t fallback_rows = 0;
};

/// u'_ij = u_ij^p h_ij^q / sum_k u_ik^p h_ik^q.
///
/// p = 1, q = 0 returns the input unchanged, bit for bit.
Modulation modulate(const MembershipMatrix& u, const SpatialMatrix& h, double p, double q);

}  // namespace sfcm

#endif  // SFCM_SPATIAL_HPP
