#ifndef SFCM_CORE_HPP
#define SFCM_CORE_HPP

#include "sfcm/types.hpp"

namespace sfcm {

/// values[i] = samples[i] / (2^bit_depth - 1).
FeatureVector normalize_intensities(const ImageGrid& image);

DistanceMatrix distance_matrix(const FeatureVector& features, const Centroids& centroids);

/// Fuzzy membership from distance ratios with exponent 2/(m-1).
///
/// A row containing zero distances puts all of its mass on those clusters,
/// split equally, and zero elsewhere (the d -> 0 limit of the ratio form).
MembershipMatrix update_membership(const DistanceMatrix& dist, double m);

/// Weighted means c_j = sum_i u_ij^m x_i / sum_i u_ij^m.
///
/// Throws DegenerateClusterError when a column's weights sum to zero.
Centroids update_centroids(const FeatureVector& features, const MembershipMatrix& u, double m);

/// J_m = sum_i sum_j u_ij^m d_ij^2.
double objective(const DistanceMatrix& dist, const MembershipMatrix& u, double m);

}  // namespace sfcm

#endif  // SFCM_CORE_HPP
