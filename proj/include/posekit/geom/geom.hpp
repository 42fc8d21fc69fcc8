//
// Project PoseKit - Copyright 2026 The PoseKit Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef POSEKIT_GEOM_GEOM_HPP_
#define POSEKIT_GEOM_GEOM_HPP_

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

#include "posekit/core/types.hpp"

namespace posekit {

// Proper rigid motion: r -> R r + t.
struct RigidTransform {
  std::array<std::array<double, 3>, 3> rotation{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  Vec3 translation;

  Vec3 apply(const Vec3 &p) const {
    return {rotation[0][0] * p.x + rotation[0][1] * p.y + rotation[0][2] * p.z + translation.x,
            rotation[1][0] * p.x + rotation[1][1] * p.y + rotation[1][2] * p.z + translation.y,
            rotation[2][0] * p.x + rotation[2][1] * p.y + rotation[2][2] * p.z + translation.z};
  }

  bool is_proper_rotation(double tol = 1e-9) const;
};

struct SuperposeResult {
  RigidTransform transform;  // maps `moving` onto `target`
  double rmsd = 0.0;         // residual after applying the transform, Angstrom
};

// Kabsch superposition over proper rotations and translations. Requires
// >= 3 points per list, equal lengths, and a point set of rank >= 2
// (not all collinear). Reflections are unreachable by construction.
SuperposeResult kabsch_superpose(const std::vector<Vec3> &moving,
                                 const std::vector<Vec3> &target);

struct PlaneFit {
  Vec3 normal;             // unit length
  double offset = 0.0;     // plane is {p : normal . p = offset}
  double max_deviation = 0.0;
};

// Least-squares plane through >= 3 points; errors when all points coincide.
PlaneFit fit_plane(const std::vector<Vec3> &points);

struct MinDistanceResult {
  double distance = 0.0;
  std::size_t index_a = 0;
  std::size_t index_b = 0;
};

// Exact minimum over the cross product of the two sets; ties broken by the
// lowest (i, j). Switches from brute force to a uniform spatial hash grid
// when both sets exceed 256 points.
MinDistanceResult min_pairwise_distance(const std::vector<Vec3> &a,
                                        const std::vector<Vec3> &b);

// All (i, j) cross pairs with distance <= cutoff, via a spatial hash grid
// with cell size = cutoff. Pair order is deterministic (ascending i, then j).
std::vector<std::pair<std::size_t, std::size_t>>
pairs_within(const std::vector<Vec3> &a, const std::vector<Vec3> &b, double cutoff);

}  // namespace posekit

#endif  // POSEKIT_GEOM_GEOM_HPP_
