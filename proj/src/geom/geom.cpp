//
// Project PoseKit - Copyright 2026 The PoseKit Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "posekit/geom/geom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include <Eigen/Dense>

namespace posekit {

namespace {

Eigen::Vector3d to_eigen(const Vec3 &v) { return {v.x, v.y, v.z}; }

Vec3 centroid(const std::vector<Vec3> &pts) {
  Vec3 c;
  for (const auto &p : pts)
    c += p;
  return c / static_cast<double>(pts.size());
}

}  // namespace

bool RigidTransform::is_proper_rotation(double tol) const {
  Eigen::Matrix3d r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      r(i, j) = rotation[i][j];
  return (r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < tol &&
         std::abs(r.determinant() - 1.0) < tol;
}

SuperposeResult kabsch_superpose(const std::vector<Vec3> &moving,
                                 const std::vector<Vec3> &target) {
  if (moving.size() != target.size())
    throw Error("kabsch: point lists differ in length (" + std::to_string(moving.size()) +
                " vs " + std::to_string(target.size()) + ")");
  if (moving.size() < 3)
    throw Error("kabsch: need at least 3 points");

  const Vec3 cm = centroid(moving);
  const Vec3 ct = centroid(target);

  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
  for (std::size_t i = 0; i < moving.size(); ++i)
    h += to_eigen(moving[i] - cm) * to_eigen(target[i] - ct).transpose();

  Eigen::JacobiSVD<Eigen::Matrix3d> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Vector3d s = svd.singularValues();
  // Collinear (or coincident) point sets leave the rotation underdetermined.
  if (s(1) <= 1e-12 * std::max(s(0), 1e-300) || s(0) == 0.0)
    throw Error("kabsch: degenerate point set (rank < 2)");

  Eigen::Matrix3d u = svd.matrixU();
  Eigen::Matrix3d v = svd.matrixV();
  Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
  d(2, 2) = (v * u.transpose()).determinant() < 0 ? -1.0 : 1.0;
  Eigen::Matrix3d r = v * d * u.transpose();

  RigidTransform tf;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      tf.rotation[i][j] = r(i, j);
  const Eigen::Vector3d t = to_eigen(ct) - r * to_eigen(cm);
  tf.translation = {t(0), t(1), t(2)};

  double ss = 0.0;
  for (std::size_t i = 0; i < moving.size(); ++i)
    ss += (tf.apply(moving[i]) - target[i]).squared_norm();
  return {tf, std::sqrt(ss / static_cast<double>(moving.size()))};
}

PlaneFit fit_plane(const std::vector<Vec3> &points) {
  if (points.size() < 3)
    throw Error("fit_plane: need at least 3 points");

  const Vec3 c = centroid(points);
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const auto &p : points) {
    const Eigen::Vector3d d = to_eigen(p - c);
    cov += d * d.transpose();
  }
  if (cov.trace() <= 1e-18)
    throw Error("fit_plane: all points coincident");

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
  const Eigen::Vector3d n = eig.eigenvectors().col(0);  // smallest eigenvalue

  PlaneFit fit;
  fit.normal = {n(0), n(1), n(2)};
  const double len = fit.normal.norm();
  fit.normal = fit.normal / len;
  fit.offset = fit.normal.dot(c);
  for (const auto &p : points)
    fit.max_deviation = std::max(fit.max_deviation, std::abs(fit.normal.dot(p) - fit.offset));
  return fit;
}

namespace {

struct CellKey {
  std::int64_t x, y, z;
  bool operator==(const CellKey &o) const { return x == o.x && y == o.y && z == o.z; }
};

struct CellHash {
  std::size_t operator()(const CellKey &k) const {
    std::uint64_t h = 1469598103934665603ull;
    for (std::int64_t v : {k.x, k.y, k.z}) {
      h ^= static_cast<std::uint64_t>(v);
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

class HashGrid {
public:
  HashGrid(const std::vector<Vec3> &points, double cell) : points_(points), cell_(cell) {
    cells_.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
      cells_[key_of(points[i])].push_back(i);
  }

  CellKey key_of(const Vec3 &p) const {
    return {static_cast<std::int64_t>(std::floor(p.x / cell_)),
            static_cast<std::int64_t>(std::floor(p.y / cell_)),
            static_cast<std::int64_t>(std::floor(p.z / cell_))};
  }

  const std::vector<std::size_t> *cell(const CellKey &k) const {
    auto it = cells_.find(k);
    return it == cells_.end() ? nullptr : &it->second;
  }

  double cell_size() const { return cell_; }

private:
  const std::vector<Vec3> &points_;
  double cell_;
  std::unordered_map<CellKey, std::vector<std::size_t>, CellHash> cells_;
};

void consider(const Vec3 &pa, const Vec3 &pb, std::size_t i, std::size_t j,
              MinDistanceResult &best) {
  const double d = distance(pa, pb);
  if (d < best.distance ||
      (d == best.distance && (i < best.index_a || (i == best.index_a && j < best.index_b))))
    best = {d, i, j};
}

MinDistanceResult min_distance_brute(const std::vector<Vec3> &a, const std::vector<Vec3> &b) {
  MinDistanceResult best{std::numeric_limits<double>::infinity(), 0, 0};
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      consider(a[i], b[j], i, j, best);
  return best;
}

MinDistanceResult min_distance_grid(const std::vector<Vec3> &a, const std::vector<Vec3> &b) {
  const double cell = 4.0;
  HashGrid grid(b, cell);

  Vec3 blo = b[0], bhi = b[0];
  for (const auto &p : b) {
    blo = {std::min(blo.x, p.x), std::min(blo.y, p.y), std::min(blo.z, p.z)};
    bhi = {std::max(bhi.x, p.x), std::max(bhi.y, p.y), std::max(bhi.z, p.z)};
  }
  auto bbox_distance = [&](const Vec3 &p) {
    const double dx = std::max({blo.x - p.x, 0.0, p.x - bhi.x});
    const double dy = std::max({blo.y - p.y, 0.0, p.y - bhi.y});
    const double dz = std::max({blo.z - p.z, 0.0, p.z - bhi.z});
    return std::sqrt(dx * dx + dy * dy + dz * dz);
  };

  MinDistanceResult best{std::numeric_limits<double>::infinity(), 0, 0};
  // Seed an upper bound so shell expansion can prune early.
  for (std::size_t j = 0; j < b.size(); ++j)
    consider(a[0], b[j], 0, j, best);

  for (std::size_t i = 0; i < a.size(); ++i) {
    const double lower = bbox_distance(a[i]);
    if (lower > best.distance)
      continue;
    const CellKey center = grid.key_of(a[i]);
    // Any point in a cell at Chebyshev shell k is at least (k-1)*cell away,
    // so shells beyond best/cell + 1 cannot improve (or tie) the result.
    const auto max_shell =
        static_cast<std::int64_t>(std::floor(best.distance / cell)) + 1;
    const auto first_shell =
        std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(lower / cell)) - 1);
    for (std::int64_t k = first_shell; k <= max_shell; ++k) {
      if (static_cast<double>(k - 1) * cell > best.distance)
        break;
      for (std::int64_t dx = -k; dx <= k; ++dx) {
        for (std::int64_t dy = -k; dy <= k; ++dy) {
          for (std::int64_t dz = -k; dz <= k; ++dz) {
            if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) != k)
              continue;
            const auto *cellpts = grid.cell({center.x + dx, center.y + dy, center.z + dz});
            if (cellpts == nullptr)
              continue;
            for (std::size_t j : *cellpts)
              consider(a[i], b[j], i, j, best);
          }
        }
      }
    }
  }
  return best;
}

}  // namespace

MinDistanceResult min_pairwise_distance(const std::vector<Vec3> &a,
                                        const std::vector<Vec3> &b) {
  if (a.empty() || b.empty())
    throw Error("min_pairwise_distance: empty point set");
  if (a.size() > 256 && b.size() > 256)
    return min_distance_grid(a, b);
  return min_distance_brute(a, b);
}

std::vector<std::pair<std::size_t, std::size_t>>
pairs_within(const std::vector<Vec3> &a, const std::vector<Vec3> &b, double cutoff) {
  if (cutoff <= 0)
    throw Error("pairs_within: cutoff must be positive");
  std::vector<std::pair<std::size_t, std::size_t>> out;
  if (a.empty() || b.empty())
    return out;

  HashGrid grid(b, cutoff);
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < a.size(); ++i) {
    candidates.clear();
    const CellKey c = grid.key_of(a[i]);
    for (std::int64_t dx = -1; dx <= 1; ++dx)
      for (std::int64_t dy = -1; dy <= 1; ++dy)
        for (std::int64_t dz = -1; dz <= 1; ++dz) {
          const auto *cellpts = grid.cell({c.x + dx, c.y + dy, c.z + dz});
          if (cellpts != nullptr)
            candidates.insert(candidates.end(), cellpts->begin(), cellpts->end());
        }
    std::sort(candidates.begin(), candidates.end());
    for (std::size_t j : candidates)
      if (distance(a[i], b[j]) <= cutoff)
        out.emplace_back(i, j);
  }
  return out;
}

}  // namespace posekit
