#pragma once

#include <random>
#include <vector>

#include "tvplan/grid.hpp"
#include "tvplan/mask.hpp"

namespace support {

using tvplan::BinaryMask;
using tvplan::Grid;
using tvplan::Index3;
using tvplan::MarginVector;

inline Grid random_grid(std::mt19937& rng, int max_dim = 32) {
  std::uniform_int_distribution<int> dim(2, max_dim);
  std::uniform_real_distribution<double> sp(0.5, 3.0);
  return Grid({dim(rng), dim(rng), dim(rng)}, {sp(rng), sp(rng), sp(rng)});
}

inline BinaryMask random_mask(std::mt19937& rng, const Grid& g, double density) {
  std::bernoulli_distribution bit(density);
  std::vector<Index3> voxels;
  for (int k = 0; k < g.nz(); ++k) {
    for (int j = 0; j < g.ny(); ++j) {
      for (int i = 0; i < g.nx(); ++i) {
        if (bit(rng)) voxels.push_back(Index3{i, j, k});
      }
    }
  }
  return BinaryMask(g, voxels);
}

// A blobbier mask: a few random balls, more like anatomy than iid noise.
inline BinaryMask random_blob_mask(std::mt19937& rng, const Grid& g, int balls = 3) {
  std::uniform_real_distribution<double> frac(0.15, 0.85);
  std::uniform_real_distribution<double> rad(1.0, 0.3 * std::min({g.nx() * g.spacing()[0],
                                                                  g.ny() * g.spacing()[1],
                                                                  g.nz() * g.spacing()[2]}));
  std::vector<Index3> voxels;
  for (int b = 0; b < balls; ++b) {
    const double cx = g.origin()[0] + frac(rng) * g.nx() * g.spacing()[0];
    const double cy = g.origin()[1] + frac(rng) * g.ny() * g.spacing()[1];
    const double cz = g.origin()[2] + frac(rng) * g.nz() * g.spacing()[2];
    const double r = rad(rng);
    for (int k = 0; k < g.nz(); ++k) {
      for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) {
          const auto c = g.voxel_center_mm(i, j, k);
          const double dx = c[0] - cx, dy = c[1] - cy, dz = c[2] - cz;
          if (dx * dx + dy * dy + dz * dz <= r * r) voxels.push_back(Index3{i, j, k});
        }
      }
    }
  }
  return BinaryMask(g, voxels);
}

inline MarginVector random_margin(std::mt19937& rng, double max_mm = 5.0,
                                  double zero_prob = 0.15) {
  std::uniform_real_distribution<double> mm(0.0, max_mm);
  std::bernoulli_distribution zero(zero_prob);
  double c[6];
  for (double& v : c) v = zero(rng) ? 0.0 : mm(rng);
  return MarginVector(c[0], c[1], c[2], c[3], c[4], c[5]);
}

}  // namespace support
