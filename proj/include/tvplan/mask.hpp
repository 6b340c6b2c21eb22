#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tvplan/grid.hpp"

namespace tvplan {

namespace detail {
struct MaskAccess;
}

/// Immutable 3D occupancy mask. Logical order is x-fastest, z-slowest; the
/// storage packs each x-row into whole 64-bit words so row-level operations
/// never straddle rows. Pad bits past nx are kept zero as a class invariant.
class BinaryMask {
 public:
  explicit BinaryMask(const Grid& grid)
      : grid_(grid),
        words_per_row_((static_cast<std::size_t>(grid.nx()) + 63) / 64),
        words_(words_per_row_ * grid.ny() * grid.nz(), 0) {}

  BinaryMask(const Grid& grid, std::span<const Index3> voxels) : BinaryMask(grid) {
    for (const auto& v : voxels) {
      if (!grid_.contains(v[0], v[1], v[2])) {
        throw IndexError("voxel index (" + std::to_string(v[0]) + "," +
                         std::to_string(v[1]) + "," + std::to_string(v[2]) +
                         ") outside grid " + grid_.describe());
      }
      words_[row_word(v[1], v[2]) + static_cast<std::size_t>(v[0]) / 64] |=
          std::uint64_t{1} << (v[0] % 64);
    }
  }

  const Grid& grid() const { return grid_; }

  bool test(int i, int j, int k) const {
    return (words_[row_word(j, k) + static_cast<std::size_t>(i) / 64] >> (i % 64)) & 1;
  }

  std::size_t voxel_count() const {
    std::size_t n = 0;
    for (std::uint64_t w : words_) n += std::popcount(w);
    return n;
  }

  bool empty() const {
    for (std::uint64_t w : words_) {
      if (w) return false;
    }
    return true;
  }

  double physical_volume_mm3() const {
    return static_cast<double>(voxel_count()) * grid_.voxel_volume_mm3();
  }

  /// Set voxel indices in x-fastest order.
  std::vector<Index3> voxels() const {
    std::vector<Index3> out;
    out.reserve(voxel_count());
    for (int k = 0; k < grid_.nz(); ++k) {
      for (int j = 0; j < grid_.ny(); ++j) {
        const std::uint64_t* row = &words_[row_word(j, k)];
        for (std::size_t w = 0; w < words_per_row_; ++w) {
          std::uint64_t bits = row[w];
          while (bits) {
            const int b = std::countr_zero(bits);
            out.push_back(Index3{static_cast<int>(w * 64 + b), j, k});
            bits &= bits - 1;
          }
        }
      }
    }
    return out;
  }

  bool is_subset_of(const BinaryMask& other) const {
    require_same_grid(grid_, other.grid_, "is_subset_of");
    for (std::size_t w = 0; w < words_.size(); ++w) {
      if (words_[w] & ~other.words_[w]) return false;
    }
    return true;
  }

  std::size_t words_per_row() const { return words_per_row_; }

 private:
  BinaryMask(Grid grid, std::vector<std::uint64_t> words, std::size_t words_per_row)
      : grid_(std::move(grid)), words_per_row_(words_per_row), words_(std::move(words)) {}

  std::size_t row_word(int j, int k) const {
    return words_per_row_ *
           (static_cast<std::size_t>(j) + static_cast<std::size_t>(grid_.ny()) * k);
  }

  Grid grid_;
  std::size_t words_per_row_;
  std::vector<std::uint64_t> words_;

  friend struct detail::MaskAccess;
};

inline bool masks_equal(const BinaryMask& a, const BinaryMask& b);

namespace detail {

/// Word-level access for the geometry kernels and file codecs. Everything
/// here must preserve the zero-pad-bits invariant.
struct MaskAccess {
  static const std::vector<std::uint64_t>& words(const BinaryMask& m) {
    return m.words_;
  }

  static BinaryMask make(const Grid& grid, std::vector<std::uint64_t> words) {
    const std::size_t wpr = (static_cast<std::size_t>(grid.nx()) + 63) / 64;
    return BinaryMask(grid, std::move(words), wpr);
  }

  static std::size_t row_word(const BinaryMask& m, int j, int k) {
    return m.row_word(j, k);
  }

  /// Mask covering the valid bits of the last word in a row (all-ones when
  /// nx is a multiple of 64).
  static std::uint64_t tail_mask(const Grid& grid) {
    const int rem = grid.nx() % 64;
    return rem == 0 ? ~std::uint64_t{0} : ((std::uint64_t{1} << rem) - 1);
  }
};

}  // namespace detail

inline bool masks_equal(const BinaryMask& a, const BinaryMask& b) {
  require_same_grid(a.grid(), b.grid(), "masks_equal");
  return detail::MaskAccess::words(a) == detail::MaskAccess::words(b);
}

}  // namespace tvplan
