#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <thread>
#include <utility>
#include <vector>

#include "tvplan/grid.hpp"
#include "tvplan/mask.hpp"

namespace tvplan {

/// Discrete displacement set realizing a margin-vector dilation.
/// Always contains (0,0,0).
struct StructuringOffsets {
  std::vector<Index3> offsets;
};

/// Membership predicate for the direction-specific structuring element: a
/// displacement d belongs iff sum over axes of (d_a * spacing_a / m_a)^2 <= 1,
/// where m_a is the margin component matching the sign of d_a. A zero margin
/// admits only zero displacement on that side. This is the single source of
/// truth for the element's shape; swap the policy here to get a box variant.
inline bool offset_within_margin(int di, int dj, int dk,
                                 const std::array<double, 3>& spacing,
                                 const MarginVector& margin) {
  const int d[3] = {di, dj, dk};
  double sum = 0.0;
  for (int a = 0; a < 3; ++a) {
    if (d[a] == 0) continue;
    const double m = d[a] < 0 ? margin.neg(a) : margin.pos(a);
    if (m == 0.0) return false;
    const double t = static_cast<double>(d[a]) * spacing[a] / m;
    sum += t * t;
    if (sum > 1.0) return false;
  }
  return sum <= 1.0;
}

inline StructuringOffsets build_structuring_offsets(const MarginVector& margin,
                                                    const std::array<double, 3>& spacing) {
  for (int a = 0; a < 3; ++a) {
    if (!(spacing[a] > 0.0)) {
      throw GridError("spacing must be > 0 to build structuring offsets");
    }
  }
  int lo[3], hi[3];
  for (int a = 0; a < 3; ++a) {
    lo[a] = -static_cast<int>(std::ceil(margin.neg(a) / spacing[a]));
    hi[a] = static_cast<int>(std::ceil(margin.pos(a) / spacing[a]));
  }
  StructuringOffsets out;
  for (int dk = lo[2]; dk <= hi[2]; ++dk) {
    for (int dj = lo[1]; dj <= hi[1]; ++dj) {
      for (int di = lo[0]; di <= hi[0]; ++di) {
        if (offset_within_margin(di, dj, dk, spacing, margin)) {
          out.offsets.push_back(Index3{di, dj, dk});
        }
      }
    }
  }
  return out;
}

namespace detail {

// For fixed (dj,dk) the admissible di form one interval through 0; the
// dilation kernel sweeps these intervals row-wise.
struct RowIntervalSE {
  int dj, dk;
  int lo, hi;
};

inline std::vector<RowIntervalSE> group_offsets_by_row(const StructuringOffsets& se) {
  std::map<std::pair<int, int>, std::array<int, 3>> agg;  // (dj,dk) -> {lo,hi,count}
  for (const auto& o : se.offsets) {
    auto [it, fresh] = agg.try_emplace({o[1], o[2]}, std::array<int, 3>{o[0], o[0], 1});
    if (!fresh) {
      auto& a = it->second;
      a[0] = std::min(a[0], o[0]);
      a[1] = std::max(a[1], o[0]);
      a[2] += 1;
    }
  }
  std::vector<RowIntervalSE> rows;
  rows.reserve(agg.size());
  for (const auto& [key, a] : agg) {
    if (a[1] - a[0] + 1 != a[2]) {
      throw Error("internal: structuring element row is not contiguous");
    }
    rows.push_back(RowIntervalSE{key.first, key.second, a[0], a[1]});
  }
  return rows;
}

inline int next_set_bit(const std::uint64_t* row, int nx, int from) {
  if (from >= nx) return -1;
  std::size_t w = static_cast<std::size_t>(from) / 64;
  std::uint64_t bits = row[w] & (~std::uint64_t{0} << (from % 64));
  const std::size_t words = (static_cast<std::size_t>(nx) + 63) / 64;
  while (true) {
    if (bits) {
      const int pos = static_cast<int>(w * 64) + std::countr_zero(bits);
      return pos < nx ? pos : -1;
    }
    if (++w >= words) return -1;
    bits = row[w];
  }
}

inline int next_clear_bit(const std::uint64_t* row, int nx, int from) {
  if (from >= nx) return nx;
  std::size_t w = static_cast<std::size_t>(from) / 64;
  std::uint64_t bits = ~row[w] & (~std::uint64_t{0} << (from % 64));
  const std::size_t words = (static_cast<std::size_t>(nx) + 63) / 64;
  while (true) {
    if (bits) {
      const int pos = static_cast<int>(w * 64) + std::countr_zero(bits);
      return pos < nx ? pos : nx;
    }
    if (++w >= words) return nx;
    bits = ~row[w];
  }
}

inline void paint_range(std::uint64_t* row, int a, int b) {
  // Sets bits [a, b]; caller guarantees 0 <= a <= b.
  std::size_t wa = static_cast<std::size_t>(a) / 64;
  std::size_t wb = static_cast<std::size_t>(b) / 64;
  const std::uint64_t first = ~std::uint64_t{0} << (a % 64);
  const std::uint64_t last = ~std::uint64_t{0} >> (63 - (b % 64));
  if (wa == wb) {
    row[wa] |= first & last;
    return;
  }
  row[wa] |= first;
  for (std::size_t w = wa + 1; w < wb; ++w) row[w] = ~std::uint64_t{0};
  row[wb] |= last;
}

// dst |= src dilated along x by the interval [lo, hi], clipped to [0, nx).
inline void or_dilated_row(std::uint64_t* dst, const std::uint64_t* src, int nx, int lo,
                           int hi) {
  int i = 0;
  while (i < nx) {
    const int s = next_set_bit(src, nx, i);
    if (s < 0) return;
    const int e = next_clear_bit(src, nx, s + 1) - 1;
    const int a = std::max(0, s + lo);
    const int b = std::min(nx - 1, e + hi);
    if (a <= b) paint_range(dst, a, b);
    i = e + 2;
  }
}

}  // namespace detail

/// Minkowski dilation of the mask by the margin's structuring element,
/// clipped to the grid. Margin of zero returns an identical mask.
inline BinaryMask dilate(const BinaryMask& mask, const MarginVector& margin) {
  const Grid& g = mask.grid();
  const auto se = build_structuring_offsets(margin, g.spacing());
  const auto row_se = detail::group_offsets_by_row(se);
  const auto& src_words = detail::MaskAccess::words(mask);
  const std::size_t wpr = mask.words_per_row();
  const int nx = g.nx(), ny = g.ny(), nz = g.nz();

  std::vector<std::uint64_t> out(src_words.size(), 0);

  auto fill_slab = [&](int k_begin, int k_end) {
    for (int k = k_begin; k < k_end; ++k) {
      for (int j = 0; j < ny; ++j) {
        std::uint64_t* dst = &out[wpr * (static_cast<std::size_t>(j) +
                                         static_cast<std::size_t>(ny) * k)];
        for (const auto& rs : row_se) {
          const int sj = j - rs.dj;
          const int sk = k - rs.dk;
          if (sj < 0 || sj >= ny || sk < 0 || sk >= nz) continue;
          const std::uint64_t* src = &src_words[wpr * (static_cast<std::size_t>(sj) +
                                                       static_cast<std::size_t>(ny) * sk)];
          detail::or_dilated_row(dst, src, nx, rs.lo, rs.hi);
        }
      }
    }
  };

  const std::size_t work = static_cast<std::size_t>(ny) * nz * row_se.size();
  unsigned threads = std::thread::hardware_concurrency();
  if (threads == 0) threads = 1;
  threads = std::min<unsigned>({threads, 16u, static_cast<unsigned>(nz)});
  if (threads <= 1 || work < (1u << 20)) {
    fill_slab(0, nz);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      const int k0 = static_cast<int>(static_cast<std::size_t>(nz) * t / threads);
      const int k1 = static_cast<int>(static_cast<std::size_t>(nz) * (t + 1) / threads);
      pool.emplace_back(fill_slab, k0, k1);
    }
    for (auto& th : pool) th.join();
  }
  return detail::MaskAccess::make(g, std::move(out));
}

inline BinaryMask union_of(const std::vector<std::reference_wrapper<const BinaryMask>>& masks) {
  if (masks.empty()) {
    throw Error("union_of requires a non-empty mask list");
  }
  const BinaryMask& first = masks.front().get();
  std::vector<std::uint64_t> out = detail::MaskAccess::words(first);
  for (std::size_t m = 1; m < masks.size(); ++m) {
    const BinaryMask& mask = masks[m].get();
    require_same_grid(first.grid(), mask.grid(), "union_of");
    const auto& words = detail::MaskAccess::words(mask);
    for (std::size_t w = 0; w < out.size(); ++w) out[w] |= words[w];
  }
  return detail::MaskAccess::make(first.grid(), std::move(out));
}

inline BinaryMask union_of(const BinaryMask& a, const BinaryMask& b) {
  return union_of({std::cref(a), std::cref(b)});
}

inline BinaryMask subtract(const BinaryMask& a, const BinaryMask& b) {
  require_same_grid(a.grid(), b.grid(), "subtract");
  std::vector<std::uint64_t> out = detail::MaskAccess::words(a);
  const auto& wb = detail::MaskAccess::words(b);
  for (std::size_t w = 0; w < out.size(); ++w) out[w] &= ~wb[w];
  return detail::MaskAccess::make(a.grid(), std::move(out));
}

inline BinaryMask intersect(const BinaryMask& a, const BinaryMask& b) {
  require_same_grid(a.grid(), b.grid(), "intersect");
  std::vector<std::uint64_t> out = detail::MaskAccess::words(a);
  const auto& wb = detail::MaskAccess::words(b);
  for (std::size_t w = 0; w < out.size(); ++w) out[w] &= wb[w];
  return detail::MaskAccess::make(a.grid(), std::move(out));
}

/// Sets every background component that is not 6-connected to the grid
/// boundary; foreground is left untouched.
inline BinaryMask fill_holes(const BinaryMask& mask) {
  const Grid& g = mask.grid();
  const int nx = g.nx(), ny = g.ny(), nz = g.nz();
  const std::size_t wpr = mask.words_per_row();
  const auto& src = detail::MaskAccess::words(mask);

  std::vector<std::uint64_t> reached(src.size(), 0);  // boundary-connected background
  auto bit_at = [&](const std::vector<std::uint64_t>& ws, int i, int j, int k) {
    return (ws[wpr * (static_cast<std::size_t>(j) + static_cast<std::size_t>(ny) * k) +
               static_cast<std::size_t>(i) / 64] >>
            (i % 64)) &
           1;
  };
  auto set_bit = [&](std::vector<std::uint64_t>& ws, int i, int j, int k) {
    ws[wpr * (static_cast<std::size_t>(j) + static_cast<std::size_t>(ny) * k) +
       static_cast<std::size_t>(i) / 64] |= std::uint64_t{1} << (i % 64);
  };

  std::vector<Index3> stack;
  auto push_if_background = [&](int i, int j, int k) {
    if (!bit_at(src, i, j, k) && !bit_at(reached, i, j, k)) {
      set_bit(reached, i, j, k);
      stack.push_back(Index3{i, j, k});
    }
  };
  for (int k = 0; k < nz; ++k) {
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        if (i == 0 || i == nx - 1 || j == 0 || j == ny - 1 || k == 0 || k == nz - 1) {
          push_if_background(i, j, k);
        }
      }
    }
  }
  while (!stack.empty()) {
    const auto [i, j, k] = stack.back();
    stack.pop_back();
    if (i > 0) push_if_background(i - 1, j, k);
    if (i + 1 < nx) push_if_background(i + 1, j, k);
    if (j > 0) push_if_background(i, j - 1, k);
    if (j + 1 < ny) push_if_background(i, j + 1, k);
    if (k > 0) push_if_background(i, j, k - 1);
    if (k + 1 < nz) push_if_background(i, j, k + 1);
  }

  std::vector<std::uint64_t> out(src.size());
  const std::uint64_t tail = detail::MaskAccess::tail_mask(g);
  for (std::size_t r = 0; r < src.size(); r += wpr) {
    for (std::size_t w = 0; w < wpr; ++w) {
      out[r + w] = ~reached[r + w] & (w + 1 == wpr ? tail : ~std::uint64_t{0});
    }
  }
  return detail::MaskAccess::make(g, std::move(out));
}

namespace detail {

// One dilation/erosion step with the unit 6-neighborhood element. Dilation
// clips at the grid; erosion treats out-of-grid as foreground so the pair
// forms an adjunction on the grid window (this makes close-then-open
// idempotent, which the smoothing contract relies on).
inline BinaryMask unit6_step(const BinaryMask& mask, bool erode,
                             bool outside_is_foreground) {
  const Grid& g = mask.grid();
  const int nx = g.nx(), ny = g.ny(), nz = g.nz();
  const std::size_t wpr = mask.words_per_row();
  const auto& src = MaskAccess::words(mask);
  const std::uint64_t tail = MaskAccess::tail_mask(g);
  const std::uint64_t fill = (erode && outside_is_foreground) ? ~std::uint64_t{0} : 0;

  std::vector<std::uint64_t> out(src.size());
  std::vector<std::uint64_t> shifted(wpr);
  const std::vector<std::uint64_t> uniform(wpr, fill);
  const std::uint64_t edge_low = erode && outside_is_foreground ? 1 : 0;

  auto row_ptr = [&](int j, int k) {
    return &src[wpr * (static_cast<std::size_t>(j) + static_cast<std::size_t>(ny) * k)];
  };

  for (int k = 0; k < nz; ++k) {
    for (int j = 0; j < ny; ++j) {
      const std::uint64_t* row = row_ptr(j, k);
      std::uint64_t* dst =
          &out[wpr * (static_cast<std::size_t>(j) + static_cast<std::size_t>(ny) * k)];

      // x-1 neighbor (value shifted up by one bit)
      std::uint64_t carry = edge_low;
      for (std::size_t w = 0; w < wpr; ++w) {
        shifted[w] = (row[w] << 1) | carry;
        carry = row[w] >> 63;
      }
      for (std::size_t w = 0; w < wpr; ++w) dst[w] = shifted[w];

      // x+1 neighbor (value shifted down by one bit)
      for (std::size_t w = 0; w < wpr; ++w) {
        std::uint64_t v = row[w] >> 1;
        if (w + 1 < wpr) v |= row[w + 1] << 63;
        shifted[w] = v;
      }
      if (erode && outside_is_foreground) {
        const int last = (nx - 1) % 64;
        shifted[wpr - 1] |= std::uint64_t{1} << last;
      }

      auto combine = [&](const std::uint64_t* other) {
        if (erode) {
          for (std::size_t w = 0; w < wpr; ++w) dst[w] &= other[w];
        } else {
          for (std::size_t w = 0; w < wpr; ++w) dst[w] |= other[w];
        }
      };
      combine(shifted.data());
      combine(row);  // center

      // y and z neighbors are whole aligned rows
      combine(j > 0 ? row_ptr(j - 1, k) : uniform.data());
      combine(j + 1 < ny ? row_ptr(j + 1, k) : uniform.data());
      combine(k > 0 ? row_ptr(j, k - 1) : uniform.data());
      combine(k + 1 < nz ? row_ptr(j, k + 1) : uniform.data());

      dst[wpr - 1] &= tail;
    }
  }
  return MaskAccess::make(g, std::move(out));
}

}  // namespace detail

inline BinaryMask dilate_unit6(const BinaryMask& mask) {
  return detail::unit6_step(mask, false, false);
}

/// Erosion by the unit 6-neighborhood. outside_is_foreground selects how
/// out-of-grid neighbors count (foreground for smoothing, background for
/// surface extraction).
inline BinaryMask erode_unit6(const BinaryMask& mask, bool outside_is_foreground = true) {
  return detail::unit6_step(mask, true, outside_is_foreground);
}

/// Morphological closing then opening with the unit 6-neighborhood element.
inline BinaryMask smooth(const BinaryMask& mask) {
  const BinaryMask closed = erode_unit6(dilate_unit6(mask), true);
  return dilate_unit6(erode_unit6(closed, true));
}

/// Set voxels with at least one 6-connected neighbor that is background or
/// out-of-grid.
inline BinaryMask surface_voxels(const BinaryMask& mask) {
  return subtract(mask, erode_unit6(mask, /*outside_is_foreground=*/false));
}

inline bool touches_boundary(const BinaryMask& mask) {
  const Grid& g = mask.grid();
  const int nx = g.nx(), ny = g.ny(), nz = g.nz();
  for (int k = 0; k < nz; ++k) {
    for (int j = 0; j < ny; ++j) {
      const bool edge_row = j == 0 || j == ny - 1 || k == 0 || k == nz - 1;
      if (edge_row) {
        for (int i = 0; i < nx; ++i) {
          if (mask.test(i, j, k)) return true;
        }
      } else {
        if (mask.test(0, j, k) || mask.test(nx - 1, j, k)) return true;
      }
    }
  }
  return false;
}

}  // namespace tvplan
