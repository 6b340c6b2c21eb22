#pragma once

#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "tvplan/grid.hpp"
#include "tvplan/mask.hpp"

namespace tvplan {

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s, const std::string& what) {
  double v{};
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  while (begin != end && (*begin == ' ' || *begin == '\t')) ++begin;
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc{}) {
    throw NrrdError("cannot parse number '" + s + "' in " + what);
  }
  return v;
}

inline std::vector<std::uint8_t> gzip_inflate(const std::uint8_t* data, std::size_t size,
                                              std::size_t expected) {
  std::vector<std::uint8_t> out(expected);
  z_stream zs{};
  if (inflateInit2(&zs, 15 + 32) != Z_OK) {
    throw NrrdError("zlib inflateInit failed");
  }
  zs.next_in = const_cast<Bytef*>(data);
  zs.avail_in = static_cast<uInt>(size);
  zs.next_out = out.data();
  zs.avail_out = static_cast<uInt>(out.size());
  const int rc = inflate(&zs, Z_FINISH);
  const std::size_t produced = out.size() - zs.avail_out;
  inflateEnd(&zs);
  if (rc != Z_STREAM_END || produced != expected) {
    throw NrrdError("gzip data block does not inflate to the expected voxel count");
  }
  return out;
}

}  // namespace detail

/// Writes the mask as NRRD0004, uint8, raw encoding, one byte per voxel in
/// x-fastest order.
inline void write_mask_nrrd(const BinaryMask& mask, const std::filesystem::path& path) {
  const Grid& g = mask.grid();
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw NrrdError("cannot open " + path.string() + " for writing");
  }
  using detail::format_double;
  out << "NRRD0004\n";
  out << "type: uint8\n";
  out << "dimension: 3\n";
  out << "space: left-posterior-superior\n";
  out << "sizes: " << g.nx() << " " << g.ny() << " " << g.nz() << "\n";
  out << "space directions: (" << format_double(g.spacing()[0]) << ",0,0) (0,"
      << format_double(g.spacing()[1]) << ",0) (0,0," << format_double(g.spacing()[2])
      << ")\n";
  out << "space origin: (" << format_double(g.origin()[0]) << ","
      << format_double(g.origin()[1]) << "," << format_double(g.origin()[2]) << ")\n";
  out << "endian: little\n";
  out << "encoding: raw\n";
  out << "\n";

  std::vector<std::uint8_t> bytes(g.voxel_total());
  std::size_t n = 0;
  for (int k = 0; k < g.nz(); ++k) {
    for (int j = 0; j < g.ny(); ++j) {
      for (int i = 0; i < g.nx(); ++i) {
        bytes[n++] = mask.test(i, j, k) ? 1 : 0;
      }
    }
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw NrrdError("failed writing data block to " + path.string());
  }
}

inline BinaryMask read_mask_nrrd(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw NrrdError("cannot open " + path.string());
  }
  std::vector<char> raw((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());

  // Header is ASCII lines up to the first blank line.
  std::size_t pos = 0;
  auto next_line = [&]() -> std::string {
    std::size_t end = pos;
    while (end < raw.size() && raw[end] != '\n') ++end;
    std::string line(raw.begin() + pos, raw.begin() + end);
    pos = end < raw.size() ? end + 1 : end;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  };

  const std::string magic = next_line();
  if (magic != "NRRD0004") {
    throw NrrdError(path.string() + ": unsupported magic '" + magic +
                    "' (expected NRRD0004)");
  }
  std::map<std::string, std::string> fields;
  while (pos < raw.size()) {
    const std::string line = next_line();
    if (line.empty()) break;
    if (line[0] == '#') continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) {
      throw NrrdError(path.string() + ": malformed header line '" + line + "'");
    }
    std::string key = line.substr(0, colon);
    std::string value = line.substr(colon + 1);
    while (!value.empty() && (value.front() == ' ' || value.front() == '\t')) {
      value.erase(value.begin());
    }
    fields[key] = value;
  }

  auto require = [&](const std::string& key) -> const std::string& {
    auto it = fields.find(key);
    if (it == fields.end()) {
      throw NrrdError(path.string() + ": missing required header field '" + key + "'");
    }
    return it->second;
  };

  if (require("type") != "uint8") {
    throw NrrdError(path.string() + ": type must be uint8, got '" + fields["type"] + "'");
  }
  if (require("dimension") != "3") {
    throw NrrdError(path.string() + ": dimension must be 3");
  }
  if (require("space") != "left-posterior-superior") {
    throw NrrdError(path.string() + ": space must be left-posterior-superior");
  }
  const std::string encoding = require("encoding");
  if (encoding != "raw" && encoding != "gzip" && encoding != "gz") {
    throw NrrdError(path.string() + ": unsupported encoding '" + encoding + "'");
  }
  if (auto it = fields.find("endian"); it != fields.end() && it->second != "little") {
    throw NrrdError(path.string() + ": unsupported endian '" + it->second + "'");
  }

  std::array<int, 3> dims{};
  {
    std::istringstream ss(require("sizes"));
    for (int a = 0; a < 3; ++a) {
      if (!(ss >> dims[a])) {
        throw NrrdError(path.string() + ": cannot parse sizes");
      }
    }
  }

  // space directions: three parenthesized vectors; must be a positive
  // axis-aligned diagonal.
  std::array<double, 3> spacing{};
  {
    const std::string& dirs = require("space directions");
    std::array<std::array<double, 3>, 3> rows{};
    std::size_t at = 0;
    for (int r = 0; r < 3; ++r) {
      const auto open = dirs.find('(', at);
      const auto close = dirs.find(')', open);
      if (open == std::string::npos || close == std::string::npos) {
        throw NrrdError(path.string() + ": malformed space directions '" + dirs + "'");
      }
      std::string triple = dirs.substr(open + 1, close - open - 1);
      std::replace(triple.begin(), triple.end(), ',', ' ');
      std::istringstream ss(triple);
      std::string tok;
      for (int a = 0; a < 3; ++a) {
        if (!(ss >> tok)) {
          throw NrrdError(path.string() + ": malformed space directions '" + dirs + "'");
        }
        rows[r][a] = detail::parse_double(tok, "space directions");
      }
      at = close + 1;
    }
    for (int r = 0; r < 3; ++r) {
      for (int a = 0; a < 3; ++a) {
        if (r == a) continue;
        if (rows[r][a] != 0.0) {
          throw NrrdError(path.string() +
                          ": space directions are not axis-aligned diagonal");
        }
      }
      if (!(rows[r][r] > 0.0)) {
        throw NrrdError(path.string() + ": space directions must be a positive diagonal");
      }
      spacing[r] = rows[r][r];
    }
  }

  std::array<double, 3> origin{};
  {
    const std::string& o = require("space origin");
    const auto open = o.find('(');
    const auto close = o.find(')');
    if (open == std::string::npos || close == std::string::npos) {
      throw NrrdError(path.string() + ": malformed space origin '" + o + "'");
    }
    std::string triple = o.substr(open + 1, close - open - 1);
    std::replace(triple.begin(), triple.end(), ',', ' ');
    std::istringstream ss(triple);
    std::string tok;
    for (int a = 0; a < 3; ++a) {
      if (!(ss >> tok)) {
        throw NrrdError(path.string() + ": malformed space origin '" + o + "'");
      }
      origin[a] = detail::parse_double(tok, "space origin");
    }
  }

  const Grid grid(dims, spacing, origin);
  const std::size_t expected = grid.voxel_total();
  const auto* data = reinterpret_cast<const std::uint8_t*>(raw.data()) + pos;
  const std::size_t available = raw.size() - pos;

  std::vector<std::uint8_t> bytes;
  if (encoding == "raw") {
    if (available != expected) {
      throw NrrdError(path.string() + ": raw data block has " +
                      std::to_string(available) + " bytes, expected " +
                      std::to_string(expected));
    }
    bytes.assign(data, data + available);
  } else {
    bytes = detail::gzip_inflate(data, available, expected);
  }

  const std::size_t wpr = (static_cast<std::size_t>(grid.nx()) + 63) / 64;
  std::vector<std::uint64_t> words(wpr * grid.ny() * grid.nz(), 0);
  std::size_t n = 0;
  for (int k = 0; k < grid.nz(); ++k) {
    for (int j = 0; j < grid.ny(); ++j) {
      const std::size_t row = wpr * (static_cast<std::size_t>(j) +
                                     static_cast<std::size_t>(grid.ny()) * k);
      for (int i = 0; i < grid.nx(); ++i, ++n) {
        if (bytes[n] != 0) {
          words[row + static_cast<std::size_t>(i) / 64] |= std::uint64_t{1} << (i % 64);
        }
      }
    }
  }
  return detail::MaskAccess::make(grid, std::move(words));
}

}  // namespace tvplan
