#pragma once

#include "pcula/sampler.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

namespace pcula {

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

/// RFC 4180 field quoting (only when needed).
std::string csv_field(std::string_view s);

/// Writes to a sibling temporary file, then renames it over path.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

/// Header "step_index,x_1,...,x_d", one row per sample.
void write_trajectory_csv(std::ostream& os, const Trajectory& t);

/// Binary trajectory layout, all integers and floats little-endian:
///   offset  0: magic "PCULATRJ" (8 bytes)
///   offset  8: uint32 version (= 1)
///   offset 12: uint32 dimension d
///   offset 16: uint64 sample count N
///   offset 24: uint64 first step index
///   offset 32: uint64 thinning factor
///   offset 40: N * d float64 values, sample-major (x_1..x_d of sample 0, ...)
std::string encode_trajectory_binary(const Trajectory& t);

struct TrajectoryDump {
  Eigen::MatrixXd samples;
  std::uint64_t first_step = 0;
  std::uint64_t thin = 1;
};

TrajectoryDump decode_trajectory_binary(std::string_view bytes);

}  // namespace pcula
