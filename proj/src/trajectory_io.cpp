#include "pcula/trajectory_io.hpp"

#include "pcula/errors.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <ostream>
#include <unistd.h>

namespace pcula {

static_assert(std::endian::native == std::endian::little,
              "binary trajectory encoding assumes a little-endian host");

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view bytes) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot open " + tmp.string() + " for writing");
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    f.flush();
    if (!f) {
      f.close();
      fs::remove(tmp);
      throw Error("write failed for " + tmp.string());
    }
  }
  fs::rename(tmp, path);
}

void write_trajectory_csv(std::ostream& os, const Trajectory& t) {
  os << "step_index";
  for (Eigen::Index i = 0; i < t.dimension(); ++i) os << ",x_" << (i + 1);
  os << "\r\n";
  for (Eigen::Index j = 0; j < t.size(); ++j) {
    os << t.step_index(j);
    for (Eigen::Index i = 0; i < t.dimension(); ++i)
      os << ',' << format_double(t.samples(i, j));
    os << "\r\n";
  }
}

namespace {

constexpr char kMagic[8] = {'P', 'C', 'U', 'L', 'A', 'T', 'R', 'J'};
constexpr std::size_t kHeaderSize = 40;

template <class T>
void put(std::string& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

template <class T>
T get(std::string_view in, std::size_t offset) {
  T v;
  std::memcpy(&v, in.data() + offset, sizeof(T));
  return v;
}

}  // namespace

std::string encode_trajectory_binary(const Trajectory& t) {
  std::string out;
  out.reserve(kHeaderSize + sizeof(double) * t.samples.size());
  out.append(kMagic, sizeof kMagic);
  put<std::uint32_t>(out, 1);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(t.dimension()));
  put<std::uint64_t>(out, static_cast<std::uint64_t>(t.size()));
  put<std::uint64_t>(out, t.first_step);
  put<std::uint64_t>(out, t.thin);
  // Eigen is column-major and samples are columns: already sample-major.
  out.append(reinterpret_cast<const char*>(t.samples.data()),
             sizeof(double) * static_cast<std::size_t>(t.samples.size()));
  return out;
}

TrajectoryDump decode_trajectory_binary(std::string_view in) {
  if (in.size() < kHeaderSize || std::memcmp(in.data(), kMagic, sizeof kMagic) != 0)
    throw Error("binary trajectory: bad magic");
  if (get<std::uint32_t>(in, 8) != 1) throw Error("binary trajectory: unknown version");
  const auto d = get<std::uint32_t>(in, 12);
  const auto n = get<std::uint64_t>(in, 16);
  if (in.size() != kHeaderSize + sizeof(double) * d * n)
    throw Error("binary trajectory: truncated payload");
  TrajectoryDump dump;
  dump.first_step = get<std::uint64_t>(in, 24);
  dump.thin = get<std::uint64_t>(in, 32);
  dump.samples.resize(d, static_cast<Eigen::Index>(n));
  std::memcpy(dump.samples.data(), in.data() + kHeaderSize, sizeof(double) * d * n);
  return dump;
}

}  // namespace pcula
