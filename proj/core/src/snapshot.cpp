#include "vkdelay/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>

namespace vkd {

namespace {

constexpr char kMagic[4] = {'V', 'K', 'D', 'S'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ofstream& f, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = (v >> (8 * i)) & 0xff;
  f.write(reinterpret_cast<const char*>(b), 4);
}

void put_f64(std::ofstream& f, double x) {
  const std::uint64_t v = std::bit_cast<std::uint64_t>(x);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = (v >> (8 * i)) & 0xff;
  f.write(reinterpret_cast<const char*>(b), 8);
}

std::uint32_t get_u32(std::ifstream& f) {
  unsigned char b[4];
  f.read(reinterpret_cast<char*>(b), 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t(b[i]) << (8 * i);
  return v;
}

double get_f64(std::ifstream& f) {
  unsigned char b[8];
  f.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t(b[i]) << (8 * i);
  return std::bit_cast<double>(v);
}

}  // namespace

void write_snapshot(const std::string& path, const PlateState& state, bool force) {
  if (!force && std::filesystem::exists(path))
    throw ConfigError("snapshot: refusing to overwrite " + path + " (use --force)");
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw DataError("snapshot: cannot open " + path + " for writing");
  f.write(kMagic, 4);
  put_u32(f, kVersion);
  put_u32(f, std::uint32_t(state.u.nx()));
  put_u32(f, std::uint32_t(state.u.ny()));
  put_f64(f, state.t);
  for (std::size_t k = 0; k < state.u.size(); ++k) put_f64(f, state.u[k]);
  for (std::size_t k = 0; k < state.ut.size(); ++k) put_f64(f, state.ut[k]);
  f.flush();
  if (!f) throw DataError("snapshot: short write to " + path);
}

PlateState read_snapshot(const std::string& path, const Grid& g) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataError("snapshot: cannot open " + path);
  char magic[4];
  f.read(magic, 4);
  if (!f || std::memcmp(magic, kMagic, 4) != 0)
    throw DataError("snapshot: " + path + " is not a VKDS file");
  const std::uint32_t version = get_u32(f);
  if (version != kVersion)
    throw DataError("snapshot: " + path + " has unsupported version " + std::to_string(version));
  const std::uint32_t nx = get_u32(f);
  const std::uint32_t ny = get_u32(f);
  if (nx != std::uint32_t(g.nx()) || ny != std::uint32_t(g.ny()))
    throw ShapeError("snapshot: " + path + " holds a " + std::to_string(nx) + "x" +
                     std::to_string(ny) + " field, expected " + std::to_string(g.nx()) + "x" +
                     std::to_string(g.ny()));
  PlateState state(g);
  state.t = get_f64(f);
  for (std::size_t k = 0; k < state.u.size(); ++k) state.u[k] = get_f64(f);
  for (std::size_t k = 0; k < state.ut.size(); ++k) state.ut[k] = get_f64(f);
  if (!f) throw DataError("snapshot: " + path + " is truncated");
  return state;
}

}  // namespace vkd
