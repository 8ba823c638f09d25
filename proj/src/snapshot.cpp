#include "fnls/snapshot.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "fnls/error.hpp"

namespace fnls {

namespace {

constexpr char kMagic[6] = {'F', 'N', 'L', 'S', '1', '\0'};

template <class T>
void put(std::string& out, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  out.append(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T get(const std::string& in, std::size_t& pos) {
  if (pos + sizeof(T) > in.size()) throw Error(ErrorKind::IoError, "truncated snapshot");
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, in.data() + pos, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  pos += sizeof(T);
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

void write_snapshot(const std::string& path, const Field& f, const ModelParams& params) {
  const Grid& g = f.grid();
  std::string out(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.dim()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.points_per_dim()));
  put<double>(out, g.half_extent());
  put<double>(out, params.s);
  put<std::uint8_t>(out, params.is_power() ? 0 : 1);
  put<double>(out, params.exponent());
  out.reserve(out.size() + f.size() * 16);
  for (const cplx& v : f.values()) {
    put<double>(out, v.real());
    put<double>(out, v.imag());
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::IoError, "cannot open " + path);
  os.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!os) throw Error(ErrorKind::IoError, "write failed: " + path);
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorKind::IoError, "cannot open " + path);
  std::string in((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  if (in.size() < sizeof(kMagic) || std::memcmp(in.data(), kMagic, sizeof(kMagic)) != 0)
    throw Error(ErrorKind::IoError, "bad snapshot magic in " + path);
  std::size_t pos = sizeof(kMagic);
  const auto dim = get<std::uint32_t>(in, pos);
  const auto M = get<std::uint32_t>(in, pos);
  const double L = get<double>(in, pos);
  const double s = get<double>(in, pos);
  const auto tag = get<std::uint8_t>(in, pos);
  const double exponent = get<double>(in, pos);
  if (tag > 1) throw Error(ErrorKind::IoError, "unknown nonlinearity tag");
  auto grid = make_grid(static_cast<int>(dim), L, static_cast<int>(M));
  std::vector<cplx> values(grid->size());
  for (cplx& v : values) {
    const double re = get<double>(in, pos);
    const double im = get<double>(in, pos);
    v = cplx(re, im);
  }
  if (pos != in.size()) throw Error(ErrorKind::IoError, "trailing bytes in snapshot");
  Field field(grid, std::move(values));
  ModelParams params;
  params.dim = static_cast<int>(dim);
  params.s = s;
  params.kind = tag == 0 ? Nonlinearity(Power{exponent}) : Nonlinearity(Hartree{exponent});
  params.c = mass(field);
  return Snapshot{std::move(field), params};
}

}  // namespace fnls
