#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "fnls/config.hpp"
#include "fnls/error.hpp"
#include "fnls/random_fields.hpp"
#include "fnls/snapshot.hpp"

using namespace fnls;

namespace {
const char* kSample = R"(seed = 7
# comment
[model]
dim = 2
s = 0.7
kind = "power"
exponent = 2.0
mass = 1.0

[grid]
half_extent = 1.5
points_per_dim = 128

[sweep]
c_list = [0.5, 1, 2]
)";
}  // namespace

TEST_CASE("config parsing") {
  const auto c = parse_config(kSample);
  CHECK(c.seed == 7);
  CHECK(c.points_per_dim == 128);
  CHECK(c.half_extent == 1.5);
  REQUIRE(c.c_list.size() == 3);
  CHECK(c.c_list[1] == 1.0);
  CHECK(model_params(c).is_power());
  CHECK(make_config_grid(c)->points_per_dim() == 128);

  // canonical text round-trips and hashes deterministically
  const std::string canon = canonical_text(c);
  const auto again = parse_config(canon);
  CHECK(canonical_text(again) == canon);
  CHECK(content_hash(canon) == content_hash(canonical_text(again)));
  CHECK(content_hash(canon).size() == 16);
  CHECK(content_hash("a") != content_hash("b"));
  CHECK(to_json(c)["model"]["s"] == 0.7);
}

TEST_CASE("config rejects bad input") {
  auto kind_of = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::IoError;
  };
  CHECK(kind_of("[model]\nbogus = 1\n") == ErrorKind::ConfigError);
  CHECK(kind_of("[model]\ns = abc\n") == ErrorKind::ConfigError);
  CHECK(kind_of("[model]\ndim = 2.5\n") == ErrorKind::ConfigError);
  CHECK(kind_of("[model]\nkind = power\n") == ErrorKind::ConfigError);
  CHECK(kind_of("[model]\nexponent = 0.5\n") == ErrorKind::ConfigError);
  CHECK(kind_of("[grid]\npoints_per_dim = 7\n") == ErrorKind::ConfigError);
  CHECK(kind_of("[dynamics\n") == ErrorKind::ConfigError);
  CHECK(kind_of("seed\n") == ErrorKind::ConfigError);
  try {
    parse_config("[model]\nexponent = 0.5\n");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("p > 4s/N") != std::string::npos);
  }
  CHECK_THROWS_AS(load_config("/nonexistent/config.toml"), Error);
}

TEST_CASE("snapshot round trip") {
  auto g = make_grid(2, 3.0, 32);
  const Field f = random_smooth_field(g, 4, 0.5);
  const auto params = make_params(2, 0.8, Hartree{1.8}, 1.0);
  const auto path = (std::filesystem::temp_directory_path() / "fnls_snapshot_test.bin").string();
  write_snapshot(path, f, params);
  const auto snap = read_snapshot(path);
  CHECK(snap.field.grid().same_shape(*g));
  CHECK(snap.field.values() == f.values());
  CHECK(!snap.params.is_power());
  CHECK(snap.params.exponent() == 1.8);
  CHECK(snap.params.c == doctest::Approx(mass(f)));
  {
    std::ofstream bad(path, std::ios::binary);
    bad << "NOPE";
  }
  CHECK_THROWS_AS(read_snapshot(path), Error);
  std::remove(path.c_str());
}
