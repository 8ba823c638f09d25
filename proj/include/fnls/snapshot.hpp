#pragma once

#include <string>

#include "fnls/field.hpp"
#include "fnls/params.hpp"

namespace fnls {

// FNLS1 binary snapshot: "FNLS1\0", u32 dim, u32 M, f64 L, f64 s, u8 kind
// (0 power, 1 Hartree), f64 exponent, then M^N (re, im) f64, little-endian.
void write_snapshot(const std::string& path, const Field& f, const ModelParams& params);

struct Snapshot {
  Field field;
  ModelParams params;  // c is set to the field's mass
};

Snapshot read_snapshot(const std::string& path);

}  // namespace fnls
