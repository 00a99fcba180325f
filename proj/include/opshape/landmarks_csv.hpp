#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "opshape/geometry.hpp"

namespace opshape {

// Landmark table: UTF-8 CSV with header `scene,landmark,x,y`, one row per
// (scene, landmark) pair, rows in any order. Scene ids are free-form strings
// without commas; landmark labels are positive integers 1..k.

/// Scenes in order of first appearance, landmarks ordered by label. Throws
/// ParseError (with line number) or SchemaError.
std::vector<LandmarkScene> parse_landmarks(std::istream& in);
std::vector<LandmarkScene> parse_landmarks(const std::filesystem::path& path);

void write_landmarks(std::ostream& out, std::span<const LandmarkScene> scenes);

/// printf %.17g; round-trips every finite double.
std::string format_double(double value);

/// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view bytes);

std::string read_file(const std::filesystem::path& path);

}  // namespace opshape
