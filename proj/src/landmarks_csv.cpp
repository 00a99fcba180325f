#include "opshape/landmarks_csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include <openssl/evp.h>

#include "opshape/error.hpp"

namespace opshape {
namespace {

constexpr std::string_view kHeader = "scene,landmark,x,y";

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
  throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + what);
}

double parse_coordinate(std::string_view field, std::size_t line) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    parse_error(line, "bad coordinate '" + std::string(field) + "'");
  }
  if (!std::isfinite(value)) parse_error(line, "coordinate is not finite");
  return value;
}

struct PendingScene {
  std::string id;
  std::size_t first_line = 0;
  std::map<int, std::pair<Eigen::Vector2d, std::size_t>> landmarks;
};

}  // namespace

std::vector<LandmarkScene> parse_landmarks(std::istream& in) {
  std::string raw;
  std::size_t line_no = 0;

  if (!std::getline(in, raw)) throw Error(ErrorKind::ParseError, "line 1: empty input");
  ++line_no;
  std::string_view header = raw;
  if (header.starts_with("\xEF\xBB\xBF")) header.remove_prefix(3);
  if (trim(header) != kHeader) {
    parse_error(line_no, "expected header '" + std::string(kHeader) + "'");
  }

  std::vector<PendingScene> pending;
  std::unordered_map<std::string, std::size_t> index;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty()) continue;

    std::string_view fields[4];
    std::size_t count = 0;
    std::size_t start = 0;
    for (;;) {
      const auto comma = line.find(',', start);
      const auto field = trim(line.substr(start, comma == std::string_view::npos
                                                     ? std::string_view::npos
                                                     : comma - start));
      if (count == 4) parse_error(line_no, "expected 4 fields");
      fields[count++] = field;
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (count != 4) parse_error(line_no, "expected 4 fields");
    if (fields[0].empty()) parse_error(line_no, "empty scene id");

    int label = 0;
    const auto [ptr, ec] =
        std::from_chars(fields[1].data(), fields[1].data() + fields[1].size(), label);
    if (ec != std::errc() || ptr != fields[1].data() + fields[1].size() || label < 1) {
      parse_error(line_no, "landmark label must be a positive integer");
    }
    const Eigen::Vector2d xy(parse_coordinate(fields[2], line_no),
                             parse_coordinate(fields[3], line_no));

    const std::string id(fields[0]);
    auto [it, inserted] = index.try_emplace(id, pending.size());
    if (inserted) pending.push_back({id, line_no, {}});
    auto& scene = pending[it->second];
    const auto [slot, fresh] = scene.landmarks.try_emplace(label, xy, line_no);
    if (!fresh) {
      parse_error(line_no, "duplicate (scene " + id + ", landmark " + std::to_string(label) +
                               "), first given on line " + std::to_string(slot->second.second));
    }
  }
  if (pending.empty()) throw Error(ErrorKind::ParseError, "no data rows");

  const auto& schema = pending.front().landmarks;
  int expected = 1;
  for (const auto& [label, _] : schema) {
    if (label != expected++) {
      throw Error(ErrorKind::SchemaError, "scene " + pending.front().id +
                                              ": landmark labels must be 1..k without gaps");
    }
  }

  std::vector<LandmarkScene> scenes;
  scenes.reserve(pending.size());
  for (const auto& p : pending) {
    for (const auto& [label, entry] : p.landmarks) {
      if (!schema.contains(label)) {
        throw Error(ErrorKind::SchemaError,
                    "line " + std::to_string(entry.second) + ": scene " + p.id +
                        " has landmark " + std::to_string(label) + " absent from scene " +
                        pending.front().id);
      }
    }
    for (const auto& [label, _] : schema) {
      if (!p.landmarks.contains(label)) {
        parse_error(p.first_line,
                    "scene " + p.id + " is missing landmark " + std::to_string(label));
      }
    }
    LandmarkScene scene;
    scene.scene_id = p.id;
    for (const auto& [label, entry] : p.landmarks) scene.points.emplace_back(entry.first);
    scenes.push_back(std::move(scene));
  }
  return scenes;
}

std::vector<LandmarkScene> parse_landmarks(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  return parse_landmarks(in);
}

void write_landmarks(std::ostream& out, std::span<const LandmarkScene> scenes) {
  out << kHeader << '\n';
  for (const auto& scene : scenes) {
    for (int label = 1; label <= scene.size(); ++label) {
      const auto& p = scene.point(label);
      out << scene.scene_id << ',' << label << ',' << format_double(p(0)) << ','
          << format_double(p(1)) << '\n';
    }
  }
}

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::Io, "SHA-256 computation failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xF]);
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error(ErrorKind::Io, "read failed for " + path.string());
  return buffer.str();
}

}  // namespace opshape
