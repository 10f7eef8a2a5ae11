#include "nlocch/field_io.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace nlocch {

namespace {

constexpr const char* kMagic = "NLOCCH-FIELD";
constexpr const char* kVersion = "v1";

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

std::string value_of(const std::string& token, const std::string& key) {
  const std::string prefix = key + "=";
  if (token.rfind(prefix, 0) != 0) throw std::runtime_error("field header: expected '" + prefix + "'");
  return token.substr(prefix.size());
}

void put_le(std::ostream& os, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  unsigned char bytes[8];
  for (int b = 0; b < 8; ++b) bytes[b] = static_cast<unsigned char>((bits >> (8 * b)) & 0xffu);
  os.write(reinterpret_cast<const char*>(bytes), 8);
}

double get_le(std::istream& is) {
  unsigned char bytes[8];
  if (!is.read(reinterpret_cast<char*>(bytes), 8)) throw std::runtime_error("field payload: truncated");
  std::uint64_t bits = 0;
  for (int b = 7; b >= 0; --b) bits = (bits << 8) | bytes[b];
  return std::bit_cast<double>(bits);
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) throw std::invalid_argument("not a number: '" + text + "'");
  return v;
}

void write_field(std::ostream& os, const Field& f) {
  const Grid& g = f.grid();
  os << kMagic << ' ' << kVersion << " dim=" << g.dim() << " points=";
  for (int i = 0; i < g.dim(); ++i) os << (i ? "," : "") << g.points(i);
  os << " extent=";
  for (int i = 0; i < g.dim(); ++i) os << (i ? "," : "") << format_double(g.extent(i));
  os << '\n';
  for (Eigen::Index i = 0; i < f.size(); ++i) put_le(os, f[i]);
  if (!os) throw std::runtime_error("field: write failed");
}

Field read_field(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw std::runtime_error("field: missing header");
  std::istringstream hs(header);
  std::string magic, version, dim_tok, points_tok, extent_tok, extra;
  hs >> magic >> version >> dim_tok >> points_tok >> extent_tok;
  if (magic != kMagic || version != kVersion) throw std::runtime_error("field: not an NLOCCH-FIELD v1 file");
  if (hs >> extra) throw std::runtime_error("field header: unexpected token '" + extra + "'");
  const int dim = std::stoi(value_of(dim_tok, "dim"));
  std::vector<int> points;
  for (const auto& p : split(value_of(points_tok, "points"), ',')) points.push_back(std::stoi(p));
  std::vector<double> extents;
  for (const auto& e : split(value_of(extent_tok, "extent"), ',')) extents.push_back(parse_double(e));
  if (static_cast<int>(points.size()) != dim || static_cast<int>(extents.size()) != dim) {
    throw std::runtime_error("field header: dim does not match points/extent lists");
  }
  Field f(Grid(points, extents));
  for (Eigen::Index i = 0; i < f.size(); ++i) f[i] = get_le(is);
  return f;
}

void write_field(const std::filesystem::path& path, const Field& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("field: cannot open " + path.string());
  write_field(os, f);
}

Field read_field(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("field: cannot open " + path.string());
  return read_field(is);
}

}  // namespace nlocch
