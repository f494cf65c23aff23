#include "point_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace orthopart::io {

std::vector<std::string> split(const std::string& text, char delim) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, delim)) parts.push_back(cur);
  if (!text.empty() && text.back() == delim) parts.emplace_back();
  return parts;
}

namespace {

double to_double(const std::string& tok, const std::string& where) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = first + tok.size();
  if (!tok.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw InputError(where + ": not a number: '" + tok + "'");
  return v;
}

std::vector<std::string> tokens(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

}  // namespace

WeightedPointMeasure parse_points(const std::string& text, const std::string& name) {
  std::istringstream in(text);
  std::vector<double> coords, weights;
  std::size_t dim = 0, lineno = 0;
  bool weighted = false;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    const std::string where = name + ":" + std::to_string(lineno);
    const auto hash = line.find('#');
    const auto coord_tokens = tokens(line.substr(0, hash));
    if (coord_tokens.empty()) {
      if (hash == std::string::npos || tokens(line.substr(hash + 1)).empty() ||
          tokens(line.substr(hash + 1)).front() != "weight")
        continue;
      throw InputError(where + ": weight without coordinates");
    }
    double w = 1.0;
    if (hash != std::string::npos) {
      const auto tail = tokens(line.substr(hash + 1));
      if (tail.size() != 2 || tail[0] != "weight") throw InputError(where + ": expected '# weight w'");
      w = to_double(tail[1], where);
      weighted = true;
    }
    if (dim == 0) dim = coord_tokens.size();
    if (coord_tokens.size() != dim)
      throw InputError(where + ": expected " + std::to_string(dim) + " coordinates, got " +
                       std::to_string(coord_tokens.size()));
    for (const auto& t : coord_tokens) coords.push_back(to_double(t, where));
    weights.push_back(w);
  }
  if (weights.empty()) throw InputError(name + ": no points");
  try {
    return WeightedPointMeasure(dim, std::move(coords), weighted ? std::move(weights) : std::vector<double>{});
  } catch (const std::invalid_argument& e) {
    throw InputError(name + ": " + e.what());
  }
}

WeightedPointMeasure read_points(const std::string& path) { return parse_points(read_file(path), path); }

HyperplaneTuple parse_planes(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("planes: ") + e.what());
  }
  if (!j.is_array() || j.empty()) throw InputError("planes: expected a nonempty array of arrays");
  std::vector<Hyperplane> planes;
  for (const auto& row : j) {
    if (!row.is_array() || row.size() < 2) throw InputError("planes: each plane needs d+1 >= 2 numbers");
    std::vector<double> t;
    for (const auto& x : row) {
      if (!x.is_number()) throw InputError("planes: non-numeric entry");
      t.push_back(x.get<double>());
    }
    try {
      planes.push_back(Hyperplane::from_coefficients(std::move(t)));
    } catch (const std::invalid_argument& e) {
      throw InputError(std::string("planes: ") + e.what());
    }
  }
  try {
    return HyperplaneTuple(std::move(planes));
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("planes: ") + e.what());
  }
}

HyperplaneTuple read_planes(const std::string& path) { return parse_planes(read_file(path)); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << contents;
  if (!out) throw InputError("write failed: " + path);
}

}  // namespace orthopart::io
