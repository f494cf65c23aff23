#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "orthopart/masspart.hpp"

namespace orthopart::io {

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& text, char delim);

// One point per line, whitespace separated, optionally followed by
// "# weight w".  Blank lines and lines starting with '#' are skipped.
WeightedPointMeasure parse_points(const std::string& text, const std::string& name = "<input>");
WeightedPointMeasure read_points(const std::string& path);

// A JSON array of (d+1)-number arrays (t0, t1, ..., td).
HyperplaneTuple parse_planes(const std::string& text);
HyperplaneTuple read_planes(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace orthopart::io
