#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hqc {

class GridError : public std::invalid_argument {
 public:
  explicit GridError(const std::string& what) : std::invalid_argument(what) {}
};

/// count points from start to stop, equally spaced in log t. start > 0.
std::vector<double> log_grid(double start, double stop, std::size_t count);

/// start, start+step, ... up to stop (inclusive within half a step).
std::vector<double> linear_grid(double start, double stop, double step);

/// Parses "start:stop:step" or "log:start:stop:count".
std::vector<double> parse_grid(std::string_view spec);

}  // namespace hqc
