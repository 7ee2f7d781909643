#include "hqc/grid.hpp"

#include <charconv>
#include <cmath>

namespace hqc {
namespace {

double parse_number(std::string_view s, std::string_view spec) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw GridError("bad number '" + std::string(s) + "' in grid '" + std::string(spec) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (true) {
    const std::size_t c = s.find(':', pos);
    parts.push_back(s.substr(pos, c == std::string_view::npos ? std::string_view::npos : c - pos));
    if (c == std::string_view::npos) break;
    pos = c + 1;
  }
  return parts;
}

}  // namespace

std::vector<double> log_grid(double start, double stop, std::size_t count) {
  if (!(start > 0.0) || !(stop >= start)) throw GridError("log grid needs 0 < start <= stop");
  if (count == 0) throw GridError("grid must be nonempty");
  if (count == 1) return {start};
  std::vector<double> g(count);
  const double a = std::log(start);
  const double b = std::log(stop);
  for (std::size_t i = 0; i < count; ++i) {
    g[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  g.front() = start;
  g.back() = stop;
  return g;
}

std::vector<double> linear_grid(double start, double stop, double step) {
  if (!(step > 0.0)) throw GridError("grid step must be positive");
  if (!(stop >= start)) throw GridError("grid needs start <= stop");
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 0.5)) + 1;
  std::vector<double> g(count);
  for (std::size_t i = 0; i < count; ++i) g[i] = start + step * static_cast<double>(i);
  return g;
}

std::vector<double> parse_grid(std::string_view spec) {
  const auto parts = split(spec);
  if (parts.size() == 4 && parts[0] == "log") {
    const double count = parse_number(parts[3], spec);
    if (count < 1 || count != std::floor(count)) throw GridError("log grid count must be a positive integer");
    return log_grid(parse_number(parts[1], spec), parse_number(parts[2], spec),
                    static_cast<std::size_t>(count));
  }
  if (parts.size() == 3) {
    return linear_grid(parse_number(parts[0], spec), parse_number(parts[1], spec),
                       parse_number(parts[2], spec));
  }
  throw GridError("grid '" + std::string(spec) + "' is not start:stop:step or log:start:stop:count");
}

}  // namespace hqc
