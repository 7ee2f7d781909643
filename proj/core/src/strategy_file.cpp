#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "hqc/strategy.hpp"
#include "json.hpp"

namespace hqc {
namespace {

using nlohmann::json;

// Line on which each top-level array element starts. nlohmann does not keep
// source positions for values, so the raw text is scanned once.
std::vector<std::size_t> element_lines(std::string_view text) {
  std::vector<std::size_t> lines;
  std::size_t line = 1;
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  bool expect_element = false;
  for (const char c : text) {
    if (c == '\n') ++line;
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    const bool space = c == ' ' || c == '\t' || c == '\n' || c == '\r';
    if (expect_element && !space && c != ']') {
      lines.push_back(line);
      expect_element = false;
    }
    switch (c) {
      case '"':
        in_string = true;
        break;
      case '[':
      case '{':
        if (++depth == 1 && c == '[') expect_element = true;
        break;
      case ']':
      case '}':
        --depth;
        break;
      case ',':
        if (depth == 1) expect_element = true;
        break;
      default:
        break;
    }
  }
  return lines;
}

std::size_t parse_error_line(const json::parse_error& e, std::string_view text) {
  // Messages read "... parse error at line L, column C: ...".
  static const std::regex pattern(R"(at line (\d+))");
  std::cmatch match;
  const std::string what = e.what();
  if (std::regex_search(what.c_str(), match, pattern)) return std::stoul(match[1].str());
  std::size_t line = 1;
  for (std::size_t i = 0; i < std::min<std::size_t>(e.byte, text.size()); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

double unit_value(const json& obj, const char* key, std::size_t line) {
  if (!obj.contains(key)) return 0.0;
  const auto& v = obj.at(key);
  if (!v.is_number()) throw StrategyFileError(line, std::string("\"") + key + "\" must be a number");
  const double x = v.get<double>();
  if (!(x >= 0.0 && x <= 1.0)) {
    throw StrategyFileError(line, std::string("\"") + key + "\" must lie in [0,1]");
  }
  return x;
}

}  // namespace

StrategyParams parse_strategy_params(std::string_view text, std::size_t n) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw StrategyFileError(parse_error_line(e, text), "invalid JSON");
  }
  if (!doc.is_array()) throw StrategyFileError(1, "strategy file must be a JSON array");

  const auto lines = element_lines(text);
  StrategyParams params(n);
  std::set<std::int64_t> seen;
  for (std::size_t idx = 0; idx < doc.size(); ++idx) {
    const std::size_t line = idx < lines.size() ? lines[idx] : 1;
    const auto& obj = doc[idx];
    if (!obj.is_object()) throw StrategyFileError(line, "entry must be an object");
    for (const auto& [key, _] : obj.items()) {
      if (key != "k" && key != "u" && key != "b") {
        throw StrategyFileError(line, "unknown key \"" + key + "\"");
      }
    }
    if (!obj.contains("k") || !obj.at("k").is_number_integer()) {
      throw StrategyFileError(line, "\"k\" must be an integer");
    }
    const auto k = obj.at("k").get<std::int64_t>();
    if (k < 0 || static_cast<std::size_t>(k) > n) {
      throw StrategyFileError(line, "k=" + std::to_string(k) + " outside [0, " +
                                        std::to_string(n) + "]");
    }
    if (!seen.insert(k).second) {
      throw StrategyFileError(line, "duplicate entry for k=" + std::to_string(k));
    }
    params.set(static_cast<std::size_t>(k), {unit_value(obj, "u", line), unit_value(obj, "b", line)});
  }
  return params;
}

StrategyParams load_strategy_params(const std::filesystem::path& path, std::size_t n) {
  std::ifstream in(path);
  if (!in) throw StrategyFileError(0, "cannot open strategy file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_strategy_params(buf.str(), n);
}

}  // namespace hqc
