#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "hqc/sim_engine.hpp"
#include "hqc/tv_distance.hpp"
#include "hqc/verify.hpp"

namespace hqc::io {

inline constexpr int kSchemaVersion = 1;

/// %.17g, enough digits to round-trip any double.
std::string format_double(double v);

nlohmann::json to_json(const SimReport& report);
nlohmann::json to_json(const CheckResult& check);

/// Columns t,p,hw.
void write_tail_csv(std::ostream& os, const SimReport& report);

/// Columns t,tv.
void write_tv_csv(std::ostream& os, const TvCurve& curve);

struct GapRow {
  int k = 0;
  double t = 0.0;
  CouplingGap gap;
};

/// Columns k,t,tv,vhat,gap.
void write_gap_csv(std::ostream& os, const std::vector<GapRow>& rows);

struct VhatRow {
  int k = 0;
  double t = 0.0;
  double vhat = 0.0;
};

/// Columns k,t,vhat.
void write_vhat_csv(std::ostream& os, const std::vector<VhatRow>& rows);

/// Wraps a payload with the schema version, the subcommand and its resolved
/// configuration.
nlohmann::json envelope(const std::string& command, const nlohmann::json& config,
                        const nlohmann::json& payload);

}  // namespace hqc::io
