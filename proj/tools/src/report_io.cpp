#include "hqc_tools/report_io.hpp"

#include <cstdio>

namespace hqc::io {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json to_json(const SimReport& report) {
  nlohmann::json tail = nlohmann::json::array();
  for (const auto& p : report.tail) tail.push_back({p.t, p.p, p.half_width});
  nlohmann::json j{
      {"replicas", report.replicas},
      {"seed", report.seed},
      {"tail", tail},
      {"mean_tau", nullptr},
      {"se", nullptr},
      {"censored", report.censored},
      {"censored_fraction", report.censored_fraction},
      {"dkw_epsilon", report.dkw_epsilon},
      {"max_events", report.max_events},
  };
  if (report.mean_tau) j["mean_tau"] = *report.mean_tau;
  if (report.se) j["se"] = *report.se;
  return j;
}

nlohmann::json to_json(const CheckResult& check) {
  return {{"name", check.name},         {"grid", check.grid},
          {"max_residual", check.max_residual}, {"tolerance", check.tolerance},
          {"pass", check.pass},         {"notes", check.notes}};
}

void write_tail_csv(std::ostream& os, const SimReport& report) {
  os << "t,p,hw\n";
  for (const auto& p : report.tail) {
    os << format_double(p.t) << ',' << format_double(p.p) << ',' << format_double(p.half_width)
       << '\n';
  }
}

void write_tv_csv(std::ostream& os, const TvCurve& curve) {
  os << "t,tv\n";
  for (const auto& [t, v] : curve.samples) os << format_double(t) << ',' << format_double(v) << '\n';
}

void write_gap_csv(std::ostream& os, const std::vector<GapRow>& rows) {
  os << "k,t,tv,vhat,gap\n";
  for (const auto& r : rows) {
    os << r.k << ',' << format_double(r.t) << ',' << format_double(r.gap.tv) << ','
       << format_double(r.gap.vhat) << ',' << format_double(r.gap.gap) << '\n';
  }
}

void write_vhat_csv(std::ostream& os, const std::vector<VhatRow>& rows) {
  os << "k,t,vhat\n";
  for (const auto& r : rows) {
    os << r.k << ',' << format_double(r.t) << ',' << format_double(r.vhat) << '\n';
  }
}

nlohmann::json envelope(const std::string& command, const nlohmann::json& config,
                        const nlohmann::json& payload) {
  nlohmann::json j{{"schema_version", kSchemaVersion}, {"command", command}, {"config", config}};
  for (const auto& [key, value] : payload.items()) j[key] = value;
  return j;
}

}  // namespace hqc::io
