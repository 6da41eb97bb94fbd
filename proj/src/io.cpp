#include "rwproj/io.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace rwproj {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_scale_history_csv(std::ostream& os, const ScaleHistory& hist) {
  os << "t,R,Rdot,Rddot,rho,lambda_tilde,rho_tilde\n";
  for (const auto& st : hist.samples) {
    os << format_double(st.t) << ',' << format_double(st.R) << ','
       << format_double(st.Rdot) << ',' << format_double(st.Rddot) << ','
       << format_double(dust_density(st.R, hist.params)) << ','
       << format_double(lambda_tilde(st, hist.params)) << ','
       << format_double(rho_tilde(st, hist.params)) << '\n';
  }
}

json scale_history_json(const ScaleHistory& hist) {
  json j;
  j["params"] = {{"kappa", hist.params.kappa},
                 {"G", hist.params.G},
                 {"M", hist.params.M},
                 {"s", hist.params.s}};
  j["t0"] = hist.t0;
  j["t1"] = hist.t1;
  j["hit_turning_point"] = hist.hit_turning_point;
  j["truncated_at_collapse"] = hist.truncated_at_collapse;
  json rows = json::array();
  for (const auto& st : hist.samples) {
    rows.push_back({{"t", st.t},
                    {"R", st.R},
                    {"Rdot", st.Rdot},
                    {"Rddot", st.Rddot},
                    {"rho", dust_density(st.R, hist.params)},
                    {"lambda_tilde", lambda_tilde(st, hist.params)},
                    {"rho_tilde", rho_tilde(st, hist.params)}});
  }
  j["samples"] = std::move(rows);
  return j;
}

void write_geodesic_path_csv(std::ostream& os, const GeodesicPath& path) {
  os << "lambda,t,x,y,z,v0,v1,v2,v3\n";
  for (const auto& smp : path.samples) {
    os << format_double(smp.lambda) << ',' << format_double(smp.p.t) << ','
       << format_double(smp.p.x) << ',' << format_double(smp.p.y) << ','
       << format_double(smp.p.z);
    for (int mu = 0; mu < 4; ++mu) os << ',' << format_double(smp.v(mu));
    os << '\n';
  }
}

json geodesic_path_json(const GeodesicPath& path) {
  json j;
  j["metric"] = to_string(path.metric_tag);
  j["causal_class"] = to_string(path.causal_class);
  j["norm0"] = path.norm0;
  j["max_norm_drift"] = path.max_norm_drift;
  json rows = json::array();
  for (const auto& smp : path.samples) {
    rows.push_back({{"lambda", smp.lambda},
                    {"t", smp.p.t},
                    {"x", smp.p.x},
                    {"y", smp.p.y},
                    {"z", smp.p.z},
                    {"v", {smp.v(0), smp.v(1), smp.v(2), smp.v(3)}}});
  }
  j["samples"] = std::move(rows);
  return j;
}

void write_normal_form_csv(std::ostream& os, const NormalFormMap& map) {
  os << "t,t_tilde,R_tilde\n";
  for (const auto& s : map.samples)
    os << format_double(s.t) << ',' << format_double(s.t_tilde) << ','
       << format_double(s.R_tilde) << '\n';
}

json normal_form_json(const NormalFormMap& map) {
  json j;
  j["max_component_mismatch"] = map.max_component_mismatch;
  json rows = json::array();
  for (const auto& s : map.samples)
    rows.push_back({{"t", s.t}, {"t_tilde", s.t_tilde}, {"R_tilde", s.R_tilde}});
  j["samples"] = std::move(rows);
  return j;
}

void write_suite_report_text(std::ostream& os, const SuiteReport& report) {
  os << "verification suite (seed " << report.seed << ")\n";
  for (const auto& c : report.checks) {
    os << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << ": worst "
       << format_double(c.worst) << " (tolerance " << format_double(c.tolerance)
       << ", " << c.samples << " samples";
    if (c.skipped > 0) os << ", " << c.skipped << " skipped";
    os << ")\n";
  }
  os << (report.all_pass() ? "all checks passed\n" : "CHECKS FAILED\n");
}

json suite_report_json(const SuiteReport& report) {
  json j;
  j["seed"] = report.seed;
  j["all_pass"] = report.all_pass();
  json rows = json::array();
  for (const auto& c : report.checks)
    rows.push_back({{"name", c.name},
                    {"samples", c.samples},
                    {"skipped", c.skipped},
                    {"worst_residual", c.worst},
                    {"tolerance", c.tolerance},
                    {"pass", c.pass}});
  j["checks"] = std::move(rows);
  return j;
}

CsvTable read_csv(std::istream& is) {
  CsvTable table;
  std::string line;
  if (!std::getline(is, line)) return table;
  std::stringstream hs(line);
  std::string cell;
  while (std::getline(hs, cell, ',')) table.header.push_back(cell);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ls(line);
    while (std::getline(ls, cell, ',')) {
      double v = 0.0;
      const auto res =
          std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (res.ec != std::errc())
        throw SingularInput("malformed CSV value: " + cell);
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

CsvTable read_csv_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw SingularInput("cannot open " + path.string());
  return read_csv(is);
}

void atomic_write_file(const std::filesystem::path& path,
                       const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw SingularInput("cannot write " + tmp.string());
    os << content;
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace rwproj
