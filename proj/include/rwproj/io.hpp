#ifndef RWPROJ_IO_HPP
#define RWPROJ_IO_HPP

// CSV/JSON emission for histories, paths and suite reports.  CSV carries a
// single header row and 17-significant-digit floats, so re-reading
// reproduces the in-memory doubles exactly; JSON mirrors the same fields.

#include "rwproj/cosmology.hpp"
#include "rwproj/geodesics.hpp"
#include "rwproj/oracle.hpp"

#include <nlohmann/json_fwd.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace rwproj {

std::string format_double(double v);  // shortest 17-significant-digit form

// ---- ScaleHistory: t,R,Rdot,Rddot,rho,lambda_tilde,rho_tilde -------------
void write_scale_history_csv(std::ostream& os, const ScaleHistory& hist);
nlohmann::json scale_history_json(const ScaleHistory& hist);

// ---- GeodesicPath: lambda,t,x,y,z,v0,v1,v2,v3 ----------------------------
void write_geodesic_path_csv(std::ostream& os, const GeodesicPath& path);
nlohmann::json geodesic_path_json(const GeodesicPath& path);

// ---- normal-form mapping: t,t_tilde,R_tilde ------------------------------
void write_normal_form_csv(std::ostream& os, const NormalFormMap& map);
nlohmann::json normal_form_json(const NormalFormMap& map);

// ---- verification suite report -------------------------------------------
void write_suite_report_text(std::ostream& os, const SuiteReport& report);
nlohmann::json suite_report_json(const SuiteReport& report);

// generic numeric CSV (round-trip checks and plotting-side consumers)
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};
CsvTable read_csv(std::istream& is);
CsvTable read_csv_file(const std::filesystem::path& path);

// write-then-rename so partial output never lands under the final name
void atomic_write_file(const std::filesystem::path& path,
                       const std::string& content);

}  // namespace rwproj

#endif
