// Command-line front end: dust cosmologies of the projectively equivalent
// Robertson-Walker family, geodesic comparisons across the family,
// dark-energy-type reinterpretation tables, and the verification suite.
//
// Exit codes: 0 success, 1 check failure, 2 input validation,
// 3 numerical failure.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rwproj/cosmology.hpp"
#include "rwproj/frame_geometry.hpp"
#include "rwproj/geodesics.hpp"
#include "rwproj/io.hpp"
#include "rwproj/oracle.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace rwproj;
using nlohmann::json;
namespace fs = std::filesystem;

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw SingularInput("cannot parse number: '" + cell + "'");
    }
  }
  if (out.empty()) throw SingularInput("empty list");
  return out;
}

Vec3 parse_vec3(const std::string& text) {
  const std::vector<double> v = parse_list(text);
  if (v.size() != 3) throw SingularInput("expected three components: " + text);
  return Vec3(v[0], v[1], v[2]);
}

std::string short_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

fs::path tagged_path(const fs::path& base, const std::string& tag) {
  fs::path p = base;
  const std::string stem = p.stem().string();
  const std::string ext = p.extension().string();
  p.replace_filename(stem + tag + ext);
  return p;
}

void emit(const fs::path& out, const std::string& content) {
  if (out.empty())
    std::cout << content;
  else
    atomic_write_file(out, content);
}

// background scale model for geodesic runs: analytic dust solution when
// M > 0, static otherwise
ScaleModel background_model(const CosmologyParams& params, double R0) {
  if (params.M > 0.0) {
    return [params](double t) { return analytic_scale(params, t); };
  }
  if (params.kappa == 1)
    throw SingularInput("kappa=+1 requires M > 0");
  return [R0](double t) { return ScaleState{t, R0, 0.0, 0.0}; };
}

struct EvolveArgs {
  CosmologyParams params;
  std::string s_list = "0";
  double R0 = 1.0, t0 = 0.0, t1 = 1.0;
  int samples = 200;
  bool allow_recollapse = false;
  int branch = +1;
  double tol = 1e-10;
  std::string out;
  std::string format = "csv";
};

void add_common_params(CLI::App* cmd, CosmologyParams& p) {
  cmd->add_option("--kappa", p.kappa, "curvature sign: -1, 0 or +1");
  cmd->add_option("--G", p.G, "gravitational constant (default 1)");
  cmd->add_option("--M", p.M, "dust mass parameter");
}

ScaleHistory solve_for(const EvolveArgs& a) {
  a.params.validate();
  FriedmannOptions opts;
  opts.rel_tol = a.tol;
  opts.n_output = a.samples;
  opts.allow_recollapse = a.allow_recollapse;
  opts.branch = a.branch;
  return solve_friedmann(a.params, a.R0, a.t0, a.t1, opts);
}

int cmd_evolve(const EvolveArgs& a) {
  const std::vector<double> svals = parse_list(a.s_list);
  ScaleHistory hist = solve_for(a);

  if (a.format == "json") {
    json doc;
    doc["histories"] = json::array();
    for (double s : svals) {
      hist.params.s = s;
      doc["histories"].push_back(scale_history_json(hist));
    }
    emit(a.out, doc.dump(2) + "\n");
    return 0;
  }
  for (double s : svals) {
    hist.params.s = s;
    std::ostringstream os;
    write_scale_history_csv(os, hist);
    if (a.out.empty()) {
      std::cout << "# s = " << format_double(s) << "\n" << os.str();
    } else {
      const fs::path path =
          svals.size() == 1 ? fs::path(a.out)
                            : tagged_path(a.out, "_s=" + short_double(s));
      emit(path, os.str());
    }
  }
  return 0;
}

int cmd_reinterpret(const EvolveArgs& a) {
  const std::vector<double> svals = parse_list(a.s_list);
  ScaleHistory hist = solve_for(a);

  bool energy_warned = false;
  json doc;
  doc["tables"] = json::array();
  for (double s : svals) {
    hist.params.s = s;
    json rows = json::array();
    std::ostringstream os;
    os << "t,R,rho,lambda_tilde,rho_tilde,u_tilde_factor\n";
    for (const auto& st : hist.samples) {
      const Reinterpretation r = reinterpret(st, hist.params);
      const double rho = dust_density(st.R, hist.params);
      os << format_double(st.t) << ',' << format_double(st.R) << ','
         << format_double(rho) << ',' << format_double(r.lambda_tilde) << ','
         << format_double(r.rho_tilde) << ','
         << format_double(r.u_tilde_factor) << '\n';
      rows.push_back({{"t", st.t},
                      {"R", st.R},
                      {"rho", rho},
                      {"lambda_tilde", r.lambda_tilde},
                      {"rho_tilde", r.rho_tilde},
                      {"u_tilde_factor", r.u_tilde_factor}});
      if (r.rho_tilde < 0.0 && !energy_warned) {
        std::cerr << "warning: rho_tilde < 0 at s=" << format_double(s)
                  << ", t=" << format_double(st.t)
                  << " (energy condition violated)\n";
        energy_warned = true;
      }
    }
    doc["tables"].push_back({{"s", s}, {"rows", rows}});
    if (a.format != "json") {
      if (a.out.empty()) {
        std::cout << "# s = " << format_double(s) << "\n" << os.str();
      } else {
        const fs::path path =
            svals.size() == 1 ? fs::path(a.out)
                              : tagged_path(a.out, "_s=" + short_double(s));
        emit(path, os.str());
      }
    }
  }
  if (a.format == "json") emit(a.out, doc.dump(2) + "\n");
  return 0;
}

struct GeoArgs {
  CosmologyParams params{0, 1.0, 2.0 / 9.0, 0.0};
  double t0 = 0.6;
  double R0 = 1.0;  // static background scale when M = 0
  std::string point = "0,0,0";
  std::string dir = "1,0,0";
  std::string cls = "null";
  double s = 0.0;
  double lambda_max = 0.0;  // 0: one Hubble time
  double tol = 1e-5;
  std::string out;
  std::string format = "csv";
};

int cmd_geodesic_compare(const GeoArgs& a) {
  CosmologyParams params = a.params;
  params.s = a.s;
  params.validate();

  const ScaleModel model = background_model(params, a.R0);
  const ScaleState st0 = model(a.t0);

  const Vec3 x0 = parse_vec3(a.point);
  const SpacetimePoint p0{a.t0, x0(0), x0(1), x0(2)};
  if (!(patch_factor(p0, params.kappa) > 0.0))
    throw PatchViolation("initial point outside the coordinate patch");

  CausalClass cls;
  if (a.cls == "timelike")
    cls = CausalClass::timelike;
  else if (a.cls == "null")
    cls = CausalClass::null;
  else if (a.cls == "spacelike")
    cls = CausalClass::spacelike;
  else
    throw SingularInput("--class must be timelike, null or spacelike");

  const double lambda_max =
      a.lambda_max > 0.0
          ? a.lambda_max
          : (st0.Rdot != 0.0 ? st0.R / std::abs(st0.Rdot) : 1.0);

  const GeodesicState init = init_geodesic(
      p0, parse_vec3(a.dir), cls, MetricTag::standard, st0, params.s);
  const GeodesicPath path_g =
      integrate_geodesic(init, MetricTag::standard, params, model, lambda_max);
  const GeodesicPath path_gt =
      integrate_geodesic(init, MetricTag::deformed, params, model, lambda_max);
  const double distance = path_distance(path_g, path_gt);

  if (!a.out.empty()) {
    for (const auto& [path, tag] :
         {std::pair{&path_g, "_standard"}, std::pair{&path_gt, "_deformed"}}) {
      std::ostringstream os;
      if (a.format == "json")
        os << geodesic_path_json(*path).dump(2) << "\n";
      else
        write_geodesic_path_csv(os, *path);
      emit(tagged_path(a.out, tag), os.str());
    }
  }

  std::cout << "geodesic comparison: kappa=" << params.kappa
            << " s=" << format_double(params.s) << " class=" << a.cls
            << " lambda_max=" << format_double(lambda_max) << "\n"
            << "  unparametrized path distance: " << format_double(distance)
            << " (tol " << format_double(a.tol) << ")\n"
            << "  norm drift: standard "
            << format_double(path_g.max_norm_drift) << ", deformed "
            << format_double(path_gt.max_norm_drift) << "\n"
            << (distance < a.tol ? "PASS\n" : "FAIL\n");
  return distance < a.tol ? 0 : 1;
}

struct NormalFormArgs {
  CosmologyParams params{0, 1.0, 2.0 / 9.0, 0.0};
  double R0 = 1.0, t0 = 1.0, t1 = 3.0;
  double s = 0.1;
  int samples = 200;
  double tol = 1e-10;
  std::string out;
  std::string format = "csv";
};

int cmd_normal_form(const NormalFormArgs& a) {
  CosmologyParams params = a.params;
  params.s = a.s;
  params.validate();
  FriedmannOptions opts;
  opts.rel_tol = a.tol;
  opts.n_output = a.samples;
  const ScaleHistory hist = solve_friedmann(params, a.R0, a.t0, a.t1, opts);
  const NormalFormMap map = rw_normal_form(hist, a.s);

  std::ostringstream os;
  if (a.format == "json") {
    json doc = normal_form_json(map);
    doc["s"] = a.s;
    os << doc.dump(2) << "\n";
  } else {
    write_normal_form_csv(os, map);
  }
  emit(a.out, os.str());
  std::cout << "normal form certificate: max component mismatch "
            << format_double(map.max_component_mismatch) << "\n";
  return 0;
}

struct VerifyArgs {
  std::uint64_t seed = 42;
  double fd_step = 1e-6;
  bool no_richardson = false;
  bool quick = false;
  bool singular_shell = false;
  int dirs = 2;
  std::string only;
  std::string out;
};

int cmd_verify(const VerifyArgs& a) {
  OracleConfig cfg;
  cfg.fd_step = a.fd_step;
  cfg.richardson = !a.no_richardson;
  SamplePlan plan;
  plan.seed = a.seed;
  plan.only = a.only;
  plan.geodesic_dirs_per_class = a.dirs;
  plan.include_singular_shell = a.singular_shell;
  if (a.quick) {
    plan.n_connection = 30;
    plan.n_einstein = 30;
    plan.n_weyl = 20;
    plan.geodesic_dirs_per_class = 1;
    plan.s_values = {-0.5, 0.1, 0.3};
  }
  const SuiteReport report = run_suite(cfg, plan);
  write_suite_report_text(std::cout, report);
  if (!a.out.empty())
    atomic_write_file(a.out, suite_report_json(report).dump(2) + "\n");
  return report.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Projectively equivalent Robertson-Walker metrics: dust cosmologies, "
      "shared geodesics, and the dark-energy-type reinterpretation"};
  app.require_subcommand(1);

  EvolveArgs ev;
  CLI::App* evolve = app.add_subcommand(
      "evolve", "solve the Friedmann dust equations and tabulate the "
                "reinterpretation columns for each s");
  add_common_params(evolve, ev.params);
  evolve->add_option("--R0", ev.R0, "scale factor at t0");
  evolve->add_option("--t0", ev.t0, "start time");
  evolve->add_option("--t1", ev.t1, "end time");
  evolve->add_option("--s", ev.s_list, "comma list of deformation parameters");
  evolve->add_option("--samples", ev.samples, "output rows (default 200)");
  evolve->add_option("--tol", ev.tol, "solver relative tolerance");
  evolve->add_flag("--allow-recollapse", ev.allow_recollapse,
                   "continue through the kappa=+1 turning point");
  evolve->add_option("--branch", ev.branch, "initial sign of Rdot (+1/-1)");
  evolve->add_option("--out", ev.out, "output path (stdout when omitted)");
  evolve->add_option("--format", ev.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  EvolveArgs re = ev;
  CLI::App* reint = app.add_subcommand(
      "reinterpret", "tabulate Lambda~, rho~ and the u~ factor along a dust "
                     "solution for each s");
  add_common_params(reint, re.params);
  reint->add_option("--R0", re.R0, "scale factor at t0");
  reint->add_option("--t0", re.t0, "start time");
  reint->add_option("--t1", re.t1, "end time");
  reint->add_option("--s", re.s_list, "comma list of deformation parameters");
  reint->add_option("--samples", re.samples, "output rows (default 200)");
  reint->add_option("--tol", re.tol, "solver relative tolerance");
  reint->add_flag("--allow-recollapse", re.allow_recollapse,
                  "continue through the kappa=+1 turning point");
  reint->add_option("--out", re.out, "output path (stdout when omitted)");
  reint->add_option("--format", re.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  GeoArgs ge;
  CLI::App* geo = app.add_subcommand(
      "geodesic-compare", "integrate the same initial ray as a geodesic of "
                          "both metrics and bound the path distance");
  add_common_params(geo, ge.params);
  geo->add_option("--s", ge.s, "deformation parameter");
  geo->add_option("--t0", ge.t0, "start time on the dust background");
  geo->add_option("--R0", ge.R0, "static background scale when M = 0");
  geo->add_option("--point", ge.point, "initial spatial point x,y,z");
  geo->add_option("--dir", ge.dir, "initial spatial direction x,y,z");
  geo->add_option("--class", ge.cls, "timelike, null or spacelike");
  geo->add_option("--lambda-max", ge.lambda_max,
                  "affine range (default: one Hubble time)");
  geo->add_option("--tol", ge.tol, "pass threshold on the path distance");
  geo->add_option("--out", ge.out, "path stem for the two trajectories");
  geo->add_option("--format", ge.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  NormalFormArgs nf;
  CLI::App* norm = app.add_subcommand(
      "normal-form", "map the deformed member back to Robertson-Walker form "
                     "(t~, R~) and certify the components");
  add_common_params(norm, nf.params);
  norm->add_option("--R0", nf.R0, "scale factor at t0");
  norm->add_option("--t0", nf.t0, "start time");
  norm->add_option("--t1", nf.t1, "end time");
  norm->add_option("--s", nf.s, "deformation parameter");
  norm->add_option("--samples", nf.samples, "output rows");
  norm->add_option("--tol", nf.tol, "solver relative tolerance");
  norm->add_option("--out", nf.out, "output path (stdout when omitted)");
  norm->add_option("--format", nf.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  VerifyArgs vf;
  CLI::App* verify = app.add_subcommand(
      "verify", "run the cross-check suite (closed forms vs oracles, "
                "projective equivalence, the reinterpretation, solver vs "
                "analytic solutions)");
  verify->add_option("--seed", vf.seed, "random seed (default 42)");
  verify->add_option("--fd-step", vf.fd_step,
                     "finite-difference step, relative (default 1e-6)");
  verify->add_flag("--no-richardson", vf.no_richardson,
                   "disable Richardson extrapolation");
  verify->add_flag("--quick", vf.quick, "reduced sample counts");
  verify->add_flag("--singular-shell", vf.singular_shell,
                   "include sR^2~1 samples (reported as skips)");
  verify->add_option("--dirs", vf.dirs, "geodesic directions per class");
  verify->add_option("--only", vf.only, "substring filter on check names");
  verify->add_option("--out", vf.out, "JSON report path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*evolve) return cmd_evolve(ev);
    if (*reint) return cmd_reinterpret(re);
    if (*geo) return cmd_geodesic_compare(ge);
    if (*norm) return cmd_normal_form(nf);
    if (*verify) return cmd_verify(vf);
  } catch (const SingularInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const PatchViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DegenerateDirection& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
