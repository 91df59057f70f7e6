#include "cts/bifurcation.hpp"
#include "cts/dynamics.hpp"
#include "cts/limits.hpp"
#include "cts/scan.hpp"
#include "cts/validation.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace
{

using namespace cts;

enum Exit
{
  kOk = 0,
  kValidateFailed = 1,
  kInadmissible = 2,
  kNumerical = 3,
  kIO = 4,
  kStall = 5,
};

Precision parse_precision(const std::string &s)
{
  if (s == "double")
    return Precision::Double;
  if (s == "extended")
    return Precision::Extended;
  if (s == "wide")
    return Precision::Wide;
  throw DomainError("unknown precision: " + s);
}

std::string precision_name(Precision p)
{
  return p == Precision::Double ? "double" : p == Precision::Extended ? "extended" : "wide";
}

void write_text(const std::string &path, const std::string &text)
{
  std::ofstream os(path);
  if (!os)
    throw IOError("cannot open " + path);
  os << text << '\n';
  if (!os)
    throw IOError("write failed: " + path);
}

void write_provenance(const std::string &path, const std::string &command, Precision precision,
                      const nlohmann::ordered_json &inputs)
{
  nlohmann::ordered_json j;
  j["output"] = path;
  j["command"] = command;
  j["version"] = kVersion;
  j["precision"] = precision_name(precision);
  j["inputs"] = inputs;
  write_text(path + ".json", j.dump(2));
}

std::string command_line(int argc, char **argv)
{
  std::string s;
  for (int i = 0; i < argc; ++i)
    s += (i ? " " : "") + std::string(argv[i]);
  return s;
}

BifKind parse_kind(const std::string &s)
{
  if (s == "HH")
    return BifKind::HH;
  if (s == "EH")
    return BifKind::EH;
  throw DomainError("kind must be HH or EH");
}

nlohmann::ordered_json trace_both(const BifurcationPoint &seed, const std::string &label)
{
  nlohmann::ordered_json j;
  j["seed"] = {{"label", label}, {"gamma", seed.gamma}, {"z", seed.z}, {"kind", to_string(seed.kind)}};
  j["branches"] = nlohmann::json::array();
  for (int dir : {1, -1})
  {
    const auto c = trace_curve(seed, dir);
    auto b = nlohmann::ordered_json::parse(c.to_json());
    b["direction"] = dir;
    j["branches"].push_back(b);
  }
  return j;
}

void print_curve_summary(const nlohmann::ordered_json &j)
{
  std::printf("%s seed (%.6g, %.10f):\n", j["seed"]["kind"].get<std::string>().c_str(),
              j["seed"]["gamma"].get<double>(), j["seed"]["z"].get<double>());
  for (const auto &b : j["branches"])
  {
    const auto &last = b["points"].back();
    std::printf("  direction %+d: %zu points, ends at (%.6g, %.8f): %s", b["direction"].get<int>(),
                b["points"].size(), last["gamma"].get<double>(), last["z"].get<double>(),
                b["stop_reason"].get<std::string>().c_str());
    if (!b["endpoints"]["gamma0_limit"].is_null())
      std::printf(" [Gamma=0 at z=%.10f]", b["endpoints"]["gamma0_limit"].get<double>());
    std::printf("\n");
  }
}

int run(int argc, char **argv)
{
  CLI::App app{"Spectral stability of tetrahedral relative equilibria on the sphere"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string precision_s = "double";
  int threads = 0;
  app.add_option("--precision", precision_s, "double | extended | wide")
      ->check(CLI::IsMember({"double", "extended", "wide"}));
  app.add_option("--threads", threads, "worker threads (default: CTS_THREADS or all cores)")
      ->check(CLI::NonNegativeNumber);

  // spectrum
  auto *sp = app.add_subcommand("spectrum", "roots and class at one point");
  double sp_gamma = 0, sp_z = 0;
  bool sp_verify = false, sp_allow_boundary = false;
  std::string sp_json;
  sp->add_option("--gamma", sp_gamma, "mass ratio m1/m")->required();
  sp->add_option("--z", sp_z, "latitude of the triangle")->required();
  sp->add_flag("--verify", sp_verify, "cross-check against the eigenvalues of Df");
  sp->add_flag("--allow-boundary", sp_allow_boundary, "evaluate points with Omega^2 <= 0");
  sp->add_option("--json", sp_json, "write the report to this file");

  // scan
  auto *sc = app.add_subcommand("scan", "classify a (Gamma, z) grid");
  std::string sc_grid, sc_ppm, sc_csv;
  sc->add_option("--grid", sc_grid, "grid spec (JSON)")->required();
  sc->add_option("--ppm", sc_ppm, "PPM output");
  sc->add_option("--csv", sc_csv, "CSV output");

  // bifurcate
  auto *bf = app.add_subcommand("bifurcate", "locate and trace bifurcation curves");
  std::string bf_set, bf_seed, bf_kind = "HH", bf_json;
  bf->add_option("--seed-set", bf_set, "named seed set")->check(CLI::IsMember({"paper"}));
  bf->add_option("--seed", bf_seed, "seed point G,Z");
  bf->add_option("--kind", bf_kind, "HH | EH")->check(CLI::IsMember({"HH", "EH"}));
  bf->add_option("--json", bf_json, "write curves and constants to this file");

  // validate
  auto *va = app.add_subcommand("validate", "run acceptance suites");
  std::string va_suite = "all", va_json;
  va->add_option("--suite", va_suite, "suite name")->check(CLI::IsMember(suite_names()));
  va->add_option("--json", va_json, "write the report to this file");

  // integrate
  auto *in = app.add_subcommand("integrate", "integrate a relative-equilibrium orbit");
  double in_gamma = 1, in_z = 0.5, in_periods = 1, in_tol = 1e-12;
  std::string in_csv;
  in->add_option("--gamma", in_gamma, "mass ratio m1/m");
  in->add_option("--z", in_z, "latitude of the triangle");
  in->add_option("--periods", in_periods, "number of periods")->check(CLI::PositiveNumber);
  in->add_option("--tol", in_tol, "integrator tolerance")->check(CLI::Range(1e-14, 1e-6));
  in->add_option("--csv", in_csv, "trajectory CSV");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    return app.exit(e) == 0 ? kOk : kInadmissible;
  }

  const Precision precision = parse_precision(precision_s);
  const std::string cmd = command_line(argc, argv);

  if (*sp)
  {
    const MassConfig masses{1.0, sp_gamma};
    SpectrumOptions opt;
    opt.precision = precision;
    opt.verify = sp_verify;
    SpectrumReport rep;
    const auto ds = derived_scalars(masses, sp_z);
    if (!ds.admissible() && !sp_allow_boundary)
    {
      std::fprintf(stderr, "inadmissible point: Omega^2 = %.6g\n", ds.omega_sq);
      return kInadmissible;
    }
    if (ds.admissible())
      rep = spectrum_at(masses, sp_z, opt);
    else
    {
      const auto p = reduced_poly(masses, sp_z);
      rep = classify_monic(p, opt.classify);
      rep.gamma = sp_gamma;
      rep.z = sp_z;
      rep.omega_sq = ds.omega_sq;
    }
    std::printf("class %s%s\n", to_string(rep.code).c_str(), rep.degenerate ? " (degenerate)" : "");
    for (int i = 0; i < 6; ++i)
      std::printf("  M%d = %+.15e %+.15e i   residual %.2e\n", i + 1, rep.roots[i].real(), rep.roots[i].imag(),
                  rep.residuals[i]);
    if (sp_verify)
      std::printf("eig(Df) mismatch %.3e\n", rep.verify_error);
    if (!sp_json.empty())
    {
      write_text(sp_json, rep.to_json());
      write_provenance(sp_json, cmd, precision, {{"gamma", sp_gamma}, {"z", sp_z}});
    }
    return kOk;
  }

  if (*sc)
  {
    GridSpec spec = GridSpec::load(sc_grid);
    if (app.get_option("--precision")->count() > 0)
      spec.precision = precision;
    const auto map = run_scan(spec, threads);
    if (!sc_ppm.empty())
    {
      render_ppm(map, sc_ppm);
      write_sidecar(sc_ppm, spec, cmd);
    }
    if (!sc_csv.empty())
    {
      export_grid(map, sc_csv);
      write_sidecar(sc_csv, spec, cmd);
    }
    std::map<std::string, int> counts;
    for (const auto &c : map.cells)
      ++counts[to_string(c.color())];
    for (const auto &[k, v] : counts)
      std::printf("%-10s %d\n", k.c_str(), v);
    return kOk;
  }

  if (*bf)
  {
    if (bf_set.empty() == bf_seed.empty())
    {
      std::fprintf(stderr, "give exactly one of --seed-set or --seed\n");
      return kInadmissible;
    }
    nlohmann::ordered_json out;
    if (!bf_set.empty())
    {
      nlohmann::ordered_json consts = nlohmann::json::array();
      std::printf("%-14s %-28s %-22s %s\n", "name", "computed", "reference", "match");
      for (const auto &c : limit_endpoints())
      {
        const bool ok = c.error <= c.tolerance;
        std::printf("%-14s %-28s %-22s %s\n", c.name.c_str(), c.value.c_str(), c.reference.c_str(),
                    ok ? "yes" : "NO");
        consts.push_back({{"name", c.name}, {"value", c.value}, {"reference", c.reference}, {"error", c.error},
                          {"tolerance", c.tolerance}, {"match", ok}});
      }
      out["constants"] = consts;
      out["curves"] = nlohmann::json::array();
      const std::vector<std::pair<std::string, double>> seeds = {
          {"-z1", -0.8299852976470169}, {"-z2", -0.7318602978602651}, {"-z3", -0.3702483631504248},
          {"z4", -0.7389177458229170},  {"z5", -0.2839588732787964}};
      for (const auto &[label, z] : seeds)
      {
        auto j = trace_both(seed_point(0.0, z, BifKind::HH), label);
        print_curve_summary(j);
        out["curves"].push_back(j);
      }
      const double ze = -0.02;
      auto j = trace_both(seed_point(near00_gamma_eh(ze), ze, BifKind::EH), "near-origin EH");
      print_curve_summary(j);
      out["curves"].push_back(j);
    }
    else
    {
      double g = 0, z = 0;
      char comma = 0;
      std::istringstream is(bf_seed);
      if (!(is >> g >> comma >> z) || comma != ',')
        throw DomainError("--seed expects G,Z");
      auto j = trace_both(seed_point(g, z, parse_kind(bf_kind)), "seed");
      print_curve_summary(j);
      out["curves"] = nlohmann::json::array({j});
    }
    if (!bf_json.empty())
    {
      write_text(bf_json, out.dump(2));
      write_provenance(bf_json, cmd, precision, {{"seed_set", bf_set}, {"seed", bf_seed}, {"kind", bf_kind}});
    }
    return kOk;
  }

  if (*va)
  {
    const auto results = run_suite(va_suite, threads);
    const std::string report = results_json(results);
    std::printf("%s\n", report.c_str());
    if (!va_json.empty())
      write_text(va_json, report);
    for (const auto &r : results)
      if (!r.pass)
        return kValidateFailed;
    return kOk;
  }

  if (*in)
  {
    const MassConfig masses{1.0, in_gamma};
    const auto eq = make_equilibrium(masses, in_z);
    const auto start = eq.cartesian_at(0.0);
    const double t_end = in_periods * eq.period();
    const auto traj = integrate(start, masses, t_end, in_tol);
    const auto ref = eq.cartesian_at(t_end);
    double dev = 0;
    for (int i = 0; i < kBodies; ++i)
      dev = std::max({dev, (traj.final_state().q[i] - ref.q[i]).cwiseAbs().maxCoeff(),
                      (traj.final_state().v[i] - ref.v[i]).cwiseAbs().maxCoeff()});
    std::printf("period %.15g, steps %zu\n", eq.period(), traj.rows.size() - 1);
    std::printf("deviation from the rigid rotation %.3e\n", dev);
    std::printf("energy drift %.3e, Lz drift %.3e, constraint %.3e\n", traj.energy_drift,
                traj.angular_momentum_drift, traj.max_constraint_violation);
    if (!in_csv.empty())
    {
      std::ofstream os(in_csv);
      if (!os)
        throw IOError("cannot open " + in_csv);
      traj.write_csv(os);
      if (!os)
        throw IOError("write failed: " + in_csv);
      write_provenance(in_csv, cmd, Precision::Double,
                       {{"gamma", in_gamma}, {"z", in_z}, {"periods", in_periods}, {"tol", in_tol}});
    }
    return kOk;
  }
  return kOk;
}

} // namespace

int main(int argc, char **argv)
{
  try
  {
    return run(argc, argv);
  }
  catch (const cts::IOError &e)
  {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return kIO;
  }
  catch (const cts::ContinuationStall &e)
  {
    std::fprintf(stderr, "continuation stalled: %s\n", e.what());
    return kStall;
  }
  catch (const cts::AdmissibilityError &e)
  {
    std::fprintf(stderr, "inadmissible: %s\n", e.what());
    return kInadmissible;
  }
  catch (const cts::DomainError &e)
  {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return kInadmissible;
  }
  catch (const std::exception &e)
  {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kNumerical;
  }
}
