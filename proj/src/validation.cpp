#include "cts/validation.hpp"

#include "cts/bifurcation.hpp"
#include "cts/dynamics.hpp"
#include "cts/limits.hpp"
#include "cts/linearization.hpp"
#include "cts/scan.hpp"
#include "cts/solve.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>

namespace cts
{

double loglog_slope(const std::vector<double> &x, const std::vector<double> &y)
{
  const double n = double(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
  {
    const double a = std::log(x[i]), b = std::log(y[i]);
    sx += a;
    sy += b;
    sxx += a * a;
    sxy += a * b;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

namespace
{

using Clock = std::chrono::steady_clock;
using W = Wide;
using E = Extended;

// Reference latitudes at Gamma = 0.
constexpr double kZ1 = 0.8299852976470169;
constexpr double kZ2 = 0.7318602978602651;
constexpr double kZ3 = 0.3702483631504248;
constexpr double kZ4 = -0.7389177458229170;
constexpr double kZ5 = -0.2839588732787964;
constexpr double kR1[] = {-0.736842605000, -0.330240264422, -0.114735617843, -0.071519103755};

CriterionResult timed(int id, const std::string &name, double budget,
                      const std::function<bool(CriterionResult &)> &body)
{
  CriterionResult r;
  r.id = id;
  r.name = name;
  r.budget_seconds = budget;
  const auto t0 = Clock::now();
  bool ok = false;
  try
  {
    ok = body(r);
  }
  catch (const std::exception &e)
  {
    r.detail += std::string(r.detail.empty() ? "" : "; ") + "exception: " + e.what();
    ok = false;
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  r.pass = ok && r.seconds < budget;
  if (ok && !r.pass)
    r.detail += "; over the time budget";
  return r;
}

std::string fmt(double v)
{
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

// Admissible test grid: Gamma spans (0, 1.9] for z > 0 and a fraction of
// Gamma*(z) below the existence boundary for z < 0.
std::vector<std::pair<double, double>> admissible_grid(int nz, int ng)
{
  std::vector<std::pair<double, double>> pts;
  for (int j = 0; j < nz; ++j)
  {
    const double z = -0.95 + 1.9 * (j + 0.5) / nz;
    for (int i = 0; i < ng; ++i)
    {
      const double frac = (i + 0.5) / ng;
      const double g = z > 0 ? 1.9 * frac : 0.95 * gamma_star(z) * frac;
      pts.push_back({g, z});
    }
  }
  return pts;
}

/// Greedy one-to-one matching of predictions to roots by distance.
std::vector<int> match(const std::vector<Complex<W>> &pred, const std::vector<Complex<W>> &roots)
{
  struct Cand
  {
    W d;
    int i, j;
  };
  std::vector<Cand> c;
  for (int i = 0; i < int(pred.size()); ++i)
    for (int j = 0; j < int(roots.size()); ++j)
      c.push_back({W(abs(pred[i] - roots[j])), i, j});
  std::sort(c.begin(), c.end(), [](const Cand &a, const Cand &b) { return a.d < b.d; });
  std::vector<int> out(pred.size(), -1);
  std::vector<bool> used(roots.size(), false);
  for (const auto &k : c)
    if (out[k.i] < 0 && !used[k.j])
    {
      out[k.i] = k.j;
      used[k.j] = true;
    }
  return out;
}

std::vector<Complex<W>> roots_w(const W &m, const W &m1, const W &z)
{
  return poly_roots(reduced_poly(MassConfigT<W>{m, m1}, z));
}

struct SlopeCheck
{
  std::string name;
  double nominal;
  std::vector<double> x, err;
};

} // namespace

CriterionResult criterion_jacobian()
{
  return timed(1, "jacobian", 10, [](CriterionResult &r) {
    double worst = 0;
    for (const auto &[g, z] : admissible_grid(10, 10))
    {
      const MassConfig m{1.0, g};
      const double e = jacobian_relative_error(full_jacobian(assemble_blocks(m, z)), fd_jacobian(m, z, 1e-5));
      worst = std::max(worst, e);
    }
    r.metrics.push_back({"max_relative_error", worst});
    r.detail = "max relative error " + fmt(worst) + " over 100 points (limit 1e-6)";
    return worst < 1e-6;
  });
}

CriterionResult criterion_pencil()
{
  return timed(2, "pencil_eigenvalues", 10, [](CriterionResult &r) {
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> uz(-0.95, 0.95), ug(0.0, 2.0);
    double worst = 0, worst_double = 0;
    int n = 0;
    while (n < 50)
    {
      const double z = uz(rng), g = ug(rng);
      if (std::abs(z) < 0.05)
        continue;
      const MassConfig m{1.0, g};
      if (!derived_scalars(m, z).admissible())
        continue;
      SpectrumOptions opt;
      opt.verify = true;
      worst_double = std::max(worst_double, spectrum_at(m, z, opt).verify_error);
      opt.precision = Precision::Extended;
      worst = std::max(worst, spectrum_at(m, z, opt).verify_error);
      ++n;
    }
    r.metrics.push_back({"max_mismatch", worst});
    r.metrics.push_back({"max_mismatch_double_pencil", worst_double});
    r.detail = "max eigenvalue mismatch " + fmt(worst) + " at 50 random points (limit 1e-8); double-precision pencil " +
               fmt(worst_double);
    return worst < 1e-8;
  });
}

CriterionResult criterion_deflation()
{
  return timed(3, "deflation_remainders", 30, [](CriterionResult &r) {
    double worst = 0;
    for (const auto &[g, z] : admissible_grid(100, 100))
    {
      const auto jb = assemble_blocks(MassConfig{1.0, g}, z);
      const auto d = deflate(pencil_poly(jb), z, 1.0);
      worst = std::max({worst, d.remainder_M, d.remainder_M1});
    }
    r.metrics.push_back({"max_remainder", worst});
    r.detail = "max relative remainder " + fmt(worst) + " at 10^4 points (limit 1e-9)";
    return worst < 1e-9;
  });
}

CriterionResult criterion_constants()
{
  return timed(4, "limit_constants", 300, [](CriterionResult &r) {
    bool ok = true;
    std::string bad;
    for (const auto &c : limit_endpoints())
    {
      r.metrics.push_back({c.name, c.error});
      if (!(c.error <= c.tolerance))
      {
        ok = false;
        bad += " " + c.name;
      }
    }
    ok = ok && r.metrics.size() == 13;
    r.detail = ok ? "13 constants matched to their reference digits" : "mismatch:" + bad;
    return ok;
  });
}

CriterionResult criterion_transversality()
{
  return timed(5, "transversality_signs", 60, [](CriterionResult &r) {
    auto window = [](double z) {
      double w = 0;
      for (int k = -10; k <= 10; ++k)
        if (k != 0)
          w = std::max(w, std::abs(disc_gamma_derivative_at_zero(z + 0.001 * k)));
      return w;
    };
    const double d4 = disc_gamma_derivative_at_zero(kZ4);
    const double d5 = disc_gamma_derivative_at_zero(kZ5);
    r.metrics.push_back({"d_gamma_disc_z4", d4});
    r.metrics.push_back({"d_gamma_disc_z5", d5});
    const bool nonzero = std::abs(d4) > 1e-3 * window(kZ4) && std::abs(d5) > 1e-3 * window(kZ5);
    const bool opposite = (d4 < 0) != (d5 < 0);
    double worst = 0;
    for (int i = 0; i < 4; ++i)
    {
      const double rel = std::abs(disc_gamma_derivative_at_zero(kR1[i])) / window(kR1[i]);
      r.metrics.push_back({"relative_R1_" + std::to_string(i + 1), rel});
      worst = std::max(worst, rel);
    }
    const bool flat = worst < 1e-3;
    r.detail = "derivatives " + fmt(d4) + " (z4) and " + fmt(d5) + " (z5): " +
               (nonzero ? "nonzero" : "not separated from zero") + ", " +
               (opposite ? "opposite signs" : "same sign") + "; largest relative value at the four R1 zeros " +
               fmt(worst);
    return nonzero && opposite && flat;
  });
}

CriterionResult criterion_regions(int threads)
{
  return timed(6, "region_map", 120, [threads](CriterionResult &r) {
    GridSpec spec;
    spec.gamma_min = 0;
    spec.gamma_max = 2;
    spec.n_gamma = 400;
    spec.z_min = -1;
    spec.z_max = 1;
    spec.n_z = 400;
    const auto map = run_scan(spec, threads);
    const auto comps = label_components(map);
    std::vector<std::string> fails;

    // Red components large enough not to be boundary aliasing.
    std::vector<Component> red;
    for (const auto &c : comps)
      if (c.color == CellColor::E6 && c.size >= 10)
        red.push_back(c);
    int sliver = 0, upper = 0, lower_a = 0, lower_b = 0;
    for (const auto &c : red)
    {
      const double lo = spec.z_at(c.j_min), hi = spec.z_at(c.j_max);
      if (c.i_min != 0)
        continue;
      if (lo > 0 && lo < 0.01)
        ++sliver;
      else if (hi < 0 && lo > -kZ1 - 0.03 && hi < -kZ2 + 0.03)
        ++upper;
      else if (hi < 0 && lo > -kZ3 - 0.01 && hi < kZ5)
        ++lower_a;
      else if (hi < 0 && lo > kZ5)
        ++lower_b;
    }
    r.metrics.push_back({"red_components", double(red.size())});
    if (red.size() != 4 || sliver != 1 || upper != 1 || lower_a != 1 || lower_b != 1)
      fails.push_back("red components " + std::to_string(red.size()) + " (sliver " + std::to_string(sliver) +
                      ", upper band " + std::to_string(upper) + ", lower band halves " +
                      std::to_string(lower_a) + "+" + std::to_string(lower_b) + ")");

    // Colour sequence along the first column for z > 0.
    std::vector<std::pair<CellColor, double>> runs;
    for (int j = 0; j < spec.n_z; ++j)
    {
      const double z = spec.z_at(j);
      if (z < 0)
        continue;
      const CellColor c = map.at(0, j).color();
      if (runs.empty() || runs.back().first != c)
        runs.push_back({c, z});
    }
    const std::vector<CellColor> want = {CellColor::E6, CellColor::E4CS1, CellColor::E2CS2, CellColor::E4CS1,
                                         CellColor::E2CS2};
    bool seq = runs.size() == want.size();
    for (std::size_t k = 0; seq && k < want.size(); ++k)
      seq = runs[k].first == want[k];
    if (seq)
    {
      const double edges[] = {kZ3, kZ2, kZ1};
      for (int k = 0; k < 3; ++k)
      {
        const double dev = std::abs(runs[k + 2].second - edges[k]);
        r.metrics.push_back({"band_edge_" + std::to_string(k + 1), runs[k + 2].second});
        if (dev > 0.01)
          seq = false;
      }
    }
    if (!seq)
      fails.push_back("z > 0 band sequence at the smallest Gamma does not follow z3 < z2 < z1");

    // Forbidden cells: exactly Gamma > Gamma*(z), up to one cell.
    const double dg = (spec.gamma_max - spec.gamma_min) / spec.n_gamma;
    int misplaced = 0;
    for (int i = 0; i < spec.n_gamma; ++i)
      for (int j = 0; j < spec.n_z; ++j)
      {
        const double g = spec.gamma_at(i), z = spec.z_at(j);
        const bool expect = z < 0 && g > gamma_star(z);
        const bool near = z < 0 && std::abs(g - gamma_star(z)) < dg;
        if (!near && expect != map.at(i, j).forbidden)
          ++misplaced;
      }
    int white = 0;
    for (const auto &c : comps)
      if (c.color == CellColor::Forbidden)
        ++white;
    r.metrics.push_back({"forbidden_misplaced", double(misplaced)});
    if (misplaced != 0 || white != 1)
      fails.push_back("forbidden wedge: " + std::to_string(misplaced) + " misplaced cells, " + std::to_string(white) +
                      " components");

    int promoted = 0;
    for (const auto &c : map.cells)
      promoted += c.promoted;
    r.metrics.push_back({"promoted_cells", double(promoted)});
    if (fails.empty())
      r.detail = "4 red components (z>0 sliver, one band in (-z1,-z2), two halves of (-z3,0) split near z5); "
                 "band edges at z3, z2, z1; one forbidden wedge";
    else
      for (const auto &f : fails)
        r.detail += (r.detail.empty() ? "" : "; ") + f;
    return fails.empty();
  });
}

CriterionResult criterion_branches()
{
  return timed(7, "branch_convergence", 60, [](CriterionResult &r) {
    std::vector<SlopeCheck> checks;
    auto add = [&](const std::string &name, double nominal) -> SlopeCheck & {
      for (auto &c : checks)
        if (c.name == name)
          return c;
      checks.push_back({name, nominal, {}, {}});
      return checks.back();
    };
    auto decade = [](double top, int k) { return top * std::pow(10.0, -0.5 * k); };

    // Small eps = m/m1 at fixed z.
    {
      const W z = W(0.3);
      for (int k = 0; k <= 4; ++k)
      {
        const double eps = decade(1e-4, k);
        const auto roots = roots_w(W(eps), W(1), z);
        const auto br = eps_branches(z, W(eps));
        W m0 = W(1e300);
        for (const auto &x : roots)
          m0 = std::min(m0, W(abs(x - br[0].value)));
        add("M0_eps", 1.5).x.push_back(eps);
        add("M0_eps", 1.5).err.push_back(to_double(m0));
        const auto idx = match({br[1].value, br[2].value}, roots);
        for (int s = 0; s < 2; ++s)
        {
          auto &c = add(br[1 + s].name, 2.0);
          c.x.push_back(eps);
          c.err.push_back(to_double(abs(br[1 + s].value - roots[idx[s]])));
        }
      }
    }
    // Small-z forms of the limit quartic roots, relative error.
    {
      const W eps = W(1e-3);
      const double nominal[] = {2, 1, 1, 1};
      for (int k = 0; k <= 4; ++k)
      {
        const double z = decade(1e-3, k);
        const auto q = poly_roots(limit_quartic(W(z)));
        const auto br = eps_branches(W(z), eps);
        std::vector<Complex<W>> forms;
        for (int i = 0; i < 4; ++i)
          forms.push_back((br[3 + i].value + Complex<W>(1)) / eps);
        const auto idx = match(forms, q);
        for (int i = 0; i < 4; ++i)
        {
          auto &c = add(br[3 + i].name, nominal[i]);
          c.x.push_back(z);
          c.err.push_back(to_double(abs(forms[i] - q[idx[i]]) / abs(q[idx[i]])));
        }
      }
    }
    // Small z at fixed Gamma = 1.
    {
      const double nominal[] = {3, 3, 2, 3, 4, 4};
      for (int k = 0; k <= 4; ++k)
      {
        const double z = decade(1e-3, k);
        const auto roots = roots_w(W(1), W(1), W(z));
        const auto br = smallz_branches(W(1), W(z));
        std::vector<Complex<W>> pred;
        for (const auto &b : br)
          pred.push_back(b.value);
        const auto idx = match(pred, roots);
        for (std::size_t i = 0; i < br.size(); ++i)
        {
          auto &c = add(br[i].name, nominal[i]);
          c.x.push_back(z);
          c.err.push_back(to_double(abs(pred[i] - roots[idx[i]])));
        }
      }
    }
    // Curves through the origin: relative error of Gamma at fixed z < 0.
    for (int k = 0; k <= 4; ++k)
    {
      const double zd = -decade(1e-2, k);
      const E z(zd);
      auto p0 = [&](const E &g) { return reduced_poly(MassConfigT<E>{E(1), g}, z)[0]; };
      const E pe = near00_gamma_eh(z);
      const auto be = sign_changes<E>(p0, pe * E(0.5), pe * E(2), 20);
      if (be.size() != 1)
        throw ConvergenceError("near-origin EH curve not bracketed");
      const E ge = solve_bracketed<E>(p0, be[0].first, be[0].second, 120);
      auto &ce = add("near00_eh", 2.0);
      ce.x.push_back(-zd);
      ce.err.push_back(to_double(abs(ge / pe - 1)));

      const W zw(zd);
      auto disc = [&](const W &g) { return discriminant(reduced_poly(MassConfigT<W>{W(1), g}, zw)); };
      const W ph = near00_gamma_hh_neg(zw), gs = gamma_star(zw);
      const W span = gs - ph;
      std::optional<W> best;
      for (const auto &b : sign_changes<W>(disc, ph - 2 * span, gs - span / 1000, 120))
      {
        const W g = solve_bracketed<W>(disc, b.first, b.second, 200);
        if (!best || abs(g - ph) < abs(*best - ph))
          best = g;
      }
      if (!best)
        throw ConvergenceError("boundary double-root curve not bracketed");
      auto &ch = add("near00_hh_neg", 2.0);
      ch.x.push_back(-zd);
      ch.err.push_back(to_double(abs(*best / ph - 1)));
    }
    // Near the existence boundary, along gap = 1e-5 z^4 with z -> 0-.
    {
      const std::map<std::string, double> nominal = {{"chi1_a", 1},     {"chi1_b", 1},      {"chi3", 2},
                                                     {"chi4", 1},       {"chi56_plus", 1}, {"chi56_minus", 1}};
      for (int k = 0; k <= 4; ++k)
      {
        const double zd = -decade(1e-2, k);
        const W z(zd);
        const W gap = W(1e-5) * z * z * z * z;
        const auto roots = roots_w(W(1), gamma_star(z) - gap, z);
        const auto br = boundary_asymptotics(z, gap);
        std::vector<Complex<W>> pred;
        for (const auto &b : br)
          pred.push_back(b.value);
        const auto idx = match(pred, roots);
        for (std::size_t i = 0; i < br.size(); ++i)
        {
          auto &c = add(br[i].name, nominal.at(br[i].name));
          c.x.push_back(-zd);
          c.err.push_back(to_double(abs(pred[i] - roots[idx[i]]) / abs(roots[idx[i]])));
        }
      }
    }

    bool ok = true;
    std::string bad;
    for (const auto &c : checks)
    {
      const double s = loglog_slope(c.x, c.err);
      r.metrics.push_back({c.name + "_slope", s});
      r.metrics.push_back({c.name + "_nominal", c.nominal});
      if (!(std::abs(s - c.nominal) <= 0.2))
      {
        ok = false;
        bad += " " + c.name + "=" + fmt(s) + "(nominal " + fmt(c.nominal) + ")";
      }
    }
    r.detail = ok ? std::to_string(checks.size()) + " branches within 0.2 of their nominal order over two decades"
                  : "slopes off:" + bad;
    return ok;
  });
}

CriterionResult criterion_existence()
{
  return timed(8, "existence_counts", 30, [](CriterionResult &r) {
    const double s3 = std::sqrt(3.0);
    const double unique = 1 / s3, exist = 16 / (9 * s3);
    auto F = [](double g, double u) {
      const double w = 1 + 3 * u * u;
      return -g / u + 8 / (std::sqrt(3.0) * w * std::sqrt(w));
    };
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ug(0.0, 1.6), uo(0.0, 1.0);
    const int nu = 4000;
    int disagree = 0, threshold_violations = 0, draws = 0, tangent_skips = 0;
    std::array<int, 3> seen{};
    while (draws < 10000)
    {
      const double g = ug(rng);
      const double om = 0.7 * uo(rng);
      if (g == 0 || om == 0)
        continue;
      const auto br = existence_solve(MassConfig{1.0, g}, om);
      ++draws;
      if (br.has_u1 && std::abs(om - br.f_max) < 1e-6)
      {
        ++tangent_skips;
        continue;
      }
      int dense = 0;
      double prev = F(g, 1e-9) - om;
      for (int k = 1; k <= nu; ++k)
      {
        const double u = double(k) / nu;
        const double f = (k == nu ? F(g, 1.0 - 1e-12) : F(g, u)) - om;
        if ((f > 0) != (prev > 0))
          ++dense;
        prev = f;
      }
      if (dense != br.count)
        ++disagree;
      if (br.count >= 0 && br.count <= 2)
        ++seen[br.count];
      if (g > exist && br.count != 0)
        ++threshold_violations;
      if (g <= unique && om < unique - g && br.count != 1)
        ++threshold_violations;
      if (g < exist && om > std::max(0.0, unique - g) && om < br.f_max && br.count != 2)
        ++threshold_violations;
      if (g > 144 / (25 * std::sqrt(15.0)) && (br.has_u1 || br.has_u2))
        ++threshold_violations;
    }
    r.metrics.push_back({"disagreements", double(disagree)});
    r.metrics.push_back({"threshold_violations", double(threshold_violations)});
    r.metrics.push_back({"count0", double(seen[0])});
    r.metrics.push_back({"count1", double(seen[1])});
    r.metrics.push_back({"count2", double(seen[2])});
    r.metrics.push_back({"tangent_skips", double(tangent_skips)});
    r.detail = std::to_string(disagree) + " disagreements with dense sampling, " +
               std::to_string(threshold_violations) + " threshold violations in 10^4 draws (counts 0/1/2: " +
               std::to_string(seen[0]) + "/" + std::to_string(seen[1]) + "/" + std::to_string(seen[2]) + ")";
    return disagree == 0 && threshold_violations == 0 && seen[0] > 0 && seen[1] > 0 && seen[2] > 0;
  });
}

CriterionResult criterion_dynamics()
{
  return timed(9, "dynamics_period", 10, [](CriterionResult &r) {
    const MassConfig m{1.0, 1.0};
    const auto eq = make_equilibrium(m, 0.5);
    const auto start = eq.cartesian_at(0.0);
    const auto traj = integrate(start, m, eq.period(), 1e-12);
    const auto &end = traj.final_state();
    double ret = 0;
    for (int i = 0; i < kBodies; ++i)
      ret = std::max({ret, (end.q[i] - start.q[i]).cwiseAbs().maxCoeff(), (end.v[i] - start.v[i]).cwiseAbs().maxCoeff()});
    r.metrics.push_back({"return_error", ret});
    r.metrics.push_back({"energy_drift", traj.energy_drift});
    r.metrics.push_back({"angular_momentum_drift", traj.angular_momentum_drift});
    r.metrics.push_back({"constraint_drift", traj.max_constraint_violation});
    r.detail = "return " + fmt(ret) + ", energy drift " + fmt(traj.energy_drift) + ", Lz drift " +
               fmt(traj.angular_momentum_drift) + ", constraint " + fmt(traj.max_constraint_violation);
    return ret < 1e-8 && traj.energy_drift < 1e-10 && traj.angular_momentum_drift < 1e-10 &&
           traj.max_constraint_violation < 1e-9;
  });
}

CriterionResult criterion_sectors()
{
  return timed(10, "sector_exponents", 120, [](CriterionResult &r) {
    auto mon = [](const E &g, const E &z) { return reduced_poly(MassConfigT<E>{E(1), g}, z); };
    std::vector<double> X, Y;
    std::string bad;

    // EH curve, z < 0: Gamma against |z|.
    for (int k = 0; k <= 8; ++k)
    {
      const double zd = -1e-2 * std::pow(10.0, -k / 4.0);
      const E z(zd);
      auto f = [&](const E &g) { return mon(g, z)[0]; };
      const E pred = near00_gamma_eh(z);
      const auto br = sign_changes<E>(f, pred * E(0.5), pred * E(2), 20);
      if (br.size() != 1)
        throw ConvergenceError("EH curve not bracketed");
      X.push_back(-zd);
      Y.push_back(to_double(solve_bracketed<E>(f, br[0].first, br[0].second, 100)));
    }
    const double eh = loglog_slope(X, Y);
    r.metrics.push_back({"eh_exponent", eh});
    if (!(std::abs(eh - 3.0) <= 0.1))
      bad += " EH=" + fmt(eh);

    // Lobes tangent to Gamma = 0: Gamma against |z - z_j| on both sides.
    const double zs[] = {kZ4, kZ5};
    for (int j = 0; j < 2; ++j)
      for (int side : {-1, 1})
      {
        X.clear();
        Y.clear();
        for (int k = 0; k <= 8; ++k)
        {
          const double d = 1e-5 * std::pow(10.0, k / 4.0);
          const E z = E(zs[j]) + E(side * d);
          auto f = [&](const E &g) { return discriminant(mon(g, z)); };
          E lo(1e-16), hi = lo;
          const bool lo_pos = f(lo) > 0;
          bool found = false;
          for (int s = 0; s < 80 && !found; ++s)
          {
            hi = lo * 2;
            if ((f(hi) > 0) != lo_pos)
              found = true;
            else
              lo = hi;
          }
          if (!found)
            throw ConvergenceError("lobe not bracketed");
          X.push_back(d);
          Y.push_back(to_double(solve_bracketed<E>(f, lo, hi, 80)));
        }
        const double s = loglog_slope(X, Y);
        const std::string name = std::string(j == 0 ? "psi4" : "psi5") + (side < 0 ? "_left" : "_right");
        r.metrics.push_back({name + "_exponent", s});
        if (!(std::abs(s - 2.0) <= 0.1))
          bad += " " + name + "=" + fmt(s);
      }

    // Double-root curve for z > 0: z against Gamma.
    X.clear();
    Y.clear();
    for (int k = 0; k <= 8; ++k)
    {
      const double gd = 1e-6 * std::pow(10.0, k / 4.0);
      const E g(gd);
      auto f = [&](const E &z) { return discriminant(mon(g, z)); };
      const E pred = near00_curves(g).z_hh_pos;
      const auto br = sign_changes<E>(f, pred * E(0.5), pred * E(2), 40);
      if (br.size() != 1)
        throw ConvergenceError("z > 0 double-root curve not bracketed");
      X.push_back(gd);
      Y.push_back(to_double(solve_bracketed<E>(f, br[0].first, br[0].second, 100)));
    }
    const double zp = loglog_slope(X, Y);
    r.metrics.push_back({"zpos_exponent", zp});
    if (!(std::abs(zp - 2.0 / 3.0) <= 0.05))
      bad += " zpos=" + fmt(zp);

    r.detail = bad.empty() ? "EH " + fmt(eh) + ", lobes ~2, z ~ Gamma^" + fmt(zp) : "exponents off:" + bad;
    return bad.empty();
  });
}

std::vector<std::string> suite_names()
{
  return {"jacobian",  "pencil",   "deflation", "limits",   "constants", "transversality", "branches",
          "regions",   "existence", "dynamics",  "sectors",  "all"};
}

std::vector<CriterionResult> run_suite(const std::string &name, int threads)
{
  std::vector<CriterionResult> out;
  const bool all = name == "all";
  bool known = all;
  auto want = [&](const char *s) {
    const bool hit = all || name == s;
    known = known || hit;
    return hit;
  };
  if (want("jacobian"))
    out.push_back(criterion_jacobian());
  if (want("pencil"))
    out.push_back(criterion_pencil());
  if (want("deflation"))
    out.push_back(criterion_deflation());
  const bool limits = want("limits");
  if (want("constants") || limits)
    out.push_back(criterion_constants());
  if (want("transversality") || limits)
    out.push_back(criterion_transversality());
  if (want("regions"))
    out.push_back(criterion_regions(threads));
  if (want("branches") || limits)
    out.push_back(criterion_branches());
  if (want("existence"))
    out.push_back(criterion_existence());
  if (want("dynamics"))
    out.push_back(criterion_dynamics());
  if (want("sectors"))
    out.push_back(criterion_sectors());
  if (!known)
    throw DomainError("unknown suite: " + name);
  std::sort(out.begin(), out.end(), [](const CriterionResult &a, const CriterionResult &b) { return a.id < b.id; });
  return out;
}

std::string results_json(const std::vector<CriterionResult> &results)
{
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto &r : results)
  {
    nlohmann::ordered_json c;
    c["criterion"] = r.id;
    c["name"] = r.name;
    c["pass"] = r.pass;
    c["seconds"] = r.seconds;
    c["budget_seconds"] = r.budget_seconds;
    c["detail"] = r.detail;
    nlohmann::ordered_json m;
    for (const auto &[k, v] : r.metrics)
      m[k] = v;
    c["metrics"] = m;
    j.push_back(c);
  }
  return j.dump(2);
}

} // namespace cts
