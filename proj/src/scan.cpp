#include "cts/scan.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

namespace cts
{

using nlohmann::json;

void GridSpec::validate() const
{
  if (n_gamma < 2 || n_z < 2)
    throw DomainError("grid needs at least 2 cells per axis");
  if (!(gamma_max > gamma_min) || !(z_max > z_min))
    throw DomainError("grid axes must have max > min");
  if (z_min < -1 || z_max > 1)
    throw DomainError("z axis must lie in [-1, 1]");
  if (gamma_mode == GammaAxisMode::Normalized && (gamma_min < 0 || gamma_max >= 1))
    throw DomainError("normalized axis must lie in [0, 1)");
  if (gamma_mode == GammaAxisMode::Linear && gamma_min < 0)
    throw DomainError("Gamma axis must be nonnegative");
}

double GridSpec::axis_value(int i) const
{
  return gamma_min + (i + 0.5) * (gamma_max - gamma_min) / n_gamma;
}

double GridSpec::gamma_at(int i) const
{
  const double a = axis_value(i);
  return gamma_mode == GammaAxisMode::Normalized ? a / (1.0 - a) : a;
}

double GridSpec::z_at(int j) const { return z_min + (j + 0.5) * (z_max - z_min) / n_z; }

namespace
{

std::string precision_name(Precision p)
{
  switch (p)
  {
  case Precision::Extended:
    return "extended";
  case Precision::Wide:
    return "wide";
  default:
    return "double";
  }
}

Precision precision_from(const std::string &s)
{
  if (s == "double")
    return Precision::Double;
  if (s == "extended")
    return Precision::Extended;
  if (s == "wide")
    return Precision::Wide;
  throw DomainError("unknown precision: " + s);
}

json spec_json(const GridSpec &s)
{
  json j;
  j["gamma_axis"] = {{"mode", s.gamma_mode == GammaAxisMode::Linear ? "linear" : "normalized"},
                     {"min", s.gamma_min},
                     {"max", s.gamma_max},
                     {"n", s.n_gamma}};
  j["z_axis"] = {{"min", s.z_min}, {"max", s.z_max}, {"n", s.n_z}};
  j["mass_mode"] = s.mass_mode == MassMode::Gamma ? "gamma" : "epsilon";
  j["precision"] = precision_name(s.precision);
  return j;
}

} // namespace

std::string GridSpec::to_json() const { return spec_json(*this).dump(2); }

GridSpec GridSpec::from_json(const std::string &text)
{
  GridSpec s;
  try
  {
    const json j = json::parse(text);
    const auto &g = j.at("gamma_axis");
    const std::string mode = g.value("mode", "linear");
    if (mode == "linear")
      s.gamma_mode = GammaAxisMode::Linear;
    else if (mode == "normalized")
      s.gamma_mode = GammaAxisMode::Normalized;
    else
      throw DomainError("unknown gamma axis mode: " + mode);
    s.gamma_min = g.at("min").get<double>();
    s.gamma_max = g.at("max").get<double>();
    s.n_gamma = g.at("n").get<int>();
    const auto &z = j.at("z_axis");
    s.z_min = z.at("min").get<double>();
    s.z_max = z.at("max").get<double>();
    s.n_z = z.at("n").get<int>();
    const std::string mm = j.value("mass_mode", "gamma");
    if (mm == "gamma")
      s.mass_mode = MassMode::Gamma;
    else if (mm == "epsilon")
      s.mass_mode = MassMode::Epsilon;
    else
      throw DomainError("unknown mass mode: " + mm);
    s.precision = precision_from(j.value("precision", "double"));
  }
  catch (const json::exception &e)
  {
    throw DomainError(std::string("grid spec: ") + e.what());
  }
  s.validate();
  return s;
}

GridSpec GridSpec::load(const std::string &path)
{
  std::ifstream is(path);
  if (!is)
    throw IOError("cannot open " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return from_json(ss.str());
}

std::string to_string(CellColor c)
{
  switch (c)
  {
  case CellColor::E6:
    return "E6";
  case CellColor::E4CS1:
    return "E4CS1";
  case CellColor::E2CS2:
    return "E2CS2";
  case CellColor::E5H1:
    return "E5H1";
  case CellColor::E3H1CS1:
    return "E3H1CS1";
  case CellColor::Forbidden:
    return "FORBIDDEN";
  default:
    return "OTHER";
  }
}

std::array<std::uint8_t, 3> rgb(CellColor c)
{
  switch (c)
  {
  case CellColor::E6:
    return {220, 30, 30};
  case CellColor::E4CS1:
    return {30, 180, 30};
  case CellColor::E2CS2:
    return {30, 30, 220};
  case CellColor::E5H1:
    return {200, 30, 200};
  case CellColor::E3H1CS1:
    return {120, 200, 230};
  case CellColor::Forbidden:
    return {255, 255, 255};
  default:
    return {0, 0, 0};
  }
}

CellColor Cell::color() const
{
  if (forbidden)
    return CellColor::Forbidden;
  if (failed || degenerate)
    return CellColor::Other;
  switch (code)
  {
  case ClassCode::E6:
    return CellColor::E6;
  case ClassCode::E4CS1:
    return CellColor::E4CS1;
  case ClassCode::E2CS2:
    return CellColor::E2CS2;
  case ClassCode::E5H1:
    return CellColor::E5H1;
  case ClassCode::E3H1CS1:
    return CellColor::E3H1CS1;
  default:
    return CellColor::Other;
  }
}

int resolve_threads(int requested)
{
  if (requested > 0)
    return requested;
  if (const char *env = std::getenv("CTS_THREADS"))
  {
    const int n = std::atoi(env);
    if (n > 0)
      return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? int(hw) : 1;
}

namespace
{

// Large roots come from Omega^2 near 0; close roots from clusters the double
// pencil cannot separate.
bool ill_conditioned(const SpectrumReport &rep)
{
  for (std::size_t i = 0; i < rep.roots.size(); ++i)
  {
    if (std::abs(rep.roots[i]) > 200.0)
      return true;
    for (std::size_t j = i + 1; j < rep.roots.size(); ++j)
      if (std::abs(rep.roots[i] - rep.roots[j]) < 1e-4 * (1.0 + std::abs(rep.roots[i])))
        return true;
  }
  return rep.degenerate || rep.residual > 1e-10;
}

Cell evaluate_cell(const GridSpec &spec, double gamma, double z)
{
  Cell c;
  if (z == 0.0)
  {
    c.failed = true;
    return c;
  }
  MassConfig masses{1.0, gamma};
  if (spec.mass_mode == MassMode::Epsilon && gamma > 0)
    masses = MassConfig{1.0 / gamma, 1.0};
  try
  {
    const auto ds = derived_scalars(masses, z);
    c.omega_sq_sign = ds.omega_sq > 0 ? 1 : (ds.omega_sq < 0 ? -1 : 0);
    if (!ds.admissible())
    {
      c.forbidden = true;
      return c;
    }
    SpectrumOptions opt;
    opt.precision = spec.precision;
    auto rep = spectrum_at(masses, z, opt);
    if (spec.precision == Precision::Double && ill_conditioned(rep))
    {
      opt.precision = Precision::Extended;
      opt.classify = {1e-25, 1e-20};
      rep = spectrum_at(masses, z, opt);
      c.promoted = true;
    }
    c.code = rep.code;
    c.degenerate = rep.degenerate;
    c.roots = rep.roots;
  }
  catch (const AdmissibilityError &)
  {
    c.forbidden = true;
  }
  catch (const std::exception &)
  {
    c.failed = true;
  }
  return c;
}

} // namespace

RegionMap run_scan(const GridSpec &spec, int threads)
{
  spec.validate();
  RegionMap map;
  map.spec = spec;
  const std::size_t total = std::size_t(spec.n_gamma) * spec.n_z;
  map.cells.resize(total);
  const int nt = std::max(1, std::min<int>(resolve_threads(threads), int(total)));
  constexpr std::size_t chunk = 64;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;)
    {
      const std::size_t start = next.fetch_add(chunk);
      if (start >= total)
        return;
      const std::size_t stop = std::min(total, start + chunk);
      for (std::size_t k = start; k < stop; ++k)
      {
        const int i = int(k / spec.n_z), j = int(k % spec.n_z);
        map.cells[k] = evaluate_cell(spec, spec.gamma_at(i), spec.z_at(j));
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < nt; ++t)
    pool.emplace_back(worker);
  worker();
  for (auto &th : pool)
    th.join();
  return map;
}

void render_ppm(const RegionMap &map, const std::string &path)
{
  std::ofstream os(path, std::ios::binary);
  if (!os)
    throw IOError("cannot open " + path);
  const int w = map.spec.n_gamma, h = map.spec.n_z;
  os << "P6\n" << w << ' ' << h << "\n255\n";
  std::vector<char> row(std::size_t(w) * 3);
  for (int y = 0; y < h; ++y)
  {
    const int j = h - 1 - y;
    for (int i = 0; i < w; ++i)
    {
      const auto c = rgb(map.at(i, j).color());
      row[3 * i] = char(c[0]);
      row[3 * i + 1] = char(c[1]);
      row[3 * i + 2] = char(c[2]);
    }
    os.write(row.data(), std::streamsize(row.size()));
  }
  if (!os)
    throw IOError("write failed: " + path);
}

void export_grid(const RegionMap &map, const std::string &path)
{
  std::ofstream os(path);
  if (!os)
    throw IOError("cannot open " + path);
  os << "gamma,z,class,degenerate,omega_sq_sign";
  for (int k = 1; k <= 6; ++k)
    os << ",M" << k << "re,M" << k << "im";
  os << '\n' << std::setprecision(17);
  for (int i = 0; i < map.spec.n_gamma; ++i)
    for (int j = 0; j < map.spec.n_z; ++j)
    {
      const Cell &c = map.at(i, j);
      os << map.spec.gamma_at(i) << ',' << map.spec.z_at(j) << ',' << to_string(c.color()) << ','
         << (c.degenerate || c.failed ? 1 : 0) << ',' << c.omega_sq_sign;
      for (const auto &r : c.roots)
        os << ',' << r.real() << ',' << r.imag();
      os << '\n';
    }
  if (!os)
    throw IOError("write failed: " + path);
}

std::vector<GridRow> read_grid(const std::string &path)
{
  std::ifstream is(path);
  if (!is)
    throw IOError("cannot open " + path);
  std::string line;
  std::getline(is, line);
  std::vector<GridRow> rows;
  while (std::getline(is, line))
  {
    if (line.empty())
      continue;
    std::stringstream ss(line);
    std::string f;
    std::vector<std::string> fields;
    while (std::getline(ss, f, ','))
      fields.push_back(f);
    if (fields.size() != 17)
      throw IOError("malformed grid row: " + line);
    GridRow r;
    r.gamma = std::stod(fields[0]);
    r.z = std::stod(fields[1]);
    r.cls = fields[2];
    r.degenerate = fields[3] == "1";
    r.omega_sq_sign = std::stoi(fields[4]);
    for (int k = 0; k < 6; ++k)
      r.roots[k] = {std::stod(fields[5 + 2 * k]), std::stod(fields[6 + 2 * k])};
    rows.push_back(r);
  }
  return rows;
}

void write_sidecar(const std::string &output_path, const GridSpec &spec, const std::string &command)
{
  json j;
  j["output"] = output_path;
  j["command"] = command;
  j["version"] = kVersion;
  j["spec"] = spec_json(spec);
  j["precision"] = precision_name(spec.precision);
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::ostringstream ts;
  ts << std::put_time(std::gmtime(&now), "%Y-%m-%dT%H:%M:%SZ");
  j["created"] = ts.str();
  std::ofstream os(output_path + ".json");
  if (!os)
    throw IOError("cannot open " + output_path + ".json");
  os << j.dump(2) << '\n';
}

std::vector<Component> label_components(const RegionMap &map)
{
  const int W = map.spec.n_gamma, H = map.spec.n_z;
  std::vector<int> label(std::size_t(W) * H, -1);
  std::vector<Component> out;
  std::vector<std::pair<int, int>> stack;
  for (int i0 = 0; i0 < W; ++i0)
    for (int j0 = 0; j0 < H; ++j0)
    {
      if (label[std::size_t(i0) * H + j0] >= 0)
        continue;
      const CellColor col = map.at(i0, j0).color();
      Component comp;
      comp.color = col;
      comp.i_min = comp.i_max = i0;
      comp.j_min = comp.j_max = j0;
      double zsum = 0;
      const int id = int(out.size());
      stack.assign(1, {i0, j0});
      label[std::size_t(i0) * H + j0] = id;
      while (!stack.empty())
      {
        const auto [i, j] = stack.back();
        stack.pop_back();
        ++comp.size;
        zsum += map.spec.z_at(j);
        comp.i_min = std::min(comp.i_min, i);
        comp.i_max = std::max(comp.i_max, i);
        comp.j_min = std::min(comp.j_min, j);
        comp.j_max = std::max(comp.j_max, j);
        const int di[] = {1, -1, 0, 0}, dj[] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k)
        {
          const int a = i + di[k], b = j + dj[k];
          if (a < 0 || a >= W || b < 0 || b >= H)
            continue;
          int &l = label[std::size_t(a) * H + b];
          if (l >= 0 || map.at(a, b).color() != col)
            continue;
          l = id;
          stack.push_back({a, b});
        }
      }
      comp.z_mean = zsum / comp.size;
      out.push_back(comp);
    }
  std::stable_sort(out.begin(), out.end(), [](const Component &a, const Component &b) {
    return a.color != b.color ? a.color < b.color : a.size > b.size;
  });
  return out;
}

} // namespace cts
