#include "nlocch/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "nlocch/field_io.hpp"

namespace nlocch {

namespace pt = boost::property_tree;

namespace {

const std::vector<std::pair<std::string, std::vector<std::string>>>& schema() {
  static const std::vector<std::pair<std::string, std::vector<std::string>>> s{
      {"grid", {"dim", "points", "extent"}},
      {"model", {"P", "A", "B", "C", "sigma_s", "potential", "interpolation"}},
      {"sweep",
       {"epsilons", "t_end", "dt_base", "c_dt", "snapshot_stride", "local_stabilization", "nonlocal_stabilization",
        "nonlocal_scheme", "solver_tolerance"}},
      {"initial", {"phi0", "sigma0"}},
      {"operator", {"catalog"}},
      {"io", {"output", "formats"}},
  };
  return s;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {}

  std::optional<std::string> raw(const std::string& section, const std::string& key) const {
    auto sec = tree_.get_child_optional(section);
    if (!sec) return std::nullopt;
    auto v = sec->get_optional<std::string>(pt::ptree::path_type(key, '\0'));
    if (!v) return std::nullopt;
    return trim(*v);
  }

  template <class T, class Fn>
  void read(const std::string& section, const std::string& key, T& out, Fn&& convert) const {
    auto v = raw(section, key);
    if (!v) return;
    try {
      out = convert(*v);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(section + "." + key, e.what());
    }
  }

 private:
  const pt::ptree& tree_;
};

double to_double(const std::string& s) { return parse_double(s); }

int to_int(const std::string& s) {
  std::size_t used = 0;
  const int v = std::stoi(s, &used);
  if (used != s.size()) throw std::invalid_argument("not an integer: '" + s + "'");
  return v;
}

std::optional<double> to_optional(const std::string& s) {
  if (s == "auto") return std::nullopt;
  return parse_double(s);
}

template <class T, class Fn>
std::vector<T> to_list(const std::string& s, Fn&& convert) {
  std::vector<T> out;
  for (const auto& item : split_list(s, ',')) {
    if (item.empty()) throw std::invalid_argument("empty list entry");
    out.push_back(convert(item));
  }
  return out;
}

template <class T>
std::string join(const std::vector<T>& values, const std::string& sep) {
  std::ostringstream os;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) os << sep;
    if constexpr (std::is_same_v<T, double>) {
      os << format_double(values[i]);
    } else {
      os << values[i];
    }
  }
  return os.str();
}

void check_unknown_keys(const pt::ptree& tree) {
  for (const auto& [section, body] : tree) {
    const auto it = std::find_if(schema().begin(), schema().end(), [&](const auto& s) { return s.first == section; });
    if (it == schema().end()) {
      if (body.empty() && !body.data().empty()) throw ConfigError(section, "keys must live inside a [section]");
      throw ConfigError(section, "unknown section");
    }
    for (const auto& [key, value] : body) {
      if (std::find(it->second.begin(), it->second.end(), key) == it->second.end()) {
        throw ConfigError(section + "." + key, "unknown key");
      }
    }
  }
}

void require(bool ok, const std::string& field, const std::string& message) {
  if (!ok) throw ConfigError(field, message);
}

void validate(const ExperimentConfig& c) {
  require(c.dim >= 1 && c.dim <= 3, "grid.dim", "must be 1, 2 or 3");
  require(static_cast<int>(c.points.size()) == c.dim, "grid.points", "needs one entry per dimension");
  require(static_cast<int>(c.extent.size()) == c.dim, "grid.extent", "needs one entry per dimension");
  for (int p : c.points) require(p >= Grid::kMinPoints, "grid.points", "every axis needs at least 4 points");
  for (double e : c.extent) require(e > 0.0 && std::isfinite(e), "grid.extent", "extents must be positive");
  const std::pair<const char*, double> rates[] = {{"P", c.P}, {"A", c.A}, {"B", c.B}, {"C", c.C}};
  for (const auto& [name, v] : rates) {
    require(v >= 0.0 && std::isfinite(v), std::string("model.") + name,
            "must be a non-negative constant (the model rates P, A, B, C are non-negative constants)");
  }
  require(c.sigma_s >= 0.0 && c.sigma_s <= 1.0, "model.sigma_s", "must lie in [0, 1] (the nutrient supply satisfies 0 <= sigma_S <= 1)");
  require(!c.epsilons.empty(), "sweep.epsilons", "epsilons required");
  require(c.t_end > 0.0, "sweep.t_end", "must be positive");
  require(c.dt_base > 0.0, "sweep.dt_base", "must be positive");
  require(c.c_dt > 0.0, "sweep.c_dt", "must be positive");
  require(c.snapshot_stride >= 1, "sweep.snapshot_stride", "must be >= 1");
  require(c.solver_tolerance > 0.0 && c.solver_tolerance < 1.0, "sweep.solver_tolerance", "must lie in (0, 1)");
  require(c.dt_base * c.C <= 1.0, "sweep.dt_base",
          "dt * C = " + format_double(c.dt_base * c.C) + " > 1 violates the nutrient positivity gate dt * C <= 1");
  require(!c.catalog.empty(), "operator.catalog", "at least one test function required");
  for (const auto& f : c.formats) require(f == "csv" || f == "json", "io.formats", "unknown format '" + f + "'");
  const auto guard = [](const char* field, auto&& fn) {
    try {
      fn();
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(field, e.what());
    }
  };
  guard("model.potential", [&] { potential_by_name(c.potential); });
  guard("model.interpolation", [&] { interpolation_by_name(c.interpolation); });
  guard("sweep.nonlocal_scheme", [&] { nonlocal_scheme_from_string(c.nonlocal_scheme); });
  const Grid grid = make_grid(c);
  guard("initial.phi0", [&] { c.phi0.sample(grid); });
  guard("initial.sigma0", [&] {
    const Field s = c.sigma0.sample(grid);
    if (s.values().minCoeff() < 0.0 || s.values().maxCoeff() > 1.0) {
      throw std::invalid_argument("initial nutrient must lie in [0, 1]");
    }
  });
  guard("operator.catalog", [&] {
    for (const auto& f : c.catalog) f.sample(grid);
  });
  guard("sweep", [&] { make_plan(c).validate(); });
}

}  // namespace

Grid make_grid(const ExperimentConfig& c) { return Grid(c.points, c.extent); }

ModelParams make_params(const ExperimentConfig& c) {
  ModelParams p;
  p.P = c.P;
  p.A = c.A;
  p.B = c.B;
  p.C = c.C;
  p.sigma_s = c.sigma_s;
  p.potential = potential_by_name(c.potential);
  p.interp = interpolation_by_name(c.interpolation);
  return p;
}

SolverConfig make_local_config(const ExperimentConfig& c) {
  const ModelParams params = make_params(c);
  SolverConfig cfg;
  cfg.dt = c.dt_base;
  cfg.t_end = c.t_end;
  cfg.snapshot_stride = c.snapshot_stride;
  cfg.stabilization = c.local_stabilization.value_or(params.potential.stabilization_bound);
  return cfg;
}

SweepPlan make_plan(const ExperimentConfig& c) {
  SweepPlan plan;
  plan.epsilons = c.epsilons;
  plan.grid = make_grid(c);
  plan.params = make_params(c);
  plan.local_cfg = make_local_config(c);
  plan.nonlocal_template = plan.local_cfg;
  plan.nonlocal_template.stabilization = plan.params.potential.stabilization_bound;
  plan.c_dt = c.c_dt;
  plan.scheme = nonlocal_scheme_from_string(c.nonlocal_scheme);
  plan.tolerance = c.solver_tolerance;
  plan.nonlocal_stabilization = c.nonlocal_stabilization;
  plan.phi0 = c.phi0;
  plan.sigma0 = c.sigma0;
  plan.catalog = c.catalog;
  return plan;
}

ExperimentConfig parse_config(const std::string& text) {
  pt::ptree tree;
  std::istringstream is(text);
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("line " + std::to_string(e.line()), e.message());
  }
  check_unknown_keys(tree);
  const Reader r(tree);
  ExperimentConfig c;
  r.read("grid", "dim", c.dim, to_int);
  r.read("grid", "points", c.points, [](const std::string& s) { return to_list<int>(s, to_int); });
  r.read("grid", "extent", c.extent, [](const std::string& s) { return to_list<double>(s, to_double); });
  r.read("model", "P", c.P, to_double);
  r.read("model", "A", c.A, to_double);
  r.read("model", "B", c.B, to_double);
  r.read("model", "C", c.C, to_double);
  r.read("model", "sigma_s", c.sigma_s, to_double);
  r.read("model", "potential", c.potential, [](const std::string& s) { return s; });
  r.read("model", "interpolation", c.interpolation, [](const std::string& s) { return s; });
  r.read("sweep", "epsilons", c.epsilons, [](const std::string& s) {
    return s.empty() ? std::vector<double>{} : to_list<double>(s, to_double);
  });
  r.read("sweep", "t_end", c.t_end, to_double);
  r.read("sweep", "dt_base", c.dt_base, to_double);
  r.read("sweep", "c_dt", c.c_dt, to_double);
  r.read("sweep", "snapshot_stride", c.snapshot_stride, to_int);
  r.read("sweep", "local_stabilization", c.local_stabilization, to_optional);
  r.read("sweep", "nonlocal_stabilization", c.nonlocal_stabilization, to_optional);
  r.read("sweep", "nonlocal_scheme", c.nonlocal_scheme, [](const std::string& s) { return s; });
  r.read("sweep", "solver_tolerance", c.solver_tolerance, to_double);
  r.read("initial", "phi0", c.phi0, CosinePolynomial::parse);
  r.read("initial", "sigma0", c.sigma0, CosinePolynomial::parse);
  r.read("operator", "catalog", c.catalog, [](const std::string& s) {
    std::vector<CosinePolynomial> out;
    for (const auto& item : split_list(s, ';')) out.push_back(CosinePolynomial::parse(item));
    return out;
  });
  r.read("io", "output", c.output, [](const std::string& s) { return s; });
  r.read("io", "formats", c.formats, [](const std::string& s) { return split_list(s, ','); });
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("file", "cannot open " + path.string());
  std::ostringstream text;
  text << is.rdbuf();
  return parse_config(text.str());
}

std::string serialize_config(const ExperimentConfig& c) {
  const auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string("auto"); };
  std::vector<std::string> catalog;
  for (const auto& f : c.catalog) catalog.push_back(f.to_string());
  std::ostringstream os;
  os << "# nlocch experiment configuration\n"
     << "[grid]\n"
     << "dim = " << c.dim << "\n"
     << "points = " << join(c.points, ", ") << "\n"
     << "extent = " << join(c.extent, ", ") << "\n"
     << "\n[model]\n"
     << "P = " << format_double(c.P) << "\n"
     << "A = " << format_double(c.A) << "\n"
     << "B = " << format_double(c.B) << "\n"
     << "C = " << format_double(c.C) << "\n"
     << "sigma_s = " << format_double(c.sigma_s) << "\n"
     << "potential = " << c.potential << "\n"
     << "interpolation = " << c.interpolation << "\n"
     << "\n[sweep]\n"
     << "epsilons = " << join(c.epsilons, ", ") << "\n"
     << "t_end = " << format_double(c.t_end) << "\n"
     << "dt_base = " << format_double(c.dt_base) << "\n"
     << "c_dt = " << format_double(c.c_dt) << "\n"
     << "snapshot_stride = " << c.snapshot_stride << "\n"
     << "local_stabilization = " << opt(c.local_stabilization) << "\n"
     << "nonlocal_stabilization = " << opt(c.nonlocal_stabilization) << "\n"
     << "nonlocal_scheme = " << c.nonlocal_scheme << "\n"
     << "solver_tolerance = " << format_double(c.solver_tolerance) << "\n"
     << "\n[initial]\n"
     << "phi0 = " << c.phi0.to_string() << "\n"
     << "sigma0 = " << c.sigma0.to_string() << "\n"
     << "\n[operator]\n"
     << "catalog = " << join(catalog, "; ") << "\n"
     << "\n[io]\n"
     << "output = " << c.output << "\n"
     << "formats = " << join(c.formats, ", ") << "\n";
  return os.str();
}

}  // namespace nlocch
