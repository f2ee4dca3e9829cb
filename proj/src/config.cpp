#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "poroiga/errors.hpp"
#include "poroiga/experiments.hpp"

namespace poroiga {

const char* to_string(OrderMode mode) { return mode == OrderMode::mixed ? "mixed" : "equal"; }
const char* to_string(InterfaceContinuity continuity) {
  return continuity == InterfaceContinuity::c0 ? "c0" : "max";
}

bool RunConfig::operator==(const RunConfig& o) const {
  return spec == o.spec && degrees == o.degrees && modes == o.modes && continuities == o.continuities &&
         spans_x == o.spans_x && spans_y == o.spans_y && graded == o.graded &&
         grading_ratio == o.grading_ratio && dt_factor == o.dt_factor && output_steps == o.output_steps &&
         levels == o.levels && samples == o.samples && profile_min == o.profile_min &&
         profile_max == o.profile_max;
}

void RunConfig::validate() const {
  if (!preset.empty() && !config_path.empty()) throw ConfigError("give either a preset or a config file, not both");
  try {
    spec.validate();
    for (const auto& layer : spec.layers.layers()) layer.params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (degrees.empty() || modes.empty() || continuities.empty())
    throw ConfigError("degrees, modes and continuities must not be empty");
  const int max_degree = preset.empty() ? 10 : 4;
  for (int p : degrees)
    if (p < 1 || p > max_degree)
      throw ConfigError("pressure degree " + std::to_string(p) + " outside [1, " + std::to_string(max_degree) + "]");
  if (spans_x < 1 || spans_y < 1) throw ConfigError("span counts must be positive");
  if (!(grading_ratio >= 1.0)) throw ConfigError("grading ratio must be at least 1");
  if (dt_factor && !(*dt_factor > 0.0)) throw ConfigError("dt factor must be positive");
  for (int s : output_steps)
    if (s < 0 || s > spec.steps) throw ConfigError("output step " + std::to_string(s) + " outside [0, steps]");
  for (int n : levels)
    if (n < 1) throw ConfigError("refinement levels must be positive span counts");
  if (samples < 2) throw ConfigError("need at least two profile samples");
  if (!(profile_min >= 0.0 && profile_max <= 1.0 && profile_min < profile_max))
    throw ConfigError("profile window must satisfy 0 <= min < max <= 1");
}

std::vector<std::string> preset_names() { return {"terzaghi", "convergence", "haga"}; }

RunConfig preset_config(const std::string& name) {
  RunConfig c;
  c.preset = name;
  if (name == "terzaghi") {
    c.spec = terzaghi_preset();
    c.spans_y = 72;
    c.dt_factor = 1.0;
    c.output_steps = {2, 100, 500, 2000, 5000};
  } else if (name == "convergence") {
    c.spec = convergence_preset();
    c.degrees = {1, 2, 3};
    c.levels = {4, 8, 16, 32, 64};
    c.spans_y = 4;
    c.output_steps = {1};
  } else if (name == "haga") {
    c.spec = haga_preset();
    c.degrees = {1, 2, 3, 4};
    c.modes = {OrderMode::mixed, OrderMode::equal};
    c.continuities = {InterfaceContinuity::max, InterfaceContinuity::c0};
    c.spans_y = 60;
    c.output_steps = {1, 2};
    c.profile_min = 0.15;
    c.profile_max = 0.85;
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  return c;
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

template <class T, class F>
std::string join(const std::vector<T>& v, F f) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += f(v[i]);
  }
  return out;
}

class Reader {
 public:
  Reader(std::string origin, int line) : origin_(std::move(origin)), line_(line) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError(origin_ + ":" + std::to_string(line_) + ": " + what);
  }

  double real(const std::string& s) const {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) fail("expected a number, got '" + s + "'");
    return v;
  }

  int integer(const std::string& s) const {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) fail("expected an integer, got '" + s + "'");
    return v;
  }

  std::vector<std::string> items(const std::string& s) const {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) fail("empty list item");
      out.push_back(item);
    }
    return out;
  }

  std::vector<int> integers(const std::string& s) const {
    std::vector<int> out;
    for (const auto& i : items(s)) out.push_back(integer(i));
    return out;
  }

  OrderMode mode(const std::string& s) const {
    if (s == "mixed") return OrderMode::mixed;
    if (s == "equal") return OrderMode::equal;
    fail("mode must be mixed or equal");
  }

  InterfaceContinuity continuity(const std::string& s) const {
    if (s == "c0") return InterfaceContinuity::c0;
    if (s == "max") return InterfaceContinuity::max;
    fail("continuity must be c0 or max");
  }

  bool grading(const std::string& s) const {
    if (s == "graded") return true;
    if (s == "uniform") return false;
    fail("grading must be uniform or graded");
  }

 private:
  std::string origin_;
  int line_;
};

void set_layer_key(MaterialLayer& layer, const std::string& key, const std::string& value, const Reader& r) {
  auto& m = layer.params;
  if (key == "y_min") layer.y_min = r.real(value);
  else if (key == "y_max") layer.y_max = r.real(value);
  else if (key == "youngs_modulus") m.youngs_modulus = r.real(value);
  else if (key == "poisson_ratio") m.poisson_ratio = r.real(value);
  else if (key == "biot_alpha") m.biot_alpha = r.real(value);
  else if (key == "storativity") m.storativity = r.real(value);
  else if (key == "mobility_xx") m.mobility(0, 0) = r.real(value);
  else if (key == "mobility_yy") m.mobility(1, 1) = r.real(value);
  else if (key == "mobility_xy") m.mobility(0, 1) = m.mobility(1, 0) = r.real(value);
  else if (key == "density") m.density = r.real(value);
  else if (key == "fluid_density") m.fluid_density = r.real(value);
  else if (key == "body_force_x") m.body_force.x() = r.real(value);
  else if (key == "body_force_y") m.body_force.y() = r.real(value);
  else r.fail("unknown layer key '" + key + "'");
}

void set_key(RunConfig& c, const std::string& key, const std::string& value, const Reader& r) {
  auto& s = c.spec;
  if (key == "name") s.name = value;
  else if (key == "width") s.width = r.real(value);
  else if (key == "height") s.height = r.real(value);
  else if (key == "load") s.load = r.real(value);
  else if (key == "dt") s.dt = r.real(value);
  else if (key == "dt_factor") c.dt_factor = value == "none" ? std::nullopt : std::optional<double>(r.real(value));
  else if (key == "steps") s.steps = r.integer(value);
  else if (key == "theta") s.theta = r.real(value);
  else if (key == "prescribed_displacement") s.prescribed_displacement = r.real(value);
  else if (key == "prescribed_pressure") s.prescribed_pressure = r.real(value);
  else if (key == "side_flux") s.side_flux = r.real(value);
  else if (key == "bottom_flux") s.bottom_flux = r.real(value);
  else if (key == "degrees") c.degrees = r.integers(value);
  else if (key == "modes") {
    c.modes.clear();
    for (const auto& i : r.items(value)) c.modes.push_back(r.mode(i));
  } else if (key == "continuities") {
    c.continuities.clear();
    for (const auto& i : r.items(value)) c.continuities.push_back(r.continuity(i));
  } else if (key == "spans_x") c.spans_x = r.integer(value);
  else if (key == "spans_y") c.spans_y = r.integer(value);
  else if (key == "grading") c.graded = r.grading(value);
  else if (key == "grading_ratio") c.grading_ratio = r.real(value);
  else if (key == "output_steps") c.output_steps = value.empty() ? std::vector<int>{} : r.integers(value);
  else if (key == "levels") c.levels = value.empty() ? std::vector<int>{} : r.integers(value);
  else if (key == "samples") c.samples = r.integer(value);
  else if (key == "profile_min") c.profile_min = r.real(value);
  else if (key == "profile_max") c.profile_max = r.real(value);
  else r.fail("unknown key '" + key + "'");
}

}  // namespace

RunConfig parse_config(std::istream& in, const std::string& origin) {
  RunConfig c;
  c.config_path = origin;
  std::map<int, MaterialLayer> layers;
  int section = -1;  // -1: top level
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const Reader r(origin, lineno);
    const auto hash = line.find('#');
    const std::string text = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') r.fail("unterminated section header");
      const std::string name = trim(text.substr(1, text.size() - 2));
      if (name.rfind("layer.", 0) != 0) r.fail("unknown section '" + name + "'");
      section = r.integer(name.substr(6));
      if (section < 0) r.fail("layer index must be non-negative");
      if (layers.contains(section)) r.fail("duplicate section [" + name + "]");
      layers[section] = MaterialLayer{0.0, 0.0, MaterialParams{}};
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) r.fail("expected key = value");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (section < 0) set_key(c, key, value, r);
    else set_layer_key(layers[section], key, value, r);
  }
  if (layers.empty()) throw ConfigError(origin + ": no [layer.N] sections");
  std::vector<MaterialLayer> stack;
  int expected = 0;
  for (auto& [index, layer] : layers) {
    if (index != expected++) throw ConfigError(origin + ": layer sections must be numbered 0, 1, 2, ...");
    stack.push_back(layer);
  }
  try {
    c.spec.layers = MaterialLayerSet(std::move(stack));
  } catch (const std::exception& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in, path);
}

void write_config(std::ostream& out, const RunConfig& c) {
  const auto& s = c.spec;
  out << "name = " << s.name << "\n";
  out << "width = " << fmt(s.width) << "\n";
  out << "height = " << fmt(s.height) << "\n";
  out << "load = " << fmt(s.load) << "\n";
  out << "dt = " << fmt(s.dt) << "\n";
  out << "dt_factor = " << (c.dt_factor ? fmt(*c.dt_factor) : std::string("none")) << "\n";
  out << "steps = " << s.steps << "\n";
  out << "theta = " << fmt(s.theta) << "\n";
  out << "prescribed_displacement = " << fmt(s.prescribed_displacement) << "\n";
  out << "prescribed_pressure = " << fmt(s.prescribed_pressure) << "\n";
  out << "side_flux = " << fmt(s.side_flux) << "\n";
  out << "bottom_flux = " << fmt(s.bottom_flux) << "\n";
  out << "degrees = " << join(c.degrees, [](int p) { return std::to_string(p); }) << "\n";
  out << "modes = " << join(c.modes, [](OrderMode m) { return std::string(to_string(m)); }) << "\n";
  out << "continuities = "
      << join(c.continuities, [](InterfaceContinuity k) { return std::string(to_string(k)); }) << "\n";
  out << "spans_x = " << c.spans_x << "\n";
  out << "spans_y = " << c.spans_y << "\n";
  out << "grading = " << (c.graded ? "graded" : "uniform") << "\n";
  out << "grading_ratio = " << fmt(c.grading_ratio) << "\n";
  out << "output_steps = " << join(c.output_steps, [](int n) { return std::to_string(n); }) << "\n";
  out << "levels = " << join(c.levels, [](int n) { return std::to_string(n); }) << "\n";
  out << "samples = " << c.samples << "\n";
  out << "profile_min = " << fmt(c.profile_min) << "\n";
  out << "profile_max = " << fmt(c.profile_max) << "\n";
  const auto& layers = s.layers.layers();
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& l = layers[i];
    const auto& m = l.params;
    out << "\n[layer." << i << "]\n";
    out << "y_min = " << fmt(l.y_min) << "\n";
    out << "y_max = " << fmt(l.y_max) << "\n";
    out << "youngs_modulus = " << fmt(m.youngs_modulus) << "\n";
    out << "poisson_ratio = " << fmt(m.poisson_ratio) << "\n";
    out << "biot_alpha = " << fmt(m.biot_alpha) << "\n";
    out << "storativity = " << fmt(m.storativity) << "\n";
    out << "mobility_xx = " << fmt(m.mobility(0, 0)) << "\n";
    out << "mobility_yy = " << fmt(m.mobility(1, 1)) << "\n";
    out << "mobility_xy = " << fmt(m.mobility(0, 1)) << "\n";
    out << "density = " << fmt(m.density) << "\n";
    out << "fluid_density = " << fmt(m.fluid_density) << "\n";
    out << "body_force_x = " << fmt(m.body_force.x()) << "\n";
    out << "body_force_y = " << fmt(m.body_force.y()) << "\n";
  }
}

double critical_step(const RunConfig& c) {
  double cv = 0.0;
  for (const auto& l : c.spec.layers.layers()) {
    const auto& m = l.params;
    cv = std::max(cv, consolidation_coefficient(m.youngs_modulus, m.poisson_ratio, m.mobility(1, 1)));
  }
  return critical_time_step(c.spec.height / c.spans_y, cv, c.spec.theta);
}

ProblemSpec resolved_spec(const RunConfig& c) {
  ProblemSpec s = c.spec;
  if (c.dt_factor) s.dt = *c.dt_factor * critical_step(c);
  return s;
}

Discretization make_discretization(const RunConfig& c, int pressure_degree, OrderMode mode,
                                   InterfaceContinuity continuity, bool graded) {
  Discretization d;
  d.pressure_degree = pressure_degree;
  d.mode = mode;
  d.mesh = mesh_for(c.spec, c.spans_x, c.spans_y, graded, continuity, c.grading_ratio);
  return d;
}

}  // namespace poroiga
