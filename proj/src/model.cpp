// Copyright 2026 The agestruct Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "agestruct/model.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "agestruct/equilibrium.hpp"
#include "agestruct/error.hpp"

namespace agestruct {

namespace {

const std::set<std::string>& known_keys(const std::string& section) {
  static const std::set<std::string> model = {
      "A",          "mu_bar_1",   "mu_bar_2",  "k_bar_1",   "k_bar_2",
      "b_bar_1",    "b_bar_2",    "u_star",    "mu_table_1", "mu_table_2",
      "k_table_1",  "k_table_2",  "b_table_1", "b_table_2"};
  static const std::set<std::string> control = {
      "c1", "c2", "theta", "gamma_factor", "sigma_1", "sigma_2"};
  static const std::set<std::string> grid = {"N_a"};
  static const std::set<std::string> simulation = {"T_final", "dt_policy"};
  static const std::set<std::string> none;
  if (section == "model") return model;
  if (section == "control") return control;
  if (section == "grid") return grid;
  if (section == "simulation") return simulation;
  return none;
}

double parse_real(const std::string& key, const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  while (end && *end != '\0' && std::isspace(static_cast<unsigned char>(*end)))
    ++end;
  if (end == begin || *end != '\0' || errno == ERANGE || !std::isfinite(v))
    throw ConfigError("key " + key + ": '" + text + "' is not a finite number");
  return v;
}

int parse_int(const std::string& key, const std::string& text) {
  const double v = parse_real(key, text);
  if (v != std::floor(v) || std::abs(v) > std::numeric_limits<int>::max())
    throw ConfigError("key " + key + ": '" + text + "' is not an integer");
  return static_cast<int>(v);
}

// "a:v, a:v, ..."
KernelSpec parse_table(const std::string& key, const std::string& text) {
  std::vector<std::pair<double, double>> pts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos)
      throw ConfigError("key " + key + ": table entry '" + item +
                        "' is not of the form age:value");
    pts.emplace_back(parse_real(key, item.substr(0, colon)),
                     parse_real(key, item.substr(colon + 1)));
  }
  try {
    return KernelSpec::table(pts);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("key " + key + ": " + e.what());
  }
}

std::string format_real(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string kernel_name(int kind, int species) {
  static const char* names[] = {"mu", "k", "b"};
  return std::string(names[kind]) + "_" + std::to_string(species + 1);
}

const KernelSpec& kernel_of(const SpeciesKernels& k, int kind) {
  return kind == 0 ? k.mortality : kind == 1 ? k.birth : k.interaction;
}

KernelSpec& kernel_of(SpeciesKernels& k, int kind) {
  return kind == 0 ? k.mortality : kind == 1 ? k.birth : k.interaction;
}

}  // namespace

KernelSpec KernelSpec::table(const std::vector<std::pair<double, double>>& pts) {
  if (pts.size() < 2)
    throw std::invalid_argument("tabulated kernel needs at least two points");
  KernelSpec spec{KernelForm::tabulated, {}};
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i > 0 && !(pts[i].first > pts[i - 1].first))
      throw std::invalid_argument("tabulated kernel ages must increase");
    spec.params.push_back(pts[i].first);
    spec.params.push_back(pts[i].second);
  }
  return spec;
}

double eval_kernel(const KernelSpec& spec, double a, double max_age) {
  const double slack = 1e-12 * std::max(1.0, max_age);
  if (!(a >= -slack && a <= max_age + slack))
    throw std::domain_error("eval_kernel: age outside [0, A]");
  a = std::clamp(a, 0.0, max_age);
  const auto scale = [&] {
    if (spec.params.size() != 1)
      throw std::invalid_argument("parametric kernel needs one coefficient");
    return spec.params[0];
  };
  switch (spec.form) {
    case KernelForm::exponential_growth:
      return scale() * std::exp(a);
    case KernelForm::exponential_decay:
      return scale() * std::exp(-a);
    case KernelForm::parabolic:
      return scale() * (a - a * a);
    case KernelForm::constant:
      return scale();
    case KernelForm::tabulated: {
      const auto& p = spec.params;
      const std::size_t n = p.size() / 2;
      if (n < 2 || p.size() % 2 != 0)
        throw std::invalid_argument("malformed tabulated kernel");
      if (a <= p[0]) return p[1];
      if (a >= p[2 * (n - 1)]) return p[2 * (n - 1) + 1];
      std::size_t i = 1;
      while (p[2 * i] < a) ++i;
      const double a0 = p[2 * (i - 1)], v0 = p[2 * (i - 1) + 1];
      const double a1 = p[2 * i], v1 = p[2 * i + 1];
      return v0 + (v1 - v0) * (a - a0) / (a1 - a0);
    }
  }
  throw std::invalid_argument("unknown kernel form");
}

AgeProfile sample_kernel(const KernelSpec& spec, const AgeGrid& grid) {
  AgeProfile out(grid.size());
  for (Eigen::Index j = 0; j < out.size(); ++j)
    out(j) = eval_kernel(spec, grid.age(j), grid.max_age);
  return out;
}

ModelConfig ModelConfig::defaults() {
  ModelConfig c;
  for (auto& k : c.kernels) {
    k.mortality = KernelSpec::mortality(0.5);
    k.birth = KernelSpec::birth(3.0);
    k.interaction = KernelSpec::interaction(0.4);
  }
  return c;
}

namespace {

// read_ini keeps trailing "; ..." as part of the value.
std::string strip_comment(std::string v) {
  const auto cut = v.find_first_of(";#");
  if (cut != std::string::npos) v.erase(cut);
  while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back())))
    v.pop_back();
  return v;
}

}  // namespace

ModelConfig parse_config(std::istream& in) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }

  ModelConfig c = ModelConfig::defaults();
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw ConfigError("key " + section + " appears outside any section");
    const auto& keys = known_keys(section);
    if (keys.empty()) throw ConfigError("unknown section [" + section + "]");
    for (const auto& [key, node] : body) {
      if (!keys.count(key))
        throw ConfigError("unknown key '" + key + "' in [" + section + "]");
      const std::string value = strip_comment(node.get_value<std::string>());
      if (key == "A") {
        c.max_age = parse_real(key, value);
      } else if (key == "u_star") {
        c.u_star = parse_real(key, value);
      } else if (key == "c1") {
        c.gains.c1 = parse_real(key, value);
      } else if (key == "c2") {
        c.gains.c2 = parse_real(key, value);
      } else if (key == "theta") {
        c.gains.theta = parse_real(key, value);
      } else if (key == "gamma_factor") {
        c.gamma_factor = parse_real(key, value);
      } else if (key == "sigma_1" || key == "sigma_2") {
        c.sigma[key.back() - '1'] = parse_real(key, value);
      } else if (key == "N_a") {
        c.age_intervals = parse_int(key, value);
      } else if (key == "T_final") {
        c.t_final = parse_real(key, value);
      } else if (key == "dt_policy") {
        if (value != "match_da")
          throw ConfigError("dt_policy must be match_da (got '" + value + "')");
      } else {
        // mu_bar_i, k_bar_i, b_bar_i, mu_table_i, k_table_i, b_table_i
        const int species = key.back() - '1';
        const int kind = key[0] == 'm' ? 0 : key[0] == 'k' ? 1 : 2;
        KernelSpec& spec = kernel_of(c.kernels[species], kind);
        if (key.find("_table_") != std::string::npos) {
          spec = parse_table(key, value);
        } else {
          const double v = parse_real(key, value);
          spec = kind == 0   ? KernelSpec::mortality(v)
                 : kind == 1 ? KernelSpec::birth(v)
                             : KernelSpec::interaction(v);
        }
      }
    }
  }
  return c;
}

ModelConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  ModelConfig c = parse_config(in);
  validate_config(c);
  return c;
}

void validate_config(const ModelConfig& c) {
  if (!(c.max_age > 0) || !std::isfinite(c.max_age))
    throw ConfigError("A must be positive");
  if (!(c.gains.c1 > 0)) throw ConfigError("gain c1 must be positive");
  if (!(c.gains.c2 > 0)) throw ConfigError("gain c2 must be positive");
  if (!(c.gains.theta > 0)) throw ConfigError("gain theta must be positive");
  if (!(c.gamma_factor > 1))
    throw ConfigError("gamma_factor must exceed 1");
  for (int i = 0; i < 2; ++i)
    if (c.sigma[i] && !(*c.sigma[i] > 0))
      throw ConfigError("sigma_" + std::to_string(i + 1) +
                        " must be positive");
  if (c.age_intervals < 2) throw ConfigError("N_a must be at least 2");
  if (!(c.t_final > 0)) throw ConfigError("T_final must be positive");
  if (c.u_star && !(*c.u_star >= 0))
    throw ConfigError("u_star must be non-negative");

  const AgeGrid grid = c.grid();
  for (int i = 0; i < 2; ++i) {
    for (int kind = 0; kind < 3; ++kind) {
      const std::string name = kernel_name(kind, i);
      const KernelSpec& spec = kernel_of(c.kernels[i], kind);
      if (spec.form == KernelForm::tabulated) {
        const auto& p = spec.params;
        if (p.front() > 0 || p[p.size() - 2] < c.max_age)
          throw ConfigError("kernel " + name + ": table must cover [0, A]");
      }
      AgeProfile v;
      try {
        v = sample_kernel(spec, grid);
      } catch (const std::exception& e) {
        throw ConfigError("kernel " + name + ": " + e.what());
      }
      if (!v.allFinite() || (v < 0).any())
        throw ConfigError("kernel " + name + " must be non-negative");
      if (!(trapezoid(v, grid.step()) > 0))
        throw ConfigError("kernel " + name + " must have positive integral");
    }
  }

  // Needs the equilibrium solve: u_star < zeta_2.
  assemble_equilibrium(c);
}

std::string to_config_text(const ModelConfig& c) {
  std::ostringstream os;
  os << "[model]\nA = " << format_real(c.max_age) << "\n";
  for (int kind = 0; kind < 3; ++kind) {
    for (int i = 0; i < 2; ++i) {
      const KernelSpec& spec = kernel_of(c.kernels[i], kind);
      const std::string name = kernel_name(kind, i);
      const std::string stem = name.substr(0, name.size() - 2);
      const std::string suffix = name.substr(name.size() - 1);
      const KernelForm expected = kind == 0   ? KernelForm::exponential_growth
                                  : kind == 1 ? KernelForm::exponential_decay
                                              : KernelForm::parabolic;
      if (spec.form == expected) {
        os << stem << "_bar_" << suffix << " = " << format_real(spec.params[0])
           << "\n";
      } else {
        // Other closed forms have no key of their own; they are written as
        // tables through the grid nodes, which is exact on the grid.
        std::vector<double> p = spec.params;
        if (spec.form != KernelForm::tabulated) {
          const AgeGrid grid = c.grid();
          p.clear();
          for (Eigen::Index j = 0; j < grid.size(); ++j) {
            p.push_back(grid.age(j));
            p.push_back(eval_kernel(spec, grid.age(j), c.max_age));
          }
        }
        os << stem << "_table_" << suffix << " = ";
        for (std::size_t j = 0; j + 1 < p.size(); j += 2)
          os << (j ? ", " : "") << format_real(p[j]) << ":"
             << format_real(p[j + 1]);
        os << "\n";
      }
    }
  }
  if (c.u_star) os << "u_star = " << format_real(*c.u_star) << "\n";
  os << "\n[control]\nc1 = " << format_real(c.gains.c1)
     << "\nc2 = " << format_real(c.gains.c2)
     << "\ntheta = " << format_real(c.gains.theta)
     << "\ngamma_factor = " << format_real(c.gamma_factor) << "\n";
  for (int i = 0; i < 2; ++i)
    if (c.sigma[i])
      os << "sigma_" << i + 1 << " = " << format_real(*c.sigma[i]) << "\n";
  os << "\n[grid]\nN_a = " << c.age_intervals << "\n";
  os << "\n[simulation]\nT_final = " << format_real(c.t_final)
     << "\ndt_policy = match_da\n";
  return os.str();
}

}  // namespace agestruct
