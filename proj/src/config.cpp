#include "pcula/config.hpp"

#include "pcula/errors.hpp"
#include "pcula/trajectory_io.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace pcula {

namespace {

using boost::property_tree::ptree;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(',', start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// Value parsers return false with a type description on mismatch.
bool parse_scalar(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

bool parse_scalar(const std::string& s, std::uint64_t& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec == std::errc() && ptr == s.data() + s.size()) return true;
  // Accept integral values written in floating form, e.g. 1e5.
  double d;
  if (!parse_scalar(s, d) || d < 0 || d != std::floor(d) || d > 9.007199254740992e15)
    return false;
  out = static_cast<std::uint64_t>(d);
  return true;
}

bool parse_scalar(const std::string& s, bool& out) {
  if (s == "true" || s == "yes" || s == "1") {
    out = true;
    return true;
  }
  if (s == "false" || s == "no" || s == "0") {
    out = false;
    return true;
  }
  return false;
}

bool parse_scalar(const std::string& s, std::string& out) {
  out = s;
  return !s.empty();
}

template <class T>
bool parse_scalar(const std::string& s, std::vector<T>& out) {
  out.clear();
  for (const auto& item : split_list(s)) {
    T v;
    if (!parse_scalar(item, v)) return false;
    out.push_back(v);
  }
  return !out.empty();
}

template <class T>
const char* type_name() {
  if constexpr (std::is_same_v<T, double>) return "a number";
  if constexpr (std::is_same_v<T, std::uint64_t>) return "a nonnegative integer";
  if constexpr (std::is_same_v<T, bool>) return "a boolean";
  if constexpr (std::is_same_v<T, std::string>) return "a non-empty string";
  if constexpr (std::is_same_v<T, std::vector<double>>) return "a comma-separated list of numbers";
  if constexpr (std::is_same_v<T, std::vector<std::uint64_t>>)
    return "a comma-separated list of nonnegative integers";
  return "a value";
}

using Setter = std::function<void(const std::string& value, const std::string& where,
                                  std::vector<std::string>& errs)>;

template <class T>
Setter setter(std::optional<T>& slot) {
  return [&slot](const std::string& value, const std::string& where,
                 std::vector<std::string>& errs) {
    T v;
    if (!parse_scalar(value, v)) {
      errs.push_back(where + ": expected " + type_name<T>() + ", got '" + value + "'");
      return;
    }
    slot = std::move(v);
  };
}

void apply_section(const ptree& section, const std::string& name,
                   const std::map<std::string, Setter>& keys, std::vector<std::string>& errs) {
  for (const auto& [key, node] : section) {
    const std::string where = "[" + name + "] " + key;
    auto it = keys.find(key);
    if (it == keys.end()) {
      errs.push_back("unknown key '" + key + "' in section [" + name + "]");
      continue;
    }
    it->second(trim(node.data()), where, errs);
  }
}

struct DomainSections {
  std::map<std::string, const ptree*> named;
  std::set<std::string> used;
};

DomainSpec parse_domain(const ptree& section, const std::string& name, DomainSections& all,
                        int depth, std::vector<std::string>& errs) {
  DomainSpec d;
  std::optional<std::string> type;
  std::optional<std::vector<std::string>> parts;
  std::map<std::string, Setter> keys{
      {"type", setter(type)},
      {"center", setter(d.center)},
      {"radius", setter(d.radius)},
      {"lower", setter(d.lower)},
      {"upper", setter(d.upper)},
      {"normal", setter(d.normal)},
      {"offset", setter(d.offset)},
      {"semi_axes", setter(d.semi_axes)},
      {"parts", [&parts](const std::string& v, const std::string& where,
                         std::vector<std::string>& e) {
         auto items = split_list(v);
         if (std::any_of(items.begin(), items.end(), [](auto& s) { return s.empty(); }))
           e.push_back(where + ": expected a comma-separated list of section names");
         else
           parts = std::move(items);
       }},
  };
  apply_section(section, name, keys, errs);
  if (!type) {
    errs.push_back("missing required key 'type' in section [" + name + "]");
    return d;
  }
  d.type = *type;
  static const std::map<std::string, std::set<std::string>> allowed{
      {"ball", {"type", "center", "radius"}},
      {"box", {"type", "lower", "upper"}},
      {"halfspace", {"type", "normal", "offset"}},
      {"ellipsoid", {"type", "semi_axes", "center"}},
      {"intersection", {"type", "parts"}},
  };
  static const std::map<std::string, std::vector<std::string>> required{
      {"ball", {"center", "radius"}},
      {"box", {"lower", "upper"}},
      {"halfspace", {"normal", "offset"}},
      {"ellipsoid", {"semi_axes"}},
      {"intersection", {"parts"}},
  };
  auto it = allowed.find(d.type);
  if (it == allowed.end()) {
    errs.push_back("[" + name + "] type: unknown domain type '" + d.type +
                   "' (expected ball, box, halfspace, ellipsoid or intersection)");
    return d;
  }
  for (const auto& [key, node] : section) {
    if (keys.count(key) && !it->second.count(key))
      errs.push_back("[" + name + "] " + key + ": key not used by domain type " + d.type);
  }
  for (const auto& key : required.at(d.type)) {
    if (section.find(key) == section.not_found())
      errs.push_back("missing required key '" + key + "' in section [" + name + "]");
  }
  if (d.type == "intersection" && parts) {
    if (depth > 8) {
      errs.push_back("[" + name + "] parts: intersections nested too deeply (cycle?)");
      return d;
    }
    for (const auto& part : *parts) {
      auto ps = all.named.find(part);
      if (ps == all.named.end()) {
        errs.push_back("[" + name + "] parts: no section [domain." + part + "]");
        continue;
      }
      all.used.insert(part);
      d.parts.emplace_back(part, parse_domain(*ps->second, "domain." + part, all, depth + 1, errs));
    }
  }
  return d;
}

PotentialSpec parse_potential(const ptree& section, std::vector<std::string>& errs) {
  PotentialSpec p;
  std::optional<std::string> type;
  std::map<std::string, Setter> keys{
      {"type", setter(type)}, {"alpha", setter(p.alpha)}, {"precision", setter(p.precision)}};
  apply_section(section, "potential", keys, errs);
  if (!type) {
    errs.push_back("missing required key 'type' in section [potential]");
    return p;
  }
  p.type = *type;
  if (p.type == "quadratic") {
    if (!p.alpha) errs.push_back("missing required key 'alpha' in section [potential]");
    if (p.precision) errs.push_back("[potential] precision: key not used by potential type quadratic");
  } else if (p.type == "gaussian") {
    if (!p.precision) errs.push_back("missing required key 'precision' in section [potential]");
    if (p.alpha) errs.push_back("[potential] alpha: key not used by potential type gaussian");
  } else {
    errs.push_back("[potential] type: unknown potential type '" + p.type +
                   "' (expected quadratic or gaussian)");
  }
  return p;
}

template <class T>
const T& required(const std::optional<T>& v, const char* key, const std::string& type) {
  if (!v) throw InvalidArgument("missing key '" + std::string(key) + "' for type " + type);
  return *v;
}

Point to_point(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), Eigen::Index(v.size()));
}

}  // namespace

ConvexDomain DomainSpec::build() const {
  if (type == "ball") return ConvexDomain::ball(to_point(required(center, "center", type)), required(radius, "radius", type));
  if (type == "box") return ConvexDomain::box(to_point(required(lower, "lower", type)), to_point(required(upper, "upper", type)));
  if (type == "halfspace")
    return ConvexDomain::halfspace(to_point(required(normal, "normal", type)), required(offset, "offset", type));
  if (type == "ellipsoid") {
    const Point axes = to_point(required(semi_axes, "semi_axes", type));
    if (center) return ConvexDomain::ellipsoid(axes, to_point(*center));
    return ConvexDomain::ellipsoid(axes);
  }
  if (type == "intersection") {
    std::vector<ConvexDomain> built;
    for (const auto& [name, spec] : parts) built.push_back(spec.build());
    return ConvexDomain::intersection(std::move(built));
  }
  throw InvalidArgument("unknown domain type '" + type + "'");
}

Potential PotentialSpec::build() const {
  if (type == "quadratic") return Potential::quadratic(required(alpha, "alpha", type));
  if (type == "gaussian") {
    const auto& v = required(precision, "precision", type);
    const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(double(v.size()))));
    if (d * d != Eigen::Index(v.size()))
      throw InvalidArgument("gaussian precision must have a square number of entries");
    Eigen::MatrixXd p(d, d);
    for (Eigen::Index r = 0; r < d; ++r)
      for (Eigen::Index c = 0; c < d; ++c) p(r, c) = v[std::size_t(r * d + c)];
    return Potential::gaussian_centered(std::move(p));
  }
  throw InvalidArgument("unknown potential type '" + type + "'");
}

std::vector<std::uint64_t> RunConfig::seed_list() const {
  if (seeds) return *seeds;
  if (seed) return {*seed};
  return {1};
}

RunConfig parse_config(std::string_view text) {
  ptree tree;
  {
    std::istringstream is{std::string(text)};
    try {
      boost::property_tree::read_ini(is, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
      throw ConfigError({"line " + std::to_string(e.line()) + ": " + e.message()});
    }
  }

  RunConfig c;
  std::vector<std::string> errs;
  std::optional<std::string> command;
  std::map<std::string, Setter> root_keys{{"command", setter(command)}};

  std::map<std::string, Setter> sampler_keys{
      {"n", setter(c.n)},           {"h", setter(c.h)},
      {"sigma", setter(c.sigma)},   {"steps", setter(c.steps)},
      {"burn_in", setter(c.burn_in)}, {"thin", setter(c.thin)},
      {"seed", setter(c.seed)},     {"seeds", setter(c.seeds)},
      {"initial", setter(c.initial)},
  };
  std::map<std::string, Setter> experiment_keys{
      {"route", setter(c.route)},
      {"n_list", setter(c.n_list)},
      {"h_list", setter(c.h_list)},
      {"initial_a", setter(c.initial_a)},
      {"initial_b", setter(c.initial_b)},
      {"subsample", setter(c.subsample)},
      {"histogram_bins", setter(c.histogram_bins)},
      {"record_every", setter(c.record_every)},
      {"quantile_points", setter(c.quantile_points)},
      {"accuracy_floor", setter(c.accuracy_floor)},
      {"dx", setter(c.dx)},
      {"epsilon", setter(c.epsilon)},
      {"stationary_dx", setter(c.stationary_dx)},
      {"slope_ceiling", setter(c.slope_ceiling)},
      {"resolve_ratio", setter(c.resolve_ratio)},
  };
  std::map<std::string, Setter> grid_keys{
      {"lower", setter(c.grid_lower)}, {"upper", setter(c.grid_upper)}, {"nodes", setter(c.grid_nodes)}};
  std::map<std::string, Setter> output_keys{
      {"directory", setter(c.output_directory)}, {"strict", setter(c.strict)}, {"binary", setter(c.binary)}};

  DomainSections domain_sections;
  const ptree* domain_root = nullptr;
  bool domain_clean = true, potential_clean = true;
  for (const auto& [key, node] : tree) {
    if (node.empty()) {
      // Top-level key (an empty section would also land here).
      auto it = root_keys.find(key);
      if (it == root_keys.end())
        errs.push_back("unknown top-level key '" + key + "'");
      else
        it->second(trim(node.data()), key, errs);
    } else if (key == "domain") {
      domain_root = &node;
    } else if (key.rfind("domain.", 0) == 0) {
      domain_sections.named[key.substr(7)] = &node;
    } else if (key == "potential") {
      const auto before = errs.size();
      c.potential = parse_potential(node, errs);
      potential_clean = errs.size() == before;
    } else if (key == "sampler") {
      apply_section(node, key, sampler_keys, errs);
    } else if (key == "experiment") {
      apply_section(node, key, experiment_keys, errs);
    } else if (key == "grid") {
      apply_section(node, key, grid_keys, errs);
    } else if (key == "output") {
      apply_section(node, key, output_keys, errs);
    } else {
      errs.push_back("unknown section [" + key + "]");
    }
  }
  if (domain_root) {
    const auto before = errs.size();
    c.domain = parse_domain(*domain_root, "domain", domain_sections, 0, errs);
    domain_clean = errs.size() == before;
  }
  for (const auto& [name, node] : domain_sections.named) {
    if (!domain_sections.used.count(name))
      errs.push_back("section [domain." + name + "] is not referenced by any intersection");
  }
  if (!command) {
    errs.push_back("missing required key 'command'");
  } else {
    c.command = *command;
  }
  // Semantic checks run even after syntax errors so one pass reports everything
  // (skipped only when the command itself is unusable).
  if (command) {
    // missing keys, unknown types and dangling parts were already reported by the parse
    auto repeats_parse_error = [](const std::string& e, const char* prefix, bool clean) {
      return !clean && e.rfind(prefix, 0) == 0 &&
             (e.find("missing key '") != std::string::npos ||
              e.find(" type '") != std::string::npos ||
              e.find("no components") != std::string::npos);
    };
    for (auto& e : validate_config(c)) {
      if (repeats_parse_error(e, "[domain]: ", domain_clean) ||
          repeats_parse_error(e, "[potential]: ", potential_clean))
        continue;
      errs.push_back(std::move(e));
    }
  }
  if (!errs.empty()) throw ConfigError(std::move(errs));
  return c;
}

std::vector<std::string> validate_config(const RunConfig& c) {
  std::vector<std::string> errs;
  if (std::find(std::begin(kCommands), std::end(kCommands), c.command) == std::end(kCommands)) {
    errs.push_back("command: unknown command '" + c.command +
                   "' (expected sample, contraction, penalty-sweep, fig2, step-bias or density-grid)");
    return errs;
  }
  const bool fig2 = c.command == "fig2";
  auto need = [&](bool present, const std::string& what) {
    if (!present) errs.push_back("missing required key " + what + " for command " + c.command);
  };

  std::optional<ConvexDomain> domain;
  std::optional<Potential> potential;
  if (fig2) {
    if (c.domain) errs.push_back("[domain]: fig2 uses the fixed ellipse with semi-axes 1, 0.5; remove this section");
    if (c.potential && c.potential->type != "quadratic")
      errs.push_back("[potential] type: fig2 requires a quadratic potential");
  } else {
    if (!c.domain) errs.push_back("missing required section [domain] for command " + c.command);
    if (!c.potential) errs.push_back("missing required section [potential] for command " + c.command);
  }
  if (c.domain) {
    try {
      domain = c.domain->build();
    } catch (const std::exception& e) {
      errs.push_back(std::string("[domain]: ") + e.what());
    }
  }
  if (c.potential) {
    try {
      potential = c.potential->build();
    } catch (const std::exception& e) {
      errs.push_back(std::string("[potential]: ") + e.what());
    }
  }
  if (domain && potential && potential->dimension() &&
      *potential->dimension() != domain->dimension())
    errs.push_back("[potential] precision: dimension " + std::to_string(*potential->dimension()) +
                   " does not match domain dimension " + std::to_string(domain->dimension()));
  if (fig2) domain = ConvexDomain::ellipsoid(Point{{1.0, 0.5}});

  if (c.h && !(*c.h > 0.0)) errs.push_back("[sampler] h: h > 0 required");
  if (c.sigma && !(*c.sigma > 0.0)) errs.push_back("[sampler] sigma: sigma > 0 required");
  if (c.n && !(*c.n >= 0.0)) errs.push_back("[sampler] n: n >= 0 required");
  if (c.steps && *c.steps < 1) errs.push_back("[sampler] steps: steps >= 1 required");
  if (c.thin && *c.thin < 1) errs.push_back("[sampler] thin: thin >= 1 required");
  if (c.burn_in && c.steps && *c.steps >= 1 && *c.burn_in >= *c.steps)
    errs.push_back("[sampler] burn_in: burn_in < steps required");
  if (c.seed && c.seeds) errs.push_back("[sampler]: give either seed or seeds, not both");
  if (c.route && *c.route != "monte-carlo" && *c.route != "quadrature")
    errs.push_back("[experiment] route: expected monte-carlo or quadrature");
  if (c.accuracy_floor && !(*c.accuracy_floor >= 0.0 && *c.accuracy_floor <= 1.0))
    errs.push_back("[experiment] accuracy_floor: must lie in [0, 1]");
  if (c.dx && !(*c.dx > 0.0)) errs.push_back("[experiment] dx: dx > 0 required");
  if (c.histogram_bins && *c.histogram_bins == 0)
    errs.push_back("[experiment] histogram_bins: must be positive");
  if (c.subsample && (*c.subsample < 2 || *c.subsample > 4096))
    errs.push_back("[experiment] subsample: must lie in [2, 4096]");

  auto check_point = [&](const std::optional<std::vector<double>>& v, const std::string& what) {
    if (v && domain && Eigen::Index(v->size()) != domain->dimension())
      errs.push_back(what + ": expected " + std::to_string(domain->dimension()) +
                     " coordinates, got " + std::to_string(v->size()));
  };
  check_point(c.initial, "[sampler] initial");
  check_point(c.initial_a, "[experiment] initial_a");
  check_point(c.initial_b, "[experiment] initial_b");

  auto check_increasing = [&](const std::optional<std::vector<double>>& v, const std::string& what,
                              std::size_t min_size = 2) {
    if (!v) return;
    if (v->size() < min_size) errs.push_back(what + ": at least " + std::to_string(min_size) + " entries required");
    for (std::size_t i = 1; i < v->size(); ++i)
      if (!((*v)[i] > (*v)[i - 1])) {
        errs.push_back(what + ": entries must be strictly increasing");
        break;
      }
  };

  const std::string& cmd = c.command;
  if (cmd == "sample") {
    need(c.n.has_value(), "[sampler] n");
    need(c.h.has_value(), "[sampler] h");
    need(c.steps.has_value(), "[sampler] steps");
  } else if (cmd == "contraction") {
    need(c.h.has_value(), "[sampler] h");
    need(c.steps.has_value(), "[sampler] steps");
    need(c.initial_a.has_value(), "[experiment] initial_a");
    need(c.initial_b.has_value(), "[experiment] initial_b");
    if (potential && !(potential->strong_convexity() > 0.0))
      errs.push_back("[potential]: contraction requires a strongly convex potential (m > 0)");
  } else if (cmd == "penalty-sweep") {
    need(c.n_list.has_value(), "[experiment] n_list");
    check_increasing(c.n_list, "[experiment] n_list");
    if (c.route.value_or("monte-carlo") == "monte-carlo") {
      need(c.h.has_value(), "[sampler] h");
      need(c.steps.has_value(), "[sampler] steps");
      if (domain && domain->dimension() > 2)
        errs.push_back("[domain]: penalty sweep supports dimension 1 or 2");
    } else if (domain && domain->dimension() != 1) {
      errs.push_back("[domain]: the quadrature route is one-dimensional");
    }
  } else if (cmd == "fig2") {
    check_increasing(c.n_list, "[experiment] n_list", 1);
  } else if (cmd == "step-bias") {
    need(c.n.has_value(), "[sampler] n");
    need(c.steps.has_value(), "[sampler] steps");
    need(c.h_list.has_value(), "[experiment] h_list");
    if (domain && domain->dimension() != 1)
      errs.push_back("[domain]: step-bias is one-dimensional");
    if (c.h_list) {
      for (std::size_t i = 1; i < c.h_list->size(); ++i)
        if (!((*c.h_list)[i] < (*c.h_list)[i - 1])) {
          errs.push_back("[experiment] h_list: entries must be strictly decreasing");
          break;
        }
    }
  } else if (cmd == "density-grid") {
    need(c.n.has_value(), "[sampler] n");
    need(c.grid_lower.has_value(), "[grid] lower");
    need(c.grid_upper.has_value(), "[grid] upper");
    need(c.grid_nodes.has_value(), "[grid] nodes");
    if (domain && domain->dimension() > 2)
      errs.push_back("[domain]: density grids support dimension 1 or 2");
    if (domain && c.grid_lower && c.grid_upper && c.grid_nodes) {
      const auto d = std::size_t(domain->dimension());
      if (c.grid_lower->size() != d || c.grid_upper->size() != d || c.grid_nodes->size() != d)
        errs.push_back("[grid]: lower, upper and nodes need one entry per dimension");
    }
  }

  // Step-size stability guard; only an error in strict mode.
  if (c.is_strict() && potential && domain) {
    auto check_h = [&](double h, double n) {
      const double bound = 1.0 / (potential->strong_convexity() + potential->lipschitz() + n);
      if (h > bound)
        errs.push_back("strict mode: h = " + format_double(h) + " exceeds 1/(m + L_n) = " +
                       format_double(bound) + " at n = " + format_double(n));
    };
    std::vector<double> ns;
    if (c.n) ns.push_back(*c.n);
    if (c.n_list) ns.insert(ns.end(), c.n_list->begin(), c.n_list->end());
    if (ns.empty()) ns.push_back(0.0);
    std::vector<double> hs;
    if (c.h) hs.push_back(*c.h);
    if (c.h_list) hs.insert(hs.end(), c.h_list->begin(), c.h_list->end());
    for (double h : hs)
      for (double n : ns) check_h(h, n);
  }
  return errs;
}

namespace {

std::string fmt(double v) { return format_double(v); }
std::string fmt(std::uint64_t v) { return std::to_string(v); }
std::string fmt(bool v) { return v ? "true" : "false"; }
std::string fmt(const std::string& v) { return v; }
template <class T>
std::string fmt(const std::vector<T>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + fmt(v[i]);
  return out;
}

template <class T>
void emit(std::ostringstream& os, const char* key, const std::optional<T>& v) {
  if (v) os << key << " = " << fmt(*v) << "\n";
}

void emit_domain(std::ostringstream& os, const std::string& section, const DomainSpec& d) {
  os << "\n[" << section << "]\n";
  os << "type = " << d.type << "\n";
  emit(os, "center", d.center);
  emit(os, "radius", d.radius);
  emit(os, "lower", d.lower);
  emit(os, "upper", d.upper);
  emit(os, "normal", d.normal);
  emit(os, "offset", d.offset);
  emit(os, "semi_axes", d.semi_axes);
  if (!d.parts.empty()) {
    std::vector<std::string> names;
    for (const auto& [name, spec] : d.parts) names.push_back(name);
    os << "parts = " << fmt(names) << "\n";
    for (const auto& [name, spec] : d.parts) emit_domain(os, "domain." + name, spec);
  }
}

}  // namespace

std::string to_config_text(const RunConfig& c) {
  std::ostringstream os;
  os << "command = " << c.command << "\n";
  if (c.domain) emit_domain(os, "domain", *c.domain);
  if (c.potential) {
    os << "\n[potential]\ntype = " << c.potential->type << "\n";
    emit(os, "alpha", c.potential->alpha);
    emit(os, "precision", c.potential->precision);
  }
  std::ostringstream sampler;
  emit(sampler, "n", c.n);
  emit(sampler, "h", c.h);
  emit(sampler, "sigma", c.sigma);
  emit(sampler, "steps", c.steps);
  emit(sampler, "burn_in", c.burn_in);
  emit(sampler, "thin", c.thin);
  emit(sampler, "seed", c.seed);
  emit(sampler, "seeds", c.seeds);
  emit(sampler, "initial", c.initial);
  if (!sampler.str().empty()) os << "\n[sampler]\n" << sampler.str();
  std::ostringstream exp;
  emit(exp, "route", c.route);
  emit(exp, "n_list", c.n_list);
  emit(exp, "h_list", c.h_list);
  emit(exp, "initial_a", c.initial_a);
  emit(exp, "initial_b", c.initial_b);
  emit(exp, "subsample", c.subsample);
  emit(exp, "histogram_bins", c.histogram_bins);
  emit(exp, "record_every", c.record_every);
  emit(exp, "quantile_points", c.quantile_points);
  emit(exp, "accuracy_floor", c.accuracy_floor);
  emit(exp, "dx", c.dx);
  emit(exp, "epsilon", c.epsilon);
  emit(exp, "stationary_dx", c.stationary_dx);
  emit(exp, "slope_ceiling", c.slope_ceiling);
  emit(exp, "resolve_ratio", c.resolve_ratio);
  if (!exp.str().empty()) os << "\n[experiment]\n" << exp.str();
  std::ostringstream grid;
  emit(grid, "lower", c.grid_lower);
  emit(grid, "upper", c.grid_upper);
  emit(grid, "nodes", c.grid_nodes);
  if (!grid.str().empty()) os << "\n[grid]\n" << grid.str();
  std::ostringstream out;
  emit(out, "directory", c.output_directory);
  emit(out, "strict", c.strict);
  emit(out, "binary", c.binary);
  if (!out.str().empty()) os << "\n[output]\n" << out.str();
  return os.str();
}

}  // namespace pcula
