#include "zomd/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace zomd {

ConfigError::ConfigError(std::size_t line, std::string field, const std::string& message)
    : std::runtime_error(
          (line > 0 ? "line " + std::to_string(line) + ": " : std::string()) +
          (field.empty() ? std::string() : "'" + field + "': ") + message),
      line_(line),
      field_(std::move(field)) {}

const char* to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::AnalyticGrad:
      return "analytic-grad";
    case FieldKind::FdCoordinate:
      return "fd-coordinate";
    case FieldKind::FdDirectional:
      return "fd-directional";
    case FieldKind::FdStencil:
      return "fd-stencil";
  }
  return "unknown";
}

const char* to_string(MirrorKind kind) {
  return kind == MirrorKind::Euclidean ? "euclidean" : "entropy";
}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("trailing characters");
  return v;
}

long long to_integer(const std::string& s) {
  std::size_t used = 0;
  const long long v = std::stoll(s, &used);
  if (used != s.size()) throw std::invalid_argument("trailing characters");
  return v;
}

std::size_t to_count(const std::string& s) {
  const long long v = to_integer(s);
  if (v < 0) throw std::invalid_argument("must be >= 0");
  return static_cast<std::size_t>(v);
}

bool to_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw std::invalid_argument("expected true or false");
}

}  // namespace

void RunConfig::validate() const {
  try {
    problem.validate();
    step.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(0, "", e.what());
  }
  if (mirror == MirrorKind::Entropy && problem.kind != ProblemKind::SimplexQuadratic)
    throw ConfigError(0, "mirror", "the entropy mirror requires problem = simplex-quadratic");
  if (!(epsilon > 0.0)) throw ConfigError(0, "epsilon", "must be > 0");
  if (c && !(*c > 0.0 && *c <= 1.0)) throw ConfigError(0, "c", "must lie in (0, 1]");
  if (t_max < 1) throw ConfigError(0, "t_max", "must be >= 1");
  if (block_size < 0 || block_size > problem.dim)
    throw ConfigError(0, "block_size", "must lie in [0, dim]");
  if (x1 && x1->size() != problem.dim)
    throw ConfigError(0, "x1", "has " + std::to_string(x1->size()) + " coordinates, dim is " +
                                   std::to_string(problem.dim));
  if (gap_tol && !(*gap_tol >= 0.0)) throw ConfigError(0, "gap_tol", "must be >= 0");
  for (double e : sweep_epsilons) {
    if (!(e > 0.0)) throw ConfigError(0, "sweep_epsilons", "entries must be > 0");
  }
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::optional<std::string> c_policy;
  std::optional<std::string> stop;
  std::optional<std::size_t> c_line;

  using Setter = std::function<void(const std::string&)>;
  const std::map<std::string, Setter> setters = {
      {"problem", [&](const std::string& v) { cfg.problem.kind = parse_problem_kind(v); }},
      {"dim", [&](const std::string& v) { cfg.problem.dim = static_cast<Index>(to_count(v)); }},
      {"mu", [&](const std::string& v) { cfg.problem.mu = to_double(v); }},
      {"L", [&](const std::string& v) { cfg.problem.L = to_double(v); }},
      {"seed", [&](const std::string& v) { cfg.problem.seed = to_count(v); }},
      {"tau", [&](const std::string& v) { cfg.problem.tau = to_double(v); }},
      {"terms", [&](const std::string& v) { cfg.problem.terms = static_cast<Index>(to_count(v)); }},
      {"declared_L", [&](const std::string& v) { cfg.problem.declared_L = to_double(v); }},
      {"mirror",
       [&](const std::string& v) {
         if (v == "euclidean") cfg.mirror = MirrorKind::Euclidean;
         else if (v == "entropy") cfg.mirror = MirrorKind::Entropy;
         else throw std::invalid_argument("expected euclidean | entropy");
       }},
      {"field",
       [&](const std::string& v) {
         if (v == "analytic-grad") cfg.field = FieldKind::AnalyticGrad;
         else if (v == "fd-coordinate") cfg.field = FieldKind::FdCoordinate;
         else if (v == "fd-directional") cfg.field = FieldKind::FdDirectional;
         else if (v == "fd-stencil") cfg.field = FieldKind::FdStencil;
         else
           throw std::invalid_argument(
               "expected analytic-grad | fd-coordinate | fd-directional | fd-stencil");
       }},
      {"block_size", [&](const std::string& v) { cfg.block_size = static_cast<Index>(to_count(v)); }},
      {"epsilon", [&](const std::string& v) { cfg.epsilon = to_double(v); }},
      {"c_policy",
       [&](const std::string& v) {
         if (v != "from-mu-L" && v != "explicit")
           throw std::invalid_argument("expected from-mu-L | explicit");
         c_policy = v;
       }},
      {"c", [&](const std::string& v) { cfg.c = to_double(v); }},
      {"reuse_center", [&](const std::string& v) { cfg.reuse_center = to_bool(v); }},
      {"step_rule", [&](const std::string& v) { cfg.step.rule = parse_step_rule(v); }},
      {"eta0", [&](const std::string& v) { cfg.step.eta0 = to_double(v); }},
      {"grid_factor", [&](const std::string& v) { cfg.step.grid_factor = to_double(v); }},
      {"grid_width", [&](const std::string& v) { cfg.step.grid_width = static_cast<int>(to_count(v)); }},
      {"shrink", [&](const std::string& v) { cfg.step.shrink = to_double(v); }},
      {"max_probes", [&](const std::string& v) { cfg.step.max_probes = static_cast<int>(to_count(v)); }},
      {"t_max", [&](const std::string& v) { cfg.t_max = to_count(v); }},
      {"stop",
       [&](const std::string& v) {
         if (v != "iters" && v != "gap_tol") throw std::invalid_argument("expected iters | gap_tol");
         stop = v;
       }},
      {"gap_tol", [&](const std::string& v) { cfg.gap_tol = to_double(v); }},
      {"on_uncertified",
       [&](const std::string& v) {
         if (v == "continue") cfg.stop_on_uncertified = false;
         else if (v == "stop") cfg.stop_on_uncertified = true;
         else throw std::invalid_argument("expected continue | stop");
       }},
      {"x1",
       [&](const std::string& v) {
         const auto items = split_list(v);
         if (items.empty()) throw std::invalid_argument("empty coordinate list");
         Vector x(static_cast<Index>(items.size()));
         for (std::size_t i = 0; i < items.size(); ++i) x(static_cast<Index>(i)) = to_double(items[i]);
         cfg.x1 = x;
       }},
      {"floor_mesh", [&](const std::string& v) { cfg.floor_mesh = to_count(v); }},
      {"output_dir", [&](const std::string& v) { cfg.output_dir = v; }},
      {"sweep_epsilons",
       [&](const std::string& v) {
         cfg.sweep_epsilons.clear();
         for (const auto& item : split_list(v)) cfg.sweep_epsilons.push_back(to_double(item));
       }},
      {"sweep_rules",
       [&](const std::string& v) {
         cfg.sweep_rules.clear();
         for (const auto& item : split_list(v)) cfg.sweep_rules.push_back(parse_step_rule(item));
       }},
  };

  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(line_no, "", "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(line_no, "", "missing key");
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError(line_no, key, "unknown key");
    if (!seen.insert(key).second) throw ConfigError(line_no, key, "duplicate key");
    if (value.empty()) throw ConfigError(line_no, key, "missing value");
    try {
      it->second(value);
    } catch (const std::exception& e) {
      throw ConfigError(line_no, key, std::string("invalid value '") + value + "': " + e.what());
    }
    if (key == "c") c_line = line_no;
  }

  if (c_policy == std::string("from-mu-L") && cfg.c)
    throw ConfigError(*c_line, "c", "conflicts with c_policy = from-mu-L");
  if (c_policy == std::string("explicit") && !cfg.c)
    throw ConfigError(0, "c", "c_policy = explicit needs a value for c");
  if (stop == std::string("gap_tol") && !cfg.gap_tol)
    throw ConfigError(0, "gap_tol", "stop = gap_tol needs a gap_tol value");
  if (stop == std::string("iters")) cfg.gap_tol.reset();

  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw ConfigError(0, "", "cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << file.rdbuf();
  return parse_config(buf.str());
}

}  // namespace zomd
