#pragma once

// Line-oriented `section.key = value` configuration. Blank lines and lines
// starting with '#' are ignored; unknown or repeated keys are errors.
// render() emits every key in a fixed order, which is the canonical form.

#include <charconv>
#include <cstdint>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "roaddet/guided_filter.hpp"
#include "roaddet/segmentation.hpp"
#include "roaddet/shadow.hpp"
#include "roaddet/specular.hpp"
#include "roaddet/svm.hpp"

namespace roaddet {

enum class FilterKind { Shadow, RainSnow, Specular };

inline std::string_view to_string(FilterKind f) {
  switch (f) {
    case FilterKind::Shadow: return "shadow";
    case FilterKind::RainSnow: return "rainsnow";
    case FilterKind::Specular: return "specular";
  }
  return "?";
}

struct PipelineConfig {
  bool shadow = true;
  bool rainsnow = true;
  bool specular = true;
  std::vector<FilterKind> order{FilterKind::RainSnow, FilterKind::Shadow, FilterKind::Specular};
  std::uint64_t rng_seed = 1;

  ShadowParams shadow_params{5, 0.75, 0.3};
  GuidedFilterParams guided{8, 0.04};
  SpecularParams specular_params{3, 0.02, 0.95, 0.5, 0.5, 0.25};
  SvmHyper svm{10.0, 1e-3, 10000};
  SeedLayout seeds;
  std::size_t group_size = 3;
  bool dump_intermediates = false;

  bool enabled(FilterKind f) const noexcept {
    switch (f) {
      case FilterKind::Shadow: return shadow;
      case FilterKind::RainSnow: return rainsnow;
      case FilterKind::Specular: return specular;
    }
    return false;
  }

  // The same config with every filter disabled.
  PipelineConfig without_filters() const {
    PipelineConfig c = *this;
    c.shadow = c.rainsnow = c.specular = false;
    return c;
  }
};

namespace config_detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(s);
  while (std::getline(in, cell, sep)) {
    cell = trim(cell);
    if (!cell.empty()) out.push_back(cell);
  }
  return out;
}

inline std::string fmt(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& key, const std::string& s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw Error(ErrorKind::InvalidConfig, key + ": not a number: '" + s + "'");
  return v;
}

inline long long parse_int(const std::string& key, const std::string& s) {
  long long v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw Error(ErrorKind::InvalidConfig, key + ": not an integer: '" + s + "'");
  return v;
}

inline bool parse_bool(const std::string& key, const std::string& s) {
  if (s == "on" || s == "true" || s == "1") return true;
  if (s == "off" || s == "false" || s == "0") return false;
  throw Error(ErrorKind::InvalidConfig, key + ": expected on/off, got '" + s + "'");
}

inline FilterKind parse_filter(const std::string& key, const std::string& s) {
  if (s == "shadow") return FilterKind::Shadow;
  if (s == "rainsnow") return FilterKind::RainSnow;
  if (s == "specular") return FilterKind::Specular;
  throw Error(ErrorKind::InvalidConfig, key + ": unknown filter '" + s + "'");
}

struct Field {
  std::string key;
  std::function<std::string(const PipelineConfig&)> render;
  std::function<void(PipelineConfig&, const std::string&)> parse;
};

inline const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    auto boolean = [&f](std::string key, bool PipelineConfig::*member) {
      f.push_back({key, [member](const PipelineConfig& c) { return std::string(c.*member ? "on" : "off"); },
                   [member, key](PipelineConfig& c, const std::string& v) { c.*member = parse_bool(key, v); }});
    };
    auto real = [&f](std::string key, auto get) {
      f.push_back({key, [get](const PipelineConfig& c) { return fmt(get(const_cast<PipelineConfig&>(c))); },
                   [get, key](PipelineConfig& c, const std::string& v) { get(c) = parse_double(key, v); }});
    };
    auto integer = [&f](std::string key, auto get) {
      f.push_back({key, [get](const PipelineConfig& c) { return std::to_string(get(const_cast<PipelineConfig&>(c))); },
                   [get, key](PipelineConfig& c, const std::string& v) {
                     using T = std::remove_reference_t<decltype(get(c))>;
                     const long long parsed = parse_int(key, v);
                     if (parsed < 0 && std::is_unsigned_v<T>)
                       throw Error(ErrorKind::InvalidConfig, key + ": must be non-negative");
                     get(c) = static_cast<T>(parsed);
                   }});
    };

    boolean("pipeline.shadow", &PipelineConfig::shadow);
    boolean("pipeline.rainsnow", &PipelineConfig::rainsnow);
    boolean("pipeline.specular", &PipelineConfig::specular);
    f.push_back({"pipeline.order",
                 [](const PipelineConfig& c) {
                   std::string s;
                   for (auto k : c.order) s += (s.empty() ? "" : ",") + std::string(to_string(k));
                   return s;
                 },
                 [](PipelineConfig& c, const std::string& v) {
                   c.order.clear();
                   for (const auto& name : split(v, ',')) c.order.push_back(parse_filter("pipeline.order", name));
                 }});
    integer("pipeline.rng_seed", [](PipelineConfig& c) -> std::uint64_t& { return c.rng_seed; });
    integer("shadow.buffer_width", [](PipelineConfig& c) -> int& { return c.shadow_params.buffer_width; });
    real("shadow.min_separability", [](PipelineConfig& c) -> double& { return c.shadow_params.min_separability; });
    real("shadow.max_fraction", [](PipelineConfig& c) -> double& { return c.shadow_params.max_fraction; });
    integer("rainsnow.radius", [](PipelineConfig& c) -> int& { return c.guided.radius; });
    real("rainsnow.epsilon", [](PipelineConfig& c) -> double& { return c.guided.epsilon; });
    integer("specular.patch_radius", [](PipelineConfig& c) -> int& { return c.specular_params.patch_radius; });
    real("specular.achromatic_band", [](PipelineConfig& c) -> double& { return c.specular_params.achromatic_band; });
    real("specular.lambda_percentile", [](PipelineConfig& c) -> double& { return c.specular_params.lambda_percentile; });
    real("specular.fallback_lambda_max", [](PipelineConfig& c) -> double& { return c.specular_params.fallback_lambda_max; });
    real("specular.min_separability", [](PipelineConfig& c) -> double& { return c.specular_params.min_separability; });
    real("specular.max_fraction", [](PipelineConfig& c) -> double& { return c.specular_params.max_fraction; });
    real("svm.c", [](PipelineConfig& c) -> double& { return c.svm.C; });
    real("svm.tol", [](PipelineConfig& c) -> double& { return c.svm.tol; });
    integer("svm.max_sweeps", [](PipelineConfig& c) -> long& { return c.svm.max_sweeps; });
    f.push_back({"seeds.road",
                 [](const PipelineConfig& c) {
                   std::string s;
                   for (auto p : c.seeds.road) s += (s.empty() ? "" : " ") + fmt(p.x) + "," + fmt(p.y);
                   return s;
                 },
                 [](PipelineConfig& c, const std::string& v) {
                   c.seeds.road.clear();
                   for (const auto& pt : split(v, ' ')) {
                     auto xy = split(pt, ',');
                     if (xy.size() != 2) throw Error(ErrorKind::InvalidConfig, "seeds.road: expected x,y pairs");
                     c.seeds.road.push_back({parse_double("seeds.road", xy[0]), parse_double("seeds.road", xy[1])});
                   }
                 }});
    f.push_back({"seeds.nonroad",
                 [](const PipelineConfig& c) {
                   std::string s;
                   for (auto r : c.seeds.nonroad)
                     s += (s.empty() ? "" : " ") + fmt(r.x0) + "," + fmt(r.y0) + "," + fmt(r.x1) + "," + fmt(r.y1);
                   return s;
                 },
                 [](PipelineConfig& c, const std::string& v) {
                   c.seeds.nonroad.clear();
                   for (const auto& rect : split(v, ' ')) {
                     auto q = split(rect, ',');
                     if (q.size() != 4) throw Error(ErrorKind::InvalidConfig, "seeds.nonroad: expected x0,y0,x1,y1");
                     c.seeds.nonroad.push_back({parse_double("seeds.nonroad", q[0]), parse_double("seeds.nonroad", q[1]),
                                                parse_double("seeds.nonroad", q[2]), parse_double("seeds.nonroad", q[3])});
                   }
                 }});
    integer("seeds.samples_per_class", [](PipelineConfig& c) -> int& { return c.seeds.samples_per_class; });
    integer("eval.group_size", [](PipelineConfig& c) -> std::size_t& { return c.group_size; });
    boolean("dump.intermediates", &PipelineConfig::dump_intermediates);
    return f;
  }();
  return table;
}

}  // namespace config_detail

// Throws InvalidConfig when a parameter leaves its module's domain.
inline void validate(const PipelineConfig& c) {
  auto bad = [](const std::string& why) { return Error(ErrorKind::InvalidConfig, why); };
  if (c.order.size() != 3) throw bad("pipeline.order must list each filter exactly once");
  for (auto f : {FilterKind::Shadow, FilterKind::RainSnow, FilterKind::Specular})
    if (std::count(c.order.begin(), c.order.end(), f) != 1)
      throw bad("pipeline.order must list each filter exactly once");
  if (c.shadow_params.buffer_width < 1) throw bad("shadow.buffer_width must be >= 1");
  if (!(c.shadow_params.min_separability >= 0.0 && c.shadow_params.min_separability <= 1.0))
    throw bad("shadow.min_separability must lie in [0,1]");
  if (!(c.shadow_params.max_fraction > 0.0 && c.shadow_params.max_fraction <= 1.0))
    throw bad("shadow.max_fraction must lie in (0,1]");
  if (c.guided.radius < 1) throw bad("rainsnow.radius must be >= 1");
  if (!(c.guided.epsilon >= 0.0)) throw bad("rainsnow.epsilon must be >= 0");
  try {
    validate(c.specular_params);
  } catch (const Error& e) {
    throw bad("specular." + e.message());
  }
  if (!(c.specular_params.fallback_lambda_max > 1.0 / 3.0 && c.specular_params.fallback_lambda_max <= 1.0))
    throw bad("specular.fallback_lambda_max must lie in (1/3, 1]");
  if (!(c.svm.C > 0.0)) throw bad("svm.c must be > 0");
  if (!(c.svm.tol > 0.0)) throw bad("svm.tol must be > 0");
  if (c.svm.max_sweeps < 1) throw bad("svm.max_sweeps must be >= 1");
  validate(c.seeds);
  if (c.group_size < 1) throw bad("eval.group_size must be >= 1");
}

inline std::string render_config(const PipelineConfig& c) {
  std::string out;
  for (const auto& f : config_detail::fields()) out += f.key + " = " + f.render(c) + "\n";
  return out;
}

inline PipelineConfig parse_config(const std::string& text) {
  PipelineConfig c;
  c.seeds.rng_seed = c.rng_seed;
  std::map<std::string, int> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = config_detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::InvalidConfig, "line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = config_detail::trim(t.substr(0, eq));
    const std::string value = config_detail::trim(t.substr(eq + 1));
    const auto& table = config_detail::fields();
    auto it = std::find_if(table.begin(), table.end(), [&](const auto& f) { return f.key == key; });
    if (it == table.end())
      throw Error(ErrorKind::InvalidConfig, "line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    if (seen[key]++)
      throw Error(ErrorKind::InvalidConfig, "line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    it->parse(c, value);
  }
  c.seeds.rng_seed = c.rng_seed;
  validate(c);
  return c;
}

// FNV-1a 64 of the canonical rendering, as 16 hex digits.
inline std::string config_digest(const PipelineConfig& c) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : render_config(c)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = kHex[h & 0xf];
  return out;
}

}  // namespace roaddet
