#include "llab/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>

#include "llab/errors.hpp"
#include "llab/io.hpp"

namespace llab {

namespace {

// "2^a..2^b" -> {a, b}; "a..b" -> {a, b}; returns false for a plain item
bool split_range(std::string_view item, std::string_view& lo, std::string_view& hi) {
  const auto dots = item.find("..");
  if (dots == std::string_view::npos) return false;
  lo = trim(item.substr(0, dots));
  hi = trim(item.substr(dots + 2));
  return true;
}

bool strip_power(std::string_view& s) {
  if (s.size() > 2 && s.substr(0, 2) == "2^") {
    s.remove_prefix(2);
    return true;
  }
  return false;
}

constexpr std::int64_t kMaxRange = 10'000'000;

template <class Emit>
void expand(std::string_view text, Emit&& emit_int, const std::function<void(double)>& emit_real) {
  if (trim(text).empty()) return;
  for (auto raw : split(text, ',')) {
    const auto item = trim(raw);
    if (item.empty()) throw ParameterError("empty list item");
    std::string_view lo, hi;
    if (!split_range(item, lo, hi)) {
      if (strip_power(lo = item)) {
        emit_real(std::ldexp(1.0, static_cast<int>(parse_int(lo))));
      } else {
        emit_int(item);
      }
      continue;
    }
    const bool plo = strip_power(lo);
    const bool phi = strip_power(hi);
    if (plo != phi) throw ParameterError("range '" + std::string(item) + "' mixes 2^a and plain bounds");
    const auto a = parse_int(lo);
    const auto b = parse_int(hi);
    if (b < a) throw ParameterError("range '" + std::string(item) + "' is descending");
    if (b - a >= kMaxRange) throw ParameterError("range '" + std::string(item) + "' is too long");
    for (auto i = a; i <= b; ++i) {
      if (plo) {
        if (i < -1000 || i > 1000) throw ParameterError("exponent out of range in '" + std::string(item) + "'");
        emit_real(std::ldexp(1.0, static_cast<int>(i)));
      } else {
        emit_real(static_cast<double>(i));
      }
    }
  }
}

bool parse_bool(std::string_view v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ParameterError("expected a boolean, got '" + std::string(v) + "'");
}

int to_int(double v, const char* what) {
  if (v != std::floor(v) || v < -2147483648.0 || v > 2147483647.0)
    throw ParameterError(std::string(what) + " needs integers");
  return static_cast<int>(v);
}

using Setter = std::function<void(ExperimentConfig&, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table{
      {"dist", [](ExperimentConfig& c, std::string_view v) { c.dist = Distribution::parse(v); }},
      {"L",
       [](ExperimentConfig& c, std::string_view v) {
         c.L.clear();
         for (double x : parse_real_list(v)) c.L.push_back(to_int(x, "L"));
       }},
      {"k", [](ExperimentConfig& c, std::string_view v) { c.k = parse_real_list(v); }},
      {"vmax", [](ExperimentConfig& c, std::string_view v) { c.vmax = parse_real_list(v); }},
      {"M", [](ExperimentConfig& c, std::string_view v) { c.M = static_cast<int>(parse_int(v)); }},
      {"n_eigs", [](ExperimentConfig& c, std::string_view v) { c.n_eigs = static_cast<int>(parse_int(v)); }},
      {"s", [](ExperimentConfig& c, std::string_view v) { c.s = static_cast<int>(parse_int(v)); }},
      {"seeds",
       [](ExperimentConfig& c, std::string_view v) {
         c.seeds = parse_int_list(v);
         if (c.seeds.empty()) throw ParameterError("seed list is empty");
       }},
      {"tol", [](ExperimentConfig& c, std::string_view v) { c.tol = parse_double(v); }},
      {"max_nodes", [](ExperimentConfig& c, std::string_view v) { c.max_nodes = parse_uint(v); }},
      {"gamma_c", [](ExperimentConfig& c, std::string_view v) { c.gamma_c = parse_real_list(v); }},
      {"target_ratio", [](ExperimentConfig& c, std::string_view v) { c.target_ratio = parse_real_list(v); }},
      {"oracle", [](ExperimentConfig& c, std::string_view v) { c.oracle = parse_bool(v); }},
  };
  return table;
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    if constexpr (std::is_floating_point_v<T>)
      out += format_shortest(v[i]);
    else
      out += std::to_string(v[i]);
  }
  return out;
}

}  // namespace

std::vector<double> parse_real_list(std::string_view text) {
  std::vector<double> out;
  expand(
      text, [&](std::string_view item) { out.push_back(parse_double(item)); },
      [&](double x) { out.push_back(x); });
  return out;
}

std::vector<std::int64_t> parse_int_list(std::string_view text) {
  std::vector<std::int64_t> out;
  expand(
      text, [&](std::string_view item) { out.push_back(parse_int(item)); },
      [&](double x) {
        if (x != std::floor(x) || std::abs(x) > 9.0e18) throw ParameterError("expected integers");
        out.push_back(static_cast<std::int64_t>(x));
      });
  return out;
}

std::vector<ExperimentConfig> parse_config(std::istream& in) {
  std::vector<ExperimentConfig> out;
  std::vector<int> section_lines;
  std::set<ExperimentKind> kinds;
  std::set<std::string, std::less<>> keys;
  std::string line;
  int lineno = 0;

  while (std::getline(in, line)) {
    ++lineno;
    std::string_view text = line;
    if (const auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
    text = trim(text);
    if (text.empty()) continue;

    if (text.front() == '[') {
      if (text.back() != ']') throw ConfigError("unterminated section header", lineno);
      const auto name = trim(text.substr(1, text.size() - 2));
      ExperimentKind kind{};
      try {
        kind = parse_kind(name);
      } catch (const InputError& e) {
        throw ConfigError(e.what(), lineno);
      }
      if (!kinds.insert(kind).second) throw ConfigError("duplicate section [" + std::string(name) + "]", lineno);
      out.emplace_back();
      out.back().kind = kind;
      section_lines.push_back(lineno);
      keys.clear();
      continue;
    }

    const auto eq = text.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'", lineno);
    const auto key = trim(text.substr(0, eq));
    const auto value = trim(text.substr(eq + 1));
    if (out.empty()) throw ConfigError("key '" + std::string(key) + "' outside a [kind] section", lineno);
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError("unknown key '" + std::string(key) + "'", lineno);
    if (!keys.insert(std::string(key)).second) throw ConfigError("duplicate key '" + std::string(key) + "'", lineno);
    try {
      it->second(out.back(), value);
    } catch (const InputError& e) {
      throw ConfigError("key '" + std::string(key) + "': " + e.what(), lineno);
    }
  }

  if (out.empty()) throw ConfigError("no [kind] section found");
  for (std::size_t i = 0; i < out.size(); ++i) {
    try {
      out[i].validate();
    } catch (const InputError& e) {
      throw ConfigError("[" + to_string(out[i].kind) + "]: " + e.what(), section_lines[i]);
    }
  }
  return out;
}

std::vector<ExperimentConfig> load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse_config(in);
}

std::string format_config(const ExperimentConfig& c) {
  std::string out = "[" + to_string(c.kind) + "]\n";
  out += "dist = " + c.dist.to_string() + "\n";
  out += "L = " + join(c.L) + "\n";
  if (c.kind == ExperimentKind::sweep_vmax)
    out += "vmax = " + join(c.vmax) + "\n";
  else if (c.kind != ExperimentKind::homogenized)
    out += "k = " + join(c.k) + "\n";
  out += "M = " + std::to_string(c.M) + "\n";
  out += "n_eigs = " + std::to_string(c.n_eigs) + "\n";
  out += "s = " + std::to_string(c.s) + "\n";
  out += "seeds = " + join(c.seeds) + "\n";
  out += "tol = " + format_shortest(c.tol) + "\n";
  out += "max_nodes = " + std::to_string(c.max_nodes) + "\n";
  if (!c.gamma_c.empty()) out += "gamma_c = " + join(c.gamma_c) + "\n";
  if (!c.target_ratio.empty()) out += "target_ratio = " + join(c.target_ratio) + "\n";
  out += std::string("oracle = ") + (c.oracle ? "true" : "false") + "\n";
  return out;
}

}  // namespace llab
