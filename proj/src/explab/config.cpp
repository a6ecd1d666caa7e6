#include <algorithm>
#include <charconv>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <toml.hpp>

#include "oscillab/explab.hpp"

namespace osc {

using nlohmann::json;

namespace {

const std::vector<std::string> kExperiments = {"knapp",     "wavepackets", "transequi", "rescale",
                                               "decouple",  "partition",   "exponents", "gauss",
                                               "hessian",   "spectra",     "l2proxy",   "broadnorm"};

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0;
  try {
    x = std::stod(trim(v), &used);
  } catch (const std::exception&) {
    throw ArgumentError("option " + key + ": '" + v + "' is not a number");
  }
  if (used != trim(v).size()) throw ArgumentError("option " + key + ": '" + v + "' is not a number");
  return x;
}

long long parse_int(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  long long x = 0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
  if (ec != std::errc() || p != t.data() + t.size())
    throw ArgumentError("option " + key + ": '" + v + "' is not an integer");
  return x;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!trim(item).empty()) out.push_back(trim(item));
  return out;
}

// Scalars go through set_option so files and flags share one parser.
std::string scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return fmt_double(v.get<double>());
  throw ArgumentError("config: expected a scalar, got " + v.dump());
}

void apply(ExperimentConfig& cfg, const std::string& key, const json& v) {
  if (key == "scales" || key == "a_values") {
    if (!v.is_array()) throw ArgumentError("config: " + key + " must be an array");
    std::string joined;
    for (const auto& e : v) joined += scalar_text(e) + ",";
    set_option(cfg, key, joined);
  } else if (key == "pairs") {
    if (!v.is_array()) throw ArgumentError("config: pairs must be an array of [r, rho]");
    std::string joined;
    for (const auto& e : v) {
      if (!e.is_array() || e.size() != 2) throw ArgumentError("config: pairs entries are [r, rho]");
      joined += scalar_text(e[0]) + ":" + scalar_text(e[1]) + ",";
    }
    set_option(cfg, key, joined);
  } else {
    set_option(cfg, key, scalar_text(v));
  }
}

json toml_to_json(const toml::node& n) {
  if (auto t = n.as_table()) {
    json o = json::object();
    for (const auto& [k, v] : *t) o[std::string(k.str())] = toml_to_json(v);
    return o;
  }
  if (auto a = n.as_array()) {
    json o = json::array();
    for (const auto& v : *a) o.push_back(toml_to_json(v));
    return o;
  }
  if (auto s = n.as_string()) return s->get();
  if (auto i = n.as_integer()) return i->get();
  if (auto f = n.as_floating_point()) return f->get();
  if (auto b = n.as_boolean()) return b->get();
  throw ArgumentError("config: unsupported TOML value type");
}

}  // namespace

std::vector<std::string> config_keys() {
  return {"experiment", "n",       "lambda",  "r",         "rho",     "K",       "k",
          "A",          "p",       "alpha",   "delta",     "c_n",     "epsilon", "grid",
          "points",     "samples", "instances", "d",       "v_radius", "variety", "seed",
          "scales",     "pairs",   "a_values", "out_csv",  "out_json", "out_plot", "out_data"};
}

void set_option(ExperimentConfig& c, const std::string& key, const std::string& v) {
  if (key == "experiment") c.experiment = trim(v);
  else if (key == "n") c.n = static_cast<int>(parse_int(key, v));
  else if (key == "lambda") c.lambda = parse_double(key, v);
  else if (key == "r") c.r = parse_double(key, v);
  else if (key == "rho") c.rho = parse_double(key, v);
  else if (key == "K") c.K = parse_double(key, v);
  else if (key == "k") c.k = static_cast<int>(parse_int(key, v));
  else if (key == "A") c.A = static_cast<int>(parse_int(key, v));
  else if (key == "p") c.p = parse_double(key, v);
  else if (key == "alpha") c.alpha = parse_double(key, v);
  else if (key == "delta") c.delta = parse_double(key, v);
  else if (key == "c_n") c.c_n = parse_double(key, v);
  else if (key == "epsilon") c.epsilon = parse_double(key, v);
  else if (key == "grid") c.grid = static_cast<int>(parse_int(key, v));
  else if (key == "points") c.points = static_cast<int>(parse_int(key, v));
  else if (key == "samples") c.samples = static_cast<int>(parse_int(key, v));
  else if (key == "instances") c.instances = static_cast<int>(parse_int(key, v));
  else if (key == "d") c.d = static_cast<int>(parse_int(key, v));
  else if (key == "v_radius") c.v_radius = parse_double(key, v);
  else if (key == "variety") c.variety = trim(v);
  else if (key == "seed") {
    const long long s = parse_int(key, v);
    if (s < 0) throw ArgumentError("option seed: must be non-negative");
    c.seed = static_cast<std::uint64_t>(s);
  } else if (key == "scales") {
    c.scales.clear();
    for (const auto& s : split(v, ',')) c.scales.push_back(parse_double(key, s));
  } else if (key == "a_values") {
    c.a_values.clear();
    for (const auto& s : split(v, ',')) c.a_values.push_back(static_cast<int>(parse_int(key, s)));
  } else if (key == "pairs") {
    c.pairs.clear();
    for (const auto& s : split(v, ',')) {
      const auto rs = split(s, ':');
      if (rs.size() != 2) throw ArgumentError("option pairs: expected r:rho, got '" + s + "'");
      c.pairs.emplace_back(parse_double(key, rs[0]), parse_double(key, rs[1]));
    }
  } else if (key == "out_csv") c.out_csv = v;
  else if (key == "out_json") c.out_json = v;
  else if (key == "out_plot") c.out_plot = v;
  else if (key == "out_data") c.out_data = v;
  else throw ArgumentError("unknown config key '" + key + "'");
}

void load_config_file(ExperimentConfig& cfg, const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ArgumentError("cannot read config '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  const std::string text = ss.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  const bool is_json = path.ends_with(".json") ||
                       (!path.ends_with(".toml") && first != std::string::npos && text[first] == '{');
  json doc;
  if (is_json) {
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ArgumentError("config '" + path + "': " + e.what());
    }
  } else {
    try {
      doc = toml_to_json(toml::parse(text, path));
    } catch (const toml::parse_error& e) {
      throw ArgumentError("config '" + path + "': " + std::string(e.description()));
    }
  }
  if (!doc.is_object()) throw ArgumentError("config '" + path + "': expected a table/object");
  for (const auto& [k, v] : doc.items()) apply(cfg, k, v);
}

ExperimentConfig default_config(const std::string& experiment) {
  if (std::find(kExperiments.begin(), kExperiments.end(), experiment) == kExperiments.end())
    throw ArgumentError("unknown experiment '" + experiment + "'");
  ExperimentConfig c;
  c.experiment = experiment;
  if (experiment == "knapp") {
    c.grid = 1024;
    c.scales = {1.0 / 8, 1.0 / 16, 1.0 / 32};
  } else if (experiment == "wavepackets") {
    c.r = 256;
    c.rho = 64;
    c.grid = 4096;
  } else if (experiment == "transequi") {
    c.pairs = {{256, 64}, {1024, 128}};
    c.r = 1024;
    c.rho = 128;
    c.grid = 8192;
  } else if (experiment == "rescale") {
    c.lambda = 1024;
    c.K = 2;
    c.r = 256;
    c.points = 100;
  } else if (experiment == "decouple") {
    c.K = 8;
    c.samples = 1000;
    c.grid = 256;
  } else if (experiment == "partition") {
    c.n = 3;
    c.d = 4;
    c.points = 10000;
    c.samples = 1000;
  } else if (experiment == "exponents") {
    c.n = 8;
  } else if (experiment == "spectra") {
    c.n = 3;
  } else if (experiment == "l2proxy") {
    c.lambda = 64;
    c.grid = 1024;
    c.instances = 20;
  } else if (experiment == "broadnorm") {
    c.n = 3;
    c.K = 8;
    c.k = 2;
    c.a_values = {1, 2, 4};
    c.instances = 100;
  } else if (experiment == "gauss" || experiment == "hessian") {
    c.n = 3;
  }
  return c;
}

void ExperimentConfig::validate() const {
  auto need = [](bool ok, const std::string& what) {
    if (!ok) throw ArgumentError("config: " + what);
  };
  need(std::find(kExperiments.begin(), kExperiments.end(), experiment) != kExperiments.end(),
       "unknown experiment '" + experiment + "'");
  need(n >= 2 && n <= 64, "n must be in [2, 64]");
  need(lambda > 0 && std::isfinite(lambda), "lambda must be positive");
  need(r >= 1 && std::isfinite(r), "r must be >= 1");
  need(c_n >= 1, "c_n must be >= 1");
  need(delta > 0 && delta < 1, "delta must be in (0, 1)");
  need(epsilon > 0 && epsilon < 1, "epsilon must be in (0, 1)");
  need(p >= 2, "p must be >= 2");
  need(K >= 1, "K must be >= 1");
  need(grid >= 8, "grid must be >= 8");
  need(points >= 1 && samples >= 1 && instances >= 1, "counts must be positive");
  need(d >= 1, "d must be >= 1");
  need(v_radius >= 0, "v_radius must be non-negative");
  need(variety == "hyperplane" || variety == "sphere" || variety == "whole",
       "variety must be hyperplane, sphere or whole");
  const double cap = std::pow(lambda, 1.0 - epsilon);
  auto scale_pair = [&](double R, double rh) {
    need(std::sqrt(R) <= rh * (1 + 1e-12) && rh <= R, "need r^{1/2} <= rho <= r");
    need(R <= cap * (1 + 1e-12), "need r <= lambda^{1-epsilon}");
  };
  if (experiment == "wavepackets") scale_pair(r, rho);
  if (experiment == "transequi") {
    need(!pairs.empty(), "transequi needs at least one (r, rho) pair");
    for (auto [R, rh] : pairs) scale_pair(R, rh);
  }
  if (experiment == "rescale") need(K * K <= r && r <= cap * (1 + 1e-12), "need K^2 <= r <= lambda^{1-eps}");
  if (experiment == "knapp") {
    need(!scales.empty(), "knapp needs cap widths");
    for (double s : scales) need(s > 0 && s < 1, "knapp widths must be in (0, 1)");
  }
  if (experiment == "broadnorm" || experiment == "decouple") need(K >= 2, "K must be >= 2");
  if (experiment == "broadnorm") {
    need(k >= 2 && k <= n - 1, "broadnorm needs 2 <= k <= n-1");
    for (int a : a_values) need(a >= 1, "A values must be >= 1");
  }
  if (experiment == "exponents") need(n >= 3, "exponents needs n >= 3");
}

}  // namespace osc
