#include "gibbsdecomp/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "gibbsdecomp/errors.hpp"
#include "gibbsdecomp/models.hpp"

namespace gibbsdecomp {

double round12(double v) {
  if (!std::isfinite(v)) return v;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  const double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;  // no negative zero in reports
}

Json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return round12(v);
}

std::string render_json(const Json& doc) { return doc.dump(2) + "\n"; }

std::string csv_field(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", round12(v));
  return buf;
}

// ---------------------------------------------------------------------------

namespace {

using Params = std::map<std::string, std::string>;

class ParamReader {
 public:
  ParamReader(std::string model, Params params)
      : model_(std::move(model)), params_(std::move(params)) {}

  double real(const std::string& key, double fallback) {
    auto it = take(key);
    if (!it) return fallback;
    char* end = nullptr;
    const double v = std::strtod(it->c_str(), &end);
    if (it->empty() || *end != '\0' || !std::isfinite(v)) fail(key, "expected a finite number");
    return v;
  }
  std::size_t count(const std::string& key, std::size_t fallback) {
    auto it = take(key);
    if (!it) return fallback;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(it->c_str(), &end, 10);
    if (it->empty() || *end != '\0' || (*it)[0] == '-') fail(key, "expected a nonnegative integer");
    return static_cast<std::size_t>(v);
  }
  bool has(const std::string& key) const { return params_.count(key) != 0; }
  void finish() const {
    for (const auto& [k, v] : params_) {
      if (!used_.count(k)) fail(k, "unknown parameter");
    }
  }
  [[noreturn]] void fail(const std::string& key, const std::string& why) const {
    throw ConfigError("model '" + model_ + "': parameter '" + key + "': " + why);
  }

 private:
  const std::string* take(const std::string& key) {
    auto it = params_.find(key);
    if (it == params_.end()) return nullptr;
    used_[key] = true;
    return &it->second;
  }
  std::string model_;
  Params params_;
  std::map<std::string, bool> used_;
};

SpacePtr biased_space(std::size_t n, std::size_t k, double bias, std::size_t budget,
                      ParamReader& reader) {
  SpacePtr space = ProductSpace::uniform(std::vector<std::size_t>(n, k), budget);
  if (std::isnan(bias)) return space;
  if (k < 2) reader.fail("bias", "needs alphabets of size at least 2");
  if (!(bias > 0.0 && bias < 1.0)) reader.fail("bias", "must lie in (0, 1)");
  std::vector<double> lambda(k, (1.0 - bias) / static_cast<double>(k - 1));
  lambda[1] = bias;
  return space->with_reference_measures(std::vector<std::vector<double>>(n, lambda));
}

}  // namespace

ModelSpec parse_model(const std::string& spec, std::size_t state_budget) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  Params params;
  if (colon != std::string::npos) {
    std::stringstream ss(spec.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      const auto eq = item.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw ConfigError("model '" + name + "': expected key=value, got '" + item + "'");
      }
      params[item.substr(0, eq)] = item.substr(eq + 1);
    }
  }
  ParamReader r(name, params);
  const double nan = std::nan("");
  Json desc;
  desc["name"] = name;
  Json& p = desc["params"];
  p = Json::object();

  auto sizes = [&](std::size_t default_k) {
    const std::size_t n = r.count("n", 0);
    if (n == 0) r.fail("n", "required and must be positive");
    const std::size_t k = r.count("k", default_k);
    if (k == 0) r.fail("k", "must be positive");
    p["n"] = n;
    p["k"] = k;
    return std::pair{n, k};
  };
  auto bias = [&]() {
    const double b = r.real("bias", nan);
    if (!std::isnan(b)) p["bias"] = number(b);
    return b;
  };

  if (name == "curie-weiss") {
    const std::size_t n = r.count("n", 0);
    if (n == 0) r.fail("n", "required and must be positive");
    const double beta = r.real("beta", 1.0);
    const double h = r.real("h", 0.0);
    const double b = r.real("bias", 0.5);
    if (!(b > 0.0 && b < 1.0)) r.fail("bias", "must lie in (0, 1)");
    r.finish();
    p["n"] = n;
    p["beta"] = number(beta);
    p["h"] = number(h);
    p["bias"] = number(b);
    return {name, make_curie_weiss(n, beta, h, b, state_budget), desc};
  }
  if (name == "random") {
    const auto [n, k] = sizes(2);
    const std::size_t seed = r.count("seed", 0);
    const double amp = r.real("amplitude", 1.0);
    const double b = bias();
    r.finish();
    p["seed"] = seed;
    p["amplitude"] = number(amp);
    return {name, make_random_potential(biased_space(n, k, b, state_budget, r), seed, amp), desc};
  }
  if (name == "low-rank") {
    const auto [n, k] = sizes(2);
    const std::size_t rank = r.count("rank", 1);
    const std::size_t seed = r.count("seed", 0);
    const double b = bias();
    r.finish();
    p["rank"] = rank;
    p["seed"] = seed;
    return {name, make_low_rank(biased_space(n, k, b, state_budget, r), rank, seed), desc};
  }
  if (name == "separable") {
    const auto [n, k] = sizes(2);
    const std::size_t seed = r.count("seed", 0);
    const double amp = r.real("amplitude", 1.0);
    const double b = bias();
    r.finish();
    p["seed"] = seed;
    p["amplitude"] = number(amp);
    return {name,
            to_potential(make_random_separable(biased_space(n, k, b, state_budget, r), seed, amp)),
            desc};
  }
  if (name == "zero") {
    const auto [n, k] = sizes(2);
    const double b = bias();
    r.finish();
    return {name, Potential::zero(biased_space(n, k, b, state_budget, r)), desc};
  }
  throw ConfigError("unknown model '" + name +
                    "' (expected curie-weiss, random, low-rank, separable or zero)");
}

// ---------------------------------------------------------------------------

namespace {

std::string symbol_name(const Json& v, const std::string& where) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw ConfigError(where + ": symbols must be strings or integers");
}

std::string coord_field(std::size_t i, const char* field) {
  return "coordinate " + std::to_string(i) + ": field '" + field + "'";
}

}  // namespace

SpacePtr parse_space(const Json& doc, std::size_t state_budget) {
  if (!doc.is_object()) throw ConfigError("field 'space': expected an object");
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (key != "alphabets" && key != "metrics" && key != "reference_measures" &&
        key != "reference_points") {
      throw ConfigError("field 'space': unknown key '" + key + "'");
    }
  }
  SpaceSpec spec;
  spec.state_budget = state_budget;
  if (!doc.contains("alphabets") || !doc["alphabets"].is_array()) {
    throw ConfigError("field 'alphabets': required list of symbol lists");
  }
  const Json& al = doc["alphabets"];
  for (std::size_t i = 0; i < al.size(); ++i) {
    if (!al[i].is_array()) throw ConfigError(coord_field(i, "alphabets") + ": expected a list");
    std::vector<std::string> syms;
    for (const auto& s : al[i]) syms.push_back(symbol_name(s, coord_field(i, "alphabets")));
    spec.alphabets.push_back(std::move(syms));
  }
  const std::size_t n = spec.alphabets.size();
  try {
    if (doc.contains("metrics")) {
      const Json& m = doc["metrics"];
      if (!m.is_array() || m.size() != n) {
        throw ConfigError("field 'metrics': expected one matrix per coordinate");
      }
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::vector<double>> table;
        if (m[i].is_null()) {
          const std::size_t k = spec.alphabets[i].size();
          table.assign(k, std::vector<double>(k, 1.0));
          for (std::size_t a = 0; a < k; ++a) table[a][a] = 0.0;
        } else {
          if (!m[i].is_array()) throw ConfigError(coord_field(i, "metrics") + ": expected a matrix");
          for (const auto& row : m[i]) table.push_back(row.get<std::vector<double>>());
        }
        spec.metrics.push_back(std::move(table));
      }
    }
    if (doc.contains("reference_measures")) {
      const Json& m = doc["reference_measures"];
      if (!m.is_array() || m.size() != n) {
        throw ConfigError("field 'reference_measures': expected one vector per coordinate");
      }
      for (std::size_t i = 0; i < n; ++i) spec.reference_measures.push_back(m[i].get<std::vector<double>>());
    }
    if (doc.contains("reference_points")) {
      const Json& m = doc["reference_points"];
      if (!m.is_array() || m.size() != n) {
        throw ConfigError("field 'reference_points': expected one symbol per coordinate");
      }
      for (std::size_t i = 0; i < n; ++i) {
        if (m[i].is_number_integer()) {
          if (m[i].get<long long>() < 0) {
            throw ConfigError(coord_field(i, "reference_points") + ": negative index");
          }
          spec.reference_points.push_back(m[i].get<std::size_t>());
          continue;
        }
        const std::string name = symbol_name(m[i], coord_field(i, "reference_points"));
        const auto& syms = spec.alphabets[i];
        auto it = std::find(syms.begin(), syms.end(), name);
        if (it == syms.end()) {
          throw ConfigError(coord_field(i, "reference_points") + ": unknown symbol '" + name + "'");
        }
        spec.reference_points.push_back(static_cast<std::size_t>(it - syms.begin()));
      }
    }
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("field 'space': ") + e.what());
  }
  return ProductSpace::make(std::move(spec));
}

Json space_to_json(const ProductSpace& space) {
  Json doc;
  Json al = Json::array(), lam = Json::array(), ref = Json::array(), met = Json::array();
  for (std::size_t i = 0; i < space.dims(); ++i) {
    al.push_back(space.alphabet(i));
    // null marks the discrete metric on that coordinate
    Json m = Json::array();
    bool discrete = true;
    for (std::size_t a = 0; a < space.radix(i); ++a) {
      Json row = Json::array();
      for (std::size_t b = 0; b < space.radix(i); ++b) {
        const double d = space.metric(i, a, b);
        discrete = discrete && d == (a == b ? 0.0 : 1.0);
        row.push_back(number(d));
      }
      m.push_back(row);
    }
    met.push_back(discrete ? Json() : m);
    Json l = Json::array();
    for (double v : space.reference_measure(i)) l.push_back(number(v));
    lam.push_back(l);
    ref.push_back(space.alphabet(i)[space.reference_point(i)]);
  }
  doc["alphabets"] = al;
  doc["reference_measures"] = lam;
  doc["reference_points"] = ref;
  doc["metrics"] = met;
  return doc;
}

ModelSpec parse_model_json(const Json& doc, std::size_t state_budget) {
  if (!doc.is_object()) throw ConfigError("model file: expected a JSON object");
  if (doc.contains("model")) {
    if (!doc["model"].is_string()) throw ConfigError("field 'model': expected a model string");
    if (doc.size() != 1) throw ConfigError("model file: 'model' cannot be combined with other fields");
    return parse_model(doc["model"].get<std::string>(), state_budget);
  }
  if (!doc.contains("space")) throw ConfigError("model file: field 'space' or 'model' required");
  if (!doc.contains("table")) throw ConfigError("field 'table': required");
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (key != "space" && key != "table" && key != "name") {
      throw ConfigError("model file: unknown field '" + key + "'");
    }
  }
  SpacePtr space = parse_space(doc["space"], state_budget);
  const Json& t = doc["table"];
  if (!t.is_array()) throw ConfigError("field 'table': expected a list of numbers");
  std::vector<double> values;
  values.reserve(t.size());
  for (std::size_t x = 0; x < t.size(); ++x) {
    if (!t[x].is_number()) {
      throw ConfigError("field 'table': entry " + std::to_string(x) + " is not a number");
    }
    values.push_back(t[x].get<double>());
  }
  Json desc;
  desc["name"] = doc.value("name", std::string("table"));
  desc["space"] = space_to_json(*space);
  return {desc["name"].get<std::string>(), Potential(space, std::move(values)), desc};
}

ModelSpec load_model_file(const std::string& path, std::size_t state_budget) {
  std::ifstream in(path);
  if (!in) throw ConfigError("model file '" + path + "': cannot open");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("model file '" + path + "': " + e.what());
  }
  return parse_model_json(doc, state_budget);
}

}  // namespace gibbsdecomp
