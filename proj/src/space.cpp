#include "gibbsdecomp/space.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "gibbsdecomp/errors.hpp"

namespace gibbsdecomp {

namespace {

constexpr double kMassTolerance = 1e-12;

[[noreturn]] void fail_field(std::size_t coord, const char* field,
                             const std::string& msg) {
  std::ostringstream os;
  os << "coordinate " << coord << ", field '" << field << "': " << msg;
  throw ConfigError(os.str());
}

}  // namespace

double stable_sum(std::span<const double> values) {
  double sum = 0.0;
  double comp = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

ProductSpace::ProductSpace(SpaceSpec spec) : budget_(spec.state_budget) {
  const std::size_t n = spec.alphabets.size();
  if (n == 0) throw ConfigError("field 'alphabets': at least one coordinate required");
  if (budget_ == 0) throw ConfigError("state budget must be positive");
  if (!spec.metrics.empty() && spec.metrics.size() != n) {
    throw ConfigError("field 'metrics': expected one table per coordinate");
  }
  if (!spec.reference_measures.empty() && spec.reference_measures.size() != n) {
    throw ConfigError("field 'reference_measures': expected one vector per coordinate");
  }
  if (!spec.reference_points.empty() && spec.reference_points.size() != n) {
    throw ConfigError("field 'reference_points': expected one symbol per coordinate");
  }

  alphabets_ = std::move(spec.alphabets);
  radix_.resize(n);
  stride_.resize(n);
  offset_.assign(n + 1, 0);
  offset2_.assign(n, 0);
  ref_.assign(n, 0);

  std::size_t squares = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = alphabets_[i].size();
    if (k == 0) fail_field(i, "alphabets", "alphabet must be nonempty");
    auto sorted = alphabets_[i];
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      fail_field(i, "alphabets", "duplicate symbol name");
    }
    radix_[i] = k;
    offset_[i + 1] = offset_[i] + k;
    offset2_[i] = squares;
    squares += k * k;
    if (states_ > budget_ / k) {
      std::size_t total = 1;
      bool overflow = false;
      for (const auto& a : alphabets_)
        overflow = overflow || __builtin_mul_overflow(total, a.size(), &total);
      std::ostringstream os;
      os << "state count ";
      if (overflow) os << "above 2^64";
      else os << total;
      os << " exceeds budget " << budget_;
      throw BudgetExceeded(os.str());
    }
    states_ *= k;
  }
  if (states_ > budget_) {
    std::ostringstream os;
    os << "state count " << states_ << " exceeds budget " << budget_;
    throw BudgetExceeded(os.str());
  }
  for (std::size_t i = n; i-- > 0;) {
    stride_[i] = (i + 1 == n) ? 1 : stride_[i + 1] * radix_[i + 1];
  }

  metrics_.assign(squares, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = radix_[i];
    double* table = metrics_.data() + offset2_[i];
    if (spec.metrics.empty()) {
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) table[a * k + b] = (a == b) ? 0.0 : 1.0;
      continue;
    }
    const auto& m = spec.metrics[i];
    if (m.size() != k) fail_field(i, "metrics", "table must be |K_i| x |K_i|");
    for (std::size_t a = 0; a < k; ++a) {
      if (m[a].size() != k) fail_field(i, "metrics", "table must be |K_i| x |K_i|");
      for (std::size_t b = 0; b < k; ++b) {
        const double d = m[a][b];
        if (!std::isfinite(d) || d < 0.0 || d > 1.0) {
          fail_field(i, "metrics", "entries must lie in [0, 1]");
        }
        table[a * k + b] = d;
      }
    }
    for (std::size_t a = 0; a < k; ++a) {
      if (table[a * k + a] != 0.0) fail_field(i, "metrics", "diagonal must be zero");
      for (std::size_t b = 0; b < k; ++b) {
        if (table[a * k + b] != table[b * k + a]) {
          fail_field(i, "metrics", "table must be symmetric");
        }
        if (a != b && table[a * k + b] != 1.0) discrete_ = false;
      }
    }
  }

  lambda_.assign(offset_[n], 0.0);
  log_lambda_.assign(offset_[n], 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = radix_[i];
    double* lam = lambda_.data() + offset_[i];
    if (spec.reference_measures.empty()) {
      for (std::size_t a = 0; a < k; ++a) lam[a] = 1.0 / static_cast<double>(k);
    } else {
      const auto& r = spec.reference_measures[i];
      if (r.size() != k) fail_field(i, "reference_measures", "length must equal |K_i|");
      for (std::size_t a = 0; a < k; ++a) {
        if (!std::isfinite(r[a]) || r[a] <= 0.0) {
          fail_field(i, "reference_measures", "entries must be strictly positive");
        }
        lam[a] = r[a];
      }
      const double total = stable_sum({lam, k});
      if (std::abs(total - 1.0) > kMassTolerance) {
        fail_field(i, "reference_measures", "entries must sum to 1");
      }
      for (std::size_t a = 0; a < k; ++a) {
        if (lam[a] != lam[0]) uniform_ = false;
      }
    }
    for (std::size_t a = 0; a < k; ++a) log_lambda_[offset_[i] + a] = std::log(lam[a]);
  }

  if (!spec.reference_points.empty()) {
    for (std::size_t i = 0; i < n; ++i) {
      if (spec.reference_points[i] >= radix_[i]) {
        fail_field(i, "reference_points", "symbol index out of range");
      }
      ref_[i] = spec.reference_points[i];
    }
  }
}

SpacePtr ProductSpace::make(SpaceSpec spec) {
  return std::make_shared<const ProductSpace>(std::move(spec));
}

SpacePtr ProductSpace::uniform(const std::vector<std::size_t>& sizes,
                               std::size_t state_budget) {
  SpaceSpec spec;
  spec.state_budget = state_budget;
  for (std::size_t k : sizes) {
    std::vector<std::string> names;
    for (std::size_t a = 0; a < k; ++a) names.push_back(std::to_string(a));
    spec.alphabets.push_back(std::move(names));
  }
  return make(std::move(spec));
}

SpacePtr ProductSpace::spins(std::size_t n, double plus_weight,
                             std::size_t state_budget) {
  if (!(plus_weight > 0.0 && plus_weight < 1.0)) {
    throw ConfigError("field 'reference_measures': lambda(+1) must lie in (0, 1)");
  }
  SpaceSpec spec;
  spec.state_budget = state_budget;
  spec.alphabets.assign(n, {"-1", "+1"});
  if (plus_weight != 0.5) {
    spec.reference_measures.assign(n, {1.0 - plus_weight, plus_weight});
  }
  return make(std::move(spec));
}

std::size_t ProductSpace::encode(std::span<const std::size_t> symbols) const {
  if (symbols.size() != dims()) throw ConfigError("configuration has wrong length");
  std::size_t index = 0;
  for (std::size_t i = 0; i < dims(); ++i) {
    if (symbols[i] >= radix_[i]) {
      fail_field(i, "symbols", "symbol index out of range");
    }
    index += symbols[i] * stride_[i];
  }
  return index;
}

std::vector<std::size_t> ProductSpace::decode(std::size_t index) const {
  if (index >= states_) throw ConfigError("configuration index out of range");
  std::vector<std::size_t> out(dims());
  for (std::size_t i = 0; i < dims(); ++i) out[i] = symbol(index, i);
  return out;
}

double ProductSpace::distance(std::size_t x, std::size_t y) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < dims(); ++i) {
    sum += metric(i, symbol(x, i), symbol(y, i));
  }
  return sum / static_cast<double>(dims());
}

bool ProductSpace::is_binary() const {
  return std::all_of(radix_.begin(), radix_.end(),
                     [](std::size_t k) { return k == 2; });
}

SpaceSpec ProductSpace::spec() const {
  SpaceSpec s;
  s.alphabets = alphabets_;
  s.state_budget = budget_;
  s.reference_points = ref_;
  for (std::size_t i = 0; i < dims(); ++i) {
    const std::size_t k = radix_[i];
    std::vector<std::vector<double>> m(k, std::vector<double>(k));
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) m[a][b] = metric(i, a, b);
    s.metrics.push_back(std::move(m));
    auto r = reference_measure(i);
    s.reference_measures.emplace_back(r.begin(), r.end());
  }
  return s;
}

SpacePtr ProductSpace::subspace(std::span<const std::size_t> coords) const {
  if (coords.empty()) throw ConfigError("marginal: coordinate subset must be nonempty");
  std::vector<std::size_t> sorted(coords.begin(), coords.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ConfigError("marginal: repeated coordinate");
  }
  if (sorted.back() >= dims()) throw ConfigError("marginal: coordinate out of range");
  SpaceSpec full = spec();
  SpaceSpec sub;
  sub.state_budget = budget_;
  for (std::size_t i : sorted) {
    sub.alphabets.push_back(full.alphabets[i]);
    sub.metrics.push_back(full.metrics[i]);
    sub.reference_measures.push_back(full.reference_measures[i]);
    sub.reference_points.push_back(full.reference_points[i]);
  }
  return make(std::move(sub));
}

SpacePtr ProductSpace::with_reference_points(std::vector<std::size_t> points) const {
  SpaceSpec s = spec();
  s.reference_points = std::move(points);
  return make(std::move(s));
}

SpacePtr ProductSpace::with_reference_measures(
    std::vector<std::vector<double>> measures) const {
  SpaceSpec s = spec();
  s.reference_measures = std::move(measures);
  return make(std::move(s));
}

bool ProductSpace::same_shape(const ProductSpace& other) const {
  return radix_ == other.radix_;
}

bool ProductSpace::operator==(const ProductSpace& other) const {
  return alphabets_ == other.alphabets_ && metrics_ == other.metrics_ &&
         lambda_ == other.lambda_ && ref_ == other.ref_;
}

// ---------------------------------------------------------------------------

Distribution::Distribution(SpacePtr space, std::vector<double> weights)
    : space_(std::move(space)), weights_(std::move(weights)) {
  if (!space_) throw ConfigError("distribution requires a space");
  if (weights_.size() != space_->state_count()) {
    throw ConfigError("distribution length does not match the state count");
  }
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw ConfigError("distribution weights must be finite and nonnegative");
    }
  }
  if (std::abs(stable_sum(weights_) - 1.0) > kMassTolerance) {
    throw ConfigError("distribution weights must sum to 1");
  }
}

Distribution Distribution::normalized(SpacePtr space, std::vector<double> weights) {
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw ConfigError("distribution weights must be finite and nonnegative");
    }
  }
  const double total = stable_sum(weights);
  if (!(total > 0.0)) throw ZeroMassError("cannot normalize a zero vector");
  for (double& w : weights) w /= total;
  return Distribution(std::move(space), std::move(weights));
}

Distribution Distribution::uniform(SpacePtr space) {
  const std::size_t n = space->state_count();
  return Distribution(std::move(space),
                      std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

Distribution Distribution::point_mass(SpacePtr space, std::size_t index) {
  std::vector<double> w(space->state_count(), 0.0);
  w.at(index) = 1.0;
  return Distribution(std::move(space), std::move(w));
}

Distribution Distribution::reference(SpacePtr space) {
  const ProductSpace& s = *space;
  std::vector<double> w(s.state_count());
  for (std::size_t x = 0; x < w.size(); ++x) {
    double p = 1.0;
    for (std::size_t i = 0; i < s.dims(); ++i) p *= s.reference_measure(i)[s.symbol(x, i)];
    w[x] = p;
  }
  return normalized(std::move(space), std::move(w));
}

double Distribution::mass(std::span<const std::size_t> event) const {
  double m = 0.0;
  for (std::size_t x : event) m += weights_.at(x);
  return m;
}

// ---------------------------------------------------------------------------

std::vector<Config> enumerate_configs(const ProductSpace& space) {
  std::vector<Config> out;
  out.reserve(space.state_count());
  std::vector<std::size_t> symbols(space.dims(), 0);
  for (std::size_t index = 0; index < space.state_count(); ++index) {
    out.push_back({symbols, index});
    for (std::size_t i = space.dims(); i-- > 0;) {
      if (++symbols[i] < space.radix(i)) break;
      symbols[i] = 0;
    }
  }
  return out;
}

double hamming_distance(const ProductSpace& space, const Config& x,
                        const Config& y) {
  if (x.symbols.size() != space.dims() || y.symbols.size() != space.dims()) {
    throw ConfigError("configuration has wrong length");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < space.dims(); ++i) {
    sum += space.metric(i, x.symbols[i], y.symbols[i]);
  }
  return sum / static_cast<double>(space.dims());
}

Distribution marginal(const Distribution& dist,
                      std::span<const std::size_t> coords) {
  const ProductSpace& full = dist.space();
  SpacePtr sub = full.subspace(coords);
  std::vector<std::size_t> sorted(coords.begin(), coords.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> w(sub->state_count(), 0.0);
  for (std::size_t x = 0; x < full.state_count(); ++x) {
    std::size_t target = 0;
    for (std::size_t j = 0; j < sorted.size(); ++j) {
      target += full.symbol(x, sorted[j]) * sub->stride(j);
    }
    w[target] += dist[x];
  }
  return Distribution::normalized(std::move(sub), std::move(w));
}

Distribution condition(const Distribution& dist,
                       std::span<const std::size_t> part) {
  std::vector<double> w(dist.size(), 0.0);
  double total = 0.0;
  for (std::size_t x : part) {
    if (x >= dist.size()) throw ConfigError("condition: index out of range");
    if (w[x] == 0.0) {
      w[x] = dist[x];
      total += dist[x];
    }
  }
  if (!(total > 0.0)) throw ZeroMassError("condition: part has zero mass");
  for (double& v : w) v /= total;
  return Distribution(dist.space_ptr(), std::move(w));
}

}  // namespace gibbsdecomp
