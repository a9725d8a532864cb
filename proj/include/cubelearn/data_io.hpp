#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <json.hpp>
#include <numeric>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "cubelearn/dataset.hpp"
#include "cubelearn/error.hpp"
#include "cubelearn/oracle.hpp"
#include "cubelearn/rng.hpp"
#include "cubelearn/subset.hpp"

namespace cubelearn {

// ---------------------------------------------------------------------------
// Synthetic problems.
// ---------------------------------------------------------------------------

struct DictatorRule {
  int index = 0;
};
struct ParityRule {
  FeatureSubset coords;
};
struct MajorityRule {
  FeatureSubset coords;
};
struct JuntaRule {
  FeatureSubset coords;
  std::vector<std::int8_t> table;  // indexed by local cell pattern
};
struct LinearThresholdRule {
  std::vector<double> weights;
  double threshold = 0.0;
};

using LabelRule = std::variant<DictatorRule, ParityRule, MajorityRule, JuntaRule, LinearThresholdRule>;

/// Clean ±1 label of a rule at a point, where get(j) returns the ±1 value of
/// coordinate j. sign(0) = +1 for majority and linear thresholds.
template <typename GetCoord>
int clean_label(const LabelRule& rule, int d, GetCoord&& get) {
  if (const auto* r = std::get_if<DictatorRule>(&rule)) return get(r->index);
  if (const auto* r = std::get_if<ParityRule>(&rule)) {
    int v = 1;
    for (int j : r->coords.indices()) v *= get(j);
    return v;
  }
  if (const auto* r = std::get_if<MajorityRule>(&rule)) {
    int s = 0;
    for (int j : r->coords.indices()) s += get(j);
    return s >= 0 ? 1 : -1;
  }
  if (const auto* r = std::get_if<JuntaRule>(&rule)) {
    std::uint32_t cell = 0;
    const auto idx = r->coords.indices();
    for (std::size_t t = 0; t < idx.size(); ++t)
      if (get(idx[t]) > 0) cell |= (1u << t);
    return r->table[cell];
  }
  const auto& r = std::get<LinearThresholdRule>(rule);
  double s = -r.threshold;
  for (int j = 0; j < d; ++j) s += r.weights[static_cast<std::size_t>(j)] * get(j);
  return s >= 0.0 ? 1 : -1;
}

/// Recipe for a seeded synthetic dataset: product features, a clean label
/// rule, and independent label flips with probability noise_rate.
struct SyntheticSpec {
  int d = 1;
  long long n = 1;
  std::vector<double> biases;  // empty means 0.5 everywhere
  LabelRule rule = DictatorRule{0};
  double noise_rate = 0.0;
  std::uint64_t seed = 0;

  std::vector<double> effective_biases() const {
    if (biases.empty()) return std::vector<double>(static_cast<std::size_t>(d), 0.5);
    return biases;
  }

  void validate() const {
    if (d < 1 || d > FeatureSubset::kMaxDim) throw ConfigError("SyntheticSpec: d out of range");
    if (n < 1) throw ConfigError("SyntheticSpec: n must be >= 1");
    if (!biases.empty() && static_cast<int>(biases.size()) != d)
      throw ConfigError("SyntheticSpec: biases size != d");
    for (double p : biases)
      if (!(p > 0.0 && p < 1.0)) throw ConfigError("SyntheticSpec: biases must be in (0,1)");
    if (!(noise_rate >= 0.0 && noise_rate < 0.5))
      throw ConfigError("SyntheticSpec: noise rate must be in [0,0.5)");
    if (const auto* r = std::get_if<DictatorRule>(&rule)) {
      if (r->index < 0 || r->index >= d) throw ConfigError("SyntheticSpec: dictator index out of range");
    } else if (const auto* r = std::get_if<ParityRule>(&rule)) {
      if (!r->coords.subset_of(FeatureSubset::full(d))) throw ConfigError("SyntheticSpec: parity coords out of range");
    } else if (const auto* r = std::get_if<MajorityRule>(&rule)) {
      if (!r->coords.subset_of(FeatureSubset::full(d))) throw ConfigError("SyntheticSpec: majority coords out of range");
    } else if (const auto* r = std::get_if<JuntaRule>(&rule)) {
      if (!r->coords.subset_of(FeatureSubset::full(d))) throw ConfigError("SyntheticSpec: junta coords out of range");
      if (r->table.size() != (std::size_t{1} << r->coords.count()))
        throw ConfigError("SyntheticSpec: junta table size mismatch");
      for (std::int8_t v : r->table)
        if (v != 1 && v != -1) throw ConfigError("SyntheticSpec: junta table entries must be ±1");
    } else {
      const auto& lt = std::get<LinearThresholdRule>(rule);
      if (static_cast<int>(lt.weights.size()) != d)
        throw ConfigError("SyntheticSpec: weight vector size != d");
    }
  }
};

/// Samples a dataset from the spec. Draw order is fixed: for each row, the
/// d feature draws (j ascending) followed by one noise draw, so a (spec,
/// seed) pair always yields the same bytes.
inline LabeledDataset generate(const SyntheticSpec& spec) {
  spec.validate();
  const auto biases = spec.effective_biases();
  Rng rng(spec.seed);
  std::vector<std::int8_t> xs;
  std::vector<std::int8_t> ys;
  xs.reserve(static_cast<std::size_t>(spec.n) * static_cast<std::size_t>(spec.d));
  ys.reserve(static_cast<std::size_t>(spec.n));
  std::vector<std::int8_t> row(static_cast<std::size_t>(spec.d));
  for (long long i = 0; i < spec.n; ++i) {
    for (int j = 0; j < spec.d; ++j)
      row[static_cast<std::size_t>(j)] =
          static_cast<std::int8_t>(rng.pm1(biases[static_cast<std::size_t>(j)]));
    int y = clean_label(spec.rule, spec.d,
                        [&](int j) { return static_cast<int>(row[static_cast<std::size_t>(j)]); });
    if (rng.bernoulli(spec.noise_rate)) y = -y;
    xs.insert(xs.end(), row.begin(), row.end());
    ys.push_back(static_cast<std::int8_t>(y));
  }
  return LabeledDataset(static_cast<int>(spec.n), spec.d, std::move(xs), std::move(ys));
}

/// The exact problem a spec samples from: product features plus the label
/// channel eta(x) = 1-noise if clean(x)=+1 else noise. Noise-free specs
/// yield a deterministic table. Requires d within enumeration range.
inline ExactProblem synthetic_problem(const SyntheticSpec& spec) {
  spec.validate();
  ProductDistribution dist(spec.effective_biases());
  dist.require_enumerable();
  const std::uint32_t points = std::uint32_t{1} << spec.d;
  auto clean_at = [&](std::uint32_t x) {
    return clean_label(spec.rule, spec.d,
                       [&](int j) { return ((x >> j) & 1u) ? +1 : -1; });
  };
  if (spec.noise_rate == 0.0) {
    BooleanTable f(points);
    for (std::uint32_t x = 0; x < points; ++x) f[x] = static_cast<std::int8_t>(clean_at(x));
    return ExactProblem(std::move(dist), TableLabel{std::move(f)});
  }
  std::vector<double> eta(points);
  for (std::uint32_t x = 0; x < points; ++x)
    eta[x] = clean_at(x) > 0 ? 1.0 - spec.noise_rate : spec.noise_rate;
  return ExactProblem(std::move(dist), ChannelLabel{std::move(eta)});
}

// rule <-> JSON
inline nlohmann::json rule_to_json(const LabelRule& rule) {
  if (const auto* r = std::get_if<DictatorRule>(&rule))
    return {{"kind", "dictator"}, {"index", r->index}};
  if (const auto* r = std::get_if<ParityRule>(&rule))
    return {{"kind", "parity"}, {"coords", r->coords.indices()}};
  if (const auto* r = std::get_if<MajorityRule>(&rule))
    return {{"kind", "majority"}, {"coords", r->coords.indices()}};
  if (const auto* r = std::get_if<JuntaRule>(&rule)) {
    std::vector<int> table(r->table.begin(), r->table.end());
    return {{"kind", "junta"}, {"coords", r->coords.indices()}, {"table", table}};
  }
  const auto& r = std::get<LinearThresholdRule>(rule);
  return {{"kind", "linear_threshold"}, {"weights", r.weights}, {"theta", r.threshold}};
}

inline LabelRule rule_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "dictator") return DictatorRule{j.at("index").get<int>()};
  if (kind == "parity")
    return ParityRule{FeatureSubset::from_indices(j.at("coords").get<std::vector<int>>())};
  if (kind == "majority")
    return MajorityRule{FeatureSubset::from_indices(j.at("coords").get<std::vector<int>>())};
  if (kind == "junta") {
    std::vector<int> t = j.at("table").get<std::vector<int>>();
    return JuntaRule{FeatureSubset::from_indices(j.at("coords").get<std::vector<int>>()),
                     std::vector<std::int8_t>(t.begin(), t.end())};
  }
  if (kind == "linear_threshold")
    return LinearThresholdRule{j.at("weights").get<std::vector<double>>(),
                               j.value("theta", 0.0)};
  throw ConfigError("unknown label rule kind '" + kind + "'");
}

inline nlohmann::json to_json(const SyntheticSpec& spec) {
  nlohmann::json j = {{"d", spec.d},
                      {"n", spec.n},
                      {"rule", rule_to_json(spec.rule)},
                      {"noise", spec.noise_rate},
                      {"seed", spec.seed}};
  if (!spec.biases.empty()) j["biases"] = spec.biases;
  return j;
}

inline SyntheticSpec spec_from_json(const nlohmann::json& j) {
  SyntheticSpec spec;
  spec.d = j.at("d").get<int>();
  spec.n = j.at("n").get<long long>();
  if (j.contains("biases"))
    spec.biases = j.at("biases").get<std::vector<double>>();
  else if (j.contains("bias"))
    spec.biases.assign(static_cast<std::size_t>(spec.d), j.at("bias").get<double>());
  spec.rule = rule_from_json(j.at("rule"));
  spec.noise_rate = j.value("noise", 0.0);
  spec.seed = j.value("seed", std::uint64_t{0});
  spec.validate();
  return spec;
}

// ---------------------------------------------------------------------------
// Splitting.
// ---------------------------------------------------------------------------

/// Seeded shuffle, then partition: the first ceil(n*f) shuffled rows become
/// the test side (clamped so neither side is empty).
inline std::pair<LabeledDataset, LabeledDataset> split(const LabeledDataset& data,
                                                       double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw ConfigError("split: test fraction must be in (0,1)");
  if (data.n() < 2) throw ConfigError("split: need n >= 2 to keep both sides non-empty");

  std::vector<int> idx(static_cast<std::size_t>(data.n()));
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  for (std::size_t i = idx.size() - 1; i > 0; --i) {
    const std::size_t r = static_cast<std::size_t>(rng.below(i + 1));
    std::swap(idx[i], idx[r]);
  }

  long long test_n = static_cast<long long>(
      std::ceil(test_fraction * static_cast<double>(data.n())));
  test_n = std::min<long long>(std::max<long long>(test_n, 1), data.n() - 1);

  std::vector<int> test_rows(idx.begin(), idx.begin() + test_n);
  std::vector<int> train_rows(idx.begin() + test_n, idx.end());
  return {data.take(train_rows), data.take(test_rows)};
}

// ---------------------------------------------------------------------------
// CSV and JSON dataset formats.
// ---------------------------------------------------------------------------

enum class CsvMapping { kAuto, kPm1, kZeroOne };

struct LoadReport {
  LabeledDataset data;
  std::vector<std::string> warnings;
};

namespace detail {

inline bool parse_cell(const std::string& s, long& out) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  if (a == b) return false;
  const char* first = s.data() + a;
  const char* last = s.data() + b;
  if (*first == '+') ++first;  // std::from_chars rejects a leading plus
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

inline std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  cells.push_back(cur);
  return cells;
}

}  // namespace detail

/// Loads a CSV whose last column is the label. Cells must all be -1/+1 or
/// all 0/1; 0/1 input is remapped (0 -> -1). A non-numeric first row is
/// treated as a header. Constant columns are reported as warnings, not
/// errors.
inline LoadReport load_csv(const std::string& path, CsvMapping mapping = CsvMapping::kAuto) {
  std::ifstream in(path);
  if (!in) throw DataError("load_csv: cannot open '" + path + "'");

  std::vector<std::vector<long>> rows;
  std::string line;
  long file_row = 0;
  bool first_content_row = true;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++file_row;
    if (line.empty() || line == "\r") continue;
    const auto cells = detail::split_line(line);
    if (first_content_row) {
      long tmp;
      bool numeric = true;
      for (const auto& c : cells)
        if (!detail::parse_cell(c, tmp)) numeric = false;
      first_content_row = false;
      width = cells.size();
      if (!numeric) continue;  // header row
    }
    if (cells.size() != width)
      throw DataError("load_csv: row " + std::to_string(file_row) + " has " +
                      std::to_string(cells.size()) + " cells, expected " + std::to_string(width));
    std::vector<long> parsed(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (!detail::parse_cell(cells[c], parsed[c]))
        throw DataError("load_csv: cannot parse cell at row " + std::to_string(file_row) +
                        ", column " + std::to_string(c + 1));
      if (parsed[c] != -1 && parsed[c] != 0 && parsed[c] != 1)
        throw DataError("load_csv: value " + std::to_string(parsed[c]) + " at row " +
                        std::to_string(file_row) + ", column " + std::to_string(c + 1) +
                        " is not a binary encoding");
    }
    rows.push_back(std::move(parsed));
  }
  if (rows.empty()) throw DataError("load_csv: no data rows in '" + path + "'");
  if (width < 2) throw DataError("load_csv: need at least one feature column plus the label");

  bool saw_minus = false, saw_zero = false;
  for (const auto& r : rows)
    for (long v : r) {
      saw_minus |= (v == -1);
      saw_zero |= (v == 0);
    }
  if (saw_minus && saw_zero) throw DataError("load_csv: mixed -1/+1 and 0/1 encodings");

  CsvMapping effective = mapping;
  if (mapping == CsvMapping::kAuto)
    effective = saw_zero ? CsvMapping::kZeroOne : CsvMapping::kPm1;
  if (effective == CsvMapping::kPm1 && saw_zero)
    throw DataError("load_csv: found 0 in a ±1-encoded file");
  if (effective == CsvMapping::kZeroOne && saw_minus)
    throw DataError("load_csv: found -1 in a 0/1-encoded file");

  const int n = static_cast<int>(rows.size());
  const int d = static_cast<int>(width) - 1;
  std::vector<std::int8_t> xs;
  xs.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(d));
  std::vector<std::int8_t> ys;
  ys.reserve(static_cast<std::size_t>(n));
  auto remap = [&](long v) -> std::int8_t {
    if (effective == CsvMapping::kZeroOne) return v == 0 ? -1 : 1;
    return static_cast<std::int8_t>(v);
  };
  for (const auto& r : rows) {
    for (std::size_t c = 0; c + 1 < width; ++c) xs.push_back(remap(r[c]));
    ys.push_back(remap(r[width - 1]));
  }

  LoadReport report{LabeledDataset(n, d, std::move(xs), std::move(ys)), {}};
  for (int j = 0; j < d; ++j) {
    bool constant = true;
    for (int i = 1; i < n && constant; ++i)
      constant = report.data.x(i, j) == report.data.x(0, j);
    if (constant)
      report.warnings.push_back("feature column " + std::to_string(j) + " is constant");
  }
  {
    bool constant = true;
    for (int i = 1; i < n && constant; ++i) constant = report.data.y(i) == report.data.y(0);
    if (constant) report.warnings.push_back("label column is constant");
  }
  return report;
}

inline void save_csv(const LabeledDataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("save_csv: cannot open '" + path + "' for writing");
  for (int j = 0; j < data.dim(); ++j) out << 'x' << j << ',';
  out << "y\n";
  for (int i = 0; i < data.n(); ++i) {
    for (int j = 0; j < data.dim(); ++j) out << static_cast<int>(data.x(i, j)) << ',';
    out << static_cast<int>(data.y(i)) << '\n';
  }
  if (!out) throw DataError("save_csv: write failed for '" + path + "'");
}

inline nlohmann::json to_json(const LabeledDataset& data) {
  nlohmann::json features = nlohmann::json::array();
  for (int i = 0; i < data.n(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < data.dim(); ++j) row.push_back(static_cast<int>(data.x(i, j)));
    features.push_back(std::move(row));
  }
  std::vector<int> labels(static_cast<std::size_t>(data.n()));
  for (int i = 0; i < data.n(); ++i) labels[static_cast<std::size_t>(i)] = data.y(i);
  return {{"n", data.n()}, {"d", data.dim()}, {"features", std::move(features)}, {"labels", labels}};
}

inline LabeledDataset dataset_from_json(const nlohmann::json& j) {
  const int n = j.at("n").get<int>();
  const int d = j.at("d").get<int>();
  std::vector<std::int8_t> xs;
  xs.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(d));
  for (const auto& row : j.at("features"))
    for (const auto& v : row) xs.push_back(static_cast<std::int8_t>(v.get<int>()));
  std::vector<std::int8_t> ys;
  for (const auto& v : j.at("labels")) ys.push_back(static_cast<std::int8_t>(v.get<int>()));
  return LabeledDataset(n, d, std::move(xs), std::move(ys));
}

}  // namespace cubelearn
