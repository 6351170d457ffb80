#pragma once

// Empirical pipeline: coincidence matrices on disk -> correlators per set ->
// mean and spread across sets -> monotone estimates.
//
// Matrix files are plain text, comma separated, d rows of d non-negative
// decimals with optional '#' comment lines. Row index is the B-side outcome
// (y), column index the A-side outcome (x).

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "emcorr/bases.hpp"
#include "emcorr/correlators.hpp"
#include "emcorr/error.hpp"
#include "emcorr/monotones.hpp"
#include "emcorr/sampling.hpp"
#include "json.hpp"

namespace emcorr {

enum class Plane { image, focal };
enum class Model { pure, isotropic };

inline std::string to_string(Plane p) { return p == Plane::image ? "image" : "focal"; }
inline std::string to_string(Model m) { return m == Model::pure ? "pure" : "isotropic"; }

/// A d x d grid as written in a matrix file: rows are B outcomes.
struct RawGrid {
  std::size_t dim = 0;
  std::vector<double> rows_b_cols_a;

  /// Same data indexed [a][b].
  std::vector<double> a_major() const {
    std::vector<double> out(dim * dim);
    for (std::size_t b = 0; b < dim; ++b)
      for (std::size_t a = 0; a < dim; ++a) out[a * dim + b] = rows_b_cols_a[b * dim + a];
    return out;
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline double parse_number(std::string_view tok, const std::string& where) {
  tok = trim(tok);
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size() || !std::isfinite(v))
    throw Error(Errc::ParseError, where + ": '" + std::string(tok) + "' is not a number");
  return v;
}

}  // namespace detail

inline RawGrid parse_matrix_text(std::string_view text, const std::string& source = "<memory>") {
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    line = detail::trim(line);
    if (line.empty() || line.front() == '#') continue;
    std::vector<double> row;
    const std::string where = source + ":" + std::to_string(line_no);
    while (true) {
      const auto comma = line.find(',');
      row.push_back(detail::parse_number(line.substr(0, comma), where));
      if (comma == std::string_view::npos) break;
      line = line.substr(comma + 1);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(Errc::ParseError, source + ": no matrix rows");
  const std::size_t d = rows.size();
  if (d < 2) throw Error(Errc::ParseError, source + ": matrix must be at least 2x2");
  RawGrid g;
  g.dim = d;
  for (std::size_t r = 0; r < d; ++r) {
    if (rows[r].size() != d)
      throw Error(Errc::ParseError, source + ": row " + std::to_string(r + 1) + " has " +
                                        std::to_string(rows[r].size()) + " entries, expected " +
                                        std::to_string(d));
    for (double v : rows[r]) {
      if (v < 0.0) throw Error(Errc::NegativeEntry, source + ": negative entry " + std::to_string(v));
      g.rows_b_cols_a.push_back(v);
    }
  }
  double total = 0.0;
  for (double v : g.rows_b_cols_a) total += v;
  if (total <= 0.0) throw Error(Errc::ParseError, source + ": matrix sums to zero");
  return g;
}

inline RawGrid read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ParseError, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_matrix_text(ss.str(), path);
}

inline std::string format_double(double v) { return fmt::format("{:.17g}", v); }

/// Writes an [a][b] grid in file orientation (rows = B outcome).
inline std::string format_matrix_text(std::size_t dim, std::span<const double> a_major,
                                      std::string_view comment = {}) {
  std::string out;
  if (!comment.empty()) out += fmt::format("# {}\n", comment);
  for (std::size_t b = 0; b < dim; ++b) {
    for (std::size_t a = 0; a < dim; ++a) {
      if (a) out += ',';
      out += format_double(a_major[a * dim + b]);
    }
    out += '\n';
  }
  return out;
}

struct MatrixConfig {
  Plane plane = Plane::focal;
  std::optional<std::vector<int>> pairing;        // default per plane
  std::optional<std::vector<double>> values;      // default 0, 1, -1, ...
};

/// Repeated measurements of one joint distribution.
struct MatrixSet {
  Plane plane = Plane::focal;
  std::vector<JointProbabilityMatrix> matrices;  // normalized; raw totals kept per matrix
  std::vector<std::string> sources;
  std::vector<int> pairing;
  OutcomeValues values_a{std::vector<double>{0.0, 1.0}};
  OutcomeValues values_b{std::vector<double>{0.0, 1.0}};

  std::size_t dim() const { return matrices.front().dim(); }
};

/// Focal plane pairs outcome i with (d - i) mod d; image plane pairs i with i.
inline std::vector<int> default_pairing(Plane plane, std::size_t dim) {
  return plane == Plane::focal ? conjugate_pairing(dim) : identity_pairing(dim);
}

inline MatrixSet make_matrix_set(const std::vector<RawGrid>& grids, const MatrixConfig& config,
                                 std::vector<std::string> sources = {}) {
  if (grids.empty()) throw Error(Errc::InvalidArgument, "a matrix set needs at least one matrix");
  const std::size_t d = grids.front().dim;
  for (const auto& g : grids)
    if (g.dim != d)
      throw Error(Errc::DimInconsistent, "matrices of dimension " + std::to_string(d) + " and " +
                                             std::to_string(g.dim) + " in one set");
  if (sources.size() < grids.size())
    for (std::size_t i = sources.size(); i < grids.size(); ++i)
      sources.push_back("matrix" + std::to_string(i));

  MatrixSet set;
  set.plane = config.plane;
  set.pairing = config.pairing ? *config.pairing : default_pairing(config.plane, d);
  if (set.pairing.size() != d || !is_permutation_of_range(set.pairing))
    throw Error(Errc::InvalidArgument, "pairing must be a permutation of 0.." + std::to_string(d - 1));
  if (config.values) {
    if (config.values->size() != d)
      throw Error(Errc::InvalidArgument, "expected " + std::to_string(d) + " outcome values");
    set.values_a = OutcomeValues(*config.values);
  } else {
    set.values_a = default_outcome_values(d);
  }
  set.values_b = set.values_a.permuted(set.pairing);

  const std::string basis = config.plane == Plane::focal ? "fourier" : "computational";
  for (const auto& g : grids)
    set.matrices.push_back(
        JointProbabilityMatrix::from_raw(d, g.a_major(), set.pairing, basis, basis));
  set.sources = std::move(sources);
  return set;
}

inline MatrixSet load_matrix_set(const std::vector<std::string>& paths, const MatrixConfig& config) {
  std::vector<RawGrid> grids;
  for (const auto& p : paths) grids.push_back(read_matrix_file(p));
  return make_matrix_set(grids, config, paths);
}

struct EstimateOptions {
  Model model = Model::pure;
  std::optional<int> mubs;          // isotropic: number of MUBs summed
  std::vector<MatrixSet> companions;  // measurements in the other bases
};

struct SetSummary {
  std::string source;
  Plane plane = Plane::focal;
  bool companion = false;
  double normalization = 1.0;
  CorrelatorReport correlators;
};

struct EstimationReport {
  std::vector<std::string> inputs;
  std::vector<std::string> companion_inputs;
  Model model = Model::pure;
  std::optional<int> mubs;
  std::string uncertainty = "sample_std";
  Plane plane = Plane::focal;
  std::vector<int> pairing;
  std::vector<double> values_a;
  std::vector<double> values_b;
  std::vector<SetSummary> per_set;
  CorrelatorReport aggregate;
  std::vector<MonotoneEstimate> monotones;
  std::vector<std::string> flags;

  /// First monotone produced by `method`, if any.
  const MonotoneEstimate* find(Relation method) const {
    for (const auto& m : monotones)
      if (m.method == method) return &m;
    return nullptr;
  }
};

namespace detail {

inline Statistic mean_and_std(const std::vector<double>& xs) {
  Statistic s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.value = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.value) * (x - s.value);
    s.std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return s;
}

inline CorrelatorReport aggregate(const std::vector<CorrelatorReport>& reports) {
  std::vector<double> mp, mi, pcc;
  for (const auto& r : reports) {
    mp.push_back(r.mp.value);
    mi.push_back(r.mi.value);
    pcc.push_back(r.pcc.value);
  }
  return {mean_and_std(mp), mean_and_std(mi), mean_and_std(pcc)};
}

inline std::vector<CorrelatorReport> per_matrix(const MatrixSet& set) {
  std::vector<CorrelatorReport> out;
  for (const auto& j : set.matrices) out.push_back(correlator_report(j, set.values_a, set.values_b));
  return out;
}

inline Measured measured(const Statistic& s) { return {s.value, s.std}; }

}  // namespace detail

/// Correlators per matrix, their mean and sample standard deviation, and every
/// monotone the model and available planes support.
inline EstimationReport estimate(const MatrixSet& set, const EstimateOptions& options = {}) {
  if (set.matrices.empty()) throw Error(Errc::InvalidArgument, "empty matrix set");
  const std::size_t d = set.dim();
  for (const auto& c : options.companions) {
    if (c.matrices.empty()) throw Error(Errc::InvalidArgument, "empty companion set");
    if (c.dim() != d) throw Error(Errc::DimInconsistent, "companion set has a different dimension");
  }

  EstimationReport r;
  r.inputs = set.sources;
  r.model = options.model;
  r.mubs = options.mubs;
  r.plane = set.plane;
  r.pairing = set.pairing;
  r.values_a.assign(set.values_a.values().begin(), set.values_a.values().end());
  r.values_b.assign(set.values_b.values().begin(), set.values_b.values().end());

  const auto add_sets = [&](const MatrixSet& s, bool companion) {
    const auto reports = detail::per_matrix(s);
    for (std::size_t i = 0; i < reports.size(); ++i) {
      const double norm = s.matrices[i].normalization();
      r.per_set.push_back({s.sources[i], s.plane, companion, norm, reports[i]});
      if (std::abs(norm - 1.0) > kTol.renormalization_warning)
        r.flags.push_back(fmt::format("renormalized:{}:{}", s.sources[i], format_double(norm)));
      if (companion) r.companion_inputs.push_back(s.sources[i]);
    }
    return detail::aggregate(reports);
  };

  r.aggregate = add_sets(set, false);
  std::vector<std::pair<Plane, CorrelatorReport>> companion_aggregates;
  for (const auto& c : options.companions) companion_aggregates.emplace_back(c.plane, add_sets(c, true));

  const auto push = [&](MonotoneEstimate e) {
    if (e.clamped) r.flags.push_back("clamped:" + e.method_name());
    r.monotones.push_back(std::move(e));
  };
  const auto one = [](const Statistic& s) { return std::vector<Measured>{detail::measured(s)}; };

  if (options.model == Model::pure) {
    if (options.mubs) throw Error(Errc::ModelMismatch, "the MUB count only applies to the isotropic model");
    const auto for_plane = [&](Plane p, const CorrelatorReport& agg) {
      if (p == Plane::focal) {
        push(invert_relation(Relation::from_mp_pure, one(agg.mp), d));
        push(invert_relation(Relation::from_pcc, one(agg.pcc), d));
      } else {
        push(invert_relation(Relation::from_mi, one(agg.mi), d));
      }
    };
    for_plane(set.plane, r.aggregate);
    for (const auto& [p, agg] : companion_aggregates) for_plane(p, agg);

    // C_ZZ + C_XX from one image-plane and one focal-plane set.
    const CorrelatorReport* focal = set.plane == Plane::focal ? &r.aggregate : nullptr;
    const CorrelatorReport* image = set.plane == Plane::image ? &r.aggregate : nullptr;
    for (const auto& [p, agg] : companion_aggregates) {
      if (p == Plane::focal && !focal) focal = &agg;
      if (p == Plane::image && !image) image = &agg;
    }
    if (focal && image) {
      const std::vector<Measured> both{detail::measured(image->pcc), detail::measured(focal->pcc)};
      push(invert_relation(Relation::from_pcc_sum, both, d));
    }
  } else {
    if (set.plane != Plane::focal)
      throw Error(Errc::ModelMismatch, "the isotropic model needs focal-plane (Fourier) MP");
    const int m = options.mubs.value_or(1);
    if (m < 1) throw Error(Errc::ModelMismatch, "number of MUBs must be >= 1");
    if (static_cast<std::size_t>(m) != 1 + options.companions.size())
      throw Error(Errc::ModelMismatch,
                  fmt::format("{} MUBs requested but {} measured set(s) supplied", m,
                              1 + options.companions.size()));
    std::vector<Measured> mps{detail::measured(r.aggregate.mp)};
    for (const auto& [p, agg] : companion_aggregates) mps.push_back(detail::measured(agg.mp));
    push(invert_relation(Relation::from_mp_isotropic, mps, d, m));
    push(invert_relation(Relation::alpha, one(r.aggregate.mp), d));
    push(invert_relation(Relation::iso_fidelity, one(r.aggregate.mp), d));
    r.mubs = m;
  }
  return r;
}

namespace detail {

inline MatrixSet resample(const MatrixSet& set, std::int64_t counts, Rng& rng) {
  MatrixSet out = set;
  for (auto& j : out.matrices) {
    const auto draw = multinomial(counts, j.probs(), rng);
    std::vector<double> raw(draw.begin(), draw.end());
    j = JointProbabilityMatrix::from_raw(j.dim(), std::move(raw),
                                         std::vector<int>(j.pairing().begin(), j.pairing().end()),
                                         j.basis_a(), j.basis_b());
  }
  return out;
}

inline double sample_std(const std::vector<double>& xs) {
  return mean_and_std(xs).std.value_or(0.0);
}

}  // namespace detail

/// Shot-noise alternative to the repeated-set spread: every matrix is
/// multinomially resampled at `total_counts` events, the whole estimate is
/// recomputed, and the standard deviation over resamples replaces every
/// uncertainty in the point estimate.
inline EstimationReport bootstrap_uncertainty(const MatrixSet& set, std::int64_t total_counts,
                                              int resamples, std::uint64_t seed,
                                              const EstimateOptions& options = {}) {
  if (total_counts <= 0) throw Error(Errc::InvalidArgument, "total counts must be > 0");
  if (resamples < 100) throw Error(Errc::InvalidArgument, "need at least 100 resamples");

  EstimationReport point = estimate(set, options);
  Rng rng(seed);
  std::vector<double> mp, mi, pcc;
  std::vector<std::vector<double>> mono(point.monotones.size());
  for (int k = 0; k < resamples; ++k) {
    EstimateOptions o = options;
    for (auto& c : o.companions) c = detail::resample(c, total_counts, rng);
    const auto rep = estimate(detail::resample(set, total_counts, rng), o);
    mp.push_back(rep.aggregate.mp.value);
    mi.push_back(rep.aggregate.mi.value);
    pcc.push_back(rep.aggregate.pcc.value);
    for (std::size_t i = 0; i < mono.size(); ++i) mono[i].push_back(rep.monotones[i].value);
  }
  point.aggregate.mp.std = detail::sample_std(mp);
  point.aggregate.mi.std = detail::sample_std(mi);
  point.aggregate.pcc.std = detail::sample_std(pcc);
  for (std::size_t i = 0; i < mono.size(); ++i)
    point.monotones[i].sigma = detail::sample_std(mono[i]);
  point.uncertainty = fmt::format("bootstrap(counts={},resamples={},seed={})", total_counts,
                                  resamples, seed);
  return point;
}

namespace detail {

inline nlohmann::ordered_json stat_json(const Statistic& s) {
  nlohmann::ordered_json j;
  j["mean"] = s.value;
  if (s.std) j["std"] = *s.std;
  return j;
}

}  // namespace detail

/// Key/value tree with top-level fields inputs, plane, pairing, values,
/// per_set, aggregate, monotones, flags.
inline nlohmann::ordered_json to_json(const EstimationReport& r) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["inputs"] = {{"files", r.inputs},
                 {"companions", r.companion_inputs},
                 {"model", to_string(r.model)},
                 {"mubs", r.mubs ? ordered_json(*r.mubs) : ordered_json(nullptr)},
                 {"uncertainty", r.uncertainty}};
  j["plane"] = to_string(r.plane);
  j["pairing"] = r.pairing;
  j["values"] = {{"a", r.values_a}, {"b", r.values_b}};
  j["per_set"] = ordered_json::array();
  for (const auto& s : r.per_set)
    j["per_set"].push_back({{"file", s.source},
                            {"plane", to_string(s.plane)},
                            {"role", s.companion ? "companion" : "primary"},
                            {"normalization", s.normalization},
                            {"mp", s.correlators.mp.value},
                            {"mi", s.correlators.mi.value},
                            {"pcc", s.correlators.pcc.value}});
  j["aggregate"] = {{"mp", detail::stat_json(r.aggregate.mp)},
                    {"mi", detail::stat_json(r.aggregate.mi)},
                    {"pcc", detail::stat_json(r.aggregate.pcc)}};
  j["monotones"] = ordered_json::array();
  for (const auto& m : r.monotones)
    j["monotones"].push_back({{"kind", to_string(m.kind)},
                              {"method", m.method_name()},
                              {"value", m.value},
                              {"sigma", m.sigma ? ordered_json(*m.sigma) : ordered_json(nullptr)}});
  j["flags"] = r.flags;
  return j;
}

}  // namespace emcorr
