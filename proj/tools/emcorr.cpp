// emcorr command-line front end.
//
// Exit status: 0 success, 2 invalid parameters, 3 unreadable or malformed input.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "emcorr/emcorr.hpp"

namespace {

using namespace emcorr;

constexpr int kExitValidation = 2;
constexpr int kExitInput = 3;

struct InputFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class T>
std::vector<T> parse_list(const std::string& text, const char* flag) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    T v{};
    const char* b = tok.data();
    const char* e = tok.data() + tok.size();
    while (b < e && *b == ' ') ++b;
    const auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc{} || p != e)
      throw Error(Errc::InvalidArgument, fmt::format("{}: cannot read '{}'", flag, tok));
    out.push_back(v);
  }
  if (out.empty()) throw Error(Errc::InvalidArgument, fmt::format("{}: empty list", flag));
  return out;
}

Plane parse_plane(const std::string& s) { return s == "image" ? Plane::image : Plane::focal; }

/// Writes `content` to `path` only once everything has been computed.
void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputFailure("cannot open " + path + " for writing");
  out << content;
  if (!out) throw InputFailure("write failed for " + path);
}

std::string r4(double v) { return fmt::format("{:.4f}", v); }

// relations

struct RelationsArgs {
  std::size_t dim = 3;
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  std::string out;
};

int run_relations(const RelationsArgs& a) {
  if (a.dim < 2) throw Error(Errc::InvalidArgument, "--dim must be >= 2");
  if (a.samples < 1) throw Error(Errc::InvalidArgument, "--samples must be >= 1");
  Rng rng(a.seed);
  const auto f = fourier_basis(a.dim);
  const auto fc = conjugate_basis(f);
  const auto z = computational_basis(a.dim);
  const auto x_op = x_operator(a.dim);
  const auto z_op = z_operator(a.dim);
  const double d = static_cast<double>(a.dim);

  std::string csv = "N,MP,MP_line,EOF,MI,C_XX,C_ZZ\n";
  double worst_mp = 0.0, worst_mi = 0.0;
  for (std::size_t k = 0; k < a.samples; ++k) {
    const auto s = random_schmidt(a.dim, rng);
    const double n = negativity_pure(s);
    const double e = eof_pure(s);
    const double mp = mutual_predictability(joint_probability_matrix(s, f, fc));
    const double mi = mutual_information(joint_probability_matrix(s, z, z));
    const auto rho = to_density(s);
    const double cxx = pcc_operator(rho, x_op, x_op);
    const double czz = pcc_operator(rho, z_op, z_op);
    const double line = (1.0 + 2.0 * n) / d;
    worst_mp = std::max(worst_mp, std::abs(mp - line));
    worst_mi = std::max(worst_mi, std::abs(mi - e));
    csv += fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", n, mp, line, e,
                       mi, cxx, czz);
  }
  write_file(a.out, csv);
  fmt::print("relations: d={} samples={} seed={}\n", a.dim, a.samples, a.seed);
  fmt::print("max |MP - (1+2N)/d| = {:.3e}\n", worst_mp);
  fmt::print("max |MI - EOF|      = {:.3e}\n", worst_mi);
  fmt::print("wrote {}\n", a.out);
  return 0;
}

// estimate

struct EstimateArgs {
  std::string plane = "focal";
  std::string pairing;
  std::string values;
  std::string model = "pure";
  std::optional<int> mubs;
  std::string bootstrap;
  std::vector<std::string> files;
  std::vector<std::string> companions;
  std::string companion_plane;
  std::string companion_pairing;
  std::string out;
};

void print_report(const EstimationReport& r) {
  const auto stat = [](const Statistic& s) {
    return s.std ? fmt::format("{} +/- {}", r4(s.value), r4(*s.std)) : r4(s.value);
  };
  fmt::print("plane {}  model {}  uncertainty {}\n", to_string(r.plane), to_string(r.model),
             r.uncertainty);
  for (const auto& s : r.per_set)
    fmt::print("  {:<9} {:<5} {}  MP {}  MI {}  PCC {}\n", s.companion ? "companion" : "primary",
               to_string(s.plane), s.source, r4(s.correlators.mp.value),
               r4(s.correlators.mi.value), r4(s.correlators.pcc.value));
  fmt::print("MP  {}\nMI  {}\nPCC {}\n", stat(r.aggregate.mp), stat(r.aggregate.mi),
             stat(r.aggregate.pcc));
  for (const auto& m : r.monotones)
    fmt::print("{} ({}) = {}{}\n", to_string(m.kind), m.method_name(), r4(m.value),
               m.sigma ? " +/- " + r4(*m.sigma) : "");
  for (const auto& f : r.flags) fmt::print("flag {}\n", f);
}

int run_estimate(const EstimateArgs& a) {
  MatrixConfig mc;
  mc.plane = parse_plane(a.plane);
  if (!a.pairing.empty()) mc.pairing = parse_list<int>(a.pairing, "--pairing");
  if (!a.values.empty()) mc.values = parse_list<double>(a.values, "--values");

  EstimateOptions opt;
  opt.model = a.model == "isotropic" ? Model::isotropic : Model::pure;
  opt.mubs = a.mubs;

  std::optional<std::int64_t> counts;
  int resamples = 0;
  std::uint64_t seed = 0;
  if (!a.bootstrap.empty()) {
    std::vector<std::string> parts;
    std::stringstream ss(a.bootstrap);
    for (std::string t; std::getline(ss, t, ':');) parts.push_back(t);
    if (parts.size() != 3)
      throw Error(Errc::InvalidArgument, "--bootstrap expects <counts>:<resamples>:<seed>");
    counts = parse_list<std::int64_t>(parts[0], "--bootstrap counts").at(0);
    resamples = parse_list<int>(parts[1], "--bootstrap resamples").at(0);
    seed = parse_list<std::uint64_t>(parts[2], "--bootstrap seed").at(0);
    if (*counts <= 0 || resamples < 100)
      throw Error(Errc::InvalidArgument, "--bootstrap needs counts > 0 and resamples >= 100");
  }

  const auto set = load_matrix_set(a.files, mc);

  if (!a.companions.empty()) {
    MatrixConfig cc;
    cc.plane = a.companion_plane.empty()
                   ? (opt.model == Model::isotropic ? Plane::focal : Plane::image)
                   : parse_plane(a.companion_plane);
    if (!a.companion_pairing.empty()) cc.pairing = parse_list<int>(a.companion_pairing, "--companion-pairing");
    cc.values = std::vector<double>(set.values_a.values().begin(), set.values_a.values().end());
    if (opt.model == Model::isotropic) {
      // One set per additional basis.
      for (const auto& c : a.companions) opt.companions.push_back(load_matrix_set({c}, cc));
    } else {
      opt.companions.push_back(load_matrix_set(a.companions, cc));
    }
  }

  const auto report = counts ? bootstrap_uncertainty(set, *counts, resamples, seed, opt)
                             : estimate(set, opt);
  if (!a.out.empty()) write_file(a.out, to_json(report).dump(2) + "\n");
  print_report(report);
  if (!a.out.empty()) fmt::print("wrote {}\n", a.out);
  return 0;
}

// nonmono

struct NonmonoArgs {
  std::size_t resolution = 2000;
  std::size_t dim = 3;
  std::size_t stride = 1;
  std::size_t max_pairs = 1000;
  std::string out;
  std::string pairs_out;
};

int run_nonmono(const NonmonoArgs& a) {
  if (a.stride < 1) throw Error(Errc::InvalidArgument, "--stride must be >= 1");
  const auto r = scan_simplex(a.resolution, a.dim, a.max_pairs);
  std::ostringstream csv;
  write_scan_csv(csv, r, a.stride);
  std::string pairs;
  if (!a.pairs_out.empty()) {
    pairs = "c0_a,c1_a,E_a,N_a,c0_b,c1_b,E_b,N_b\n";
    for (const auto& p : r.pairs)
      pairs += fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n",
                           p.first.c0, p.first.c1, p.first.e, p.first.n, p.second.c0, p.second.c1,
                           p.second.e, p.second.n);
  }
  write_file(a.out, csv.str());
  if (!a.pairs_out.empty()) write_file(a.pairs_out, pairs);

  fmt::print("nonmono: d={} resolution={} points={}\n", r.dim, r.resolution, r.grid.size());
  if (r.interior_max) {
    const auto& m = *r.interior_max;
    if (r.dim == 3)
      fmt::print("max dQ = {} at c0 = {}, c1 = {}, c2 = {} (interior local maximum)\n", r4(m.dq),
                 r4(m.c0), r4(m.c1), r4(r.interior_max_c2));
    else
      fmt::print("max dQ = {} at c0 = {}, c1 = {} (interior local maximum)\n", r4(m.dq), r4(m.c0),
                 r4(m.c1));
  } else {
    fmt::print("no interior local maximum of dQ on this grid\n");
  }
  fmt::print("grid max dQ = {} at c0 = {}, c1 = {}\n", r4(r.grid_max.dq), r4(r.grid_max.c0),
             r4(r.grid_max.c1));
  fmt::print("states with an E/N order inversion: {} of {}\n", r.non_monotone_states, r.grid.size());
  if (!r.pairs.empty()) {
    const auto& p = r.pairs.front();
    fmt::print("example: (E {}, N {}) vs (E {}, N {})\n", r4(p.first.e), r4(p.first.n),
               r4(p.second.e), r4(p.second.n));
  }
  fmt::print("wrote {}\n", a.out);
  return 0;
}

// simulate

struct SimulateArgs {
  std::string lambdas;
  std::string plane = "focal";
  double step = 30e-6;
  double range = 2e-3;
  std::optional<std::int64_t> counts;
  std::optional<std::uint64_t> seed;
  double fixed_position = 0.0;
  std::optional<double> pixel_window;
  SlitGeometry geometry = reference_geometry();
  std::string out;
};

int run_simulate(const SimulateArgs& a) {
  const auto s = make_schmidt_state(parse_list<double>(a.lambdas, "--lambdas"));
  ScanConfig cfg;
  cfg.plane = parse_plane(a.plane);
  cfg.fixed_arm_position = a.fixed_position;
  cfg.scan_range = a.range;
  cfg.step = a.step;
  cfg.counts_budget = a.counts;
  cfg.seed = a.seed;
  cfg.pixel_window = a.pixel_window;

  const auto grid = simulate_raw_grid(s, a.geometry, cfg);
  std::string profile_path, profile;
  if (cfg.plane == Plane::focal) {
    std::ostringstream os;
    write_profile_csv(os, coincidence_profile(s, a.geometry, cfg));
    profile = os.str();
    std::filesystem::path p(a.out);
    profile_path = (p.parent_path() / (p.stem().string() + ".profile.csv")).string();
  }
  std::string comment = fmt::format("simulated {} plane, lambdas {}", to_string(cfg.plane), a.lambdas);
  if (a.counts) comment += fmt::format(", counts {} seed {}", *a.counts, *a.seed);
  write_file(a.out, format_matrix_text(grid.dim, grid.a_major(), comment));
  if (!profile_path.empty()) write_file(profile_path, profile);

  fmt::print("simulate: {} plane, d={}\n", to_string(cfg.plane), s.dim());
  if (cfg.plane == Plane::focal) {
    std::string xs;
    for (double x : eigen_positions(a.geometry, s.dim())) xs += fmt::format(" {:.1f}", x * 1e6);
    fmt::print("eigen positions (um):{}\n", xs);
  }
  fmt::print("wrote {}\n", a.out);
  if (!profile_path.empty()) fmt::print("wrote {}\n", profile_path);
  return 0;
}

// mub-check

int run_mub_check(std::size_t dim) {
  const auto family = mub_family(dim);
  const double target = 1.0 / std::sqrt(static_cast<double>(dim));
  double worst = 0.0;
  bool all = true;
  for (std::size_t p = 0; p < family.size(); ++p)
    for (std::size_t q = p + 1; q < family.size(); ++q) {
      double dev = 0.0;
      for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
          dev = std::max(dev, std::abs(std::abs(MeasurementBasis::inner(family[p][i], family[q][j])) - target));
      const bool ok = is_mutually_unbiased(family[p], family[q]);
      all = all && ok;
      worst = std::max(worst, dev);
      fmt::print("{:<18} {:<18} max dev {:.3e} {}\n", family[p].label().str(),
                 family[q].label().str(), dev, ok ? "unbiased" : "BIASED");
    }
  fmt::print("d={}: {} bases, {} (max deviation {:.3e})\n", dim, family.size(),
             all ? "mutually unbiased" : "NOT mutually unbiased", worst);
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement monotones from statistical correlators"};
  app.require_subcommand(1);

  RelationsArgs rel;
  auto* relc = app.add_subcommand("relations", "Sample random pure states and tabulate N, MP, EOF, MI, PCC");
  relc->add_option("--dim", rel.dim, "Local dimension")->required();
  relc->add_option("--samples", rel.samples, "Number of random states")->required();
  relc->add_option("--seed", rel.seed, "RNG seed")->required();
  relc->add_option("--out", rel.out, "Output CSV")->required();

  EstimateArgs est;
  auto* estc = app.add_subcommand("estimate", "Correlators and monotones from measured matrices");
  estc->add_option("--plane", est.plane, "Detection plane of the matrices")
      ->check(CLI::IsMember({"image", "focal"}));
  estc->add_option("--pairing", est.pairing, "Correlated B outcome per A outcome, e.g. 0,2,1");
  estc->add_option("--values", est.values, "Outcome values for A, e.g. 0,1,-1");
  estc->add_option("--model", est.model, "State model")->check(CLI::IsMember({"pure", "isotropic"}));
  estc->add_option("--mubs", est.mubs, "Number of mutually unbiased bases summed (isotropic)");
  estc->add_option("--bootstrap", est.bootstrap, "Multinomial bootstrap <counts>:<resamples>:<seed>");
  estc->add_option("--companion", est.companions,
                   "Matrix measured in another basis (repeatable; one basis per file for isotropic)");
  estc->add_option("--companion-plane", est.companion_plane,
                   "Plane of the companion matrices (default image for pure, focal for isotropic)")
      ->check(CLI::IsMember({"image", "focal"}));
  estc->add_option("--companion-pairing", est.companion_pairing, "Pairing for companion matrices");
  estc->add_option("--out", est.out, "JSON report path");
  estc->add_option("files", est.files, "Matrix files (repeated measurements)")->required();

  NonmonoArgs nm;
  auto* nmc = app.add_subcommand("nonmono", "Scan the Schmidt simplex for dQ and E/N order inversions");
  nmc->add_option("--resolution", nm.resolution, "Grid points per unit coefficient")->required();
  nmc->add_option("--dim", nm.dim, "2 or 3")->check(CLI::IsMember({2, 3}));
  nmc->add_option("--stride", nm.stride, "Write every n-th grid point");
  nmc->add_option("--max-pairs", nm.max_pairs, "Inverted pairs kept as examples");
  nmc->add_option("--pairs-out", nm.pairs_out, "CSV of example inverted pairs");
  nmc->add_option("--out", nm.out, "Output CSV")->required();

  SimulateArgs sim;
  auto* simc = app.add_subcommand("simulate", "Simulate a slit-experiment correlation matrix");
  simc->add_option("--lambdas", sim.lambdas, "Schmidt coefficients, e.g. 0.6,0.6,0.53")->required();
  simc->add_option("--plane", sim.plane, "Detection plane")->check(CLI::IsMember({"image", "focal"}));
  simc->add_option("--step", sim.step, "Profile scan step (m)");
  simc->add_option("--range", sim.range, "Profile scan range (m), centred at 0");
  auto* counts_opt = simc->add_option("--counts", sim.counts, "Multinomial counts per matrix");
  simc->add_option("--seed", sim.seed, "Seed for the counts")->needs(counts_opt);
  counts_opt->needs("--seed");
  simc->add_option("--fixed-position", sim.fixed_position, "Fixed detector position (m)");
  simc->add_option("--pixel-window", sim.pixel_window, "Top-hat detector width (m)");
  simc->add_option("--slit-width", sim.geometry.slit_width, "Slit width (m)");
  simc->add_option("--slit-pitch", sim.geometry.slit_pitch, "Slit pitch (m)");
  simc->add_option("--wavelength", sim.geometry.wavelength, "Wavelength (m)");
  simc->add_option("--focal-length", sim.geometry.focal_length, "Lens focal length (m)");
  simc->add_option("--out", sim.out, "Matrix output path")->required();

  std::size_t mub_dim = 3;
  auto* mubc = app.add_subcommand("mub-check", "Build and verify d+1 MUBs for prime d");
  mubc->add_option("--dim", mub_dim, "Prime dimension")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*relc) return run_relations(rel);
    if (*estc) return run_estimate(est);
    if (*nmc) return run_nonmono(nm);
    if (*simc) return run_simulate(sim);
    if (*mubc) return run_mub_check(mub_dim);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.is_input_error() ? kExitInput : kExitValidation;
  } catch (const InputFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitValidation;
}
