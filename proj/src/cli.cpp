#include "stcurves/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "stcurves/arith.hpp"
#include "stcurves/counting.hpp"
#include "stcurves/stgroup.hpp"

namespace stcurves::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

double round_sig(double x, int digits) {
  if (!std::isfinite(x) || x == 0.0) return x;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return std::strtod(buf, nullptr);
}

std::string rational_string(const mpq_class& q) { return q.get_str(); }

void write_text(const RunConfig& config, const std::string& text, std::ostream& out) {
  if (!config.output) {
    out << text;
    return;
  }
  std::ofstream file(*config.output, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot write " + config.output->string());
  file << text;
}

std::optional<std::filesystem::path> resolve_cache(const RunConfig& config) {
  if (config.cache) return config.cache;
  if (const char* dir = std::getenv(kCacheDirEnv); dir && *dir) {
    return std::filesystem::path(dir) / ("l" + std::to_string(config.ell) + ".csv");
  }
  return std::nullopt;
}

A1Dataset dataset_for(const RunConfig& config, unsigned jobs) {
  if (config.bound < 2) throw std::invalid_argument("--bound must be at least 2");
  BuildOptions options;
  options.cache = resolve_cache(config);
  options.jobs = jobs;
  return build_dataset(config.ell, config.bound, options);
}

void run_count(const RunConfig& config, std::ostream& out) {
  const PointCountRecord rec =
      config.naive ? count_points_naive(config.ell, config.q) : count_points(config.ell, config.q);
  ordered_json j;
  j["l"] = rec.ell;
  j["q"] = rec.q;
  j["count"] = rec.count;
  j["method"] = std::string(to_string(rec.method));
  if (rec.count == rec.q + 1) j["a1"] = 0;
  else j["a1"] = round_sig(normalized_trace(rec.q, rec.count), 12);
  out << j.dump() << '\n';
}

void run_scan(const RunConfig& config, std::ostream& out) {
  const A1Dataset data = dataset_for(config, config.jobs);
  std::vector<CacheRow> rows;
  rows.reserve(data.records.size());
  for (const auto& r : data.records) rows.push_back({data.ell, r.p, r.count});
  write_text(config, cache_format(std::move(rows)), out);
}

void run_group(const RunConfig& config, std::ostream& out) {
  const std::uint32_t ell = config.ell;
  const std::uint32_t n = config.generator.value_or(default_generator(ell));
  const ExponentData data = exponent_set(ell);
  const GaloisAction action = galois_action(ell, n);
  const BlockMatrix gamma = gamma_matrix(ell, n);
  const ConjugatedAlpha conj = conjugate_alpha(gamma, data.e);
  const bool generator = generates_units(ell, n);

  ordered_json j;
  j["l"] = ell;
  j["genus"] = data.params.genus;
  j["n"] = n;
  j["n_generates"] = generator;
  ordered_json basis = ordered_json::array();
  for (const auto& f : data.forms) basis.push_back({f.a, f.b});
  j["basis"] = basis;
  j["alpha_exponents"] = data.e;
  j["S"] = data.set;
  ordered_json targets = ordered_json::array();
  for (const auto& t : action.targets) {
    targets.push_back({{"g", t.raw}, {"exponent", t.exponent}, {"conjugated", t.conjugated}});
  }
  j["galois_targets"] = targets;
  ordered_json blocks = ordered_json::array();
  for (std::size_t r = 0; r < gamma.size(); ++r) {
    for (std::size_t c = 0; c < gamma.size(); ++c) {
      if (gamma(r, c).is_zero()) continue;
      blocks.push_back({{"row", r}, {"col", c}, {"block", std::string(to_string(*gamma(r, c).tag()))}});
    }
  }
  j["gamma_blocks"] = blocks;
  j["is_symplectic"] = is_symplectic(gamma);
  j["conjugation_matches_galois"] = matches(conj, action);
  j["inverse_matches_formula"] = block_inverse(gamma) == gamma_inverse(ell, n);
  j["component_order"] = component_order(gamma);
  j["matrix_order"] = matrix_order(gamma);
  out << j.dump(2) << '\n';
}

void run_moments_theory(const RunConfig& config, std::ostream& out) {
  const MomentTable table = exact_a1_moments(config.ell, config.n_max);
  ordered_json moments = ordered_json::object();
  for (const auto& [n, value] : table.moments) {
    moments[std::to_string(n)] = rational_string(std::get<mpq_class>(value));
  }
  ordered_json j;
  j["l"] = config.ell;
  j["coefficient"] = 1;
  j["moments"] = moments;
  out << j.dump() << '\n';
}

void run_moments_numeric(const RunConfig& config, std::ostream& out) {
  const A1Dataset data = dataset_for(config, 1);
  const MomentTable table = numerical_moments(data, config.n_max, config.restrict);
  ordered_json moments = ordered_json::object();
  for (const auto& [n, value] : table.moments) {
    moments[std::to_string(n)] = round_sig(std::get<MomentEstimate>(value).value, 12);
  }
  const std::uint64_t level = std::uint64_t{config.ell} * config.ell;
  std::uint64_t used = 0;
  for (const auto& r : data.records) used += (!config.restrict || r.p % level == 1) ? 1 : 0;
  ordered_json j;
  j["l"] = config.ell;
  j["bound"] = config.bound;
  j["restrict"] = config.restrict;
  j["primes"] = used;
  j["moments"] = moments;
  out << j.dump() << '\n';
}

void run_moments_mc(const RunConfig& config, std::ostream& out) {
  McOptions options;
  options.component = config.component;
  options.route = config.route;
  const McResult result =
      mc_moments(config.ell, config.k_max, config.n_max, config.samples, config.seed, options);
  ordered_json coefficients = ordered_json::array();
  for (const auto& table : result.tables) {
    ordered_json moments = ordered_json::object();
    for (const auto& [n, value] : table.moments) {
      const auto& est = std::get<MomentEstimate>(value);
      moments[std::to_string(n)] = {{"value", round_sig(est.value, 12)},
                                    {"std_error", round_sig(est.std_error.value_or(0.0), 12)}};
    }
    coefficients.push_back({{"k", table.coefficient}, {"moments", moments}});
  }
  ordered_json j;
  j["l"] = config.ell;
  j["samples"] = config.samples;
  j["seed"] = config.seed;
  j["route"] = config.route == CharpolyRoute::cycle ? "cycle" : "dense";
  j["component"] = config.component ? ordered_json(*config.component) : ordered_json(nullptr);
  j["coefficients"] = coefficients;
  const auto& d = result.diagnostics;
  j["diagnostics"] = {{"max_imag", d.max_imag},
                      {"max_palindrome_defect", d.max_palindrome_defect},
                      {"nontrivial_samples", d.nontrivial_samples},
                      {"nontrivial_nonzero_a1", d.nontrivial_nonzero_a1}};
  out << j.dump() << '\n';
}

void run_hist(const RunConfig& config, std::ostream& out) {
  const A1Dataset data = dataset_for(config, 1);
  const HistogramData hist = histogram(data, config.bins, config.filter);
  const bool svg = config.output && config.output->extension() == ".svg";
  if (svg) {
    std::string title = "a1 histogram, l = " + std::to_string(config.ell) +
                        ", p <= " + std::to_string(config.bound);
    if (config.filter == PrimeFilter::residue_one) {
      title += ", p = 1 mod " + std::to_string(config.ell * config.ell);
    }
    write_text(config, histogram_svg(hist, title), out);
  } else {
    write_text(config, histogram_csv(hist), out);
  }
}

void report_error(std::ostream& err, const std::string& message) {
  err << ordered_json{{"error", message}}.dump() << '\n';
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (config.ell < 3 || !is_odd_prime(config.ell)) {
      throw std::invalid_argument("--l must be an odd prime >= 3");
    }
    switch (config.command) {
      case Command::count: run_count(config, out); break;
      case Command::scan: run_scan(config, out); break;
      case Command::group: run_group(config, out); break;
      case Command::moments_theory: run_moments_theory(config, out); break;
      case Command::moments_numeric: run_moments_numeric(config, out); break;
      case Command::moments_mc: run_moments_mc(config, out); break;
      case Command::hist: run_hist(config, out); break;
    }
  } catch (const std::exception& e) {
    report_error(err, e.what());
    return 1;
  }
  return 0;
}

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  CLI::App app{"Point counts, Sato-Tate groups and moment statistics for y^l = x(x^l - 1)",
               "stcurves"};
  app.require_subcommand(1);

  std::string method = "auto";
  std::string route = "cycle";
  std::string filter = "all";
  std::string cache, output;
  std::uint32_t generator = 0;
  std::int64_t component = -1;

  auto add_l = [&](CLI::App* sub) { sub->add_option("--l", config.ell, "odd prime l")->required(); };

  auto* count = app.add_subcommand("count", "point count over F_q");
  add_l(count);
  count->add_option("--q", config.q, "prime q")->required();
  count->add_option("--method", method, "auto|naive")->check(CLI::IsMember({"auto", "naive"}));

  auto* scan = app.add_subcommand("scan", "a1 dataset for all good primes up to a bound");
  add_l(scan);
  scan->add_option("--bound", config.bound)->required();
  scan->add_option("--jobs", config.jobs)->check(CLI::PositiveNumber);
  scan->add_option("--cache", cache);
  scan->add_option("--out", output);

  auto* group = app.add_subcommand("group", "Sato-Tate generator report");
  add_l(group);
  group->add_option("--n", generator, "unit mod l^2 (default: smallest generator)");

  auto* moments = app.add_subcommand("moments", "moment statistics");
  moments->require_subcommand(1);
  auto* theory = moments->add_subcommand("theory", "exact a1 moments");
  add_l(theory);
  theory->add_option("--nmax", config.n_max);
  auto* numeric = moments->add_subcommand("numeric", "a1 moments averaged over primes");
  add_l(numeric);
  numeric->add_option("--bound", config.bound)->required();
  numeric->add_option("--nmax", config.n_max);
  numeric->add_flag("--restrict", config.restrict, "average over p = 1 mod l^2 only");
  numeric->add_option("--cache", cache);
  auto* mc = moments->add_subcommand("mc", "Monte-Carlo moments of a_1..a_kmax");
  add_l(mc);
  mc->add_option("--samples", config.samples);
  mc->add_option("--seed", config.seed);
  mc->add_option("--kmax", config.k_max);
  mc->add_option("--nmax", config.n_max);
  mc->add_option("--component", component, "restrict to one component");
  mc->add_option("--route", route, "cycle|dense")->check(CLI::IsMember({"cycle", "dense"}));

  auto* hist = app.add_subcommand("hist", "histogram of a1");
  add_l(hist);
  hist->add_option("--bound", config.bound)->required();
  hist->add_option("--bins", config.bins)->check(CLI::PositiveNumber);
  hist->add_option("--filter", filter, "all|res1")->check(CLI::IsMember({"all", "res1"}));
  hist->add_option("--out", output, "PATH.csv or PATH.svg");
  hist->add_option("--cache", cache);

  std::vector<const char*> argv{"stcurves"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    report_error(err, e.what());
    return 2;
  }

  if (count->parsed()) config.command = Command::count;
  else if (scan->parsed()) config.command = Command::scan;
  else if (group->parsed()) config.command = Command::group;
  else if (theory->parsed()) config.command = Command::moments_theory;
  else if (numeric->parsed()) config.command = Command::moments_numeric;
  else if (mc->parsed()) config.command = Command::moments_mc;
  else if (hist->parsed()) config.command = Command::hist;

  config.naive = method == "naive";
  config.route = route == "dense" ? CharpolyRoute::dense : CharpolyRoute::cycle;
  config.filter = filter == "res1" ? PrimeFilter::residue_one : PrimeFilter::all;
  if (!cache.empty()) config.cache = cache;
  if (!output.empty()) config.output = output;
  if (generator != 0) config.generator = generator;
  if (component >= 0) config.component = static_cast<std::uint32_t>(component);
  return run(config, out, err);
}

}  // namespace stcurves::cli
