// poisson-fields: pmf tables, moments, sampling, and verification suites.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "cli_support.hpp"
#include "poisson_fields.hpp"

namespace pf = poisson_fields;
using json = nlohmann::ordered_json;

namespace {

constexpr int kSchemaVersion = 1;
constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

struct ProcessArgs {
  std::string rates;
  std::string plus;
  std::string minus;
  std::string family;
  double area = kUnset;
  double s = kUnset;
  double t = kUnset;
  double alpha = 1.0;
  double beta = 1.0;

  pf::RateVector rate_vector() const {
    if (rates.empty()) throw pf::InvalidParams("--rates is required");
    return pf::RateVector(pf::cli::parse_list(rates));
  }
  pf::SkellamRates skellam() const {
    if (plus.empty() || minus.empty()) throw pf::InvalidParams("--plus and --minus are required");
    return {pf::RateVector(pf::cli::parse_list(plus)), pf::RateVector(pf::cli::parse_list(minus))};
  }
  pf::FracOrders frac() const { return {alpha, beta}; }
  double s_value() const {
    if (std::isnan(s)) throw pf::InvalidParams("--s is required");
    return s;
  }
  double t_value() const {
    if (std::isnan(t)) throw pf::InvalidParams("--t is required");
    return t;
  }
  /// --area, or s·t when both sides are given.
  double area_value() const {
    if (!std::isnan(area)) return area;
    if (!std::isnan(s) && !std::isnan(t)) return s * t;
    throw pf::InvalidParams("--area (or --s and --t) is required");
  }
  /// gspp family "2:0.7;-3:0.4,0.1".
  std::vector<pf::model::IndexedRates> family_value() const {
    if (family.empty()) throw pf::InvalidParams("--family is required");
    std::vector<pf::model::IndexedRates> out;
    for (const auto& group : pf::cli::split(family, ';')) {
      const auto parts = pf::cli::split(group, ':');
      if (parts.size() != 2) throw pf::InvalidParams("--family groups look like index:rate,rate");
      out.push_back({pf::cli::parse_double(parts[0]), pf::RateVector(pf::cli::parse_list(parts[1]))});
    }
    return out;
  }

  json to_json() const {
    json j = json::object();
    if (!rates.empty()) j["rates"] = pf::cli::parse_list(rates);
    if (!plus.empty()) j["plus"] = pf::cli::parse_list(plus);
    if (!minus.empty()) j["minus"] = pf::cli::parse_list(minus);
    if (!family.empty()) j["family"] = family;
    if (!std::isnan(area)) j["area"] = area;
    if (!std::isnan(s)) j["s"] = s;
    if (!std::isnan(t)) j["t"] = t;
    j["alpha"] = alpha;
    j["beta"] = beta;
    return j;
  }
};

void add_process_options(CLI::App* cmd, ProcessArgs& a) {
  cmd->add_option("--rates", a.rates, "Batch rates lambda_1,...,lambda_k");
  cmd->add_option("--plus", a.plus, "Rates of the positive batches (skellam, fgspp)");
  cmd->add_option("--minus", a.minus, "Rates of the negative batches (skellam, fgspp)");
  cmd->add_option("--family", a.family, "gspp index set, e.g. 2:0.7;-3:0.4");
  cmd->add_option("--area", a.area, "Window measure |A|");
  cmd->add_option("--s", a.s, "First side of the rectangle [0,s]x[0,t]");
  cmd->add_option("--t", a.t, "Second side of the rectangle");
  cmd->add_option("--alpha", a.alpha, "Order of the first clock, in (0,1]")->capture_default_str();
  cmd->add_option("--beta", a.beta, "Order of the second clock, in (0,1]")->capture_default_str();
}

struct Output {
  std::string format = "csv";
  std::string path;  // empty: stdout
};

void add_output_options(CLI::App* cmd, Output& o, const std::string& default_format) {
  o.format = default_format;
  cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  cmd->add_option("--out", o.path, "Write to this file instead of stdout");
}

void emit(const Output& o, const std::string& text) {
  if (o.path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(o.path, std::ios::binary);
  if (!f) throw pf::InvalidParams("cannot open output file " + o.path);
  f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------- pmf

struct PmfCommand {
  std::string process;
  ProcessArgs args;
  std::string range;
  double tol = 1e-10;
  Output out;
};

/// Certified table plus direct evaluation for rows outside it.
struct PmfSource {
  pf::PmfTable table;
  std::function<double(long)> direct;
};

PmfSource pmf_source(const std::string& process, const ProcessArgs& a, double tol) {
  PmfSource src;
  if (process == "gprf") {
    const auto rates = a.rate_vector();
    const double area = a.area_value();
    src.table = pf::model::gprf_table(rates, area, tol);
    src.direct = [rates, area](long n) { return pf::model::gprf_pmf(rates, area, n); };
  } else if (process == "fgprf") {
    auto m = std::make_shared<pf::model::FgprfModel>(a.rate_vector(), a.frac(), a.s_value(), a.t_value());
    src.table = m->table(tol);
    src.direct = [m, tol](long n) {
      const auto v = m->pmf(n);
      if (v.error_bound > tol) throw pf::NonConvergence("fgprf pmf error bound exceeds --tol");
      return v.value;
    };
  } else if (process == "skellam") {
    auto m = std::make_shared<pf::model::SkellamModel>(a.skellam(), a.area_value());
    src.table = m->table(tol);
    src.direct = [m](long n) { return m->pmf(n).value; };
  } else if (process == "fgspp") {
    auto m = std::make_shared<pf::model::FgsppModel>(a.skellam(), a.frac(), a.s_value(), a.t_value());
    src.table = m->table(tol);
    src.direct = [m, tol](long n) {
      const auto v = m->pmf(n);
      if (v.error_bound > tol) throw pf::NonConvergence("fgspp pmf error bound exceeds --tol");
      return v.value;
    };
  } else {
    throw pf::InvalidParams("unknown process " + process);
  }
  if (src.table.value_error_bound > tol) throw pf::NonConvergence("pmf table error bound exceeds --tol");
  return src;
}

int run_pmf(const PmfCommand& c) {
  const PmfSource src = pmf_source(c.process, c.args, c.tol);
  const auto& tab = src.table;
  long lo = tab.first;
  long hi = tab.last();
  if (!c.range.empty()) std::tie(lo, hi) = pf::cli::parse_range(c.range);
  // Mass outside the printed rows: table entries off the range plus the certified remainder.
  double tail = tab.tail_mass_bound + tab.value_error_bound;
  for (long n = tab.first; n <= tab.last(); ++n) {
    if (n < lo || n > hi) tail += tab(n);
  }
  std::vector<std::pair<long, double>> rows;
  for (long n = lo; n <= hi; ++n) {
    rows.emplace_back(n, (n >= tab.first && n <= tab.last()) ? tab(n) : src.direct(n));
  }
  if (c.out.format == "csv") {
    std::ostringstream o;
    o << "n,probability,tail_bound\n";
    for (const auto& [n, p] : rows) {
      o << n << ',' << pf::cli::format_double(p) << ',' << pf::cli::format_double(tail) << '\n';
    }
    emit(c.out, o.str());
  } else {
    json j;
    j["schema"] = "poisson-fields/pmf";
    j["schema_version"] = kSchemaVersion;
    j["process"] = c.process;
    j["parameters"] = c.args.to_json();
    j["tolerance"] = c.tol;
    j["rows"] = json::array();
    for (const auto& [n, p] : rows) j["rows"].push_back({{"n", n}, {"probability", p}, {"tail_bound", tail}});
    j["tail_bound"] = tail;
    emit(c.out, dump(j));
  }
  return pf::cli::kOk;
}

// ---------------------------------------------------------------- moments

struct MomentsCommand {
  std::string process;
  ProcessArgs args;
  Output out;
};

int run_moments(const MomentsCommand& c) {
  pf::model::Moments m;
  const auto& a = c.args;
  if (c.process == "gprf") {
    m = pf::model::gprf_moments(a.rate_vector(), a.area_value());
  } else if (c.process == "fgprf") {
    m = pf::model::fgprf_moments(a.rate_vector(), a.frac(), a.s_value(), a.t_value());
  } else if (c.process == "skellam") {
    m = pf::model::FgsppModel(a.skellam(), pf::FracOrders{}, a.area_value(), 1.0).moments();
  } else if (c.process == "fgspp") {
    m = pf::model::FgsppModel(a.skellam(), a.frac(), a.s_value(), a.t_value()).moments();
  } else if (c.process == "integral") {
    m = pf::model::integral_moments(a.rate_vector(), a.s_value(), a.t_value());
  } else {
    throw pf::InvalidParams("unknown process " + c.process);
  }
  if (c.out.format == "csv") {
    emit(c.out, "mean,variance\n" + pf::cli::format_double(m.mean) + "," + pf::cli::format_double(m.variance) + "\n");
  } else {
    json j;
    j["schema"] = "poisson-fields/moments";
    j["schema_version"] = kSchemaVersion;
    j["process"] = c.process;
    j["parameters"] = a.to_json();
    j["mean"] = m.mean;
    j["variance"] = m.variance;
    emit(c.out, dump(j));
  }
  return pf::cli::kOk;
}

// ---------------------------------------------------------------- simulate

struct SimulateCommand {
  std::string process;
  ProcessArgs args;
  std::size_t samples = 0;
  std::string seed;
  unsigned threads = 0;
  std::string method = "superposition";
  std::string variant = "gprf";
  long lattice_n = 0;
  Output out;
  std::string manifest;
};

struct Draw {
  std::function<double(pf::sim::RngStream&)> fn;
  bool real_valued = false;
};

Draw make_draw(const SimulateCommand& c) {
  const auto& a = c.args;
  const auto method = c.method == "compound" ? pf::sim::GprfMethod::compound : pf::sim::GprfMethod::superposition;
  const std::string& p = c.process;
  if (p == "prf") {
    const auto rates = a.rate_vector();
    if (rates.k() != 1) throw pf::InvalidParams("prf takes a single rate");
    const double area = a.area_value();
    return {[=](pf::sim::RngStream& r) { return double(pf::sim::sample_prf(rates[0], area, r)); }, false};
  }
  if (p == "gprf") {
    const auto rates = a.rate_vector();
    const double area = a.area_value();
    return {[=](pf::sim::RngStream& r) { return double(pf::sim::sample_gprf(rates, area, r, method)); }, false};
  }
  if (p == "fgprf") {
    const auto rates = a.rate_vector();
    const auto fr = a.frac();
    const double s = a.s_value();
    const double t = a.t_value();
    return {[=](pf::sim::RngStream& r) { return double(pf::sim::sample_fgprf(rates, fr, s, t, r, method)); }, false};
  }
  if (p == "skellam") {
    const auto rates = a.skellam();
    const double area = a.area_value();
    return {[=](pf::sim::RngStream& r) { return double(pf::sim::sample_skellam(rates, area, r)); }, false};
  }
  if (p == "gspp") {
    const auto fam = a.family_value();
    const double area = a.area_value();
    bool integral_indices = true;
    for (const auto& f : fam) integral_indices = integral_indices && f.index == std::round(f.index);
    return {[=](pf::sim::RngStream& r) { return pf::sim::sample_gspp(fam, area, r); }, !integral_indices};
  }
  if (p == "fgspp") {
    const auto rates = a.skellam();
    const auto fr = a.frac();
    const double s = a.s_value();
    const double t = a.t_value();
    return {[=](pf::sim::RngStream& r) { return double(pf::sim::sample_fgspp(rates, fr, s, t, r)); }, false};
  }
  if (p == "integral") {
    const auto rates = a.rate_vector();
    const double s = a.s_value();
    const double t = a.t_value();
    return {[=](pf::sim::RngStream& r) { return pf::sim::sample_gprf_integral(rates, s, t, r); }, true};
  }
  if (p == "stable") {
    const double alpha = a.alpha;
    const double t = a.t_value();
    return {[=](pf::sim::RngStream& r) { return pf::sim::sample_stable_subordinator(alpha, t, r); }, true};
  }
  if (p == "inverse-stable") {
    const double alpha = a.alpha;
    const double t = a.t_value();
    return {[=](pf::sim::RngStream& r) { return pf::sim::sample_inverse_stable(alpha, t, r); }, true};
  }
  if (p == "lattice") {
    if (c.lattice_n < 1) throw pf::InvalidParams("lattice needs --lattice-n >= 1");
    const auto cfg = c.variant == "skellam" ? pf::sim::lattice_skellam(a.skellam(), c.lattice_n)
                                            : pf::sim::lattice_gprf(a.rate_vector(), c.lattice_n);
    const double s = a.s_value();
    const double t = a.t_value();
    pf::sim::lattice_cells(cfg, s, t);
    return {[=](pf::sim::RngStream& r) { return double(pf::sim::sample_lattice_field(cfg, s, t, r)); }, false};
  }
  throw pf::InvalidParams("unknown process " + p);
}

std::string format_samples(const SimulateCommand& c, const std::vector<double>& xs, bool real_valued) {
  auto fmt = [&](double v) { return real_valued ? pf::cli::format_double(v) : std::to_string(static_cast<long>(v)); };
  if (c.out.format == "csv") {
    std::string text = "sample\n";
    for (double v : xs) text += fmt(v) + "\n";
    return text;
  }
  json j;
  j["schema"] = "poisson-fields/samples";
  j["schema_version"] = kSchemaVersion;
  j["process"] = c.process;
  j["real_valued"] = real_valued;
  j["samples"] = json::array();
  for (double v : xs) {
    if (real_valued) {
      j["samples"].push_back(v);
    } else {
      j["samples"].push_back(static_cast<long>(v));
    }
  }
  return dump(j);
}

/// Primary output of `simulate`; identical for every thread count.
std::string simulate_output(const SimulateCommand& c, std::uint64_t seed) {
  if (c.samples < 1) throw pf::InvalidParams("--samples must be >= 1");
  const Draw d = make_draw(c);
  const auto xs = pf::sim::run_batches<double>(c.samples, seed, d.fn, c.threads);
  return format_samples(c, xs, d.real_valued);
}

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Arguments with the resolved seed made explicit, so a replay does not
/// depend on the environment.
std::vector<std::string> replay_argv(const std::vector<std::string>& argv, std::uint64_t seed) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < argv.size(); ++i) {
    if (argv[i] == "--seed") {
      ++i;
      continue;
    }
    if (argv[i].rfind("--seed=", 0) == 0) continue;
    out.push_back(argv[i]);
  }
  out.push_back("--seed");
  out.push_back(std::to_string(seed));
  return out;
}

int run_simulate(const SimulateCommand& c, const std::vector<std::string>& argv) {
  const std::uint64_t seed = pf::cli::resolve_seed(c.seed);
  const auto start = std::chrono::steady_clock::now();
  const std::string text = simulate_output(c, seed);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  emit(c.out, text);

  std::string manifest_path = c.manifest;
  if (manifest_path.empty() && !c.out.path.empty()) manifest_path = c.out.path + ".manifest.json";
  if (manifest_path.empty()) return pf::cli::kOk;
  json m;
  m["schema"] = "poisson-fields/manifest";
  m["schema_version"] = kSchemaVersion;
  m["command"] = "simulate";
  m["process"] = c.process;
  m["argv"] = replay_argv(argv, seed);
  json params = c.args.to_json();
  params["samples"] = c.samples;
  params["method"] = c.method;
  if (c.process == "lattice") {
    params["variant"] = c.variant;
    params["lattice_n"] = c.lattice_n;
  }
  params["format"] = c.out.format;
  m["parameters"] = params;
  m["seed"] = seed;
  m["threads"] = c.threads == 0 ? pf::sim::default_threads() : c.threads;
  m["tool_version"] = pf::kVersion;
  m["started_at"] = utc_now();
  m["wall_clock_seconds"] = wall;
  m["output_path"] = c.out.path;
  m["output_digest"] = "sha256:" + pf::cli::sha256_hex(text);
  std::ofstream f(manifest_path, std::ios::binary);
  if (!f) throw pf::InvalidParams("cannot open manifest file " + manifest_path);
  f << dump(m);
  return pf::cli::kOk;
}

// ---------------------------------------------------------------- verify

struct VerifyCommand {
  std::string suite;
  std::string seed;
  std::size_t samples = 100000;
  unsigned threads = 0;
  std::string input;
  std::string process;
  ProcessArgs args;
  double tol = 1e-10;
  Output out;
};

std::vector<long> read_integer_samples(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw pf::InvalidParams("cannot open sample file " + path);
  std::vector<long> xs;
  std::string line;
  bool first = true;
  while (std::getline(f, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first && line == "sample") {
      first = false;
      continue;
    }
    first = false;
    xs.push_back(pf::cli::parse_long(line));
  }
  return xs;
}

int run_verify(const VerifyCommand& c) {
  const std::uint64_t seed = pf::cli::resolve_seed(c.seed);
  std::vector<pf::verify::CheckResult> checks;
  if (c.suite == "gof") {
    if (c.input.empty() || c.process.empty()) throw pf::InvalidParams("verify gof needs --input and --process");
    const auto xs = read_integer_samples(c.input);
    const auto src = pmf_source(c.process, c.args, c.tol);
    const auto g = pf::verify::chi_square_gof(xs, src.table);
    checks.push_back(pf::verify::check_above("gof/" + c.process, g.p_value, 1e-3,
                                             "chi2=" + pf::cli::format_double(g.statistic) +
                                                 " dof=" + std::to_string(g.dof) + " bins=" + g.bins));
  } else {
    pf::verify::SuiteOptions o;
    o.seed = seed;
    o.samples = c.samples;
    o.threads = c.threads;
    checks = pf::verify::run_suite(c.suite, o);
  }
  const bool all_passed = std::all_of(checks.begin(), checks.end(), [](const auto& k) { return k.passed; });
  if (c.out.format == "csv") {
    std::ostringstream o;
    o << "name,passed,statistic,comparison,tolerance,detail\n";
    for (const auto& k : checks) {
      o << pf::cli::csv_field(k.name) << ',' << (k.passed ? "true" : "false") << ','
        << pf::cli::format_double(k.statistic) << ',' << k.comparison << ',' << pf::cli::format_double(k.tolerance)
        << ',' << pf::cli::csv_field(k.detail) << '\n';
    }
    emit(c.out, o.str());
  } else {
    json j;
    j["schema"] = "poisson-fields/verify-report";
    j["schema_version"] = kSchemaVersion;
    j["suite"] = c.suite;
    j["seed"] = seed;
    j["samples"] = c.samples;
    j["passed"] = all_passed;
    j["checks"] = json::array();
    for (const auto& k : checks) {
      j["checks"].push_back({{"name", k.name},
                             {"passed", k.passed},
                             {"statistic", std::isfinite(k.statistic) ? json(k.statistic) : json(nullptr)},
                             {"comparison", k.comparison},
                             {"tolerance", k.tolerance},
                             {"detail", k.detail}});
    }
    emit(c.out, dump(j));
  }
  return all_passed ? pf::cli::kOk : pf::cli::kVerificationFailed;
}

// ---------------------------------------------------------------- app

struct AppState {
  CLI::App app{"Poisson random fields: exact pmfs, sampling, and verification"};
  PmfCommand pmf;
  MomentsCommand moments;
  SimulateCommand simulate;
  VerifyCommand verify;
  std::string replay_manifest;
  CLI::App* pmf_cmd = nullptr;
  CLI::App* moments_cmd = nullptr;
  CLI::App* simulate_cmd = nullptr;
  CLI::App* verify_cmd = nullptr;
  CLI::App* replay_cmd = nullptr;
};

void build_app(AppState& st) {
  auto& app = st.app;
  app.require_subcommand(1);
  app.set_version_flag("--version", pf::kVersion);

  st.pmf_cmd = app.add_subcommand("pmf", "Probability table of a process");
  st.pmf_cmd->add_option("process", st.pmf.process, "gprf | fgprf | skellam | fgspp")
      ->required()
      ->check(CLI::IsMember({"gprf", "fgprf", "skellam", "fgspp"}));
  add_process_options(st.pmf_cmd, st.pmf.args);
  st.pmf_cmd->add_option("--n", st.pmf.range, "Value or range lo..hi (default: the certified support)");
  st.pmf_cmd->add_option("--tol", st.pmf.tol, "Tail and evaluation tolerance")->capture_default_str();
  add_output_options(st.pmf_cmd, st.pmf.out, "csv");

  st.moments_cmd = app.add_subcommand("moments", "Closed-form mean and variance");
  st.moments_cmd->add_option("process", st.moments.process, "gprf | fgprf | skellam | fgspp | integral")
      ->required()
      ->check(CLI::IsMember({"gprf", "fgprf", "skellam", "fgspp", "integral"}));
  add_process_options(st.moments_cmd, st.moments.args);
  add_output_options(st.moments_cmd, st.moments.out, "csv");

  st.simulate_cmd = app.add_subcommand("simulate", "Seeded Monte Carlo samples with a run manifest");
  st.simulate_cmd
      ->add_option("process", st.simulate.process,
                   "prf | gprf | fgprf | skellam | gspp | fgspp | integral | stable | inverse-stable | lattice")
      ->required()
      ->check(CLI::IsMember(
          {"prf", "gprf", "fgprf", "skellam", "gspp", "fgspp", "integral", "stable", "inverse-stable", "lattice"}));
  add_process_options(st.simulate_cmd, st.simulate.args);
  st.simulate_cmd->add_option("--samples", st.simulate.samples, "Number of draws")->required();
  st.simulate_cmd->add_option("--seed", st.simulate.seed, "Seed (default: $POISSON_FIELDS_SEED or 20240601)");
  st.simulate_cmd->add_option("--threads", st.simulate.threads, "Worker threads (0: hardware)");
  st.simulate_cmd->add_option("--method", st.simulate.method, "GPRF construction")
      ->check(CLI::IsMember({"superposition", "compound"}))
      ->capture_default_str();
  st.simulate_cmd->add_option("--variant", st.simulate.variant, "Lattice variant")
      ->check(CLI::IsMember({"gprf", "skellam"}))
      ->capture_default_str();
  st.simulate_cmd->add_option("--lattice-n", st.simulate.lattice_n, "Lattice scale n");
  st.simulate_cmd->add_option("--manifest", st.simulate.manifest, "Manifest path (default: <out>.manifest.json)");
  add_output_options(st.simulate_cmd, st.simulate.out, "csv");

  st.verify_cmd = app.add_subcommand("verify", "Run a verification suite, or a GOF test on a sample file");
  std::vector<std::string> suites = pf::verify::suite_names();
  suites.push_back("all");
  suites.push_back("gof");
  st.verify_cmd->add_option("suite", st.verify.suite, "reductions | thinning | representations | odes | "
                                                       "fractional | skellam | convergence | all | gof")
      ->required()
      ->check(CLI::IsMember(suites));
  st.verify_cmd->add_option("--seed", st.verify.seed, "Seed (default: $POISSON_FIELDS_SEED or 20240601)");
  st.verify_cmd->add_option("--samples", st.verify.samples, "Monte Carlo sample size per check")->capture_default_str();
  st.verify_cmd->add_option("--threads", st.verify.threads, "Worker threads (0: hardware)");
  st.verify_cmd->add_option("--input", st.verify.input, "Sample file for gof");
  st.verify_cmd->add_option("--process", st.verify.process, "Process of the sample file for gof")
      ->check(CLI::IsMember({"gprf", "fgprf", "skellam", "fgspp"}));
  st.verify_cmd->add_option("--tol", st.verify.tol, "Tail tolerance of the gof reference table")->capture_default_str();
  add_process_options(st.verify_cmd, st.verify.args);
  add_output_options(st.verify_cmd, st.verify.out, "json");

  st.replay_cmd = app.add_subcommand("replay", "Re-run a simulate manifest and compare output digests");
  st.replay_cmd->add_option("manifest", st.replay_manifest, "Manifest JSON file")->required();
}

int run_replay(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw pf::InvalidParams("cannot open manifest " + path);
  json m;
  try {
    m = json::parse(f);
  } catch (const json::exception& e) {
    throw pf::InvalidParams(std::string("manifest is not valid JSON: ") + e.what());
  }
  if (m.value("schema", "") != "poisson-fields/manifest") throw pf::InvalidParams("not a poisson-fields manifest");
  auto args = m.at("argv").get<std::vector<std::string>>();
  AppState st;
  build_app(st);
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  st.app.parse(reversed);
  if (!st.app.got_subcommand(st.simulate_cmd)) throw pf::InvalidParams("manifest does not describe a simulate run");
  const std::string text = simulate_output(st.simulate, pf::cli::resolve_seed(st.simulate.seed));
  const std::string digest = "sha256:" + pf::cli::sha256_hex(text);
  const bool match = digest == m.at("output_digest").get<std::string>();
  json r;
  r["schema"] = "poisson-fields/replay";
  r["schema_version"] = kSchemaVersion;
  r["manifest"] = path;
  r["expected_digest"] = m.at("output_digest");
  r["actual_digest"] = digest;
  r["match"] = match;
  std::cout << dump(r);
  return match ? pf::cli::kOk : pf::cli::kVerificationFailed;
}

}  // namespace

int main(int argc, char** argv) {
  AppState st;
  build_app(st);
  try {
    st.app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = st.app.exit(e);
    return code == 0 ? pf::cli::kOk : pf::cli::kUsage;
  }
  const std::vector<std::string> args(argv + 1, argv + argc);
  try {
    if (st.app.got_subcommand(st.pmf_cmd)) return run_pmf(st.pmf);
    if (st.app.got_subcommand(st.moments_cmd)) return run_moments(st.moments);
    if (st.app.got_subcommand(st.simulate_cmd)) return run_simulate(st.simulate, args);
    if (st.app.got_subcommand(st.verify_cmd)) return run_verify(st.verify);
    if (st.app.got_subcommand(st.replay_cmd)) return run_replay(st.replay_manifest);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return pf::cli::kUsage;
  } catch (const pf::NonConvergence& e) {
    std::cerr << "error: non-convergence: " << e.what() << "\n";
    return pf::cli::kNonConvergence;
  } catch (const pf::QuadratureFailure& e) {
    std::cerr << "error: quadrature failure: " << e.what() << "\n";
    return pf::cli::kNonConvergence;
  } catch (const pf::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return pf::cli::kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return pf::cli::kUsage;
  }
  return pf::cli::kUsage;
}
