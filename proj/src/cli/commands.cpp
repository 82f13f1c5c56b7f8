#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "cli/options.hpp"
#include "cli/report_json.hpp"
#include "gesim/bounds.hpp"
#include "gesim/cli.hpp"
#include "gesim/csicodec.hpp"
#include "gesim/error.hpp"
#include "gesim/exactdist.hpp"
#include "gesim/fading.hpp"
#include "gesim/harness.hpp"

namespace gesim::cli {

namespace {

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

// ---- estimate-channel -----------------------------------------------------

struct EstimateFlags {
  std::vector<double> fd_ts{0.002, 0.005, 0.008};
  std::size_t samples = 10'000'000;
  double threshold = 1.0;
  std::size_t oscillators = 16;
  std::uint64_t seed = 1;
  std::string out;
};

void add_estimate(CLI::App& app, EstimateFlags& f) {
  app.add_option("--fd-ts", f.fd_ts, "normalized fading rates")->capture_default_str()->check(fading_rate_validator());
  app.add_option("--samples", f.samples, "trace length per rate")
      ->capture_default_str()
      ->check(CLI::Range(std::size_t{1'000'000}, std::numeric_limits<std::size_t>::max()));
  app.add_option("--threshold", f.threshold, "amplitude threshold")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--oscillators", f.oscillators, "sinusoids per branch")
      ->capture_default_str()
      ->check(CLI::Range(std::size_t{8}, std::size_t{1} << 20));
  app.add_option("--seed", f.seed, "master seed; rate i uses a derived stream")->capture_default_str();
  app.add_option("--out", f.out, "CSV output file (default stdout)");
}

int run_estimate(const EstimateFlags& f, Streams io) {
  Manifest manifest;
  manifest.command = "estimate-channel";
  manifest.master_seed = f.seed;
  manifest.config = Json{{"fd-ts", f.fd_ts},
                         {"samples", f.samples},
                         {"threshold", f.threshold},
                         {"oscillators", f.oscillators},
                         {"seed", f.seed}};
  if (!f.out.empty()) manifest.outputs.push_back(f.out);

  std::ostringstream csv;
  csv << manifest.csv_comment() << "fd_ts,epsilon,mu,rho_128,rho_256,note\n";
  for (std::size_t i = 0; i < f.fd_ts.size(); ++i) {
    FadingConfig fc;
    fc.normalized_fading_rate = f.fd_ts[i];
    fc.amplitude_threshold = f.threshold;
    fc.oscillator_count = f.oscillators;
    fc.trace_length = f.samples;
    fc.seed = derive_seed(f.seed, i);
    for (const auto& w : fc.validate()) io.err << "warning: " << w << '\n';
    const auto states = quantize(generate_trace(fc), f.threshold);
    const auto counts = count_transitions(states);
    std::string eps = "", mu = "", note = "";
    if (counts.good_origins > 0) {
      eps = format_number(static_cast<double>(counts.good_to_bad) / static_cast<double>(counts.good_origins));
    }
    if (counts.bad_origins > 0) {
      mu = format_number(static_cast<double>(counts.bad_to_good) / static_cast<double>(counts.bad_origins));
    }
    try {
      (void)estimate_ge_params(states);
    } catch (const EstimationError& e) {
      note = e.what();
    }
    csv << format_number(f.fd_ts[i]) << ',' << eps << ',' << mu << ','
        << format_number(blockwise_rate(states, 128).mean) << ',' << format_number(blockwise_rate(states, 256).mean)
        << ',' << (note.empty() ? "" : "\"" + note + "\"") << '\n';
  }
  if (f.out.empty()) {
    io.out << csv.str();
  } else {
    write_file(f.out, csv.str());
    io.out << "wrote " << f.out << '\n';
  }
  return kExitOk;
}

// ---- analyze ---------------------------------------------------------------

struct AnalyzeFlags {
  std::size_t sensors = 0;
  std::size_t bits = 0;
  ChannelFlags channel;
  bool exact = false;
  bool bound = false;
  std::optional<std::size_t> bonferroni;
  std::optional<double> rho;
  std::size_t rho_trials = 20'000;
  std::uint64_t seed = 1;
  std::size_t max_exact_sensors = 5;
  unsigned threads = 0;
  std::string out;
  std::string csv;
};

void add_analyze(CLI::App& app, AnalyzeFlags& f) {
  app.add_option("--sensors", f.sensors, "N")->required()->check(CLI::Range(std::size_t{1}, std::size_t{1} << 20));
  app.add_option("--bits", f.bits, "M")->required()->check(CLI::Range(std::size_t{1}, std::size_t{1} << 30));
  add_channel_flags(app, f.channel);
  auto* ex = app.add_flag("--exact", f.exact, "exact inclusion-exclusion distribution");
  app.add_flag("--bound", f.bound, "closed-form bounds only")->excludes(ex);
  app.add_option("--bonferroni", f.bonferroni, "truncate at |w| <= 2L (lower bound on F_K)")
      ->check(CLI::PositiveNumber);
  app.add_option("--rho", f.rho, "mean CSI compression rate (default: estimated with the codec)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--rho-trials", f.rho_trials, "sequences used to estimate the rate")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", f.seed, "seed for the rate estimate")->capture_default_str();
  app.add_option("--max-exact-sensors", f.max_exact_sensors, "largest N for the full exact sum")
      ->capture_default_str()
      ->check(CLI::Range(std::size_t{1}, std::size_t{14}));
  app.add_option("--threads", f.threads, "worker threads (results do not depend on it)");
  app.add_option("--out", f.out, "JSON output file (default stdout)");
  app.add_option("--csv", f.csv, "CSV output file");
}

int run_analyze(const AnalyzeFlags& f, Streams io) {
  const auto channel = resolve_channel(f.channel, io.err);
  const std::size_t n = f.sensors;
  const std::size_t m = f.bits;
  const std::vector<ChannelParams> params(n, channel.params);

  Json rho_json;
  double rho = 0.0;
  if (f.rho) {
    rho = *f.rho;
    rho_json = Json{{"value", rho}, {"source", "flag"}};
  } else {
    const auto est = mean_rate(channel.params, m, f.rho_trials, f.seed);
    rho = est.mean;
    rho_json = Json{{"value", rho}, {"source", "codec simulation"}, {"estimate", est}};
  }

  const bool want_exact = !f.bound && (f.exact || f.bonferroni || n <= f.max_exact_sensors);
  if (want_exact && !f.bonferroni && n > f.max_exact_sensors) {
    throw CapacityError("exact analysis for N=" + std::to_string(n) + " exceeds --max-exact-sensors=" +
                        std::to_string(f.max_exact_sensors) + "; rerun with --bound (or --bonferroni L)");
  }

  Manifest manifest;
  manifest.command = "analyze";
  manifest.master_seed = f.seed;
  manifest.config = Json{{"sensors", n}, {"bits", m}};
  manifest.config.update(channel.config);
  manifest.config["exact"] = want_exact;
  manifest.config["bound"] = !want_exact;
  if (f.bonferroni) manifest.config["bonferroni"] = *f.bonferroni;
  if (f.rho) manifest.config["rho"] = *f.rho;
  manifest.config["rho-trials"] = f.rho_trials;
  manifest.config["seed"] = f.seed;
  manifest.config["max-exact-sensors"] = f.max_exact_sensors;
  if (!f.out.empty()) manifest.outputs.push_back(f.out);
  if (!f.csv.empty()) manifest.outputs.push_back(f.csv);

  const auto bounds = evaluate_bounds(channel.params, m, n, rho);

  Json doc;
  doc["manifest"] = manifest.to_json();
  doc["channel"] = channel.params;
  if (!channel.estimation.is_null()) doc["estimation"] = channel.estimation;
  doc["n_sensors"] = n;
  doc["n_bits"] = m;
  doc["rho_bar"] = rho_json;
  doc["bounds"] = bounds;
  doc["bound_efficiency"] = efficiency(n, m, rho, bounds.ek_upper);
  doc["bound_note"] = "n0 applies to the monotonicity of the E[K] bound, not to exact E[K]";

  std::ostringstream csv;
  csv << manifest.csv_comment();
  if (want_exact) {
    ExactLimits limits;
    limits.max_sensors_full = f.max_exact_sensors;
    limits.threads = f.threads;
    ExactAnalyzer analyzer(params, m, limits);
    KDistribution dist;
    dist.n_sensors = n;
    dist.n_bits = m;
    std::vector<CmfValue> terms;
    for (std::size_t k = 1; k <= n; ++k) {
      terms.push_back(analyzer.cmf(k, f.bonferroni));
      if (terms.back().clamped) io.err << "warning: F_K(" << k << ") raw value " << terms.back().raw << " clamped\n";
    }
    dist.raw_cmf.resize(n);
    for (std::size_t k = 0; k < n; ++k) dist.raw_cmf[k] = terms[k].value;
    dist.cmf = dist.raw_cmf;
    dist.cmf[n - 1] = 1.0;
    dist.pmf.resize(n);
    double below = 0.0, sum_lower = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      dist.pmf[k] = dist.cmf[k] - below;
      below = dist.cmf[k];
      if (k + 1 < n) sum_lower += dist.cmf[k];
    }
    dist.expected = static_cast<double>(n) - sum_lower;

    Json exact;
    exact["mode"] = f.bonferroni ? "bonferroni" : "full";
    if (f.bonferroni) exact["bonferroni_pairs"] = *f.bonferroni;
    exact["terms"] = terms;
    exact["distribution"] = dist;
    exact["efficiency"] = efficiency(n, m, rho, dist.expected);
    exact["cache_size"] = analyzer.cache_size();
    doc["exact"] = exact;
    write_csv(csv, dist);
  } else {
    csv << "n_sensors,n_bits,x,fk1,ek_upper,n0,rho_bar,eta_lower\n"
        << n << ',' << m << ',' << format_number(bounds.x) << ',' << format_number(bounds.fk1) << ','
        << format_number(bounds.ek_upper) << ',' << bounds.n0 << ',' << format_number(rho) << ','
        << format_number(bounds.eta_lower) << '\n';
  }

  if (!f.csv.empty()) write_file(f.csv, csv.str());
  const std::string text = doc.dump(2) + "\n";
  if (f.out.empty()) {
    io.out << text;
  } else {
    write_file(f.out, text);
    io.out << "wrote " << f.out << '\n';
  }
  return kExitOk;
}

// ---- simulate --------------------------------------------------------------

struct SimulateFlags {
  std::size_t sensors = 5;
  std::size_t bits = 128;
  ChannelFlags channel;
  std::size_t trials = 100'000;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  double distortion_threshold = 0.01;
  bool greedy = false;
  std::string out;
  std::string csv;
  std::string dump_trials;
};

void add_simulate(CLI::App& app, SimulateFlags& f) {
  app.add_option("--sensors", f.sensors, "N")->capture_default_str()->check(CLI::Range(std::size_t{1}, std::size_t{4096}));
  app.add_option("--bits", f.bits, "M")->capture_default_str()->check(CLI::Range(std::size_t{1}, std::size_t{1} << 24));
  add_channel_flags(app, f.channel);
  app.add_option("--trials", f.trials, "Monte-Carlo trials")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--seed", f.seed, "master seed")->capture_default_str();
  app.add_option("--threads", f.threads, "worker threads (results do not depend on it)");
  app.add_option("--distortion-threshold", f.distortion_threshold, "tolerable distortion")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 0.5));
  app.add_flag("--greedy", f.greedy, "greedy cover for N > 24 (not minimal)");
  app.add_option("--out", f.out, "JSON report (default stdout)");
  app.add_option("--csv", f.csv, "empirical cmf CSV");
  app.add_option("--dump-trials", f.dump_trials, "per-trial CSV");
}

int run_simulate(const SimulateFlags& f, Streams io) {
  const auto channel = resolve_channel(f.channel, io.err);
  ExperimentConfig cfg;
  cfg.n_sensors = f.sensors;
  cfg.n_bits = f.bits;
  cfg.channels = {channel.params};
  cfg.trials = f.trials;
  cfg.master_seed = f.seed;
  cfg.distortion_threshold = f.distortion_threshold;
  cfg.threads = f.threads;
  cfg.selection.allow_greedy = f.greedy;
  cfg.validate();

  Manifest manifest;
  manifest.command = "simulate";
  manifest.master_seed = f.seed;
  manifest.config = Json{{"sensors", f.sensors}, {"bits", f.bits}};
  manifest.config.update(channel.config);
  manifest.config["trials"] = f.trials;
  manifest.config["seed"] = f.seed;
  manifest.config["distortion-threshold"] = f.distortion_threshold;
  manifest.config["greedy"] = f.greedy;
  for (const auto* p : {&f.out, &f.csv, &f.dump_trials}) {
    if (!p->empty()) manifest.outputs.push_back(*p);
  }

  auto report = run_experiment(cfg, !f.dump_trials.empty());
  const auto baseline = conventional_baseline(cfg);

  if (!f.dump_trials.empty()) {
    std::ostringstream d;
    d << manifest.csv_comment() << "trial,selected_k,forced,covered,bits_phase1,bits_phase2,hamming_distortion\n";
    for (std::size_t i = 0; i < report.outcomes.size(); ++i) {
      const auto& o = report.outcomes[i];
      d << i << ',' << o.selected_k << ',' << o.forced << ',' << o.covered << ',' << o.bits_sent_phase1 << ','
        << o.bits_sent_phase2 << ',' << format_number(o.hamming_distortion) << '\n';
    }
    write_file(f.dump_trials, d.str());
    report.outcomes.clear();
  }
  if (!f.csv.empty()) {
    std::ostringstream c;
    c << manifest.csv_comment();
    write_csv(c, report);
    write_file(f.csv, c.str());
  }

  Json doc;
  doc["manifest"] = manifest.to_json();
  doc["channel"] = channel.params;
  if (!channel.estimation.is_null()) doc["estimation"] = channel.estimation;
  doc["two_phase"] = report;
  doc["baseline"] = baseline;
  doc["comparison"] = Json{{"eta", report.eta},
                           {"eta_bits", report.eta_bits},
                           {"b1", baseline.b1},
                           {"mean_b2", report.mean_bits_phase1 + report.mean_bits_phase2},
                           {"two_phase_distortion", report.distortion.mean},
                           {"baseline_distortion", baseline.distortion.mean}};
  const std::string text = doc.dump(2) + "\n";
  if (f.out.empty()) {
    io.out << text;
  } else {
    write_file(f.out, text);
    io.out << "E[K]=" << format_number(report.ek.mean) << " eta=" << format_number(report.eta)
           << " eta_bits=" << format_number(report.eta_bits) << " wrote " << f.out << '\n';
  }
  return kExitOk;
}

// ---- reproduce -------------------------------------------------------------

struct ReproduceFlags {
  std::string target;
  ReproduceOptions options;
};

void add_reproduce(CLI::App& app, ReproduceFlags& f) {
  app.add_option("target", f.target, "artifact to reproduce")->required()->check(CLI::IsMember(reproduce_targets()));
  app.add_option("--out-dir", f.options.out_dir, "directory for CSV outputs")->capture_default_str();
  app.add_option("--trials", f.options.trials, "Monte-Carlo trials per cell")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", f.options.seed, "master seed")->capture_default_str();
  app.add_option("--threads", f.options.threads, "worker threads (results do not depend on it)");
  app.add_option("--samples", f.options.samples, "Jakes trace length (table1)")
      ->capture_default_str()
      ->check(CLI::Range(std::size_t{1'000'000}, std::numeric_limits<std::size_t>::max()));
  app.add_option("--rho-trials", f.options.rho_trials, "sequences for codec rate estimates")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
}

int run_reproduce(const ReproduceFlags& f, Streams io) {
  const auto result = reproduce(f.target, f.options);
  print_checks(io.out, result);
  return result.failures() == 0 ? kExitOk : kExitTolerance;
}

}  // namespace

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  Streams io{out, err};
  CLI::App app{"Two-phase sensor selection over Gilbert-Elliott channels", "gesim"};
  app.set_version_flag("--version", std::string(tool_version()));
  app.require_subcommand(1);

  EstimateFlags estimate;
  AnalyzeFlags analyze;
  SimulateFlags simulate;
  ReproduceFlags repro;
  auto* c_est = app.add_subcommand("estimate-channel", "Jakes trace -> (epsilon, mu) and run-length rates");
  add_estimate(*c_est, estimate);
  auto* c_an = app.add_subcommand("analyze", "exact distribution of K and closed-form bounds");
  add_analyze(*c_an, analyze);
  auto* c_sim = app.add_subcommand("simulate", "Monte-Carlo run of the two-phase scheme and the baseline");
  add_simulate(*c_sim, simulate);
  auto* c_rep = app.add_subcommand("reproduce", "regenerate a table or figure and compare with expected values");
  add_reproduce(*c_rep, repro);

  try {
    auto args = merge_config_file(raw_args);
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (c_est->parsed()) return run_estimate(estimate, io);
    if (c_an->parsed()) return run_analyze(analyze, io);
    if (c_sim->parsed()) return run_simulate(simulate, io);
    if (c_rep->parsed()) return run_reproduce(repro, io);
  } catch (const CapacityError& e) {
    err << "capacity error: " << e.what() << '\n';
    return kExitCapacity;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace gesim::cli
