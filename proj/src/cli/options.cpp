#include "cli/options.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>

#include "cli/report_json.hpp"
#include "gesim/cli.hpp"
#include "gesim/error.hpp"
#include "gesim/fading.hpp"

namespace gesim::cli {

std::string_view tool_version() { return "0.1.0"; }

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

Json Manifest::to_json() const {
  return Json{{"command", command},
              {"config", config},
              {"tool_version", std::string(tool_version())},
              {"master_seed", master_seed},
              {"outputs", outputs}};
}

std::string Manifest::csv_comment() const { return "# manifest: " + to_json().dump() + "\n"; }

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ArgumentError("cannot open output file '" + path + "'");
  f << content;
  if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

namespace {

Json load_config_document(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ArgumentError("cannot read config file '" + path + "'");
  const std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  constexpr std::string_view kPrefix = "# manifest: ";
  Json doc;
  try {
    if (text.starts_with(kPrefix)) {
      const auto eol = text.find('\n');
      doc = Json::parse(text.substr(kPrefix.size(), eol == std::string::npos ? std::string::npos : eol - kPrefix.size()));
    } else {
      doc = Json::parse(text);
    }
  } catch (const Json::parse_error& e) {
    throw ArgumentError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  if (!doc.is_object()) throw ArgumentError("config file '" + path + "' must hold a JSON object");
  if (doc.contains("manifest")) doc = doc["manifest"];
  return doc;
}

bool has_flag(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(),
                     [&](const std::string& a) { return a == flag || a.starts_with(flag + "="); });
}

std::string scalar_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return format_number(v.get<double>());
  return v.dump();
}

// Keys that must not be filled from a file when the command line sets a rival.
const std::vector<std::pair<std::string, std::string>> kRivals = {
    {"fd-ts", "mu"}, {"fd-ts", "epsilon"}, {"mu", "fd-ts"}, {"epsilon", "fd-ts"},
    {"exact", "bound"}, {"bound", "exact"}};

}  // namespace

std::vector<std::string> merge_config_file(const std::vector<std::string>& args) {
  std::vector<std::string> kept;
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw ArgumentError("--config needs a file name");
      path = args[++i];
    } else if (args[i].starts_with("--config=")) {
      path = args[i].substr(9);
    } else {
      kept.push_back(args[i]);
    }
  }
  if (!path) return kept;

  Json doc = load_config_document(*path);
  Json settings = doc;
  if (doc.contains("config") && doc["config"].is_object()) {
    settings = doc["config"];
    if (doc.contains("command") && doc["command"].is_string() && (kept.empty() || kept.front().starts_with("-"))) {
      kept.insert(kept.begin(), doc["command"].get<std::string>());
    }
  }

  const std::vector<std::string> given = kept;
  for (const auto& [key, value] : settings.items()) {
    if (key == "target") {
      // Positional argument of `reproduce`.
      if (kept.size() < 2 || kept[1].starts_with("-")) kept.insert(kept.begin() + std::min<std::size_t>(1, kept.size()), scalar_text(value));
      continue;
    }
    const std::string flag = "--" + key;
    if (has_flag(given, flag)) continue;
    const bool rival_given = std::any_of(kRivals.begin(), kRivals.end(), [&](const auto& r) {
      return r.second == key && has_flag(given, "--" + r.first);
    });
    if (rival_given) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) kept.push_back(flag);
    } else if (value.is_array()) {
      for (const auto& v : value) {
        kept.push_back(flag);
        kept.push_back(scalar_text(v));
      }
    } else if (!value.is_null()) {
      kept.push_back(flag);
      kept.push_back(scalar_text(value));
    }
  }
  return kept;
}

const CLI::Validator& fading_rate_validator() {
  static const CLI::Validator v(
      [](std::string& text) -> std::string {
        double x = 0.0;
        try {
          std::size_t used = 0;
          x = std::stod(text, &used);
          if (used != text.size()) return "not a number: " + text;
        } catch (const std::exception&) {
          return "not a number: " + text;
        }
        if (!(x > 0.0 && x <= 0.01)) return "normalized fading rate must lie in (0, 0.01]";
        return {};
      },
      "in (0, 0.01]");
  return v;
}

void add_channel_flags(CLI::App& app, ChannelFlags& flags) {
  flags.mu_opt = app.add_option("--mu", flags.mu, "Bad->Good transition probability");
  flags.epsilon_opt = app.add_option("--epsilon", flags.epsilon, "Good->Bad transition probability");
  auto* fd = app.add_option("--fd-ts", flags.fd_ts, "estimate (mu, epsilon) from a Jakes trace at this f_d*T_s")
                 ->check(fading_rate_validator());
  fd->excludes(flags.mu_opt)->excludes(flags.epsilon_opt);
  app.add_option("--p-good", flags.p_good, "Good-state crossover (default Q(sqrt(2 Eb/N0)))")
      ->check(CLI::Range(0.0, 0.5));
  app.add_option("--p-bad", flags.p_bad, "Bad-state crossover")->capture_default_str()->check(CLI::Range(0.0, 0.5));
  app.add_option("--ebn0-db", flags.ebn0_db, "Eb/N0 in dB for the default p_good")->capture_default_str();
  app.add_option("--samples", flags.samples, "trace length for --fd-ts")
      ->capture_default_str()
      ->check(CLI::Range(std::size_t{1'000'000}, std::numeric_limits<std::size_t>::max()));
  app.add_option("--fading-seed", flags.fading_seed, "seed of the Jakes trace for --fd-ts")->capture_default_str();
}

ResolvedChannel resolve_channel(const ChannelFlags& flags, std::ostream& err) {
  ResolvedChannel r;
  r.params.p_good = flags.p_good.value_or(default_p_good(flags.ebn0_db));
  r.params.p_bad = flags.p_bad;
  if (flags.fd_ts) {
    FadingConfig fc;
    fc.normalized_fading_rate = *flags.fd_ts;
    fc.trace_length = flags.samples;
    fc.seed = flags.fading_seed;
    for (const auto& w : fc.validate()) err << "warning: " << w << '\n';
    const auto trace = generate_trace(fc);
    const auto states = quantize(trace, fc.amplitude_threshold);
    const auto est = estimate_ge_params(states);
    r.params.mu = est.mu;
    r.params.epsilon = est.epsilon;
    r.config["fd-ts"] = *flags.fd_ts;
    r.config["samples"] = flags.samples;
    r.config["fading-seed"] = flags.fading_seed;
    r.estimation = Json{{"fd_ts", *flags.fd_ts}, {"samples", flags.samples}, {"mu", est.mu}, {"epsilon", est.epsilon}};
  } else {
    if (flags.mu_opt->count() == 0 || flags.epsilon_opt->count() == 0) {
      throw ArgumentError("give --mu and --epsilon, or --fd-ts");
    }
    r.params.mu = flags.mu;
    r.params.epsilon = flags.epsilon;
    r.config["mu"] = flags.mu;
    r.config["epsilon"] = flags.epsilon;
  }
  r.config["p-good"] = r.params.p_good;
  r.config["p-bad"] = r.params.p_bad;
  r.config["ebn0-db"] = flags.ebn0_db;
  r.params.validate();
  return r;
}

}  // namespace gesim::cli
