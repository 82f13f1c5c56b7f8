#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gesim/gechannel.hpp"

namespace gesim::cli {

using Json = nlohmann::ordered_json;

/// Shortest round-trip decimal form.
std::string format_number(double value);

struct Manifest {
  std::string command;
  Json config = Json::object();
  std::uint64_t master_seed = 0;
  std::vector<std::string> outputs;

  Json to_json() const;
  /// "# manifest: {...}" line that heads every CSV output.
  std::string csv_comment() const;
};

void write_file(const std::string& path, const std::string& content);

/// Strips "--config FILE" from the arguments and appends the file's settings
/// as flags, skipping any the command line already sets. The file may be a
/// plain object keyed by flag name, a manifest, a JSON report embedding one,
/// or a CSV whose first line is a manifest comment.
std::vector<std::string> merge_config_file(const std::vector<std::string>& args);

struct ChannelFlags {
  double mu = 0.0;
  double epsilon = 0.0;
  std::optional<double> p_good;
  double p_bad = kDefaultPBad;
  double ebn0_db = kDefaultEbN0Db;
  std::optional<double> fd_ts;
  std::size_t samples = 10'000'000;
  std::uint64_t fading_seed = 1;
  CLI::Option* mu_opt = nullptr;
  CLI::Option* epsilon_opt = nullptr;
};

void add_channel_flags(CLI::App& app, ChannelFlags& flags);

struct ResolvedChannel {
  ChannelParams params;
  Json config = Json::object();
  Json estimation;  ///< null unless --fd-ts was used
};

/// Direct (--mu/--epsilon) or estimated from a Jakes trace (--fd-ts).
ResolvedChannel resolve_channel(const ChannelFlags& flags, std::ostream& err);

/// Validator for normalized fading rates in (0, 0.01].
const CLI::Validator& fading_rate_validator();

}  // namespace gesim::cli
