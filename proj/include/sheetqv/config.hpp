#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "sheetqv/mc.hpp"
#include "sheetqv/rng.hpp"

namespace sheetqv {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat key/value run configuration. Every key is optional at parse time;
/// the requirements of a subcommand are checked by require_*().
///
/// Campaign keys: experiment, n_list, refinement_r (16), N, sigma_name,
/// f_name, drift_name ("zero"), point_s (1), point_t (1), alpha (0.05),
/// master_seed (0), gates (true), deltas, eps_list.
/// Output keys: workers (0 = all cores), summary_json ("summary.json"),
/// reports_csv ("reports.csv").
/// Sheet dump keys: grid_m, stream_index (0), sheet_role ("driving_W"),
/// dump_path ("sheet.bin").
struct Config {
  CampaignSpec spec;
  bool has_experiment = false;
  bool has_n_list = false;
  bool has_replicates = false;

  unsigned workers = 0;
  std::string summary_json = "summary.json";
  std::string reports_csv = "reports.csv";

  std::optional<std::size_t> grid_m;
  std::uint64_t stream_index = 0;
  SheetRole sheet_role = SheetRole::driving_W;
  std::string dump_path = "sheet.bin";

  /// Checks the keys `simulate` needs, then validates the campaign.
  void require_campaign(const FunctionRegistry& registry) const;
  /// Checks the keys `dump-sheet` needs.
  void require_dump() const;

  SeedSpec dump_seed() const;
};

/// Parses a flat JSON object. Unknown keys and ill-typed values throw
/// ConfigError naming the key.
Config parse_config(std::string_view json_text);
Config load_config(const std::filesystem::path& path);

}  // namespace sheetqv
