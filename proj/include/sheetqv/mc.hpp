#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "sheetqv/grid.hpp"
#include "sheetqv/limit.hpp"
#include "sheetqv/registry.hpp"
#include "sheetqv/stats.hpp"
#include "sheetqv/variation.hpp"

namespace sheetqv {

enum class Experiment {
  clt_check,
  consistency_rate,
  coverage,
  variance_identity,
  strong_martingale,
  tightness,
  limit_covariance,
};

std::string_view to_string(Experiment e);
Experiment experiment_from_string(std::string_view name);
/// True for the experiments that simulate Y and need sigma_name.
bool uses_volatility(Experiment e);

inline constexpr int kSummarySchemaVersion = 1;
/// Gates run only with at least this many replicates.
inline constexpr std::size_t kMinReplicatesForGates = 100;
/// Level of the tightness trend probe.
inline constexpr double kTightnessGateEps = 2.0;

struct CampaignSpec {
  Experiment experiment = Experiment::clt_check;
  std::vector<std::size_t> n_list;
  std::size_t refinement_r = 16;
  std::size_t replicates = 0;
  std::string sigma_name;
  std::string f_name;
  std::string drift_name = "zero";
  ParamPoint point{1.0, 1.0};
  double alpha = 0.05;
  std::uint64_t master_seed = 0;
  bool gates = true;
  std::vector<double> deltas = kDefaultTightnessDeltas;
  std::vector<double> eps_list = kDefaultTightnessEps;

  /// Throws std::invalid_argument (or RegistryMiss) naming the offending
  /// field.
  void validate(const FunctionRegistry& registry) const;
};

/// Aggregated statistics for one resolution.
struct PerN {
  std::size_t n = 0;
  std::map<std::string, double> stats;
  std::vector<TightnessRow> tightness;
};

struct McSummary {
  CampaignSpec spec;
  std::vector<PerN> per_n;
  /// Campaign-wide statistics (e.g. the rate slope).
  std::map<std::string, double> overall;
  std::vector<TestVerdict> verdicts;
  /// Per-replicate estimation records, ordered by n then replicate.
  std::vector<EstimateReport> reports;
  double wall_time = 0.0;

  bool all_pass() const;
};

/// Failure of one replicate, tagged with where it happened.
class CampaignError : public std::runtime_error {
 public:
  CampaignError(const std::string& what, std::size_t n, std::size_t replicate)
      : std::runtime_error(what), n_(n), replicate_(replicate) {}
  std::size_t n() const { return n_; }
  std::size_t replicate() const { return replicate_; }

 private:
  std::size_t n_;
  std::size_t replicate_;
};

/// 0 means std::thread::hardware_concurrency().
unsigned resolve_workers(unsigned workers);

/// Evaluates fn(0), ..., fn(count - 1) on up to `workers` threads and
/// returns the results in index order. If any call throws, the exception of
/// the lowest failing index is rethrown after all threads have joined.
template <typename Fn>
auto parallel_map(std::size_t count, unsigned workers, Fn fn)
    -> std::vector<decltype(fn(std::size_t{}))> {
  using R = decltype(fn(std::size_t{}));
  std::vector<std::optional<R>> slots(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= count) return;
      try {
        slots[k].emplace(fn(k));
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const unsigned threads = static_cast<unsigned>(
      std::min<std::size_t>(resolve_workers(workers), std::max<std::size_t>(count, 1)));
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<R> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

/// Runs every replicate of every n and aggregates in replicate order. The
/// summary (apart from wall_time) does not depend on `workers`.
McSummary run_campaign(const CampaignSpec& spec, unsigned workers = 0,
                       const FunctionRegistry& registry =
                           FunctionRegistry::builtin());

/// Statistics of a set of reports sharing one n: means and standard errors of
/// v_n, c_true, s_n and the studentized statistic, its variance and KS
/// distance to N(0, 2/3), interval coverage and the L2 error of V^n - C.
/// Reports are sorted by replicate index before any reduction.
std::map<std::string, double> aggregate(std::vector<EstimateReport> reports);

/// JSON document with schema_version, spec, per_n, overall, verdicts,
/// all_pass and (optionally) wall_time_s.
std::string summary_to_json(const McSummary& summary,
                            bool include_wall_time = true);

class MalformedSummary : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Verdicts of a serialized summary. Throws MalformedSummary.
std::vector<TestVerdict> parse_summary_verdicts(std::string_view json_text);

/// Header row plus one row per report.
void write_reports_csv(std::ostream& out,
                       const std::vector<EstimateReport>& reports);

}  // namespace sheetqv
