#include "sheetqv/mc.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <set>
#include <span>

#include "json.hpp"

#include "sheetqv/diffusion.hpp"
#include "sheetqv/sheet.hpp"

namespace sheetqv {

namespace {

using nlohmann::json;

constexpr double kStudentizedSd = 0.81649658092772603273;  // sqrt(2/3)

// Gate constants.
constexpr double kKsStudentizedMax = 0.08;
constexpr double kStudentizedVarCenter = 0.675;
constexpr double kStudentizedVarHalfWidth = 0.125;
constexpr double kCoverageCenter = 0.94;
constexpr double kCoverageHalfWidth = 0.04;
constexpr double kSlopeTarget = -1.0;
constexpr double kSlopeHalfWidth = 0.3;
constexpr double kSeMultiplier = 3.0;
constexpr double kLimitKsLevel = 0.01;

struct ReplicateOutcome {
  std::optional<EstimateReport> report;
  std::vector<double> values;
};

double mean_of(std::span<const double> x) {
  double total = 0.0;
  for (double v : x) total += v;
  return total / static_cast<double>(x.size());
}

/// |estimate| / se, or 0 when both vanish.
double z_score(double estimate, double se) {
  if (se > 0.0) return std::abs(estimate) / se;
  return estimate == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

std::vector<double> column(const std::vector<ReplicateOutcome>& outcomes,
                           std::size_t index) {
  std::vector<double> out;
  out.reserve(outcomes.size());
  for (const auto& o : outcomes) out.push_back(o.values.at(index));
  return out;
}

/// Index rectangle of `point` on grid m, split in the middle along both axes.
struct SplitIndices {
  std::size_t i_half, i_full, j_half, j_full;
};

SplitIndices split(const ParamPoint& point, std::size_t n) {
  const std::size_t ie = floor_index(point.s(), n);
  const std::size_t je = floor_index(point.t(), n);
  return {floor_index(0.5 * point.s(), n), ie, floor_index(0.5 * point.t(), n),
          je};
}

struct LimitBlocks {
  IndexBlock full, a, b;
};

/// Two overlapping blocks inside the index rectangle of the point.
LimitBlocks limit_blocks(const ParamPoint& point, std::size_t m) {
  const std::size_t ie = floor_index(point.s(), m);
  const std::size_t je = floor_index(point.t(), m);
  return {IndexBlock{0, 0, ie, je}, IndexBlock{0, 0, 3 * ie / 4, je},
          IndexBlock{ie / 4, je / 4, ie, 3 * je / 4}};
}

class Runner {
 public:
  Runner(const CampaignSpec& spec, unsigned workers,
         const FunctionRegistry& registry)
      : spec_(spec), workers_(workers), registry_(registry) {}

  McSummary run();

 private:
  std::vector<ReplicateOutcome> replicates(std::size_t n);
  ReplicateOutcome estimate_replicate(const ModelSpec& model, std::size_t n,
                                      std::size_t k) const;
  ReplicateOutcome process_replicate(const ScalarFunction& f, std::size_t n,
                                     std::size_t k) const;

  void verdict(std::string gate, std::size_t n, double statistic,
               double threshold, std::size_t n_obs, std::string description) {
    if (!gates_on_) return;
    summary_.verdicts.push_back(make_verdict(std::move(gate), n, statistic,
                                             threshold, n_obs,
                                             std::move(description)));
  }

  void summarize_estimates(PerN& row,
                           const std::vector<ReplicateOutcome>& outcomes);
  void summarize_variance(PerN& row,
                          const std::vector<ReplicateOutcome>& outcomes);
  void summarize_martingale(PerN& row,
                            const std::vector<ReplicateOutcome>& outcomes);
  void summarize_tightness(PerN& row,
                           const std::vector<ReplicateOutcome>& outcomes);
  void summarize_limit(PerN& row,
                       const std::vector<ReplicateOutcome>& outcomes,
                       double cond_var, double cond_cov);

  const CampaignSpec& spec_;
  unsigned workers_;
  const FunctionRegistry& registry_;
  bool gates_on_ = false;
  McSummary summary_;
  // limit_covariance: quadratures on the fixed W.
  double limit_cond_var_ = 0.0;
  double limit_cond_cov_ = 0.0;
};

ReplicateOutcome Runner::estimate_replicate(const ModelSpec& model,
                                            std::size_t n,
                                            std::size_t k) const {
  const BrownianSheet sheet =
      generate_sheet(Grid(n * spec_.refinement_r),
                     derive_seed(spec_.master_seed, k, SheetRole::driving_W));
  const DiffusionPath path = simulate_diffusion(model, sheet);
  ReplicateOutcome out;
  out.report = estimate(path, n, spec_.point, spec_.alpha);
  out.values.push_back(integrated_quarticity(path, spec_.point));
  return out;
}

ReplicateOutcome Runner::process_replicate(const ScalarFunction& f,
                                           std::size_t n,
                                           std::size_t k) const {
  ReplicateOutcome out;
  if (spec_.experiment == Experiment::limit_covariance) {
    throw std::logic_error("limit replicates are built separately");
  }
  const BrownianSheet sheet = generate_sheet(
      Grid(n), derive_seed(spec_.master_seed, k, SheetRole::driving_W));
  switch (spec_.experiment) {
    case Experiment::variance_identity: {
      const VariationProcess x = weighted_qv_process(f, sheet);
      out.values = {x.value_at(spec_.point),
                    predictable_bracket(f, sheet, spec_.point)};
      break;
    }
    case Experiment::strong_martingale: {
      const Lattice x = weighted_qv_process(f, sheet).values;
      const SplitIndices ix = split(spec_.point, n);
      const double inc =
          block_increment(x, ix.i_half, ix.j_half, ix.i_full, ix.j_full);
      const double w_low = sheet(ix.i_full, ix.j_half);
      const double w_left = sheet(ix.i_half, ix.j_full);
      out.values = {inc, std::tanh(w_low), std::cos(w_left),
                    w_low * w_left > 0.0 ? 1.0 : 0.0};
      break;
    }
    case Experiment::tightness:
      out.values = replicate_moduli(f, sheet, spec_.deltas);
      break;
    default:
      throw std::logic_error("experiment has no process replicate");
  }
  return out;
}

std::vector<ReplicateOutcome> Runner::replicates(std::size_t n) {
  const auto guarded = [&](auto body) {
    return parallel_map(spec_.replicates, workers_, [&](std::size_t k) {
      try {
        return body(k);
      } catch (const std::exception& e) {
        throw CampaignError("replicate " + std::to_string(k) + " at n = " +
                                std::to_string(n) + ": " + e.what(),
                            n, k);
      }
    });
  };

  if (uses_volatility(spec_.experiment)) {
    const ModelSpec model =
        make_model(registry_, spec_.sigma_name, spec_.drift_name);
    return guarded(
        [&](std::size_t k) { return estimate_replicate(model, n, k); });
  }

  const ScalarFunction f = registry_.at(spec_.f_name).fn;
  if (spec_.experiment == Experiment::limit_covariance) {
    const std::size_t m = n * spec_.refinement_r;
    const BrownianSheet sheet_w = generate_sheet(
        Grid(m), derive_seed(spec_.master_seed, 0, SheetRole::driving_W));
    const LimitBlocks blocks = limit_blocks(spec_.point, m);
    limit_cond_var_ = conditional_covariance(f, sheet_w, blocks.full,
                                             blocks.full);
    limit_cond_cov_ = conditional_covariance(f, sheet_w, blocks.a, blocks.b);
    return guarded([&](std::size_t k) {
      const BrownianSheet sheet_b = generate_sheet(
          Grid(m), derive_seed(spec_.master_seed, k, SheetRole::independent_B));
      const LimitProcess x = simulate_limit(f, sheet_w, sheet_b, spec_.f_name);
      const auto inc = [&](const IndexBlock& blk) {
        return block_increment(x.values, blk.i0, blk.j0, blk.i1, blk.j1);
      };
      ReplicateOutcome out;
      out.values = {inc(blocks.full), inc(blocks.a), inc(blocks.b)};
      return out;
    });
  }
  return guarded([&](std::size_t k) { return process_replicate(f, n, k); });
}

void Runner::summarize_estimates(PerN& row,
                                 const std::vector<ReplicateOutcome>& outcomes) {
  std::vector<EstimateReport> reports;
  reports.reserve(outcomes.size());
  for (const auto& o : outcomes) reports.push_back(*o.report);
  row.stats = aggregate(reports);
  const std::vector<double> quarticity = column(outcomes, 0);
  row.stats["mean_three_quarticity"] = 3.0 * mean_of(quarticity);

  const std::size_t n = row.n;
  const std::size_t count = outcomes.size();
  switch (spec_.experiment) {
    case Experiment::clt_check:
      verdict("ks_studentized", n, row.stats.at("ks_studentized"),
              kKsStudentizedMax, count,
              "KS distance of T to N(0, 2/3)");
      verdict("variance_studentized", n,
              std::abs(row.stats.at("var_studentized") - kStudentizedVarCenter),
              kStudentizedVarHalfWidth, count,
              "|Var T - 0.675| (Var T in [0.55, 0.80])");
      verdict("mean_studentized", n,
              z_score(row.stats.at("mean_studentized"),
                      row.stats.at("se_mean_studentized")),
              kSeMultiplier, count, "|mean T| / se");
      break;
    case Experiment::coverage:
      verdict("coverage", n,
              std::abs(row.stats.at("coverage") - kCoverageCenter),
              kCoverageHalfWidth, count,
              "|coverage - 0.94| (coverage in [0.90, 0.98])");
      break;
    case Experiment::consistency_rate: {
      const double r = registry_.at(spec_.sigma_name).bound;
      const double nd = static_cast<double>(n);
      const double bound = 2.0 * r * r * r * r / (nd * nd);
      row.stats["l2_bound"] = bound;
      verdict("l2_bound", n,
              row.stats.at("mse") - kSeMultiplier * row.stats.at("se_mse"),
              bound, count, "E|V - C|^2 - 3 se against 2 R^4 / n^2");
      break;
    }
    default:
      break;
  }
  summary_.reports.insert(summary_.reports.end(), reports.begin(),
                          reports.end());
}

void Runner::summarize_variance(PerN& row,
                                const std::vector<ReplicateOutcome>& outcomes) {
  const std::vector<double> x = column(outcomes, 0);
  const std::vector<double> bracket = column(outcomes, 1);
  const Estimate mean = mean_with_se(x);
  const Estimate var = moment_with_se(Sample{x, "X"}, 2);
  const Estimate mean_bracket = mean_with_se(bracket);
  const double count = static_cast<double>(x.size());
  std::vector<double> diff(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double c = x[k] - mean.value;
    diff[k] = c * c * count / (count - 1.0) - bracket[k];
  }
  const Estimate d = mean_with_se(diff);
  row.stats = {{"mean_x", mean.value},
               {"se_mean_x", mean.se},
               {"var_x", var.value},
               {"se_var_x", var.se},
               {"mean_bracket", mean_bracket.value},
               {"se_mean_bracket", mean_bracket.se},
               {"mean_var_minus_bracket", d.value},
               {"se_var_minus_bracket", d.se}};
  verdict("variance_identity", row.n, z_score(d.value, d.se), kSeMultiplier,
          x.size(), "|Var X - E bracket| / se");
  verdict("mean_zero", row.n, z_score(mean.value, mean.se), kSeMultiplier,
          x.size(), "|mean X| / se");
}

void Runner::summarize_martingale(
    PerN& row, const std::vector<ReplicateOutcome>& outcomes) {
  const std::vector<double> inc = column(outcomes, 0);
  const Estimate mean = mean_with_se(inc);
  row.stats = {{"mean_increment", mean.value}, {"se_mean_increment", mean.se}};
  const double threshold =
      kSeMultiplier / std::sqrt(static_cast<double>(inc.size()));
  const char* names[] = {"tanh_w_lower", "cos_w_left", "sign_agreement"};
  for (std::size_t c = 0; c < 3; ++c) {
    const std::vector<double> z = column(outcomes, c + 1);
    const double rho = correlation(inc, z);
    row.stats[std::string("corr_") + names[c]] = rho;
    verdict(std::string("orthogonality_") + names[c], row.n, std::abs(rho),
            threshold, inc.size(), "|corr(increment, past functional)|");
  }
}

void Runner::summarize_tightness(
    PerN& row, const std::vector<ReplicateOutcome>& outcomes) {
  std::vector<std::vector<double>> moduli;
  moduli.reserve(outcomes.size());
  for (const auto& o : outcomes) moduli.push_back(o.values);
  row.tightness = tightness_table(row.n, spec_.deltas, spec_.eps_list, moduli);

  std::vector<std::pair<double, double>> probe;  // (delta, p_hat) at gate eps
  for (const auto& t : row.tightness) {
    if (t.eps == kTightnessGateEps) probe.emplace_back(t.delta, t.p_hat);
  }
  std::sort(probe.begin(), probe.end());
  const double count = static_cast<double>(outcomes.size());
  std::size_t violations = 0;
  for (std::size_t k = 1; k < probe.size(); ++k) {
    const double p_small = probe[k - 1].second;
    const double p_large = probe[k].second;
    const double se = std::sqrt(p_small * (1.0 - p_small) / count +
                                p_large * (1.0 - p_large) / count);
    if (p_small - p_large > kSeMultiplier * se) ++violations;
  }
  row.stats["trend_violations"] = static_cast<double>(violations);
  if (probe.size() >= 2) {
    verdict("tightness_trend", row.n, static_cast<double>(violations), 1.0,
            outcomes.size(),
            "3-se violations of P[w(X, delta) >= 2] shrinking with delta");
  }
}

void Runner::summarize_limit(PerN& row,
                             const std::vector<ReplicateOutcome>& outcomes,
                             double cond_var, double cond_cov) {
  const std::vector<double> full = column(outcomes, 0);
  const std::vector<double> a = column(outcomes, 1);
  const std::vector<double> b = column(outcomes, 2);
  std::vector<double> z(full.size());
  std::vector<double> prod(full.size());
  const double sd = std::sqrt(cond_var);
  for (std::size_t k = 0; k < full.size(); ++k) {
    z[k] = sd > 0.0 ? full[k] / sd : 0.0;
    prod[k] = a[k] * b[k];
  }
  const double ks = ks_distance(Sample{z, "standardized X"}, 1.0);
  const Estimate cov = mean_with_se(prod);
  const Estimate var = moment_with_se(Sample{full, "X"}, 2);
  row.stats = {{"conditional_variance", cond_var},
               {"var_x", var.value},
               {"se_var_x", var.se},
               {"ks_standardized", ks},
               {"conditional_covariance", cond_cov},
               {"empirical_covariance", cov.value},
               {"se_empirical_covariance", cov.se}};
  verdict("conditional_ks", row.n, ks,
          ks_critical_value(full.size(), kLimitKsLevel), full.size(),
          "KS of X / sqrt(2 int f^2) against N(0,1), level 0.01");
  verdict("conditional_covariance", row.n,
          z_score(cov.value - cond_cov, cov.se), kSeMultiplier, full.size(),
          "|empirical cov - 2 int_{A cap B} f^2| / se");
}

McSummary Runner::run() {
  const auto start = std::chrono::steady_clock::now();
  spec_.validate(registry_);
  summary_.spec = spec_;
  gates_on_ = spec_.gates && spec_.replicates >= kMinReplicatesForGates;

  for (std::size_t n : spec_.n_list) {
    const std::vector<ReplicateOutcome> outcomes = replicates(n);
    PerN row;
    row.n = n;
    switch (spec_.experiment) {
      case Experiment::clt_check:
      case Experiment::consistency_rate:
      case Experiment::coverage:
        summarize_estimates(row, outcomes);
        break;
      case Experiment::variance_identity:
        summarize_variance(row, outcomes);
        break;
      case Experiment::strong_martingale:
        summarize_martingale(row, outcomes);
        break;
      case Experiment::tightness:
        summarize_tightness(row, outcomes);
        break;
      case Experiment::limit_covariance:
        summarize_limit(row, outcomes, limit_cond_var_, limit_cond_cov_);
        break;
    }
    summary_.per_n.push_back(std::move(row));
  }

  if (spec_.experiment == Experiment::consistency_rate &&
      summary_.per_n.size() >= 3) {
    std::vector<double> ns;
    std::vector<double> rmse;
    for (const auto& row : summary_.per_n) {
      ns.push_back(static_cast<double>(row.n));
      rmse.push_back(row.stats.at("rmse"));
    }
    const double slope = rate_slope(ns, rmse);
    summary_.overall["rmse_slope"] = slope;
    verdict("rmse_slope", 0, std::abs(slope - kSlopeTarget), kSlopeHalfWidth,
            spec_.replicates, "|slope of log RMSE vs log n + 1|");
  }

  summary_.wall_time = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - start)
                           .count();
  return std::move(summary_);
}

json real(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

json spec_to_json(const CampaignSpec& s) {
  return json{{"experiment", std::string(to_string(s.experiment))},
              {"n_list", s.n_list},
              {"refinement_r", s.refinement_r},
              {"N", s.replicates},
              {"sigma_name", s.sigma_name},
              {"f_name", s.f_name},
              {"drift_name", s.drift_name},
              {"point_s", s.point.s()},
              {"point_t", s.point.t()},
              {"alpha", s.alpha},
              {"master_seed", s.master_seed},
              {"gates", s.gates},
              {"deltas", s.deltas},
              {"eps_list", s.eps_list}};
}

json verdict_to_json(const TestVerdict& v) {
  return json{{"gate", v.gate},
              {"n", v.n},
              {"statistic", real(v.statistic)},
              {"threshold", real(v.threshold)},
              {"pass", v.pass},
              {"n_obs", v.n_obs},
              {"description", v.description}};
}

json stats_to_json(const std::map<std::string, double>& stats) {
  json out = json::object();
  for (const auto& [key, value] : stats) out[key] = real(value);
  return out;
}

}  // namespace

std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::clt_check:
      return "clt_check";
    case Experiment::consistency_rate:
      return "consistency_rate";
    case Experiment::coverage:
      return "coverage";
    case Experiment::variance_identity:
      return "variance_identity";
    case Experiment::strong_martingale:
      return "strong_martingale";
    case Experiment::tightness:
      return "tightness";
    case Experiment::limit_covariance:
      return "limit_covariance";
  }
  return "unknown";
}

Experiment experiment_from_string(std::string_view name) {
  for (Experiment e :
       {Experiment::clt_check, Experiment::consistency_rate,
        Experiment::coverage, Experiment::variance_identity,
        Experiment::strong_martingale, Experiment::tightness,
        Experiment::limit_covariance}) {
    if (to_string(e) == name) return e;
  }
  throw std::invalid_argument("unknown experiment '" + std::string(name) + "'");
}

bool uses_volatility(Experiment e) {
  return e == Experiment::clt_check || e == Experiment::consistency_rate ||
         e == Experiment::coverage;
}

void CampaignSpec::validate(const FunctionRegistry& registry) const {
  if (n_list.empty()) throw std::invalid_argument("n_list must not be empty");
  std::set<std::size_t> seen;
  for (std::size_t n : n_list) {
    if (n == 0) throw std::invalid_argument("n_list entries must be >= 1");
    if (!seen.insert(n).second) {
      throw std::invalid_argument("n_list contains " + std::to_string(n) +
                                  " twice");
    }
  }
  if (replicates < 2) throw std::invalid_argument("N must be at least 2");
  if (refinement_r < 1) {
    throw std::invalid_argument("refinement_r must be at least 1");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0,1)");
  }
  if (uses_volatility(experiment)) {
    if (sigma_name.empty()) {
      throw std::invalid_argument("sigma_name is required for " +
                                  std::string(to_string(experiment)));
    }
    if (refinement_r < 8) {
      throw std::invalid_argument(
          "refinement_r must be at least 8 when C is computed by quadrature");
    }
    registry.at(sigma_name);
    registry.at(drift_name);
  } else {
    if (f_name.empty()) {
      throw std::invalid_argument("f_name is required for " +
                                  std::string(to_string(experiment)));
    }
    registry.at(f_name);
  }
  if (experiment == Experiment::strong_martingale) {
    for (std::size_t n : n_list) {
      const SplitIndices ix = split(point, n);
      if (ix.i_half == 0 || ix.j_half == 0 || ix.i_half == ix.i_full ||
          ix.j_half == ix.j_full) {
        throw std::invalid_argument(
            "strong_martingale needs point/2 and point on distinct nonzero "
            "grid indices at n = " + std::to_string(n));
      }
    }
  }
  if (experiment == Experiment::limit_covariance) {
    for (std::size_t n : n_list) {
      const LimitBlocks blk = limit_blocks(point, n * refinement_r);
      if (blk.b.i0 == 0 || blk.b.j0 == 0) {
        throw std::invalid_argument(
            "limit_covariance needs at least 4 fine cells per side below the "
            "point");
      }
    }
  }
  if (experiment == Experiment::tightness) {
    if (deltas.empty() || eps_list.empty()) {
      throw std::invalid_argument("deltas and eps_list must not be empty");
    }
    for (double d : deltas) {
      if (!(d > 0.0)) throw std::invalid_argument("deltas must be positive");
    }
  }
}

bool McSummary::all_pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(),
                     [](const TestVerdict& v) { return v.pass; });
}

unsigned resolve_workers(unsigned workers) {
  if (workers > 0) return workers;
  return std::max(1u, std::thread::hardware_concurrency());
}

McSummary run_campaign(const CampaignSpec& spec, unsigned workers,
                       const FunctionRegistry& registry) {
  return Runner(spec, workers, registry).run();
}

std::map<std::string, double> aggregate(std::vector<EstimateReport> reports) {
  if (reports.empty()) throw std::invalid_argument("aggregate: no reports");
  const std::size_t n = reports.front().n;
  for (const auto& r : reports) {
    if (r.n != n) throw std::invalid_argument("aggregate: mixed n in reports");
  }
  std::stable_sort(reports.begin(), reports.end(),
                   [](const EstimateReport& a, const EstimateReport& b) {
                     return a.seed.stream_index < b.seed.stream_index;
                   });

  const std::size_t count = reports.size();
  std::vector<double> v, c, s, t, sq;
  std::vector<Interval> intervals;
  for (const auto& r : reports) {
    v.push_back(r.v_n);
    c.push_back(r.c_true);
    s.push_back(r.s_n);
    t.push_back(r.studentized);
    sq.push_back((r.v_n - r.c_true) * (r.v_n - r.c_true));
    intervals.push_back({r.ci_low, r.ci_high});
  }
  std::map<std::string, double> out;
  out["count"] = static_cast<double>(count);
  const auto put_mean = [&](const std::string& key,
                            const std::vector<double>& x) {
    if (count >= 2) {
      const Estimate e = mean_with_se(x);
      out["mean_" + key] = e.value;
      out["se_mean_" + key] = e.se;
    } else {
      out["mean_" + key] = x.front();
    }
  };
  put_mean("v_n", v);
  put_mean("c_true", c);
  put_mean("s_n", s);
  put_mean("studentized", t);
  out["ks_studentized"] = ks_distance(Sample{t, "studentized"}, kStudentizedSd);
  const Estimate cov = coverage_rate(intervals, c);
  out["coverage"] = cov.value;
  out["se_coverage"] = cov.se;
  if (count >= 2) {
    const Estimate var = moment_with_se(Sample{t, "studentized"}, 2);
    out["var_studentized"] = var.value;
    out["se_var_studentized"] = var.se;
    const Estimate mse = mean_with_se(sq);
    out["mse"] = mse.value;
    out["se_mse"] = mse.se;
    out["rmse"] = std::sqrt(mse.value);
  } else {
    out["mse"] = sq.front();
    out["rmse"] = std::sqrt(sq.front());
  }
  return out;
}

std::string summary_to_json(const McSummary& summary, bool include_wall_time) {
  json doc;
  doc["schema_version"] = kSummarySchemaVersion;
  doc["spec"] = spec_to_json(summary.spec);
  json per_n = json::array();
  for (const auto& row : summary.per_n) {
    json entry{{"n", row.n}, {"stats", stats_to_json(row.stats)}};
    if (!row.tightness.empty()) {
      json table = json::array();
      for (const auto& t : row.tightness) {
        table.push_back(json{{"delta", t.delta},
                             {"eps", t.eps},
                             {"p_hat", t.p_hat},
                             {"N", t.replicates}});
      }
      entry["tightness"] = std::move(table);
    }
    per_n.push_back(std::move(entry));
  }
  doc["per_n"] = std::move(per_n);
  doc["overall"] = stats_to_json(summary.overall);
  json verdicts = json::array();
  for (const auto& v : summary.verdicts) verdicts.push_back(verdict_to_json(v));
  doc["verdicts"] = std::move(verdicts);
  doc["all_pass"] = summary.all_pass();
  if (include_wall_time) doc["wall_time_s"] = summary.wall_time;
  return doc.dump(2) + "\n";
}

std::vector<TestVerdict> parse_summary_verdicts(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw MalformedSummary(std::string("not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw MalformedSummary("summary must be an object");
  if (!doc.contains("schema_version") ||
      !doc["schema_version"].is_number_integer()) {
    throw MalformedSummary("missing schema_version");
  }
  if (doc["schema_version"].get<int>() != kSummarySchemaVersion) {
    throw MalformedSummary("unsupported schema_version " +
                           doc["schema_version"].dump());
  }
  if (!doc.contains("verdicts") || !doc["verdicts"].is_array()) {
    throw MalformedSummary("missing verdicts array");
  }
  const auto number = [](const json& v) {
    if (v.is_null()) return std::numeric_limits<double>::quiet_NaN();
    return v.get<double>();
  };
  std::vector<TestVerdict> out;
  try {
    for (const json& v : doc["verdicts"]) {
      TestVerdict t;
      t.gate = v.at("gate").get<std::string>();
      t.n = v.at("n").get<std::size_t>();
      t.statistic = number(v.at("statistic"));
      t.threshold = number(v.at("threshold"));
      t.pass = v.at("pass").get<bool>();
      t.n_obs = v.value("n_obs", std::size_t{0});
      t.description = v.value("description", std::string());
      out.push_back(std::move(t));
    }
  } catch (const json::exception& e) {
    throw MalformedSummary(std::string("bad verdict entry: ") + e.what());
  }
  return out;
}

void write_reports_csv(std::ostream& out,
                       const std::vector<EstimateReport>& reports) {
  out << report_csv_header() << '\n';
  for (const auto& r : reports) out << report_csv_row(r) << '\n';
}

}  // namespace sheetqv
