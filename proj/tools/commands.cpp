#include "commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#if defined(__GLIBC__)
#include <malloc.h>
#endif

#include "CLI11.hpp"

#include "sheetqv/config.hpp"
#include "sheetqv/mc.hpp"
#include "sheetqv/sheet.hpp"

namespace sheetqv::cli {

namespace fs = std::filesystem;

namespace {

Config load_with_overrides(const std::string& path, const Overrides& flags) {
  Config config = load_config(path);
  if (flags.workers) config.workers = *flags.workers;
  if (flags.seed) config.spec.master_seed = *flags.seed;
  return config;
}

fs::path output_path(const Overrides& flags, const std::string& name) {
  if (!flags.out_dir) return name;
  fs::create_directories(*flags.out_dir);
  return fs::path(*flags.out_dir) / name;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open " + path.string());
  file << text;
  if (!file.flush()) throw std::runtime_error("write failed: " + path.string());
}

void print_table(std::ostream& out, const std::vector<TestVerdict>& verdicts) {
  char line[256];
  std::snprintf(line, sizeof(line), "%-32s %6s %14s %14s  %s\n", "gate", "n",
                "statistic", "threshold", "result");
  out << line;
  for (const auto& v : verdicts) {
    std::snprintf(line, sizeof(line), "%-32s %6zu %14.6g %14.6g  %s\n",
                  v.gate.c_str(), v.n, v.statistic, v.threshold,
                  v.pass ? "PASS" : "FAIL");
    out << line;
  }
}

}  // namespace

int cmd_simulate(const std::string& config_path, const Overrides& flags,
                 std::ostream& out, std::ostream& err) {
  Config config;
  try {
    config = load_with_overrides(config_path, flags);
    config.require_campaign(FunctionRegistry::builtin());
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }

  McSummary summary;
  try {
    summary = run_campaign(config.spec, config.workers);
    const fs::path json_path = output_path(flags, config.summary_json);
    write_text(json_path, summary_to_json(summary));
    out << "summary: " << json_path.string() << '\n';
    if (uses_volatility(config.spec.experiment)) {
      std::ostringstream csv;
      write_reports_csv(csv, summary.reports);
      const fs::path csv_path = output_path(flags, config.reports_csv);
      write_text(csv_path, csv.str());
      out << "reports: " << csv_path.string() << '\n';
    }
  } catch (const std::exception& e) {
    err << "runtime failure: " << e.what() << '\n';
    return kExitRuntimeFailure;
  }

  if (summary.verdicts.empty()) {
    out << "no gates evaluated\n";
  } else {
    print_table(out, summary.verdicts);
  }
  out << "wall time: " << summary.wall_time << " s\n";
  return summary.all_pass() ? kExitPass : kExitVerdictFailure;
}

int cmd_report(const std::string& summary_path, std::ostream& out,
               std::ostream& err) {
  std::ifstream in(summary_path, std::ios::binary);
  if (!in) {
    err << "cannot open " << summary_path << '\n';
    return kExitConfigError;
  }
  std::ostringstream text;
  text << in.rdbuf();
  try {
    print_table(out, parse_summary_verdicts(text.str()));
  } catch (const MalformedSummary& e) {
    err << "malformed summary: " << e.what() << '\n';
    return kExitConfigError;
  }
  return kExitPass;
}

int cmd_dump_sheet(const std::string& config_path, const Overrides& flags,
                   std::ostream& out, std::ostream& err) {
  Config config;
  try {
    config = load_with_overrides(config_path, flags);
    config.require_dump();
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }
  try {
    const BrownianSheet sheet =
        generate_sheet(Grid(*config.grid_m), config.dump_seed());
    const fs::path path = output_path(flags, config.dump_path);
    save_sheet(path, sheet);
    out << "sheet: " << path.string() << '\n';
  } catch (const std::exception& e) {
    err << "runtime failure: " << e.what() << '\n';
    return kExitRuntimeFailure;
  }
  return kExitPass;
}

void tune_allocator() {
#if defined(__GLIBC__)
  mallopt(M_MMAP_THRESHOLD, 1 << 30);
  mallopt(M_TRIM_THRESHOLD, 1 << 30);
#endif
}

int run(int argc, char** argv) {
  CLI::App app{"Brownian-sheet quadratic variation toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string summary_path;
  unsigned workers = 0;
  std::uint64_t seed = 0;
  std::string out_dir;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "flat JSON config file")
        ->required();
    sub->add_option("--workers", workers, "worker threads (0 = all cores)");
    sub->add_option("--seed", seed, "master seed override");
    sub->add_option("--out", out_dir, "output directory");
  };
  CLI::App* simulate = app.add_subcommand("simulate", "run a campaign");
  add_common(simulate);
  CLI::App* report = app.add_subcommand("report", "print a summary's verdicts");
  report->add_option("summary", summary_path, "summary JSON file")->required();
  CLI::App* dump = app.add_subcommand("dump-sheet", "write a binary sheet dump");
  add_common(dump);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitPass : kExitConfigError;
  }

  Overrides flags;
  const auto sub = app.get_subcommands().front();
  if (sub != report) {
    if (sub->count("--workers")) flags.workers = workers;
    if (sub->count("--seed")) flags.seed = seed;
    if (sub->count("--out")) flags.out_dir = out_dir;
  }
  if (sub == simulate) return cmd_simulate(config_path, flags, std::cout, std::cerr);
  if (sub == dump) return cmd_dump_sheet(config_path, flags, std::cout, std::cerr);
  return cmd_report(summary_path, std::cout, std::cerr);
}

}  // namespace sheetqv::cli
