#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace sheetqv::cli {

enum ExitCode : int {
  kExitPass = 0,
  kExitVerdictFailure = 1,
  kExitConfigError = 2,
  kExitRuntimeFailure = 3,
};

/// Command-line overrides; set fields win over the config file.
struct Overrides {
  std::optional<unsigned> workers;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
};

int cmd_simulate(const std::string& config_path, const Overrides& flags,
                 std::ostream& out, std::ostream& err);
int cmd_report(const std::string& summary_path, std::ostream& out,
               std::ostream& err);
int cmd_dump_sheet(const std::string& config_path, const Overrides& flags,
                   std::ostream& out, std::ostream& err);

/// Keeps large lattice buffers on the heap between replicates instead of
/// returning them to the OS after every free (glibc only; no-op elsewhere).
void tune_allocator();

/// Parses argv and dispatches to the subcommands.
int run(int argc, char** argv);

}  // namespace sheetqv::cli
