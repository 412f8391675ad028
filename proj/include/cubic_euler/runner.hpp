#pragma once

// Batch driver: enumerates periods, verifies them, renders reports.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cubic_euler/curve.hpp"
#include "cubic_euler/periodic.hpp"

namespace cubic_euler {

enum class OutputFormat { table, csv, json };

struct RunConfig {
  int period = 0;   // single period, or
  int through = 0;  // every period 1..through
  OutputFormat format = OutputFormat::table;
  bool stats = false;
  bool verify = true;
  unsigned workers = 1;
  std::string checkpoint_path;  // --period only
  std::string resume_path;      // --period only
  std::string out_path;         // empty: the stream passed to run()
  std::size_t checkpoint_every = 0;  // work items between checkpoint writes; 0 = only when stopping
  std::size_t stop_after = 0;        // stop after this many work items; 0 = run to completion
};

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,  // verification, overflow, I/O, corrupt checkpoint
  kExitUsage = 2,
  kExitStopped = 3,  // stopped early on request, checkpoint written
};

// Empty when valid.
std::string validate(const RunConfig& config);

struct PeriodResult {
  PeriodReport report;
  EnumStats stats;  // per-length counts for exact period `report.period`
};

std::string render(const std::vector<PeriodResult>& results, OutputFormat format, bool with_stats);

int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace cubic_euler
