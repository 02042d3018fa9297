#pragma once

// The CLI commands. Each job turns a parsed spec into a report document and
// an optional CSV table.

#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include "spec_io.hpp"

namespace purgeom::cli {

struct JobOptions {
  std::optional<std::uint64_t> seed;
  std::optional<int> steps;
  std::optional<std::string> grid;   // "lo,hi,n"
  unsigned threads = 0;              // 0: hardware concurrency
};

struct JobOutput {
  Json report;
  std::optional<Table> table;
  int exit_code = 0;
};

const std::vector<std::string>& command_names();

/// Throws the library's errors; see exit_code_for.
JobOutput run_job(const std::string& command, const Json& spec, const JobOptions& options);

/// 1 for validation failures (including parse errors), 2 for numerical ones.
int exit_code_for(const std::exception& e);
std::string error_type(const std::exception& e);

/// Report for a failed job.
Json error_report(const std::string& command, const std::exception& e);

}  // namespace purgeom::cli
