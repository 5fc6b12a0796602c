#pragma once

#include <cstdint>
#include <string>

#include "stoda/probe.hpp"

namespace stoda {

// Parsed run configuration (JSON, schema_version 1).  One mode per run:
//   check    -- condition report for the configured problem
//   solve    -- fixed-point solve + fields/diagnostics/residual history
//   sweep    -- weight sweep (random samples or an explicit value list)
//   probe    -- non-existence probe families
//   validate -- oracle validation suite
struct RunConfig {
  int schema_version = 1;
  std::string mode;
  ProblemSpec problem;
  GridConfig grid;
  IterationConfig iteration;
  std::string output_dir = "out";
  std::uint64_t seed = 12345;

  struct Sweep {
    int m = 3;
    int components = 2;
    int samples = 200;
    bool run_solver = false;
    std::vector<double> values;  // non-empty: equal-weight grid over these values
  } sweep;

  ProbeSpec probe;

  struct Validate {
    int grid_refine = 0;   // extra refinement for the validation grids
    bool quick = false;    // skip the full-grid cross-validation solves
  } validate;
};

// Throws ConfigError on malformed JSON (with byte position) or bad fields.
RunConfig parse_config_text(const std::string& json_text);
RunConfig parse_config_file(const std::string& path);

// Executes the configured mode, writing artifacts under cfg.output_dir.
// Returns the process exit code: 0 success (BlowUp/MaxIter solve outcomes are
// findings, not errors), 4 validation failure.  ConfigError and
// NumericalError escape to the caller (mapped to exits 2 and 3).
int run(const RunConfig& cfg);

}  // namespace stoda
