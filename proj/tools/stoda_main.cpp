// stoda: singular SU(3) Toda / Liouville fixed-point solver CLI.
//
//   stoda <check|solve|sweep|probe|validate> --config <path> [--out DIR] [--refine K]
//
// Exit codes: 0 success, 2 config error, 3 numerical failure, 4 validation
// failure.  BlowUp/MaxIter solve outcomes are findings and exit 0.
// STODA_THREADS overrides the worker thread count.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "stoda/errors.hpp"
#include "stoda/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"singular Toda / Liouville log-kernel fixed-point solver"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  int refine = 0;
  for (const char* mode : {"check", "solve", "sweep", "probe", "validate"}) {
    auto* sub = app.add_subcommand(mode);
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out_dir, "output directory (overrides config)");
    sub->add_option("--refine", refine, "extra grid refinement levels");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    stoda::RunConfig cfg = stoda::parse_config_file(config_path);
    cfg.mode = app.get_subcommands().front()->get_name();
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    cfg.grid.refine += refine;
    cfg.validate.grid_refine += refine;
    const int rc = stoda::run(cfg);
    if (rc == 0) std::fprintf(stderr, "stoda %s: ok, artifacts in %s\n", cfg.mode.c_str(),
                              cfg.output_dir.c_str());
    return rc;
  } catch (const stoda::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const stoda::GridError& e) {
    std::fprintf(stderr, "grid error: %s\n", e.what());
    return 2;
  } catch (const stoda::NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
