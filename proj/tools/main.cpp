#include <CLI11.hpp>
#include <fmt/format.h>

#include <string>

#include "harness/harness.hpp"

int main(int argc, char** argv) {
  using namespace ferronema::harness;

  CLI::App app{"ferronema: ferronematic homogenization experiments"};
  std::string kind_text, config_path, out_dir = "out";
  std::uint64_t seed = 0;
  bool quiet = false;
  app.add_option("kind", kind_text,
                 "micro-min | homog-min | converge | magnet-scaling | cell-scaling | verify-lemmas | coeff-assemble")
      ->required();
  app.add_option("--config", config_path, "JSON configuration file")->required();
  app.add_option("--out", out_dir, "output directory");
  auto* seed_opt = app.add_option("--seed", seed, "overrides the configured seed");
  app.add_flag("--quiet", quiet, "suppress progress output");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const auto kind = parse_kind(kind_text);
  if (!kind) {
    fmt::print(stderr, "error: unknown experiment kind '{}'\n", kind_text);
    return 2;
  }
  RunConfig cfg;
  try {
    cfg = load_config(config_path, *kind);
  } catch (const std::exception& ex) {
    fmt::print(stderr, "error: {}\n", ex.what());
    return exit_code_for(ex);
  }
  if (*seed_opt) cfg.seed = seed;

  const RunResult res = run(cfg, out_dir, quiet);
  if (res.exit_code != 0) {
    fmt::print(stderr, "error ({}): {}\n", res.error_type, res.error);
    return res.exit_code;
  }
  if (!quiet)
    fmt::print("{}: {} in {:.1f} s, output in {}\n", kind_text, res.all_passed() ? "all checks passed" : "checks failed",
               res.wall_time, out_dir);
  return 0;
}
