// cubic-euler: Euler characteristics of the period-p curves in cubic
// parameter space, via periodic tau-functions.

#include <algorithm>
#include <cctype>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "cubic_euler/runner.hpp"

int main(int argc, char** argv) {
  using cubic_euler::OutputFormat;
  cubic_euler::RunConfig config;
  bool no_verify = false;

  CLI::App app{"Count escape regions and Euler characteristics of period-p cubic curves."};
  app.set_version_flag("--version", "cubic-euler 1.0");
  auto* period = app.add_option("--period", config.period, "Report a single period P")->check(CLI::PositiveNumber);
  auto* through = app.add_option("--through", config.through, "Report every period 1..P")->check(CLI::PositiveNumber);
  period->excludes(through);
  through->excludes(period);
  const std::map<std::string, OutputFormat> formats{
      {"table", OutputFormat::table}, {"csv", OutputFormat::csv}, {"json", OutputFormat::json}};
  std::string format = "table";
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"table", "csv", "json"}, CLI::ignore_case))
      ->capture_default_str();
  app.add_flag("--stats", config.stats, "Include per-length Periodic/Discard/Continue counts");
  app.add_flag("--no-verify", no_verify, "Skip the degree identity and exception-family audit");
  app.add_option("--workers", config.workers, "Worker threads")->check(CLI::Range(1u, 1024u));
  app.add_option("--checkpoint", config.checkpoint_path, "Write the enumeration frontier to PATH (--period only)");
  app.add_option("--resume", config.resume_path, "Resume from a checkpoint at PATH (--period only)")
      ->check(CLI::ExistingFile);
  app.add_option("--out", config.out_path, "Write the report to PATH instead of standard output");
  app.add_option("--checkpoint-every", config.checkpoint_every, "Rewrite the checkpoint every N work items");
  app.add_option("--stop-after", config.stop_after, "Stop after N work items, leaving a checkpoint (exit 3)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cubic_euler::kExitUsage;
  }
  if (config.period == 0 && config.through == 0) {
    std::cerr << "error: one of --period or --through is required\n" << app.help();
    return cubic_euler::kExitUsage;
  }
  config.verify = !no_verify;
  std::transform(format.begin(), format.end(), format.begin(), [](unsigned char c) { return std::tolower(c); });
  config.format = formats.at(format);
  return cubic_euler::run(config, std::cout, std::cerr);
}
