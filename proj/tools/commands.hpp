#pragma once

#include <optional>
#include <string>

namespace ctdde::cli {

struct Options {
  std::string spec_path;
  std::string out_dir = ".";
  std::optional<int> q_override;
  std::optional<int> t_override;
  std::optional<int> alpha_grid_override;
  double alpha = 0.0;  // envelopes command
};

// Exit codes: 0 success / verdict reached, 1 error, 2 schema violation,
// 3 inconclusive.
int cmd_simulate(const Options& opts);
int cmd_analyze(const Options& opts);
int cmd_envelopes(const Options& opts);
int cmd_bound(const Options& opts);

struct ReproOptions {
  std::string specs_dir = "specs";
  std::string out_dir = ".";
  std::optional<std::string> only;
};

int cmd_repro(const ReproOptions& opts);

}  // namespace ctdde::cli
