#pragma once

// CLI subcommands as plain functions so tests can run them in-process.
//
// Exit codes: 0 task completed (or, for `metrics`, metrics computed),
// 1 task not completed, 2 bad input (unreadable/corrupt trace, malformed
// script, bad config or scenario), 3 the server could not bind.

#include <iosfwd>
#include <optional>
#include <string>

namespace headteleop::cli {

inline constexpr int kExitCompleted = 0;
inline constexpr int kExitNotCompleted = 1;
inline constexpr int kExitBadInput = 2;
inline constexpr int kExitBindFailure = 3;

struct CommonOptions {
  std::optional<std::string> config_path;  // falls back to HEADTELEOP_CONFIG
};

struct ReplayOptions : CommonOptions {
  std::string trace_path;
  std::optional<std::string> scenario;  // overrides the trace header
};

struct SimulateOptions : CommonOptions {
  std::string scenario;
  std::string script_path;
  std::optional<std::string> emit_trace;
};

/// Prints metrics then the final robot state (`final.*` keys).
int replay(const ReplayOptions& opts, std::ostream& out, std::ostream& err);

/// Prints metrics only; exit 0 whenever the trace could be evaluated.
int metrics(const ReplayOptions& opts, std::ostream& out, std::ostream& err);

int simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err);

int serve(const CommonOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace headteleop::cli
