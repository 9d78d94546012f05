#pragma once

#include <string>
#include <vector>

#include "tflow/config.hpp"

namespace tflow {

// Subcommand drivers. Each writes its artifacts plus a manifest under
// cfg.output_dir and returns a process exit code (0 = all invoked checks
// passed). Failures inside a run are reported as one machine-readable line
// "error: <code>: <message>" on stderr. `jobs` bounds worker threads where a
// command has independent work (sweep points, verify's two flows); the
// single-run commands take it for interface uniformity and run sequentially.
int cmd_flow(const RunConfig& cfg, int jobs = 1);
int cmd_translator(const RunConfig& cfg, int jobs = 1);
int cmd_verify(const RunConfig& cfg, int jobs = 1);
int cmd_sweep(const RunConfig& cfg, const std::vector<double>& a_grid, int jobs);

} // namespace tflow
