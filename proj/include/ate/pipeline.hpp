#pragma once

#include <iosfwd>
#include <string>

#include "ate/config.hpp"

namespace ate {

// Subcommand entry points. Each returns a process exit code (0 on success)
// and reports progress on `log`. Fatal errors throw ate::Error; main() turns
// them into exit code 1.

// Writes the normalized dump (one file per table) plus the reject report
// under <out>/normalized. Fixture mode synthesizes the corpus instead of
// reading the configured paths.
int cmd_ingest(const RunConfig& cfg, std::ostream& log);

// Explicit fixture generation (same outputs as ingest in fixture mode).
int cmd_fixture(const RunConfig& cfg, std::ostream& log);

// Reads <out>/normalized, scores the configured (region, tau) grid, writes
// <out>/scores (base scores, grid records, audit components) and prints
// per-risk-class counts.
int cmd_score(const RunConfig& cfg, std::ostream& log);

// Sensitivity grids, pilot report, external validation, reinstatement table
// under <out>/analysis. Requires scores.
int cmd_analyze(const RunConfig& cfg, std::ostream& log);

// Paper-shaped tables (tier params, top-N, regional shares, telework, tier
// shares, remote deltas, histograms) under <out>/tables. Requires scores.
int cmd_report(const RunConfig& cfg, std::ostream& log);

} // namespace ate
