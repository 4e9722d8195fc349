#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "xcoref/config.h"
#include "xcoref/scoring.h"

namespace xcoref {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitInvariant = 3;

// Corpus-level scores from per-topic (gold, system) pairs. Pooled scoring
// evaluates the union of all topics at once; macro averages each number
// over topics.
ConllScores aggregate_scores(std::span<const std::pair<ChainSet, ChainSet>> topics,
                             Aggregation mode);

// Subcommands: run, score, baseline, all. Returns the process exit code.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace xcoref
