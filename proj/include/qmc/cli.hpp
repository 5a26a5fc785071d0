#pragma once

#include <iosfwd>

#include "qmc/io.hpp"

namespace qmc {

/// Replaces e distinct uniformly chosen blocks with uniformly random blocks
/// that differ from the originals.  Deterministic given the generator state.
Codeword corrupt_blocks(const FieldTower& t, const Codeword& w, const CodeParams& p, uint64_t e, Rng& rng);

struct ExperimentSpec {
    CodeParams params;
    uint32_t r = 1;
    uint64_t errors = 0;
    uint64_t trials = 1;
    uint64_t seed = 0;
    uint64_t enumeration_cap = 65536;
};

/// One row per trial plus an aggregate success-rate line; trial seeds are
/// seed + trial_index.
void run_experiment(std::ostream& os, const FieldTower& t, const ExperimentSpec& spec);

/// Per-module invariant batteries; prints one line per suite.
bool selftest(std::ostream& os);

/// Entry point behind the qmc binary.  Exit codes: 0 success, 2 parameter
/// regime violation, 3 malformed input.
int cli_main(int argc, char** argv);

}  // namespace qmc
