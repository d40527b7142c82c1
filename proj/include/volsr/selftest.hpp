#pragma once

#include <string>
#include <vector>

#include "volsr/volume.hpp"

namespace volsr {

struct CheckResult {
    std::string name;
    double deviation = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct SelftestOptions {
    /// Deliberately swaps two folded-spectrum blocks inside the fold
    /// consistency check; the suite must then fail.
    bool inject_block_swap_fault = false;
};

/// Dense-oracle verification suite: the Kronecker decomposition sweep, the
/// folded-spectrum consistency checks, adjoint inner-product tests, and the
/// solver equivalences. Fast enough for a post-install sanity run.
std::vector<CheckResult> run_selftest(const SelftestOptions& opts = {});

}  // namespace volsr
