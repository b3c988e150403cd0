#pragma once

#include <vector>

namespace eqnet {

// Known pilot symbols and the corresponding channel observations.
struct PilotRecord {
    std::vector<double> symbols;   // transmitted, +/-1
    std::vector<double> observed;  // received
};

// Least-squares tap estimate via the normal equations; ML under Gaussian
// noise for a linear channel. Throws SingularSystemError when the pilot
// matrix is rank deficient.
std::vector<double> ls_channel_estimate(const PilotRecord& pilot, int num_taps);

}  // namespace eqnet
