#pragma once

#include <string>
#include <vector>

#include "eqnet/network.hpp"

namespace eqnet {

// Plain-text model checkpoint.
//
// Header:  eqnet-checkpoint <version> <kind> <structure> <kernel>
// Body:    one line per parameter tensor: <name> <shape> <values...>
// Values use shortest round-trip decimal encoding, so save/load is
// bit-exact.
inline constexpr int kCheckpointVersion = 1;

void save_checkpoint(const Network& net, const std::string& path);

struct CheckpointHeader {
    int version;
    std::string kind;
    std::vector<int> structure;
    int kernel_size;
};

CheckpointHeader read_checkpoint_header(const std::string& path);

// Fills an already-built network whose architecture matches the file.
void load_checkpoint_into(Network& net, const std::string& path);

}  // namespace eqnet
