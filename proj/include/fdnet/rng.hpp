#pragma once

#include <cstdint>
#include <random>

namespace fdnet {

using Engine = std::mt19937_64;

// Independent engine for (master seed, stream, substream). Drop i of a run
// always draws from stream i, so the partitioning of drops across workers
// cannot change any sample.
inline Engine make_engine(std::uint64_t seed, std::uint64_t stream = 0, std::uint64_t substream = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                      static_cast<std::uint32_t>(substream), static_cast<std::uint32_t>(substream >> 32)};
    return Engine(seq);
}

} // namespace fdnet
