#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace linexp3 {

// Purpose tags for child random streams. Every consumer of randomness gets
// its own stream keyed by (master seed, purpose, replication, round), so
// e.g. adding resampling draws never shifts the environment's draws.
enum class Stream : std::uint64_t {
    Context = 1,
    Action = 2,
    Resampling = 3,
    Ghost = 4,
    Scratch = 5,
};

class RngStream {
public:
    RngStream(std::uint64_t master, Stream purpose, std::uint64_t replication,
              std::uint64_t round);

    std::uint64_t next_u64() { return gen_(); }

    // Uniform on [0, 1), 53-bit mantissa.
    double uniform();

    // Standard normal via Box-Muller (no cached spare, keeps replay trivial).
    double normal();

    // Inverse-CDF sampling with fixed index order; returns an index in
    // [0, probs.size()).
    int categorical(const std::vector<double>& probs);

private:
    std::mt19937_64 gen_;
};

}  // namespace linexp3
