#include "linexp3/rng.hpp"

#include <cmath>

namespace linexp3 {
namespace {

std::uint64_t splitmix64(std::uint64_t& s) {
    s += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t mix_key(std::uint64_t master, std::uint64_t purpose,
                      std::uint64_t replication, std::uint64_t round) {
    std::uint64_t s = master;
    std::uint64_t h = splitmix64(s);
    s ^= purpose * 0xd6e8feb86659fd93ULL;
    h ^= splitmix64(s);
    s ^= replication * 0xa0761d6478bd642fULL;
    h ^= splitmix64(s);
    s ^= round * 0xe7037ed1a0b428dbULL;
    h ^= splitmix64(s);
    return h;
}

}  // namespace

RngStream::RngStream(std::uint64_t master, Stream purpose,
                     std::uint64_t replication, std::uint64_t round)
    : gen_(mix_key(master, static_cast<std::uint64_t>(purpose), replication, round)) {}

double RngStream::uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double RngStream::normal() {
    // u1 in (0, 1] so the log is finite.
    double u1 = 1.0 - uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

int RngStream::categorical(const std::vector<double>& probs) {
    double u = uniform();
    double cum = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        cum += probs[i];
        if (u < cum) return static_cast<int>(i);
    }
    return static_cast<int>(probs.size()) - 1;
}

}  // namespace linexp3
