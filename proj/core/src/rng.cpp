#include "gridplan/rng.hpp"

namespace gridplan {

std::size_t Rng::uniform_index(std::size_t n) {
    const std::uint64_t bound = n;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x = next_u64();
    while (x >= limit) {
        x = next_u64();
    }
    return static_cast<std::size_t>(x % bound);
}

int Rng::uniform_int(int lo, int hi_inclusive) {
    const auto span = static_cast<std::size_t>(hi_inclusive - lo) + 1;
    return lo + static_cast<int>(uniform_index(span));
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
    return splitmix64(master_seed ^ splitmix64(0x9e3779b97f4a7c15ULL * (index + 1)));
}

}
