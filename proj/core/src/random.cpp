#include "pivotal/random.hpp"

namespace pivotal {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed) : seed_(seed), gen_(splitmix64(seed)) {}

double RandomStream::next_unit() {
    ++position_;
    return double(gen_() >> 11) * 0x1.0p-53;
}

RandomStream RandomStream::substream(std::uint64_t index) const {
    return RandomStream(splitmix64(seed_ ^ splitmix64(index + 0x51ed2701)));
}

}  // namespace pivotal
