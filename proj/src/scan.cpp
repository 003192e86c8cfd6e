#include "repdyn/scan.hpp"

#include <cstdlib>
#include <string>

namespace repdyn {

std::string describe(const ScanPolicy& policy) {
    if (policy.is_exhaustive()) return "exhaustive";
    return "sampled(" + std::to_string(policy.samples) + ", seed=" + std::to_string(policy.seed) + ")";
}

int default_thread_count() {
    if (const char* env = std::getenv("REPDYN_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace {
std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}
}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return splitmix64(splitmix64(splitmix64(seed) ^ a) ^ b);
}

}  // namespace repdyn
