#include "bosim/rng.hpp"

#include <algorithm>
#include <cmath>

namespace bosim {

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Rng Rng::substream(uint64_t master, StreamId id, uint64_t index) {
    uint64_t s = splitmix64(master);
    s = splitmix64(s ^ static_cast<uint64_t>(id));
    s = splitmix64(s ^ index);
    return Rng(s);
}

uint64_t Rng::uniform_int(uint64_t n) {
    if (n == 0) return 0;
    uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % n;
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1, u2;
    do {
        u1 = uniform01();
    } while (u1 <= 0.0);
    u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
}

std::vector<int> Rng::subset(int n, int k) {
    // Floyd's algorithm: uniform over k-subsets without building [0, n)
    std::vector<int> chosen;
    chosen.reserve(k);
    for (int j = n - k; j < n; ++j) {
        int t = static_cast<int>(uniform_int(static_cast<uint64_t>(j) + 1));
        if (std::find(chosen.begin(), chosen.end(), t) != chosen.end())
            chosen.push_back(j);
        else
            chosen.push_back(t);
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

} // namespace bosim
