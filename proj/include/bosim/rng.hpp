#ifndef BOSIM_RNG_HPP
#define BOSIM_RNG_HPP

#include <cstdint>
#include <random>
#include <vector>

namespace bosim {

// Named sub-streams hanging off one master seed. All randomness in the toolkit
// flows through these so results are reproducible and independent of thread
// scheduling: every parallel unit of work (trial, matrix draw, configuration)
// derives its own stream from (master, stream id, index).
enum class StreamId : uint64_t {
    haar = 1,
    device = 2,
    powers = 3,
    sampler = 4,
    detector = 5,
    tiebreak = 6,
    counts = 7,
    test = 8,
};

uint64_t splitmix64(uint64_t x);

// mt19937_64 wrapper with pinned output maps. The standard pins the raw engine
// sequence but not the distributions, so uniform/normal draws are implemented
// here to keep artifacts byte-identical across standard libraries.
class Rng {
  public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    static Rng substream(uint64_t master, StreamId id, uint64_t index = 0);

    uint64_t next_u64() { return engine_(); }

    // uniform in [0, 1) with 53 random bits
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // unbiased integer in [0, n), rejection sampled
    uint64_t uniform_int(uint64_t n);

    bool bernoulli(double p) { return uniform01() < p; }

    // standard normal, Box-Muller with one cached spare
    double normal();

    // distinct sorted k-subset of {0,...,n-1}, uniform over subsets (Floyd)
    std::vector<int> subset(int n, int k);

    // in-place Fisher-Yates
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = uniform_int(i);
            std::swap(v[i - 1], v[j]);
        }
    }

  private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace bosim

#endif
