#ifndef BOSIM_SAMPLING_HPP
#define BOSIM_SAMPLING_HPP

#include "bosim/device.hpp"
#include "bosim/fock.hpp"
#include "bosim/rng.hpp"
#include "bosim/unitary.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace bosim {

enum class OutputScope { all, collision_free };

struct ProbabilityTable {
    // Outcomes as sorted mode lists with repetition (sparse Fock states).
    std::vector<std::vector<int>> outcomes;
    std::vector<double> probs;
    int m = 0;
    OutputScope scope = OutputScope::all;

    FockState state(size_t i) const { return FockState::from_modes(m, outcomes[i]); }
    // Index lookup by occupation; -1 when absent.
    int64_t find(const FockState& s) const;

  private:
    friend ProbabilityTable exact_distribution(const UnitaryMatrix&, const InputConfig&,
                                               OutputScope);
    std::map<std::vector<int>, int64_t> index_;
};

// Brute-force P(t) = |perm(U_{t, input})|^2 / prod t_j! over the scope.
// Restricted (collision-free) tables are renormalized to sum 1.
ProbabilityTable exact_distribution(const UnitaryMatrix& u, const InputConfig& input,
                                    OutputScope scope);

// Exact sequential sampler: photons placed one at a time from conditional
// marginals given by permanents of growing submatrices, over a per-sample
// random column order. Includes collision outputs.
std::vector<SampleRecord> sample_bs(const UnitaryMatrix& u, const InputConfig& input,
                                    int64_t count, uint64_t seed, int threads = 1);

// Classical rival: each photon lands independently with probability |u_ji|^2.
std::vector<SampleRecord> sample_distinguishable(const UnitaryMatrix& u,
                                                 const InputConfig& input, int64_t count,
                                                 uint64_t seed, int threads = 1);

// Uniform over the C(m, n) collision-free outputs.
std::vector<SampleRecord> sample_uniform(int m, int n, int64_t count, uint64_t seed,
                                         int threads = 1);

// Linear mixture: indistinguishable with probability x, else distinguishable.
// With noise.use_g2, an extra photon enters a random configured port with
// probability g2 per trial.
std::vector<SampleRecord> sample_mixture(const UnitaryMatrix& u, const InputConfig& input,
                                         const NoiseModel& noise, int64_t count, uint64_t seed,
                                         int threads = 1);

// Single-trial draws reusing a caller-owned stream (building blocks for the
// batch samplers; exposed for the pipeline's interleaved sampling loop).
FockState draw_bs(const ComplexMatrix& u, const std::vector<int>& cols, Rng& rng);
FockState draw_distinguishable(const ComplexMatrix& u, const std::vector<int>& cols, Rng& rng);

} // namespace bosim

#endif
