#include "bosim/sampling.hpp"
#include "bosim/error.hpp"
#include "bosim/parallel.hpp"
#include "bosim/permanent.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace bosim {

namespace {

double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

// perm of the submatrix with rows `rows` (with repetition) and columns `cols`
// (with repetition); empty matrix has permanent 1.
std::complex<double> subpermanent(const ComplexMatrix& u, const std::vector<int>& rows,
                                  const std::vector<int>& cols) {
    const int n = static_cast<int>(rows.size());
    if (n == 0) return {1.0, 0.0};
    ComplexMatrix b(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) b(i, j) = u(rows[i], cols[j]);
    return n <= 3 ? permanent_naive(b) : permanent_ryser(b);
}

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

std::vector<SampleRecord> batch(int64_t count, uint64_t seed, int threads, const char* tag,
                                const std::function<FockState(Rng&)>& draw) {
    require(count >= 0, ErrorCode::invalid_shape, "sampler: negative draw count");
    std::vector<SampleRecord> out(count);
    parallel_for(static_cast<size_t>(count), threads, [&](size_t t) {
        Rng rng = Rng::substream(seed, StreamId::sampler, t);
        out[t].trial = static_cast<int64_t>(t);
        out[t].output = draw(rng);
        out[t].tag = tag;
        out[t].kept = true;
    });
    return out;
}

} // namespace

int64_t ProbabilityTable::find(const FockState& s) const {
    const auto it = index_.find(s.mode_list());
    return it == index_.end() ? -1 : it->second;
}

ProbabilityTable exact_distribution(const UnitaryMatrix& u, const InputConfig& input,
                                    OutputScope scope) {
    const int m = u.dim();
    const int n = input.photons();
    require(n <= 4, ErrorCode::size_limit, "exact_distribution: n > 4 not enumerable here");
    for (int i : input.modes)
        require(i >= 0 && i < m, ErrorCode::invalid_shape,
                "exact_distribution: input mode out of range");
    const double n_outputs =
        scope == OutputScope::all ? binom(m + n - 1, n) : binom(m, n);
    require(n_outputs <= 1e7, ErrorCode::enumeration_too_large,
            "exact_distribution: output space exceeds 1e7");

    ProbabilityTable table;
    table.m = m;
    table.scope = scope;
    std::vector<int> rows(n, 0); // non-decreasing output mode list
    double total = 0.0;
    while (true) {
        bool collision = false;
        for (int i = 0; i + 1 < n; ++i)
            if (rows[i] == rows[i + 1]) collision = true;
        if (scope == OutputScope::all || !collision) {
            const std::complex<double> per = subpermanent(u.matrix(), rows, input.modes);
            double tfact = 1.0;
            int run = 1;
            for (int i = 1; i <= n; ++i) {
                if (i < n && rows[i] == rows[i - 1]) {
                    ++run;
                } else {
                    tfact *= factorial(run);
                    run = 1;
                }
            }
            const double p = std::norm(per) / tfact;
            table.index_[rows] = static_cast<int64_t>(table.outcomes.size());
            table.outcomes.push_back(rows);
            table.probs.push_back(p);
            total += p;
        }
        // next non-decreasing tuple
        int i = n - 1;
        while (i >= 0 && rows[i] == m - 1) --i;
        if (i < 0) break;
        const int v = rows[i] + 1;
        for (int jj = i; jj < n; ++jj) rows[jj] = v;
    }
    if (scope == OutputScope::collision_free) {
        require(total > 0.0, ErrorCode::invalid_distribution,
                "exact_distribution: zero mass on collision-free outputs");
        for (double& p : table.probs) p /= total;
    }
    return table;
}

FockState draw_bs(const ComplexMatrix& u, const std::vector<int>& cols, Rng& rng) {
    const int m = static_cast<int>(u.rows());
    const int n = static_cast<int>(cols.size());
    require(n >= 1 && n <= 20, ErrorCode::size_limit, "draw_bs: photon number outside 1..20");
    std::vector<int> order = cols;
    rng.shuffle(order); // random photon ordering makes the sequential law exact
    std::vector<int> rows;
    rows.reserve(n);
    std::vector<double> w(m);
    std::vector<int> sub_cols;
    for (int k = 1; k <= n; ++k) {
        // Laplace expansion along the new row: the k sub-permanents over the
        // already-chosen rows are shared by every candidate mode j.
        std::vector<std::complex<double>> per_sub(k);
        for (int c = 0; c < k; ++c) {
            sub_cols.clear();
            for (int cc = 0; cc < k; ++cc)
                if (cc != c) sub_cols.push_back(order[cc]);
            per_sub[c] = subpermanent(u, rows, sub_cols);
        }
        double total = 0.0;
        for (int j = 0; j < m; ++j) {
            std::complex<double> amp{0.0, 0.0};
            for (int c = 0; c < k; ++c) amp += u(j, order[c]) * per_sub[c];
            w[j] = std::norm(amp);
            total += w[j];
        }
        require(total > 0.0, ErrorCode::invalid_distribution,
                "draw_bs: vanishing conditional weights");
        double x = rng.uniform01() * total;
        int pick = m - 1;
        for (int j = 0; j < m; ++j) {
            x -= w[j];
            if (x <= 0.0) {
                pick = j;
                break;
            }
        }
        rows.push_back(pick);
        std::sort(rows.begin(), rows.end());
    }
    return FockState::from_modes(m, rows);
}

FockState draw_distinguishable(const ComplexMatrix& u, const std::vector<int>& cols, Rng& rng) {
    const int m = static_cast<int>(u.rows());
    FockState s(m);
    for (int col : cols) {
        double x = rng.uniform01();
        int pick = m - 1;
        for (int j = 0; j < m; ++j) {
            x -= std::norm(u(j, col));
            if (x <= 0.0) {
                pick = j;
                break;
            }
        }
        ++s.occ[pick];
    }
    return s;
}

std::vector<SampleRecord> sample_bs(const UnitaryMatrix& u, const InputConfig& input,
                                    int64_t count, uint64_t seed, int threads) {
    require(input.photons() <= 20, ErrorCode::size_limit, "sample_bs: n > 20");
    return batch(count, seed, threads, "bs",
                 [&](Rng& rng) { return draw_bs(u.matrix(), input.modes, rng); });
}

std::vector<SampleRecord> sample_distinguishable(const UnitaryMatrix& u,
                                                 const InputConfig& input, int64_t count,
                                                 uint64_t seed, int threads) {
    require(input.photons() <= 20, ErrorCode::size_limit, "sample_distinguishable: n > 20");
    return batch(count, seed, threads, "dist",
                 [&](Rng& rng) { return draw_distinguishable(u.matrix(), input.modes, rng); });
}

std::vector<SampleRecord> sample_uniform(int m, int n, int64_t count, uint64_t seed,
                                         int threads) {
    require(n >= 1 && n <= m, ErrorCode::invalid_shape,
            "sample_uniform: need 1 <= n <= m");
    return batch(count, seed, threads, "uniform", [&](Rng& rng) {
        return FockState::from_modes(m, rng.subset(m, n));
    });
}

std::vector<SampleRecord> sample_mixture(const UnitaryMatrix& u, const InputConfig& input,
                                         const NoiseModel& noise, int64_t count, uint64_t seed,
                                         int threads) {
    require(input.photons() <= 20, ErrorCode::size_limit, "sample_mixture: n > 20");
    const double x = noise.indistinguishability;
    require(x >= 0.0 && x <= 1.0, ErrorCode::invalid_config,
            "sample_mixture: indistinguishability outside [0,1]");
    return batch(count, seed, threads, "mixture", [&](Rng& rng) {
        std::vector<int> cols = input.modes;
        if (noise.use_g2 && rng.bernoulli(noise.g2)) {
            // source double emission: one extra photon in a random configured port
            cols.push_back(input.modes[rng.uniform_int(input.modes.size())]);
        }
        return rng.bernoulli(x) ? draw_bs(u.matrix(), cols, rng)
                                : draw_distinguishable(u.matrix(), cols, rng);
    });
}

} // namespace bosim
