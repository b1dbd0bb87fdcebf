#include "bosim/validation.hpp"
#include "bosim/error.hpp"
#include "bosim/log.hpp"
#include "bosim/parallel.hpp"
#include "bosim/permanent.hpp"
#include "bosim/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

namespace bosim {

bool ValidationTrace::rejects_null(double trailing_fraction) const {
    if (counter.empty()) return false;
    const size_t k = counter.size();
    const size_t tail = std::max<size_t>(1, static_cast<size_t>(std::ceil(k * trailing_fraction)));
    for (size_t i = k - tail; i < k; ++i)
        if (static_cast<double>(counter[i]) <= band[i]) return false;
    return true;
}

namespace {

void fill_band(ValidationTrace& tr, size_t k_events) {
    tr.band.resize(k_events);
    for (size_t k = 0; k < k_events; ++k) tr.band[k] = 3.0 * std::sqrt(static_cast<double>(k + 1));
}

void check_fold(const InputConfig& input, const SampleRecord& s, bool need_collision_free) {
    require(s.output.photons() == input.photons(), ErrorCode::invalid_fold,
            "counter: sample fold does not match input fold");
    if (need_collision_free)
        require(s.output.collision_free(), ErrorCode::invalid_fold,
                "counter: collision sample where collision-free events are required");
}

} // namespace

ValidationTrace wk_counter(const UnitaryMatrix& u, const InputConfig& input,
                           const std::vector<SampleRecord>& samples, int threads) {
    const int m = u.dim();
    const int n = input.photons();
    require(n >= 1, ErrorCode::invalid_fold, "wk_counter: empty input");
    // score events in parallel, fold sequentially
    std::vector<double> r(samples.size());
    parallel_for(samples.size(), threads, [&](size_t idx) {
        const SampleRecord& s = samples[idx];
        check_fold(input, s, true);
        double prod = 1.0;
        for (int i : input.modes) {
            double rowsum = 0.0;
            for (int j = 0; j < m; ++j)
                if (s.output.occ[j] > 0) rowsum += std::norm(u.matrix()(j, i));
            prod *= (static_cast<double>(m) / n) * rowsum;
        }
        r[idx] = prod;
    });
    ValidationTrace tr;
    tr.null_tag = "uniform";
    tr.counter.resize(samples.size());
    int64_t w = 0;
    for (size_t k = 0; k < samples.size(); ++k) {
        w += r[k] > 1.0 ? 1 : -1;
        tr.counter[k] = w;
    }
    fill_band(tr, samples.size());
    return tr;
}

ValidationTrace ck_counter(const UnitaryMatrix& u, const InputConfig& input,
                           const std::vector<SampleRecord>& samples, uint64_t tiebreak_seed,
                           int threads) {
    const int n = input.photons();
    require(n >= 1 && n <= 4, ErrorCode::invalid_fold, "ck_counter: fold must be 1..4");
    // scores: +1 / -1 / 0 (exact tie) / NaN sentinel for degenerate events
    std::vector<double> score(samples.size());
    parallel_for(samples.size(), threads, [&](size_t idx) {
        const SampleRecord& s = samples[idx];
        check_fold(input, s, false);
        const std::vector<int> rows = s.output.mode_list();
        const int k = static_cast<int>(rows.size());
        ComplexMatrix sub(k, k);
        ComplexMatrix sub_abs2(k, k);
        for (int a = 0; a < k; ++a)
            for (int b = 0; b < k; ++b) {
                sub(a, b) = u.matrix()(rows[a], input.modes[b]);
                sub_abs2(a, b) = std::norm(sub(a, b));
            }
        const double p_ind = std::norm(k <= 3 ? permanent_naive(sub) : permanent_ryser(sub));
        const double p_dist =
            (k <= 3 ? permanent_naive(sub_abs2) : permanent_ryser(sub_abs2)).real();
        if (p_dist <= 0.0) {
            score[idx] = std::numeric_limits<double>::quiet_NaN();
        } else if (p_ind > p_dist) {
            score[idx] = 1.0;
        } else if (p_ind < p_dist) {
            score[idx] = -1.0;
        } else {
            score[idx] = 0.0;
        }
    });
    ValidationTrace tr;
    tr.null_tag = "distinguishable";
    Rng coin = Rng::substream(tiebreak_seed, StreamId::tiebreak, 0);
    int64_t c = 0;
    for (size_t k = 0; k < samples.size(); ++k) {
        if (std::isnan(score[k])) {
            ++tr.skipped;
            log_debug("ck_counter: degenerate event skipped at index ", k);
            continue;
        }
        int step;
        if (score[k] > 0.0) {
            step = 1;
        } else if (score[k] < 0.0) {
            step = -1;
        } else {
            step = coin.bernoulli(0.5) ? 1 : -1; // exact tie: fair coin
        }
        c += step;
        tr.counter.push_back(c);
    }
    fill_band(tr, tr.counter.size());
    return tr;
}

void save_trace_csv(const std::string& path, const ValidationTrace& trace) {
    std::ofstream f(path);
    require(f.good(), ErrorCode::io_error, "save_trace_csv: cannot open " + path);
    f << "k,counter,band\n";
    for (size_t k = 0; k < trace.counter.size(); ++k)
        f << (k + 1) << "," << trace.counter[k] << "," << trace.band[k] << "\n";
    require(f.good(), ErrorCode::io_error, "save_trace_csv: write failed");
}

double similarity(std::span<const double> d1, std::span<const double> d2) {
    require(d1.size() == d2.size(), ErrorCode::shape_mismatch, "similarity: size mismatch");
    require(!d1.empty(), ErrorCode::invalid_distribution, "similarity: empty distributions");
    double s1 = 0.0, s2 = 0.0, bc = 0.0;
    for (size_t i = 0; i < d1.size(); ++i) {
        require(d1[i] >= 0.0 && d2[i] >= 0.0, ErrorCode::invalid_distribution,
                "similarity: negative entry");
        s1 += d1[i];
        s2 += d2[i];
        bc += std::sqrt(d1[i] * d2[i]);
    }
    require(std::abs(s1 - 1.0) <= 1e-9 && std::abs(s2 - 1.0) <= 1e-9,
            ErrorCode::invalid_distribution, "similarity: inputs must sum to 1 within 1e-9");
    return bc * bc;
}

namespace {

std::vector<int> all_modes(int m) {
    std::vector<int> v(m);
    for (int i = 0; i < m; ++i) v[i] = i;
    return v;
}

std::vector<double> restricted_column(const ComplexMatrix& u, int col,
                                      const std::vector<int>& rows) {
    std::vector<double> d(rows.size());
    double total = 0.0;
    for (size_t k = 0; k < rows.size(); ++k) {
        d[k] = std::norm(u(rows[k], col));
        total += d[k];
    }
    require(total > 0.0, ErrorCode::invalid_distribution,
            "restricted_column: zero mass on restriction");
    for (double& x : d) x /= total;
    return d;
}

void finish_report(SimilarityReport& rep) {
    const MeanSd ms = mean_sd(rep.similarities);
    rep.mean = ms.mean;
    rep.sd = ms.sd;
}

} // namespace

std::vector<double> haar_moduli_pool(int m, int n_matrices, uint64_t seed,
                                     const std::vector<int>& restricted_modes) {
    require(n_matrices >= 1, ErrorCode::invalid_shape, "haar_moduli_pool: need n_matrices >= 1");
    const std::vector<int> rows = restricted_modes.empty() ? all_modes(m) : restricted_modes;
    require(!rows.empty(), ErrorCode::invalid_subset, "haar_moduli_pool: empty restriction");
    std::vector<double> pool;
    pool.reserve(static_cast<size_t>(n_matrices) * rows.size() * m);
    for (int t = 0; t < n_matrices; ++t) {
        const UnitaryMatrix u = haar_unitary(m, splitmix64(seed + static_cast<uint64_t>(t)));
        for (int row : rows)
            for (int j = 0; j < m; ++j) pool.push_back(std::norm(u.matrix()(row, j)));
    }
    return pool;
}

std::vector<double> column_similarities(const ComplexMatrix& u, const std::vector<int>& columns,
                                        const std::vector<int>& restricted_modes) {
    require(columns.size() >= 2, ErrorCode::invalid_shape,
            "column_similarities: need at least two columns");
    const std::vector<int> rows =
        restricted_modes.empty() ? all_modes(static_cast<int>(u.rows())) : restricted_modes;
    require(!rows.empty(), ErrorCode::invalid_subset, "column_similarities: empty restriction");
    std::vector<std::vector<double>> dists;
    dists.reserve(columns.size());
    for (int c : columns) dists.push_back(restricted_column(u, c, rows));
    std::vector<double> sims;
    for (size_t a = 0; a < dists.size(); ++a)
        for (size_t b = a + 1; b < dists.size(); ++b) sims.push_back(similarity(dists[a], dists[b]));
    return sims;
}

std::vector<double> cross_column_similarities(const ComplexMatrix& a, const ComplexMatrix& b,
                                              const std::vector<int>& columns,
                                              const std::vector<int>& restricted_modes) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorCode::shape_mismatch,
            "cross_column_similarities: matrix shapes differ");
    require(!columns.empty(), ErrorCode::invalid_shape,
            "cross_column_similarities: need at least one column");
    const std::vector<int> rows =
        restricted_modes.empty() ? all_modes(static_cast<int>(a.rows())) : restricted_modes;
    require(!rows.empty(), ErrorCode::invalid_subset,
            "cross_column_similarities: empty restriction");
    std::vector<double> sims;
    sims.reserve(columns.size());
    for (int c : columns)
        sims.push_back(similarity(restricted_column(a, c, rows), restricted_column(b, c, rows)));
    return sims;
}

std::vector<double> two_photon_distribution(const ComplexMatrix& u, int i1, int i2,
                                            const std::vector<int>& restricted_modes) {
    const std::vector<int> rows =
        restricted_modes.empty() ? all_modes(static_cast<int>(u.rows())) : restricted_modes;
    require(rows.size() >= 2, ErrorCode::invalid_subset,
            "two_photon_distribution: restriction needs >= 2 modes");
    std::vector<double> d;
    d.reserve(rows.size() * (rows.size() - 1) / 2);
    double total = 0.0;
    for (size_t a = 0; a < rows.size(); ++a)
        for (size_t b = a + 1; b < rows.size(); ++b) {
            const std::complex<double> amp = u(rows[a], i1) * u(rows[b], i2) +
                                             u(rows[b], i1) * u(rows[a], i2);
            const double p = std::norm(amp);
            d.push_back(p);
            total += p;
        }
    require(total > 0.0, ErrorCode::invalid_distribution,
            "two_photon_distribution: zero collision-free mass");
    for (double& x : d) x /= total;
    return d;
}

SimilarityReport haar_column_report(int m, int n_matrices, uint64_t seed, int n_columns,
                                    const std::vector<int>& restricted_modes) {
    require(n_matrices >= 2, ErrorCode::invalid_shape, "haar_column_report: need >= 2 matrices");
    require(n_columns >= 2 && n_columns <= m, ErrorCode::invalid_shape,
            "haar_column_report: bad column count");
    SimilarityReport rep;
    std::vector<int> cols(n_columns);
    for (int c = 0; c < n_columns; ++c) cols[c] = c;
    for (int t = 0; t < n_matrices; ++t) {
        const UnitaryMatrix u = haar_unitary(m, splitmix64(seed + static_cast<uint64_t>(t)));
        const auto sims = column_similarities(u.matrix(), cols, restricted_modes);
        rep.similarities.insert(rep.similarities.end(), sims.begin(), sims.end());
    }
    finish_report(rep);
    rep.haar_mean = rep.mean;
    rep.haar_sd = rep.sd;
    return rep;
}

SimilarityReport haar_two_photon_report(int m, int n_matrices, uint64_t seed, int n_input_pairs,
                                        const std::vector<int>& restricted_modes) {
    require(n_matrices >= 2, ErrorCode::invalid_shape,
            "haar_two_photon_report: need >= 2 matrices");
    require(n_input_pairs >= 2 && 2 * n_input_pairs <= m, ErrorCode::invalid_shape,
            "haar_two_photon_report: bad input-pair count");
    SimilarityReport rep;
    for (int t = 0; t < n_matrices; ++t) {
        const UnitaryMatrix u = haar_unitary(m, splitmix64(seed + static_cast<uint64_t>(t)));
        std::vector<std::vector<double>> dists;
        for (int p = 0; p < n_input_pairs; ++p)
            dists.push_back(two_photon_distribution(u.matrix(), 2 * p, 2 * p + 1,
                                                    restricted_modes));
        for (size_t a = 0; a < dists.size(); ++a)
            for (size_t b = a + 1; b < dists.size(); ++b)
                rep.similarities.push_back(similarity(dists[a], dists[b]));
    }
    finish_report(rep);
    rep.haar_mean = rep.mean;
    rep.haar_sd = rep.sd;
    return rep;
}

void save_similarity_report(const std::string& path, const SimilarityReport& report,
                            uint64_t seed) {
    nlohmann::json j;
    j["seed"] = seed;
    j["mean"] = report.mean;
    j["sd"] = report.sd;
    j["haar_mean"] = report.haar_mean;
    j["haar_sd"] = report.haar_sd;
    j["similarities"] = report.similarities;
    std::ofstream f(path);
    require(f.good(), ErrorCode::io_error, "save_similarity_report: cannot open " + path);
    f << j.dump(2) << "\n";
    require(f.good(), ErrorCode::io_error, "save_similarity_report: write failed");
}

} // namespace bosim
