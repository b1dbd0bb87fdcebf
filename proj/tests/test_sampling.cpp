#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bosim/error.hpp>
#include <bosim/permanent.hpp>
#include <bosim/rng.hpp>
#include <bosim/sampling.hpp>
#include <bosim/stats.hpp>
#include <bosim/unitary.hpp>

#include <cmath>
#include <complex>
#include <map>
#include <vector>

using namespace bosim;

namespace {

UnitaryMatrix beamsplitter() {
    ComplexMatrix u(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    u << s, s, s, -s;
    return UnitaryMatrix(u, "test");
}

// Empirical distribution over outcomes keyed by sorted mode list.
std::map<std::vector<int>, double> empirical(const std::vector<SampleRecord>& recs) {
    std::map<std::vector<int>, double> freq;
    for (const auto& r : recs) freq[r.output.mode_list()] += 1.0;
    for (auto& [k, v] : freq) v /= double(recs.size());
    return freq;
}

double tvd_against_table(const std::vector<SampleRecord>& recs, const ProbabilityTable& table) {
    auto freq = empirical(recs);
    double tvd = 0.0;
    for (size_t i = 0; i < table.outcomes.size(); ++i) {
        auto it = freq.find(table.outcomes[i]);
        double f = it == freq.end() ? 0.0 : it->second;
        tvd += std::abs(f - table.probs[i]);
        if (it != freq.end()) freq.erase(it);
    }
    for (auto& [k, v] : freq) tvd += v; // sampled outcomes missing from the table
    return 0.5 * tvd;
}

// Classical occupancy law: permanent of the squared-modulus submatrix over
// collision multiplicities. Independent oracle for the distinguishable sampler.
double distinguishable_prob(const ComplexMatrix& u, const std::vector<int>& cols,
                            const FockState& t) {
    ComplexMatrix b = u.cwiseAbs2().cast<std::complex<double>>();
    std::vector<int> row_mult(t.occ.begin(), t.occ.end());
    ComplexMatrix sub(b.rows(), cols.size());
    for (size_t j = 0; j < cols.size(); ++j) sub.col(j) = b.col(cols[j]);
    std::vector<int> col_mult(cols.size(), 1);
    double denom = 1.0;
    for (int o : t.occ)
        for (int k = 2; k <= o; ++k) denom *= k;
    return permanent_with_multiplicity(sub, row_mult, col_mult).real() / denom;
}

} // namespace

TEST_SUITE("exact distribution") {

TEST_CASE("two-photon interference suppresses the coincidence outcome") {
    UnitaryMatrix u = beamsplitter();
    InputConfig input({0, 1}, 2);
    ProbabilityTable table = exact_distribution(u, input, OutputScope::all);
    REQUIRE(table.outcomes.size() == 3);
    int64_t bunched0 = table.find(FockState::from_modes(2, {0, 0}));
    int64_t coinc = table.find(FockState::from_modes(2, {0, 1}));
    int64_t bunched1 = table.find(FockState::from_modes(2, {1, 1}));
    REQUIRE(bunched0 >= 0);
    REQUIRE(coinc >= 0);
    REQUIRE(bunched1 >= 0);
    CHECK(table.probs[bunched0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(table.probs[coinc] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(table.probs[bunched1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("one photon reduces to the column moduli") {
    UnitaryMatrix u = haar_unitary(6, 99);
    InputConfig input({2}, 6);
    ProbabilityTable table = exact_distribution(u, input, OutputScope::all);
    REQUIRE(table.outcomes.size() == 6);
    for (size_t i = 0; i < table.outcomes.size(); ++i) {
        int j = table.outcomes[i][0];
        CHECK(table.probs[i] == doctest::Approx(std::norm(u.matrix()(j, 2))).epsilon(1e-12));
    }
}

TEST_CASE("tables are normalized and the restricted table is a renormalization") {
    UnitaryMatrix u = haar_unitary(10, 123);
    InputConfig input({0, 4, 7}, 10);
    ProbabilityTable all = exact_distribution(u, input, OutputScope::all);
    ProbabilityTable cf = exact_distribution(u, input, OutputScope::collision_free);
    CHECK(all.outcomes.size() == 220); // C(12, 3) multisets
    CHECK(cf.outcomes.size() == 120);  // C(10, 3) subsets
    double s_all = 0, s_cf = 0;
    for (double p : all.probs) s_all += p;
    for (double p : cf.probs) s_cf += p;
    CHECK(s_all == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(s_cf == doctest::Approx(1.0).epsilon(1e-9));
    // proportionality on the collision-free support
    double mass = 0.0;
    for (size_t i = 0; i < all.outcomes.size(); ++i)
        if (all.state(i).collision_free()) mass += all.probs[i];
    for (size_t i = 0; i < cf.outcomes.size(); ++i) {
        int64_t j = all.find(cf.state(i));
        REQUIRE(j >= 0);
        CHECK(cf.probs[i] == doctest::Approx(all.probs[j] / mass).epsilon(1e-9));
    }
}

TEST_CASE("probabilities follow the permanent of the input submatrix") {
    UnitaryMatrix u = haar_unitary(7, 5);
    InputConfig input({1, 3}, 7);
    ProbabilityTable table = exact_distribution(u, input, OutputScope::all);
    // spot-check one collision and one collision-free outcome against the
    // permanent evaluated on explicitly repeated rows
    FockState bunched = FockState::from_modes(7, {2, 2});
    ComplexMatrix a(2, 2);
    a << u.matrix()(2, 1), u.matrix()(2, 3), u.matrix()(2, 1), u.matrix()(2, 3);
    double expect = std::norm(permanent_naive(a)) / 2.0;
    CHECK(table.probs[table.find(bunched)] == doctest::Approx(expect).epsilon(1e-12));
    FockState split = FockState::from_modes(7, {0, 5});
    ComplexMatrix b(2, 2);
    b << u.matrix()(0, 1), u.matrix()(0, 3), u.matrix()(5, 1), u.matrix()(5, 3);
    CHECK(table.probs[table.find(split)] ==
          doctest::Approx(std::norm(permanent_naive(b))).epsilon(1e-12));
}

TEST_CASE("permuting the output modes relabels the table") {
    UnitaryMatrix u = haar_unitary(5, 17);
    InputConfig input({0, 2}, 5);
    ComplexMatrix pu = u.matrix();
    pu.row(0).swap(pu.row(4));
    UnitaryMatrix v(pu, "test");
    ProbabilityTable tu = exact_distribution(u, input, OutputScope::all);
    ProbabilityTable tv = exact_distribution(v, input, OutputScope::all);
    auto relabel = [](std::vector<int> modes) {
        for (int& x : modes)
            if (x == 0) x = 4;
            else if (x == 4) x = 0;
        std::sort(modes.begin(), modes.end());
        return modes;
    };
    for (size_t i = 0; i < tu.outcomes.size(); ++i) {
        int64_t j = tv.find(FockState::from_modes(5, relabel(tu.outcomes[i])));
        REQUIRE(j >= 0);
        CHECK(tv.probs[j] == doctest::Approx(tu.probs[i]).epsilon(1e-12));
    }
}

TEST_CASE("lookup misses return -1 and guards fire") {
    UnitaryMatrix u = haar_unitary(6, 3);
    InputConfig input({0, 1}, 6);
    ProbabilityTable cf = exact_distribution(u, input, OutputScope::collision_free);
    CHECK(cf.find(FockState::from_modes(6, {2, 2})) == -1);
    CHECK_THROWS_AS(exact_distribution(u, InputConfig({0, 1, 2, 3, 4}, 6), OutputScope::all),
                    Error);
}

}

TEST_SUITE("interfering sampler") {

TEST_CASE("single-photon statistics match the column moduli") {
    UnitaryMatrix u = haar_unitary(6, 41);
    InputConfig input({3}, 6);
    auto recs = sample_bs(u, input, 100000, 7);
    std::vector<size_t> counts(6, 0);
    for (const auto& r : recs) ++counts[r.output.mode_list()[0]];
    std::vector<double> probs(6);
    for (int j = 0; j < 6; ++j) probs[j] = std::norm(u.matrix()(j, 3));
    CHECK(chi2_pvalue(counts, probs) > 1e-4);
    CHECK(recs.front().tag == "bs");
}

TEST_CASE("two-photon interference forbids the coincidence outcome") {
    UnitaryMatrix u = beamsplitter();
    InputConfig input({0, 1}, 2);
    auto recs = sample_bs(u, input, 10000, 13);
    int coinc = 0, bunched = 0;
    for (const auto& r : recs) {
        if (r.output.collision_free()) ++coinc;
        else ++bunched;
    }
    CHECK(coinc == 0);
    CHECK(bunched == 10000);
}

TEST_CASE("empirical distribution converges to the exact table") {
    UnitaryMatrix u = haar_unitary(8, 521);
    InputConfig input({1, 6}, 8);
    auto recs = sample_bs(u, input, 200000, 99);
    ProbabilityTable table = exact_distribution(u, input, OutputScope::all);
    CHECK(tvd_against_table(recs, table) < 0.02);
}

TEST_CASE("draws are independent of the thread count") {
    UnitaryMatrix u = haar_unitary(7, 8);
    InputConfig input({0, 3, 5}, 7);
    auto a = sample_bs(u, input, 500, 4321, 1);
    auto b = sample_bs(u, input, 500, 4321, 3);
    REQUIRE(a.size() == b.size());
    for (size_t t = 0; t < a.size(); ++t) {
        CHECK(a[t].trial == b[t].trial);
        CHECK(a[t].output.occ == b[t].output.occ);
    }
}

}

TEST_SUITE("classical samplers") {

TEST_CASE("distinguishable photons see no interference dip") {
    UnitaryMatrix u = beamsplitter();
    InputConfig input({0, 1}, 2);
    auto recs = sample_distinguishable(u, input, 20000, 5);
    int coinc = 0;
    for (const auto& r : recs)
        if (r.output.collision_free()) ++coinc;
    double sigma = std::sqrt(20000 * 0.5 * 0.5);
    CHECK(std::abs(coinc - 10000) < 3.0 * sigma);
    CHECK(recs.front().tag == "dist");
}

TEST_CASE("occupancy law is the permanent of squared moduli") {
    UnitaryMatrix u = haar_unitary(6, 2027);
    InputConfig input({0, 4}, 6);
    auto recs = sample_distinguishable(u, input, 100000, 23);
    auto freq = empirical(recs);
    double tvd = 0.0;
    double covered = 0.0;
    ProbabilityTable support = exact_distribution(u, input, OutputScope::all);
    for (size_t i = 0; i < support.outcomes.size(); ++i) {
        FockState t = support.state(i);
        double p = distinguishable_prob(u.matrix(), input.modes, t);
        covered += p;
        auto it = freq.find(support.outcomes[i]);
        double f = it == freq.end() ? 0.0 : it->second;
        tvd += std::abs(f - p);
    }
    CHECK(covered == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(0.5 * tvd < 0.02);
}

TEST_CASE("uniform sampler is uniform over collision-free outputs") {
    auto recs = sample_uniform(4, 2, 30000, 77);
    std::map<std::vector<int>, size_t> counts;
    for (const auto& r : recs) {
        REQUIRE(r.output.collision_free());
        ++counts[r.output.mode_list()];
    }
    REQUIRE(counts.size() == 6);
    std::vector<size_t> obs;
    for (auto& [k, v] : counts) obs.push_back(v);
    std::vector<double> probs(6, 1.0 / 6.0);
    CHECK(chi2_pvalue(obs, probs) > 1e-4);
    CHECK(recs.front().tag == "uniform");
}

TEST_CASE("uniform sampler structural checks at device scale") {
    auto recs = sample_uniform(108, 3, 200, 3);
    for (const auto& r : recs) {
        auto modes = r.output.mode_list();
        REQUIRE(modes.size() == 3);
        CHECK(modes[0] < modes[1]);
        CHECK(modes[1] < modes[2]);
        CHECK(modes[2] < 108);
    }
    CHECK_THROWS_AS(sample_uniform(3, 4, 10, 1), Error);
}

}

TEST_SUITE("mixture sampler") {

TEST_CASE("pure limits reproduce the two underlying samplers") {
    UnitaryMatrix u = haar_unitary(5, 31);
    InputConfig input({1, 3}, 5);
    NoiseModel noise;
    noise.eta.assign(5, 1.0);
    noise.use_g2 = false;

    noise.indistinguishability = 1.0;
    auto pure = sample_mixture(u, input, noise, 50000, 11);
    ProbabilityTable table = exact_distribution(u, input, OutputScope::all);
    CHECK(tvd_against_table(pure, table) < 0.03);

    noise.indistinguishability = 0.0;
    auto classical = sample_mixture(u, input, noise, 50000, 12);
    double tvd = 0.0;
    auto freq = empirical(classical);
    for (size_t i = 0; i < table.outcomes.size(); ++i) {
        FockState t = table.state(i);
        double p = distinguishable_prob(u.matrix(), input.modes, t);
        auto it = freq.find(table.outcomes[i]);
        tvd += std::abs((it == freq.end() ? 0.0 : it->second) - p);
    }
    CHECK(0.5 * tvd < 0.03);
    CHECK(pure.front().tag == "mixture");
}

TEST_CASE("partial indistinguishability interpolates the interference dip") {
    UnitaryMatrix u = beamsplitter();
    InputConfig input({0, 1}, 2);
    NoiseModel noise;
    noise.eta.assign(2, 1.0);
    noise.indistinguishability = 0.83;
    noise.use_g2 = false;
    auto recs = sample_mixture(u, input, noise, 40000, 6);
    int coinc = 0;
    for (const auto& r : recs)
        if (r.output.collision_free()) ++coinc;
    double p = (1.0 - 0.83) / 2.0;
    double sigma = std::sqrt(40000 * p * (1 - p));
    CHECK(std::abs(coinc - 40000 * p) < 3.0 * sigma);
}

TEST_CASE("double emission injects an extra photon at the configured rate") {
    UnitaryMatrix u = haar_unitary(6, 8);
    InputConfig input({0, 2}, 6);
    NoiseModel noise;
    noise.eta.assign(6, 1.0);
    noise.indistinguishability = 0.83;
    noise.use_g2 = true;
    noise.g2 = 0.2;
    auto recs = sample_mixture(u, input, noise, 20000, 9);
    int extra = 0;
    for (const auto& r : recs) {
        int n = r.output.photons();
        REQUIRE((n == 2 || n == 3));
        if (n == 3) ++extra;
    }
    double sigma = std::sqrt(20000 * 0.2 * 0.8);
    CHECK(std::abs(extra - 4000) < 3.0 * sigma);
}

}
