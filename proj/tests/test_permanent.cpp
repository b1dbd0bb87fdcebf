#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bosim/error.hpp>
#include <bosim/permanent.hpp>
#include <bosim/rng.hpp>
#include <bosim/unitary.hpp>

#include <cmath>
#include <complex>
#include <vector>

using namespace bosim;
using cd = std::complex<double>;

namespace {

ComplexMatrix random_complex(int n, uint64_t index) {
    Rng rng = Rng::substream(600, StreamId::test, index);
    ComplexMatrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = cd(rng.normal(), rng.normal());
    return a;
}

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

} // namespace

TEST_SUITE("closed forms") {

TEST_CASE("identity, all-ones, and the 2x2 formula") {
    CHECK(std::abs(permanent_naive(ComplexMatrix::Identity(3, 3)) - cd(1.0)) < 1e-14);
    // perm(J_n) = n!
    for (int n : {2, 3, 4, 5}) {
        ComplexMatrix ones = ComplexMatrix::Ones(n, n);
        CHECK(std::abs(permanent_ryser(ones) - cd(factorial(n))) < 1e-11 * factorial(n));
        CHECK(std::abs(permanent_glynn(ones) - cd(factorial(n))) < 1e-11 * factorial(n));
    }
    ComplexMatrix a(2, 2);
    a << cd(1, 2), cd(3, -1), cd(0, 1), cd(2, 2);
    cd expect = a(0, 0) * a(1, 1) + a(0, 1) * a(1, 0);
    CHECK(std::abs(permanent_naive(a) - expect) < 1e-14);
    CHECK(std::abs(permanent_ryser(a) - expect) < 1e-14);
    CHECK(std::abs(permanent_glynn(a) - expect) < 1e-14);
}

TEST_CASE("1x1 matrix") {
    ComplexMatrix a(1, 1);
    a(0, 0) = cd(2.5, -1.5);
    CHECK(permanent_naive(a) == a(0, 0));
    CHECK(permanent_ryser(a) == a(0, 0));
    CHECK(std::abs(permanent_glynn(a) - a(0, 0)) < 1e-14);
}

}

TEST_SUITE("evaluator agreement") {

TEST_CASE("ryser and glynn agree with the permutation sum for n = 2..7") {
    for (int n = 2; n <= 7; ++n) {
        for (int rep = 0; rep < 4; ++rep) {
            ComplexMatrix a = random_complex(n, 10 * n + rep);
            cd oracle = permanent_naive(a);
            double scale = std::max(1.0, std::abs(oracle));
            CHECK(std::abs(permanent_ryser(a) - oracle) < 1e-11 * scale);
            CHECK(std::abs(permanent_glynn(a) - oracle) < 1e-11 * scale);
        }
    }
}

TEST_CASE("ryser and glynn agree with each other at n = 16 and n = 20") {
    for (int n : {16, 20}) {
        ComplexMatrix a = haar_unitary(n, 77).matrix();
        cd r = permanent_ryser(a);
        cd g = permanent_glynn(a);
        CHECK(std::abs(r - g) < 1e-9 * std::max(1.0, std::abs(r)));
    }
}

TEST_CASE("permanent is linear in each row") {
    ComplexMatrix a = random_complex(5, 3);
    ComplexMatrix b = a, c = a;
    ComplexMatrix extra = random_complex(5, 4);
    cd alpha(0.7, -0.2);
    b.row(2) = extra.row(2);
    c.row(2) = a.row(2) + alpha * extra.row(2);
    cd lhs = permanent_ryser(c);
    cd rhs = permanent_ryser(a) + alpha * permanent_ryser(b);
    CHECK(std::abs(lhs - rhs) < 1e-12 * std::max(1.0, std::abs(rhs)));
}

TEST_CASE("permanent is invariant under transpose and row swap") {
    ComplexMatrix a = random_complex(6, 5);
    cd p = permanent_ryser(a);
    CHECK(std::abs(permanent_ryser(a.transpose()) - p) < 1e-12 * std::abs(p));
    ComplexMatrix swapped = a;
    swapped.row(0).swap(swapped.row(3));
    CHECK(std::abs(permanent_ryser(swapped) - p) < 1e-12 * std::abs(p));
}

}

TEST_SUITE("dispatcher") {

TEST_CASE("algorithm tags and selection") {
    ComplexMatrix small = random_complex(3, 6);
    ComplexMatrix mid = random_complex(6, 7);
    CHECK(permanent(small).algorithm == "naive");
    CHECK(permanent(mid).algorithm == "ryser");
    CHECK(permanent(mid, PermanentAlgo::glynn).algorithm == "glynn");
    cd v1 = permanent(mid, PermanentAlgo::naive).value;
    cd v2 = permanent(mid, PermanentAlgo::ryser).value;
    CHECK(std::abs(v1 - v2) < 1e-11 * std::max(1.0, std::abs(v1)));
}

TEST_CASE("size caps and shape checks raise typed errors") {
    ComplexMatrix rect(2, 3);
    rect.setOnes();
    CHECK_THROWS_AS(permanent_naive(rect), Error);
    ComplexMatrix big10 = ComplexMatrix::Identity(10, 10);
    CHECK_THROWS_AS(permanent_naive(big10), Error);
    ComplexMatrix big31 = ComplexMatrix::Identity(31, 31);
    CHECK_THROWS_AS(permanent_ryser(big31), Error);
    CHECK_THROWS_AS(permanent_glynn(big31), Error);
    try {
        permanent_ryser(big31);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::size_limit);
    }
    try {
        permanent_naive(rect);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::invalid_shape);
    }
}

}

TEST_SUITE("multiplicity") {

TEST_CASE("doubling a 1x1 entry squares it with the collision factor") {
    ComplexMatrix a(1, 1);
    a(0, 0) = cd(1.5, 0.5);
    // perm of [[a, a], [a, a]] = 2 a^2
    cd v = permanent_with_multiplicity(a, {2}, {2});
    CHECK(std::abs(v - 2.0 * a(0, 0) * a(0, 0)) < 1e-13);
}

TEST_CASE("all multiplicities one reduces to the plain permanent") {
    ComplexMatrix a = random_complex(4, 8);
    cd v = permanent_with_multiplicity(a, {1, 1, 1, 1}, {1, 1, 1, 1});
    CHECK(std::abs(v - permanent_naive(a)) < 1e-12 * std::max(1.0, std::abs(v)));
}

TEST_CASE("matches an explicitly expanded matrix") {
    ComplexMatrix a = random_complex(3, 9);
    std::vector<int> rows{1, 2, 0}, cols{1, 1, 1};
    ComplexMatrix expanded(3, 3);
    expanded.row(0) = a.row(0);
    expanded.row(1) = a.row(1);
    expanded.row(2) = a.row(1);
    cd v = permanent_with_multiplicity(a, rows, cols);
    cd oracle = permanent_naive(expanded);
    CHECK(std::abs(v - oracle) < 1e-12 * std::max(1.0, std::abs(oracle)));
}

TEST_CASE("row and column totals must agree") {
    ComplexMatrix a = random_complex(3, 11);
    CHECK_THROWS_AS(permanent_with_multiplicity(a, {1, 1, 1}, {2, 1, 1}), Error);
    try {
        permanent_with_multiplicity(a, {1, 1, 1}, {2, 1, 1});
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::invalid_multiset);
    }
}

TEST_CASE("negative multiplicities are rejected") {
    ComplexMatrix a = random_complex(2, 12);
    CHECK_THROWS_AS(permanent_with_multiplicity(a, {2, -1}, {1, 0}), Error);
}

}
