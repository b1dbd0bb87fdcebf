#include "bosim/permanent.hpp"
#include "bosim/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

namespace bosim {

namespace {

void check_square(const ComplexMatrix& a, int cap, const char* who) {
    require(a.rows() == a.cols(), ErrorCode::invalid_shape,
            std::string(who) + ": matrix must be square");
    require(a.rows() >= 1, ErrorCode::invalid_shape,
            std::string(who) + ": matrix must be non-empty");
    require(a.rows() <= cap, ErrorCode::size_limit,
            std::string(who) + ": n exceeds cap of " + std::to_string(cap));
}

// Kahan-compensated accumulator for complex terms.
struct Compensated {
    std::complex<double> sum{0.0, 0.0};
    std::complex<double> c{0.0, 0.0};
    void add(std::complex<double> term) {
        const std::complex<double> y = term - c;
        const std::complex<double> t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

} // namespace

std::complex<double> permanent_naive(const ComplexMatrix& a) {
    check_square(a, 9, "permanent_naive");
    const int n = static_cast<int>(a.rows());
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::complex<double> total{0.0, 0.0};
    do {
        std::complex<double> prod{1.0, 0.0};
        for (int i = 0; i < n; ++i) prod *= a(i, perm[i]);
        total += prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

std::complex<double> permanent_ryser(const ComplexMatrix& a) {
    check_square(a, 30, "permanent_ryser");
    const int n = static_cast<int>(a.rows());
    const bool compensate = n >= 16;

    // perm(A) = (-1)^n sum_{S != empty} (-1)^|S| prod_i sum_{j in S} a_ij.
    // Subsets are visited in Gray-code order so each step updates the row
    // sums by a single column.
    std::vector<std::complex<double>> rowsum(n, {0.0, 0.0});
    Compensated comp;
    std::complex<double> plain{0.0, 0.0};
    uint64_t gray_prev = 0;
    const uint64_t count = 1ull << n;
    for (uint64_t k = 1; k < count; ++k) {
        const uint64_t gray = k ^ (k >> 1);
        const uint64_t diff = gray ^ gray_prev;
        const int j = std::countr_zero(diff);
        if (gray & diff) {
            for (int i = 0; i < n; ++i) rowsum[i] += a(i, j);
        } else {
            for (int i = 0; i < n; ++i) rowsum[i] -= a(i, j);
        }
        gray_prev = gray;
        std::complex<double> prod{1.0, 0.0};
        for (int i = 0; i < n; ++i) prod *= rowsum[i];
        const int bits = std::popcount(gray);
        const std::complex<double> term = (bits % 2 == 0) ? prod : -prod;
        if (compensate) comp.add(term); else plain += term;
    }
    const std::complex<double> sum = compensate ? comp.sum : plain;
    return (n % 2 == 0) ? sum : -sum;
}

std::complex<double> permanent_glynn(const ComplexMatrix& a) {
    check_square(a, 30, "permanent_glynn");
    const int n = static_cast<int>(a.rows());
    const bool compensate = n >= 16;

    // perm(A) = 2^(1-n) sum_{d in {+-1}^n, d_1 = +1} (prod d_k) prod_j sum_k d_k a_kj.
    // Column sums start at d = (1,...,1) and flip one sign per Gray-code step.
    std::vector<std::complex<double>> colsum(n);
    for (int j = 0; j < n; ++j) {
        std::complex<double> s{0.0, 0.0};
        for (int i = 0; i < n; ++i) s += a(i, j);
        colsum[j] = s;
    }
    Compensated comp;
    std::complex<double> plain{0.0, 0.0};
    auto emit = [&](std::complex<double> term) {
        if (compensate) comp.add(term); else plain += term;
    };
    {
        std::complex<double> prod{1.0, 0.0};
        for (int j = 0; j < n; ++j) prod *= colsum[j];
        emit(prod);
    }
    uint64_t gray_prev = 0;
    const uint64_t count = 1ull << (n - 1);
    int sign = 1;
    for (uint64_t k = 1; k < count; ++k) {
        const uint64_t gray = k ^ (k >> 1);
        const uint64_t diff = gray ^ gray_prev;
        const int row = std::countr_zero(diff) + 1; // d_0 stays +1
        const double delta = (gray & diff) ? -2.0 : 2.0;
        for (int j = 0; j < n; ++j) colsum[j] += delta * a(row, j);
        gray_prev = gray;
        sign = -sign; // one d_k flipped, so prod(d) flips
        std::complex<double> prod{1.0, 0.0};
        for (int j = 0; j < n; ++j) prod *= colsum[j];
        emit(sign > 0 ? prod : -prod);
    }
    const std::complex<double> sum = compensate ? comp.sum : plain;
    return sum * std::ldexp(1.0, 1 - n);
}

PermanentValue permanent(const ComplexMatrix& a, PermanentAlgo algo) {
    switch (algo) {
        case PermanentAlgo::naive: return {permanent_naive(a), "naive"};
        case PermanentAlgo::glynn: return {permanent_glynn(a), "glynn"};
        case PermanentAlgo::ryser: break;
    }
    return {permanent_ryser(a), "ryser"};
}

PermanentValue permanent(const ComplexMatrix& a) {
    require(a.rows() == a.cols() && a.rows() >= 1, ErrorCode::invalid_shape,
            "permanent: matrix must be square and non-empty");
    if (a.rows() <= 3) return {permanent_naive(a), "naive"};
    return {permanent_ryser(a), "ryser"};
}

std::complex<double> permanent_with_multiplicity(const ComplexMatrix& a,
                                                 const std::vector<int>& rows,
                                                 const std::vector<int>& cols) {
    require(static_cast<Eigen::Index>(rows.size()) == a.rows() &&
                static_cast<Eigen::Index>(cols.size()) == a.cols(),
            ErrorCode::shape_mismatch,
            "permanent_with_multiplicity: multiplicity vectors must match matrix shape");
    long total_rows = 0, total_cols = 0;
    for (int r : rows) {
        require(r >= 0, ErrorCode::invalid_multiset, "permanent_with_multiplicity: negative row multiplicity");
        total_rows += r;
    }
    for (int c : cols) {
        require(c >= 0, ErrorCode::invalid_multiset, "permanent_with_multiplicity: negative column multiplicity");
        total_cols += c;
    }
    require(total_rows == total_cols, ErrorCode::invalid_multiset,
            "permanent_with_multiplicity: row and column multiplicities must sum equally");
    require(total_rows >= 1, ErrorCode::invalid_multiset,
            "permanent_with_multiplicity: empty expansion");
    require(total_rows <= 30, ErrorCode::size_limit,
            "permanent_with_multiplicity: expanded size exceeds 30");
    ComplexMatrix e(total_rows, total_cols);
    int er = 0;
    for (size_t i = 0; i < rows.size(); ++i)
        for (int k = 0; k < rows[i]; ++k, ++er) {
            int ec = 0;
            for (size_t j = 0; j < cols.size(); ++j)
                for (int l = 0; l < cols[j]; ++l, ++ec) e(er, ec) = a(i, j);
        }
    return total_rows <= 3 ? permanent_naive(e) : permanent_ryser(e);
}

} // namespace bosim
