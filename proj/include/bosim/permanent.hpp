#ifndef BOSIM_PERMANENT_HPP
#define BOSIM_PERMANENT_HPP

#include "bosim/unitary.hpp"

#include <complex>
#include <string>
#include <vector>

namespace bosim {

// perm(A) by explicit sum over permutations; O(n * n!), intended as an
// independent oracle for the fast evaluators. n <= 9.
std::complex<double> permanent_naive(const ComplexMatrix& a);

// Ryser's formula with Gray-code subset updates, O(2^n * n). Row sums are
// Kahan-compensated for n >= 16. n <= 30.
std::complex<double> permanent_ryser(const ComplexMatrix& a);

// Glynn's formula over +-1 vectors with Gray-code updates, O(2^(n-1) * n).
// Same compensation policy and size cap as Ryser.
std::complex<double> permanent_glynn(const ComplexMatrix& a);

enum class PermanentAlgo { naive, ryser, glynn };

struct PermanentValue {
    std::complex<double> value;
    std::string algorithm; // "naive" | "ryser" | "glynn"
};

PermanentValue permanent(const ComplexMatrix& a, PermanentAlgo algo);

// Dispatcher: naive for n <= 3, Ryser otherwise.
PermanentValue permanent(const ComplexMatrix& a);

// Permanent of the matrix whose rows/columns are repeated with the given
// multiplicities: rows[i] copies of row i of `a`, cols[j] copies of column j.
// Computed by expanding the repetition explicitly; expanded size <= 30.
std::complex<double> permanent_with_multiplicity(const ComplexMatrix& a,
                                                 const std::vector<int>& rows,
                                                 const std::vector<int>& cols);

} // namespace bosim

#endif
