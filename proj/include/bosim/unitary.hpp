#ifndef BOSIM_UNITARY_HPP
#define BOSIM_UNITARY_HPP

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <string>

namespace bosim {

using ComplexMatrix = Eigen::MatrixXcd;

// Max-norm of U^dagger U - I.
double unitarity_defect(const ComplexMatrix& u);

// A matrix that has passed the unitarity gate, tagged with where it came from.
class UnitaryMatrix {
  public:
    static constexpr double kDefectTolerance = 1e-10;

    // Throws ErrorCode::unitarity_violation if the defect exceeds tolerance.
    UnitaryMatrix(ComplexMatrix u, std::string provenance);

    // Re-projects via polar decomposition (SVD, U = W V^dagger) before gating.
    static UnitaryMatrix project(const ComplexMatrix& u, std::string provenance);

    const ComplexMatrix& matrix() const { return u_; }
    int dim() const { return static_cast<int>(u_.rows()); }
    const std::string& provenance() const { return provenance_; }
    double defect() const { return defect_; }

  private:
    ComplexMatrix u_;
    std::string provenance_;
    double defect_;
};

// Haar-distributed m x m unitary: complex Ginibre draw, thin QR, then each
// column j is multiplied by phase(R_jj) so the factorization is the unique one
// with positive-real diagonal R. Deterministic in (m, seed).
UnitaryMatrix haar_unitary(int m, uint64_t seed);

// exp(-i * h * dz) for Hermitian h (max-norm hermiticity check, tol 1e-12),
// via eigendecomposition. Tagged "device" since it is the evolution primitive.
UnitaryMatrix expm_hermitian(const ComplexMatrix& h, double dz);

// JSON file I/O: {"m": <int>, "entries": [[re, im], ...]} in row-major order.
void save_unitary(const std::string& path, const UnitaryMatrix& u);
UnitaryMatrix load_unitary(const std::string& path);

} // namespace bosim

#endif
