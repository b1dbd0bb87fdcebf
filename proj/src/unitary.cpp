#include "bosim/unitary.hpp"
#include "bosim/error.hpp"
#include "bosim/rng.hpp"

#include <json.hpp>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <cmath>
#include <fstream>

namespace bosim {

double unitarity_defect(const ComplexMatrix& u) {
    const ComplexMatrix g = u.adjoint() * u;
    const Eigen::Index m = u.cols();
    return (g - ComplexMatrix::Identity(m, m)).cwiseAbs().maxCoeff();
}

UnitaryMatrix::UnitaryMatrix(ComplexMatrix u, std::string provenance)
    : u_(std::move(u)), provenance_(std::move(provenance)) {
    require(u_.rows() == u_.cols() && u_.rows() >= 1, ErrorCode::invalid_dimension,
            "UnitaryMatrix: matrix must be square and non-empty");
    defect_ = unitarity_defect(u_);
    require(defect_ <= kDefectTolerance, ErrorCode::unitarity_violation,
            "UnitaryMatrix: defect " + std::to_string(defect_) + " exceeds tolerance");
    for (Eigen::Index i = 0; i < u_.rows(); ++i) {
        const double row = u_.row(i).squaredNorm();
        const double col = u_.col(i).squaredNorm();
        require(std::abs(row - 1.0) <= kDefectTolerance && std::abs(col - 1.0) <= kDefectTolerance,
                ErrorCode::unitarity_violation,
                "UnitaryMatrix: row/column norm off unity at index " + std::to_string(i));
    }
}

UnitaryMatrix UnitaryMatrix::project(const ComplexMatrix& u, std::string provenance) {
    require(u.rows() == u.cols() && u.rows() >= 1, ErrorCode::invalid_dimension,
            "UnitaryMatrix::project: matrix must be square and non-empty");
    Eigen::JacobiSVD<ComplexMatrix> svd(u, Eigen::ComputeFullU | Eigen::ComputeFullV);
    ComplexMatrix polar = svd.matrixU() * svd.matrixV().adjoint();
    return UnitaryMatrix(std::move(polar), std::move(provenance));
}

UnitaryMatrix haar_unitary(int m, uint64_t seed) {
    require(m >= 1, ErrorCode::invalid_dimension, "haar_unitary: m must be positive");
    Rng rng = Rng::substream(seed, StreamId::haar, 0);
    ComplexMatrix g(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            g(i, j) = std::complex<double>(rng.normal(), rng.normal());
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ();
    ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the gauge: scale column j by phase(R_jj) so diag(R) becomes positive
    // real; this removes the QR ambiguity and makes Q exactly Haar.
    for (int j = 0; j < m; ++j) {
        const std::complex<double> d = r(j, j);
        const double a = std::abs(d);
        const std::complex<double> phase = a > 0.0 ? d / a : std::complex<double>(1.0, 0.0);
        q.col(j) *= phase;
    }
    return UnitaryMatrix(std::move(q), "haar");
}

UnitaryMatrix expm_hermitian(const ComplexMatrix& h, double dz) {
    require(h.rows() == h.cols() && h.rows() >= 1, ErrorCode::invalid_dimension,
            "expm_hermitian: matrix must be square and non-empty");
    require(dz > 0.0, ErrorCode::invalid_shape, "expm_hermitian: dz must be positive");
    const double herm_defect = (h - h.adjoint()).cwiseAbs().maxCoeff();
    require(herm_defect <= 1e-12, ErrorCode::hermiticity_violation,
            "expm_hermitian: max-norm deviation " + std::to_string(herm_defect));
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
    require(es.info() == Eigen::Success, ErrorCode::hermiticity_violation,
            "expm_hermitian: eigendecomposition failed");
    const Eigen::VectorXd w = es.eigenvalues();
    Eigen::VectorXcd phases(h.rows());
    for (Eigen::Index k = 0; k < h.rows(); ++k)
        phases(k) = std::exp(std::complex<double>(0.0, -w(k) * dz));
    ComplexMatrix u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    return UnitaryMatrix(std::move(u), "device");
}

void save_unitary(const std::string& path, const UnitaryMatrix& u) {
    nlohmann::json j;
    const int m = u.dim();
    j["m"] = m;
    auto entries = nlohmann::json::array();
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < m; ++k)
            entries.push_back({u.matrix()(i, k).real(), u.matrix()(i, k).imag()});
    j["entries"] = std::move(entries);
    std::ofstream f(path);
    require(f.good(), ErrorCode::io_error, "save_unitary: cannot open " + path);
    f << j.dump() << "\n";
    require(f.good(), ErrorCode::io_error, "save_unitary: write failed for " + path);
}

UnitaryMatrix load_unitary(const std::string& path) {
    std::ifstream f(path);
    require(f.good(), ErrorCode::io_error, "load_unitary: cannot open " + path);
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::io_error, std::string("load_unitary: parse failure: ") + e.what());
    }
    require(j.contains("m") && j.contains("entries"), ErrorCode::io_error,
            "load_unitary: missing m/entries fields");
    const int m = j["m"].get<int>();
    require(m >= 1, ErrorCode::invalid_dimension, "load_unitary: m must be positive");
    const auto& entries = j["entries"];
    require(entries.size() == static_cast<size_t>(m) * static_cast<size_t>(m),
            ErrorCode::io_error, "load_unitary: entry count does not match m*m");
    ComplexMatrix u(m, m);
    size_t idx = 0;
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < m; ++k, ++idx)
            u(i, k) = std::complex<double>(entries[idx][0].get<double>(),
                                           entries[idx][1].get<double>());
    return UnitaryMatrix(std::move(u), "file");
}

} // namespace bosim
