#ifndef BOSIM_RECONSTRUCTION_HPP
#define BOSIM_RECONSTRUCTION_HPP

#include "bosim/unitary.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace bosim {

// Photon-count data over I input configurations and J output positions.
// Counts are doubles so exact expected-value tables (the noiseless oracle)
// share the format with sampled integer counts.
struct CountTable {
    int n_inputs = 0;
    int n_outputs = 0;
    double shots = 0; // per configuration
    std::vector<std::vector<double>> singles; // [input][output]
    // key: input pair (i1<i2); value: outcome (j1<=j2, j1==j2 bunched) -> count
    std::map<std::pair<int, int>, std::map<std::pair<int, int>, double>> pairs;
};

void save_counts(const std::string& path, const CountTable& counts, uint64_t seed);
CountTable load_counts(const std::string& path);

// Simulated calibration data for the submatrix u[outputs, inputs] of a unitary:
// per-input singles and per-input-pair two-photon coincidences restricted to
// the listed outputs (events elsewhere are lost but still count toward shots).
// noiseless=true stores exact expected counts instead of multinomial draws.
CountTable simulate_counts(const UnitaryMatrix& u, const std::vector<int>& inputs,
                           const std::vector<int>& outputs, double shots, uint64_t seed,
                           bool noiseless = false);

struct ModuliEstimate {
    Eigen::MatrixXd rho;     // J x I, each column normalized over outputs
    Eigen::MatrixXd sigma;   // propagated binomial standard errors
    std::vector<double> nu2; // per-input observed transmission sum(N1)/shots
};

ModuliEstimate estimate_moduli(const CountTable& counts);

struct PhaseEstimate {
    Eigen::MatrixXd theta;             // J x I, gauge: first row/column zero
    Eigen::MatrixXd sigma;             // propagated errors (rough, radians)
    std::vector<std::vector<bool>> unresolved; // entries below the modulus floor
};

// Visibility-closure phase recovery. For inputs (i1,i2) and outputs (j1,j2)
// the coincidence q constrains cos(phi) = (q - A - B) / (2 sqrt(AB)); the
// first-row/column gauge turns anchor closures into |theta_ji|, and signs are
// resolved by least squares over redundant closures. The overall complex
// conjugation of the matrix is unobservable in count data; the convention
// theta_{1,1} >= 0 picks one branch.
PhaseEstimate estimate_phases(const CountTable& counts, const ModuliEstimate& moduli);

struct ReconstructedMatrix {
    Eigen::MatrixXd rho;
    Eigen::MatrixXd theta;
    Eigen::MatrixXd sigma_rho;
    Eigen::MatrixXd sigma_theta;
    std::vector<std::vector<bool>> unresolved;
    std::string gauge = "first-row-col-zero";

    ComplexMatrix amplitudes() const;
};

ReconstructedMatrix reconstruct(const CountTable& counts);

// Minimum over diagonal phase matrices D_out, D_in of
// max_ij |(D_out * a * D_in)_ij - b_ij| (alternating phase alignment).
double gauge_distance(const ComplexMatrix& a, const ComplexMatrix& b);

// The modulus floor below which arccos arguments are too noisy to trust.
inline constexpr double kModulusFloor = 0.02;

} // namespace bosim

#endif
