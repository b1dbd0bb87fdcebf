#include "bosim/reconstruction.hpp"
#include "bosim/error.hpp"
#include "bosim/log.hpp"
#include "bosim/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>

namespace bosim {

namespace {

std::string pair_key(int a, int b) { return std::to_string(a) + "," + std::to_string(b); }

std::pair<int, int> parse_pair_key(const std::string& key) {
    const auto comma = key.find(',');
    require(comma != std::string::npos, ErrorCode::io_error,
            "counts: malformed pair key " + key);
    return {std::stoi(key.substr(0, comma)), std::stoi(key.substr(comma + 1))};
}

} // namespace

void save_counts(const std::string& path, const CountTable& counts, uint64_t seed) {
    nlohmann::json j;
    j["seed"] = seed;
    j["shots"] = counts.shots;
    j["n_outputs"] = counts.n_outputs;
    nlohmann::json singles = nlohmann::json::object();
    for (int i = 0; i < counts.n_inputs; ++i) singles[std::to_string(i)] = counts.singles[i];
    j["singles"] = std::move(singles);
    nlohmann::json pairs = nlohmann::json::object();
    for (const auto& [ikey, outcomes] : counts.pairs) {
        nlohmann::json inner = nlohmann::json::object();
        for (const auto& [okey, c] : outcomes) inner[pair_key(okey.first, okey.second)] = c;
        pairs[pair_key(ikey.first, ikey.second)] = std::move(inner);
    }
    j["pairs"] = std::move(pairs);
    std::ofstream f(path);
    require(f.good(), ErrorCode::io_error, "save_counts: cannot open " + path);
    f << j.dump() << "\n";
    require(f.good(), ErrorCode::io_error, "save_counts: write failed");
}

CountTable load_counts(const std::string& path) {
    std::ifstream f(path);
    require(f.good(), ErrorCode::io_error, "load_counts: cannot open " + path);
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::io_error, std::string("load_counts: parse failure: ") + e.what());
    }
    CountTable t;
    try {
        t.shots = j.at("shots").get<double>();
        t.n_outputs = j.at("n_outputs").get<int>();
        const auto& singles = j.at("singles");
        t.n_inputs = static_cast<int>(singles.size());
        t.singles.assign(t.n_inputs, {});
        for (auto it = singles.begin(); it != singles.end(); ++it) {
            const int i = std::stoi(it.key());
            require(i >= 0 && i < t.n_inputs, ErrorCode::io_error,
                    "load_counts: singles key out of range");
            t.singles[i] = it.value().get<std::vector<double>>();
            require(static_cast<int>(t.singles[i].size()) == t.n_outputs, ErrorCode::io_error,
                    "load_counts: singles row length mismatch");
        }
        for (auto it = j.at("pairs").begin(); it != j.at("pairs").end(); ++it) {
            const auto ikey = parse_pair_key(it.key());
            auto& bucket = t.pairs[ikey];
            for (auto ot = it.value().begin(); ot != it.value().end(); ++ot)
                bucket[parse_pair_key(ot.key())] = ot.value().get<double>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::io_error,
                    std::string("load_counts: missing/invalid field: ") + e.what());
    }
    for (const auto& row : t.singles)
        for (double c : row)
            require(c >= 0.0, ErrorCode::io_error, "load_counts: negative count");
    return t;
}

CountTable simulate_counts(const UnitaryMatrix& u, const std::vector<int>& inputs,
                           const std::vector<int>& outputs, double shots, uint64_t seed,
                           bool noiseless) {
    const int m = u.dim();
    const int ni = static_cast<int>(inputs.size());
    const int nj = static_cast<int>(outputs.size());
    require(ni >= 1 && nj >= 2, ErrorCode::invalid_shape,
            "simulate_counts: need >= 1 input and >= 2 outputs");
    require(shots > 0, ErrorCode::invalid_shape, "simulate_counts: shots must be positive");
    for (int i : inputs)
        require(i >= 0 && i < m, ErrorCode::invalid_shape, "simulate_counts: input out of range");
    for (int j : outputs)
        require(j >= 0 && j < m, ErrorCode::invalid_shape, "simulate_counts: output out of range");

    CountTable t;
    t.n_inputs = ni;
    t.n_outputs = nj;
    t.shots = shots;
    t.singles.assign(ni, std::vector<double>(nj, 0.0));

    uint64_t config_index = 0;
    // singles: photon in input a lands on measured output j or is lost
    for (int a = 0; a < ni; ++a, ++config_index) {
        std::vector<double> p(nj);
        for (int j = 0; j < nj; ++j) p[j] = std::norm(u.matrix()(outputs[j], inputs[a]));
        if (noiseless) {
            for (int j = 0; j < nj; ++j) t.singles[a][j] = shots * p[j];
        } else {
            Rng rng = Rng::substream(seed, StreamId::counts, config_index);
            std::vector<double> cum(nj);
            double acc = 0.0;
            for (int j = 0; j < nj; ++j) cum[j] = (acc += p[j]);
            const int64_t n = static_cast<int64_t>(shots);
            for (int64_t s = 0; s < n; ++s) {
                const double x = rng.uniform01(); // x >= acc: photon lost
                const auto it = std::upper_bound(cum.begin(), cum.end(), x);
                if (it != cum.end()) t.singles[a][it - cum.begin()] += 1.0;
            }
        }
    }
    // pairs: two-photon outcomes on measured outputs, bunched (j,j) included
    for (int a = 0; a < ni; ++a) {
        for (int b = a + 1; b < ni; ++b, ++config_index) {
            std::vector<std::pair<int, int>> keys;
            std::vector<double> p;
            for (int j1 = 0; j1 < nj; ++j1)
                for (int j2 = j1; j2 < nj; ++j2) {
                    const std::complex<double> ua1 = u.matrix()(outputs[j1], inputs[a]);
                    const std::complex<double> ua2 = u.matrix()(outputs[j2], inputs[a]);
                    const std::complex<double> ub1 = u.matrix()(outputs[j1], inputs[b]);
                    const std::complex<double> ub2 = u.matrix()(outputs[j2], inputs[b]);
                    const std::complex<double> amp = ua1 * ub2 + ua2 * ub1;
                    // |perm|^2 / t! : bunched outcomes carry the 1/2! factor
                    const double prob = std::norm(amp) / (j1 == j2 ? 2.0 : 1.0);
                    keys.emplace_back(j1, j2);
                    p.push_back(prob);
                }
            auto& bucket = t.pairs[{a, b}];
            if (noiseless) {
                for (size_t k = 0; k < keys.size(); ++k)
                    if (p[k] > 0.0) bucket[keys[k]] = shots * p[k];
            } else {
                Rng rng = Rng::substream(seed, StreamId::counts, config_index);
                std::vector<double> cum(p.size());
                double acc = 0.0;
                for (size_t k = 0; k < p.size(); ++k) cum[k] = (acc += p[k]);
                const int64_t n = static_cast<int64_t>(shots);
                for (int64_t s = 0; s < n; ++s) {
                    const double x = rng.uniform01();
                    const auto it = std::upper_bound(cum.begin(), cum.end(), x);
                    if (it != cum.end()) bucket[keys[it - cum.begin()]] += 1.0;
                }
            }
        }
    }
    return t;
}

ModuliEstimate estimate_moduli(const CountTable& counts) {
    require(counts.n_inputs >= 1 && counts.n_outputs >= 1, ErrorCode::insufficient_data,
            "estimate_moduli: empty table");
    ModuliEstimate est;
    est.rho.resize(counts.n_outputs, counts.n_inputs);
    est.sigma.resize(counts.n_outputs, counts.n_inputs);
    est.nu2.resize(counts.n_inputs);
    for (int a = 0; a < counts.n_inputs; ++a) {
        double tot = 0.0;
        for (double c : counts.singles[a]) tot += c;
        require(tot > 0.0, ErrorCode::insufficient_data,
                "estimate_moduli: input " + std::to_string(a) + " has zero counts");
        est.nu2[a] = tot / counts.shots;
        for (int j = 0; j < counts.n_outputs; ++j) {
            const double p = counts.singles[a][j] / tot;
            est.rho(j, a) = std::sqrt(p);
            const double sig_p = std::sqrt(std::max(p * (1.0 - p), 1e-12) / tot);
            est.sigma(j, a) = sig_p / (2.0 * std::max(est.rho(j, a), kModulusFloor));
        }
    }
    return est;
}

namespace {

struct Closure {
    double cos_meas;
    double sigma_cos;
};

// Measured closure cosine for inputs (a,b), outputs (j1,j2), or nullopt when
// the pair configuration is absent or any modulus sits below the floor.
std::optional<Closure> closure_cos(const CountTable& counts, const ModuliEstimate& est, int a,
                                   int b, int j1, int j2) {
    if (a == b || j1 == j2) return std::nullopt;
    if (a > b) std::swap(a, b);
    const auto bucket = counts.pairs.find({a, b});
    if (bucket == counts.pairs.end()) return std::nullopt;
    const double r11 = est.rho(j1, a), r22 = est.rho(j2, b);
    const double r21 = est.rho(j2, a), r12 = est.rho(j1, b);
    if (std::min(std::min(r11, r22), std::min(r21, r12)) < kModulusFloor) return std::nullopt;
    const auto key = std::make_pair(std::min(j1, j2), std::max(j1, j2));
    const auto it = bucket->second.find(key);
    const double n2 = it == bucket->second.end() ? 0.0 : it->second;
    const double q_raw = n2 / counts.shots;
    const double q_hat = q_raw / (est.nu2[a] * est.nu2[b]);
    const double va = r11 * r22, vb = r21 * r12;
    const double denom = 2.0 * va * vb;
    double cosphi = (q_hat - va * va - vb * vb) / denom;
    const double sig_q =
        std::sqrt(std::max(q_raw, 1.0 / counts.shots) / counts.shots) / (est.nu2[a] * est.nu2[b]);
    const double sig_cos = sig_q / denom;
    require(std::abs(cosphi) <= 1.0 + 5.0 * sig_cos + 1e-6, ErrorCode::inconsistent_counts,
            "estimate_phases: closure cosine " + std::to_string(cosphi) +
                " incompatible with any phase");
    cosphi = std::clamp(cosphi, -1.0, 1.0);
    return Closure{cosphi, sig_cos};
}

// One measured closure as a least-squares equation on the free phases:
// cos(theta(j1,a) + theta(j2,b) - theta(j2,a) - theta(j1,b)) ~ cos_meas.
struct ClosureEq {
    int a, b, j1, j2;
    double cos_meas;
    double weight; // 1 / sigma_cos^2
};

double closure_phase(const Eigen::MatrixXd& theta, const ClosureEq& c) {
    return theta(c.j1, c.a) + theta(c.j2, c.b) - theta(c.j2, c.a) - theta(c.j1, c.b);
}

double closure_cost(const Eigen::MatrixXd& theta, const std::vector<ClosureEq>& eqs) {
    double s = 0.0;
    for (const ClosureEq& c : eqs) {
        const double r = std::cos(closure_phase(theta, c)) - c.cos_meas;
        s += c.weight * r * r;
    }
    return s;
}

// Damped Gauss-Newton over the free phases; `index` maps (j, i) to a
// parameter slot (-1 = frozen at its current value). Returns the final cost.
double refine_phases(Eigen::MatrixXd& theta, const std::vector<ClosureEq>& eqs,
                     const Eigen::MatrixXi& index, int np) {
    if (np == 0 || eqs.empty()) return closure_cost(theta, eqs);
    const auto slots = [&index](const ClosureEq& c, int (&k)[4], double (&s)[4]) {
        k[0] = index(c.j1, c.a), s[0] = 1.0;
        k[1] = index(c.j2, c.b), s[1] = 1.0;
        k[2] = index(c.j2, c.a), s[2] = -1.0;
        k[3] = index(c.j1, c.b), s[3] = -1.0;
    };
    double lambda = 1e-3;
    double cost = closure_cost(theta, eqs);
    for (int iter = 0; iter < 60; ++iter) {
        Eigen::MatrixXd jtj = Eigen::MatrixXd::Zero(np, np);
        Eigen::VectorXd jtr = Eigen::VectorXd::Zero(np);
        for (const ClosureEq& c : eqs) {
            const double phi = closure_phase(theta, c);
            const double r = std::cos(phi) - c.cos_meas;
            const double d = -std::sin(phi);
            int k[4];
            double s[4];
            slots(c, k, s);
            for (int u = 0; u < 4; ++u) {
                if (k[u] < 0) continue;
                jtr(k[u]) += c.weight * s[u] * d * r;
                for (int v = 0; v < 4; ++v)
                    if (k[v] >= 0) jtj(k[u], k[v]) += c.weight * (s[u] * d) * (s[v] * d);
            }
        }
        Eigen::MatrixXd damped = jtj;
        damped.diagonal().array() += lambda * (jtj.diagonal().array().abs() + 1e-12);
        const Eigen::VectorXd delta = damped.ldlt().solve(-jtr);
        if (!delta.allFinite()) break;
        Eigen::MatrixXd trial = theta;
        for (Eigen::Index j = 0; j < index.rows(); ++j)
            for (Eigen::Index i = 0; i < index.cols(); ++i)
                if (index(j, i) >= 0) trial(j, i) += delta(index(j, i));
        const double trial_cost = closure_cost(trial, eqs);
        if (trial_cost < cost) {
            theta = std::move(trial);
            cost = trial_cost;
            lambda = std::max(lambda / 3.0, 1e-7);
            if (delta.cwiseAbs().maxCoeff() < 1e-12) break;
        } else {
            lambda *= 10.0;
            if (lambda > 1e8) break;
        }
    }
    return cost;
}

} // namespace

PhaseEstimate estimate_phases(const CountTable& counts, const ModuliEstimate& moduli) {
    const int ni = counts.n_inputs;
    const int nj = counts.n_outputs;
    require(ni >= 2 && nj >= 2, ErrorCode::insufficient_data,
            "estimate_phases: need at least two inputs and two outputs");
    PhaseEstimate est;
    est.theta = Eigen::MatrixXd::Zero(nj, ni);
    est.sigma = Eigen::MatrixXd::Zero(nj, ni);
    est.unresolved.assign(nj, std::vector<bool>(ni, false));

    // magnitudes from the gauge-anchor closures (input 0, output 0)
    Eigen::MatrixXd alpha = Eigen::MatrixXd::Zero(nj, ni);
    for (int i = 1; i < ni; ++i)
        for (int j = 1; j < nj; ++j) {
            const auto c = closure_cos(counts, moduli, 0, i, 0, j);
            if (!c) {
                est.unresolved[j][i] = true;
                continue;
            }
            alpha(j, i) = std::acos(c->cos_meas);
            est.sigma(j, i) =
                c->sigma_cos / std::max(std::sqrt(1.0 - c->cos_meas * c->cos_meas), 0.1);
        }

    // Sign resolution sweep. theta_{1,1} takes the + branch: the global
    // conjugation it fixes is unobservable in count statistics. Each later
    // entry picks the sign minimizing squared closure residuals against
    // already-resolved entries.
    for (int i = 1; i < ni; ++i) {
        for (int j = 1; j < nj; ++j) {
            if (est.unresolved[j][i]) continue;
            if (i == 1 && j == 1) {
                est.theta(1, 1) = alpha(1, 1);
                continue;
            }
            double best_res = 0.0, alt_res = 0.0;
            int n_closures = 0;
            for (int ip = 0; ip < i; ++ip) {
                for (int jp = 0; jp < j; ++jp) {
                    if ((ip > 0 && jp > 0) && est.unresolved[jp][ip]) continue;
                    if (ip > 0 && est.unresolved[j][ip]) continue;
                    if (jp > 0 && est.unresolved[jp][i]) continue;
                    const auto c = closure_cos(counts, moduli, ip, i, jp, j);
                    if (!c) continue;
                    const double base =
                        est.theta(jp, ip) - est.theta(j, ip) - est.theta(jp, i);
                    const double rp = std::cos(base + alpha(j, i)) - c->cos_meas;
                    const double rm = std::cos(base - alpha(j, i)) - c->cos_meas;
                    best_res += rp * rp;
                    alt_res += rm * rm;
                    ++n_closures;
                }
            }
            if (n_closures == 0) {
                est.unresolved[j][i] = true;
                log_debug("estimate_phases: no sign-resolving closure for (", j, ",", i, ")");
                continue;
            }
            est.theta(j, i) = best_res <= alt_res ? alpha(j, i) : -alpha(j, i);
        }
    }
    for (int i = 0; i < ni; ++i)
        for (int j = 0; j < nj; ++j)
            if (est.unresolved[j][i]) est.theta(j, i) = 0.0;

    // Consensus refinement. The chain above takes each magnitude from a
    // single anchor closure and each sign from one sweep, so one noisy
    // decision can poison everything resolved after it. A damped
    // Gauss-Newton pass over every measured closure (anchors included)
    // pulls the phases to the weighted consensus instead; restarts with one
    // column or row negated let a chain whose first sign was effectively a
    // coin flip escape its basin. Closures touching an unresolved entry are
    // left out so frozen zeros cannot bias the fit.
    Eigen::MatrixXi index = Eigen::MatrixXi::Constant(nj, ni, -1);
    int np = 0;
    for (int i = 1; i < ni; ++i)
        for (int j = 1; j < nj; ++j)
            if (!est.unresolved[j][i]) index(j, i) = np++;
    std::vector<ClosureEq> eqs;
    const auto usable = [&](int j, int i) { return i == 0 || j == 0 || !est.unresolved[j][i]; };
    for (int a = 0; a < ni; ++a)
        for (int b = a + 1; b < ni; ++b)
            for (int j1 = 0; j1 < nj; ++j1)
                for (int j2 = j1 + 1; j2 < nj; ++j2) {
                    if (!usable(j1, a) || !usable(j2, b) || !usable(j2, a) || !usable(j1, b))
                        continue;
                    const auto c = closure_cos(counts, moduli, a, b, j1, j2);
                    if (!c) continue;
                    const double sig = std::max(c->sigma_cos, 1e-9);
                    eqs.push_back({a, b, j1, j2, c->cos_meas, 1.0 / (sig * sig)});
                }
    if (np > 0 && !eqs.empty()) {
        Eigen::MatrixXd best = est.theta;
        double best_cost = refine_phases(best, eqs, index, np);
        for (int flip = 0; flip < ni - 1 + nj - 1; ++flip) {
            Eigen::MatrixXd cand = est.theta;
            if (flip < ni - 1)
                cand.col(1 + flip) *= -1.0;
            else
                cand.row(1 + flip - (ni - 1)) *= -1.0;
            const double cost = refine_phases(cand, eqs, index, np);
            if (cost < best_cost - 1e-12) {
                best_cost = cost;
                best = std::move(cand);
            }
        }
        est.theta = std::move(best);

        // The global conjugation branch survives refinement; keep the
        // documented theta(1,1) >= 0 convention.
        if (index(1, 1) >= 0 && est.theta(1, 1) < 0.0) {
            for (int i = 1; i < ni; ++i)
                for (int j = 1; j < nj; ++j)
                    if (index(j, i) >= 0) est.theta(j, i) = -est.theta(j, i);
        }

        // Rough per-phase errors from the consensus curvature.
        Eigen::MatrixXd jtj = Eigen::MatrixXd::Zero(np, np);
        for (const ClosureEq& c : eqs) {
            const double d = -std::sin(closure_phase(est.theta, c));
            const int k[4] = {index(c.j1, c.a), index(c.j2, c.b), index(c.j2, c.a),
                              index(c.j1, c.b)};
            const double s[4] = {1.0, 1.0, -1.0, -1.0};
            for (int u = 0; u < 4; ++u) {
                if (k[u] < 0) continue;
                for (int v = 0; v < 4; ++v)
                    if (k[v] >= 0) jtj(k[u], k[v]) += c.weight * (s[u] * d) * (s[v] * d);
            }
        }
        jtj.diagonal().array() += 1e-9;
        const Eigen::MatrixXd cov = jtj.ldlt().solve(Eigen::MatrixXd::Identity(np, np));
        if (cov.allFinite())
            for (int i = 1; i < ni; ++i)
                for (int j = 1; j < nj; ++j)
                    if (index(j, i) >= 0)
                        est.sigma(j, i) = std::sqrt(std::max(cov(index(j, i), index(j, i)), 0.0));
    }
    return est;
}

ComplexMatrix ReconstructedMatrix::amplitudes() const {
    ComplexMatrix u(rho.rows(), rho.cols());
    for (Eigen::Index j = 0; j < rho.rows(); ++j)
        for (Eigen::Index i = 0; i < rho.cols(); ++i)
            u(j, i) = std::polar(rho(j, i), theta(j, i));
    return u;
}

ReconstructedMatrix reconstruct(const CountTable& counts) {
    // Coverage check: all singles present (structural) and all input pairs.
    for (int a = 0; a < counts.n_inputs; ++a)
        for (int b = a + 1; b < counts.n_inputs; ++b)
            if (!counts.pairs.count({a, b}))
                log_warn("reconstruct: missing pair configuration (", a, ",", b,
                         "); affected phases will be flagged unresolved");
    const ModuliEstimate moduli = estimate_moduli(counts);
    const PhaseEstimate phases = estimate_phases(counts, moduli);
    ReconstructedMatrix rec;
    rec.rho = moduli.rho;
    rec.theta = phases.theta;
    rec.sigma_rho = moduli.sigma;
    rec.sigma_theta = phases.sigma;
    rec.unresolved = phases.unresolved;
    return rec;
}

double gauge_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorCode::shape_mismatch,
            "gauge_distance: shape mismatch");
    const Eigen::Index nj = a.rows(), ni = a.cols();
    // Alternating phase alignment on C_ji = a_ji * conj(b_ji): maximize
    // sum Re(e^{i(phi_j + chi_i)} C_ji), the least-squares-optimal gauge.
    ComplexMatrix c = a.cwiseProduct(b.conjugate());
    Eigen::VectorXd phi = Eigen::VectorXd::Zero(nj), chi = Eigen::VectorXd::Zero(ni);
    for (Eigen::Index i = 0; i < ni; ++i)
        if (std::abs(c(0, i)) > 0.0) chi(i) = -std::arg(c(0, i));
    double prev = -1e300;
    for (int iter = 0; iter < 300; ++iter) {
        for (Eigen::Index j = 0; j < nj; ++j) {
            std::complex<double> s{0.0, 0.0};
            for (Eigen::Index i = 0; i < ni; ++i)
                s += c(j, i) * std::polar(1.0, chi(i));
            if (std::abs(s) > 0.0) phi(j) = -std::arg(s);
        }
        for (Eigen::Index i = 0; i < ni; ++i) {
            std::complex<double> s{0.0, 0.0};
            for (Eigen::Index j = 0; j < nj; ++j)
                s += c(j, i) * std::polar(1.0, phi(j));
            if (std::abs(s) > 0.0) chi(i) = -std::arg(s);
        }
        double obj = 0.0;
        for (Eigen::Index j = 0; j < nj; ++j)
            for (Eigen::Index i = 0; i < ni; ++i)
                obj += (c(j, i) * std::polar(1.0, phi(j) + chi(i))).real();
        if (obj - prev < 1e-14) break;
        prev = obj;
    }
    double dist = 0.0;
    for (Eigen::Index j = 0; j < nj; ++j)
        for (Eigen::Index i = 0; i < ni; ++i)
            dist = std::max(dist,
                            std::abs(a(j, i) * std::polar(1.0, phi(j) + chi(i)) - b(j, i)));
    return dist;
}

} // namespace bosim
