#pragma once

// Numerical time evolution of the full interaction-picture model: unitary
// Schrodinger propagation with an exponential-midpoint rule (one Hermitian
// matrix exponential per step) and Lindblad propagation with classical RK4.
// Decay channels: per-qubit dressed-frame relaxation/excitation at gamma_j/2
// and cavity photon loss at kappa.

#include "sideband/effective.hpp"
#include "sideband/operators.hpp"
#include "sideband/params.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace sideband {

struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Decay rates in 1/ns. Grid values quoted in kHz are applied directly as
/// rates (1 kHz -> 1e-6 / ns); no 2*pi factor is introduced.
struct DecayRates {
    double gamma1 = 0;
    double gamma2 = 0;
    double kappa = 0;

    static DecayRates from_khz(double gamma1_khz, double gamma2_khz, double kappa_khz) {
        return {khz_to_rate_ns(gamma1_khz), khz_to_rate_ns(gamma2_khz),
                khz_to_rate_ns(kappa_khz)};
    }
    bool any() const { return gamma1 != 0 || gamma2 != 0 || kappa != 0; }
    bool operator==(const DecayRates&) const = default;
};

struct DensityMatrix {
    CMatrix rho;
    double time = 0;
};

inline DensityMatrix pure_state(const CVector& psi, double time = 0) {
    return {psi * psi.adjoint(), time};
}

inline std::vector<std::string> density_matrix_errors(const CMatrix& rho) {
    std::vector<std::string> errors;
    if (rho.rows() != rho.cols()) {
        errors.push_back("density matrix must be square");
        return errors;
    }
    if (hermiticity_error(rho) > 1e-10) errors.push_back("density matrix not Hermitian");
    if (std::abs(rho.trace().real() - 1.0) > 1e-8 || std::abs(rho.trace().imag()) > 1e-10)
        errors.push_back("density matrix trace != 1");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-8)
        errors.push_back("density matrix has a negative eigenvalue");
    return errors;
}

// ---------------------------------------------------------------------------
// Interaction-picture Hamiltonian V_I(t)

/// Precomputed builder for V_I(t) = A(t) a^dag + A^dag(t) a, where each qubit
/// contributes three tones at Delta_j and Delta_j +- W_j with the
/// sin/cos-theta weights of the dressed-frame transformation.
class InteractionHamiltonian {
  public:
    explicit InteractionHamiltonian(const SystemParams& s) : dim_(4 * (s.n_max + 1)) {
        OperatorMatrix adag = embed_cavity(fock_annihilation(s.n_max).adjoint());
        for (int j = 0; j < 2; ++j) {
            const auto& qb = s.qubit[j];
            const double th = qb.theta();
            const double D = s.Delta(j);
            const double W = qb.W();
            const Complex ph = std::exp(-imag_unit * qb.phase);
            const int qubit = j + 1;
            terms_.push_back({CMatrix(pauli(Pauli::Z, qubit, s.n_max).m * adag.m), D,
                              0.5 * qb.g * std::sin(th) * ph});
            terms_.push_back({CMatrix(pauli(Pauli::Plus, qubit, s.n_max).m * adag.m), D + W,
                              -0.5 * qb.g * (1.0 - std::cos(th)) * ph});
            terms_.push_back({CMatrix(pauli(Pauli::Minus, qubit, s.n_max).m * adag.m), D - W,
                              0.5 * qb.g * (1.0 + std::cos(th)) * ph});
        }
    }

    int dim() const { return dim_; }

    void build(double t, CMatrix& out) const {
        out.setZero(dim_, dim_);
        for (const auto& term : terms_)
            out += (term.amp * std::exp(imag_unit * term.freq * t)) * term.mat;
        out += CMatrix(out.adjoint());
    }

    CMatrix at(double t) const {
        CMatrix out;
        build(t, out);
        return out;
    }

  private:
    struct Term {
        CMatrix mat;
        double freq;
        Complex amp;
    };
    int dim_;
    std::vector<Term> terms_;
};

/// V_I(t) on the composite space.
inline OperatorMatrix v_interaction(double t, const SystemParams& s) {
    return {composite_basis(s.n_max), InteractionHamiltonian(s).at(t)};
}

// ---------------------------------------------------------------------------
// Propagators

inline long resolve_step_count(double T, double dt) {
    if (dt <= 0) throw std::invalid_argument("propagate: dt must be positive");
    if (T < 0) throw std::invalid_argument("propagate: T must be nonnegative");
    const long n = std::lround(T / dt);
    if (std::abs(n * dt - T) > 1e-9 * std::max(1.0, T))
        throw std::invalid_argument("propagate: dt must divide T");
    return n;
}

using SchrodingerObserver = std::function<void(double t, const CVector& psi)>;

/// Unitary propagation of a state vector from t = 0 to t = T under V_I(t),
/// one midpoint exponential per step.
inline CVector propagate_schrodinger(const CVector& psi0, const SystemParams& s, double T,
                                     double dt, const SchrodingerObserver& observer = {},
                                     long observe_stride = 100) {
    const long n_steps = resolve_step_count(T, dt);
    InteractionHamiltonian vi(s);
    if (psi0.size() != vi.dim())
        throw std::invalid_argument("propagate_schrodinger: state dimension mismatch");
    if (std::abs(psi0.norm() - 1.0) > 1e-8)
        throw std::invalid_argument("propagate_schrodinger: state not normalized");
    if (observe_stride <= 0) observe_stride = 1;
    CVector psi = psi0;
    CMatrix v;
    if (observer) observer(0.0, psi);
    for (long k = 0; k < n_steps; ++k) {
        vi.build((k + 0.5) * dt, v);
        Eigen::SelfAdjointEigenSolver<CMatrix> es(v);
        CVector phases(v.rows());
        for (Eigen::Index i = 0; i < v.rows(); ++i)
            phases(i) = std::exp(-imag_unit * es.eigenvalues()(i) * dt);
        psi = es.eigenvectors() * (phases.asDiagonal() * (es.eigenvectors().adjoint() * psi));
        if (observer && ((k + 1) % observe_stride == 0 || k + 1 == n_steps))
            observer((k + 1) * dt, psi);
    }
    return psi;
}

using LindbladObserver = std::function<void(double t, const CMatrix& rho)>;

/// RK4 integration of
///   drho/dt = -i [V_I(t), rho]
///             + sum_j gamma_j/2 (sp_j rho sm_j + sm_j rho sp_j - rho)
///             + kappa/2 (2 a rho a^dag - a^dag a rho - rho a^dag a).
inline DensityMatrix propagate_lindblad(const DensityMatrix& rho0, const SystemParams& s,
                                        const DecayRates& rates, double T, double dt,
                                        const LindbladObserver& observer = {},
                                        long observe_stride = 100) {
    const long n_steps = resolve_step_count(T, dt);
    if (observe_stride <= 0) observe_stride = 1;
    InteractionHamiltonian vi(s);
    const int d = vi.dim();
    if (rho0.rho.rows() != d)
        throw std::invalid_argument("propagate_lindblad: density matrix dimension mismatch");
    {
        auto errors = density_matrix_errors(rho0.rho);
        if (!errors.empty())
            throw std::invalid_argument("propagate_lindblad: " + errors.front());
    }

    const CMatrix sp1 = pauli(Pauli::Plus, 1, s.n_max).m;
    const CMatrix sm1 = pauli(Pauli::Minus, 1, s.n_max).m;
    const CMatrix sp2 = pauli(Pauli::Plus, 2, s.n_max).m;
    const CMatrix sm2 = pauli(Pauli::Minus, 2, s.n_max).m;
    const CMatrix a = embed_cavity(fock_annihilation(s.n_max)).m;
    const CMatrix ad = CMatrix(a.adjoint());
    const CMatrix num = CMatrix(ad * a);

    CMatrix tmp(d, d), tmp2(d, d);
    auto deriv = [&](const CMatrix& v, const CMatrix& rho, CMatrix& out) {
        tmp.noalias() = v * rho;
        tmp.noalias() -= rho * v;
        out = -imag_unit * tmp;
        const double gsum = 0.5 * (rates.gamma1 + rates.gamma2);
        if (rates.gamma1 != 0) {
            tmp.noalias() = sp1 * rho;
            out.noalias() += (0.5 * rates.gamma1) * (tmp * sm1);
            tmp.noalias() = sm1 * rho;
            out.noalias() += (0.5 * rates.gamma1) * (tmp * sp1);
        }
        if (rates.gamma2 != 0) {
            tmp.noalias() = sp2 * rho;
            out.noalias() += (0.5 * rates.gamma2) * (tmp * sm2);
            tmp.noalias() = sm2 * rho;
            out.noalias() += (0.5 * rates.gamma2) * (tmp * sp2);
        }
        if (gsum != 0) out -= gsum * rho;
        if (rates.kappa != 0) {
            tmp.noalias() = a * rho;
            out.noalias() += rates.kappa * (tmp * ad);
            tmp.noalias() = num * rho;
            tmp.noalias() += rho * num;
            out -= (0.5 * rates.kappa) * tmp;
        }
    };

    CMatrix rho = rho0.rho;
    CMatrix v_lo = vi.at(0.0), v_mid(d, d), v_hi(d, d);
    CMatrix k1(d, d), k2(d, d), k3(d, d), k4(d, d);
    if (observer) observer(0.0, rho);
    for (long k = 0; k < n_steps; ++k) {
        const double t = k * dt;
        vi.build(t + 0.5 * dt, v_mid);
        vi.build(t + dt, v_hi);
        deriv(v_lo, rho, k1);
        tmp2 = rho + (0.5 * dt) * k1;
        deriv(v_mid, tmp2, k2);
        tmp2 = rho + (0.5 * dt) * k2;
        deriv(v_mid, tmp2, k3);
        tmp2 = rho + dt * k3;
        deriv(v_hi, tmp2, k4);
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        v_lo.swap(v_hi);
        if (observer && ((k + 1) % observe_stride == 0 || k + 1 == n_steps))
            observer((k + 1) * dt, rho);
    }
    return {std::move(rho), rho0.time + T};
}

// ---------------------------------------------------------------------------
// Fidelities

/// Tr[a b] for two density matrices (the overlap fidelity when one of them is
/// pure). The imaginary residue must stay below 1e-10.
inline double fidelity_trace(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.rho.rows() != b.rho.rows() || a.rho.cols() != b.rho.cols())
        throw std::invalid_argument("fidelity_trace: dimension mismatch");
    const Complex tr = (a.rho * b.rho).trace();
    if (std::abs(tr.imag()) > 1e-10)
        throw std::runtime_error("fidelity_trace: imaginary residue " +
                                 std::to_string(tr.imag()));
    return tr.real();
}

/// Ideal-gate image of a product state: the nominal entangling gate applied
/// to the two-qubit part, photon number untouched.
inline CVector ideal_target_state(const SystemParams& s, int cond, const StateLabel& state) {
    const OperatorMatrix gate = nominal_gate(cond);
    CVector psi = CVector::Zero(4 * (s.n_max + 1));
    for (int row = 0; row < 4; ++row) {
        const Complex amp = gate.m(row, state.l1 * 2 + state.l2);
        if (amp != 0.0) psi(row * (s.n_max + 1) + state.n) += amp;
    }
    return psi;
}

/// Decay-free gate fidelity: overlap of the numerically propagated state at
/// tau_m with the nominal-gate image of the initial state.
inline double gate_fidelity_f0(const SystemParams& s, int cond, const StateLabel& state,
                               double dt = 0.01) {
    if (state.n > s.n_max)
        throw std::invalid_argument("gate_fidelity_f0: initial photon number exceeds n_max");
    const CVector psi0 = basis_ket(state.l1, state.l2, state.n, s.n_max);
    const CVector psi = propagate_schrodinger(psi0, s, s.tau_m(), dt);
    const CVector target = ideal_target_state(s, cond, state);
    return std::norm(target.dot(psi));
}

/// F0 at dt and dt/2; the default step is accepted when the two agree to
/// 1e-4.
struct StepCheck {
    double f0 = 0;
    double f0_half_step = 0;
    bool converged(double tol = 1e-4) const { return std::abs(f0 - f0_half_step) <= tol; }
};

inline StepCheck f0_step_check(const SystemParams& s, int cond, const StateLabel& state,
                               double dt = 0.01) {
    return {gate_fidelity_f0(s, cond, state, dt), gate_fidelity_f0(s, cond, state, 0.5 * dt)};
}

// ---------------------------------------------------------------------------
// Decay sweeps

struct SweepRow {
    double gamma_khz = 0;
    double kappa_khz = 0;
    double error = 0;  // 1 - F against the decay-free reference
};

inline int sweep_thread_count(int requested, std::size_t points) {
    int n = requested;
    if (n <= 0) {
        if (const char* env = std::getenv("SIDEBAND_THREADS")) n = std::atoi(env);
        if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
        if (n <= 0) n = 1;
    }
    return static_cast<int>(std::min<std::size_t>(n, std::max<std::size_t>(points, 1)));
}

/// Error 1 - F(tau_m) over a (gamma, kappa) grid, gamma outermost. The
/// reference is the decay-free solution; the (0, 0) grid point is the
/// reference itself and reports zero error. Points are distributed over
/// worker threads and merged by grid index.
inline std::vector<SweepRow> sweep_decay(const SystemParams& s, const std::vector<double>& gamma_khz,
                                         const std::vector<double>& kappa_khz,
                                         const StateLabel& initial, double dt = 0.01,
                                         int threads = 0) {
    if (gamma_khz.empty() || kappa_khz.empty())
        throw std::invalid_argument("sweep_decay: grids must be nonempty");
    const CVector psi0 = basis_ket(initial.l1, initial.l2, initial.n, s.n_max);
    const CVector psi_ref = propagate_schrodinger(psi0, s, s.tau_m(), dt);
    const DensityMatrix rho_ref = pure_state(psi_ref, s.tau_m());

    std::vector<SweepRow> rows(gamma_khz.size() * kappa_khz.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= rows.size()) return;
            const double g = gamma_khz[idx / kappa_khz.size()];
            const double kp = kappa_khz[idx % kappa_khz.size()];
            double error = 0.0;
            if (g != 0 || kp != 0) {
                const DecayRates rates = DecayRates::from_khz(g, g, kp);
                // gamma axis drives both qubits equally
                const DensityMatrix rho =
                    propagate_lindblad(pure_state(psi0), s, rates, s.tau_m(), dt);
                error = 1.0 - fidelity_trace(rho_ref, rho);
            }
            rows[idx] = {g, kp, error};
        }
    };
    const int n_threads = sweep_thread_count(threads, rows.size());
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Small observables used by the CLI and tests

inline double photon_number(const CMatrix& rho, int n_max) {
    const CMatrix a = embed_cavity(fock_annihilation(n_max)).m;
    return (a.adjoint() * a * rho).trace().real();
}

inline std::vector<double> populations(const CMatrix& rho) {
    std::vector<double> p(rho.rows());
    for (Eigen::Index i = 0; i < rho.rows(); ++i) p[i] = rho(i, i).real();
    return p;
}

}  // namespace sideband
