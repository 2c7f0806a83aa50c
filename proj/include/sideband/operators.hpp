#pragma once

// Dense complex operator algebra on the composite qubit1 (x) qubit2 (x) cavity
// Hilbert space.
//
// Basis conventions (fixed globally):
//   - qubit levels are ordered excited-first, {|e>, |g>};
//   - the two-qubit sub-basis is {ee, eg, ge, gg};
//   - cavity Fock levels run 0..n_max and form the innermost tensor factor.
// A composite-space operator therefore has dimension 4*(n_max+1).

#include <Eigen/Dense>

#include <complex>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace sideband {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr Complex imag_unit{0.0, 1.0};

/// Describes the tensor factors an operator acts on. `qubits` counts leading
/// two-level factors; `fock` is the cavity dimension (0 when there is no
/// cavity factor). The cavity, when present, is always the last factor.
struct BasisDescriptor {
    int qubits = 0;
    int fock = 0;

    int dim() const { return (1 << qubits) * (fock > 0 ? fock : 1); }
    bool operator==(const BasisDescriptor&) const = default;
};

inline BasisDescriptor qubit_basis() { return {1, 0}; }
inline BasisDescriptor two_qubit_basis() { return {2, 0}; }
inline BasisDescriptor cavity_basis(int n_max) { return {0, n_max + 1}; }
inline BasisDescriptor composite_basis(int n_max) { return {2, n_max + 1}; }

/// Dense operator together with its basis descriptor.
struct OperatorMatrix {
    BasisDescriptor basis;
    CMatrix m;

    OperatorMatrix() = default;
    OperatorMatrix(BasisDescriptor b, CMatrix mat) : basis(b), m(std::move(mat)) {
        if (m.rows() != m.cols() || m.rows() != basis.dim())
            throw std::invalid_argument("OperatorMatrix: matrix does not match basis dimension");
    }

    int dim() const { return static_cast<int>(m.rows()); }

    OperatorMatrix adjoint() const { return {basis, m.adjoint()}; }
};

inline double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

inline double hermiticity_error(const CMatrix& m) {
    return max_abs(CMatrix(m - m.adjoint()));
}

inline bool is_hermitian(const CMatrix& m, double tol = 1e-12) {
    return hermiticity_error(m) <= tol;
}

inline OperatorMatrix identity(BasisDescriptor basis) {
    return {basis, CMatrix::Identity(basis.dim(), basis.dim())};
}

/// Cavity lowering operator on Fock levels 0..n_max: entries sqrt(n) on the
/// first superdiagonal. The raising operator is its adjoint.
inline OperatorMatrix fock_annihilation(int n_max) {
    if (n_max < 0) throw std::invalid_argument("fock_annihilation: n_max must be >= 0");
    CMatrix a = CMatrix::Zero(n_max + 1, n_max + 1);
    for (int n = 1; n <= n_max; ++n) a(n - 1, n) = std::sqrt(double(n));
    return {cavity_basis(n_max), std::move(a)};
}

enum class Pauli { X, Y, Z, Plus, Minus };

/// Bare 2x2 Pauli/ladder operator in the excited-first level ordering,
/// sigma_z = |e><e| - |g><g|.
inline OperatorMatrix sigma(Pauli kind) {
    CMatrix s = CMatrix::Zero(2, 2);
    switch (kind) {
        case Pauli::X: s(0, 1) = 1; s(1, 0) = 1; break;
        case Pauli::Y: s(0, 1) = -imag_unit; s(1, 0) = imag_unit; break;
        case Pauli::Z: s(0, 0) = 1; s(1, 1) = -1; break;
        case Pauli::Plus: s(0, 1) = 1; break;   // |e><g|
        case Pauli::Minus: s(1, 0) = 1; break;  // |g><e|
    }
    return {qubit_basis(), std::move(s)};
}

/// Kronecker product of the listed operators, leftmost factor slowest.
inline OperatorMatrix tensor(const std::vector<OperatorMatrix>& ops) {
    if (ops.empty()) throw std::invalid_argument("tensor: empty operator list");
    BasisDescriptor basis;
    CMatrix result = CMatrix::Ones(1, 1);
    for (const auto& op : ops) {
        if (basis.fock > 0)
            throw std::invalid_argument("tensor: cavity factor must come last");
        basis.qubits += op.basis.qubits;
        basis.fock = op.basis.fock;
        const CMatrix& b = op.m;
        CMatrix next(result.rows() * b.rows(), result.cols() * b.cols());
        for (Eigen::Index i = 0; i < result.rows(); ++i)
            for (Eigen::Index j = 0; j < result.cols(); ++j)
                next.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = result(i, j) * b;
        result = std::move(next);
    }
    return {basis, std::move(result)};
}

inline OperatorMatrix tensor(const OperatorMatrix& a, const OperatorMatrix& b) {
    return tensor(std::vector<OperatorMatrix>{a, b});
}

inline OperatorMatrix tensor(const OperatorMatrix& a, const OperatorMatrix& b,
                             const OperatorMatrix& c) {
    return tensor(std::vector<OperatorMatrix>{a, b, c});
}

/// Pauli/ladder operator for qubit 1 or 2 embedded in the composite space
/// with cavity truncation n_max.
inline OperatorMatrix pauli(Pauli kind, int qubit, int n_max) {
    if (qubit != 1 && qubit != 2) throw std::invalid_argument("pauli: qubit must be 1 or 2");
    OperatorMatrix iq = identity(qubit_basis());
    OperatorMatrix ic = identity(cavity_basis(n_max));
    OperatorMatrix s = sigma(kind);
    return qubit == 1 ? tensor(s, iq, ic) : tensor(iq, s, ic);
}

/// Cavity operator embedded in the composite space.
inline OperatorMatrix embed_cavity(const OperatorMatrix& op) {
    return tensor(identity(two_qubit_basis()), op);
}

/// Index of |l1 l2, n> in the composite basis; levels are 0 = e, 1 = g.
inline int composite_index(int l1, int l2, int n, int n_max) {
    if (l1 < 0 || l1 > 1 || l2 < 0 || l2 > 1 || n < 0 || n > n_max)
        throw std::out_of_range("composite_index: label out of range");
    return (l1 * 2 + l2) * (n_max + 1) + n;
}

inline CVector basis_ket(int l1, int l2, int n, int n_max) {
    CVector v = CVector::Zero(4 * (n_max + 1));
    v(composite_index(l1, l2, n, n_max)) = 1.0;
    return v;
}

/// exp(-i H t) for Hermitian H, via eigendecomposition. Rejects inputs whose
/// hermiticity error exceeds `herm_tol` instead of symmetrizing them.
inline OperatorMatrix expm(const OperatorMatrix& h, double t, double herm_tol = 1e-12) {
    const double err = hermiticity_error(h.m);
    if (err > herm_tol)
        throw std::invalid_argument("expm: input not Hermitian (max|H - H^dag| = " +
                                    std::to_string(err) + ")");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h.m);
    if (es.info() != Eigen::Success) throw std::runtime_error("expm: eigendecomposition failed");
    const Eigen::VectorXd& ev = es.eigenvalues();
    CVector phases(ev.size());
    for (Eigen::Index k = 0; k < ev.size(); ++k)
        phases(k) = std::exp(-imag_unit * ev(k) * t);
    CMatrix u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    return {h.basis, std::move(u)};
}

}  // namespace sideband
