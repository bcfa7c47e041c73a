// Copyright 2026 The kdq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Small dense complex linear algebra: validated states, bases and observables,
// a cyclic Jacobi Hermitian eigensolver, and mutually-unbiased-basis helpers.
//
// Everything here is a pure function on immutable values. Dimensions are
// expected to be "desk scale" (d <= 16); nothing is tuned for large matrices.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "kdq/error.hpp"

namespace kdq {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;

/// Tolerance used wherever a caller does not supply one.
inline constexpr double kDefaultTol = 1e-10;

namespace detail {

inline std::string fmt_double(double x) {
    std::ostringstream os;
    os.precision(6);
    os << std::scientific << x;
    return os.str();
}

inline bool all_finite(const Matrix& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
    return true;
}

inline void require_finite(const Matrix& m, std::string_view what) {
    if (!all_finite(m)) throw Error(ErrorCode::NonFinite, std::string(what) + " contains NaN or Inf");
}

inline void require_square(const Matrix& m, std::string_view what) {
    if (m.rows() != m.cols() || m.rows() == 0)
        throw Error(ErrorCode::NotSquare, std::string(what) + " is " + std::to_string(m.rows()) + "x" +
                                              std::to_string(m.cols()) + ", expected non-empty square");
}

}  // namespace detail

/// Largest absolute entry.
inline double max_abs(const Matrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double hermiticity_defect(const Matrix& m) {
    return max_abs(m - m.adjoint());
}

inline Matrix outer(const Vector& ket, const Vector& bra) {
    return ket * bra.adjoint();
}

inline Matrix projector(const Vector& v) {
    return outer(v, v);
}

inline bool is_unitary(const Matrix& u, double tol = kDefaultTol) {
    if (u.rows() != u.cols()) return false;
    return max_abs(u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())) <= tol;
}

// ---------------------------------------------------------------------------
// Cyclic Jacobi eigensolver
// ---------------------------------------------------------------------------

/// Raw eigenpairs, ascending, one column per eigenvalue (no degeneracy merging).
struct Eigenpairs {
    std::vector<double> values;
    Matrix vectors;
};

/// Diagonalises a Hermitian matrix with cyclic complex Jacobi rotations.
///
/// Each rotation first removes the phase of the pivot a_pq and then applies the
/// classical real symmetric rotation, so A <- J^H A J stays Hermitian. Sweeps
/// stop once the off-diagonal Frobenius norm reaches rounding level,
/// 4 n eps ||A||_F.
inline Eigenpairs jacobi_eigenpairs(const Matrix& input, int max_sweeps = 64) {
    detail::require_square(input, "Jacobi input");
    const Eigen::Index n = input.rows();
    Matrix a = 0.5 * (input + input.adjoint());
    Matrix v = Matrix::Identity(n, n);

    const double total = std::max(a.norm(), std::numeric_limits<double>::min());
    auto off_norm = [&] {
        double s = 0.0;
        for (Eigen::Index p = 0; p < n; ++p)
            for (Eigen::Index q = 0; q < n; ++q)
                if (p != q) s += std::norm(a(p, q));
        return std::sqrt(s);
    };

    const double stop = 4.0 * static_cast<double>(n) * std::numeric_limits<double>::epsilon() * total;
    int sweep = 0;
    while (off_norm() > stop) {
        if (sweep++ >= max_sweeps)
            throw Error(ErrorCode::ConvergenceFailure,
                        "Jacobi did not converge after " + std::to_string(max_sweeps) +
                            " sweeps (off-diagonal norm " + detail::fmt_double(off_norm()) + ")");
        for (Eigen::Index p = 0; p < n - 1; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const Complex apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag == 0.0) continue;
                const Complex phase = apq / mag;  // e^{i phi}
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double theta = (aqq - app) / (2.0 * mag);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                // J = D R with D = diag(1, e^{-i phi}) on (p, q):
                //   J_pp = c, J_pq = s, J_qp = -s e^{-i phi}, J_qq = c e^{-i phi}.
                const Complex jpp = c, jpq = s;
                const Complex jqp = -s * std::conj(phase), jqq = c * std::conj(phase);

                for (Eigen::Index k = 0; k < n; ++k) {  // A <- A J
                    const Complex akp = a(k, p), akq = a(k, q);
                    a(k, p) = akp * jpp + akq * jqp;
                    a(k, q) = akp * jpq + akq * jqq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {  // A <- J^H A
                    const Complex apk = a(p, k), aqk = a(q, k);
                    a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
                    a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
                }
                for (Eigen::Index k = 0; k < n; ++k) {  // V <- V J
                    const Complex vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = vkp * jpp + vkq * jqp;
                    v(k, q) = vkp * jpq + vkq * jqq;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
            }
        }
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index x, Eigen::Index y) { return a(x, x).real() < a(y, y).real(); });

    Eigenpairs out;
    out.values.reserve(order.size());
    out.vectors.resize(n, n);
    for (std::size_t k = 0; k < order.size(); ++k) {
        out.values.push_back(a(order[k], order[k]).real());
        out.vectors.col(static_cast<Eigen::Index>(k)) = v.col(order[k]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// Normalised pure state |psi>.
class StateVector {
public:
    static StateVector from_amplitudes(Vector amplitudes, double tol = kDefaultTol) {
        if (amplitudes.size() == 0) throw Error(ErrorCode::DimensionMismatch, "state vector is empty");
        detail::require_finite(amplitudes, "state vector");
        const double norm2 = amplitudes.squaredNorm();
        if (std::abs(norm2 - 1.0) > tol)
            throw Error(ErrorCode::NotNormalized, "sum |amplitude|^2 = " + detail::fmt_double(norm2));
        return StateVector(std::move(amplitudes));
    }

    /// Rescales to unit norm before validating.
    static StateVector normalized(const Vector& amplitudes) {
        const double n = amplitudes.norm();
        if (!(n > 0.0)) throw Error(ErrorCode::NotNormalized, "cannot normalise a zero vector");
        return from_amplitudes(amplitudes / n);
    }

    Eigen::Index dim() const { return amplitudes_.size(); }
    const Vector& amplitudes() const { return amplitudes_; }

private:
    explicit StateVector(Vector a) : amplitudes_(std::move(a)) {}
    Vector amplitudes_;
};

class DensityMatrix;
DensityMatrix validate_density(const Matrix& entries, double tol = kDefaultTol);

/// Hermitian, unit-trace, positive semidefinite operator. Only constructible
/// through validate_density() or from a StateVector.
class DensityMatrix {
public:
    Eigen::Index dim() const { return rho_.rows(); }
    const Matrix& matrix() const { return rho_; }
    Complex operator()(Eigen::Index i, Eigen::Index j) const { return rho_(i, j); }

    static DensityMatrix pure(const StateVector& psi) {
        return DensityMatrix(projector(psi.amplitudes()));
    }

private:
    explicit DensityMatrix(Matrix m) : rho_(std::move(m)) {}
    Matrix rho_;

    friend DensityMatrix validate_density(const Matrix& entries, double tol);
};

/// Checks Hermiticity, unit trace and eigenvalues >= -tol, in that order.
inline DensityMatrix validate_density(const Matrix& entries, double tol) {
    detail::require_square(entries, "density matrix");
    detail::require_finite(entries, "density matrix");
    const double herm = hermiticity_defect(entries);
    if (herm > tol) throw Error(ErrorCode::NotHermitian, "max |rho - rho^H| = " + detail::fmt_double(herm));
    const Complex tr = entries.trace();
    if (std::abs(tr - 1.0) > tol)
        throw Error(ErrorCode::TraceNotOne, "|Tr(rho) - 1| = " + detail::fmt_double(std::abs(tr - 1.0)));
    const auto eig = jacobi_eigenpairs(entries);
    if (eig.values.front() < -tol)
        throw Error(ErrorCode::NotPSD, "smallest eigenvalue " + detail::fmt_double(eig.values.front()));
    return DensityMatrix(entries);
}

/// Ordered orthonormal basis, stored as the columns of a unitary matrix.
class OrthonormalBasis {
public:
    static OrthonormalBasis from_columns(Matrix columns, std::string label = {}, double tol = kDefaultTol) {
        detail::require_square(columns, "basis matrix");
        detail::require_finite(columns, "basis matrix");
        const double defect =
            max_abs(columns.adjoint() * columns - Matrix::Identity(columns.cols(), columns.cols()));
        if (defect > tol)
            throw Error(ErrorCode::NotOrthonormal, "max |<v_i|v_j> - delta_ij| = " + detail::fmt_double(defect));
        return OrthonormalBasis(std::move(columns), std::move(label));
    }

    static OrthonormalBasis from_vectors(const std::vector<Vector>& vectors, std::string label = {},
                                         double tol = kDefaultTol) {
        if (vectors.empty()) throw Error(ErrorCode::DimensionMismatch, "basis has no vectors");
        const auto d = vectors.front().size();
        if (static_cast<std::size_t>(d) != vectors.size())
            throw Error(ErrorCode::DimensionMismatch, "basis of " + std::to_string(vectors.size()) +
                                                          " vectors in dimension " + std::to_string(d));
        Matrix cols(d, d);
        for (std::size_t k = 0; k < vectors.size(); ++k) {
            if (vectors[k].size() != d)
                throw Error(ErrorCode::DimensionMismatch, "basis vector " + std::to_string(k) + " has wrong length");
            cols.col(static_cast<Eigen::Index>(k)) = vectors[k];
        }
        return from_columns(std::move(cols), std::move(label), tol);
    }

    Eigen::Index dim() const { return vectors_.cols(); }
    auto vector(Eigen::Index i) const { return vectors_.col(i); }
    const Matrix& matrix() const { return vectors_; }
    const std::string& label() const { return label_; }

    /// Projector |v_i><v_i|.
    Matrix projector(Eigen::Index i) const { return vectors_.col(i) * vectors_.col(i).adjoint(); }

    /// Same vectors, bit for bit.
    bool identical_to(const OrthonormalBasis& other) const {
        return dim() == other.dim() && vectors_ == other.vectors_;
    }

    /// Basis {W v_i} for a unitary W (e.g. W = U^H to Heisenberg-evolve a final measurement).
    OrthonormalBasis transformed(const Matrix& unitary, std::string label) const {
        return OrthonormalBasis(unitary * vectors_, std::move(label));
    }

private:
    OrthonormalBasis(Matrix m, std::string label) : vectors_(std::move(m)), label_(std::move(label)) {}
    Matrix vectors_;
    std::string label_;
};

class HermitianObservable {
public:
    static HermitianObservable from_matrix(Matrix entries, double tol = kDefaultTol) {
        detail::require_square(entries, "observable");
        detail::require_finite(entries, "observable");
        const double herm = hermiticity_defect(entries);
        if (herm > tol) throw Error(ErrorCode::NotHermitian, "max |H - H^H| = " + detail::fmt_double(herm));
        return HermitianObservable(std::move(entries));
    }

    Eigen::Index dim() const { return h_.rows(); }
    const Matrix& matrix() const { return h_; }

private:
    explicit HermitianObservable(Matrix m) : h_(std::move(m)) {}
    Matrix h_;
};

// ---------------------------------------------------------------------------
// Spectral decomposition with degeneracy merging
// ---------------------------------------------------------------------------

struct SpectralDecomposition {
    std::vector<double> eigenvalues;  // ascending, distinct
    std::vector<Matrix> projectors;   // one per eigenvalue, rank = multiplicity
    std::vector<int> ranks;
    Matrix eigenvectors;  // all d eigenvectors, ascending, columns

    Matrix reconstruct() const {
        Matrix h = Matrix::Zero(eigenvectors.rows(), eigenvectors.rows());
        for (std::size_t g = 0; g < eigenvalues.size(); ++g) h += eigenvalues[g] * projectors[g];
        return h;
    }

    bool nondegenerate() const {
        return std::all_of(ranks.begin(), ranks.end(), [](int r) { return r == 1; });
    }
};

/// Eigenvalues closer than 1e-9 * max(1, |E|_max) are merged into one projector.
inline SpectralDecomposition hermitian_eigendecomposition(const HermitianObservable& h, double tol = kDefaultTol) {
    (void)tol;  // Hermiticity was checked on construction.
    const auto pairs = jacobi_eigenpairs(h.matrix());
    double scale = 1.0;
    for (double e : pairs.values) scale = std::max(scale, std::abs(e));
    const double merge = 1e-9 * scale;

    SpectralDecomposition out;
    out.eigenvectors = pairs.vectors;
    const auto n = static_cast<Eigen::Index>(pairs.values.size());
    Eigen::Index k = 0;
    while (k < n) {
        Eigen::Index end = k + 1;
        while (end < n && pairs.values[static_cast<std::size_t>(end)] -
                                  pairs.values[static_cast<std::size_t>(end - 1)] <= merge)
            ++end;
        double mean = 0.0;
        Matrix proj = Matrix::Zero(n, n);
        for (Eigen::Index j = k; j < end; ++j) {
            mean += pairs.values[static_cast<std::size_t>(j)];
            proj += projector(pairs.vectors.col(j));
        }
        out.eigenvalues.push_back(mean / static_cast<double>(end - k));
        out.projectors.push_back(std::move(proj));
        out.ranks.push_back(static_cast<int>(end - k));
        k = end;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Standard bases and MUB checks
// ---------------------------------------------------------------------------

inline OrthonormalBasis computational_basis(Eigen::Index d, std::string label = "computational") {
    if (d < 1) throw Error(ErrorCode::ParameterOutOfRange, "dimension must be >= 1");
    return OrthonormalBasis::from_columns(Matrix::Identity(d, d), std::move(label));
}

/// b_k = sum_j e^{2 pi i jk/d} |j> / sqrt(d).
inline OrthonormalBasis fourier_basis(Eigen::Index d) {
    if (d < 1) throw Error(ErrorCode::ParameterOutOfRange, "dimension must be >= 1");
    Matrix m(d, d);
    const double norm = 1.0 / std::sqrt(static_cast<double>(d));
    for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index k = 0; k < d; ++k) {
            // Reduce jk mod d first so the phase stays exact for small d.
            const auto r = (j * k) % d;
            const double angle = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(d);
            m(j, k) = std::polar(norm, angle);
        }
    return OrthonormalBasis::from_columns(std::move(m), "fourier" + std::to_string(d));
}

/// Kronecker product basis, ordered with the second factor varying fastest.
inline OrthonormalBasis tensor_product(const OrthonormalBasis& first, const OrthonormalBasis& second,
                                       std::string label = {}) {
    const auto d1 = first.dim(), d2 = second.dim();
    Matrix m(d1 * d2, d1 * d2);
    for (Eigen::Index i = 0; i < d1; ++i)
        for (Eigen::Index j = 0; j < d2; ++j)
            for (Eigen::Index r = 0; r < d1; ++r)
                for (Eigen::Index s = 0; s < d2; ++s)
                    m(r * d2 + s, i * d2 + j) = first.matrix()(r, i) * second.matrix()(s, j);
    if (label.empty()) label = first.label() + "(x)" + second.label();
    return OrthonormalBasis::from_columns(std::move(m), std::move(label));
}

/// True iff |<a_i|b_k>|^2 = 1/d for every pair, within tol.
inline bool mub_check(const OrthonormalBasis& a, const OrthonormalBasis& b, double tol = kDefaultTol) {
    if (a.dim() != b.dim())
        throw Error(ErrorCode::DimensionMismatch,
                    "bases of dimension " + std::to_string(a.dim()) + " and " + std::to_string(b.dim()));
    const double target = 1.0 / static_cast<double>(a.dim());
    const Matrix overlaps = a.matrix().adjoint() * b.matrix();
    for (Eigen::Index i = 0; i < overlaps.rows(); ++i)
        for (Eigen::Index k = 0; k < overlaps.cols(); ++k)
            if (std::abs(std::norm(overlaps(i, k)) - target) > tol) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Random inputs for property tests
// ---------------------------------------------------------------------------

struct RandomInputs {
    DensityMatrix state;
    OrthonormalBasis basis_a;
    OrthonormalBasis basis_f;
};

namespace detail {

inline Matrix ginibre(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix g(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            g(i, j) = Complex(re, im);
        }
    return g;
}

// Modified Gram-Schmidt on the columns, run twice for orthogonality at 1e-15.
inline Matrix orthonormalize(Matrix m) {
    for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index k = 0; k < m.cols(); ++k) {
            for (Eigen::Index j = 0; j < k; ++j) {
                const Complex c = m.col(j).dot(m.col(k));
                m.col(k) -= c * m.col(j);
            }
            m.col(k).normalize();
        }
    }
    return m;
}

}  // namespace detail

inline OrthonormalBasis random_basis(Eigen::Index d, std::mt19937_64& rng, std::string label = "random") {
    return OrthonormalBasis::from_columns(detail::orthonormalize(detail::ginibre(d, d, rng)), std::move(label));
}

/// Full-rank mixed state rho = G G^H / Tr(G G^H) from a d x d Ginibre matrix.
inline DensityMatrix random_density(Eigen::Index d, std::mt19937_64& rng) {
    const Matrix g = detail::ginibre(d, d, rng);
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    rho = 0.5 * (rho + rho.adjoint());
    return validate_density(rho);
}

/// Deterministic for a given (d, seed).
inline RandomInputs random_state_and_bases(Eigen::Index d, std::uint64_t seed) {
    if (d < 2) throw Error(ErrorCode::ParameterOutOfRange, "random inputs need d >= 2");
    std::mt19937_64 rng(seed);
    auto rho = random_density(d, rng);
    auto a = random_basis(d, rng, "randomA");
    auto f = random_basis(d, rng, "randomF");
    return {std::move(rho), std::move(a), std::move(f)};
}

}  // namespace kdq
