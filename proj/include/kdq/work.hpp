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

// Work statistics of a closed unitary process rho -> U rho U^H between the
// eigenbases of an initial and a final Hamiltonian.
//
// Two-point measurement (TPM):  p_ij = Tr[U^H P_j(T) U P_i(t0) rho P_i(t0)]
// KD work quasiprobability:     Q_ij = Tr[U^H P_j(T) U P_i(t0) rho]
//
// Q is an ordinary KD table between the initial energy basis and the
// Heisenberg-evolved final energy basis {U^H |e_j(T)>}.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kdq/kd.hpp"
#include "kdq/linalg.hpp"

namespace kdq {

/// Nondegenerate energy spectrum: energies[k] belongs to basis.vector(k).
struct Spectrum {
    std::vector<double> energies;
    OrthonormalBasis basis;

    Matrix hamiltonian() const {
        Matrix h = Matrix::Zero(basis.dim(), basis.dim());
        for (std::size_t k = 0; k < energies.size(); ++k)
            h += energies[k] * basis.projector(static_cast<Eigen::Index>(k));
        return h;
    }
};

/// Spectrum via the Jacobi eigensolver; degenerate levels are rejected.
inline Spectrum nondegenerate_spectrum(const HermitianObservable& h, std::string label) {
    auto dec = hermitian_eigendecomposition(h);
    if (!dec.nondegenerate())
        throw Error(ErrorCode::DegenerateSpectrum,
                    "Hamiltonian '" + label + "' has a degenerate level; rank > 1 projectors are not supported");
    return {std::move(dec.eigenvalues), OrthonormalBasis::from_columns(std::move(dec.eigenvectors), std::move(label))};
}

class WorkProcess {
public:
    /// Diagonalises both Hamiltonians.
    static WorkProcess from_hamiltonians(DensityMatrix rho, HermitianObservable h_initial,
                                         HermitianObservable h_final, Matrix unitary, double tol = kDefaultTol) {
        auto initial = nondegenerate_spectrum(h_initial, "H(t0)");
        auto final_spec = nondegenerate_spectrum(h_final, "H(T)");
        return from_spectra(std::move(rho), std::move(h_initial), std::move(h_final), std::move(unitary),
                            std::move(initial), std::move(final_spec), tol);
    }

    /// Uses caller-supplied spectra after checking that they reconstruct the
    /// Hamiltonians.
    static WorkProcess from_spectra(DensityMatrix rho, HermitianObservable h_initial, HermitianObservable h_final,
                                    Matrix unitary, Spectrum initial, Spectrum final_spec, double tol = kDefaultTol) {
        const auto d = rho.dim();
        if (h_initial.dim() != d || h_final.dim() != d || unitary.rows() != d || unitary.cols() != d ||
            initial.basis.dim() != d || final_spec.basis.dim() != d ||
            initial.energies.size() != static_cast<std::size_t>(d) ||
            final_spec.energies.size() != static_cast<std::size_t>(d))
            throw Error(ErrorCode::DimensionMismatch, "work process components disagree on dimension");
        detail::require_finite(unitary, "unitary");
        const double unit_defect = max_abs(unitary.adjoint() * unitary - Matrix::Identity(d, d));
        if (unit_defect > tol)
            throw Error(ErrorCode::NotUnitary, "max |U^H U - I| = " + detail::fmt_double(unit_defect));
        auto check = [tol](const Spectrum& s, const HermitianObservable& h, std::string_view which) {
            const double scale = std::max(1.0, max_abs(h.matrix()));
            const double defect = max_abs(s.hamiltonian() - h.matrix());
            if (defect > tol * scale)
                throw Error(ErrorCode::DimensionMismatch, std::string(which) +
                                                              " spectrum does not reconstruct the Hamiltonian (defect " +
                                                              detail::fmt_double(defect) + ")");
            for (std::size_t k = 1; k < s.energies.size(); ++k)
                if (std::abs(s.energies[k] - s.energies[k - 1]) <= 1e-9 * scale)
                    throw Error(ErrorCode::DegenerateSpectrum, std::string(which) + " spectrum is degenerate");
        };
        check(initial, h_initial, "initial");
        check(final_spec, h_final, "final");
        return WorkProcess(std::move(rho), std::move(h_initial), std::move(h_final), std::move(unitary),
                           std::move(initial), std::move(final_spec));
    }

    const DensityMatrix& state() const { return rho_; }
    const HermitianObservable& h_initial() const { return h_initial_; }
    const HermitianObservable& h_final() const { return h_final_; }
    const Matrix& unitary() const { return u_; }
    const Spectrum& initial() const { return initial_; }
    const Spectrum& final_spectrum() const { return final_; }

    /// {U^H |e_j(T)>}, the final energy basis in the Heisenberg picture.
    OrthonormalBasis heisenberg_final_basis() const {
        return final_.basis.transformed(u_.adjoint(), "U^H H(T)");
    }

    /// U rho U^H.
    Matrix evolved_state() const { return u_ * rho_.matrix() * u_.adjoint(); }

private:
    WorkProcess(DensityMatrix rho, HermitianObservable hi, HermitianObservable hf, Matrix u, Spectrum initial,
                Spectrum final_spec)
        : rho_(std::move(rho)), h_initial_(std::move(hi)), h_final_(std::move(hf)), u_(std::move(u)),
          initial_(std::move(initial)), final_(std::move(final_spec)) {}

    DensityMatrix rho_;
    HermitianObservable h_initial_;
    HermitianObservable h_final_;
    Matrix u_;
    Spectrum initial_;
    Spectrum final_;
};

/// TPM joint probabilities p_ij (row i: initial level, column j: final level).
inline RealMatrix tpm_joint(const WorkProcess& proc) {
    const auto d = proc.state().dim();
    const OrthonormalBasis evolved = proc.heisenberg_final_basis();
    const Matrix overlap = evolved.matrix().adjoint() * proc.initial().basis.matrix();  // (j, i)
    const Matrix pops = proc.initial().basis.matrix().adjoint() * proc.state().matrix() * proc.initial().basis.matrix();
    RealMatrix p(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) p(i, j) = std::norm(overlap(j, i)) * pops(i, i).real();
    return p;
}

/// Q_ij = Tr[U^H P_j(T) U P_i(t0) rho].
inline KDDistribution work_quasiprob(const WorkProcess& proc) {
    return kd_distribution(proc.state(), proc.initial().basis, proc.heisenberg_final_basis());
}

/// Where an (i -> j) transition places its atom.
enum class WorkSign {
    FinalMinusInitial,  // W = E_j(T) - E_i(t0); first moment equals <W>
    InitialMinusFinal,  // W = E_i(t0) - E_j(T); literal delta argument of the TPM density
};

constexpr std::string_view to_string(WorkSign s) {
    return s == WorkSign::FinalMinusInitial ? "final_minus_initial" : "initial_minus_final";
}

struct WorkAtom {
    double work;
    double weight;
};

struct WorkDistribution {
    std::vector<WorkAtom> atoms;  // ascending in work, merged
    WorkSign convention = WorkSign::FinalMinusInitial;

    double total_weight() const {
        double s = 0.0;
        for (const auto& a : atoms) s += a.weight;
        return s;
    }

    double first_moment() const {
        double s = 0.0;
        for (const auto& a : atoms) s += a.weight * a.work;
        return s;
    }
};

/// Atoms at W_ij with weight Q_ij. Work values within 1e-9 * max(1, |E|_max)
/// of each other share one atom.
inline WorkDistribution work_distribution(const RealMatrix& q, std::span<const double> e_initial,
                                          std::span<const double> e_final,
                                          WorkSign convention = WorkSign::FinalMinusInitial) {
    if (static_cast<std::size_t>(q.rows()) != e_initial.size() || static_cast<std::size_t>(q.cols()) != e_final.size())
        throw Error(ErrorCode::DimensionMismatch, "weight matrix does not match the energy lists");
    double scale = 1.0;
    for (double e : e_initial) scale = std::max(scale, std::abs(e));
    for (double e : e_final) scale = std::max(scale, std::abs(e));
    const double merge = 1e-9 * scale;

    std::vector<WorkAtom> raw;
    for (std::size_t i = 0; i < e_initial.size(); ++i)
        for (std::size_t j = 0; j < e_final.size(); ++j) {
            const double w = convention == WorkSign::FinalMinusInitial ? e_final[j] - e_initial[i]
                                                                       : e_initial[i] - e_final[j];
            raw.push_back({w, q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))});
        }
    std::stable_sort(raw.begin(), raw.end(), [](const WorkAtom& a, const WorkAtom& b) { return a.work < b.work; });

    WorkDistribution out;
    out.convention = convention;
    for (const auto& a : raw) {
        if (!out.atoms.empty() && a.work - out.atoms.back().work <= merge)
            out.atoms.back().weight += a.weight;
        else
            out.atoms.push_back(a);
    }
    return out;
}

inline WorkDistribution work_distribution(const MHQDistribution& q, std::span<const double> e_initial,
                                          std::span<const double> e_final,
                                          WorkSign convention = WorkSign::FinalMinusInitial) {
    RealMatrix m(static_cast<Eigen::Index>(q.shape()[0]), static_cast<Eigen::Index>(q.shape()[1]));
    for (std::size_t i = 0; i < q.shape()[0]; ++i)
        for (std::size_t j = 0; j < q.shape()[1]; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = q(i, j);
    return work_distribution(m, e_initial, e_final, convention);
}

/// <W> = Tr[H(T) U rho U^H] - Tr[H(t0) rho].
inline double mean_work(const WorkProcess& proc) {
    const Complex after = (proc.h_final().matrix() * proc.evolved_state()).trace();
    const Complex before = (proc.h_initial().matrix() * proc.state().matrix()).trace();
    return (after - before).real();
}

// ---------------------------------------------------------------------------
// Qubit in a field rotating about z
// ---------------------------------------------------------------------------
//
//   H(t) = [Omega (cos wt sx + sin wt sy) + w sz] / 2
//   U(t) = exp(-i w sz t / 2) exp(-i Omega sx t / 2)
//   E_g  = (-1)^(g+1) Delta / 2,  Delta = sqrt(w^2 + Omega^2)
//   P_g(t) = I/2 + (-1)^(g+1) [Omega (sx cos wt + sy sin wt) + w sz] / (2 Delta)
//
// The initial state is written in the H(0) energy basis {ground, excited}:
//   rho = [[Gamma, xi], [xi, 1 - Gamma]]
// with the excited-state phase fixed so that
//   rho = (I - (2 Gamma - 1) h.sigma + 2 xi m.sigma) / 2,
//   h = (Omega, 0, w) / Delta,  m = (w, 0, -Omega) / Delta.
// Gamma is the ground-state population. With Gamma = xi = 1/2 this choice
// reproduces the closed-form MHQ entries below.

namespace pauli {
inline Matrix x() { Matrix m(2, 2); m << 0, 1, 1, 0; return m; }
inline Matrix y() { Matrix m(2, 2); m << 0, Complex(0, -1), Complex(0, 1), 0; return m; }
inline Matrix z() { Matrix m(2, 2); m << 1, 0, 0, -1; return m; }
}  // namespace pauli

struct RotatingQubitParams {
    double omega = 1.0;  // field rotation frequency w
    double rabi = 1.0;   // transverse amplitude Omega
    double t = 0.0;
    double gamma = 0.5;  // ground-state population
    double xi = 0.5;     // coherence in the H(0) energy basis
};

struct RotatingQubit {
    WorkProcess process;
    std::optional<RealMatrix> closed_form_mhq;  // only for Gamma = xi = 1/2
};

inline Matrix rotating_hamiltonian(double omega, double rabi, double t) {
    return 0.5 * (rabi * (std::cos(omega * t) * pauli::x() + std::sin(omega * t) * pauli::y()) + omega * pauli::z());
}

inline Matrix rotating_projector(int level, double omega, double rabi, double t) {
    const double delta = std::hypot(omega, rabi);
    const double sign = level == 0 ? -1.0 : 1.0;
    const Matrix field = rabi * (pauli::x() * std::cos(omega * t) + pauli::y() * std::sin(omega * t)) + omega * pauli::z();
    return 0.5 * Matrix::Identity(2, 2) + sign * field / (2.0 * delta);
}

inline Matrix rotating_unitary(double omega, double rabi, double t) {
    Matrix rz = Matrix::Zero(2, 2);
    rz(0, 0) = std::polar(1.0, -omega * t / 2.0);
    rz(1, 1) = std::polar(1.0, omega * t / 2.0);
    const Matrix rx = std::cos(rabi * t / 2.0) * Matrix::Identity(2, 2) - Complex(0, std::sin(rabi * t / 2.0)) * pauli::x();
    return rz * rx;
}

/// Closed-form MHQ table for Gamma = xi = 1/2.
inline RealMatrix rotating_closed_form_mhq(double omega, double rabi, double t) {
    const double w = omega, r = rabi;
    const double d2 = w * w + r * r;
    const double c = std::cos(r * t);
    RealMatrix m(2, 2);
    m(0, 0) = (w * w - w * r + 2 * r * r + w * (w + r) * c) / (4 * d2);
    m(0, 1) = w * (w + r) * (1 - c) / (4 * d2);
    m(1, 0) = w * (w - r) * (1 - c) / (4 * d2);
    m(1, 1) = (w * w + w * r + 2 * r * r + w * (w - r) * c) / (4 * d2);
    return m;
}

namespace detail {

// Unit vector spanning the range of a rank-1 projector.
inline Vector range_vector(const Matrix& p) {
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < p.cols(); ++c)
        if (p.col(c).norm() > p.col(best).norm()) best = c;
    return p.col(best).normalized();
}

}  // namespace detail

inline RotatingQubit rotating_qubit_scenario(const RotatingQubitParams& prm) {
    const double w = prm.omega, r = prm.rabi, t = prm.t;
    if (!std::isfinite(w) || !std::isfinite(r) || !std::isfinite(t))
        throw Error(ErrorCode::ParameterOutOfRange, "scenario parameters must be finite");
    if (w == 0.0 && r == 0.0) throw Error(ErrorCode::ParameterOutOfRange, "omega and Omega cannot both be zero");
    if (!(prm.gamma >= 0.0 && prm.gamma <= 1.0) || !std::isfinite(prm.xi) ||
        prm.xi * prm.xi > prm.gamma * (1.0 - prm.gamma) + 1e-12)
        throw Error(ErrorCode::InvalidBlochParameters,
                    "need 0 <= Gamma <= 1 and |xi| <= sqrt(Gamma (1 - Gamma)); got Gamma = " +
                        detail::fmt_double(prm.gamma) + ", xi = " + detail::fmt_double(prm.xi));

    const double delta = std::hypot(w, r);
    const Matrix h_dir = (r * pauli::x() + w * pauli::z()) / delta;
    const Matrix m_dir = (w * pauli::x() - r * pauli::z()) / delta;
    Matrix rho = 0.5 * (Matrix::Identity(2, 2) - (2.0 * prm.gamma - 1.0) * h_dir + 2.0 * prm.xi * m_dir);

    auto spectrum_at = [&](double time, std::string label) {
        std::vector<Vector> vecs = {detail::range_vector(rotating_projector(0, w, r, time)),
                                    detail::range_vector(rotating_projector(1, w, r, time))};
        return Spectrum{{-delta / 2.0, delta / 2.0}, OrthonormalBasis::from_vectors(vecs, std::move(label))};
    };

    auto process = WorkProcess::from_spectra(validate_density(rho), HermitianObservable::from_matrix(rotating_hamiltonian(w, r, 0.0)),
                                             HermitianObservable::from_matrix(rotating_hamiltonian(w, r, t)),
                                             rotating_unitary(w, r, t), spectrum_at(0.0, "H(0)"), spectrum_at(t, "H(t)"));
    RotatingQubit out{std::move(process), std::nullopt};
    if (prm.gamma == 0.5 && prm.xi == 0.5) out.closed_form_mhq = rotating_closed_form_mhq(w, r, t);
    return out;
}

}  // namespace kdq
