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

// Moment-based nonpositivity detection.
//
// For a table with entries x_1..x_N the n-th moment is sum_k x_k^n. If every
// x_k is real and nonnegative, the Hankel matrix [H_m]_{ij} = moment_{i+j+1}
// (i, j = 0..m) factors as V diag(x) V^T and is positive semidefinite, so
// det H_m >= 0 for every m. A negative determinant therefore certifies that
// some entry is negative or non-real. Level m = 1 is the familiar
// q_2^2 <= q_3 test.
//
// Complex tables may have non-real moments. A positive table cannot, so any
// moment with |Im| > tol_im is itself a certificate (verdict NonRealMoments);
// this short-circuit is a choice of this library, not part of the classical
// Hankel criterion. Otherwise determinants are taken on the real parts.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "kdq/kd.hpp"
#include "kdq/linalg.hpp"

namespace kdq {

/// Power sums q_1..q_N of a table. Index n is 1-based via operator().
struct MomentVector {
    std::vector<Complex> values;  // values[n - 1] = q_n
    TableKind source = TableKind::KD;

    std::size_t size() const { return values.size(); }
    Complex operator()(std::size_t n) const { return values.at(n - 1); }
};

/// q_n = sum over all entries of entry^n, n = 1..count. Powers are built by
/// repeated multiplication, never std::pow.
template <QuasiprobabilityTableType Table>
MomentVector moments(const Table& table, std::size_t count) {
    if (count < 1) throw Error(ErrorCode::ParameterOutOfRange, "need at least one moment");
    using S = typename Table::scalar_type;
    std::vector<S> acc(count, S(0));
    for (const S x : table.values()) {
        S p = x;
        for (std::size_t n = 0; n < count; ++n) {
            acc[n] += p;
            p *= x;
        }
    }
    MomentVector out;
    out.source = Table::kind;
    out.values.assign(acc.begin(), acc.end());
    return out;
}

/// Determinant by LU factorisation with partial pivoting.
inline double lu_determinant(RealMatrix a) {
    if (a.rows() != a.cols()) throw Error(ErrorCode::NotSquare, "determinant of a non-square matrix");
    const Eigen::Index n = a.rows();
    double det = 1.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        Eigen::Index pivot = k;
        for (Eigen::Index r = k + 1; r < n; ++r)
            if (std::abs(a(r, k)) > std::abs(a(pivot, k))) pivot = r;
        if (a(pivot, k) == 0.0) return 0.0;
        if (pivot != k) {
            a.row(k).swap(a.row(pivot));
            det = -det;
        }
        det *= a(k, k);
        for (Eigen::Index r = k + 1; r < n; ++r) {
            const double factor = a(r, k) / a(k, k);
            for (Eigen::Index c = k + 1; c < n; ++c) a(r, c) -= factor * a(k, c);
        }
    }
    return det;
}

struct DetectionTolerances {
    double det_rel = 1e-12;  // tol_det = det_rel * max(1, ||H_m||_inf^(m+1))
    double im = 1e-10;       // largest |Im q_n| still treated as real
    double oracle = 1e-10;   // entry oracle tolerance
};

/// Largest level the detectors accept; moments up to order 13 stay well
/// above double-precision underflow for tables of d^2 entries of size <= 1.
inline constexpr int kMaxLevel = 6;
inline constexpr int kDefaultLevel = 3;

struct HankelReport {
    int level = 0;
    RealMatrix matrix;
    double determinant = 0.0;
    double imaginary_residue = 0.0;  // max |Im q_n| over the moments used
    double det_tolerance = 0.0;
};

inline double hankel_det_tolerance(const RealMatrix& h, double det_rel) {
    const double inf_norm = h.cwiseAbs().rowwise().sum().maxCoeff();
    return det_rel * std::max(1.0, std::pow(inf_norm, static_cast<double>(h.rows())));
}

/// (m+1) x (m+1) Hankel matrix [H]_{ij} = Re q_{i+j+1}.
inline HankelReport hankel(const MomentVector& q, int level, double det_rel = DetectionTolerances{}.det_rel) {
    if (level < 1) throw Error(ErrorCode::ParameterOutOfRange, "Hankel level must be >= 1");
    const auto needed = static_cast<std::size_t>(2 * level + 1);
    if (q.size() < needed)
        throw Error(ErrorCode::InsufficientMoments, "level " + std::to_string(level) + " needs " +
                                                        std::to_string(needed) + " moments, have " +
                                                        std::to_string(q.size()));
    HankelReport r;
    r.level = level;
    r.matrix.resize(level + 1, level + 1);
    for (int i = 0; i <= level; ++i)
        for (int j = 0; j <= level; ++j) r.matrix(i, j) = q.values[static_cast<std::size_t>(i + j)].real();
    for (std::size_t n = 0; n < needed; ++n) r.imaginary_residue = std::max(r.imaginary_residue, std::abs(q.values[n].imag()));
    r.determinant = lu_determinant(r.matrix);
    r.det_tolerance = hankel_det_tolerance(r.matrix, det_rel);
    return r;
}

enum class Verdict { Detected, NotDetected, NonRealMoments };

constexpr std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Detected: return "Detected";
        case Verdict::NotDetected: return "NotDetected";
        case Verdict::NonRealMoments: return "NonRealMoments";
    }
    return "?";
}

struct DetectionReport {
    Verdict verdict = Verdict::NotDetected;
    int level = 0;  // witnessing level when Detected, else 0
    MomentVector moments;
    std::vector<HankelReport> reports;  // levels 1..m_max
    DetectionTolerances tolerances;
    std::optional<OracleVerdict> oracle;

    // Resource quantity tied to the detector: l1 coherence or MHQ negativity.
    std::string resource_name;
    std::optional<double> resource_value;

    bool flagged() const { return verdict != Verdict::NotDetected; }

    /// False only if the detector fired on a table the entry oracle calls positive.
    bool consistent() const { return !(flagged() && oracle && oracle->positive()); }

    const HankelReport& at_level(int m) const { return reports.at(static_cast<std::size_t>(m - 1)); }

    std::string summary() const {
        std::ostringstream os;
        os.precision(6);
        switch (verdict) {
            case Verdict::Detected:
                os << "nonpositivity detected at level " << level << " (det H_" << level << " = "
                   << at_level(level).determinant << " < -" << at_level(level).det_tolerance << ")";
                break;
            case Verdict::NonRealMoments:
                os << "nonpositivity certified by non-real moments (max |Im| = "
                   << reports.back().imaginary_residue << " > " << tolerances.im << ")";
                break;
            case Verdict::NotDetected:
                os << "not detected up to level " << reports.size()
                   << " (the criterion is one-sided; this does not certify positivity)";
                break;
        }
        if (oracle) os << "; entry oracle: " << to_string(oracle->kind);
        if (resource_value) os << "; " << resource_name << " = " << *resource_value;
        return os.str();
    }
};

/// Scans det H_m for m = 1..m_max and stops at the first m with
/// det H_m < -tol_det. Non-real moments short-circuit to NonRealMoments.
inline DetectionReport hierarchy_detect(const MomentVector& q, int m_max = kDefaultLevel,
                                        const DetectionTolerances& tol = {}) {
    if (m_max < 1 || m_max > kMaxLevel)
        throw Error(ErrorCode::ParameterOutOfRange,
                    "m_max must be in [1, " + std::to_string(kMaxLevel) + "], got " + std::to_string(m_max));
    if (q.size() < static_cast<std::size_t>(2 * m_max + 1))
        throw Error(ErrorCode::InsufficientMoments, "m_max = " + std::to_string(m_max) + " needs " +
                                                        std::to_string(2 * m_max + 1) + " moments, have " +
                                                        std::to_string(q.size()));
    DetectionReport out;
    out.moments = q;
    out.tolerances = tol;
    for (int m = 1; m <= m_max; ++m) out.reports.push_back(hankel(q, m, tol.det_rel));

    if (out.reports.back().imaginary_residue > tol.im) {
        out.verdict = Verdict::NonRealMoments;
        return out;
    }
    for (const auto& r : out.reports) {
        if (r.determinant < -r.det_tolerance) {
            out.verdict = Verdict::Detected;
            out.level = r.level;
            return out;
        }
    }
    out.verdict = Verdict::NotDetected;
    return out;
}

/// Moments, hierarchy and entry oracle for any table.
template <QuasiprobabilityTableType Table>
DetectionReport detect_table(const Table& table, int m_max = kDefaultLevel, const DetectionTolerances& tol = {}) {
    if (m_max < 1 || m_max > kMaxLevel)
        throw Error(ErrorCode::ParameterOutOfRange,
                    "m_max must be in [1, " + std::to_string(kMaxLevel) + "], got " + std::to_string(m_max));
    auto report = hierarchy_detect(moments(table, static_cast<std::size_t>(2 * m_max + 1)), m_max, tol);
    report.oracle = entry_nonpositivity_oracle(table, tol.oracle);
    return report;
}

/// KD table of (rho, A, F) run through the hierarchy.
inline DetectionReport detect_kd_nonpositivity(const DensityMatrix& rho, const OrthonormalBasis& a,
                                               const OrthonormalBasis& f, int m_max = kDefaultLevel,
                                               const DetectionTolerances& tol = {}) {
    return detect_table(kd_distribution(rho, a, f), m_max, tol);
}

/// Extended KD over the chain (A, B, A) with B unbiased to A. A flagged
/// report implies nonzero l1 coherence of rho in A.
inline DetectionReport detect_coherence(const DensityMatrix& rho, const OrthonormalBasis& a,
                                        const OrthonormalBasis& b, int m_max = kDefaultLevel,
                                        const DetectionTolerances& tol = {}, double mub_tol = kDefaultTol) {
    if (!mub_check(a, b, mub_tol))
        throw Error(ErrorCode::NotMUB, "basis '" + b.label() + "' is not unbiased with respect to '" + a.label() + "'");
    const OrthonormalBasis chain[] = {a, b, a};
    auto report = detect_table(extended_kd(rho, chain), m_max, tol);
    report.resource_name = "l1_coherence";
    report.resource_value = l1_coherence(rho, a);
    return report;
}

/// MHQ work table through the hierarchy. A flagged report implies N > 0.
inline DetectionReport detect_work_nonclassicality(const MHQDistribution& table, int m_max = kDefaultLevel,
                                                   const DetectionTolerances& tol = {}) {
    auto report = detect_table(table, m_max, tol);
    report.resource_name = "negativity";
    report.resource_value = negativity(table);
    return report;
}

}  // namespace kdq
