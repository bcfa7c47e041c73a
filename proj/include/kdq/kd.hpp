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

// Kirkwood-Dirac family quasiprobability tables.
//
//   KD            Q_ij        = <f_j|a_i><a_i|rho|f_j>             (complex)
//   extended KD   Q_{i1..ik}  = Tr(P^(k)_{ik} ... P^(1)_{i1} rho)  (complex)
//   MHQ           Re Q_ij                                           (real)
//
// Extended tables are indexed in chain order: the first basis of the chain is
// the innermost projector and its index is the first (slowest) tensor index.
// For the chain (A, B, A) the entry at (i, k, j) is
// <a_j|b_k><b_k|a_i><a_i|rho|a_j>, which the coherence literature usually
// writes as Q*_{i,j,k}. Moments are power sums over all entries, so the index
// order never changes a detection verdict.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include "kdq/linalg.hpp"

namespace kdq {

enum class TableKind { KD, ExtendedKD, MHQ };

constexpr std::string_view to_string(TableKind kind) {
    switch (kind) {
        case TableKind::KD: return "KD";
        case TableKind::ExtendedKD: return "ExtendedKD";
        case TableKind::MHQ: return "MHQ";
    }
    return "?";
}

/// Dense k-index table of quasiprobabilities with one basis label per axis.
/// Storage is row-major: the last index varies fastest.
template <typename Scalar, TableKind Kind>
class QuasiprobabilityTable {
public:
    using scalar_type = Scalar;
    static constexpr TableKind kind = Kind;

    /// Validates shape and normalisation (|sum - 1| <= tol, imaginary part included).
    static QuasiprobabilityTable from_values(std::vector<std::size_t> shape, std::vector<Scalar> values,
                                             std::vector<std::string> labels = {}, double tol = kDefaultTol) {
        if (shape.empty()) throw Error(ErrorCode::DimensionMismatch, "table has no axes");
        const std::size_t expected =
            std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
        if (expected != values.size() || expected == 0)
            throw Error(ErrorCode::DimensionMismatch, "table shape holds " + std::to_string(expected) +
                                                          " entries but " + std::to_string(values.size()) +
                                                          " were given");
        if (labels.empty()) labels.resize(shape.size());
        if (labels.size() != shape.size())
            throw Error(ErrorCode::DimensionMismatch, "one basis label per axis is required");
        QuasiprobabilityTable t(std::move(shape), std::move(values), std::move(labels));
        const double defect = std::abs(t.sum() - Scalar(1));
        if (!(defect <= tol))
            throw Error(ErrorCode::TraceNotOne, "table entries sum to 1 + " + detail::fmt_double(defect));
        return t;
    }

    std::size_t rank() const { return shape_.size(); }
    const std::vector<std::size_t>& shape() const { return shape_; }
    std::size_t size() const { return values_.size(); }
    std::span<const Scalar> values() const { return values_; }
    const std::vector<std::string>& labels() const { return labels_; }

    Scalar operator()(std::size_t i, std::size_t j) const
        requires(Kind != TableKind::ExtendedKD)
    {
        return values_[i * shape_[1] + j];
    }

    Scalar at(std::span<const std::size_t> index) const { return values_[flat_index(index)]; }
    Scalar at(std::initializer_list<std::size_t> index) const {
        return at(std::span<const std::size_t>(index.begin(), index.size()));
    }

    std::size_t flat_index(std::span<const std::size_t> index) const {
        if (index.size() != shape_.size()) throw Error(ErrorCode::DimensionMismatch, "wrong number of indices");
        std::size_t flat = 0;
        for (std::size_t r = 0; r < shape_.size(); ++r) {
            if (index[r] >= shape_[r]) throw Error(ErrorCode::DimensionMismatch, "index out of range");
            flat = flat * shape_[r] + index[r];
        }
        return flat;
    }

    std::vector<std::size_t> unflatten(std::size_t flat) const {
        std::vector<std::size_t> index(shape_.size());
        for (std::size_t r = shape_.size(); r-- > 0;) {
            index[r] = flat % shape_[r];
            flat /= shape_[r];
        }
        return index;
    }

    Scalar sum() const { return std::accumulate(values_.begin(), values_.end(), Scalar(0)); }

private:
    QuasiprobabilityTable(std::vector<std::size_t> shape, std::vector<Scalar> values, std::vector<std::string> labels)
        : shape_(std::move(shape)), values_(std::move(values)), labels_(std::move(labels)) {}

    std::vector<std::size_t> shape_;
    std::vector<Scalar> values_;
    std::vector<std::string> labels_;
};

using KDDistribution = QuasiprobabilityTable<Complex, TableKind::KD>;
using ExtendedKD = QuasiprobabilityTable<Complex, TableKind::ExtendedKD>;
using MHQDistribution = QuasiprobabilityTable<double, TableKind::MHQ>;

template <typename T>
concept QuasiprobabilityTableType = requires(const T& t) {
    typename T::scalar_type;
    { T::kind } -> std::convertible_to<TableKind>;
    { t.values() };
    { t.unflatten(std::size_t{}) } -> std::same_as<std::vector<std::size_t>>;
};

namespace detail {

inline void require_same_dim(const DensityMatrix& rho, const OrthonormalBasis& b) {
    if (rho.dim() != b.dim())
        throw Error(ErrorCode::DimensionMismatch, "state has dimension " + std::to_string(rho.dim()) +
                                                      " but basis '" + b.label() + "' has " +
                                                      std::to_string(b.dim()));
}

// Overlap matrix O(x, y) = <next_x|prev_y>. Bitwise-identical bases give the
// exact identity, so same-basis tables have exact zeros off the diagonal.
inline Matrix overlaps(const OrthonormalBasis& prev, const OrthonormalBasis& next) {
    if (next.identical_to(prev)) return Matrix::Identity(prev.dim(), prev.dim());
    return next.matrix().adjoint() * prev.matrix();
}

// Entry (i1..ik) = <v1_i1|rho|vk_ik> * prod_r <v(r+1)_{i(r+1)}|v(r)_{ir}>.
inline std::vector<Complex> chain_entries(const DensityMatrix& rho, std::span<const OrthonormalBasis> chain) {
    const auto d = static_cast<std::size_t>(rho.dim());
    const std::size_t k = chain.size();
    const Matrix edge = chain.front().matrix().adjoint() * rho.matrix() * chain.back().matrix();
    std::vector<Matrix> links;
    links.reserve(k - 1);
    for (std::size_t r = 0; r + 1 < k; ++r) links.push_back(overlaps(chain[r], chain[r + 1]));

    std::size_t total = 1;
    for (std::size_t r = 0; r < k; ++r) total *= d;
    std::vector<Complex> out(total);
    std::vector<std::size_t> idx(k, 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t rem = flat;
        for (std::size_t r = k; r-- > 0;) {
            idx[r] = rem % d;
            rem /= d;
        }
        Complex value = edge(static_cast<Eigen::Index>(idx.front()), static_cast<Eigen::Index>(idx.back()));
        for (std::size_t r = 0; r + 1 < k; ++r)
            value *= links[r](static_cast<Eigen::Index>(idx[r + 1]), static_cast<Eigen::Index>(idx[r]));
        out[flat] = value;
    }
    return out;
}

}  // namespace detail

/// Q_ij = <f_j|a_i><a_i|rho|f_j>; rows follow A, columns follow F.
inline KDDistribution kd_distribution(const DensityMatrix& rho, const OrthonormalBasis& a,
                                      const OrthonormalBasis& f) {
    detail::require_same_dim(rho, a);
    detail::require_same_dim(rho, f);
    const OrthonormalBasis chain[] = {a, f};
    const auto d = static_cast<std::size_t>(rho.dim());
    return KDDistribution::from_values({d, d}, detail::chain_entries(rho, chain), {a.label(), f.label()});
}

inline ExtendedKD extended_kd(const DensityMatrix& rho, std::span<const OrthonormalBasis> chain) {
    if (chain.size() < 2)
        throw Error(ErrorCode::ChainTooShort, "extended KD needs at least 2 bases, got " +
                                                  std::to_string(chain.size()));
    std::vector<std::size_t> shape;
    std::vector<std::string> labels;
    for (const auto& b : chain) {
        detail::require_same_dim(rho, b);
        shape.push_back(static_cast<std::size_t>(b.dim()));
        labels.push_back(b.label());
    }
    return ExtendedKD::from_values(std::move(shape), detail::chain_entries(rho, chain), std::move(labels));
}

inline MHQDistribution mhq(const KDDistribution& kd) {
    std::vector<double> re;
    re.reserve(kd.size());
    for (const auto& q : kd.values()) re.push_back(q.real());
    return MHQDistribution::from_values(kd.shape(), std::move(re), kd.labels());
}

struct Marginals {
    std::vector<double> row;  // p(a_i | rho)
    std::vector<double> col;  // p(f_j | rho)
};

/// Real row/column sums. A non-real sum means the table was not built from a
/// valid state and basis pair.
inline Marginals marginals(const KDDistribution& kd, double tol = kDefaultTol) {
    const auto rows = kd.shape()[0], cols = kd.shape()[1];
    std::vector<Complex> r(rows), c(cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            r[i] += kd(i, j);
            c[j] += kd(i, j);
        }
    Marginals out;
    auto take = [tol](const std::vector<Complex>& sums, std::vector<double>& dst, std::string_view axis) {
        for (std::size_t k = 0; k < sums.size(); ++k) {
            if (std::abs(sums[k].imag()) > tol)
                throw Error(ErrorCode::MarginalNotReal, std::string(axis) + " marginal " + std::to_string(k) +
                                                            " has imaginary part " +
                                                            detail::fmt_double(sums[k].imag()));
            dst.push_back(sums[k].real());
        }
    };
    take(r, out.row, "row");
    take(c, out.col, "column");
    return out;
}

/// Default floor on |<f_j|a_i>| below which division by the overlap is refused.
inline constexpr double kOverlapFloor = 1e-8;

namespace detail {

inline Matrix checked_overlaps(const OrthonormalBasis& a, const OrthonormalBasis& f, double floor) {
    if (a.dim() != f.dim()) throw Error(ErrorCode::DimensionMismatch, "bases have different dimensions");
    const Matrix o = f.matrix().adjoint() * a.matrix();  // o(j, i) = <f_j|a_i>
    for (Eigen::Index j = 0; j < o.rows(); ++j)
        for (Eigen::Index i = 0; i < o.cols(); ++i)
            if (std::abs(o(j, i)) <= floor)
                throw Error(ErrorCode::ZeroOverlap, "|<f_" + std::to_string(j) + "|a_" + std::to_string(i) +
                                                        ">| = " + fmt_double(std::abs(o(j, i))));
    return o;
}

}  // namespace detail

/// Inverts the operator expansion rho = sum_ij |a_i><f_j| Q_ij / <f_j|a_i>.
inline DensityMatrix reconstruct_state(const KDDistribution& kd, const OrthonormalBasis& a,
                                       const OrthonormalBasis& f, double overlap_floor = kOverlapFloor) {
    const Matrix o = detail::checked_overlaps(a, f, overlap_floor);
    const auto d = a.dim();
    if (kd.shape()[0] != static_cast<std::size_t>(d) || kd.shape()[1] != static_cast<std::size_t>(d))
        throw Error(ErrorCode::DimensionMismatch, "table shape does not match the bases");
    // coeff(i, j) = <a_i|rho|f_j>, so rho = A coeff F^H.
    Matrix coeff(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            coeff(i, j) = kd(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) / o(j, i);
    Matrix rho = a.matrix() * coeff * f.matrix().adjoint();
    rho = 0.5 * (rho + rho.adjoint());
    return validate_density(rho, 1e-8);
}

/// O^w_ij = <f_j|O|a_i> / <f_j|a_i>, laid out like the KD table.
inline Matrix weak_values(const HermitianObservable& obs, const OrthonormalBasis& a, const OrthonormalBasis& f,
                          double overlap_floor = kOverlapFloor) {
    if (obs.dim() != a.dim()) throw Error(ErrorCode::DimensionMismatch, "observable and bases differ in dimension");
    const Matrix o = detail::checked_overlaps(a, f, overlap_floor);
    const Matrix num = f.matrix().adjoint() * obs.matrix() * a.matrix();  // num(j, i) = <f_j|O|a_i>
    Matrix w(a.dim(), f.dim());
    for (Eigen::Index i = 0; i < w.rows(); ++i)
        for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = num(j, i) / o(j, i);
    return w;
}

/// sum_ij Q_ij O^w_ij, which equals Tr(O rho).
inline Complex expectation_via_kd(const KDDistribution& kd, const Matrix& weak) {
    if (static_cast<std::size_t>(weak.rows()) != kd.shape()[0] ||
        static_cast<std::size_t>(weak.cols()) != kd.shape()[1])
        throw Error(ErrorCode::DimensionMismatch, "weak-value matrix does not match the table");
    Complex s = 0.0;
    for (std::size_t i = 0; i < kd.shape()[0]; ++i)
        for (std::size_t j = 0; j < kd.shape()[1]; ++j)
            s += kd(i, j) * weak(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    return s;
}

// ---------------------------------------------------------------------------
// Entry-level ground truth
// ---------------------------------------------------------------------------

enum class Positivity { Positive, NegativeReal, NonReal };

constexpr std::string_view to_string(Positivity p) {
    switch (p) {
        case Positivity::Positive: return "Positive";
        case Positivity::NegativeReal: return "NegativeReal";
        case Positivity::NonReal: return "NonReal";
    }
    return "?";
}

struct Witness {
    std::vector<std::size_t> index;
    Complex value;
};

struct OracleVerdict {
    Positivity kind = Positivity::Positive;
    std::vector<Witness> witnesses;  // every offending entry
    bool positive() const { return kind == Positivity::Positive; }
};

/// Positive iff every entry has |Im| <= tol and Re >= -tol. NonReal takes
/// precedence over NegativeReal when both kinds of violation are present.
template <QuasiprobabilityTableType Table>
OracleVerdict entry_nonpositivity_oracle(const Table& table, double tol = kDefaultTol) {
    OracleVerdict out;
    bool non_real = false, negative = false;
    const auto values = table.values();
    for (std::size_t n = 0; n < values.size(); ++n) {
        const Complex q(values[n]);
        const bool bad_im = std::abs(q.imag()) > tol;
        const bool bad_re = q.real() < -tol;
        if (bad_im || bad_re) out.witnesses.push_back({table.unflatten(n), q});
        non_real = non_real || bad_im;
        negative = negative || bad_re;
    }
    out.kind = non_real ? Positivity::NonReal : negative ? Positivity::NegativeReal : Positivity::Positive;
    return out;
}

/// N = -1 + sum |Q^MHQ_ij|; zero for a genuine probability table.
inline double negativity(const MHQDistribution& table) {
    double s = 0.0;
    for (double q : table.values()) s += std::abs(q);
    return s - 1.0;
}

/// l1-norm of coherence: sum over i != j of |<a_i|rho|a_j>|.
inline double l1_coherence(const DensityMatrix& rho, const OrthonormalBasis& a) {
    detail::require_same_dim(rho, a);
    const Matrix r = a.matrix().adjoint() * rho.matrix() * a.matrix();
    double s = 0.0;
    for (Eigen::Index i = 0; i < r.rows(); ++i)
        for (Eigen::Index j = 0; j < r.cols(); ++j)
            if (i != j) s += std::abs(r(i, j));
    return s;
}

}  // namespace kdq
