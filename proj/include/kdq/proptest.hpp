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

// Randomised invariant checks over (rho, A, F).
//
// Every check compares a library quantity against a direct oracle computed
// here from the raw matrices (Born rule, Tr(O rho), entry scan), never via the
// function under test. Trial t of dimension d uses seed (base_seed + t), so a
// failure replays with --seed <printed seed> --trials 1.

#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "kdq/kd.hpp"
#include "kdq/linalg.hpp"
#include "kdq/moments.hpp"

namespace kdq::proptest {

struct Thresholds {
    double normalization = 1e-10;
    double marginal = 1e-10;
    double reconstruction = 1e-8;
    double reconstruction_min_overlap = 1e-4;
    double weak_value = 1e-10;
    double chain = 1e-10;

    /// Every threshold replaced by one value; a negative value forces failures.
    static Thresholds uniform(double tol) {
        Thresholds t;
        t.normalization = t.marginal = t.reconstruction = t.weak_value = t.chain = tol;
        return t;
    }
};

struct Violation {
    std::string check;
    Eigen::Index dim;
    std::uint64_t seed;
    double error;
    double threshold;
};

struct Summary {
    std::map<std::string, std::size_t> evaluated;  // check -> number of evaluations
    std::map<std::string, double> worst;           // check -> largest error seen
    std::size_t flagged = 0;                       // detector fired (Detected / NonRealMoments)
    std::size_t trials = 0;
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
};

namespace detail {

inline void record(Summary& s, const std::string& check, double error, double threshold, Eigen::Index d,
                   std::uint64_t seed) {
    ++s.evaluated[check];
    auto& w = s.worst[check];
    w = std::max(w, error);
    if (!(error < threshold)) s.violations.push_back({check, d, seed, error, threshold});
}

inline HermitianObservable random_observable(Eigen::Index d, std::mt19937_64& rng) {
    const Matrix g = kdq::detail::ginibre(d, d, rng);
    return HermitianObservable::from_matrix(0.5 * (g + g.adjoint()));
}

// Fourier basis expressed in the frame of A: unbiased to A by construction.
inline OrthonormalBasis unbiased_to(const OrthonormalBasis& a) {
    return fourier_basis(a.dim()).transformed(a.matrix(), "fourier(A)");
}

}  // namespace detail

/// One trial: all checks for the inputs generated from `seed`.
inline void run_trial(Summary& s, Eigen::Index d, std::uint64_t seed, const Thresholds& th, int m_max) {
    const auto in = random_state_and_bases(d, seed);
    const Matrix& rho = in.state.matrix();
    const Matrix& a = in.basis_a.matrix();
    const Matrix& f = in.basis_f.matrix();
    const auto kd = kd_distribution(in.state, in.basis_a, in.basis_f);

    detail::record(s, "normalization", std::abs(kd.sum() - 1.0), th.normalization, d, seed);
    {
        const auto mh = mhq(kd);
        detail::record(s, "normalization_mhq", std::abs(mh.sum() - 1.0), th.normalization, d, seed);
    }

    // Born rule: p(a_i) = <a_i|rho|a_i>, p(f_j) = <f_j|rho|f_j>.
    const auto marg = marginals(kd);
    double worst_marg = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) {
        const double born_a = (a.col(i).adjoint() * rho * a.col(i))(0, 0).real();
        const double born_f = (f.col(i).adjoint() * rho * f.col(i))(0, 0).real();
        worst_marg = std::max({worst_marg, std::abs(marg.row[static_cast<std::size_t>(i)] - born_a),
                               std::abs(marg.col[static_cast<std::size_t>(i)] - born_f)});
    }
    detail::record(s, "marginals", worst_marg, th.marginal, d, seed);

    const double min_overlap = (f.adjoint() * a).cwiseAbs().minCoeff();
    if (min_overlap > th.reconstruction_min_overlap) {
        const auto back = reconstruct_state(kd, in.basis_a, in.basis_f);
        detail::record(s, "reconstruction", max_abs(back.matrix() - rho), th.reconstruction, d, seed);
    }

    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    if (min_overlap > kOverlapFloor) {
        const auto obs = detail::random_observable(d, rng);
        const Complex direct = (obs.matrix() * rho).trace();
        const Complex via_kd = expectation_via_kd(kd, weak_values(obs, in.basis_a, in.basis_f));
        detail::record(s, "weak_value_identity", std::abs(via_kd - direct), th.weak_value, d, seed);
    }

    // Chain (A, B, A) with B unbiased to A: summing out B leaves
    // delta_ij <a_i|rho|a_i>, and sum |Q*| - 1 is the l1 coherence.
    {
        const OrthonormalBasis b = detail::unbiased_to(in.basis_a);
        const OrthonormalBasis chain[] = {in.basis_a, b, in.basis_a};
        const auto ext = extended_kd(in.state, chain);
        const Matrix rho_a = a.adjoint() * rho * a;
        double worst = 0.0, abs_sum = 0.0;
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index j = 0; j < d; ++j) {
                Complex acc = 0.0;
                for (Eigen::Index k = 0; k < d; ++k) {
                    const std::size_t idx[] = {static_cast<std::size_t>(i), static_cast<std::size_t>(k),
                                               static_cast<std::size_t>(j)};
                    const Complex q = ext.at(idx);
                    acc += q;
                    abs_sum += std::abs(q);
                }
                const Complex expect = i == j ? rho_a(i, i) : Complex(0.0);
                worst = std::max(worst, std::abs(acc - expect));
            }
        detail::record(s, "chain_marginal", worst, th.chain, d, seed);
        double l1 = 0.0;
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index j = 0; j < d; ++j)
                if (i != j) l1 += std::abs(rho_a(i, j));
        detail::record(s, "coherence_identity", std::abs((abs_sum - 1.0) - l1), th.chain, d, seed);
    }

    // Soundness: a flagged report must come with a nonpositive table, judged
    // by scanning the entries directly.
    const auto report = detect_table(kd, m_max);
    if (report.flagged()) {
        ++s.flagged;
        bool any_bad = false;
        for (const auto& q : kd.values())
            any_bad = any_bad || std::abs(q.imag()) > 1e-10 || q.real() < -1e-10;
        detail::record(s, "soundness", any_bad ? 0.0 : 1.0, 0.5, d, seed);
    } else {
        ++s.evaluated["soundness"];
    }
    ++s.trials;
}

inline Summary run(std::uint64_t base_seed, const std::vector<Eigen::Index>& dims, std::size_t trials,
                   const Thresholds& th = {}, int m_max = kDefaultLevel) {
    Summary s;
    for (const auto d : dims)
        for (std::size_t t = 0; t < trials; ++t) run_trial(s, d, base_seed + t, th, m_max);
    return s;
}

}  // namespace kdq::proptest
