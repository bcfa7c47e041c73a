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

// Worked examples with their reference values.
//
// Each scenario carries its inputs and a list of expected quantities. The
// expectations come from closed forms evaluated independently of the
// production pipeline; evaluate() then runs the pipeline (table -> moments ->
// hierarchy) and compares.
//
//   1  two-qubit Werner-like state between two unbiased product bases
//   2  two-qubit pure state where level 1 is silent and level 2 detects
//   3  qubit coherence through the extended chain (Z, B(beta), Z)
//   4  rotating-field qubit work statistics, maximally coherent start

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kdq/kd.hpp"
#include "kdq/linalg.hpp"
#include "kdq/moments.hpp"
#include "kdq/work.hpp"

namespace kdq {

enum class Provenance { PaperTable, PaperFormula, DerivedOracle };

constexpr std::string_view to_string(Provenance p) {
    switch (p) {
        case Provenance::PaperTable: return "paper-table";
        case Provenance::PaperFormula: return "paper-formula";
        case Provenance::DerivedOracle: return "derived-oracle";
    }
    return "?";
}

struct Expectation {
    std::string quantity;
    Complex value;
    Provenance provenance;
    double tolerance;
};

enum class DetectionMode { KD, Coherence, Work };

constexpr std::string_view to_string(DetectionMode m) {
    switch (m) {
        case DetectionMode::KD: return "kd";
        case DetectionMode::Coherence: return "coherence";
        case DetectionMode::Work: return "work";
    }
    return "?";
}

struct CheckResult {
    Expectation expected;
    Complex actual;
    bool pass;
};

struct ScenarioEvaluation {
    DetectionReport report;
    std::map<std::string, Complex> computed;
    std::vector<CheckResult> checks;
    bool verdict_pass = true;

    bool all_pass() const {
        if (!verdict_pass) return false;
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

struct ScenarioResult {
    std::string id;
    std::map<std::string, double> parameters;
    DetectionMode mode = DetectionMode::KD;

    // KD: {A, F}. Coherence: {A, B}. Work: unused.
    std::optional<DensityMatrix> state;
    std::vector<OrthonormalBasis> bases;
    std::optional<WorkProcess> process;

    std::vector<Expectation> expected;
    std::optional<Verdict> expected_verdict;
    int expected_level = 0;

    const Expectation* find(std::string_view quantity) const {
        for (const auto& e : expected)
            if (e.quantity == quantity) return &e;
        return nullptr;
    }

    /// Runs the production pipeline and compares against the expectations.
    ScenarioEvaluation evaluate(int m_max = kDefaultLevel, const DetectionTolerances& tol = {}) const;
};

namespace detail {

inline std::string entry_name(std::initializer_list<std::size_t> idx) {
    std::string s = "Q[";
    bool first = true;
    for (auto i : idx) {
        if (!first) s += ",";
        s += std::to_string(i);
        first = false;
    }
    return s + "]";
}

inline std::string moment_name(TableKind k, std::size_t n) {
    const char* letter = k == TableKind::KD ? "q" : k == TableKind::ExtendedKD ? "r" : "s";
    return std::string(letter) + "_" + std::to_string(n);
}

// Power sums of a plain list of entries.
inline std::vector<Complex> power_sums(const std::vector<Complex>& entries, std::size_t count) {
    std::vector<Complex> out(count, 0.0);
    for (const auto& x : entries) {
        Complex p = x;
        for (std::size_t n = 0; n < count; ++n) {
            out[n] += p;
            p *= x;
        }
    }
    return out;
}

// Closed-form determinants of H_1 and H_2 from real moments m1..m5.
inline double det_h1(const std::vector<Complex>& m) {
    return m[2].real() * m[0].real() - m[1].real() * m[1].real();
}

inline double det_h2(const std::vector<Complex>& m) {
    const double a = m[0].real(), b = m[1].real(), c = m[2].real(), d = m[3].real(), e = m[4].real();
    return a * (c * e - d * d) - b * (b * e - d * c) + c * (b * d - c * c);
}

inline void require_range(double x, double lo, double hi, std::string_view name) {
    if (!(x >= lo && x <= hi))
        throw Error(ErrorCode::ParameterOutOfRange, std::string(name) + " = " + fmt_double(x) + " outside [" +
                                                        fmt_double(lo) + ", " + fmt_double(hi) + "]");
}

inline Vector ket(std::initializer_list<Complex> amps) {
    Vector v(static_cast<Eigen::Index>(amps.size()));
    Eigen::Index k = 0;
    for (auto a : amps) v(k++) = a;
    return v;
}

// |x>|y> with x, y single-qubit kets.
inline Vector kron(const Vector& x, const Vector& y) {
    Vector v(x.size() * y.size());
    for (Eigen::Index i = 0; i < x.size(); ++i)
        for (Eigen::Index j = 0; j < y.size(); ++j) v(i * y.size() + j) = x(i) * y(j);
    return v;
}

inline const Vector& k0() { static const Vector v = ket({1.0, 0.0}); return v; }
inline const Vector& k1() { static const Vector v = ket({0.0, 1.0}); return v; }
inline const Vector& kplus() { static const Vector v = ket({std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2}); return v; }
inline const Vector& kminus() { static const Vector v = ket({std::numbers::sqrt2 / 2, -std::numbers::sqrt2 / 2}); return v; }

inline bool angle_equal(double x, double y) {
    const double diff = std::remainder(x - y, 2.0 * std::numbers::pi);
    return std::abs(diff) < 1e-12;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Example 1
// ---------------------------------------------------------------------------

/// rho = p |Psi><Psi| + (1 - p) I/4 with |Psi> = (|00> + |01> + |10> - |11>)/2,
/// A = {|00>, |01>, |10>, |11>}, F = {|++>, |-+>, |+->, |-->}.
inline ScenarioResult example1(double p) {
    detail::require_range(p, 0.0, 1.0, "p");
    using detail::kron;
    ScenarioResult s;
    s.id = "example1";
    s.parameters = {{"p", p}};
    s.mode = DetectionMode::KD;

    const Vector psi = detail::ket({0.5, 0.5, 0.5, -0.5});
    const Matrix rho = p * projector(psi) + (1.0 - p) / 4.0 * Matrix::Identity(4, 4);
    s.state = validate_density(rho);
    s.bases.push_back(OrthonormalBasis::from_vectors({kron(detail::k0(), detail::k0()), kron(detail::k0(), detail::k1()),
                                                      kron(detail::k1(), detail::k0()), kron(detail::k1(), detail::k1())},
                                                     "{|00>,|01>,|10>,|11>}"));
    s.bases.push_back(OrthonormalBasis::from_vectors(
        {kron(detail::kplus(), detail::kplus()), kron(detail::kminus(), detail::kplus()),
         kron(detail::kplus(), detail::kminus()), kron(detail::kminus(), detail::kminus())},
        "{|++>,|-+>,|+->,|-->}"));

    // Row index follows A, column index follows F; the (1 - 3p)/16 cells lie
    // on the anti-diagonal i + j = 3.
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            const double v = (i + j == 3) ? (1.0 - 3.0 * p) / 16.0 : (1.0 + p) / 16.0;
            s.expected.push_back({detail::entry_name({i, j}), v, Provenance::PaperTable, 1e-12});
        }
    const double gap = 9.0 * std::pow(p, 4) / 256.0 + 3.0 * std::pow(p, 3) / 128.0 - 3.0 * p * p / 256.0;
    s.expected.push_back({"q2^2-q3", gap, Provenance::PaperFormula, 1e-12});
    s.expected.push_back({"det_H1", -gap, Provenance::PaperFormula, 1e-12});
    s.expected.push_back({"q_1", 1.0, Provenance::DerivedOracle, 1e-12});
    if (p > 1.0 / 3.0) {
        s.expected_verdict = Verdict::Detected;
        s.expected_level = 1;
    } else {
        s.expected_verdict = Verdict::NotDetected;
    }
    return s;
}

// ---------------------------------------------------------------------------
// Example 2
// ---------------------------------------------------------------------------

/// |Psi> = (|00> + 2|01>)/sqrt(5), A computational, F = {|0+>, |0->, |1+>, |1->}.
inline ScenarioResult example2() {
    using detail::kron;
    ScenarioResult s;
    s.id = "example2";
    s.mode = DetectionMode::KD;
    const double r5 = std::sqrt(5.0);
    s.state = DensityMatrix::pure(StateVector::from_amplitudes(detail::ket({1.0 / r5, 2.0 / r5, 0.0, 0.0})));
    s.bases.push_back(OrthonormalBasis::from_vectors({kron(detail::k0(), detail::k0()), kron(detail::k0(), detail::k1()),
                                                      kron(detail::k1(), detail::k0()), kron(detail::k1(), detail::k1())},
                                                     "{|00>,|01>,|10>,|11>}"));
    s.bases.push_back(OrthonormalBasis::from_vectors(
        {kron(detail::k0(), detail::kplus()), kron(detail::k0(), detail::kminus()),
         kron(detail::k1(), detail::kplus()), kron(detail::k1(), detail::kminus())},
        "{|0+>,|0->,|1+>,|1->}"));

    double table[4][4] = {};
    table[0][0] = 3.0 / 10.0;   // a = |00>, f = |0+>
    table[1][0] = 3.0 / 5.0;    // a = |01>, f = |0+>
    table[0][1] = -1.0 / 10.0;  // a = |00>, f = |0->
    table[1][1] = 1.0 / 5.0;    // a = |01>, f = |0->
    std::vector<Complex> entries;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            s.expected.push_back({detail::entry_name({i, j}), table[i][j], Provenance::PaperTable, 1e-12});
            entries.emplace_back(table[i][j]);
        }
    const auto q = detail::power_sums(entries, 5);
    for (std::size_t n = 0; n < 5; ++n)
        s.expected.push_back({detail::moment_name(TableKind::KD, n + 1), q[n], Provenance::DerivedOracle, 1e-12});
    s.expected.push_back({"det_H1", 0.0, Provenance::PaperFormula, 1e-12});
    s.expected.push_back({"det_H2", -2.0736e-4, Provenance::PaperFormula, 1e-12});
    s.expected.push_back({"negativity", 0.2, Provenance::DerivedOracle, 1e-12});
    s.expected_verdict = Verdict::Detected;
    s.expected_level = 2;
    return s;
}

// ---------------------------------------------------------------------------
// Example 3
// ---------------------------------------------------------------------------

/// |Psi> = cos(theta/2)|0> + sin(theta/2) e^{i alpha}|1>, chain (Z, B(beta), Z)
/// with |b_{1,2}> = (|0> +- e^{i beta}|1>)/sqrt(2).
inline ScenarioResult example3(double theta, double alpha, double beta) {
    detail::require_range(theta, 0.0, std::numbers::pi, "theta");
    detail::require_range(alpha, 0.0, 2.0 * std::numbers::pi, "alpha");
    detail::require_range(beta, 0.0, 2.0 * std::numbers::pi, "beta");
    ScenarioResult s;
    s.id = "example3";
    s.parameters = {{"theta", theta}, {"alpha", alpha}, {"beta", beta}};
    s.mode = DetectionMode::Coherence;

    const double c = std::cos(theta / 2.0), sn = std::sin(theta / 2.0);
    s.state = DensityMatrix::pure(StateVector::from_amplitudes(detail::ket({c, std::polar(sn, alpha)})));
    s.bases.push_back(computational_basis(2, "{|0>,|1>}"));
    const double h = std::numbers::sqrt2 / 2;
    s.bases.push_back(OrthonormalBasis::from_vectors(
        {detail::ket({h, std::polar(h, beta)}), detail::ket({h, -std::polar(h, beta)})}, "{|b1>,|b2>}(beta)"));

    // Stored index (i, k, j) = (first Z, B, last Z) holds
    // <a_j|b_k><b_k|a_i><a_i|rho|a_j>.
    const Complex cross = std::polar(std::sin(theta) / 4.0, -(alpha - beta));  // (i, j) = (0, 1)
    const Complex cross_conj = std::conj(cross);                                 // (i, j) = (1, 0)
    std::vector<std::pair<std::array<std::size_t, 3>, Complex>> closed = {
        {{0, 0, 0}, c * c / 2.0},  {{0, 1, 0}, c * c / 2.0},  {{0, 0, 1}, cross},      {{0, 1, 1}, -cross},
        {{1, 0, 0}, cross_conj},   {{1, 1, 0}, -cross_conj},  {{1, 0, 1}, sn * sn / 2.0}, {{1, 1, 1}, sn * sn / 2.0},
    };
    std::vector<Complex> entries;
    for (const auto& [idx, v] : closed) {
        s.expected.push_back({detail::entry_name({idx[0], idx[1], idx[2]}), v, Provenance::PaperFormula, 1e-12});
        entries.push_back(v);
    }
    s.expected.push_back({"l1_coherence", std::abs(std::sin(theta)), Provenance::PaperFormula, 1e-12});

    const bool interior = theta > 0.0 && theta < std::numbers::pi;
    const auto r = detail::power_sums(entries, 5);
    if (detail::angle_equal(alpha, beta) || detail::angle_equal(alpha, beta + std::numbers::pi / 2)) {
        for (std::size_t n = 0; n < 5; ++n)
            s.expected.push_back({detail::moment_name(TableKind::ExtendedKD, n + 1), r[n], Provenance::DerivedOracle, 1e-12});
        s.expected.push_back({"det_H1", detail::det_h1(r), Provenance::DerivedOracle, 1e-12});
        s.expected.push_back({"det_H2", detail::det_h2(r), Provenance::DerivedOracle, 1e-12});
    }
    if (!interior) {
        s.expected_verdict = Verdict::NotDetected;
    } else if (detail::angle_equal(alpha, beta)) {
        s.expected_verdict = Verdict::Detected;
        s.expected_level = 1;
    } else if (detail::angle_equal(alpha, beta + std::numbers::pi / 2)) {
        s.expected_verdict = Verdict::Detected;
        s.expected_level = 2;
    }
    return s;
}

// ---------------------------------------------------------------------------
// Example 4
// ---------------------------------------------------------------------------

/// Rotating-field qubit with Gamma = xi = 1/2.
inline ScenarioResult example4(double omega, double rabi, double t) {
    ScenarioResult s;
    s.id = "example4";
    s.parameters = {{"omega", omega}, {"Omega", rabi}, {"t", t}};
    s.mode = DetectionMode::Work;
    auto qubit = rotating_qubit_scenario({omega, rabi, t, 0.5, 0.5});
    s.process = std::move(qubit.process);

    const RealMatrix& closed = *qubit.closed_form_mhq;
    std::vector<Complex> entries;
    double abs_sum = 0.0;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            const double v = closed(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            s.expected.push_back({detail::entry_name({i, j}), v, Provenance::PaperFormula, 1e-10});
            entries.emplace_back(v);
            abs_sum += std::abs(v);
        }
    const auto sm = detail::power_sums(entries, 5);
    s.expected.push_back({"negativity", abs_sum - 1.0, Provenance::DerivedOracle, 1e-12});
    s.expected.push_back({"det_H2", detail::det_h2(sm), Provenance::DerivedOracle, 1e-12});
    s.expected.push_back({"mean_work", std::hypot(omega, rabi) * (closed(0, 1) - closed(1, 0)),
                          Provenance::DerivedOracle, 1e-12});
    if (omega == 1.0 && rabi == 2.0 && std::abs(t - std::numbers::pi / 2) < 1e-15) {
        s.expected_verdict = Verdict::Detected;
        s.expected_level = 2;
    }
    return s;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

inline ScenarioEvaluation ScenarioResult::evaluate(int m_max, const DetectionTolerances& tol) const {
    ScenarioEvaluation ev;
    auto record_table = [&ev](const auto& table) {
        for (std::size_t n = 0; n < table.size(); ++n) {
            const auto idx = table.unflatten(n);
            std::string name = "Q[";
            for (std::size_t r = 0; r < idx.size(); ++r) name += (r ? "," : "") + std::to_string(idx[r]);
            ev.computed[name + "]"] = Complex(table.values()[n]);
        }
    };

    switch (mode) {
        case DetectionMode::KD: {
            const auto table = kd_distribution(*state, bases.at(0), bases.at(1));
            record_table(table);
            ev.report = detect_table(table, m_max, tol);
            ev.computed["negativity"] = negativity(mhq(table));
            const Complex q2 = ev.report.moments(2), q3 = ev.report.moments(3);
            ev.computed["q2^2-q3"] = q2 * q2 - q3;
            break;
        }
        case DetectionMode::Coherence: {
            const OrthonormalBasis chain[] = {bases.at(0), bases.at(1), bases.at(0)};
            record_table(extended_kd(*state, chain));
            ev.report = detect_coherence(*state, bases.at(0), bases.at(1), m_max, tol);
            ev.computed["l1_coherence"] = *ev.report.resource_value;
            break;
        }
        case DetectionMode::Work: {
            const auto table = mhq(work_quasiprob(*process));
            record_table(table);
            ev.report = detect_work_nonclassicality(table, m_max, tol);
            ev.computed["negativity"] = *ev.report.resource_value;
            const auto dist = work_distribution(table, process->initial().energies, process->final_spectrum().energies);
            ev.computed["mean_work"] = dist.first_moment();
            break;
        }
    }
    for (std::size_t n = 1; n <= ev.report.moments.size(); ++n)
        ev.computed[detail::moment_name(ev.report.moments.source, n)] = ev.report.moments(n);
    for (const auto& r : ev.report.reports) ev.computed["det_H" + std::to_string(r.level)] = r.determinant;

    for (const auto& e : expected) {
        const auto it = ev.computed.find(e.quantity);
        const Complex actual = it == ev.computed.end() ? Complex(std::nan(""), 0.0) : it->second;
        ev.checks.push_back({e, actual, std::abs(actual - e.value) <= e.tolerance});
    }
    if (expected_verdict)
        ev.verdict_pass = ev.report.verdict == *expected_verdict &&
                          (*expected_verdict != Verdict::Detected || ev.report.level == expected_level);
    return ev;
}

}  // namespace kdq
