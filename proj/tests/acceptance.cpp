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

// Acceptance checks: one PASS/FAIL line per criterion, details indented
// below it. Exit status is nonzero if any criterion fails.

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "kdq/kdq.hpp"

namespace {

using namespace kdq;
constexpr double kPi = std::numbers::pi;

struct Criterion {
    Criterion(int i, std::string t) : id(i), title(std::move(t)) {}

    int id;
    std::string title;
    bool pass = true;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (notes.size() < 12) notes.push_back("violated: " + what);
        }
    }
    void note(const std::string& s) { notes.push_back(s); }
};

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

Criterion table_one() {
    Criterion c{1, "Example 1 KD table matches the (1+p)/16, (1-3p)/16 layout within 1e-12"};
    double worst = 0.0;
    for (double p : {0.0, 0.2, 1.0 / 3.0, 0.6, 1.0}) {
        const auto s = example1(p);
        const auto kd = kd_distribution(*s.state, s.bases[0], s.bases[1]);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) {
                const double want = (i + j == 3) ? (1.0 - 3.0 * p) / 16.0 : (1.0 + p) / 16.0;
                const double err = std::abs(kd(i, j) - want);
                worst = std::max(worst, err);
                c.require(err < 1e-12, "p=" + num(p) + " entry (" + std::to_string(i) + "," + std::to_string(j) + ")");
            }
    }
    c.note("max |error| = " + num(worst));
    return c;
}

Criterion moment_gap() {
    Criterion c{2, "q2^2 - q3 closed form within 1e-12; detection flips to level 1 across p = 1/3 (step 1e-3)"};
    double worst = 0.0;
    for (double p : {0.0, 0.2, 1.0 / 3.0, 0.6, 1.0}) {
        const auto s = example1(p);
        const auto q = moments(kd_distribution(*s.state, s.bases[0], s.bases[1]), 3);
        const Complex gap = q(2) * q(2) - q(3);
        const double want = 9 * std::pow(p, 4) / 256 + 3 * std::pow(p, 3) / 128 - 3 * p * p / 256;
        worst = std::max(worst, std::abs(gap - want));
        c.require(std::abs(gap - want) < 1e-12, "formula at p=" + num(p));
    }
    int first_detected = -1;
    for (int k = 0; k <= 1000; ++k) {
        const double p = k / 1000.0;
        const auto s = example1(p);
        const auto r = detect_kd_nonpositivity(*s.state, s.bases[0], s.bases[1]);
        const bool above = p > 1.0 / 3.0;
        if (above) {
            c.require(r.verdict == Verdict::Detected && r.level == 1, "Detected(1) at p=" + num(p));
            if (first_detected < 0 && r.verdict == Verdict::Detected) first_detected = k;
        } else {
            c.require(r.verdict == Verdict::NotDetected, "NotDetected at p=" + num(p));
        }
    }
    c.note("max formula |error| = " + num(worst) + "; first detected grid point p = " + num(first_detected / 1000.0));
    return c;
}

Criterion example_two() {
    Criterion c{3, "Example 2 moments (1, 0.5, 0.25, 0.1394, 0.0805), det H1 = 0, det H2 = -2.0736e-4 within 1e-12"};
    const auto s = example2();
    const auto r = detect_kd_nonpositivity(*s.state, s.bases[0], s.bases[1], 2);
    const double want[] = {1.0, 0.5, 0.25, 0.1394, 0.0805};
    for (std::size_t n = 1; n <= 5; ++n)
        c.require(std::abs(r.moments(n) - want[n - 1]) < 1e-12, "q_" + std::to_string(n));
    const double d1 = r.at_level(1).determinant, d2 = r.at_level(2).determinant;
    c.require(std::abs(d1) < 1e-12, "det H1 = " + num(d1));
    c.require(std::abs(d2 + 2.0736e-4) < 1e-12, "det H2 = " + num(d2));
    c.require(r.verdict == Verdict::Detected && r.level == 2, "verdict Detected(2)");
    c.note("det H1 = " + num(d1) + ", det H2 = " + num(d2) + ", verdict level " + std::to_string(r.level));
    return c;
}

Criterion example_three() {
    Criterion c{4, "Example 3 grid theta = k pi/180: l1 = |sin theta|, level-1 / level-2 detection, spot values"};
    double worst_l1 = 0.0;
    for (int k = 1; k <= 179; ++k) {
        const double th = k * kPi / 180.0;
        for (const double alpha : {0.0, kPi / 2}) {
            const auto s = example3(th, alpha, 0.0);
            const auto r = detect_coherence(*s.state, s.bases[0], s.bases[1], 2);
            const double l1 = *r.resource_value;
            worst_l1 = std::max(worst_l1, std::abs(l1 - std::abs(std::sin(th))));
            c.require(std::abs(l1 - std::abs(std::sin(th))) < 1e-12, "l1 at k=" + std::to_string(k));
            const double d1 = r.at_level(1).determinant, d2 = r.at_level(2).determinant;
            if (alpha == 0.0) {
                c.require(-d1 > 0.0, "-det H1 > 0 (alpha=beta) at k=" + std::to_string(k));
            } else {
                c.require(d1 >= -1e-12, "det H1 >= -1e-12 (alpha=beta+pi/2) at k=" + std::to_string(k));
                c.require(-d2 > 0.0, "-det H2 > 0 (alpha=beta+pi/2) at k=" + std::to_string(k));
            }
        }
    }
    const auto spot = example3(kPi / 2, kPi / 2, 0.0);
    const auto r = detect_coherence(*spot.state, spot.bases[0], spot.bases[1], 2);
    c.require(std::abs(r.at_level(1).determinant - 1.0 / 16.0) < 1e-12, "det H1 = 1/16 at theta = pi/2");
    c.require(std::abs(r.at_level(2).determinant + 1.0 / 1024.0) < 1e-12, "det H2 = -1/1024 at theta = pi/2");
    c.note("max |l1 - |sin theta|| = " + num(worst_l1) + "; spot det H1 = " + num(r.at_level(1).determinant) +
           ", det H2 = " + num(r.at_level(2).determinant));
    return c;
}

// {N > 1e-10} against {det H2 < -tol_det} on Omega in (0, 5], 200 points.
std::size_t fig2_mismatches(double omega, double t, std::vector<std::string>* examples) {
    std::size_t bad = 0;
    for (int k = 1; k <= 200; ++k) {
        const double rabi = 5.0 * k / 200.0;
        const auto q = rotating_qubit_scenario({omega, rabi, t, 0.5, 0.5});
        const auto r = detect_work_nonclassicality(mhq(work_quasiprob(q.process)), 2);
        const bool neg = *r.resource_value > 1e-10;
        const bool det = r.at_level(2).determinant < -r.at_level(2).det_tolerance;
        if (neg != det) {
            ++bad;
            if (examples && examples->size() < 3)
                examples->push_back("Omega=" + num(rabi) + ": N=" + num(*r.resource_value) +
                                    ", det H2=" + num(r.at_level(2).determinant));
        }
    }
    return bad;
}

Criterion example_four() {
    Criterion c{5, "Example 4 closed form vs trace formula, spot values, mean-work identity, Fig. 2 equivalence"};
    std::mt19937_64 rng(20260101);
    std::uniform_real_distribution<double> u(0.0, 5.0);
    double worst_cf = 0.0, worst_mean = 0.0;
    for (int s = 0; s < 100; ++s) {
        double w = 0.0, r = 0.0, t = 0.0;
        while (w == 0.0) w = 5.0 - u(rng);  // (0, 5]
        while (r == 0.0) r = 5.0 - u(rng);
        while (t == 0.0) t = 5.0 - u(rng);
        const auto q = rotating_qubit_scenario({w, r, t, 0.5, 0.5});
        const auto table = mhq(work_quasiprob(q.process));
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j)
                worst_cf = std::max(worst_cf, std::abs(table(i, j) - (*q.closed_form_mhq)(static_cast<Eigen::Index>(i),
                                                                                           static_cast<Eigen::Index>(j))));
        const auto dist = work_distribution(table, q.process.initial().energies, q.process.final_spectrum().energies);
        worst_mean = std::max(worst_mean, std::abs(dist.first_moment() - mean_work(q.process)));
    }
    c.require(worst_cf < 1e-10, "closed form vs trace formula, max error " + num(worst_cf));
    c.require(worst_mean < 1e-12, "mean-work identity, max error " + num(worst_mean));

    const auto q = rotating_qubit_scenario({1.0, 2.0, kPi / 2, 0.5, 0.5});
    const auto r = detect_work_nonclassicality(mhq(work_quasiprob(q.process)), 2);
    c.require(std::abs(*r.resource_value - 0.2) < 1e-12, "N = 0.2 at (1, 2, pi/2)");
    c.require(std::abs(r.at_level(2).determinant + 2.0736e-4) < 1e-12, "det H2 = -2.0736e-4 at (1, 2, pi/2)");
    c.note("closed form max |error| = " + num(worst_cf) + "; mean-work max |error| = " + num(worst_mean) +
           "; N = " + num(*r.resource_value) + ", det H2 = " + num(r.at_level(2).determinant));

    std::vector<std::string> examples;
    const auto bad = fig2_mismatches(1.0, kPi / 2, &examples);
    c.note("Fig. 2 grid (omega = 1, t = pi/2): " + std::to_string(bad) + " of 200 points where N > 1e-10 and det H2 < -tol_det disagree");
    for (const auto& e : examples) c.note("  e.g. " + e);
    c.require(bad == 0, "Fig. 2 equivalence at (omega = 1, t = pi/2)");
    c.note("for comparison, (omega = 1.5, t = 1): " + std::to_string(fig2_mismatches(1.5, 1.0, nullptr)) +
           " mismatches (informational only)");
    return c;
}

Criterion property_suite() {
    Criterion c{6, "Property suite: 1000 random (rho, A, F) per d in {2, 3, 4}, zero violations, zero false positives"};
    const auto s = proptest::run(1, {2, 3, 4}, 1000);
    for (const auto& v : s.violations)
        c.require(false, v.check + " d=" + std::to_string(v.dim) + " seed=" + std::to_string(v.seed) + " error=" + num(v.error));
    std::ostringstream os;
    os << "trials " << s.trials << ", flagged " << s.flagged << ";";
    for (const auto& [name, n] : s.evaluated) os << ' ' << name << " (" << n << ", worst " << num(s.worst.count(name) ? s.worst.at(name) : 0.0) << ")";
    c.note(os.str());
    c.require(s.evaluated.at("soundness") == 3000, "soundness evaluated on every trial");
    return c;
}

Criterion classical_degeneration() {
    Criterion c{7, "A = F: NotDetected at every level m <= 3 for 100 random states per d in {2, 3, 4}"};
    std::size_t runs = 0;
    for (Eigen::Index d = 2; d <= 4; ++d) {
        std::mt19937_64 rng(777 + static_cast<std::uint64_t>(d));
        for (int k = 0; k < 100; ++k) {
            const auto rho = random_density(d, rng);
            const auto a = random_basis(d, rng);
            const auto r = detect_kd_nonpositivity(rho, a, a, 3);
            c.require(r.verdict == Verdict::NotDetected, "d=" + std::to_string(d) + " sample " + std::to_string(k));
            for (const auto& h : r.reports)
                c.require(h.determinant >= -h.det_tolerance, "det H" + std::to_string(h.level) + " d=" + std::to_string(d));
            ++runs;
        }
    }
    c.note(std::to_string(runs) + " states checked");
    return c;
}

}  // namespace

int main() {
    const Criterion results[] = {table_one(),    moment_gap(),    example_two(),           example_three(),
                                 example_four(), property_suite(), classical_degeneration()};
    int failed = 0;
    for (const auto& c : results) {
        std::printf("[%s] %d. %s\n", c.pass ? "PASS" : "FAIL", c.id, c.title.c_str());
        for (const auto& n : c.notes) std::printf("       %s\n", n.c_str());
        failed += c.pass ? 0 : 1;
    }
    std::printf("%d of 7 criteria passed\n", 7 - failed);
    return failed == 0 ? 0 : 1;
}
