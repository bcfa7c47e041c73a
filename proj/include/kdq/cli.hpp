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

// Command implementations behind the kdq executable.
//
// Each command writes its result to `out`, diagnostics to `err`, and returns
// an exit code in {0, 1, 2}:
//
//   detect    0 NotDetected, 1 Detected or NonRealMoments, 2 input error
//   example   0 every expectation met, 1 some mismatch, 2 error
//   sweep     0 written, 2 error
//   proptest  0 no violation, 1 violation (replay seed on err), 2 error

#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "kdq/io.hpp"
#include "kdq/proptest.hpp"
#include "kdq/scenarios.hpp"

namespace kdq::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFlagged = 1;
inline constexpr int kExitError = 2;

using io::json;

// ---------------------------------------------------------------------------
// detect
// ---------------------------------------------------------------------------

struct DetectOptions {
    std::string input;  // path, or "-" for stdin
    DetectionMode mode = DetectionMode::KD;
    int m_max = kDefaultLevel;
    DetectionTolerances tol;
    double input_tol = kDefaultTol;   // Hermiticity, trace, orthonormality, MUB, unitarity
    std::string table_csv;            // optional CSV dump of the table
};

namespace detail {

inline json read_json(const std::string& path) {
    try {
        if (path == "-") return json::parse(std::cin);
        std::ifstream in(path);
        if (!in) throw Error(ErrorCode::SchemaError, "cannot open '" + path + "'");
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::SchemaError, std::string("malformed JSON: ") + e.what());
    }
}

inline HermitianObservable observable_from_json(const json& doc, const std::string& key) {
    const json::json_pointer root;
    return HermitianObservable::from_matrix(io::matrix_from_json(io::detail::child(doc, root, key), root / key));
}

template <typename Table>
void dump_csv(const std::string& path, const Table& table) {
    if (path.empty()) return;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(ErrorCode::SchemaError, "cannot write '" + path + "'");
    io::write_csv(os, table);
}

inline json tolerances_json(const DetectOptions& o) {
    return {{"m_max", o.m_max},
            {"det_rel", o.tol.det_rel},
            {"im", o.tol.im},
            {"oracle", o.tol.oracle},
            {"input", o.input_tol}};
}

}  // namespace detail

/// Input document by mode:
///   kd         state | state_vector, basis_a, basis_f
///   coherence  state | state_vector, basis, mub
///   work       state | state_vector, h_initial, h_final, unitary
inline int cmd_detect(const DetectOptions& o, std::ostream& out, std::ostream& err) {
    try {
        const json doc = detail::read_json(o.input);
        const json::json_pointer root;
        const DensityMatrix rho = io::state_from_json(doc);
        DetectionReport report;
        json table_json;
        switch (o.mode) {
            case DetectionMode::KD: {
                const auto a = io::basis_from_json(io::detail::child(doc, root, "basis_a"), root / "basis_a", "A");
                const auto f = io::basis_from_json(io::detail::child(doc, root, "basis_f"), root / "basis_f", "F");
                const auto table = kd_distribution(rho, a, f);
                report = detect_table(table, o.m_max, o.tol);
                table_json = io::to_json(table);
                detail::dump_csv(o.table_csv, table);
                break;
            }
            case DetectionMode::Coherence: {
                const auto a = io::basis_from_json(io::detail::child(doc, root, "basis"), root / "basis", "A");
                const auto b = io::basis_from_json(io::detail::child(doc, root, "mub"), root / "mub", "B");
                report = detect_coherence(rho, a, b, o.m_max, o.tol, o.input_tol);
                const OrthonormalBasis chain[] = {a, b, a};
                const auto table = extended_kd(rho, chain);
                table_json = io::to_json(table);
                detail::dump_csv(o.table_csv, table);
                break;
            }
            case DetectionMode::Work: {
                const Matrix u = io::matrix_from_json(io::detail::child(doc, root, "unitary"), root / "unitary");
                const auto proc = WorkProcess::from_hamiltonians(rho, detail::observable_from_json(doc, "h_initial"),
                                                                 detail::observable_from_json(doc, "h_final"), u,
                                                                 o.input_tol);
                const auto table = mhq(work_quasiprob(proc));
                report = detect_work_nonclassicality(table, o.m_max, o.tol);
                table_json = io::to_json(table);
                detail::dump_csv(o.table_csv, table);
                break;
            }
        }
        json j = io::to_json(report);
        j["mode"] = std::string(to_string(o.mode));
        j["effective_tolerances"] = detail::tolerances_json(o);
        j["table"] = std::move(table_json);
        out << j.dump(2) << '\n';
        err << report.summary() << '\n';
        return report.flagged() ? kExitFlagged : kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
}

// ---------------------------------------------------------------------------
// example
// ---------------------------------------------------------------------------

struct ExampleOptions {
    int number = 0;
    double p = 1.0;
    double theta = std::numbers::pi / 2;
    double alpha = 0.0;
    double beta = 0.0;
    double omega = 1.0;
    double rabi = 2.0;
    double t = std::numbers::pi / 2;
    int m_max = kDefaultLevel;
    DetectionTolerances tol;
    std::string table_csv;
    std::string work_csv;  // example 4 only
};

inline ScenarioResult build_example(const ExampleOptions& o) {
    switch (o.number) {
        case 1: return example1(o.p);
        case 2: return example2();
        case 3: return example3(o.theta, o.alpha, o.beta);
        case 4: return example4(o.omega, o.rabi, o.t);
        default:
            throw Error(ErrorCode::ParameterOutOfRange, "example must be 1, 2, 3 or 4, got " + std::to_string(o.number));
    }
}

inline int cmd_example(const ExampleOptions& o, std::ostream& out, std::ostream& err) {
    try {
        const auto s = build_example(o);
        const auto ev = s.evaluate(o.m_max, o.tol);
        if (!o.table_csv.empty()) {
            switch (s.mode) {
                case DetectionMode::KD: detail::dump_csv(o.table_csv, kd_distribution(*s.state, s.bases[0], s.bases[1])); break;
                case DetectionMode::Coherence: {
                    const OrthonormalBasis chain[] = {s.bases[0], s.bases[1], s.bases[0]};
                    detail::dump_csv(o.table_csv, extended_kd(*s.state, chain));
                    break;
                }
                case DetectionMode::Work: detail::dump_csv(o.table_csv, mhq(work_quasiprob(*s.process))); break;
            }
        }
        if (!o.work_csv.empty()) {
            if (!s.process) throw Error(ErrorCode::ParameterOutOfRange, "--work-csv applies to example 4 only");
            std::ofstream os(o.work_csv, std::ios::binary);
            if (!os) throw Error(ErrorCode::SchemaError, "cannot write '" + o.work_csv + "'");
            io::write_csv(os, work_distribution(mhq(work_quasiprob(*s.process)), s.process->initial().energies,
                                                s.process->final_spectrum().energies));
        }
        out << io::to_json(s, ev).dump(2) << '\n';
        err << s.id << ": " << ev.report.summary() << '\n';
        for (const auto& c : ev.checks)
            if (!c.pass) err << "mismatch: " << c.expected.quantity << '\n';
        if (!ev.verdict_pass) err << "mismatch: verdict\n";
        return ev.all_pass() ? kExitOk : kExitFlagged;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

enum class Figure { Fig1, Fig2 };

struct SweepSpec {
    Figure figure = Figure::Fig1;
    double min = 0.0;
    double max = std::numbers::pi;
    int steps = 181;
    // fig1
    double alpha = 0.0;
    double beta = 0.0;
    // fig2 (mandatory on the command line)
    double omega = 1.0;
    double t = std::numbers::pi / 2;
    int m_max = kDefaultLevel;
    DetectionTolerances tol;
    std::string output;  // empty: out stream
    unsigned threads = 0;  // 0: hardware concurrency
};

inline std::vector<double> linspace(double lo, double hi, int steps) {
    if (steps < 2) throw Error(ErrorCode::ParameterOutOfRange, "steps must be >= 2");
    if (!(lo < hi)) throw Error(ErrorCode::ParameterOutOfRange, "grid needs min < max");
    std::vector<double> g(static_cast<std::size_t>(steps));
    for (int k = 0; k < steps; ++k) g[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (steps - 1);
    g.back() = hi;
    return g;
}

/// Detection level encoded for CSV: witnessing level, 0 if none, -1 for NonRealMoments.
inline int level_code(const DetectionReport& r) {
    switch (r.verdict) {
        case Verdict::Detected: return r.level;
        case Verdict::NotDetected: return 0;
        case Verdict::NonRealMoments: return -1;
    }
    return 0;
}

inline std::string fig1_row(double theta, const SweepSpec& s) {
    const auto sc = example3(theta, s.alpha, s.beta);
    const auto r = detect_coherence(*sc.state, sc.bases[0], sc.bases[1], std::max(2, s.m_max), s.tol);
    return io::format_double(theta) + ',' + io::format_double(*r.resource_value) + ',' +
           io::format_double(0.0 - r.at_level(1).determinant) + ',' + io::format_double(0.0 - r.at_level(2).determinant) + ',' +
           std::to_string(level_code(r)) + '\n';
}

inline std::string fig2_row(double rabi, const SweepSpec& s) {
    const auto q = rotating_qubit_scenario({s.omega, rabi, s.t, 0.5, 0.5});
    const auto r = detect_work_nonclassicality(mhq(work_quasiprob(q.process)), std::max(2, s.m_max), s.tol);
    return io::format_double(rabi) + ',' + io::format_double(*r.resource_value) + ',' +
           io::format_double(r.at_level(2).determinant) + ',' + (r.flagged() ? "1" : "0") + '\n';
}

/// Rows are computed in parallel and written in grid order.
inline void run_sweep(const SweepSpec& s, std::ostream& os) {
    const auto grid = linspace(s.min, s.max, s.steps);
    const auto row = s.figure == Figure::Fig1 ? fig1_row : fig2_row;
    std::vector<std::string> rows(grid.size());
    std::vector<std::exception_ptr> errors(grid.size());
    const unsigned hw = s.threads ? s.threads : std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers = std::min<unsigned>(hw, static_cast<unsigned>(grid.size()));
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t k = w; k < grid.size(); k += workers) {
                try {
                    rows[k] = row(grid[k], s);
                } catch (...) {
                    errors[k] = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    os << (s.figure == Figure::Fig1 ? "theta,l1_coherence,neg_det_H1,neg_det_H2,min_detection_level\n"
                                    : "Omega,negativity,det_H2,detected\n");
    for (const auto& r : rows) os << r;
}

inline int cmd_sweep(const SweepSpec& s, std::ostream& out, std::ostream& err) {
    try {
        if (s.output.empty()) {
            run_sweep(s, out);
        } else {
            std::ostringstream buf;
            run_sweep(s, buf);
            std::ofstream os(s.output, std::ios::binary);
            if (!os) throw Error(ErrorCode::SchemaError, "cannot write '" + s.output + "'");
            os << buf.str();
        }
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
}

// ---------------------------------------------------------------------------
// proptest
// ---------------------------------------------------------------------------

struct ProptestOptions {
    std::uint64_t seed = 1;
    std::vector<Eigen::Index> dims = {2, 3, 4};
    std::size_t trials = 1000;
    std::optional<double> force_tolerance;  // replaces every threshold
    int m_max = kDefaultLevel;
};

inline int cmd_proptest(const ProptestOptions& o, std::ostream& out, std::ostream& err) {
    try {
        if (o.trials < 1) throw Error(ErrorCode::ParameterOutOfRange, "trials must be >= 1");
        for (auto d : o.dims)
            if (d < 2) throw Error(ErrorCode::ParameterOutOfRange, "dimensions must be >= 2");
        const auto th = o.force_tolerance ? proptest::Thresholds::uniform(*o.force_tolerance) : proptest::Thresholds{};
        const auto s = proptest::run(o.seed, o.dims, o.trials, th, o.m_max);

        json checks = json::object();
        for (const auto& [name, n] : s.evaluated)
            checks[name] = {{"evaluated", n}, {"worst", io::format_double(s.worst.count(name) ? s.worst.at(name) : 0.0)}};
        json violations = json::array();
        for (std::size_t k = 0; k < std::min<std::size_t>(s.violations.size(), 20); ++k) {
            const auto& v = s.violations[k];
            violations.push_back({{"check", v.check},
                                  {"dim", v.dim},
                                  {"seed", v.seed},
                                  {"error", io::format_double(v.error)},
                                  {"threshold", io::format_double(v.threshold)}});
        }
        json report = {{"schema", "kdq.proptest/1"},
                       {"base_seed", o.seed},
                       {"dims", o.dims},
                       {"trials_per_dim", o.trials},
                       {"trials", s.trials},
                       {"flagged", s.flagged},
                       {"checks", std::move(checks)},
                       {"violation_count", s.violations.size()},
                       {"violations", std::move(violations)},
                       {"ok", s.ok()}};
        out << report.dump(2) << '\n';
        if (!s.ok()) {
            const auto& v = s.violations.front();
            err << "violation: " << v.check << " d=" << v.dim << " seed=" << v.seed
                << " error=" << io::format_double(v.error) << " threshold=" << io::format_double(v.threshold) << '\n'
                << "replay: kdq proptest --seed " << v.seed << " --dims " << v.dim << " --trials 1";
            if (o.force_tolerance) err << " --force-tolerance " << io::format_double(*o.force_tolerance);
            err << '\n';
            return kExitFlagged;
        }
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
}

}  // namespace kdq::cli
