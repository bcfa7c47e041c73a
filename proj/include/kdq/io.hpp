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

// JSON and CSV encodings.
//
// Complex numbers are [re, im] pairs. Matrices are row-major arrays of rows.
// A basis is either an array of vectors or {"label": ..., "vectors": [...]}.
// Schema errors report the JSON pointer of the offending node.

#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "kdq/kd.hpp"
#include "kdq/linalg.hpp"
#include "kdq/moments.hpp"
#include "kdq/scenarios.hpp"
#include "kdq/work.hpp"

namespace kdq::io {

using json = nlohmann::json;

inline constexpr const char* kReportSchema = "kdq.report/1";

/// 17 significant digits, '.' decimal point regardless of locale.
inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// ---------------------------------------------------------------------------
// Decoding
// ---------------------------------------------------------------------------

namespace detail {

[[noreturn]] inline void schema_error(const json::json_pointer& at, const std::string& what) {
    throw Error(ErrorCode::SchemaError, (at.empty() ? std::string("/") : at.to_string()) + ": " + what);
}

inline const json& child(const json& j, const json::json_pointer& at, const std::string& key) {
    if (!j.is_object()) schema_error(at, "expected an object");
    const auto it = j.find(key);
    if (it == j.end()) schema_error(at / key, "missing required field");
    return *it;
}

}  // namespace detail

inline Complex complex_from_json(const json& j, const json::json_pointer& at) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        detail::schema_error(at, "expected a complex number [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline Vector vector_from_json(const json& j, const json::json_pointer& at) {
    if (!j.is_array() || j.empty()) detail::schema_error(at, "expected a non-empty array of [re, im]");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t k = 0; k < j.size(); ++k) v(static_cast<Eigen::Index>(k)) = complex_from_json(j[k], at / k);
    return v;
}

inline Matrix matrix_from_json(const json& j, const json::json_pointer& at) {
    if (!j.is_array() || j.empty()) detail::schema_error(at, "expected a non-empty array of rows");
    const std::size_t rows = j.size();
    Matrix m;
    for (std::size_t r = 0; r < rows; ++r) {
        const auto row = vector_from_json(j[r], at / r);
        if (r == 0) m.resize(static_cast<Eigen::Index>(rows), row.size());
        if (row.size() != m.cols()) detail::schema_error(at / r, "row length differs from row 0");
        m.row(static_cast<Eigen::Index>(r)) = row.transpose();
    }
    return m;
}

inline OrthonormalBasis basis_from_json(const json& j, const json::json_pointer& at, std::string fallback_label) {
    const json* vectors = &j;
    json::json_pointer vat = at;
    if (j.is_object()) {
        vectors = &detail::child(j, at, "vectors");
        vat = at / "vectors";
        if (j.contains("label")) {
            if (!j["label"].is_string()) detail::schema_error(at / "label", "expected a string");
            fallback_label = j["label"].get<std::string>();
        }
    }
    if (!vectors->is_array() || vectors->empty()) detail::schema_error(vat, "expected an array of basis vectors");
    std::vector<Vector> vs;
    for (std::size_t k = 0; k < vectors->size(); ++k) vs.push_back(vector_from_json((*vectors)[k], vat / k));
    return OrthonormalBasis::from_vectors(vs, std::move(fallback_label));
}

/// "state" (density matrix) or "state_vector" (pure state amplitudes).
inline DensityMatrix state_from_json(const json& doc) {
    const json::json_pointer root;
    if (!doc.is_object()) detail::schema_error(root, "expected an object");
    if (doc.contains("state_vector"))
        return DensityMatrix::pure(StateVector::normalized(vector_from_json(doc["state_vector"], root / "state_vector")));
    const Matrix m = matrix_from_json(detail::child(doc, root, "state"), root / "state");
    return validate_density(m);
}

inline json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline json to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline json to_json(const OrthonormalBasis& b) {
    json vecs = json::array();
    for (Eigen::Index k = 0; k < b.dim(); ++k) {
        json v = json::array();
        for (Eigen::Index r = 0; r < b.dim(); ++r) v.push_back(to_json(b.matrix()(r, k)));
        vecs.push_back(std::move(v));
    }
    return {{"label", b.label()}, {"vectors", std::move(vecs)}};
}

// ---------------------------------------------------------------------------
// Encoding
// ---------------------------------------------------------------------------

template <QuasiprobabilityTableType Table>
json to_json(const Table& t) {
    json entries = json::array();
    for (std::size_t n = 0; n < t.size(); ++n) {
        const Complex z(t.values()[n]);
        if constexpr (std::is_same_v<typename Table::scalar_type, double>)
            entries.push_back({{"index", t.unflatten(n)}, {"value", z.real()}});
        else
            entries.push_back({{"index", t.unflatten(n)}, {"value", to_json(z)}});
    }
    return {{"kind", std::string(to_string(Table::kind))},
            {"shape", t.shape()},
            {"labels", t.labels()},
            {"entries", std::move(entries)}};
}

inline json to_json(const OracleVerdict& v) {
    json w = json::array();
    for (const auto& x : v.witnesses) w.push_back({{"index", x.index}, {"value", to_json(x.value)}});
    return {{"verdict", std::string(to_string(v.kind))}, {"witnesses", std::move(w)}};
}

inline json to_json(const DetectionReport& r) {
    json levels = json::array();
    for (const auto& h : r.reports)
        levels.push_back({{"level", h.level},
                          {"determinant", h.determinant},
                          {"det_tolerance", h.det_tolerance},
                          {"imaginary_residue", h.imaginary_residue}});
    json moments = json::array();
    for (const auto& q : r.moments.values) moments.push_back(to_json(q));
    json out = {{"schema", kReportSchema},
                {"verdict", std::string(to_string(r.verdict))},
                {"level", r.level},
                {"moment_source", std::string(to_string(r.moments.source))},
                {"moments", std::move(moments)},
                {"hankel", std::move(levels)},
                {"tolerances", {{"det_rel", r.tolerances.det_rel}, {"im", r.tolerances.im}, {"oracle", r.tolerances.oracle}}},
                {"consistent_with_oracle", r.consistent()},
                {"summary", r.summary()}};
    if (r.oracle) out["oracle"] = to_json(*r.oracle);
    if (r.resource_value) out[r.resource_name] = *r.resource_value;
    return out;
}

inline json to_json(const WorkDistribution& w) {
    json atoms = json::array();
    for (const auto& a : w.atoms) atoms.push_back({{"work", a.work}, {"weight", a.weight}});
    return {{"convention", std::string(to_string(w.convention))},
            {"atoms", std::move(atoms)},
            {"first_moment", w.first_moment()}};
}

inline json to_json(const ScenarioResult& s, const ScenarioEvaluation& ev) {
    json checks = json::array();
    for (const auto& c : ev.checks)
        checks.push_back({{"quantity", c.expected.quantity},
                          {"expected", to_json(c.expected.value)},
                          {"actual", to_json(c.actual)},
                          {"tolerance", c.expected.tolerance},
                          {"provenance", std::string(to_string(c.expected.provenance))},
                          {"pass", c.pass}});
    json out = {{"schema", kReportSchema},
                {"scenario", s.id},
                {"mode", std::string(to_string(s.mode))},
                {"parameters", s.parameters},
                {"checks", std::move(checks)},
                {"verdict_matches", ev.verdict_pass},
                {"all_pass", ev.all_pass()},
                {"report", to_json(ev.report)}};
    if (s.expected_verdict) {
        out["expected_verdict"] = std::string(to_string(*s.expected_verdict));
        out["expected_level"] = s.expected_level;
    }
    return out;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

/// Columns i0..i{k-1}, re, im; one row per entry in storage order.
template <QuasiprobabilityTableType Table>
void write_csv(std::ostream& os, const Table& t) {
    for (std::size_t r = 0; r < t.rank(); ++r) os << 'i' << r << ',';
    os << "re,im\n";
    for (std::size_t n = 0; n < t.size(); ++n) {
        for (auto i : t.unflatten(n)) os << i << ',';
        const Complex z(t.values()[n]);
        os << format_double(z.real()) << ',' << format_double(z.imag()) << '\n';
    }
}

inline void write_csv(std::ostream& os, const WorkDistribution& w) {
    os << "w,weight\n";
    for (const auto& a : w.atoms) os << format_double(a.work) << ',' << format_double(a.weight) << '\n';
}

}  // namespace kdq::io
