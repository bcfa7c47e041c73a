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

#include <numbers>

#include <gtest/gtest.h>

#include "kdq/scenarios.hpp"

namespace kdq {
namespace {

constexpr double kPi = std::numbers::pi;

void expect_all_pass(const ScenarioResult& s) {
    const auto ev = s.evaluate();
    for (const auto& c : ev.checks)
        EXPECT_TRUE(c.pass) << s.id << " " << c.expected.quantity << ": expected " << c.expected.value << ", got "
                            << c.actual;
    EXPECT_TRUE(ev.verdict_pass) << s.id << ": " << ev.report.summary();
}

TEST(Example1, TableAndVerdictAcrossP) {
    for (double p : {0.0, 0.2, 1.0 / 3.0, 0.6, 1.0}) expect_all_pass(example1(p));
}

TEST(Example1, BoundaryValues) {
    EXPECT_NEAR(example1(1.0).find("q2^2-q3")->value.real(), 3.0 / 64.0, 1e-15);
    const auto ev = example1(0.0).evaluate();
    EXPECT_NEAR(ev.computed.at("q2^2-q3").real(), 0.0, 1e-15);
    EXPECT_NEAR(ev.computed.at("Q[2,3]").real(), 1.0 / 16.0, 1e-15);
    EXPECT_EQ(example1(1.0 / 3.0).evaluate().report.verdict, Verdict::NotDetected);
    EXPECT_THROW(example1(1.5), Error);
}

TEST(Example1, EveryExpectationHasProvenance) {
    for (const auto& e : example1(0.6).expected) EXPECT_FALSE(to_string(e.provenance).empty());
}

TEST(Example2, TableMomentsDeterminants) {
    const auto s = example2();
    expect_all_pass(s);
    const auto ev = s.evaluate();
    EXPECT_NEAR(ev.computed.at("Q[0,1]").real(), -0.1, 1e-15);
    EXPECT_EQ(ev.report.level, 2);
}

TEST(Example3, SpotValues) {
    const auto same = example3(kPi / 2, 0.0, 0.0).evaluate();
    EXPECT_NEAR(same.computed.at("det_H1").real(), -3.0 / 16.0, 1e-12);
    EXPECT_EQ(same.report.level, 1);
    const auto quarter = example3(kPi / 2, kPi / 2, 0.0).evaluate();
    EXPECT_NEAR(quarter.computed.at("det_H1").real(), 1.0 / 16.0, 1e-12);
    EXPECT_NEAR(quarter.computed.at("det_H2").real(), -1.0 / 1024.0, 1e-12);
    EXPECT_EQ(quarter.report.level, 2);
}

TEST(Example3, GridAndEndpoints) {
    for (int k = 0; k <= 180; k += 15) {
        const double th = k * kPi / 180.0;
        expect_all_pass(example3(th, 0.0, 0.0));
        expect_all_pass(example3(th, kPi / 2, 0.0));
        expect_all_pass(example3(th, 1.0, 0.3));
    }
    const auto zero = example3(0.0, 1.0, 2.0).evaluate();
    EXPECT_EQ(zero.report.verdict, Verdict::NotDetected);
    EXPECT_NEAR(zero.computed.at("l1_coherence").real(), 0.0, 1e-15);
    EXPECT_THROW(example3(4.0, 0.0, 0.0), Error);
}

TEST(Example4, DefaultPointAndEdgeCases) {
    const auto s = example4(1.0, 2.0, kPi / 2);
    expect_all_pass(s);
    const auto ev = s.evaluate();
    EXPECT_NEAR(ev.computed.at("negativity").real(), 0.2, 1e-12);
    EXPECT_NEAR(ev.computed.at("det_H2").real(), -2.0736e-4, 1e-12);
    expect_all_pass(example4(1.0, 1.0, 0.7));
    expect_all_pass(example4(0.5, 3.0, kPi));
    EXPECT_GT(example4(0.5, 3.0, kPi).evaluate().computed.at("negativity").real(), 1e-3);
    EXPECT_THROW(example4(0.0, 0.0, 1.0), Error);
}

TEST(Scenarios, UseProductionPipeline) {
    // evaluate() reports the same table the public constructors build.
    const auto s = example2();
    const auto kd = kd_distribution(*s.state, s.bases[0], s.bases[1]);
    const auto ev = s.evaluate();
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            EXPECT_EQ(ev.computed.at("Q[" + std::to_string(i) + "," + std::to_string(j) + "]"), kd(i, j));
}

}  // namespace
}  // namespace kdq
