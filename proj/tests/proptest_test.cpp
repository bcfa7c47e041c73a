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

#include <gtest/gtest.h>

#include "kdq/proptest.hpp"

namespace kdq {
namespace {

TEST(Proptest, SmallRunIsClean) {
    const auto s = proptest::run(123, {2, 3, 4}, 100);
    for (const auto& v : s.violations)
        ADD_FAILURE() << v.check << " d=" << v.dim << " seed=" << v.seed << " error=" << v.error;
    EXPECT_EQ(s.trials, 300u);
    EXPECT_EQ(s.evaluated.at("normalization"), 300u);
    EXPECT_EQ(s.evaluated.at("soundness"), 300u);
}

TEST(Proptest, NegativeThresholdForcesViolations) {
    const auto s = proptest::run(1, {2}, 3, proptest::Thresholds::uniform(-1.0));
    EXPECT_FALSE(s.ok());
    EXPECT_EQ(s.violations.front().seed, 1u);
}

TEST(Proptest, ReplayReproducesTrial) {
    const auto full = proptest::run(50, {3}, 10);
    const auto single = proptest::run(57, {3}, 1);
    proptest::Summary manual;
    proptest::run_trial(manual, 3, 57, {}, kDefaultLevel);
    EXPECT_EQ(single.worst, manual.worst);
    EXPECT_EQ(full.trials, 10u);
}

}  // namespace
}  // namespace kdq
