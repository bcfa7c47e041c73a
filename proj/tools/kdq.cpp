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

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "kdq/cli.hpp"

namespace {

void add_detection_flags(CLI::App* app, int& m_max, kdq::DetectionTolerances& tol) {
    app->add_option("--m-max", m_max, "Highest Hankel level")->check(CLI::Range(1, kdq::kMaxLevel))->capture_default_str();
    app->add_option("--tol-det-rel", tol.det_rel, "Relative determinant tolerance")->capture_default_str();
    app->add_option("--tol-im", tol.im, "Largest |Im q_n| treated as real")->capture_default_str();
    app->add_option("--tol-oracle", tol.oracle, "Entry oracle tolerance")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kirkwood-Dirac moment criteria: nonpositivity, coherence and work nonclassicality"};
    app.require_subcommand(1);
    int rc = kdq::cli::kExitOk;

    kdq::cli::DetectOptions det;
    auto* detect = app.add_subcommand("detect", "Run a detector on a JSON input document");
    detect->add_option("input", det.input, "Input JSON path, '-' for stdin")->required();
    const std::map<std::string, kdq::DetectionMode> modes = {{"kd", kdq::DetectionMode::KD},
                                                             {"coherence", kdq::DetectionMode::Coherence},
                                                             {"work", kdq::DetectionMode::Work}};
    std::string mode = "kd";
    detect->add_option("--mode", mode, "kd | coherence | work")
        ->check(CLI::IsMember(modes, CLI::ignore_case))
        ->capture_default_str();
    add_detection_flags(detect, det.m_max, det.tol);
    detect->add_option("--tol-input", det.input_tol, "Validation tolerance for states, bases and unitaries")
        ->capture_default_str();
    detect->add_option("--table-csv", det.table_csv, "Also write the table as CSV");
    detect->callback([&] {
        det.mode = modes.at(CLI::detail::to_lower(mode));
        rc = kdq::cli::cmd_detect(det, std::cout, std::cerr);
    });

    kdq::cli::ExampleOptions ex;
    auto* example = app.add_subcommand("example", "Reproduce a worked example and check it");
    example->add_option("number", ex.number, "1, 2, 3 or 4")->required()->check(CLI::Range(1, 4));
    example->add_option("--p", ex.p, "Example 1 mixing parameter")->capture_default_str();
    example->add_option("--theta", ex.theta, "Example 3 polar angle")->capture_default_str();
    example->add_option("--alpha", ex.alpha, "Example 3 state phase")->capture_default_str();
    example->add_option("--beta", ex.beta, "Example 3 basis phase")->capture_default_str();
    example->add_option("--omega", ex.omega, "Example 4 rotation frequency")->capture_default_str();
    example->add_option("--rabi", ex.rabi, "Example 4 transverse amplitude")->capture_default_str();
    example->add_option("--t", ex.t, "Example 4 final time")->capture_default_str();
    add_detection_flags(example, ex.m_max, ex.tol);
    example->add_option("--table-csv", ex.table_csv, "Also write the table as CSV");
    example->add_option("--work-csv", ex.work_csv, "Example 4: write the work quasiprobability as CSV");
    example->callback([&] { rc = kdq::cli::cmd_example(ex, std::cout, std::cerr); });

    kdq::cli::SweepSpec sw;
    std::string figure;
    auto* sweep = app.add_subcommand("sweep", "Write figure data as CSV");
    sweep->add_option("figure", figure, "fig1 | fig2")->required()->check(CLI::IsMember({"fig1", "fig2"}));
    auto* min = sweep->add_option("--min", sw.min, "Grid start (fig1: theta, default 0; fig2: Omega, default 0.025)");
    auto* max = sweep->add_option("--max", sw.max, "Grid end (fig1: default pi; fig2: default 5)");
    auto* steps = sweep->add_option("--steps", sw.steps, "Grid points (fig1: default 181; fig2: default 200)");
    sweep->add_option("--alpha", sw.alpha, "fig1 state phase")->capture_default_str();
    sweep->add_option("--beta", sw.beta, "fig1 basis phase")->capture_default_str();
    auto* omega = sweep->add_option("--omega", sw.omega, "fig2 rotation frequency (required for fig2)");
    auto* t = sweep->add_option("--t", sw.t, "fig2 final time (required for fig2)");
    add_detection_flags(sweep, sw.m_max, sw.tol);
    sweep->add_option("-o,--output", sw.output, "Output CSV path (default stdout)");
    sweep->add_option("--threads", sw.threads, "Worker threads, 0 = all cores")->capture_default_str();
    sweep->callback([&] {
        if (figure == "fig1") {
            sw.figure = kdq::cli::Figure::Fig1;
        } else {
            if (!*omega || !*t) {
                std::cerr << "error: sweep fig2 requires --omega and --t\n";
                rc = kdq::cli::kExitError;
                return;
            }
            sw.figure = kdq::cli::Figure::Fig2;
            if (!*min) sw.min = 0.025;
            if (!*max) sw.max = 5.0;
            if (!*steps) sw.steps = 200;
        }
        rc = kdq::cli::cmd_sweep(sw, std::cout, std::cerr);
    });

    kdq::cli::ProptestOptions pt;
    double forced = 0.0;
    auto* proptest = app.add_subcommand("proptest", "Randomised invariant and soundness checks");
    proptest->add_option("--seed", pt.seed, "Base seed; trial t uses seed + t")->capture_default_str();
    proptest->add_option("--dims", pt.dims, "Dimensions")->capture_default_str();
    proptest->add_option("--trials", pt.trials, "Trials per dimension")->check(CLI::PositiveNumber)->capture_default_str();
    proptest->add_option("--m-max", pt.m_max, "Highest Hankel level")->check(CLI::Range(1, kdq::kMaxLevel))->capture_default_str();
    auto* force = proptest->add_option("--force-tolerance", forced, "Replace every threshold (harness self-test)");
    proptest->callback([&] {
        if (*force) pt.force_tolerance = forced;
        rc = kdq::cli::cmd_proptest(pt, std::cout, std::cerr);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kdq::cli::kExitError;
    }
    return rc;
}
