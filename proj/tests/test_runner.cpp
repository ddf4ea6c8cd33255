#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "oracles.hpp"

#include "subsketch/metrics.hpp"
#include "subsketch/runner.hpp"

using namespace subsketch;

namespace {

Scenario desk_scenario() {
    Scenario s;
    s.antennas = 16;
    s.sketch_rows = 8;
    s.nu = 20;
    s.snr_db = {0.0, 20.0};
    s.tau_c = {10.0};
    s.trials = 3;
    s.seed = 11;
    return s;
}

std::string csv_of(const std::vector<TrialRecord>& records) {
    std::ostringstream out;
    write_csv(out, records);
    return out.str();
}

} // namespace

TEST_CASE("sweep cells enumerate snr outer, coherence inner") {
    Scenario s = desk_scenario();
    s.tau_c = {1.0, 100.0};
    const auto cells = sweep_cells(s);
    REQUIRE(cells.size() == 4);
    CHECK(cells[0].snr_db == 0.0);
    CHECK(cells[0].tau_c == 1.0);
    CHECK(cells[1].snr_db == 0.0);
    CHECK(cells[1].tau_c == 100.0);
    CHECK(cells[2].snr_db == 20.0);
    CHECK(cells[3].tau_c == 100.0);
}

TEST_CASE("trial replay is deterministic") {
    const Scenario s = desk_scenario();
    const auto first = run_trial(s, 1, 2);
    const auto second = run_trial(s, 1, 2);
    REQUIRE(first.size() == second.size());
    for (std::size_t i = 0; i < first.size(); ++i) {
        CHECK(first[i].estimator == second[i].estimator);
        // NaN-tolerant comparisons: each record defines only one of the metrics.
        CHECK((first[i].eta == second[i].eta ||
               (std::isnan(first[i].eta) && std::isnan(second[i].eta))));
        CHECK((first[i].mu == second[i].mu ||
               (std::isnan(first[i].mu) && std::isnan(second[i].mu))));
        CHECK(first[i].converged == second[i].converged);
        CHECK(first[i].iterations == second[i].iterations);
    }
}

TEST_CASE("one record per configured estimator") {
    Scenario s = desk_scenario();
    s.snr_db = {10.0};
    s.trials = 1;
    const SweepResult result = run_sweep(s, 1);
    REQUIRE(result.records.size() == 4);
    CHECK(result.records[0].estimator == Estimator::oneshot);
    CHECK(result.records[1].estimator == Estimator::time_average);
    CHECK(result.records[2].estimator == Estimator::subspace_ls);
    CHECK(result.records[3].estimator == Estimator::subspace_only);
    for (const auto& r : result.records) {
        CHECK(r.trial == 0);
        CHECK(r.snr_db == 10.0);
        CHECK(r.tau_c == 10.0);
    }
    // eta defined exactly for the channel estimators, mu for the subspace ones.
    CHECK(std::isfinite(result.records[0].eta));
    CHECK(std::isnan(result.records[0].mu));
    CHECK(std::isnan(result.records[3].eta));
    CHECK(std::isfinite(result.records[3].mu));
}

TEST_CASE("sweep results are invariant to worker count") {
    const Scenario s = desk_scenario();
    const SweepResult serial = run_sweep(s, 1);
    const SweepResult parallel = run_sweep(s, 3);
    CHECK(csv_of(serial.records) == csv_of(parallel.records));
    REQUIRE(serial.cells.size() == parallel.cells.size());
    for (std::size_t i = 0; i < serial.cells.size(); ++i)
        CHECK(serial.cells[i].failures == parallel.cells[i].failures);
}

TEST_CASE("csv schema") {
    const Scenario s = desk_scenario();
    const SweepResult result = run_sweep(s, 0);
    const std::string csv = csv_of(result.records);
    CHECK(csv.rfind("trial,estimator,snr_db,tau_c,eta,mu,eta_db,mu_db,converged,iterations\n",
                    0) == 0);
    const auto rows = std::count(csv.begin(), csv.end(), '\n');
    CHECK(rows == 1 + static_cast<long>(s.snr_db.size() * s.tau_c.size() * s.trials *
                                        s.estimators.size()));
}

TEST_CASE("json rows mirror the csv rows") {
    Scenario s = desk_scenario();
    s.trials = 2;
    s.snr_db = {0.0};
    const SweepResult result = run_sweep(s, 1);
    std::ostringstream out;
    write_json(out, result.records);
    const auto parsed = nlohmann::json::parse(out.str());
    REQUIRE(parsed.is_array());
    REQUIRE(parsed.size() == result.records.size());
    CHECK(parsed[0]["estimator"] == "oneshot");
    CHECK(parsed[0]["snr_db"] == 0.0);
    CHECK(parsed[0]["trial"] == 0);
    CHECK(parsed[0].contains("eta_db"));
    // subspace_only carries no eta; JSON encodes the absence as null.
    CHECK(parsed[3]["eta"].is_null());
    CHECK(parsed[3]["mu"].is_number());
}

TEST_CASE("ccdf tables group by estimator and cell") {
    const Scenario s = desk_scenario();
    const SweepResult result = run_sweep(s, 0);
    const auto eta_rows = ccdf_table(result.records, CcdfMetric::eta);
    const auto mu_rows = ccdf_table(result.records, CcdfMetric::mu);
    REQUIRE(!eta_rows.empty());
    REQUIRE(!mu_rows.empty());
    for (const auto& row : eta_rows) {
        CHECK(row.threshold_db >= 0.0);
        CHECK(row.fraction >= 0.0);
        CHECK(row.fraction <= 1.0);
    }
    // mu tables only cover the subspace estimators.
    for (const auto& row : mu_rows)
        CHECK((row.estimator == Estimator::subspace_ls ||
               row.estimator == Estimator::subspace_only));

    std::ostringstream out;
    write_ccdf_csv(out, eta_rows);
    CHECK(out.str().rfind("threshold_db,fraction,estimator,snr_db,tau_c\n", 0) == 0);
}

TEST_CASE("near-static noiseless windows make time averaging exact") {
    Scenario s = desk_scenario();
    s.snr_db = {200.0}; // effectively noiseless
    s.tau_c = {std::numeric_limits<double>::infinity()};
    s.estimators = {Estimator::time_average};
    s.trials = 2;
    for (int trial = 0; trial < s.trials; ++trial) {
        const auto records = run_trial(s, 0, trial);
        REQUIRE(records.size() == 1);
        REQUIRE(records[0].converged);
        CHECK(records[0].eta >= 1.0 - 1e-3);
    }
}

TEST_CASE("channel vectors always lie in the scatterer span") {
    // With the true steering frame, the subspace residual is zero regardless
    // of fading state; the estimators only ever approximate this frame.
    Scenario s = desk_scenario();
    const UlaConfig cfg = s.ula();
    const ScatteringGeometry geom = s.geometry();
    Eigen::MatrixXcd atoms(s.antennas, geom.path_count());
    for (int l = 0; l < geom.path_count(); ++l)
        atoms.col(l) = steering_vector(cfg, geom.paths[l].angle);
    const Eigen::MatrixXcd frame = oracles::orth(atoms);
    Rng rng(1234);
    for (int rep = 0; rep < 20; ++rep) {
        const Eigen::VectorXcd h = channel_vector(geom, draw_initial_gains(geom, rng), cfg);
        CHECK(mu(h, frame) < 1e-12);
    }
}

TEST_CASE("fading traces are reproducible and schema-stable") {
    Scenario s = desk_scenario();
    s.trials = 2;
    s.nu = 3;
    std::ostringstream a, b;
    write_trace_csv(a, s);
    write_trace_csv(b, s);
    const std::string trace = a.str();
    CHECK(trace == b.str());
    CHECK(trace.rfind("trial,tau_c,slot,path,gain_re,gain_im\n", 0) == 0);
    const auto rows = std::count(trace.begin(), trace.end(), '\n');
    CHECK(rows == 1 + static_cast<long>(s.trials * s.tau_c.size() * (s.nu + 1) *
                                        s.geometry().path_count()));
}

TEST_SUITE("slow") {

TEST_CASE("desk-scale smoke sweep emits records and both ccdfs") {
    Scenario s;
    s.antennas = 16;
    s.sketch_rows = 8;
    s.nu = 20;
    s.snr_db = {-10.0, 20.0};
    s.tau_c = {1.0, 1000.0};
    s.trials = 50;
    s.seed = 3;
    const SweepResult result = run_sweep(s, 0);
    CHECK(result.records.size() == 2 * 2 * 50 * 4);

    int failures = 0;
    for (const auto& cell : result.cells) failures += cell.failures;
    CHECK(failures == 0);

    CHECK(!ccdf_table(result.records, CcdfMetric::eta).empty());
    CHECK(!ccdf_table(result.records, CcdfMetric::mu).empty());

    // Higher snr must help the refined estimator.
    auto median_eta = [&](double snr) {
        std::vector<double> values;
        for (const auto& r : result.records)
            if (r.estimator == Estimator::subspace_ls && r.snr_db == snr && r.converged &&
                std::isfinite(r.eta))
                values.push_back(r.eta);
        REQUIRE(!values.empty());
        std::sort(values.begin(), values.end());
        return values[values.size() / 2];
    };
    CHECK(median_eta(20.0) >= median_eta(-10.0));
}

} // TEST_SUITE("slow")
