// Monte Carlo orchestration: runs the configured estimators over the
// (snr, tau_c) sweep grid, one independent RNG stream per (purpose, cell,
// trial), and emits trial tables, CCDF tables, and fading traces.
//
// Stream keying makes every record a pure function of (scenario, cell,
// trial): results do not depend on worker count or execution order. Fading
// streams are keyed by the tau_c index rather than the full cell, so the
// same channel realizations are reused across the snr sweep.

#ifndef SUBSKETCH_RUNNER_HPP
#define SUBSKETCH_RUNNER_HPP

#include <iosfwd>
#include <vector>

#include "subsketch/scenario.hpp"

namespace subsketch {

struct SweepCell {
    double snr_db = 0.0;
    double tau_c = 0.0;
};

// Row-major grid: snr outer, tau_c inner.
std::vector<SweepCell> sweep_cells(const Scenario& s);

// One row per (trial, estimator). eta is NaN for subspace_only and for
// failed estimates; mu is NaN for estimators that carry no subspace.
struct TrialRecord {
    int trial = 0;
    Estimator estimator = Estimator::oneshot;
    double snr_db = 0.0;
    double tau_c = 0.0;
    double eta = 0.0;
    double mu = 0.0;
    bool converged = false;
    int iterations = 0;
};

struct CellSummary {
    SweepCell cell;
    int records = 0;
    int failures = 0; // records with converged == false
};

struct SweepResult {
    std::vector<TrialRecord> records; // ordered by (cell, trial, estimator)
    std::vector<CellSummary> cells;
};

// Simulates nu+1 training slots (the past window plus the current slot),
// runs every configured estimator against the current channel, and returns
// one record per estimator. Estimator failures are recorded, not thrown.
std::vector<TrialRecord> run_trial(const Scenario& s, int cell_index, int trial_index);

// Full sweep on a worker pool; threads = 0 picks hardware concurrency.
SweepResult run_sweep(const Scenario& s, int threads = 0);

// CSV with the fixed header
// trial,estimator,snr_db,tau_c,eta,mu,eta_db,mu_db,converged,iterations.
void write_csv(std::ostream& out, const std::vector<TrialRecord>& records);

// Same rows as a JSON array; non-finite values become null.
void write_json(std::ostream& out, const std::vector<TrialRecord>& records);

enum class CcdfMetric { eta, mu };

struct CcdfRow {
    double threshold_db = 0.0;
    double fraction = 0.0;
    Estimator estimator = Estimator::oneshot;
    double snr_db = 0.0;
    double tau_c = 0.0;
};

// Per-(cell, estimator) empirical CCDF of 20log10(1/eta) or 10log10(1/mu)
// over converged records with a finite metric.
std::vector<CcdfRow> ccdf_table(const std::vector<TrialRecord>& records, CcdfMetric metric);

// CSV with header threshold_db,fraction,estimator,snr_db,tau_c.
void write_ccdf_csv(std::ostream& out, const std::vector<CcdfRow>& rows);

// Fading-gain traces (trial,tau_c,slot,path,gain_re,gain_im) drawn from the
// same streams the estimation runs consume.
void write_trace_csv(std::ostream& out, const Scenario& s);

} // namespace subsketch

#endif // SUBSKETCH_RUNNER_HPP
