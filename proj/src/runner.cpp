#include "subsketch/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>

#include "json.hpp"

#include "subsketch/denoise.hpp"
#include "subsketch/metrics.hpp"

namespace subsketch {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Purpose tags for derived RNG streams.
enum StreamTag : std::uint64_t { kSketch = 1, kFading = 2, kNoise = 3 };

SketchMatrix make_front_end(const Scenario& s, int cell_index, int trial_index) {
    if (s.sketch_kind == SketchKind::coprime_selection)
        return SketchMatrix::coprime_selection(s.antennas);
    Rng rng = s.redraw_sketch
                  ? Rng(s.seed, {kSketch, static_cast<std::uint64_t>(cell_index),
                                 static_cast<std::uint64_t>(trial_index)})
                  : Rng(s.seed, {kSketch});
    return SketchMatrix::random_selection(s.sketch_rows, s.antennas, rng);
}

std::string format_field(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

nlohmann::ordered_json json_number(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

} // namespace

std::vector<SweepCell> sweep_cells(const Scenario& s) {
    std::vector<SweepCell> cells;
    cells.reserve(s.snr_db.size() * s.tau_c.size());
    for (double snr : s.snr_db)
        for (double tc : s.tau_c) cells.push_back({snr, tc});
    return cells;
}

std::vector<TrialRecord> run_trial(const Scenario& s, int cell_index, int trial_index) {
    validate_scenario(s);
    const auto cells = sweep_cells(s);
    if (cell_index < 0 || cell_index >= static_cast<int>(cells.size()))
        throw std::out_of_range("run_trial: cell index out of range");
    if (trial_index < 0) throw std::out_of_range("run_trial: negative trial index");
    const SweepCell cell = cells[cell_index];
    const int tau_index = cell_index % static_cast<int>(s.tau_c.size());

    const UlaConfig ula = s.ula();
    const ScatteringGeometry geom = s.geometry();
    const double sigma2 = geom.total_power() * std::pow(10.0, -cell.snr_db / 10.0);
    // Slot-to-slot gain correlation beta = alpha^tau = exp(-tau / tau_c);
    // IEEE division gives the right limits at tau_c = 0 and tau_c = inf.
    const double beta = std::exp(-static_cast<double>(s.tau) / cell.tau_c);

    const SketchMatrix front = make_front_end(s, cell_index, trial_index);
    Rng fading(s.seed, {kFading, static_cast<std::uint64_t>(tau_index),
                        static_cast<std::uint64_t>(trial_index)});
    Rng noise(s.seed, {kNoise, static_cast<std::uint64_t>(cell_index),
                       static_cast<std::uint64_t>(trial_index)});
    const TrainingSchedule sched = s.schedule(sigma2);

    Eigen::MatrixXcd window(front.rows(), s.nu);
    Eigen::VectorXcd x_now, h_now;
    Eigen::VectorXcd gains = draw_initial_gains(geom, fading);
    for (int slot = 0; slot <= s.nu; ++slot) {
        if (slot > 0 && beta < 1.0) gains = step_fading(gains, geom, beta, fading);
        const Eigen::VectorXcd h = channel_vector(geom, gains, ula);
        const Eigen::VectorXcd x = front.apply(observe_training(h, sched, noise));
        if (slot < s.nu) {
            window.col(slot) = x;
        } else {
            x_now = x;
            h_now = h;
        }
    }

    const DenoiseConfig denoise_cfg{
        s.epsilon_scale * default_epsilon(front.rows(), sigma2), s.solver};

    // The two subspace estimators share one covariance fit per trial.
    bool subspace_ready = false, subspace_ok = false;
    bool fit_converged = false;
    int fit_iterations = 0;
    SubspaceEstimate subspace;
    double mu_now = kNan;
    const auto ensure_subspace = [&] {
        if (subspace_ready) return;
        subspace_ready = true;
        try {
            const RmmvResult fit =
                rmmv_fit(reduce_window(SketchWindow(window)), front, s.solver);
            fit_converged = fit.solution.converged;
            fit_iterations = fit.solution.iterations;
            if (!fit_converged) return;
            subspace = extract_subspace(fit.covariance, s.rank_rule);
            mu_now = mu(h_now, subspace.basis);
            subspace_ok = true;
        } catch (const std::exception&) {
            subspace_ok = false;
        }
    };

    std::vector<TrialRecord> records;
    records.reserve(s.estimators.size());
    for (Estimator est : s.estimators) {
        TrialRecord rec;
        rec.trial = trial_index;
        rec.estimator = est;
        rec.snr_db = cell.snr_db;
        rec.tau_c = cell.tau_c;
        rec.eta = kNan;
        rec.mu = kNan;
        try {
            switch (est) {
                case Estimator::oneshot:
                case Estimator::time_average: {
                    const DenoiseResult res =
                        est == Estimator::oneshot
                            ? atomic_denoise(x_now, front, denoise_cfg)
                            : time_average_estimate(window, front, denoise_cfg);
                    rec.converged = res.solution.converged;
                    rec.iterations = res.solution.iterations;
                    if (rec.converged && res.estimate.norm() > 0.0)
                        rec.eta = eta(h_now, res.estimate);
                    break;
                }
                case Estimator::subspace_only: {
                    ensure_subspace();
                    rec.converged = subspace_ok;
                    rec.iterations = fit_iterations;
                    if (subspace_ok) rec.mu = mu_now;
                    break;
                }
                case Estimator::subspace_ls: {
                    ensure_subspace();
                    rec.iterations = fit_iterations;
                    if (subspace_ok) {
                        const SubspaceLsResult ls =
                            subspace_ls_estimate(x_now, front, subspace.basis);
                        rec.converged = true;
                        rec.mu = mu_now;
                        if (ls.estimate.norm() > 0.0) rec.eta = eta(h_now, ls.estimate);
                    }
                    break;
                }
            }
        } catch (const std::exception&) {
            rec.converged = false;
            rec.eta = kNan;
            rec.mu = kNan;
        }
        records.push_back(rec);
    }
    return records;
}

SweepResult run_sweep(const Scenario& s, int threads) {
    validate_scenario(s);
    const auto cells = sweep_cells(s);
    const int total = static_cast<int>(cells.size()) * s.trials;

    std::vector<std::vector<TrialRecord>> slots(total);
    std::atomic<int> next{0};
    int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min(workers, total));

    std::vector<std::exception_ptr> errors(workers);
    const auto work = [&](int worker) {
        try {
            for (int i = next.fetch_add(1); i < total; i = next.fetch_add(1))
                slots[i] = run_trial(s, i / s.trials, i % s.trials);
        } catch (...) {
            errors[worker] = std::current_exception();
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    for (const auto& err : errors)
        if (err) std::rethrow_exception(err);

    SweepResult result;
    result.records.reserve(static_cast<std::size_t>(total) * s.estimators.size());
    result.cells.reserve(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
        CellSummary summary;
        summary.cell = cells[c];
        for (int t = 0; t < s.trials; ++t) {
            for (const TrialRecord& rec : slots[c * s.trials + t]) {
                result.records.push_back(rec);
                ++summary.records;
                if (!rec.converged) ++summary.failures;
            }
        }
        result.cells.push_back(summary);
    }
    return result;
}

void write_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
    out << "trial,estimator,snr_db,tau_c,eta,mu,eta_db,mu_db,converged,iterations\n";
    for (const TrialRecord& r : records) {
        out << r.trial << ',' << estimator_name(r.estimator) << ','
            << format_field(r.snr_db) << ',' << format_field(r.tau_c) << ','
            << format_field(r.eta) << ',' << format_field(r.mu) << ','
            << format_field(eta_db(r.eta)) << ',' << format_field(mu_db(r.mu)) << ','
            << (r.converged ? 1 : 0) << ',' << r.iterations << '\n';
    }
}

void write_json(std::ostream& out, const std::vector<TrialRecord>& records) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const TrialRecord& r : records) {
        nlohmann::ordered_json row;
        row["trial"] = r.trial;
        row["estimator"] = estimator_name(r.estimator);
        row["snr_db"] = json_number(r.snr_db);
        row["tau_c"] = json_number(r.tau_c);
        row["eta"] = json_number(r.eta);
        row["mu"] = json_number(r.mu);
        row["eta_db"] = json_number(eta_db(r.eta));
        row["mu_db"] = json_number(mu_db(r.mu));
        row["converged"] = r.converged;
        row["iterations"] = r.iterations;
        arr.push_back(std::move(row));
    }
    out << arr.dump(2) << '\n';
}

std::vector<CcdfRow> ccdf_table(const std::vector<TrialRecord>& records, CcdfMetric metric) {
    // Group keys in first-appearance order (records arrive cell-sorted).
    struct Group {
        Estimator estimator;
        double snr_db, tau_c;
        std::vector<double> samples;
    };
    std::vector<Group> groups;
    for (const TrialRecord& r : records) {
        if (!r.converged) continue;
        const double raw = metric == CcdfMetric::eta ? r.eta : r.mu;
        const double db = metric == CcdfMetric::eta ? eta_db(r.eta) : mu_db(r.mu);
        if (!std::isfinite(raw) || !std::isfinite(db)) continue;
        Group* group = nullptr;
        for (auto& g : groups)
            if (g.estimator == r.estimator && g.snr_db == r.snr_db && g.tau_c == r.tau_c) {
                group = &g;
                break;
            }
        if (!group) {
            groups.push_back({r.estimator, r.snr_db, r.tau_c, {}});
            group = &groups.back();
        }
        group->samples.push_back(db);
    }

    std::vector<CcdfRow> rows;
    for (auto& g : groups)
        for (const auto& [threshold, fraction] : ccdf(std::move(g.samples)))
            rows.push_back({threshold, fraction, g.estimator, g.snr_db, g.tau_c});
    return rows;
}

void write_ccdf_csv(std::ostream& out, const std::vector<CcdfRow>& rows) {
    out << "threshold_db,fraction,estimator,snr_db,tau_c\n";
    for (const CcdfRow& r : rows) {
        out << format_field(r.threshold_db) << ',' << format_field(r.fraction) << ','
            << estimator_name(r.estimator) << ',' << format_field(r.snr_db) << ','
            << format_field(r.tau_c) << '\n';
    }
}

void write_trace_csv(std::ostream& out, const Scenario& s) {
    validate_scenario(s);
    const ScatteringGeometry geom = s.geometry();
    out << "trial,tau_c,slot,path,gain_re,gain_im\n";
    for (std::size_t ti = 0; ti < s.tau_c.size(); ++ti) {
        const double beta = std::exp(-static_cast<double>(s.tau) / s.tau_c[ti]);
        for (int trial = 0; trial < s.trials; ++trial) {
            Rng fading(s.seed, {kFading, static_cast<std::uint64_t>(ti),
                                static_cast<std::uint64_t>(trial)});
            Eigen::VectorXcd gains = draw_initial_gains(geom, fading);
            for (int slot = 0; slot <= s.nu; ++slot) {
                if (slot > 0 && beta < 1.0)
                    gains = step_fading(gains, geom, beta, fading);
                for (int path = 0; path < geom.path_count(); ++path) {
                    out << trial << ',' << format_field(s.tau_c[ti]) << ',' << slot << ','
                        << path << ',' << format_field(gains(path).real()) << ','
                        << format_field(gains(path).imag()) << '\n';
                }
            }
        }
    }
}

} // namespace subsketch
