// WSSUS multipath channel model with first-order Markov small-scale fading.
//
// The large-scale state (angles of arrival and per-path powers) is fixed;
// per-path gains evolve as w[t] = alpha w[t-1] + sigma sqrt(1 - alpha^2) i[t]
// with unit-variance circularly symmetric Gaussian innovations, so the
// marginal variance of each path stays at sigma^2 and the autocorrelation
// decays as alpha^|dt|.

#ifndef SUBSKETCH_CHANNEL_HPP
#define SUBSKETCH_CHANNEL_HPP

#include <vector>

#include <Eigen/Dense>

#include "subsketch/array.hpp"
#include "subsketch/rng.hpp"

namespace subsketch {

struct PathComponent {
    double angle; // angle of arrival, radians
    double power; // sigma_l^2 >= 0
};

// The invariant scattering geometry: p paths with angles and powers.
struct ScatteringGeometry {
    std::vector<PathComponent> paths;

    int path_count() const { return static_cast<int>(paths.size()); }
    double total_power() const;

    // Checks p >= 1, powers >= 0 with at least one positive, and all angles
    // inside the scan range of cfg. Throws std::invalid_argument.
    void validate(const UlaConfig& cfg) const;
};

// Per-path gain trajectory, paths x steps.
struct FadingTrajectory {
    Eigen::MatrixXcd gains;
    double alpha = 0.0;

    int steps() const { return static_cast<int>(gains.cols()); }
};

// Training-slot bookkeeping: pilots arrive every tau steps, a window keeps
// nu of them, and each array element sees noise of the given variance.
struct TrainingSchedule {
    int tau = 1;
    int nu = 1;
    double noise_variance = 0.0; // 0 permitted for noiseless experiments

    TrainingSchedule() = default;
    TrainingSchedule(int tau_, int nu_, double noise_variance_);
};

// Stationary initial gains, w_l ~ CN(0, sigma_l^2).
Eigen::VectorXcd draw_initial_gains(const ScatteringGeometry& geom, Rng& rng);

// One step of the Markov recursion. Requires alpha in [0, 1).
Eigen::VectorXcd step_fading(const Eigen::VectorXcd& previous,
                             const ScatteringGeometry& geom, double alpha, Rng& rng);

// Full trajectory of the given length, initialized at stationarity.
FadingTrajectory simulate_fading(const ScatteringGeometry& geom, double alpha, int steps,
                                 Rng& rng);

// h = sum_l w_l a(theta_l).
Eigen::VectorXcd channel_vector(const ScatteringGeometry& geom,
                                const Eigen::VectorXcd& gains, const UlaConfig& cfg);

// tau_c = 1 / log(1/alpha); 0 for alpha = 0 (instantaneous decorrelation).
double coherence_time(double alpha);

// beta = alpha^tau, the gain correlation between adjacent training slots.
double slot_correlation(double alpha, int tau);

// y = h + n with n ~ CN(0, noise_variance I).
Eigen::VectorXcd observe_training(const Eigen::VectorXcd& h, const TrainingSchedule& sched,
                                  Rng& rng);

// snr = sum_l sigma_l^2 / sigma^2.
double training_snr(const ScatteringGeometry& geom, double noise_variance);

} // namespace subsketch

#endif // SUBSKETCH_CHANNEL_HPP
