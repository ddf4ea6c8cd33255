#include "subsketch/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace subsketch {

double ScatteringGeometry::total_power() const {
    double sum = 0.0;
    for (const auto& path : paths) sum += path.power;
    return sum;
}

void ScatteringGeometry::validate(const UlaConfig& cfg) const {
    if (paths.empty())
        throw std::invalid_argument("ScatteringGeometry: at least one path required");
    bool any_positive = false;
    for (std::size_t l = 0; l < paths.size(); ++l) {
        if (std::abs(paths[l].angle) > cfg.theta_max * (1.0 + 1e-12) + 1e-15)
            throw std::invalid_argument("ScatteringGeometry: path " + std::to_string(l) +
                                        " angle outside scan range");
        if (paths[l].power < 0.0)
            throw std::invalid_argument("ScatteringGeometry: path " + std::to_string(l) +
                                        " power is negative");
        any_positive |= paths[l].power > 0.0;
    }
    if (!any_positive)
        throw std::invalid_argument("ScatteringGeometry: all path powers are zero");
}

TrainingSchedule::TrainingSchedule(int tau_, int nu_, double noise_variance_)
    : tau(tau_), nu(nu_), noise_variance(noise_variance_) {
    if (tau < 1) throw std::invalid_argument("TrainingSchedule: tau must be >= 1");
    if (nu < 1) throw std::invalid_argument("TrainingSchedule: nu must be >= 1");
    if (noise_variance < 0.0)
        throw std::invalid_argument("TrainingSchedule: noise variance must be >= 0");
}

static void check_alpha(double alpha) {
    if (!(alpha >= 0.0) || !(alpha < 1.0))
        throw std::domain_error("fading coefficient alpha must lie in [0, 1)");
}

Eigen::VectorXcd draw_initial_gains(const ScatteringGeometry& geom, Rng& rng) {
    Eigen::VectorXcd w(geom.path_count());
    for (int l = 0; l < geom.path_count(); ++l)
        w(l) = rng.complex_gaussian(geom.paths[l].power);
    return w;
}

Eigen::VectorXcd step_fading(const Eigen::VectorXcd& previous,
                             const ScatteringGeometry& geom, double alpha, Rng& rng) {
    check_alpha(alpha);
    if (previous.size() != geom.path_count())
        throw std::invalid_argument("step_fading: gain vector size does not match path count");
    const double innovation_scale = 1.0 - alpha * alpha;
    Eigen::VectorXcd next(previous.size());
    for (int l = 0; l < geom.path_count(); ++l)
        next(l) = alpha * previous(l) +
                  rng.complex_gaussian(geom.paths[l].power * innovation_scale);
    return next;
}

FadingTrajectory simulate_fading(const ScatteringGeometry& geom, double alpha, int steps,
                                 Rng& rng) {
    check_alpha(alpha);
    if (steps < 1) throw std::invalid_argument("simulate_fading: steps must be >= 1");
    FadingTrajectory traj;
    traj.alpha = alpha;
    traj.gains.resize(geom.path_count(), steps);
    traj.gains.col(0) = draw_initial_gains(geom, rng);
    for (int t = 1; t < steps; ++t)
        traj.gains.col(t) = step_fading(traj.gains.col(t - 1), geom, alpha, rng);
    return traj;
}

Eigen::VectorXcd channel_vector(const ScatteringGeometry& geom,
                                const Eigen::VectorXcd& gains, const UlaConfig& cfg) {
    if (gains.size() != geom.path_count())
        throw std::invalid_argument("channel_vector: gain vector size does not match path count");
    Eigen::VectorXcd h = Eigen::VectorXcd::Zero(cfg.antennas);
    for (int l = 0; l < geom.path_count(); ++l)
        h += gains(l) * steering_vector(cfg, geom.paths[l].angle);
    return h;
}

double coherence_time(double alpha) {
    if (alpha == 0.0) return 0.0;
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw std::domain_error("coherence_time: alpha must lie in [0, 1)");
    return 1.0 / std::log(1.0 / alpha);
}

double slot_correlation(double alpha, int tau) {
    check_alpha(alpha);
    if (tau < 1) throw std::invalid_argument("slot_correlation: tau must be >= 1");
    return std::pow(alpha, tau);
}

Eigen::VectorXcd observe_training(const Eigen::VectorXcd& h, const TrainingSchedule& sched,
                                  Rng& rng) {
    Eigen::VectorXcd y = h;
    if (sched.noise_variance > 0.0)
        for (Eigen::Index k = 0; k < y.size(); ++k)
            y(k) += rng.complex_gaussian(sched.noise_variance);
    return y;
}

double training_snr(const ScatteringGeometry& geom, double noise_variance) {
    if (!(noise_variance > 0.0))
        throw std::domain_error("training_snr: noise variance must be positive");
    return geom.total_power() / noise_variance;
}

} // namespace subsketch
