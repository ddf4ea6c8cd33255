#include "subsketch/array.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace subsketch {

UlaConfig::UlaConfig(int antennas_, double theta_max_)
    : antennas(antennas_), theta_max(theta_max_) {
    if (antennas < 1)
        throw std::invalid_argument("UlaConfig: antenna count must be >= 1, got " +
                                    std::to_string(antennas));
    if (!(theta_max > 0.0) || !(theta_max < std::numbers::pi / 2.0))
        throw std::invalid_argument("UlaConfig: theta_max must lie strictly in (0, pi/2)");
}

double deg2rad(double degrees) { return degrees * std::numbers::pi / 180.0; }
double rad2deg(double radians) { return radians * 180.0 / std::numbers::pi; }

Eigen::VectorXcd steering_vector(const UlaConfig& cfg, double theta) {
    // Tiny slack so angles recovered through asin() at the scan edge pass.
    if (std::abs(theta) > cfg.theta_max * (1.0 + 1e-12) + 1e-15)
        throw std::domain_error("steering_vector: angle outside scan range");
    const double phase_step = std::numbers::pi * std::sin(theta) / std::sin(cfg.theta_max);
    Eigen::VectorXcd a(cfg.antennas);
    for (int k = 0; k < cfg.antennas; ++k) a(k) = std::polar(1.0, k * phase_step);
    return a;
}

double grid_angle(const UlaConfig& cfg, int grid_size, int g) {
    if (grid_size == 1) return 0.0;
    return -cfg.theta_max + 2.0 * cfg.theta_max * g / (grid_size - 1);
}

Eigen::MatrixXcd grid_atoms(const UlaConfig& cfg, int grid_size) {
    if (grid_size < 1) throw std::invalid_argument("grid_atoms: grid size must be >= 1");
    Eigen::MatrixXcd atoms(cfg.antennas, grid_size);
    for (int g = 0; g < grid_size; ++g)
        atoms.col(g) = steering_vector(cfg, grid_angle(cfg, grid_size, g));
    return atoms;
}

} // namespace subsketch
