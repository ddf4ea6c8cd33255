// Uniform linear array geometry and steering vectors.
//
// The array has M elements spaced d = lambda / (2 sin theta_max) apart and
// scans angles of arrival in [-theta_max, theta_max]. The response to a
// planar wavefront from angle theta is
//
//   [a(theta)]_k = exp(j k pi sin(theta) / sin(theta_max)),  k = 0..M-1.

#ifndef SUBSKETCH_ARRAY_HPP
#define SUBSKETCH_ARRAY_HPP

#include <Eigen/Dense>

namespace subsketch {

struct UlaConfig {
    int antennas;     // M
    double theta_max; // scan half-angle, radians, in (0, pi/2)

    UlaConfig(int antennas_, double theta_max_);
};

double deg2rad(double degrees);
double rad2deg(double radians);

// Array response a(theta). Throws std::domain_error if |theta| > theta_max.
Eigen::VectorXcd steering_vector(const UlaConfig& cfg, double theta);

// M x G dictionary of steering vectors at G uniformly spaced angles spanning
// [-theta_max, theta_max] inclusive; for G = 1 the single angle is 0.
Eigen::MatrixXcd grid_atoms(const UlaConfig& cfg, int grid_size);

// The g-th angle of the grid above.
double grid_angle(const UlaConfig& cfg, int grid_size, int g);

} // namespace subsketch

#endif // SUBSKETCH_ARRAY_HPP
