// Estimation-quality metrics: the correlation coefficient eta between true
// and estimated channel, the normalized residual power mu left outside an
// estimated subspace, and empirical CCDFs of their dB transforms.

#ifndef SUBSKETCH_METRICS_HPP
#define SUBSKETCH_METRICS_HPP

#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace subsketch {

// |<h, h_hat>| / (|h| |h_hat|), in [0, 1]. Invariant to complex scaling of
// either argument. Throws on zero vectors.
double eta(const Eigen::VectorXcd& h, const Eigen::VectorXcd& h_hat);

// h^H (I - U U^H) h / |h|^2, in [0, 1]: the fraction of |h|^2 outside
// span(U). frame must have orthonormal columns. Throws on zero h or a
// non-orthonormal frame.
double mu(const Eigen::VectorXcd& h, const Eigen::MatrixXcd& frame);

// Empirical complementary CDF P[X > t] at the sorted unique sample values
// (strict inequality, so the largest sample maps to fraction 0). Throws on
// empty input or non-finite samples.
std::vector<std::pair<double, double>> ccdf(std::vector<double> samples);

// dB transforms used for CCDF plotting; both are >= 0 on [0, 1] inputs.
double eta_db(double eta); // 20 log10(1 / eta)
double mu_db(double mu);   // 10 log10(1 / mu)

} // namespace subsketch

#endif // SUBSKETCH_METRICS_HPP
