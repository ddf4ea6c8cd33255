#include "subsketch/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace subsketch {

double eta(const Eigen::VectorXcd& h, const Eigen::VectorXcd& h_hat) {
    if (h.size() != h_hat.size()) throw std::invalid_argument("eta: length mismatch");
    const double na = h.norm();
    const double nb = h_hat.norm();
    if (na == 0.0 || nb == 0.0) throw std::invalid_argument("eta: zero vector");
    const double val = std::abs(h.dot(h_hat)) / (na * nb);
    return std::clamp(val, 0.0, 1.0);
}

double mu(const Eigen::VectorXcd& h, const Eigen::MatrixXcd& frame) {
    if (frame.rows() != h.size() || frame.cols() < 1)
        throw std::invalid_argument("mu: frame shape mismatch");
    const double defect = (frame.adjoint() * frame -
                           Eigen::MatrixXcd::Identity(frame.cols(), frame.cols()))
                              .cwiseAbs()
                              .maxCoeff();
    if (defect > 1e-8) throw std::invalid_argument("mu: frame columns are not orthonormal");
    const double power = h.squaredNorm();
    if (power == 0.0) throw std::invalid_argument("mu: zero vector");
    // 1 - |U^H h|^2 / |h|^2 avoids forming the M x M projector.
    const double val = 1.0 - (frame.adjoint() * h).squaredNorm() / power;
    return std::clamp(val, 0.0, 1.0);
}

std::vector<std::pair<double, double>> ccdf(std::vector<double> samples) {
    if (samples.empty()) throw std::invalid_argument("ccdf: no samples");
    for (double s : samples)
        if (!std::isfinite(s)) throw std::invalid_argument("ccdf: non-finite sample");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (i + 1 < samples.size() && samples[i + 1] == samples[i]) continue;
        // i is the last index holding this value; everything above is > t.
        out.emplace_back(samples[i], static_cast<double>(samples.size() - 1 - i) / n);
    }
    return out;
}

double eta_db(double eta) { return -20.0 * std::log10(eta); }

double mu_db(double mu) { return -10.0 * std::log10(mu); }

} // namespace subsketch
