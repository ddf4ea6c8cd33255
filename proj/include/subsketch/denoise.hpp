// One-shot channel estimation: atomic-norm denoising of a single sketched
// observation via the structured SDP, plus the coherent window average that
// trades delay for an SNR gain of nu before denoising.

#ifndef SUBSKETCH_DENOISE_HPP
#define SUBSKETCH_DENOISE_HPP

#include <Eigen/Dense>

#include "subsketch/sdp.hpp"
#include "subsketch/sketch.hpp"

namespace subsketch {

struct DenoiseConfig {
    double epsilon = 0.0; // data-fit radius squared; default_epsilon() for noisy data
    SolverConfig solver;
};

struct DenoiseResult {
    Eigen::VectorXcd estimate; // h block of the converged SDP
    SdpSolution solution;      // full diagnostics, including `converged`
};

// The standard data-fit radius m * sigma^2 (the expected squared norm of the
// sketched noise).
double default_epsilon(int sketch_rows, double noise_variance);

// Recovers the full M-dimensional channel from one m-dimensional sketch x by
// min tr T(v) + gamma s.t. [[T(v), h], [h^H, gamma]] >= 0, |x - B h|^2 <= eps.
// Callers must check result.solution.converged before trusting the estimate.
DenoiseResult atomic_denoise(const Eigen::VectorXcd& x, const SketchMatrix& front_end,
                             const DenoiseConfig& cfg);

// Averages the window columns and denoises the mean with epsilon shrunk by
// the window length (noise power drops by nu under a static channel).
DenoiseResult time_average_estimate(const Eigen::MatrixXcd& window,
                                    const SketchMatrix& front_end, const DenoiseConfig& cfg);

} // namespace subsketch

#endif // SUBSKETCH_DENOISE_HPP
