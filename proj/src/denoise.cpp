#include "subsketch/denoise.hpp"

#include <stdexcept>

namespace subsketch {

double default_epsilon(int sketch_rows, double noise_variance) {
    if (sketch_rows < 1) throw std::invalid_argument("default_epsilon: need at least one row");
    if (noise_variance < 0.0)
        throw std::invalid_argument("default_epsilon: negative noise variance");
    return sketch_rows * noise_variance;
}

DenoiseResult atomic_denoise(const Eigen::VectorXcd& x, const SketchMatrix& front_end,
                             const DenoiseConfig& cfg) {
    if (cfg.epsilon < 0.0) throw std::invalid_argument("atomic_denoise: epsilon must be >= 0");
    OneShotProblem problem;
    problem.observation = x;
    problem.front_end = front_end.matrix();
    problem.epsilon = cfg.epsilon;
    DenoiseResult result;
    result.solution = solve_sdp(problem, cfg.solver);
    result.estimate = result.solution.h;
    return result;
}

DenoiseResult time_average_estimate(const Eigen::MatrixXcd& window,
                                    const SketchMatrix& front_end, const DenoiseConfig& cfg) {
    if (window.cols() < 1)
        throw std::invalid_argument("time_average_estimate: empty window");
    const Eigen::VectorXcd mean = window.rowwise().mean();
    DenoiseConfig scaled = cfg;
    scaled.epsilon = cfg.epsilon / static_cast<double>(window.cols());
    return atomic_denoise(mean, front_end, scaled);
}

} // namespace subsketch
