// Operator-splitting (ADMM) engine for the two structured SDPs behind the
// estimators:
//
//   one-shot denoise:  min tr T(v) + gamma
//                      s.t. [[T(v), h], [h^H, gamma]] >= 0,  |x - B h|^2 <= eps
//
//   covariance fit:    min tr(B T B^H) + tr W
//                      s.t. [[B T B^H, X], [X^H, W]] >= 0,  T Toeplitz >= 0
//
// Both are solved by consensus splitting: the structured variables (Toeplitz
// column, channel vector, corner scalars) have closed-form updates, and the
// PSD constraints live on projected consensus copies. Residuals are relative;
// the penalty is rebalanced by factor 2 whenever primal/dual residuals drift
// apart by more than 5x, checked every 100 iterations during the first half
// of the iteration budget (an eventually constant penalty is required for
// convergence).

#ifndef SUBSKETCH_SDP_HPP
#define SUBSKETCH_SDP_HPP

#include <functional>

#include <Eigen/Dense>

namespace subsketch {

struct SolverConfig {
    double tolerance = 1e-6; // relative primal, dual, and objective-change target
    int max_iterations = 10000;
    double penalty = 1.0;         // initial ADMM step size rho
    bool adaptive_penalty = true; // residual balancing on/off
    // Optional per-iteration hook: (iteration, primal, dual, objective).
    std::function<void(int, double, double, double)> progress;
};

// Primal blocks plus the certificates produced at exit. Fields not used by a
// problem form stay empty (h, gamma for the covariance fit; noise_fit for the
// one-shot). `converged` implies primal/dual residuals <= tolerance; the PSD
// blocks are reported from the projected consensus copies, so
// psd_min_eigenvalue is nonnegative up to eigensolver roundoff.
struct SdpSolution {
    Eigen::VectorXcd h;            // denoised full-array channel (one-shot)
    Eigen::VectorXcd toeplitz_col; // first column of the Toeplitz block T
    double gamma = 0.0;            // corner scalar of the one-shot PSD block
    Eigen::MatrixXcd noise_fit;    // W block of the covariance fit
    double objective = 0.0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    double complementary_slackness = 0.0;
    double psd_min_eigenvalue = 0.0;
    int iterations = 0;
    bool converged = false;
};

// min tr T(v) + gamma  s.t.  [[T(v), h], [h^H, gamma]] >= 0, |x - B h|^2 <= eps.
// front_end must have orthonormal rows (checked to 1e-10); epsilon = 0 pins
// B h = x exactly.
struct OneShotProblem {
    Eigen::VectorXcd observation; // x, length m
    Eigen::MatrixXcd front_end;   // B, m x M
    double epsilon = 0.0;
};

// min tr(B T B^H) + tr W  s.t.  [[B T B^H, X], [X^H, W]] >= 0, T Toeplitz >= 0.
// reduced_data is the m x k window X (k = m after SVD reduction).
struct RmmvProblem {
    Eigen::MatrixXcd reduced_data; // X, m x k
    Eigen::MatrixXcd front_end;    // B, m x M
};

// Frobenius-nearest PSD matrix: symmetrize, clip negative eigenvalues.
Eigen::MatrixXcd project_psd(const Eigen::MatrixXcd& h);

// Frobenius-nearest Hermitian Toeplitz matrix: average each diagonal, then
// pair diagonal +k with the conjugate of diagonal -k.
Eigen::MatrixXcd project_hermitian_toeplitz(const Eigen::MatrixXcd& h);

// Hermitian Toeplitz matrix from its first column (imag part of col(0) is
// ignored).
Eigen::MatrixXcd hermitian_toeplitz(const Eigen::VectorXcd& first_col);

SdpSolution solve_sdp(const OneShotProblem& problem, const SolverConfig& cfg = {});
SdpSolution solve_sdp(const RmmvProblem& problem, const SolverConfig& cfg = {});

} // namespace subsketch

#endif // SUBSKETCH_SDP_HPP
