// Multi-snapshot subspace estimation: compress the sketch window to an m x m
// matrix with the same Gram, fit a Toeplitz PSD covariance to it via the
// reduced-MMV SDP, extract the dominant subspace, and refine the current
// observation by least squares inside that subspace.

#ifndef SUBSKETCH_RMMV_HPP
#define SUBSKETCH_RMMV_HPP

#include <Eigen/Dense>

#include "subsketch/sdp.hpp"
#include "subsketch/sketch.hpp"

namespace subsketch {

// A window of nu sketched observations; column i is x^(i), all produced by
// the same front end.
struct SketchWindow {
    explicit SketchWindow(Eigen::MatrixXcd columns);

    const Eigen::MatrixXcd& data() const { return data_; }
    int rows() const { return static_cast<int>(data_.rows()); }
    int snapshots() const { return static_cast<int>(data_.cols()); }

  private:
    Eigen::MatrixXcd data_;
};

// (1/nu) X X^H, Hermitian PSD by construction.
Eigen::MatrixXcd sample_covariance(const SketchWindow& window);

// X V_m for the first m right singular vectors of X, zero-padded to m x m
// when rank (or nu) is below m. Preserves the Gram: X~ X~^H = X X^H.
Eigen::MatrixXcd reduce_window(const SketchWindow& window);

struct RmmvResult {
    Eigen::MatrixXcd covariance; // fitted M x M Hermitian Toeplitz T
    SdpSolution solution;
};

// Fits the structured covariance to the reduced window:
// min tr(B T B^H) + tr W  s.t.  [[B T B^H, X~], [X~^H, W]] >= 0, T Toeplitz >= 0.
RmmvResult rmmv_fit(const Eigen::MatrixXcd& reduced, const SketchMatrix& front_end,
                    const SolverConfig& solver = {});

// How many dominant eigenvectors to keep: a known model order, or every
// eigenvalue above a fraction of the largest.
struct RankRule {
    enum class Kind { known, eigengap };

    static RankRule known(int rank);
    static RankRule eigengap(double threshold = 0.05);

    Kind kind = Kind::known;
    int rank = 1;
    double threshold = 0.05;
};

struct SubspaceEstimate {
    Eigen::MatrixXcd basis;     // M x p, orthonormal columns
    Eigen::VectorXd eigenvalues; // the p retained eigenvalues, descending
};

// Dominant eigenvectors of a Hermitian (PSD up to solver tolerance)
// covariance. Throws when the rule selects rank 0 (no signal detected).
SubspaceEstimate extract_subspace(const Eigen::MatrixXcd& covariance, const RankRule& rule);

struct SubspaceLsResult {
    Eigen::VectorXcd estimate; // U w, lies in span(U)
    Eigen::VectorXcd weights;  // minimum-norm w
    bool rank_deficient = false;
};

// w = argmin |x - B U w|^2 (minimum-norm solution via SVD), h = U w. Sets
// rank_deficient when B U loses column rank (degenerate geometry).
SubspaceLsResult subspace_ls_estimate(const Eigen::VectorXcd& x, const SketchMatrix& front_end,
                                      const Eigen::MatrixXcd& basis);

} // namespace subsketch

#endif // SUBSKETCH_RMMV_HPP
