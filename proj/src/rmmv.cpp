#include "subsketch/rmmv.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace subsketch {

SketchWindow::SketchWindow(Eigen::MatrixXcd columns) : data_(std::move(columns)) {
    if (data_.rows() < 1 || data_.cols() < 1)
        throw std::invalid_argument("SketchWindow: need at least one row and one snapshot");
}

Eigen::MatrixXcd sample_covariance(const SketchWindow& window) {
    const Eigen::MatrixXcd& x = window.data();
    return (x * x.adjoint()) / static_cast<double>(window.snapshots());
}

Eigen::MatrixXcd reduce_window(const SketchWindow& window) {
    const Eigen::MatrixXcd& x = window.data();
    const int m = window.rows();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(x, Eigen::ComputeThinU);
    if (svd.info() != Eigen::Success) throw std::runtime_error("reduce_window: SVD failed");
    // X V_m = U_m diag(s_m); columns past the rank (or past nu) stay zero.
    const int keep = std::min<int>(m, static_cast<int>(svd.singularValues().size()));
    Eigen::MatrixXcd reduced = Eigen::MatrixXcd::Zero(m, m);
    reduced.leftCols(keep) =
        svd.matrixU().leftCols(keep) * svd.singularValues().head(keep).asDiagonal();
    return reduced;
}

RmmvResult rmmv_fit(const Eigen::MatrixXcd& reduced, const SketchMatrix& front_end,
                    const SolverConfig& solver) {
    RmmvProblem problem;
    problem.reduced_data = reduced;
    problem.front_end = front_end.matrix();
    RmmvResult result;
    result.solution = solve_sdp(problem, solver);
    result.covariance = hermitian_toeplitz(result.solution.toeplitz_col);
    return result;
}

RankRule RankRule::known(int rank) {
    if (rank < 1) throw std::invalid_argument("RankRule: rank must be >= 1");
    RankRule rule;
    rule.kind = Kind::known;
    rule.rank = rank;
    return rule;
}

RankRule RankRule::eigengap(double threshold) {
    if (!(threshold > 0.0) || threshold >= 1.0)
        throw std::invalid_argument("RankRule: threshold must be in (0, 1)");
    RankRule rule;
    rule.kind = Kind::eigengap;
    rule.threshold = threshold;
    return rule;
}

SubspaceEstimate extract_subspace(const Eigen::MatrixXcd& covariance, const RankRule& rule) {
    if (covariance.rows() != covariance.cols())
        throw std::invalid_argument("extract_subspace: covariance must be square");
    const int n = static_cast<int>(covariance.rows());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(covariance);
    if (eig.info() != Eigen::Success)
        throw std::runtime_error("extract_subspace: eigendecomposition failed");

    int rank = 0;
    if (rule.kind == RankRule::Kind::known) {
        if (rule.rank > n)
            throw std::invalid_argument("extract_subspace: requested rank exceeds dimension");
        rank = rule.rank;
    } else {
        const double top = eig.eigenvalues()(n - 1);
        if (top > 0.0)
            for (int i = n - 1; i >= 0 && eig.eigenvalues()(i) > rule.threshold * top; --i)
                ++rank;
    }
    if (rank == 0) throw std::runtime_error("extract_subspace: no signal detected");

    // Eigen sorts ascending; flip the top block to descending order.
    SubspaceEstimate est;
    est.basis.resize(n, rank);
    est.eigenvalues.resize(rank);
    for (int i = 0; i < rank; ++i) {
        est.basis.col(i) = eig.eigenvectors().col(n - 1 - i);
        est.eigenvalues(i) = eig.eigenvalues()(n - 1 - i);
    }
    return est;
}

SubspaceLsResult subspace_ls_estimate(const Eigen::VectorXcd& x, const SketchMatrix& front_end,
                                      const Eigen::MatrixXcd& basis) {
    if (basis.rows() != front_end.antennas())
        throw std::invalid_argument("subspace_ls_estimate: basis rows must match antennas");
    if (basis.cols() < 1) throw std::invalid_argument("subspace_ls_estimate: empty basis");
    if (x.size() != front_end.rows())
        throw std::invalid_argument("subspace_ls_estimate: observation length mismatch");

    const Eigen::MatrixXcd a = front_end.matrix() * basis; // m x p
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success)
        throw std::runtime_error("subspace_ls_estimate: SVD failed");

    const auto& s = svd.singularValues();
    const double cutoff = std::max(a.rows(), a.cols()) *
                          std::numeric_limits<double>::epsilon() * (s.size() ? s(0) : 0.0);
    SubspaceLsResult result;
    Eigen::VectorXcd w = Eigen::VectorXcd::Zero(basis.cols());
    int rank = 0;
    const Eigen::VectorXcd proj = svd.matrixU().adjoint() * x;
    for (int i = 0; i < s.size(); ++i) {
        if (s(i) > cutoff) {
            w += svd.matrixV().col(i) * (proj(i) / s(i));
            ++rank;
        }
    }
    result.weights = w;
    result.estimate = basis * w;
    result.rank_deficient = rank < basis.cols();
    return result;
}

} // namespace subsketch
