#include "subsketch/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

namespace subsketch {

namespace {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using std::complex;

MatrixXcd herm(const MatrixXcd& a) { return 0.5 * (a + a.adjoint()); }

// Re tr(A^H B), the real inner product under which the projections below are
// orthogonal.
double rinner(const MatrixXcd& a, const MatrixXcd& b) {
    return a.cwiseProduct(b.conjugate()).sum().real();
}

void check_config(const SolverConfig& cfg) {
    if (!(cfg.tolerance > 0.0)) throw std::invalid_argument("solver: tolerance must be > 0");
    if (cfg.max_iterations < 1)
        throw std::invalid_argument("solver: max_iterations must be >= 1");
    if (!(cfg.penalty > 0.0)) throw std::invalid_argument("solver: penalty must be > 0");
}

void check_front_end(const MatrixXcd& b) {
    if (b.rows() < 1 || b.rows() > b.cols())
        throw std::invalid_argument("solver: front end must be m x M with 1 <= m <= M");
    const MatrixXcd gram = b * b.adjoint();
    const double defect =
        (gram - MatrixXcd::Identity(b.rows(), b.rows())).cwiseAbs().maxCoeff();
    if (defect > 1e-10)
        throw std::invalid_argument("solver: front-end rows are not orthonormal");
}

double min_eigenvalue(const MatrixXcd& a) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(a, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success)
        throw std::runtime_error("solver: eigendecomposition failed");
    return eig.eigenvalues().minCoeff();
}

// |<Z, rho U>| normalized; zero up to roundoff by construction, since each
// PSD projection leaves Z and the updated U with orthogonal eigenspaces.
double slackness(const MatrixXcd& z, const MatrixXcd& u, double rho) {
    return std::abs(rinner(z, rho * u)) / std::max(1.0, z.norm() * rho * u.norm());
}

// Residual balancing (factor 2 once the ratio passes 5). The scaled dual
// variables absorb the change so the underlying multiplier rho*U is preserved.
// Adaptation runs on a cadence and only through the first half of the budget:
// spacing the kicks lets the fixed-penalty contraction act between them, and
// an eventually constant penalty is required for convergence (per-iteration
// kicks can sustain limit cycles near degenerate optima, e.g. a barely-active
// data-fit ball).
constexpr int kRebalanceEvery = 100;

bool rebalance_now(const SolverConfig& cfg, int iter) {
    return cfg.adaptive_penalty && iter % kRebalanceEvery == 0 &&
           2 * iter <= cfg.max_iterations;
}

template <typename... Duals>
void rebalance(bool enabled, double primal, double dual, double& rho, Duals&... duals) {
    if (!enabled) return;
    if (primal > 5.0 * dual && rho < 1e8) {
        rho *= 2.0;
        ((duals *= 0.5), ...);
    } else if (dual > 5.0 * primal && rho > 1e-8) {
        rho *= 0.5;
        ((duals *= 2.0), ...);
    }
}

void fill_hermitian_toeplitz(const VectorXcd& col, MatrixXcd& t) {
    const Eigen::Index m = col.size();
    t.resize(m, m);
    for (Eigen::Index j = 0; j < m; ++j) {
        t(j, j) = col(0).real();
        for (Eigen::Index i = j + 1; i < m; ++i) {
            t(i, j) = col(i - j);
            t(j, i) = std::conj(col(i - j));
        }
    }
}

} // namespace

Eigen::MatrixXcd project_psd(const Eigen::MatrixXcd& h) {
    if (h.rows() != h.cols()) throw std::invalid_argument("project_psd: matrix must be square");
    Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(herm(h));
    if (eig.info() != Eigen::Success)
        throw std::runtime_error("project_psd: eigendecomposition failed");
    const VectorXd clipped = eig.eigenvalues().cwiseMax(0.0);
    return eig.eigenvectors() * clipped.asDiagonal() * eig.eigenvectors().adjoint();
}

Eigen::MatrixXcd project_hermitian_toeplitz(const Eigen::MatrixXcd& h) {
    if (h.rows() != h.cols())
        throw std::invalid_argument("project_hermitian_toeplitz: matrix must be square");
    const Eigen::Index m = h.rows();
    VectorXcd col(m);
    for (Eigen::Index d = 0; d < m; ++d) {
        const complex<double> below = h.diagonal(-d).mean();
        const complex<double> above = h.diagonal(d).mean();
        col(d) = 0.5 * (below + std::conj(above));
    }
    MatrixXcd t;
    fill_hermitian_toeplitz(col, t);
    return t;
}

Eigen::MatrixXcd hermitian_toeplitz(const Eigen::VectorXcd& first_col) {
    if (first_col.size() < 1)
        throw std::invalid_argument("hermitian_toeplitz: empty first column");
    MatrixXcd t;
    fill_hermitian_toeplitz(first_col, t);
    return t;
}

// ----------------------------------------------------------------------------
// One-shot denoise.
//
// Split variables theta = (v, gamma, h) against one PSD consensus copy Z of
// S(theta) = [[T(v), h], [h^H, gamma]]. The theta update is separable:
// diagonal means for v (the linear cost tr T = M v0 shifts v0 by 1/rho), a
// shift for gamma, and for h the Euclidean projection of the consensus value
// onto {h : |B h - x|^2 <= eps} - exact because B has orthonormal rows, so
// the ball only constrains the in-row-space component u = B h.

namespace {

// Adjoint norm of the one-shot structure map: for Hermitian D, the gradient
// of <S(theta), D> in the (v0, Re v_d, Im v_d, Re h, Im h, gamma) coordinates.
double one_shot_adjoint_norm(const MatrixXcd& d, Eigen::Index m) {
    double sq = 0.0;
    double t0 = d.topLeftCorner(m, m).diagonal().real().sum();
    sq += t0 * t0;
    for (Eigen::Index k = 1; k < m; ++k) {
        const complex<double> sd = d.topLeftCorner(m, m).diagonal(-k).sum();
        sq += 4.0 * std::norm(sd);
    }
    sq += 4.0 * d.block(0, m, m, 1).squaredNorm();
    const double g = d(m, m).real();
    sq += g * g;
    return std::sqrt(sq);
}

} // namespace

SdpSolution solve_sdp(const OneShotProblem& problem, const SolverConfig& cfg) {
    check_config(cfg);
    check_front_end(problem.front_end);
    const Eigen::Index m = problem.front_end.rows();
    const Eigen::Index big_m = problem.front_end.cols();
    if (problem.observation.size() != m)
        throw std::invalid_argument("solver: observation length does not match front end");
    if (problem.epsilon < 0.0) throw std::invalid_argument("solver: epsilon must be >= 0");

    const MatrixXcd& b = problem.front_end;
    const VectorXcd& x = problem.observation;
    const Eigen::Index n = big_m + 1;
    double rho = cfg.penalty;

    MatrixXcd z = MatrixXcd::Zero(n, n);
    MatrixXcd u = MatrixXcd::Zero(n, n);
    MatrixXcd z_prev = z;
    MatrixXcd s(n, n);
    VectorXcd v = VectorXcd::Zero(big_m);
    VectorXcd h = VectorXcd::Zero(big_m);
    double gamma = 0.0;

    double objective = 0.0;
    double obj_prev = 0.0;
    double primal = std::numeric_limits<double>::infinity();
    double dual = std::numeric_limits<double>::infinity();
    bool converged = false;
    int iter = 0;

    while (iter < cfg.max_iterations) {
        ++iter;
        const MatrixXcd w = z - u;

        // theta update
        v(0) = std::max(0.0, w.topLeftCorner(big_m, big_m).diagonal().real().mean() - 1.0 / rho);
        for (Eigen::Index d = 1; d < big_m; ++d)
            v(d) = w.topLeftCorner(big_m, big_m).diagonal(-d).mean();
        gamma = std::max(0.0, w(big_m, big_m).real() - 1.0 / rho);
        const VectorXcd wh = w.block(0, big_m, big_m, 1);
        const VectorXcd bh = b * wh;
        VectorXcd inside = bh;
        const double dist2 = (bh - x).squaredNorm();
        if (dist2 > problem.epsilon) {
            inside = problem.epsilon == 0.0
                         ? x
                         : VectorXcd(x + (bh - x) * std::sqrt(problem.epsilon / dist2));
        }
        h = wh + b.adjoint() * (inside - bh);

        MatrixXcd t_block;
        fill_hermitian_toeplitz(v, t_block);
        s.topLeftCorner(big_m, big_m) = t_block;
        s.block(0, big_m, big_m, 1) = h;
        s.block(big_m, 0, 1, big_m) = h.adjoint();
        s(big_m, big_m) = gamma;
        objective = static_cast<double>(big_m) * v(0).real() + gamma;

        // consensus + dual update
        const MatrixXcd vmat = s + u;
        z = project_psd(vmat);
        u = vmat - z;

        primal = (s - z).norm() / std::max({1.0, s.norm(), z.norm()});
        const double dual_abs = rho * one_shot_adjoint_norm(z - z_prev, big_m);
        const double dual_ref = rho * one_shot_adjoint_norm(u, big_m);
        dual = dual_abs / std::max(1.0, dual_ref);
        const double obj_change =
            std::abs(objective - obj_prev) / std::max(1.0, std::abs(objective));
        if (cfg.progress) cfg.progress(iter, primal, dual, objective);
        if (primal <= cfg.tolerance && dual <= cfg.tolerance && obj_change <= cfg.tolerance) {
            converged = true;
            break;
        }
        obj_prev = objective;
        z_prev = z;
        rebalance(rebalance_now(cfg, iter), primal, dual, rho, u);
    }

    SdpSolution sol;
    sol.h = h;
    sol.toeplitz_col = v;
    sol.gamma = gamma;
    sol.objective = objective;
    sol.primal_residual = primal;
    sol.dual_residual = dual;
    sol.complementary_slackness = slackness(z, u, rho);
    sol.psd_min_eigenvalue = min_eigenvalue(z);
    sol.iterations = iter;
    sol.converged = converged;
    return sol;
}

// ----------------------------------------------------------------------------
// Covariance fit.
//
// Real Toeplitz coordinates tau in R^{2M-1}: t_0 = tau_0 (diagonal),
// t_d = tau_{2d-1} + i tau_{2d} (subdiagonal d). Structure maps
// A1(tau) = T(tau) and A2(theta) = [[B T B^H, X], [X^H, W]], each with its own
// PSD consensus copy. The tau update solves fixed normal equations
// (G_D + G_P) tau = rhs whose matrix is rho-independent, so it is factored
// once: G_D is the diagonal Gram of the Toeplitz basis, G_P the Gram of its
// images P_a = B D_a B^H.

namespace {

struct ToeplitzBasis {
    Eigen::Index big_m = 0;
    Eigen::Index m = 0;
    std::vector<MatrixXcd> images; // P_a, 2M-1 Hermitian m x m matrices
    VectorXd cost;                 // objective coefficients c_a = tr(D_a B^H B)
    Eigen::LDLT<MatrixXd> normal;  // factorization of G_D + G_P

    explicit ToeplitzBasis(const MatrixXcd& b) {
        big_m = b.cols();
        m = b.rows();
        const Eigen::Index n = 2 * big_m - 1;
        images.reserve(n);
        images.push_back(MatrixXcd::Identity(m, m)); // B I B^H with orthonormal rows
        for (Eigen::Index d = 1; d < big_m; ++d) {
            // B J_d B^H where J_d carries ones on subdiagonal d.
            const MatrixXcd k =
                b.middleCols(d, big_m - d) * b.leftCols(big_m - d).adjoint();
            images.push_back(k + k.adjoint());
            images.push_back(complex<double>(0, 1) * (k - k.adjoint()));
        }

        const MatrixXcd gram = b.adjoint() * b;
        cost.resize(n);
        cost(0) = gram.trace().real();
        for (Eigen::Index d = 1; d < big_m; ++d) {
            const complex<double> gd = gram.diagonal(-d).sum();
            cost(2 * d - 1) = 2.0 * gd.real();
            cost(2 * d) = 2.0 * gd.imag();
        }

        MatrixXd a = MatrixXd::Zero(n, n);
        a(0, 0) = static_cast<double>(big_m);
        for (Eigen::Index d = 1; d < big_m; ++d) {
            a(2 * d - 1, 2 * d - 1) = 2.0 * static_cast<double>(big_m - d);
            a(2 * d, 2 * d) = 2.0 * static_cast<double>(big_m - d);
        }
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = i; j < n; ++j) {
                const double g = rinner(images[i], images[j]);
                a(i, j) += g;
                if (j > i) a(j, i) += g;
            }
        normal.compute(a);
        if (normal.info() != Eigen::Success)
            throw std::runtime_error("solver: normal-equation factorization failed");
    }

    // <D_a, d1> + <P_a, d2>, the tau block of the structure-map adjoint.
    VectorXd adjoint(const MatrixXcd& d1, const MatrixXcd& d2) const {
        VectorXd out(2 * big_m - 1);
        out(0) = d1.diagonal().real().sum() + rinner(images[0], d2);
        for (Eigen::Index d = 1; d < big_m; ++d) {
            const complex<double> sd = d1.diagonal(-d).sum();
            out(2 * d - 1) = 2.0 * sd.real() + rinner(images[2 * d - 1], d2);
            out(2 * d) = 2.0 * sd.imag() + rinner(images[2 * d], d2);
        }
        return out;
    }

    VectorXcd column(const VectorXd& tau) const {
        VectorXcd col(big_m);
        col(0) = tau(0);
        for (Eigen::Index d = 1; d < big_m; ++d)
            col(d) = complex<double>(tau(2 * d - 1), tau(2 * d));
        return col;
    }
};

} // namespace

SdpSolution solve_sdp(const RmmvProblem& problem, const SolverConfig& cfg) {
    check_config(cfg);
    check_front_end(problem.front_end);
    const Eigen::Index m = problem.front_end.rows();
    const Eigen::Index big_m = problem.front_end.cols();
    const Eigen::Index k = problem.reduced_data.cols();
    if (problem.reduced_data.rows() != m)
        throw std::invalid_argument("solver: reduced data rows do not match front end");
    if (k < 1) throw std::invalid_argument("solver: reduced data has no columns");

    const MatrixXcd& b = problem.front_end;
    const MatrixXcd& x = problem.reduced_data;
    const ToeplitzBasis basis(b);
    const Eigen::Index n2 = m + k;
    double rho = cfg.penalty;

    MatrixXcd z1 = MatrixXcd::Zero(big_m, big_m), u1 = z1, z1_prev = z1;
    MatrixXcd z2 = MatrixXcd::Zero(n2, n2), u2 = z2, z2_prev = z2;
    MatrixXcd a2(n2, n2);
    MatrixXcd t(big_m, big_m);
    MatrixXcd wfit = MatrixXcd::Zero(k, k);
    VectorXd tau = VectorXd::Zero(2 * big_m - 1);

    double objective = 0.0;
    double obj_prev = 0.0;
    double primal = std::numeric_limits<double>::infinity();
    double dual = std::numeric_limits<double>::infinity();
    bool converged = false;
    int iter = 0;

    while (iter < cfg.max_iterations) {
        ++iter;
        const MatrixXcd w1 = z1 - u1;
        const MatrixXcd w2 = z2 - u2;

        // theta update: W block shifts by I/rho, tau solves the prefactored
        // normal equations against both consensus targets.
        wfit = herm(w2.bottomRightCorner(k, k));
        wfit.diagonal().array() -= 1.0 / rho;
        const VectorXd rhs =
            basis.adjoint(w1, herm(w2.topLeftCorner(m, m))) - basis.cost / rho;
        tau = basis.normal.solve(rhs);

        fill_hermitian_toeplitz(basis.column(tau), t);
        a2.topLeftCorner(m, m) = herm(b * t * b.adjoint());
        a2.block(0, m, m, k) = x;
        a2.block(m, 0, k, m) = x.adjoint();
        a2.bottomRightCorner(k, k) = wfit;
        objective = basis.cost.dot(tau) + wfit.trace().real();

        const MatrixXcd v1 = t + u1;
        z1 = project_psd(v1);
        u1 = v1 - z1;
        const MatrixXcd v2 = a2 + u2;
        z2 = project_psd(v2);
        u2 = v2 - z2;

        const double primal_abs =
            std::sqrt((t - z1).squaredNorm() + (a2 - z2).squaredNorm());
        const double norm_a = std::sqrt(t.squaredNorm() + a2.squaredNorm());
        const double norm_z = std::sqrt(z1.squaredNorm() + z2.squaredNorm());
        primal = primal_abs / std::max({1.0, norm_a, norm_z});

        const VectorXd adj_tau =
            basis.adjoint(z1 - z1_prev, (z2 - z2_prev).topLeftCorner(m, m));
        const double dual_abs =
            rho * std::sqrt(adj_tau.squaredNorm() +
                            (z2 - z2_prev).bottomRightCorner(k, k).squaredNorm());
        const VectorXd ref_tau = basis.adjoint(u1, u2.topLeftCorner(m, m));
        const double dual_ref =
            rho * std::sqrt(ref_tau.squaredNorm() +
                            u2.bottomRightCorner(k, k).squaredNorm());
        dual = dual_abs / std::max(1.0, dual_ref);

        const double obj_change =
            std::abs(objective - obj_prev) / std::max(1.0, std::abs(objective));
        if (cfg.progress) cfg.progress(iter, primal, dual, objective);
        if (primal <= cfg.tolerance && dual <= cfg.tolerance && obj_change <= cfg.tolerance) {
            converged = true;
            break;
        }
        obj_prev = objective;
        z1_prev = z1;
        z2_prev = z2;
        rebalance(rebalance_now(cfg, iter), primal, dual, rho, u1, u2);
    }

    SdpSolution sol;
    sol.toeplitz_col = basis.column(tau);
    sol.noise_fit = wfit;
    sol.objective = objective;
    sol.primal_residual = primal;
    sol.dual_residual = dual;
    sol.complementary_slackness = std::max(slackness(z1, u1, rho), slackness(z2, u2, rho));
    sol.psd_min_eigenvalue = std::min(min_eigenvalue(z1), min_eigenvalue(z2));
    sol.iterations = iter;
    sol.converged = converged;
    return sol;
}

} // namespace subsketch
