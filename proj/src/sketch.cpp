#include "subsketch/sketch.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace subsketch {

SketchMatrix SketchMatrix::random_selection(int rows, int antennas, Rng& rng) {
    if (rows < 1 || rows > antennas)
        throw std::invalid_argument("random_selection: need 1 <= rows <= antennas");
    return make_selection(rng.sample_without_replacement(antennas, rows), antennas,
                          SketchKind::random_selection);
}

std::pair<int, int> coprime_pair(int antennas) {
    if (antennas < 4) throw std::invalid_argument("coprime_pair: need at least 4 antennas");
    int best_q = 0, best_r = 0;
    for (int q = 2; q + 1 <= antennas; ++q) {
        // Once even the always-coprime (q, q+1) cannot beat the incumbent sum,
        // no larger q can either.
        if (best_q != 0 && 2 * q + 1 > best_q + best_r) break;
        int r = std::max(q + 1, (antennas + q - 1) / q);
        while (std::gcd(q, r) != 1) ++r;
        if (best_q == 0 || q + r < best_q + best_r) {
            best_q = q;
            best_r = r;
        }
    }
    return {best_q, best_r};
}

SketchMatrix SketchMatrix::coprime_selection(int antennas) {
    const auto [q, r] = coprime_pair(antennas);
    std::set<int> picked;
    for (int i = 0; i * q < antennas; ++i) picked.insert(i * q);
    for (int j = 0; j * r < antennas; ++j) picked.insert(j * r);
    return make_selection(std::vector<int>(picked.begin(), picked.end()), antennas,
                          SketchKind::coprime_selection);
}

SketchMatrix SketchMatrix::selection(std::vector<int> indices, int antennas) {
    std::sort(indices.begin(), indices.end());
    return make_selection(std::move(indices), antennas, SketchKind::random_selection);
}

SketchMatrix SketchMatrix::make_selection(std::vector<int> indices, int antennas,
                                          SketchKind kind) {
    if (indices.empty()) throw std::invalid_argument("selection: no antennas selected");
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(static_cast<int>(indices.size()), antennas);
    int prev = -1;
    for (std::size_t row = 0; row < indices.size(); ++row) {
        const int idx = indices[row];
        if (idx < 0 || idx >= antennas)
            throw std::invalid_argument("selection: antenna index out of range");
        if (idx == prev) throw std::invalid_argument("selection: duplicate antenna index");
        prev = idx;
        b(static_cast<int>(row), idx) = 1.0;
    }
    return SketchMatrix(std::move(b), kind, std::move(indices));
}

SketchMatrix SketchMatrix::from_rows(Eigen::MatrixXcd rows) {
    if (rows.rows() < 1 || rows.rows() > rows.cols())
        throw std::invalid_argument("from_rows: need 1 <= m <= M");
    const Eigen::MatrixXcd gram = rows * rows.adjoint();
    const double defect =
        (gram - Eigen::MatrixXcd::Identity(rows.rows(), rows.rows())).cwiseAbs().maxCoeff();
    if (defect > 1e-12)
        throw std::invalid_argument("from_rows: rows are not orthonormal");
    return SketchMatrix(std::move(rows), SketchKind::generic_orthonormal, {});
}

Eigen::VectorXcd SketchMatrix::apply(const Eigen::VectorXcd& y) const {
    if (y.size() != antennas())
        throw std::invalid_argument("sketch: observation length does not match antenna count");
    return matrix_ * y;
}

Eigen::MatrixXcd SketchMatrix::apply(const Eigen::MatrixXcd& columns) const {
    if (columns.rows() != antennas())
        throw std::invalid_argument("sketch: observation length does not match antenna count");
    return matrix_ * columns;
}

Eigen::VectorXcd sketch(const SketchMatrix& front_end, const Eigen::VectorXcd& y) {
    return front_end.apply(y);
}

} // namespace subsketch
