// The m x M analog front-end projection. Rows are orthonormal, so sketched
// white noise stays white: B n ~ CN(0, sigma^2 I_m).

#ifndef SUBSKETCH_SKETCH_HPP
#define SUBSKETCH_SKETCH_HPP

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "subsketch/rng.hpp"

namespace subsketch {

enum class SketchKind { random_selection, coprime_selection, generic_orthonormal };

class SketchMatrix {
  public:
    // Selects `rows` distinct antennas uniformly at random; each row of the
    // resulting matrix has a single 1.
    static SketchMatrix random_selection(int rows, int antennas, Rng& rng);

    // Selects all multiples of q and of r below M, where (q, r) is the
    // coprime pair from coprime_pair(M). Roughly 2 sqrt(M) rows.
    static SketchMatrix coprime_selection(int antennas);

    // Selection at explicit (distinct, in-range) antenna indices.
    static SketchMatrix selection(std::vector<int> indices, int antennas);

    // Arbitrary matrix with orthonormal rows (validated to 1e-12).
    static SketchMatrix from_rows(Eigen::MatrixXcd rows);

    const Eigen::MatrixXcd& matrix() const { return matrix_; }
    int rows() const { return static_cast<int>(matrix_.rows()); }
    int antennas() const { return static_cast<int>(matrix_.cols()); }
    SketchKind kind() const { return kind_; }

    // Selected antenna indices; empty for generic_orthonormal.
    const std::vector<int>& selected() const { return selected_; }

    Eigen::VectorXcd apply(const Eigen::VectorXcd& y) const;
    Eigen::MatrixXcd apply(const Eigen::MatrixXcd& columns) const;

  private:
    SketchMatrix(Eigen::MatrixXcd matrix, SketchKind kind, std::vector<int> selected)
        : matrix_(std::move(matrix)), kind_(kind), selected_(std::move(selected)) {}

    static SketchMatrix make_selection(std::vector<int> indices, int antennas, SketchKind kind);

    Eigen::MatrixXcd matrix_;
    SketchKind kind_;
    std::vector<int> selected_;
};

// x = B y.
Eigen::VectorXcd sketch(const SketchMatrix& front_end, const Eigen::VectorXcd& y);

// Smallest coprime pair q < r (q >= 2) with q * r >= M; ties on q + r break
// toward the smaller q. Requires M >= 4.
std::pair<int, int> coprime_pair(int antennas);

} // namespace subsketch

#endif // SUBSKETCH_SKETCH_HPP
