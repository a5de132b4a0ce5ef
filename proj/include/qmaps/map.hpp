#pragma once

#include <utility>

#include "qmaps/types.hpp"

namespace qmaps {

// Shape of a linear map between matrix spaces: inputs are in_rows x in_cols
// matrices, outputs out_rows x out_cols. Maps on a matrix algebra M_n have
// all four equal to n; corner blocks map one rectangular space to another.
struct MapShape {
  Index in_rows = 0;
  Index in_cols = 0;
  Index out_rows = 0;
  Index out_cols = 0;

  Index in_dim() const { return in_rows * in_cols; }
  Index out_dim() const { return out_rows * out_cols; }
  bool endo() const { return in_rows == out_rows && in_cols == out_cols; }
  bool algebra() const { return in_rows == in_cols && out_rows == out_cols; }
  bool operator==(const MapShape&) const = default;
};

// A linear map between matrix spaces, stored as its action on column-stacked
// matrices: an (out_dim x in_dim) matrix with vec(f(A)) = action * vec(A).
class MatrixMap {
 public:
  MatrixMap() = default;
  MatrixMap(MapShape shape, CMatrix action);

  // Map on a matrix algebra, M_n -> M_m, action is (m^2 x n^2).
  static MatrixMap algebra_map(Index n, Index m, CMatrix action);

  static MatrixMap identity(Index rows, Index cols);
  static MatrixMap zero(MapShape shape);

  // Build the action column by column from a callable on matrix units.
  template <class F>
  static MatrixMap from_function(MapShape shape, F&& f) {
    CMatrix action(shape.out_dim(), shape.in_dim());
    for (Index j = 0; j < shape.in_cols; ++j)
      for (Index i = 0; i < shape.in_rows; ++i) {
        const CMatrix out = f(matrix_unit(shape.in_rows, shape.in_cols, i, j));
        action.col(j * shape.in_rows + i) = vec(out);
      }
    return MatrixMap(shape, std::move(action));
  }

  CMatrix apply(const CMatrix& a) const;

  const CMatrix& action() const { return action_; }
  const MapShape& shape() const { return shape_; }

  // this after inner: (f.compose(g))(A) = f(g(A)).
  MatrixMap compose(const MatrixMap& inner) const;

  // The conjugate map C -> f(C*)*, input/output spaces transposed. Composing
  // it into the lower-left block of a 2x2 block map keeps the whole map
  // Hermiticity-preserving.
  MatrixMap conjugate_transpose_map() const;

  MatrixMap operator*(Complex c) const { return MatrixMap(shape_, CMatrix(action_ * c)); }
  MatrixMap operator+(const MatrixMap& other) const;
  MatrixMap operator-(const MatrixMap& other) const;

  // Operator-norm distance between actions; the standing measure of map equality.
  double distance(const MatrixMap& other) const;
  double norm() const { return op_norm(action_); }

 private:
  MapShape shape_;
  CMatrix action_;
};

}  // namespace qmaps
