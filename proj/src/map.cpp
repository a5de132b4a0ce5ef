#include "qmaps/map.hpp"

namespace qmaps {

MatrixMap::MatrixMap(MapShape shape, CMatrix action) : shape_(shape), action_(std::move(action)) {
  require(action_.rows() == shape_.out_dim() && action_.cols() == shape_.in_dim(),
          Err::DimensionMismatch, "action matrix does not match the declared shape");
  require_finite(action_, "map action");
}

MatrixMap MatrixMap::algebra_map(Index n, Index m, CMatrix action) {
  return MatrixMap({n, n, m, m}, std::move(action));
}

MatrixMap MatrixMap::identity(Index rows, Index cols) {
  const MapShape shape{rows, cols, rows, cols};
  return MatrixMap(shape, CMatrix::Identity(shape.in_dim(), shape.in_dim()));
}

MatrixMap MatrixMap::zero(MapShape shape) {
  return MatrixMap(shape, CMatrix::Zero(shape.out_dim(), shape.in_dim()));
}

CMatrix MatrixMap::apply(const CMatrix& a) const {
  require(a.rows() == shape_.in_rows && a.cols() == shape_.in_cols, Err::DimensionMismatch,
          "apply: input has the wrong shape");
  return unvec(action_ * vec(a), shape_.out_rows, shape_.out_cols);
}

MatrixMap MatrixMap::compose(const MatrixMap& inner) const {
  require(inner.shape_.out_rows == shape_.in_rows && inner.shape_.out_cols == shape_.in_cols,
          Err::DimensionMismatch, "compose: shapes do not chain");
  const MapShape shape{inner.shape_.in_rows, inner.shape_.in_cols, shape_.out_rows,
                       shape_.out_cols};
  return MatrixMap(shape, CMatrix(action_ * inner.action_));
}

MatrixMap MatrixMap::conjugate_transpose_map() const {
  const MapShape shape{shape_.in_cols, shape_.in_rows, shape_.out_cols, shape_.out_rows};
  return from_function(shape, [this](const CMatrix& c) -> CMatrix {
    return apply(c.adjoint()).adjoint();
  });
}

MatrixMap MatrixMap::operator+(const MatrixMap& other) const {
  require(shape_ == other.shape_, Err::DimensionMismatch, "map sum: shape mismatch");
  return MatrixMap(shape_, CMatrix(action_ + other.action_));
}

MatrixMap MatrixMap::operator-(const MatrixMap& other) const {
  require(shape_ == other.shape_, Err::DimensionMismatch, "map difference: shape mismatch");
  return MatrixMap(shape_, CMatrix(action_ - other.action_));
}

double MatrixMap::distance(const MatrixMap& other) const {
  require(shape_ == other.shape_, Err::DimensionMismatch, "map distance: shape mismatch");
  return op_norm(action_ - other.action_);
}

}  // namespace qmaps
