#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace shockamr {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Sparse matrix of dense m x m blocks on a CSR pattern over conforming dofs.
/// Blocks are stored row-major and contiguous.
class BlockSparseMatrix {
 public:
  BlockSparseMatrix() = default;
  BlockSparseMatrix(const std::vector<std::size_t>& row_ptr, const std::vector<std::size_t>& col,
                    int m)
      : ptr_(&row_ptr), col_(&col), m_(m), values_(col.size() * m * m, 0.0) {}

  int m() const { return m_; }
  std::size_t rows() const { return ptr_ ? ptr_->size() - 1 : 0; }
  std::size_t nnz_blocks() const { return col_ ? col_->size() : 0; }
  std::size_t row_begin(std::size_t i) const { return (*ptr_)[i]; }
  std::size_t row_end(std::size_t i) const { return (*ptr_)[i + 1]; }
  std::size_t col(std::size_t e) const { return (*col_)[e]; }
  /// Entry index of block (i, j) or npos.
  std::size_t find(std::size_t i, std::size_t j) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  double* block(std::size_t e) { return values_.data() + e * m_ * m_; }
  const double* block(std::size_t e) const { return values_.data() + e * m_ * m_; }
  double& operator()(std::size_t e, int r, int c) { return values_[(e * m_ + r) * m_ + c]; }
  double operator()(std::size_t e, int r, int c) const { return values_[(e * m_ + r) * m_ + c]; }

  void set_zero() { std::fill(values_.begin(), values_.end(), 0.0); }
  Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;
  SparseMatrix to_sparse() const;
  Eigen::MatrixXd to_dense() const;

 private:
  const std::vector<std::size_t>* ptr_ = nullptr;
  const std::vector<std::size_t>* col_ = nullptr;
  int m_ = 1;
  std::vector<double> values_;
};

}  // namespace shockamr
