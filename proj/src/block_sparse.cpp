#include "shockamr/block_sparse.hpp"

#include <algorithm>

namespace shockamr {

std::size_t BlockSparseMatrix::find(std::size_t i, std::size_t j) const {
  auto first = col_->begin() + static_cast<std::ptrdiff_t>((*ptr_)[i]);
  auto last = col_->begin() + static_cast<std::ptrdiff_t>((*ptr_)[i + 1]);
  auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return npos;
  return static_cast<std::size_t>(it - col_->begin());
}

Eigen::VectorXd BlockSparseMatrix::multiply(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rows() * m_));
  for (std::size_t i = 0; i < rows(); ++i)
    for (std::size_t e = row_begin(i); e < row_end(i); ++e) {
      const std::size_t j = col(e);
      for (int r = 0; r < m_; ++r) {
        double s = 0.0;
        for (int c = 0; c < m_; ++c) s += (*this)(e, r, c) * x[static_cast<Eigen::Index>(j * m_ + c)];
        y[static_cast<Eigen::Index>(i * m_ + r)] += s;
      }
    }
  return y;
}

SparseMatrix BlockSparseMatrix::to_sparse() const {
  const auto n = static_cast<Eigen::Index>(rows() * m_);
  SparseMatrix A(n, n);
  Eigen::VectorXi per_row(n);
  for (std::size_t i = 0; i < rows(); ++i)
    for (int r = 0; r < m_; ++r)
      per_row[static_cast<Eigen::Index>(i * m_ + r)] = static_cast<int>((row_end(i) - row_begin(i)) * m_);
  A.reserve(per_row);
  for (std::size_t i = 0; i < rows(); ++i)
    for (int r = 0; r < m_; ++r)
      for (std::size_t e = row_begin(i); e < row_end(i); ++e)
        for (int c = 0; c < m_; ++c)
          A.insert(static_cast<Eigen::Index>(i * m_ + r), static_cast<Eigen::Index>(col(e) * m_ + c)) =
              (*this)(e, r, c);
  A.makeCompressed();
  return A;
}

Eigen::MatrixXd BlockSparseMatrix::to_dense() const {
  return Eigen::MatrixXd(to_sparse());
}

}  // namespace shockamr
