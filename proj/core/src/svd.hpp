#pragma once

// Thin SVD used by every solver. Eigen's divide-and-conquer BDCSVD is fast
// but (as shipped in 3.4.0) can trip an internal index assertion during
// deflation; the wrapper detects that, checks the factorization, and falls
// back to JacobiSVD.

#include <Eigen/Dense>

namespace tvgs::detail {

struct Svd {
  Eigen::MatrixXd u;  // m x k
  Eigen::VectorXd s;  // k, descending
  Eigen::MatrixXd v;  // n x k
};

Svd thin_svd(const Eigen::MatrixXd& a);
Eigen::VectorXd singular_values(const Eigen::MatrixXd& a);

}  // namespace tvgs::detail
