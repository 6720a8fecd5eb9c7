// Eigen assertions are turned into exceptions in this translation unit only,
// so a failed internal check inside BDCSVD becomes a recoverable event
// instead of an out-of-bounds read in release builds.
#include <stdexcept>

namespace tvgs::detail {
struct EigenAssertion : std::logic_error {
  using std::logic_error::logic_error;
};
}  // namespace tvgs::detail

#define eigen_assert(x) \
  do {                  \
    if (!(x)) throw ::tvgs::detail::EigenAssertion(#x); \
  } while (false)

#include "svd.hpp"

#include <algorithm>

namespace tvgs::detail {

namespace {

Svd jacobi(const Eigen::MatrixXd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXd> j(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {j.matrixU(), j.singularValues(), j.matrixV()};
}

bool plausible(const Eigen::MatrixXd& a, const Svd& f) {
  if (!f.s.allFinite() || !f.u.allFinite() || !f.v.allFinite()) return false;
  const double scale = std::max(a.norm(), 1e-300);
  return (a - f.u * f.s.asDiagonal() * f.v.transpose()).norm() <= 1e-10 * scale;
}

}  // namespace

Svd thin_svd(const Eigen::MatrixXd& a) {
  if (a.size() == 0) {
    Svd out;
    out.u.resize(a.rows(), 0);
    out.v.resize(a.cols(), 0);
    return out;
  }
  try {
    Eigen::BDCSVD<Eigen::MatrixXd> b(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Svd out{b.matrixU(), b.singularValues(), b.matrixV()};
    if (plausible(a, out)) return out;
  } catch (const EigenAssertion&) {
  }
  return jacobi(a);
}

Eigen::VectorXd singular_values(const Eigen::MatrixXd& a) {
  if (a.size() == 0) return {};
  return thin_svd(a).s;
}

}  // namespace tvgs::detail
