#include "zomd/types.hpp"

namespace zomd {

Matrix random_orthogonal(Index d, std::uint64_t seed) {
  Rng rng(seed);
  Matrix g(d, d);
  for (Index j = 0; j < d; ++j)
    for (Index i = 0; i < d; ++i) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < d; ++j) {
    if (r(j, j) < 0) q.col(j) *= -1.0;
  }
  return q;
}

}  // namespace zomd
