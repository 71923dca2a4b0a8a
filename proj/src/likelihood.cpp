#include "mta/likelihood.hpp"

#include "mta/error.hpp"

#include <cmath>
#include <numbers>

namespace mta {

LikelihoodField binary_likelihood_field(const DataMatrix& data, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0, 1)");
  const double log_eps = std::log(epsilon);
  const double log_keep = std::log1p(-epsilon);
  const double evidence = log_keep - log_eps;

  Matrix ratio(data.rows(), data.cols());
  Matrix background(data.rows(), data.cols());
  for (Eigen::Index j = 0; j < data.cols(); ++j) {
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
      const double x = data(i, j);
      if (x == 1.0) {
        ratio(i, j) = evidence;
        background(i, j) = log_eps;
      } else if (x == 0.0) {
        ratio(i, j) = -evidence;
        background(i, j) = log_keep;
      } else {
        throw InvalidArgument("binary likelihood requires entries in {0, 1}");
      }
    }
  }
  return {std::move(ratio), std::move(background)};
}

LikelihoodField gaussian_likelihood_field(const DataMatrix& data, double tile_mean, double bg_mean,
                                          double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidArgument("sigma must be positive");
  if (!std::isfinite(tile_mean) || !std::isfinite(bg_mean)) throw InvalidArgument("means must be finite");
  const double two_var = 2.0 * sigma * sigma;
  const double log_norm = -0.5 * std::log(2.0 * std::numbers::pi * sigma * sigma);

  const Matrix& x = data.values();
  Matrix ratio = ((x.array() - bg_mean).square() - (x.array() - tile_mean).square()) / two_var;
  Matrix background = log_norm - (x.array() - bg_mean).square() / two_var;
  return {std::move(ratio), std::move(background)};
}

}  // namespace mta
