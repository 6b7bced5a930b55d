#include "gae/gradcheck.hpp"

#include <cmath>
#include <vector>

#include "gae/error.hpp"

namespace gae {

GradCheckReport finite_diff_check(const std::function<Tensor()>& loss, std::span<Tensor> params,
                                  double eps) {
  if (!(eps > 0.0)) throw ContractError("finite_diff_check: eps must be positive");

  for (Tensor& p : params) p.zero_grad();
  loss().backward();
  std::vector<std::vector<double>> analytic;
  for (const Tensor& p : params) {
    analytic.emplace_back(p.grad().begin(), p.grad().end());
  }

  GradCheckReport report;
  NoGradGuard no_grad;
  for (std::size_t k = 0; k < params.size(); ++k) {
    auto values = params[k].mutable_values();
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double original = values[i];
      values[i] = original + eps;
      const double up = loss().item();
      values[i] = original - eps;
      const double down = loss().item();
      values[i] = original;
      const double numeric = (up - down) / (2.0 * eps);
      const double a = analytic[k][i];
      const double err = std::abs(a - numeric) / (std::abs(a) + std::abs(numeric) + eps);
      if (err > report.max_relative_error || (k == 0 && i == 0)) {
        report = {err, k, i, a, numeric};
      }
    }
  }
  return report;
}

}  // namespace gae
