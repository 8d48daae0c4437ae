#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <string>

#include "tgif/optim.hpp"

using namespace tgif;

TEST_CASE("adam matches a hand-computed trajectory") {
  ParamStore ps(0);
  ps.create_full("w", {1, 2}, 1.0);
  const double lr = 0.1, b1 = 0.9, b2 = 0.999, eps = 1e-8;
  Adam adam(ps, lr, b1, b2, eps);

  std::map<std::string, Tensor> g1{{"w", Tensor::matrix(1, 2, {0.5, -0.2})}};
  std::map<std::string, Tensor> g2{{"w", Tensor::matrix(1, 2, {0.1, 0.3})}};

  double w[2] = {1.0, 1.0};
  double m[2] = {0.0, 0.0};
  double v[2] = {0.0, 0.0};
  auto manual_step = [&](const double* grad, int t) {
    for (int i = 0; i < 2; ++i) {
      m[i] = b1 * m[i] + (1 - b1) * grad[i];
      v[i] = b2 * v[i] + (1 - b2) * grad[i] * grad[i];
      const double mhat = m[i] / (1 - std::pow(b1, t));
      const double vhat = v[i] / (1 - std::pow(b2, t));
      w[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
  };

  adam.step(g1);
  const double grad1[2] = {0.5, -0.2};
  manual_step(grad1, 1);
  CHECK(ps.at("w").data[0] == Catch::Approx(w[0]).epsilon(1e-15));
  CHECK(ps.at("w").data[1] == Catch::Approx(w[1]).epsilon(1e-15));
  // first step moves by roughly lr regardless of gradient scale
  CHECK(std::fabs(1.0 - ps.at("w").data[0]) == Catch::Approx(lr).epsilon(1e-6));

  adam.step(g2);
  const double grad2[2] = {0.1, 0.3};
  manual_step(grad2, 2);
  CHECK(ps.at("w").data[0] == Catch::Approx(w[0]).epsilon(1e-15));
  CHECK(ps.at("w").data[1] == Catch::Approx(w[1]).epsilon(1e-15));
  CHECK(adam.steps() == 2);
}

TEST_CASE("adam converges on a quadratic") {
  ParamStore ps(0);
  ps.create_full("x", {1, 1}, 5.0);
  Adam adam(ps, 0.05);
  for (int i = 0; i < 2000; ++i) {
    const double x = ps.at("x").data[0];
    adam.step({{"x", Tensor::matrix(1, 1, {2.0 * x})}});  // d/dx x^2
  }
  CHECK(std::fabs(ps.at("x").data[0]) < 1e-3);
}

TEST_CASE("adam validates inputs") {
  ParamStore ps(0);
  ps.create_full("w", {1, 2}, 0.0);
  CHECK_THROWS_WITH(Adam(ps, -0.1), Catch::Matchers::ContainsSubstring("lr"));
  CHECK_THROWS_WITH(Adam(ps, 0.1, 1.0), Catch::Matchers::ContainsSubstring("betas"));
  Adam adam(ps);
  CHECK_THROWS_WITH(adam.step({}), Catch::Matchers::ContainsSubstring("missing gradient"));
  CHECK_THROWS_WITH(adam.step({{"w", Tensor::zeros({2, 2})}}),
                    Catch::Matchers::ContainsSubstring("shape mismatch"));
}
