#pragma once

#include "ngd/models.hpp"

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace ngd {

/// Seeded sampler of bounded sets: points in the gauge ball of radius
/// `radius` around the identity and arrows with norm at most `radius`
/// whose source lies in that ball.
struct BoundedSampler {
  double radius = 4.0;
  std::size_t samples = 1000;
  std::uint64_t seed = 42;
};

namespace detail {

/// Rejection sampling in the box the group reports for the ball.
template <typename Model>
typename Model::Point sample_ball(const Model& m, std::mt19937_64& rng, double radius,
                                  const typename Model::Point& center) {
  using S = typename Model::Scalar;
  if (radius <= 0) return center;
  const auto box = m.group().box(S(radius));
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int attempt = 0; attempt < 100000; ++attempt) {
    typename Model::Point w(box.size());
    for (Eigen::Index i = 0; i < box.size(); ++i) w(i) = S(unit(rng) * static_cast<double>(box(i)));
    if (static_cast<double>(m.gauge()(w)) <= radius) return m.group().mul(center, w);
  }
  throw std::runtime_error("rejection sampler failed to hit the gauge ball");
}

}  // namespace detail

template <typename Model>
std::vector<typename Model::Point> sample_points(const Model& m, const BoundedSampler& s) {
  std::mt19937_64 rng(s.seed);
  std::vector<typename Model::Point> out;
  out.reserve(s.samples);
  const auto e = m.group().identity();
  for (std::size_t i = 0; i < s.samples; ++i) out.push_back(detail::sample_ball(m, rng, s.radius, e));
  return out;
}

/// Arrows (q w, q) with q in the ball and gauge(w) <= radius.
template <typename Model>
std::vector<typename Model::Arrow> sample_arrows(const Model& m, const BoundedSampler& s) {
  std::mt19937_64 rng(s.seed);
  std::vector<typename Model::Arrow> out;
  out.reserve(s.samples);
  const auto e = m.group().identity();
  for (std::size_t i = 0; i < s.samples; ++i) {
    auto q = detail::sample_ball(m, rng, s.radius, e);
    auto p = detail::sample_ball(m, rng, s.radius, q);
    out.push_back({p, q});
  }
  return out;
}

/// A base point x and arrows u, v, w in the fiber over x, each within the
/// radius of x.
template <typename Model>
struct FiberSample {
  typename Model::Point x;
  typename Model::Arrow u, v, w;
};

template <typename Model>
std::vector<FiberSample<Model>> sample_fiber_triples(const Model& m, const BoundedSampler& s) {
  std::mt19937_64 rng(s.seed);
  std::vector<FiberSample<Model>> out;
  out.reserve(s.samples);
  const auto e = m.group().identity();
  for (std::size_t i = 0; i < s.samples; ++i) {
    auto x = detail::sample_ball(m, rng, s.radius, e);
    auto a = detail::sample_ball(m, rng, s.radius, x);
    auto b = detail::sample_ball(m, rng, s.radius, x);
    auto c = detail::sample_ball(m, rng, s.radius, x);
    out.push_back({x, {a, x}, {b, x}, {c, x}});
  }
  return out;
}

/// Log-spaced grid of scales used for exact action laws. In double precision
/// the Heisenberg central coordinate loses about |q| 1e-16 / eps^2 when a
/// dilated arrow is rebased, so the grid stays within [1/10, 10] for the
/// 1e-12 tolerance; wider grids need float128.
inline std::vector<double> action_grid() { return {0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 10.0}; }
inline std::vector<double> wide_action_grid() { return {1e-3, 1e-2, 0.1, 0.5, 1.0, 2.0, 10.0, 100.0, 1e3}; }

}  // namespace ngd
