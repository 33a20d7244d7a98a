#include <cmath>

#include "doctest.h"
#include "mmo/channel.hpp"
#include "mmo/error.hpp"
#include "test_util.hpp"

using namespace mmo;
using namespace mmo::test;

TEST_CASE("exponential correlations") {
  const Correlations c0 = build_correlations({0.0, 0.0, 0.01, 4, 4});
  CHECK((c0.psi - 0.01 * eye(4)).norm() < 1e-15);
  CHECK((c0.sigma - eye(4)).norm() < 1e-15);
  const Correlations c = build_correlations({0.45, 0.45, 0.001, 4, 4});
  CHECK(c.psi(0, 1).real() == doctest::Approx(0.00045));
  CHECK(c.sigma(0, 2).real() == doctest::Approx(0.45 * 0.45));
  CHECK(c.sigma(3, 3).real() == 1.0);
  CHECK_THROWS_AS(build_correlations({1.0, 0.0, 0.01, 2, 2}), Error);
}

TEST_CASE("draws are deterministic per seed") {
  const ExpCorrModel m{0.6, 0.3, 0.05, 3, 4};
  const ChannelDraw a = sample_channel(m, 7), b = sample_channel(m, 7), c = sample_channel(m, 8);
  CHECK(a.h == b.h);
  CHECK(a.h != c.h);
  CHECK(a.h.rows() == 4);
  CHECK(a.h.cols() == 3);
  CHECK(a.h == a.h_bar + a.delta_h);
}

namespace {

// mean and standard error of |x|^2 over draws
std::pair<double, double> moment(const ChannelSampler& s, int n, bool error_only) {
  std::vector<double> v;
  for (int t = 0; t < n; ++t) {
    const ChannelDraw d = s.draw(1000 + static_cast<std::uint64_t>(t));
    v.push_back(std::norm(error_only ? d.delta_h(1, 2) : d.h(2, 1)));
  }
  double m = 0, q = 0;
  for (double x : v) m += x;
  m /= n;
  for (double x : v) q += (x - m) * (x - m);
  return {m, std::sqrt(q / (n - 1.0) / n)};
}

}  // namespace

TEST_CASE("error variance matches sigma_e2 without correlation") {
  const ChannelSampler s({0.0, 0.0, 0.04, 4, 4});
  const auto [m, se] = moment(s, 10000, true);
  CHECK(std::abs(m - 0.04) <= 3 * se);
}

TEST_CASE("true channel entries have unit variance") {
  const ChannelSampler s({0.45, 0.45, 0.1, 4, 4});
  const auto [m, se] = moment(s, 10000, false);
  CHECK(std::abs(m - 1.0) <= 3 * se);
}

TEST_CASE("dB conversion") {
  CHECK(db_to_linear(20) == doctest::Approx(100));
  CHECK(linear_to_db(1000) == doctest::Approx(30));
}
