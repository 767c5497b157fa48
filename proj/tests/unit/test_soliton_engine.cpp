#include <doctest.h>

#include <random>

#include "../support/oracles.hpp"
#include "vnls/mirror_builder.hpp"
#include "vnls/soliton_engine.hpp"

using namespace vnls;
using oracle::row;

namespace {

const Complex k_ref{1.0, 0.5};
const ComplexRow c_ref = row({2.0, 1.0});

SpectralData reference_halfline(const BoundarySpec& bc) {
  return assemble_halfline({-1, 2, {k_ref}, {c_ref}}, bc).assembled;
}

// R through the literal mu system: R = 2 i lambda [I .. I] mu^{-1} rhs.
ComplexVector literal_route(double x, double t, const SpectralData& d) {
  const ComplexMatrix mu = mu_matrix(x, t, d);
  const ComplexVector sol = mu.fullPivLu().solve(mu_rhs(x, t, d));
  ComplexVector r = ComplexVector::Zero(d.n);
  for (std::size_t j = 0; j < d.size(); ++j) r += sol.segment(j * d.n, d.n);
  return Complex{0.0, 2.0 * d.lambda} * r;
}

}  // namespace

TEST_CASE("phase") {
  CHECK(phase(0, 0, {3.0, 2.0}) == Complex{0.0, 0.0});
  CHECK(phase(1, 0, 1.0) == Complex{1.0, 0.0});
  CHECK(std::abs(phase(1, 1, {1.0, 1.0}) - Complex{1.0, 5.0}) < 1e-15);
}

TEST_CASE("mu_matrix scalar value and decay") {
  const SpectralData d = oracle::line_data({0.0, 1.0}, row({1.0}));
  CHECK(std::abs(mu_matrix(0, 0, d)(0, 0) - 1.25) < 1e-15);
  CHECK(std::abs(mu_matrix(20, 0, d)(0, 0) - 1.0) < 1e-30 + 1e-15);

  const SpectralData h = reference_halfline(BoundarySpec::mixed({1, -1}));
  const ComplexMatrix far = mu_matrix(15, 0, h);
  CHECK((far - ComplexMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("mu_matrix of the assembled reference data is finite and well conditioned at the origin") {
  const SpectralData h = reference_halfline(BoundarySpec::mixed({1, -1}));
  const ComplexMatrix mu = mu_matrix(0, 0, h);
  CHECK(all_finite(mu));
  CHECK(Eigen::PartialPivLU<ComplexMatrix>(mu).rcond() > 1e-3);
}

TEST_CASE("mu_matrix window guard") {
  const SpectralData d = oracle::line_data({0.0, 1.0}, row({1.0}));
  try {
    mu_matrix(-20, 0, d);
    FAIL("guard did not trip");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DomainWindow);
  }
  EngineOptions wide;
  wide.exponent_guard = 100.0;
  CHECK_NOTHROW(mu_matrix(-20, 0, d, wide));
}

TEST_CASE("reconstruct_field scalar reference values") {
  const SpectralData d = oracle::line_data({0.0, 1.0}, row({1.0}));
  const ComplexVector r = reconstruct_field(0, 0, d);
  CHECK(std::abs(r(0) - Complex{0.0, -1.6}) < 1e-15);
  CHECK(reconstruct_field(0.3, 0.2, SpectralData{-1, 3, {}, {}}).norm() == 0.0);
}

TEST_CASE("reconstruct_field matches the closed-form one-soliton profile") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> part(0.2, 2.0), comp(-2.0, 2.0), pos(-6.0, 6.0), tim(-1.5, 1.5);
  double worst = 0.0;
  for (int i = 0; i < 40; ++i) {
    const Complex k{part(rng), part(rng)};
    const ComplexRow c = i % 2 ? row({{comp(rng), comp(rng)}}) : row({{comp(rng), comp(rng)}, {comp(rng), comp(rng)}});
    const SpectralData d = oracle::line_data(k, c);
    for (int s = 0; s < 20; ++s) {
      const double x = pos(rng), t = tim(rng);
      worst = std::max(worst, (reconstruct_field(x, t, d) - oracle::line_soliton(k, c, x, t)).cwiseAbs().maxCoeff());
      CHECK(std::abs(reconstruct_field(x, t, d).norm() - oracle::line_soliton_modulus(k, c.norm(), x, t)) < 1e-12);
    }
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("balanced solve agrees with the literal mu system where the latter is safe") {
  for (const BoundarySpec& bc : {BoundarySpec::mixed({1, -1}), BoundarySpec::rotated({1, -1}, {0.5, 1.11, 0.0}),
                                 BoundarySpec::robin(2.0)}) {
    const SpectralData h = reference_halfline(bc);
    for (double x : {-3.0, -1.0, 0.0, 0.5, 2.0, 4.0}) {
      for (double t : {-1.0, 0.0, 0.7}) {
        const ComplexVector a = reconstruct_field(x, t, h), b = literal_route(x, t, h);
        // the literal system carries entries up to e^14 here and loses digits accordingly
        CHECK((a - b).cwiseAbs().maxCoeff() < 1e-10 * std::max(1.0, b.norm()));
      }
    }
  }
}

TEST_CASE("balanced solve against a 40-digit evaluation of the literal system") {
  // mpmath, rotated boundary theta = 0.5, zeta = 1.11, xi = 0, at (x, t) = (-3, -1)
  const SpectralData h = reference_halfline(BoundarySpec::rotated({1, -1}, {0.5, 1.11, 0.0}));
  const ComplexVector r = reconstruct_field(-3.0, -1.0, h);
  CHECK(std::abs(r(0) - Complex{0.09291399005864270403, 0.11610851013776142331}) < 1e-14);
  CHECK(std::abs(r(1) - Complex{-0.18761002768304300735, -0.21292494360657905996}) < 1e-14);
}

TEST_CASE("reconstruct_field stays finite where the literal system overflows") {
  const SpectralData h = reference_halfline(BoundarySpec::mixed({1, -1}));
  CHECK_THROWS_AS(mu_matrix(0, -8, h), Error);
  const ComplexVector r = reconstruct_field(0, -8, h);
  CHECK(all_finite(r));
  CHECK(r.norm() < 1e-6);
  CHECK(all_finite(reconstruct_field(-40, 10, h)));
}

TEST_CASE("field_grid") {
  const SpectralData d = oracle::line_data({0.5, 1.0}, row({1.0, {0.0, 1.0}}));
  SUBCASE("vacuum is zero") {
    const FieldGrid g = field_grid({-1, 2, {}, {}}, {{-1, 1, 5}, {0, 1, 3}});
    for (const auto& s : g.samples) CHECK(s.R.norm() == 0.0);
  }
  SUBCASE("single point") {
    const FieldGrid g = field_grid(d, {{0.3, 0.3, 1}, {-0.2, -0.2, 1}});
    REQUIRE(g.samples.size() == 1);
    CHECK((g.samples[0].R - reconstruct_field(0.3, -0.2, d)).norm() == 0.0);
  }
  SUBCASE("t-major order and thread independence") {
    const GridAxes ax{{-2, 2, 7}, {0, 1, 4}};
    const FieldGrid one = field_grid(d, ax, {}, 1), many = field_grid(d, ax, {}, 3);
    CHECK(one.at(2, 5).x == doctest::Approx(ax.x.at(5)));
    CHECK(one.at(2, 5).t == doctest::Approx(ax.t.at(2)));
    for (std::size_t i = 0; i < one.samples.size(); ++i) CHECK((one.samples[i].R - many.samples[i].R).norm() == 0.0);
  }
  SUBCASE("pointwise failures carry coordinates") {
    EngineOptions strict;
    strict.min_rcond = 2.0;
    try {
      field_grid(d, {{0, 1, 2}, {0, 0, 1}}, strict, 2);
      FAIL("expected failure");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::IllConditioned);
      CHECK(std::string(e.what()).find("(x, t) = (0, 0)") != std::string::npos);
    }
  }
  SUBCASE("invalid axes") {
    CHECK_THROWS_AS(field_grid(d, {{1, 0, 3}, {0, 1, 2}}), Error);
    CHECK_THROWS_AS(field_grid(d, {{0, 1, 0}, {0, 1, 2}}), Error);
  }
}

TEST_CASE("reference half-line grid carries unit-amplitude solitons away from the boundary") {
  const SpectralData h = reference_halfline(BoundarySpec::mixed({1, -1}));
  const FieldGrid g = field_grid(h, {{0, 15, 301}, {-8, 8, 201}});
  double peak_late = 0.0;
  for (const auto& s : g.samples) {
    REQUIRE(all_finite(s.R));
    if (s.t == 8.0) continue;
  }
  // at t = -3.5 the incoming centre sits near x = 14.8, inside the window
  for (int ix = 0; ix < 301; ++ix) peak_late = std::max(peak_late, g.at(57, ix).R.norm());
  CHECK(g.at(57, 0).t == doctest::Approx(-3.44));
  CHECK(peak_late == doctest::Approx(1.0).epsilon(2e-3));
}

TEST_CASE("peak_scan") {
  SUBCASE("scalar soliton") {
    const PeakReport p = peak_scan(oracle::line_data({0.0, 1.0}, row({1.0})), 0.0, -5.0, 5.0);
    REQUIRE(p.x_peak);
    CHECK(std::abs(*p.x_peak + std::log(2.0) / 2.0) < 1e-6);
    CHECK(std::abs(p.total - 2.0) < 1e-9);
    CHECK(p.amplitudes.size() == 1);
  }
  SUBCASE("vacuum") {
    const PeakReport p = peak_scan({-1, 2, {}, {}}, 0.0, -1.0, 1.0);
    CHECK_FALSE(p.x_peak);
    CHECK(p.total == 0.0);
  }
  SUBCASE("edge of the window") {
    try {
      peak_scan(oracle::line_data({0.0, 1.0}, row({1.0})), 0.0, 1.0, 5.0);
      FAIL("expected edge error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::PeakOnEdge);
    }
  }
  SUBCASE("line trajectory is linear with slope -4 Re k") {
    const Complex k{0.75, 0.6};
    const SpectralData d = oracle::line_data(k, row({1.0, 2.0}));
    std::vector<double> xs;
    for (double t : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
      const double c = free_soliton_centre(k, d.norming[0], t);
      xs.push_back(*peak_scan(d, t, c - 10, c + 10).x_peak);
    }
    for (std::size_t i = 1; i < xs.size(); ++i) CHECK(std::abs((xs[i] - xs[i - 1]) + 4.0 * k.real()) < 1e-6);
  }
  SUBCASE("incoming soliton of the reference half-line data") {
    const SpectralData h = reference_halfline(BoundarySpec::mixed({1, -1}));
    const PeakReport p = peak_scan(h, -8.0, 15.0, 45.0);
    REQUIRE(p.x_peak);
    CHECK(std::abs(*p.x_peak - (32.0 + std::log(5.0) / 2.0)) < 1e-6);
    CHECK(std::abs(p.amplitudes[0] - 2.0 / std::sqrt(5.0)) < 1e-6);
    CHECK(std::abs(p.amplitudes[1] - 1.0 / std::sqrt(5.0)) < 1e-6);
  }
}

TEST_CASE("peak_scan ties go to the smaller x") {
  // Two well separated identical pulses: mirror-symmetric half-line data at t = 0
  // with the pure Neumann scalar boundary puts equal maxima at +-x0.
  const HalfLineProblem p = assemble_halfline(oracle::line_data({1.0, 0.5}, row({std::exp(8.0)})), BoundarySpec::mixed({1}));
  const double c = free_soliton_centre({1.0, 0.5}, row({std::exp(8.0)}), 0.0);
  const PeakReport r = peak_scan(p.assembled, 0.0, -c - 5.0, c + 5.0, {0.05, 1e-5});
  REQUIRE(r.x_peak);
  CHECK(*r.x_peak < 0.0);
}
