#include <doctest.h>

#include "../support/oracles.hpp"
#include "vnls/verification.hpp"

using namespace vnls;
using oracle::row;

namespace {

ErrorKind kind_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::InvalidInput;
}

const Complex k_ref{1.0, 0.5};
const ComplexRow c_ref = row({2.0, 1.0});

HalfLineProblem reference(const BoundarySpec& bc) { return assemble_halfline({-1, 2, {k_ref}, {c_ref}}, bc); }

std::vector<double> span_of(double a, double b, int n) { return Axis{a, b, n}.values(); }

}  // namespace

TEST_CASE("to_string(ResidualKind)") {
  CHECK(std::string(to_string(ResidualKind::PDE)) == "pde");
  CHECK(std::string(to_string(ResidualKind::MirrorSymmetry)) == "mirror-symmetry");
}

TEST_CASE("convergence_slope") {
  const std::vector<double> hs = {0.1, 0.05, 0.025};
  const std::vector<double> sq = {3e-2, 7.5e-3, 1.875e-3};
  CHECK(convergence_slope(hs, sq) == doctest::Approx(2.0).epsilon(1e-12));
  const std::vector<double> flat = {1.0, 1.0, 1.0};
  CHECK(std::abs(convergence_slope(hs, flat)) < 1e-12);
  CHECK(kind_of([&] { convergence_slope(hs, std::vector<double>{1.0}); }) == ErrorKind::InvalidInput);
  CHECK(kind_of([&] { convergence_slope(hs, std::vector<double>{1.0, 0.0, 1.0}); }) == ErrorKind::InvalidInput);
}

TEST_CASE("PDE residual of closed-form solitons converges at second order") {
  for (const ComplexRow& c : {row({1.5}), row({{1.0, 0.5}, -0.7})}) {
    const Complex k{0.4, 0.8};
    const FieldFunction f = [&](double x, double t) { return oracle::line_soliton(k, c, x, t); };
    const ResidualReport r = pde_residual(f, -1, span_of(-3, 3, 13), span_of(-1, 1, 5), 1e-2);
    REQUIRE(r.convergence_exponent);
    CHECK(*r.convergence_exponent > 1.8);
    CHECK(*r.convergence_exponent < 2.2);
    CHECK(r.max_abs < 1e-2);
    CHECK(r.kind == ResidualKind::PDE);
  }
}

TEST_CASE("PDE residual of reconstructed half-line solutions") {
  for (const BoundarySpec& bc : {BoundarySpec::mixed({1, -1}), BoundarySpec::rotated({1, -1}, {oracle::kPi / 6, 0.0, 0.0}),
                                 BoundarySpec::robin(0.5)}) {
    const HalfLineProblem p = reference(bc);
    const ResidualReport r = pde_residual(p.assembled, {{0, 6, 13}, {-2, 2, 5}}, 1e-2);
    REQUIRE(r.convergence_exponent);
    CHECK(*r.convergence_exponent > 1.8);
    CHECK(*r.convergence_exponent < 2.2);
  }
}

TEST_CASE("PDE residual flags fields that do not solve the equation") {
  const Complex k{0.4, 0.8};
  const ComplexRow c = row({1.0, 1.0});
  SUBCASE("scaled amplitude") {
    const FieldFunction f = [&](double x, double t) -> ComplexVector { return 1.05 * oracle::line_soliton(k, c, x, t); };
    const ResidualReport r = pde_residual(f, -1, span_of(-2, 2, 9), span_of(-1, 1, 3), 1e-3);
    CHECK(r.max_abs > 1e-2);
    REQUIRE(r.convergence_exponent);
    CHECK(std::abs(*r.convergence_exponent) < 0.1);
  }
  SUBCASE("defocusing sign") {
    const FieldFunction f = [&](double x, double t) { return oracle::line_soliton(k, c, x, t); };
    CHECK(pde_residual(f, 1, span_of(-2, 2, 9), span_of(-1, 1, 3), 1e-3).max_abs > 0.1);
  }
  SUBCASE("bad step") {
    const FieldFunction f = [&](double x, double t) { return oracle::line_soliton(k, c, x, t); };
    CHECK(kind_of([&] { pde_residual(f, -1, span_of(0, 1, 2), span_of(0, 1, 2), 0.0); }) == ErrorKind::InvalidInput);
    CHECK(kind_of([&] { pde_residual(f, -1, std::vector<double>{}, span_of(0, 1, 2), 1e-3); }) ==
          ErrorKind::InvalidInput);
  }
}

TEST_CASE("boundary residual") {
  const auto times = span_of(-8, 8, 41);
  SUBCASE("mixed Neumann/Dirichlet") {
    const BoundaryResidual b = boundary_residual(reference(BoundarySpec::mixed({1, -1})), times, 1e-3);
    CHECK(b.value_max < 1e-8);
    CHECK(b.derivative_max < 1e-5);
    CHECK_FALSE(b.empirical);
    CHECK(b.per_time.size() == times.size());
    CHECK(b.report.kind == ResidualKind::BoundaryMixed);
  }
  SUBCASE("rotated frame") {
    const BoundaryResidual b =
        boundary_residual(reference(BoundarySpec::rotated({1, -1}, {0.7, 0.3, -0.4})), times, 1e-3);
    CHECK(b.value_max < 1e-8);
    CHECK(b.derivative_max < 1e-5);
  }
  SUBCASE("the un-rotated test fails on a rotated solution") {
    HalfLineProblem p = reference(BoundarySpec::rotated({1, -1}, {0.7, 0.3, -0.4}));
    p.bc = BoundarySpec::mixed({1, -1});
    CHECK(boundary_residual(p, times, 1e-3).value_max > 1e-2);
  }
  SUBCASE("Robin residual shrinks under refinement") {
    const HalfLineProblem p = reference(BoundarySpec::robin(0.5));
    const double coarse = boundary_residual(p, times, 2e-3).report.max_abs;
    const double fine = boundary_residual(p, times, 1e-3).report.max_abs;
    CHECK(boundary_residual(p, times, 1e-3).empirical);
    CHECK(coarse / fine > 3.6);
    CHECK(coarse / fine < 4.4);
  }
}

TEST_CASE("mirror symmetry") {
  const GridAxes ax{{0, 8, 81}, {-6, 6, 13}};
  for (const BoundarySpec& bc : {BoundarySpec::mixed({1, -1}), BoundarySpec::mixed({-1, -1}),
                                 BoundarySpec::rotated({1, -1}, {oracle::kPi / 6, 0.0, 0.0}),
                                 BoundarySpec::rotated({1, -1}, {1.1, 0.4, 2.0})}) {
    const HalfLineProblem p = reference(bc);
    CHECK(mirror_symmetry_residual(p, ax).max_abs < 1e-8);
    // the wrong reflection matrix is detected
    CHECK(mirror_symmetry_residual(p, ax, ComplexMatrix(-p.boundary())).max_abs > 0.1);
  }
  const HalfLineProblem m = reference(BoundarySpec::mixed({1, -1}));
  CHECK(kind_of([&] { mirror_symmetry_residual(m, ax, ComplexMatrix::Identity(3, 3)); }) == ErrorKind::InvalidInput);
  CHECK(kind_of([&] { mirror_symmetry_residual(reference(BoundarySpec::robin(1.0)), ax); }) ==
        ErrorKind::NotApplicable);
}

TEST_CASE("reflection summary") {
  SUBCASE("theta = 0 keeps the polarization") {
    const ReflectionSummary s = reflection_summary(reference(BoundarySpec::rotated({1, -1}, {0.0, 0.0, 0.0})));
    CHECK(std::abs(s.incoming_amplitudes[0] - 2.0 / std::sqrt(5.0)) < 1e-6);
    CHECK(std::abs(s.incoming_amplitudes[1] - 1.0 / std::sqrt(5.0)) < 1e-6);
    CHECK(std::abs(s.outgoing_amplitudes[0] - s.incoming_amplitudes[0]) < 1e-6);
    CHECK(std::abs(s.outgoing_amplitudes[1] - s.incoming_amplitudes[1]) < 1e-6);
    CHECK(s.measurement_times.first == -s.measurement_times.second);
    CHECK(s.incoming_x > 0.0);
    CHECK(s.outgoing_x > 0.0);
    REQUIRE(s.theta_params);
  }
  SUBCASE("theta = pi/6 transfers energy into the second channel") {
    // outgoing polarization follows the mirror constant (numpy, closed form)
    const ComplexRow cp = row({{0.06607695, 0.0651666}, {-0.42676915, 0.26248711}});
    const ReflectionSummary s = reflection_summary(reference(BoundarySpec::rotated({1, -1}, {oracle::kPi / 6, 0.0, 0.0})));
    CHECK(std::abs(s.outgoing_amplitudes[0] - std::abs(cp(0)) / cp.norm()) < 1e-6);
    CHECK(std::abs(s.outgoing_amplitudes[1] - std::abs(cp(1)) / cp.norm()) < 1e-6);
    CHECK(s.balance() < 1e-6);
  }
  SUBCASE("amplitude balance across boundary types") {
    for (const BoundarySpec& bc : {BoundarySpec::mixed({1, -1}), BoundarySpec::robin(0.3),
                                   BoundarySpec::rotated({1, -1}, {1.0, 0.2, 0.1})}) {
      const ReflectionSummary s = reflection_summary(reference(bc));
      CHECK(std::abs(s.incoming_total - 1.0) < 1e-6);
      CHECK(s.balance() < 1e-6);
      CHECK_FALSE((bc.kind != BoundaryKind::Rotated) == s.theta_params.has_value());
    }
  }
  SUBCASE("slow solitons have no finite horizon") {
    const HalfLineProblem p = assemble_halfline({-1, 2, {{0.01, 1.0}}, {c_ref}}, BoundarySpec::mixed({1, -1}));
    CHECK(kind_of([&] { reflection_summary(p); }) == ErrorKind::Horizon);
  }
  SUBCASE("default horizon") {
    // width 1, speed 4, free centre ln 5 / 2
    CHECK(default_horizon(k_ref, c_ref) == 8.0);
    CHECK(default_horizon({0.1, 0.5}, c_ref) == doctest::Approx((5.0 + std::log(5.0) / 2.0) / 0.4).epsilon(1e-6));
  }
}

TEST_CASE("theta scan") {
  const std::vector<double> thetas = {0.0, oracle::kPi / 6, oracle::kPi / 3};
  const ThetaScan s = theta_scan(k_ref, c_ref, 0.0, 0.0, thetas);
  REQUIRE(s.summaries.size() == 3);
  CHECK(s.star_index == 0);
  CHECK(s.theta_star == 0.0);
  for (const auto& r : s.summaries) CHECK(r.balance() < 1e-6);
  CHECK(kind_of([&] { theta_scan(k_ref, row({1.0}), 0.0, 0.0, thetas); }) == ErrorKind::InvalidInput);
  CHECK(kind_of([&] { theta_scan(k_ref, c_ref, 0.0, 0.0, std::vector<double>{}); }) == ErrorKind::InvalidInput);
}
