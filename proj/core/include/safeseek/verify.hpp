#ifndef SAFESEEK_VERIFY_HPP
#define SAFESEEK_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "safeseek/sim.hpp"

namespace safeseek {

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::size_t cases = 0;
  double worst = 0.0;      // worst observed error / slack, suite-specific
  double tolerance = 0.0;
  std::string detail;
};

struct VerifyOptions {
  std::uint64_t seed = 7;
  std::size_t fd_cases = 1000;
  std::size_t qp_cases = 10000;
  std::size_t reldeg_cases = 10000;
  std::vector<double> kappa_sweep{0.5, 1.0, 5.0};
  // Hidden switch: evaluate the relative-degree suite with delta = 0.
  bool force_zero_delta = false;
};

/// Analytic Lie derivatives of both barriers against central differences
/// (relative error, denominator max(|analytic|, |fd|, 1e-3)).
SuiteResult verify_lie_derivatives(std::uint64_t seed, std::size_t cases, double tol = 1e-5);
/// dD/dd_ro against central differences for both D kinds.
SuiteResult verify_d_derivative(std::uint64_t seed, std::size_t cases, double tol = 1e-6);
/// Closed-form and enumerated QPs against the active-set oracle.
SuiteResult verify_qp_zcbf(std::uint64_t seed, std::size_t cases, double tol = 1e-9);
SuiteResult verify_qp_rcbf(std::uint64_t seed, std::size_t cases, double tol = 1e-9);
SuiteResult verify_qp_boxed(std::uint64_t seed, std::size_t cases, double tol = 1e-8);
SuiteResult verify_kkt(std::uint64_t seed, std::size_t cases, double tol = 1e-9);
/// min ||Lgh|| > 0 over random interior states, including headings with
/// p'_o = 0 where only the delta term remains.
SuiteResult verify_relative_degree(std::uint64_t seed, std::size_t cases, double delta);

struct DecayCheck {
  std::size_t active_steps = 0;
  std::size_t violations = 0;
  double worst_slack = kInf;  // min of (h_{k+1} - h_k)/dt + kappa h_k + band
};

/// (h_{k+1} - h_k)/dt >= -kappa h_k - band_factor dt on every projected step.
DecayCheck barrier_decay(const TrajectoryLog& log, double kappa, double dt, double band_factor = 10.0);

/// Bundled fig2a, fig2b and gazebo_replica (seeds 0..9) with kappa overridden.
SuiteResult verify_barrier_decay(double kappa);

std::vector<SuiteResult> run_verify(const VerifyOptions& options);

}  // namespace safeseek

#endif  // SAFESEEK_VERIFY_HPP
