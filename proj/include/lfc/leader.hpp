#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace lfc {

/// Leader exosystem v' = S v with S = diag(S_a, S_b). S_a is in companion
/// form (superdiagonal ones, bottom row alpha) and drives the reference
/// x0; S_b drives the disturbance generator w. The leader state is
/// v = col(x0, w) of dimension q = r + n_w.
struct Exosystem {
  int r = 0;                // reference order
  int n_w = 0;              // disturbance-generator order
  Eigen::VectorXd alpha;    // r coefficients, bottom row of S_a
  Eigen::MatrixXd S_b;      // n_w x n_w

  int q() const { return r + n_w; }
};

void validate_exosystem(const Exosystem& e);

Eigen::MatrixXd build_S(const Exosystem& e);

/// Convenience constructor: companion S_a with the spectrum {±i w} for the
/// given reference frequencies, and 2x2 rotation blocks in S_b for the
/// disturbance frequencies. All frequencies must be positive and distinct.
Exosystem exosystem_from_frequencies(const std::vector<double>& reference_freqs,
                                     const std::vector<double>& disturbance_freqs);

struct SpectrumReport {
  bool satisfied = false;
  std::vector<std::complex<double>> eigenvalues;
};

/// Checks that all eigenvalues of S have real parts within tol of zero and
/// are pairwise separated by more than tol.
SpectrumReport check_leader_spectrum(const Exosystem& e, double tol = 1e-8);

Eigen::VectorXd leader_derivative(const Exosystem& e, const Eigen::VectorXd& v);

}  // namespace lfc
