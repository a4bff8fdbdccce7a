#pragma once

#include <Eigen/Dense>
#include <vector>

#include "qrx/polar.hpp"

namespace qrx {

using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

/// Photon-number-truncated basis over N time bins. Patterns are the occupied
/// bins (1-based), ordered: vacuum, singles by bin index, pairs (i,j), i<j,
/// lexicographic. Same-bin double occupation is excluded.
struct TruncatedBasis {
    int n_bins = 0;
    int max_photons = 1;  // 1 or 2
    std::vector<std::vector<int>> patterns;

    int dim() const { return static_cast<int>(patterns.size()); }
    int index_of(const std::vector<int>& pattern) const;  // -1 if absent
};

TruncatedBasis make_basis(int n_bins, int max_photons);

struct TruncatedPhotonicState {
    TruncatedBasis basis;
    Vec amplitudes;

    double squared_norm() const { return amplitudes.squaredNorm(); }
};

/// Truncated coherent-state amplitude vector e^{-a^2/2} [1, a, a^2/sqrt(2!), ...],
/// indices 0..max_photons. Not renormalized after truncation.
Eigen::VectorXcd coherent_truncated(double alpha, int max_photons);

/// Unit-norm 0/1-photon expansion of the BPSK product state for codeword c:
/// [1, (-1)^{c_1} a, ..., (-1)^{c_N} a] / sqrt(1 + N a^2).
TruncatedPhotonicState bpsk_codeword_state(const Bits& codeword, double alpha);

/// Unit-norm expansion up to two photons in distinct bins: vacuum 1, singles
/// (-1)^{c_i} a, pairs (-1)^{c_i+c_j} a^2, over sqrt(1 + N a^2 + C(N,2) a^4).
TruncatedPhotonicState two_photon_codeword_state(const Bits& codeword, double alpha);

/// Probability mass of the BPSK product state outside the truncated subspace;
/// independent of the codeword. For max_photons=1 this is 1 - e^{-Na^2}(1+Na^2).
double residual_multiphoton_probability(const Bits& codeword, double alpha, int max_photons);

}  // namespace qrx
