#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qrx/hilbert.hpp"
#include "qrx/polar.hpp"

namespace qrx {

/// Maps a codeword to its truncated state vector; lets the POVM construction
/// run unchanged on the single-photon and two-photon subspaces.
using StateBuilder = std::function<Vec(const Bits& codeword, double alpha)>;

StateBuilder single_photon_states();
StateBuilder two_photon_states();

/// Ordered POVM {Lambda_y}, one element per message y, labels lexicographic.
struct Povm {
    std::vector<std::string> labels;
    std::vector<Mat> elements;

    int dim() const { return elements.empty() ? 0 : static_cast<int>(elements[0].rows()); }
    Mat sum() const;
};

/// Row-stochastic P(y|u) with labeled axes.
struct TransitionMatrix {
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    Eigen::MatrixXd p;

    void validate(double tol = 1e-9) const;
};

using ChannelBuilder = std::function<TransitionMatrix(double alpha)>;

/// Uniform mixture over all completions of the prefix of the truncated
/// codeword density operators. The prefix must honor frozen values.
Mat averaged_density(const PolarCode& code, const Bits& prefix, double alpha,
                     const StateBuilder& states = single_photon_states());

/// Splits a Hermitian operator into projectors onto the eigenspaces with
/// eigenvalue >= -tol and < -tol. Zero modes land in the first projector and
/// the pair sums to the identity exactly. tol < 0 selects the default
/// 1e-10 * spectral norm.
std::pair<Mat, Mat> eigenspace_projectors(const Mat& delta, double tol = -1.0);

/// Successive-cancellation POVM: for each message, the sandwich of branch
/// projectors at the information positions, outermost first.
Povm build_sc_povm(const PolarCode& code, double alpha, double tol = -1.0,
                   const StateBuilder& states = single_photon_states());

/// P(y|u) = <psi_x(u)| Lambda_y |psi_x(u)> on the truncated subspace.
TransitionMatrix transition_matrix(const Povm& povm, const Codebook& codebook, double alpha,
                                   const StateBuilder& states = single_photon_states());

enum class MultiphotonPolicy { UniformOverOutcomes };

/// Blends each truncated-subspace row with a uniform outcome distribution,
/// weighted by the residual multi-photon mass. This is the channel the rate
/// calculations consume on the POVM path.
TransitionMatrix effective_channel(const PolarCode& code, double alpha, const Povm& povm,
                                   MultiphotonPolicy policy = MultiphotonPolicy::UniformOverOutcomes,
                                   int max_photons = 1,
                                   const StateBuilder& states = single_photon_states());

std::string povm_to_json(const Povm& povm);
std::string transition_to_json(const TransitionMatrix& tm);

}  // namespace qrx
