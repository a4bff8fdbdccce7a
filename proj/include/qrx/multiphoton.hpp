#pragma once

#include "qrx/qsim.hpp"
#include "qrx/scdecoder.hpp"

namespace qrx {

struct SwitchParams {
    double cooperativity = 0.0;
};

struct SwitchReflectivity {
    double coupled = 0.0;
    double uncoupled = 0.0;
};

/// R_c = (4C/(1+4C))^2, R_u = 0.
SwitchReflectivity switch_reflectivity(const SwitchParams& params);

/// Register encoding for up to two photons over 2 * ceil(log2(N+1)) qubits:
/// the first qubit group holds the first photon's arrival bin, the second
/// group the second photon's. Pattern indices follow the two-photon basis
/// ordering (vacuum, singles, pairs).
struct TwoPhotonEncoding {
    int n_bins = 0;
    int qubits = 0;
    std::vector<uint32_t> reg_of;  // one register string per basis pattern

    void validate() const;  // injectivity, vacuum -> 0
};

TwoPhotonEncoding two_photon_encoding(int n_bins);

/// SC POVM on the two-photon truncated space (vacuum + singles + distinct pairs).
Povm two_photon_povm(const PolarCode& code, double alpha, double tol = -1.0);

}  // namespace qrx
