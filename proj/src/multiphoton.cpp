#include "qrx/multiphoton.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace qrx {

SwitchReflectivity switch_reflectivity(const SwitchParams& params) {
    if (params.cooperativity < 0)
        throw std::invalid_argument("switch_reflectivity: cooperativity >= 0 required");
    const double c = params.cooperativity;
    const double r = 4.0 * c / (1.0 + 4.0 * c);
    return {r * r, 0.0};
}

void TwoPhotonEncoding::validate() const {
    if (reg_of.empty() || reg_of[0] != 0)
        throw std::invalid_argument("two-photon encoding: vacuum must map to all-zeros");
    std::set<uint32_t> seen;
    for (uint32_t r : reg_of) {
        if (r >= (1u << qubits))
            throw std::invalid_argument("two-photon encoding: string out of range");
        if (!seen.insert(r).second)
            throw std::invalid_argument("two-photon encoding: collision");
    }
}

TwoPhotonEncoding two_photon_encoding(int n_bins) {
    if (n_bins != 4 && n_bins != 8)
        throw std::invalid_argument("two_photon_encoding: N must be 4 or 8");
    const TimeBinEncoding single = standard_encoding(n_bins);
    const int group = single.qubits;

    TwoPhotonEncoding enc;
    enc.n_bins = n_bins;
    enc.qubits = 2 * group;
    enc.reg_of.push_back(0);
    for (int i = 1; i <= n_bins; ++i)
        enc.reg_of.push_back(single.reg_of[i] << group);
    for (int i = 1; i <= n_bins; ++i)
        for (int j = i + 1; j <= n_bins; ++j)
            enc.reg_of.push_back((single.reg_of[i] << group) | single.reg_of[j]);
    enc.validate();
    return enc;
}

Povm two_photon_povm(const PolarCode& code, double alpha, double tol) {
    return build_sc_povm(code, alpha, tol, two_photon_states());
}

}  // namespace qrx
