#include "qrx/hilbert.hpp"

#include <cmath>
#include <stdexcept>

namespace qrx {

int TruncatedBasis::index_of(const std::vector<int>& pattern) const {
    for (int i = 0; i < dim(); ++i)
        if (patterns[i] == pattern) return i;
    return -1;
}

TruncatedBasis make_basis(int n_bins, int max_photons) {
    if (n_bins < 1) throw std::invalid_argument("make_basis: n_bins >= 1 required");
    if (max_photons != 1 && max_photons != 2)
        throw std::invalid_argument("make_basis: max_photons must be 1 or 2");
    if (max_photons == 2 && n_bins < 2)
        throw std::invalid_argument("make_basis: two-photon basis needs N >= 2");
    TruncatedBasis b;
    b.n_bins = n_bins;
    b.max_photons = max_photons;
    b.patterns.push_back({});
    for (int i = 1; i <= n_bins; ++i) b.patterns.push_back({i});
    if (max_photons == 2)
        for (int i = 1; i <= n_bins; ++i)
            for (int j = i + 1; j <= n_bins; ++j) b.patterns.push_back({i, j});
    return b;
}

Eigen::VectorXcd coherent_truncated(double alpha, int max_photons) {
    if (alpha < 0) throw std::invalid_argument("coherent_truncated: alpha >= 0 required");
    if (max_photons < 1) throw std::invalid_argument("coherent_truncated: max_photons >= 1");
    Eigen::VectorXcd v(max_photons + 1);
    const double pre = std::exp(-0.5 * alpha * alpha);
    double term = 1.0;  // alpha^j / sqrt(j!)
    v(0) = pre;
    for (int j = 1; j <= max_photons; ++j) {
        term *= alpha / std::sqrt(static_cast<double>(j));
        v(j) = pre * term;
    }
    return v;
}

TruncatedPhotonicState bpsk_codeword_state(const Bits& codeword, double alpha) {
    if (alpha < 0) throw std::invalid_argument("bpsk_codeword_state: alpha >= 0 required");
    const int n = static_cast<int>(codeword.size());
    TruncatedPhotonicState st;
    st.basis = make_basis(n, 1);
    st.amplitudes.resize(n + 1);
    st.amplitudes(0) = 1.0;
    for (int i = 0; i < n; ++i)
        st.amplitudes(i + 1) = (codeword[i] ? -alpha : alpha);
    st.amplitudes /= std::sqrt(1.0 + n * alpha * alpha);
    return st;
}

TruncatedPhotonicState two_photon_codeword_state(const Bits& codeword, double alpha) {
    if (alpha < 0) throw std::invalid_argument("two_photon_codeword_state: alpha >= 0 required");
    const int n = static_cast<int>(codeword.size());
    if (n < 2) throw std::invalid_argument("two_photon_codeword_state: N >= 2 required");
    TruncatedPhotonicState st;
    st.basis = make_basis(n, 2);
    st.amplitudes.resize(st.basis.dim());
    st.amplitudes(0) = 1.0;
    int k = 1;
    for (int i = 0; i < n; ++i)
        st.amplitudes(k++) = (codeword[i] ? -alpha : alpha);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            st.amplitudes(k++) = ((codeword[i] ^ codeword[j]) ? -1.0 : 1.0) * alpha * alpha;
    const double pairs = 0.5 * n * (n - 1);
    st.amplitudes /= std::sqrt(1.0 + n * alpha * alpha + pairs * std::pow(alpha, 4));
    return st;
}

double residual_multiphoton_probability(const Bits& codeword, double alpha, int max_photons) {
    if (alpha < 0) throw std::invalid_argument("residual: alpha >= 0 required");
    const double n = static_cast<double>(codeword.size());
    const double na2 = n * alpha * alpha;
    double truncated = 1.0 + na2;
    if (max_photons == 2) truncated += 0.5 * n * (n - 1) * std::pow(alpha, 4);
    else if (max_photons != 1)
        throw std::invalid_argument("residual: max_photons must be 1 or 2");
    return 1.0 - std::exp(-na2) * truncated;
}

}  // namespace qrx
