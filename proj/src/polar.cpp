#include "qrx/polar.hpp"

#include <stdexcept>

namespace qrx {

std::string bits_to_string(const Bits& b) {
    std::string s;
    s.reserve(b.size());
    for (uint8_t v : b) s.push_back(v ? '1' : '0');
    return s;
}

Bits bits_from_string(const std::string& s) {
    Bits b;
    b.reserve(s.size());
    for (char c : s) {
        if (c != '0' && c != '1') throw std::invalid_argument("bit string: " + s);
        b.push_back(c == '1');
    }
    return b;
}

std::vector<int> PolarCode::info_positions() const {
    std::vector<int> info;
    for (int i = 1; i <= n_bins; ++i)
        if (!frozen_positions.count(i)) info.push_back(i);
    return info;
}

void PolarCode::validate() const {
    if (n_bins < 2 || (n_bins & (n_bins - 1)) != 0)
        throw std::invalid_argument("n_bins must be a power of two >= 2");
    if (static_cast<int>(frozen_positions.size()) != n_bins - k_info)
        throw std::invalid_argument("|frozen| must equal N - K");
    for (int p : frozen_positions)
        if (p < 1 || p > n_bins) throw std::invalid_argument("frozen position out of range");
}

PolarCode standard_code(int n_bins) {
    switch (n_bins) {
        case 2: return {2, 1, {1}};
        case 4: return {4, 2, {1, 2}};
        case 8: return {8, 4, {1, 2, 3, 5}};
        default: throw std::invalid_argument("standard_code: N must be 2, 4 or 8");
    }
}

Bits polar_transform(const Bits& u) {
    const size_t n = u.size();
    if (n < 2 || (n & (n - 1)) != 0)
        throw std::invalid_argument("polar_transform: length must be a power of two");
    Bits x = u;
    for (size_t len = 1; len < n; len <<= 1)
        for (size_t i = 0; i < n; i += 2 * len)
            for (size_t j = 0; j < len; ++j)
                x[i + j] ^= x[i + j + len];
    return x;
}

Codebook build_codebook(const PolarCode& code) {
    code.validate();
    const auto info = code.info_positions();
    Codebook cb;
    cb.entries.reserve(size_t{1} << code.k_info);
    for (uint32_t m = 0; m < (1u << code.k_info); ++m) {
        Bits u(code.n_bins, 0);
        for (int b = 0; b < code.k_info; ++b)
            u[info[b] - 1] = (m >> (code.k_info - 1 - b)) & 1;
        cb.entries.push_back({u, polar_transform(u)});
    }
    return cb;
}

}  // namespace qrx
