#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace qrx {

using Bits = std::vector<uint8_t>;

std::string bits_to_string(const Bits& b);
Bits bits_from_string(const std::string& s);

/// Polar code over N = 2^n bins: K information positions, the rest frozen to 0.
/// Positions are 1-based.
struct PolarCode {
    int n_bins = 0;
    int k_info = 0;
    std::set<int> frozen_positions;

    std::vector<int> info_positions() const;
    void validate() const;
};

/// The standard construction used throughout: N in {2,4,8} with frozen sets
/// {1}, {1,2} and {1,2,3,5}.
PolarCode standard_code(int n_bins);

/// x = u * G_N over GF(2), G_N the n-fold Kronecker power of [[1,0],[1,1]],
/// no bit-reversal. Self-inverse for every power-of-two length.
Bits polar_transform(const Bits& u);

struct CodebookEntry {
    Bits message;   // full N-bit input u, frozen positions = 0
    Bits codeword;  // x = u G
};

struct Codebook {
    std::vector<CodebookEntry> entries;  // lexicographic in message
};

Codebook build_codebook(const PolarCode& code);

}  // namespace qrx
