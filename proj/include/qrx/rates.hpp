#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "qrx/scdecoder.hpp"

namespace qrx {

struct InputDistribution {
    std::vector<double> p;
};

/// Binary entropy in bits, 0 log 0 := 0.
double binary_entropy(double x);

/// Shannon mutual information I(Y;U) in bits for a discrete channel.
double mutual_information(const TransitionMatrix& channel, const InputDistribution& input);

struct CapacityResult {
    InputDistribution input;   // canonicalized optimum
    double bits = 0.0;         // channel capacity estimate
    int iterations = 0;
};

/// Capacity-achieving input via Blahut-Arimoto ascent. Converges when
/// successive capacity estimates differ by less than tol_bits. Messages with
/// identical channel rows are canonicalized: the group's mass is assigned to
/// the lexicographically smallest member.
CapacityResult optimize_input(const TransitionMatrix& channel, double tol_bits = 1e-10,
                              int max_iterations = 200000);

/// Bits per photon: I / (N * nbar).
double pie(double mutual_information_bits, int n_bins, double nbar);

enum class C1Form { Helstrom, Verbatim };

/// Single-symbol BPSK capacity 1 - h2(err). Helstrom uses the minimum-error
/// probability (1 - sqrt(1 - e^{-4 nbar}))/2; Verbatim keeps the misplaced
/// radical (1 - sqrt(e^{-4 nbar}))/2 for reference.
double dolinar_capacity(double nbar, C1Form form = C1Form::Helstrom);
double dolinar_pie(double nbar, C1Form form = C1Form::Helstrom);

/// Holevo limit h2((1 - e^{-2 nbar})/2), per photon.
double holevo_capacity(double nbar);
double holevo_pie(double nbar);

/// dolinar_pie increases monotonically as nbar -> 0; its supremum.
double dolinar_pie_limit();

struct RatePoint {
    double nbar = 0.0;
    double alpha = 0.0;
    double mutual_information_bits = 0.0;
    double pie = 0.0;
    InputDistribution optimal_input;
};

struct AlphaGrid {
    double min = 5e-3;
    double max = 0.5;
    int points = 25;
};

/// Log-spaced scan of PIE over alpha with nested input optimization, then
/// golden-section refinement on the bracketing interval.
RatePoint optimize_alpha(const ChannelBuilder& build, int n_bins, const AlphaGrid& grid,
                         double ba_tol_bits = 1e-10, int golden_iterations = 40);

/// Rate point at fixed alpha (input optimization only).
RatePoint rate_point(const ChannelBuilder& build, int n_bins, double alpha,
                     double ba_tol_bits = 1e-10);

}  // namespace qrx
