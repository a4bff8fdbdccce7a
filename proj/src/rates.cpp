#include "qrx/rates.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace qrx {

namespace {
constexpr double kLog2 = 0.6931471805599453;

double xlogx(double x) { return x > 0 ? x * std::log(x) : 0.0; }
}  // namespace

double binary_entropy(double x) {
    if (x < 0.0 || x > 1.0) throw std::invalid_argument("binary_entropy: x in [0,1] required");
    return -(xlogx(x) + xlogx(1.0 - x)) / kLog2;
}

double mutual_information(const TransitionMatrix& channel, const InputDistribution& input) {
    const auto& P = channel.p;
    if (static_cast<Eigen::Index>(input.p.size()) != P.rows())
        throw std::invalid_argument("mutual_information: input size mismatch");
    Eigen::VectorXd y = Eigen::VectorXd::Zero(P.cols());
    for (Eigen::Index a = 0; a < P.rows(); ++a) y += input.p[a] * P.row(a).transpose();
    double hy = 0.0;
    for (Eigen::Index b = 0; b < P.cols(); ++b) hy -= xlogx(y(b));
    double hyu = 0.0;
    for (Eigen::Index a = 0; a < P.rows(); ++a) {
        double h = 0.0;
        for (Eigen::Index b = 0; b < P.cols(); ++b) h -= xlogx(P(a, b));
        hyu += input.p[a] * h;
    }
    return (hy - hyu) / kLog2;
}

namespace {

/// Groups of messages with identical rows; group mass goes to the smallest index.
void canonicalize(const Eigen::MatrixXd& P, std::vector<double>& p) {
    const double tol = 1e-9;
    for (Eigen::Index a = 0; a < P.rows(); ++a) {
        for (Eigen::Index b = 0; b < a; ++b) {
            if ((P.row(a) - P.row(b)).cwiseAbs().maxCoeff() < tol) {
                p[b] += p[a];
                p[a] = 0.0;
                break;
            }
        }
    }
}

}  // namespace

CapacityResult optimize_input(const TransitionMatrix& channel, double tol_bits,
                              int max_iterations) {
    channel.validate();
    const auto& P = channel.p;
    const Eigen::Index m = P.rows();
    std::vector<double> p(m, 1.0 / static_cast<double>(m));

    double last_nats = -1.0;
    int it = 0;
    for (; it < max_iterations; ++it) {
        Eigen::VectorXd y = Eigen::VectorXd::Zero(P.cols());
        for (Eigen::Index a = 0; a < m; ++a) y += p[a] * P.row(a).transpose();
        // c_u = exp KL(P(.|u) || y)
        std::vector<double> c(m);
        for (Eigen::Index a = 0; a < m; ++a) {
            double kl = 0.0;
            for (Eigen::Index b = 0; b < P.cols(); ++b)
                if (P(a, b) > 0) kl += P(a, b) * std::log(P(a, b) / std::max(y(b), 1e-300));
            c[a] = std::exp(kl);
        }
        double z = 0.0;
        for (Eigen::Index a = 0; a < m; ++a) z += p[a] * c[a];
        const double nats = std::log(z);
        for (Eigen::Index a = 0; a < m; ++a) p[a] *= c[a] / z;
        if (std::abs(nats - last_nats) < tol_bits * kLog2) {
            last_nats = nats;
            break;
        }
        last_nats = nats;
    }
    canonicalize(P, p);
    CapacityResult res;
    res.input.p = std::move(p);
    res.bits = last_nats / kLog2;
    res.iterations = it + 1;
    return res;
}

double pie(double mutual_information_bits, int n_bins, double nbar) {
    if (nbar <= 0) throw std::invalid_argument("pie: nbar > 0 required");
    return mutual_information_bits / (n_bins * nbar);
}

double dolinar_capacity(double nbar, C1Form form) {
    if (nbar <= 0) throw std::invalid_argument("dolinar_capacity: nbar > 0 required");
    const double err = form == C1Form::Helstrom
                           ? 0.5 * (1.0 - std::sqrt(1.0 - std::exp(-4.0 * nbar)))
                           : 0.5 * (1.0 - std::sqrt(std::exp(-4.0 * nbar)));
    return 1.0 - binary_entropy(err);
}

double dolinar_pie(double nbar, C1Form form) { return dolinar_capacity(nbar, form) / nbar; }

double holevo_capacity(double nbar) {
    if (nbar <= 0) throw std::invalid_argument("holevo_capacity: nbar > 0 required");
    return binary_entropy(0.5 * (1.0 - std::exp(-2.0 * nbar)));
}

double holevo_pie(double nbar) { return holevo_capacity(nbar) / nbar; }

double dolinar_pie_limit() { return 2.0 / kLog2; }

RatePoint rate_point(const ChannelBuilder& build, int n_bins, double alpha, double ba_tol_bits) {
    const TransitionMatrix tm = build(alpha);
    const CapacityResult cr = optimize_input(tm, ba_tol_bits);
    RatePoint pt;
    pt.alpha = alpha;
    pt.nbar = alpha * alpha;
    pt.mutual_information_bits = cr.bits;
    pt.pie = pie(cr.bits, n_bins, pt.nbar);
    pt.optimal_input = cr.input;
    return pt;
}

RatePoint optimize_alpha(const ChannelBuilder& build, int n_bins, const AlphaGrid& grid,
                         double ba_tol_bits, int golden_iterations) {
    if (grid.points < 2 || grid.min <= 0 || grid.max <= grid.min)
        throw std::invalid_argument("optimize_alpha: invalid grid");
    std::vector<double> alphas(grid.points);
    const double lmin = std::log(grid.min), lmax = std::log(grid.max);
    for (int i = 0; i < grid.points; ++i)
        alphas[i] = std::exp(lmin + (lmax - lmin) * i / (grid.points - 1));

    std::vector<RatePoint> pts(grid.points);
    for (int i = 0; i < grid.points; ++i)
        pts[i] = rate_point(build, n_bins, alphas[i], ba_tol_bits);
    int best = 0;
    for (int i = 1; i < grid.points; ++i)
        if (pts[i].pie > pts[best].pie) best = i;

    // Golden-section on the log-alpha bracketing interval.
    double a = std::log(alphas[std::max(0, best - 1)]);
    double b = std::log(alphas[std::min(grid.points - 1, best + 1)]);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - gr * (b - a), d = a + gr * (b - a);
    RatePoint pc = rate_point(build, n_bins, std::exp(c), ba_tol_bits);
    RatePoint pd = rate_point(build, n_bins, std::exp(d), ba_tol_bits);
    RatePoint best_pt = pts[best];
    for (int i = 0; i < golden_iterations; ++i) {
        if (pc.pie > pd.pie) {
            b = d;
            d = c;
            pd = pc;
            c = b - gr * (b - a);
            pc = rate_point(build, n_bins, std::exp(c), ba_tol_bits);
        } else {
            a = c;
            c = d;
            pc = pd;
            d = a + gr * (b - a);
            pd = rate_point(build, n_bins, std::exp(d), ba_tol_bits);
        }
        if (b - a < 1e-6) break;
    }
    for (const RatePoint* q : {&pc, &pd})
        if (q->pie > best_pt.pie) best_pt = *q;
    return best_pt;
}

}  // namespace qrx
