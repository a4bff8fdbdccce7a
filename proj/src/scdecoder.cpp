#include "qrx/scdecoder.hpp"

#include <Eigen/Eigenvalues>
#include <nlohmann/json.hpp>
#include <stdexcept>

namespace qrx {

using json = nlohmann::ordered_json;

StateBuilder single_photon_states() {
    return [](const Bits& x, double alpha) { return bpsk_codeword_state(x, alpha).amplitudes; };
}

StateBuilder two_photon_states() {
    return [](const Bits& x, double alpha) { return two_photon_codeword_state(x, alpha).amplitudes; };
}

Mat Povm::sum() const {
    Mat s = Mat::Zero(dim(), dim());
    for (const auto& e : elements) s += e;
    return s;
}

void TransitionMatrix::validate(double tol) const {
    if (p.rows() != static_cast<Eigen::Index>(inputs.size()) ||
        p.cols() != static_cast<Eigen::Index>(outputs.size()))
        throw std::invalid_argument("transition matrix: label/shape mismatch");
    for (Eigen::Index a = 0; a < p.rows(); ++a) {
        if (std::abs(p.row(a).sum() - 1.0) > tol)
            throw std::invalid_argument("transition matrix: row does not sum to 1");
        for (Eigen::Index b = 0; b < p.cols(); ++b)
            if (p(a, b) < -1e-12 || p(a, b) > 1.0 + 1e-12)
                throw std::invalid_argument("transition matrix: entry outside [0,1]");
    }
}

Mat averaged_density(const PolarCode& code, const Bits& prefix, double alpha,
                     const StateBuilder& states) {
    code.validate();
    const int n = code.n_bins;
    const int k = static_cast<int>(prefix.size());
    if (k > n) throw std::invalid_argument("averaged_density: prefix longer than N");
    for (int pos : code.frozen_positions)
        if (pos <= k && prefix[pos - 1] != 0)
            throw std::invalid_argument("averaged_density: prefix violates a frozen value");

    Bits u(n, 0);
    std::copy(prefix.begin(), prefix.end(), u.begin());
    const int free = n - k;
    Mat acc;
    for (uint32_t tail = 0; tail < (1u << free); ++tail) {
        for (int b = 0; b < free; ++b) u[k + b] = (tail >> (free - 1 - b)) & 1;
        const Vec v = states(polar_transform(u), alpha);
        if (acc.size() == 0) acc = Mat::Zero(v.size(), v.size());
        acc += v * v.adjoint();
    }
    return acc / static_cast<double>(1u << free);
}

std::pair<Mat, Mat> eigenspace_projectors(const Mat& delta, double tol) {
    if (delta.rows() != delta.cols())
        throw std::invalid_argument("eigenspace_projectors: square matrix required");
    const double scale = std::max(1e-300, delta.cwiseAbs().maxCoeff());
    if ((delta - delta.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * scale)
        throw std::invalid_argument("eigenspace_projectors: input not Hermitian");

    const Eigen::Index d = delta.rows();
    Eigen::VectorXd evals;
    Mat evecs;
    // BPSK states are real; use the symmetric solver when the matrix is real.
    if (delta.imag().cwiseAbs().maxCoeff() <= 1e-14 * scale) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(delta.real());
        evals = es.eigenvalues();
        evecs = es.eigenvectors().cast<std::complex<double>>();
    } else {
        Eigen::SelfAdjointEigenSolver<Mat> es(delta);
        evals = es.eigenvalues();
        evecs = es.eigenvectors();
    }
    if (tol < 0) tol = 1e-10 * evals.cwiseAbs().maxCoeff();

    Mat plus = Mat::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        if (evals(i) >= -tol) plus += evecs.col(i) * evecs.col(i).adjoint();
    return {plus, Mat::Identity(d, d) - plus};
}

Povm build_sc_povm(const PolarCode& code, double alpha, double tol, const StateBuilder& states) {
    code.validate();
    const auto info = code.info_positions();
    const Codebook cb = build_codebook(code);

    // Branch projectors are shared across messages; cache per (position, prefix).
    struct Node {
        Mat plus, minus;
    };
    std::vector<std::vector<Node>> cache(info.size());
    for (size_t l = 0; l < info.size(); ++l) cache[l].resize(size_t{1} << l);

    Povm povm;
    for (const auto& e : cb.entries) {
        std::vector<const Mat*> path;
        for (size_t l = 0; l < info.size(); ++l) {
            const int i = info[l];
            uint32_t idx = 0;
            for (size_t m = 0; m < l; ++m) idx = (idx << 1) | e.message[info[m] - 1];
            Node& node = cache[l][idx];
            if (node.plus.size() == 0) {
                Bits p0(e.message.begin(), e.message.begin() + i);
                Bits p1 = p0;
                p0[i - 1] = 0;
                p1[i - 1] = 1;
                const Mat d = averaged_density(code, p0, alpha, states) -
                              averaged_density(code, p1, alpha, states);
                std::tie(node.plus, node.minus) = eigenspace_projectors(d, tol);
            }
            path.push_back(e.message[i - 1] ? &node.minus : &node.plus);
        }
        Mat lambda = *path.back();
        for (size_t l = path.size(); l-- > 1;) {
            const Mat& outer = *path[l - 1];
            lambda = outer * lambda * outer;
        }
        povm.labels.push_back(bits_to_string(e.message));
        povm.elements.push_back(std::move(lambda));
    }
    return povm;
}

TransitionMatrix transition_matrix(const Povm& povm, const Codebook& codebook, double alpha,
                                   const StateBuilder& states) {
    TransitionMatrix tm;
    tm.outputs = povm.labels;
    tm.p.resize(codebook.entries.size(), povm.elements.size());
    for (size_t a = 0; a < codebook.entries.size(); ++a) {
        const auto& e = codebook.entries[a];
        tm.inputs.push_back(bits_to_string(e.message));
        const Vec v = states(e.codeword, alpha);
        if (v.size() != povm.dim())
            throw std::invalid_argument("transition_matrix: state/POVM dimension mismatch");
        for (size_t b = 0; b < povm.elements.size(); ++b) {
            const double pr = std::real(v.dot(povm.elements[b] * v));
            tm.p(a, b) = std::max(0.0, pr);
        }
    }
    return tm;
}

TransitionMatrix effective_channel(const PolarCode& code, double alpha, const Povm& povm,
                                   MultiphotonPolicy, int max_photons,
                                   const StateBuilder& states) {
    const Codebook cb = build_codebook(code);
    TransitionMatrix tm = transition_matrix(povm, cb, alpha, states);
    const double eps =
        residual_multiphoton_probability(Bits(code.n_bins, 0), alpha, max_photons);
    const double uniform = 1.0 / static_cast<double>(tm.outputs.size());
    tm.p = (1.0 - eps) * tm.p +
           Eigen::MatrixXd::Constant(tm.p.rows(), tm.p.cols(), eps * uniform);
    return tm;
}

static json matrix_to_json(const Mat& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (std::abs(m(r, c).imag()) > 1e-14)
                row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
            else
                row.push_back(m(r, c).real());
        }
        rows.push_back(row);
    }
    return rows;
}

std::string povm_to_json(const Povm& povm) {
    json j;
    j["dim"] = povm.dim();
    j["elements"] = json::object();
    for (size_t i = 0; i < povm.labels.size(); ++i)
        j["elements"][povm.labels[i]] = matrix_to_json(povm.elements[i]);
    return j.dump(2);
}

std::string transition_to_json(const TransitionMatrix& tm) {
    json j;
    j["inputs"] = tm.inputs;
    j["outputs"] = tm.outputs;
    json rows = json::array();
    for (Eigen::Index r = 0; r < tm.p.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < tm.p.cols(); ++c) row.push_back(tm.p(r, c));
        rows.push_back(row);
    }
    j["p"] = rows;
    return j.dump(2);
}

}  // namespace qrx
