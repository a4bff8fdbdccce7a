#include "qrx/qsim.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <set>
#include <stdexcept>
#include <unsupported/Eigen/KroneckerProduct>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qrx {

using json = nlohmann::ordered_json;

namespace {

const Mat& pauli(int i) {
    static const Mat I = Mat::Identity(2, 2);
    static const Mat X = (Mat(2, 2) << 0, 1, 1, 0).finished();
    static const Mat Y = (Mat(2, 2) << 0, std::complex<double>(0, -1),
                          std::complex<double>(0, 1), 0).finished();
    static const Mat Z = (Mat(2, 2) << 1, 0, 0, -1).finished();
    static const Mat* ps[4] = {&I, &X, &Y, &Z};
    return *ps[i];
}

Mat hadamard() {
    static const double s = 1.0 / std::sqrt(2.0);
    return (Mat(2, 2) << s, s, s, -s).finished();
}

Mat controlled(const Mat& u) {
    Mat c = Mat::Identity(4, 4);
    c.block(2, 2, 2, 2) = u;
    return c;
}

Mat gate_matrix(const std::string& name) {
    if (name == "H") return hadamard();
    if (name == "X") return pauli(1);
    if (name == "Z") return pauli(3);
    if (name == "CH") return controlled(hadamard());
    if (name == "CNOT") return controlled(pauli(1));
    throw std::invalid_argument("unknown gate: " + name);
}

}  // namespace

DensityMatrix DensityMatrix::zero_state(int qubits) {
    DensityMatrix dm;
    dm.qubits = qubits;
    dm.m = Mat::Zero(1 << qubits, 1 << qubits);
    dm.m(0, 0) = 1.0;
    return dm;
}

PauliModel pauli_model_from_string(const std::string& name) {
    if (name == "independent") return PauliModel::Independent;
    if (name == "uniform") return PauliModel::Uniform;
    if (name == "paired") return PauliModel::Paired;
    throw std::invalid_argument("unknown Pauli model: " + name);
}

std::string to_string(PauliModel model) {
    switch (model) {
        case PauliModel::Independent: return "independent";
        case PauliModel::Uniform: return "uniform";
        case PauliModel::Paired: return "paired";
    }
    return "?";
}

KrausChannel pauli_channel(PauliModel model, double p, int arity) {
    if (p < 0.0 || p >= 1.0) throw std::invalid_argument("pauli_channel: p in [0,1) required");
    if (arity != 1 && arity != 2) throw std::invalid_argument("pauli_channel: arity 1 or 2");
    KrausChannel ch;
    ch.arity = arity;
    if (arity == 1) {
        ch.ops.push_back(std::sqrt(1.0 - p) * pauli(0));
        for (int i = 1; i < 4; ++i) ch.ops.push_back(std::sqrt(p / 3.0) * pauli(i));
        return ch;
    }
    switch (model) {
        case PauliModel::Independent: {
            const KrausChannel one = pauli_channel(model, p, 1);
            for (const auto& a : one.ops)
                for (const auto& b : one.ops)
                    ch.ops.push_back(Eigen::kroneckerProduct(a, b).eval());
            break;
        }
        case PauliModel::Paired:
            ch.ops.push_back(std::sqrt(1.0 - p) * Mat::Identity(4, 4));
            for (int a = 1; a < 4; ++a)
                for (int b = 1; b < 4; ++b)
                    ch.ops.push_back(std::sqrt(p / 9.0) *
                                     Eigen::kroneckerProduct(pauli(a), pauli(b)).eval());
            break;
        case PauliModel::Uniform:
            ch.ops.push_back(std::sqrt(1.0 - p) * Mat::Identity(4, 4));
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b) {
                    if (a == 0 && b == 0) continue;
                    ch.ops.push_back(std::sqrt(p / 15.0) *
                                     Eigen::kroneckerProduct(pauli(a), pauli(b)).eval());
                }
            break;
    }
    return ch;
}

Mat embed_operator(const Mat& op, int nq, const std::vector<int>& targets) {
    const int t = static_cast<int>(targets.size());
    if (op.rows() != (1 << t) || op.cols() != (1 << t))
        throw std::invalid_argument("embed_operator: operator/target size mismatch");
    for (int q : targets)
        if (q < 0 || q >= nq) throw std::invalid_argument("embed_operator: target out of range");

    const int d = 1 << nq;
    Mat full = Mat::Zero(d, d);
    for (int in = 0; in < d; ++in) {
        int tin = 0;
        for (int i = 0; i < t; ++i)
            tin = (tin << 1) | ((in >> (nq - 1 - targets[i])) & 1);
        for (int tout = 0; tout < (1 << t); ++tout) {
            const std::complex<double> amp = op(tout, tin);
            if (amp == std::complex<double>(0, 0)) continue;
            int out = in;
            for (int i = 0; i < t; ++i) {
                const int bitpos = nq - 1 - targets[i];
                out = (out & ~(1 << bitpos)) | (((tout >> (t - 1 - i)) & 1) << bitpos);
            }
            full(out, in) += amp;
        }
    }
    return full;
}

DensityMatrix apply_unitary(const DensityMatrix& rho, const Mat& u,
                            const std::vector<int>& targets) {
    if ((u * u.adjoint() - Mat::Identity(u.rows(), u.rows())).cwiseAbs().maxCoeff() > 1e-10)
        throw std::invalid_argument("apply_unitary: operator is not unitary");
    const Mat full = embed_operator(u, rho.qubits, targets);
    DensityMatrix out;
    out.qubits = rho.qubits;
    out.m.noalias() = full * rho.m * full.adjoint();
    return out;
}

DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& channel,
                            const std::vector<int>& targets) {
    Mat tp = Mat::Zero(channel.ops[0].cols(), channel.ops[0].cols());
    for (const auto& a : channel.ops) tp += a.adjoint() * a;
    if ((tp - Mat::Identity(tp.rows(), tp.rows())).cwiseAbs().maxCoeff() > 1e-10)
        throw std::invalid_argument("apply_channel: channel is not trace preserving");
    DensityMatrix out;
    out.qubits = rho.qubits;
    out.m = Mat::Zero(rho.m.rows(), rho.m.cols());
    for (const auto& a : channel.ops) {
        const Mat full = embed_operator(a, rho.qubits, targets);
        out.m.noalias() += full * rho.m * full.adjoint();
    }
    return out;
}

Mat transducer_channel(const Mat& photonic_dm, double p) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("transducer_channel: p in [0,1]");
    const Eigen::Index d = photonic_dm.rows();
    return (1.0 - p) * photonic_dm +
           (p * photonic_dm.trace().real() / static_cast<double>(d)) * Mat::Identity(d, d);
}

void TimeBinEncoding::validate() const {
    if (static_cast<int>(reg_of.size()) != n_bins + 1)
        throw std::invalid_argument("encoding: needs one entry per level");
    if (reg_of[0] != 0) throw std::invalid_argument("encoding: vacuum must map to all-zeros");
    std::set<uint32_t> seen;
    for (uint32_t r : reg_of) {
        if (r >= (1u << qubits)) throw std::invalid_argument("encoding: string out of range");
        if (!seen.insert(r).second) throw std::invalid_argument("encoding: collision");
    }
}

TimeBinEncoding standard_encoding(int n_bins) {
    TimeBinEncoding enc;
    enc.n_bins = n_bins;
    enc.qubits = static_cast<int>(std::ceil(std::log2(n_bins + 1)));
    enc.reg_of.push_back(0);
    for (int i = 1; i <= n_bins; ++i)
        enc.reg_of.push_back((1u << (enc.qubits - 1)) | static_cast<uint32_t>(i - 1));
    enc.validate();
    return enc;
}

Mat compression_isometry(const TimeBinEncoding& enc) {
    enc.validate();
    Mat v = Mat::Zero(1 << enc.qubits, enc.n_bins + 1);
    for (int lvl = 0; lvl <= enc.n_bins; ++lvl) v(enc.reg_of[lvl], lvl) = 1.0;
    return v;
}

const Mat& CompressionProcess::image(int j, int k) const {
    const int n = encoding.n_bins;
    if (j > k || k > n) throw std::invalid_argument("CompressionProcess::image: bad indices");
    // offset of row j in the upper triangle of an (n+1)x(n+1) grid
    const int off = j * (n + 1) - j * (j - 1) / 2;
    return images[off + (k - j)];
}

Mat CompressionProcess::apply(const Mat& photonic_dm) const {
    const int n = encoding.n_bins;
    if (photonic_dm.rows() != n + 1)
        throw std::invalid_argument("CompressionProcess::apply: dimension mismatch");
    const Eigen::Index d = 1 << encoding.qubits;
    Mat out = Mat::Zero(d, d);
    for (int j = 0; j <= n; ++j) {
        out += photonic_dm(j, j).real() * image(j, j);
        for (int k = j + 1; k <= n; ++k) {
            const Mat& img = image(j, k);
            out += photonic_dm(j, k) * img + photonic_dm(k, j) * img.adjoint();
        }
    }
    return out;
}

namespace {

/// Per-bin machinery on the (control, register) space; control is qubit 0.
struct BinOps {
    std::vector<Mat> unitaries;           // CNOTs then H on the control
    std::vector<std::vector<Mat>> noise;  // Kraus set after each unitary (may be empty)
    Eigen::VectorXd reflect;              // +-1 diagonal fixing the "-" outcome
};

std::vector<BinOps> make_bin_ops(const TimeBinEncoding& enc, const GateNoise& noise) {
    const int nq = enc.qubits + 1;
    const int reg_dim = 1 << enc.qubits;
    const Mat cnot = gate_matrix("CNOT");
    const Mat h = hadamard();
    const KrausChannel n2 = noise.enabled() ? pauli_channel(noise.model, noise.p, 2) : KrausChannel{};
    const KrausChannel n1 = noise.enabled() ? pauli_channel(noise.model, noise.p, 1) : KrausChannel{};

    std::vector<BinOps> bins;
    for (int i = 1; i <= enc.n_bins; ++i) {
        BinOps ops;
        for (int t = 0; t < enc.qubits; ++t) {
            if (!((enc.reg_of[i] >> (enc.qubits - 1 - t)) & 1)) continue;
            ops.unitaries.push_back(embed_operator(cnot, nq, {0, 1 + t}));
            ops.noise.emplace_back();
            if (noise.enabled())
                for (const auto& a : n2.ops)
                    ops.noise.back().push_back(embed_operator(a, nq, {0, 1 + t}));
        }
        ops.unitaries.push_back(embed_operator(h, nq, {0}));
        ops.noise.emplace_back();
        if (noise.enabled())
            for (const auto& a : n1.ops)
                ops.noise.back().push_back(embed_operator(a, nq, {0}));
        ops.reflect = Eigen::VectorXd::Ones(reg_dim);
        ops.reflect(enc.reg_of[i]) = -1.0;
        bins.push_back(std::move(ops));
    }
    return bins;
}

/// Evolves the image of the photonic matrix unit |j><k| through all bins.
Mat evolve_unit(const TimeBinEncoding& enc, const std::vector<BinOps>& bins, int j, int k) {
    const int reg_dim = 1 << enc.qubits;
    Mat reg = Mat::Zero(reg_dim, reg_dim);
    reg(0, 0) = 1.0;
    Mat joint(2 * reg_dim, 2 * reg_dim);
    for (int i = 1; i <= enc.n_bins; ++i) {
        const int cket = (i == j) ? 1 : 0;
        const int cbra = (i == k) ? 1 : 0;
        joint.setZero();
        joint.block(cket * reg_dim, cbra * reg_dim, reg_dim, reg_dim) = reg;
        const BinOps& ops = bins[i - 1];
        for (size_t g = 0; g < ops.unitaries.size(); ++g) {
            joint = (ops.unitaries[g] * joint * ops.unitaries[g].adjoint()).eval();
            if (!ops.noise[g].empty()) {
                Mat acc = Mat::Zero(joint.rows(), joint.cols());
                for (const auto& a : ops.noise[g]) acc.noalias() += a * joint * a.adjoint();
                joint = std::move(acc);
            }
        }
        // measure the control; the "-" branch gets the recorded phase fix
        const Mat b0 = joint.topLeftCorner(reg_dim, reg_dim);
        const Mat b1 = joint.bottomRightCorner(reg_dim, reg_dim);
        reg = b0 + ops.reflect.asDiagonal() * b1 * ops.reflect.asDiagonal();
    }
    return reg;
}

}  // namespace

CompressionProcess build_compression_process(const TimeBinEncoding& enc, const GateNoise& noise,
                                             ExecPolicy policy) {
    enc.validate();
    const auto bins = make_bin_ops(enc, noise);
    const int n = enc.n_bins;
    const int units = (n + 1) * (n + 2) / 2;

    CompressionProcess proc;
    proc.encoding = enc;
    proc.images.resize(units);

    std::vector<std::pair<int, int>> jk;
    jk.reserve(units);
    for (int j = 0; j <= n; ++j)
        for (int k = j; k <= n; ++k) jk.emplace_back(j, k);

    if (policy == ExecPolicy::Parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int u = 0; u < units; ++u)
            proc.images[u] = evolve_unit(enc, bins, jk[u].first, jk[u].second);
    } else {
        for (int u = 0; u < units; ++u)
            proc.images[u] = evolve_unit(enc, bins, jk[u].first, jk[u].second);
    }
    return proc;
}

DensityMatrix compression_circuit(const Mat& photonic_dm, const TimeBinEncoding& enc,
                                  const GateNoise& noise, ExecPolicy policy) {
    DensityMatrix out;
    out.qubits = enc.qubits;
    if (!noise.enabled()) {
        const Mat v = compression_isometry(enc);
        out.m = v * photonic_dm * v.adjoint();
        return out;
    }
    const CompressionProcess proc = build_compression_process(enc, noise, policy);
    out.m = proc.apply(photonic_dm);
    return out;
}

DensityMatrix compression_circuit_reference(const Mat& photonic_dm, const TimeBinEncoding& enc,
                                            const GateNoise& noise) {
    enc.validate();
    const int dph = enc.n_bins + 1;
    const int reg_dim = 1 << enc.qubits;
    const int dcr = 2 * reg_dim;
    const int d = dph * dcr;
    if (photonic_dm.rows() != dph)
        throw std::invalid_argument("compression_circuit_reference: dimension mismatch");

    const auto bins = make_bin_ops(enc, noise);
    const Mat id_ph = Mat::Identity(dph, dph);

    Mat rho = Mat::Zero(d, d);
    for (int j = 0; j < dph; ++j)
        for (int k = 0; k < dph; ++k)
            rho(j * dcr, k * dcr) = photonic_dm(j, k);  // control |0>, register |0...0>

    for (int i = 1; i <= enc.n_bins; ++i) {
        // extraction: swap |bin i>_ph |0>_c <-> |vac>_ph |1>_c
        Eigen::VectorXi perm(d);
        for (int idx = 0; idx < d; ++idx) perm(idx) = idx;
        for (int s = 0; s < reg_dim; ++s) {
            const int a = i * dcr + s;            // |bin i>|0>|s>
            const int b = reg_dim + s;            // |vac>|1>|s>
            std::swap(perm(a), perm(b));
        }
        Mat permuted(d, d);
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) permuted(r, c) = rho(perm(r), perm(c));
        rho = std::move(permuted);

        const BinOps& ops = bins[i - 1];
        for (size_t g = 0; g < ops.unitaries.size(); ++g) {
            const Mat u = Eigen::kroneckerProduct(id_ph, ops.unitaries[g]).eval();
            rho = (u * rho * u.adjoint()).eval();
            if (!ops.noise[g].empty()) {
                Mat acc = Mat::Zero(d, d);
                for (const auto& a : ops.noise[g]) {
                    const Mat full = Eigen::kroneckerProduct(id_ph, a).eval();
                    acc.noalias() += full * rho * full.adjoint();
                }
                rho = std::move(acc);
            }
        }

        // measure the control, apply the conditional phase fix, reset to |0>
        Eigen::VectorXd refl_cr = Eigen::VectorXd::Ones(dcr);
        for (int s = 0; s < reg_dim; ++s) refl_cr(reg_dim + s) = ops.reflect(s);
        Mat next = Mat::Zero(d, d);
        for (int pj = 0; pj < dph; ++pj)
            for (int pk = 0; pk < dph; ++pk)
                for (int s = 0; s < reg_dim; ++s)
                    for (int t = 0; t < reg_dim; ++t) {
                        const auto b0 = rho(pj * dcr + s, pk * dcr + t);
                        const auto b1 = rho(pj * dcr + reg_dim + s, pk * dcr + reg_dim + t) *
                                        ops.reflect(s) * ops.reflect(t);
                        next(pj * dcr + s, pk * dcr + t) = b0 + b1;
                    }
        rho = std::move(next);
    }

    // trace out photonic and control (all photonic levels have been consumed)
    DensityMatrix out;
    out.qubits = enc.qubits;
    out.m = Mat::Zero(reg_dim, reg_dim);
    for (int pj = 0; pj < dph; ++pj)
        for (int c = 0; c < 2; ++c)
            out.m += rho.block(pj * dcr + c * reg_dim, pj * dcr + c * reg_dim, reg_dim, reg_dim);
    return out;
}

// --- decision trees ---

std::string DecisionTree::decide(const std::string& raw) const {
    for (const auto& rule : table) {
        bool match = true;
        for (size_t i = 0; i < rule.pattern.size() && match; ++i)
            match = rule.pattern[i] == '*' || rule.pattern[i] == raw[i];
        if (match) return rule.decision;
    }
    return "error";
}

std::vector<std::string> DecisionTree::decision_labels() const {
    std::vector<std::string> labels;
    for (const auto& rule : table)
        if (rule.decision != "error" &&
            std::find(labels.begin(), labels.end(), rule.decision) == labels.end())
            labels.push_back(rule.decision);
    labels.push_back("error");
    return labels;
}

namespace {

void validate_node(const TreeNode& node, int qubits, std::set<int> measured) {
    for (const auto& g : node.gates) {
        if (g.target < 0 || g.target >= qubits)
            throw std::invalid_argument("tree: gate target out of range");
        if ((g.gate == "CH" || g.gate == "CNOT") && (g.control < 0 || g.control >= qubits))
            throw std::invalid_argument("tree: gate control out of range");
    }
    if (node.measure < 0) return;
    if (node.measure >= qubits) throw std::invalid_argument("tree: measured qubit out of range");
    if (!measured.insert(node.measure).second)
        throw std::invalid_argument("tree: qubit measured twice on a path");
    if (node.branch0) validate_node(*node.branch0, qubits, measured);
    if (node.branch1) validate_node(*node.branch1, qubits, measured);
}

}  // namespace

void DecisionTree::validate() const {
    if (qubits < 1 || !root) throw std::invalid_argument("tree: empty");
    for (const auto& rule : table)
        if (static_cast<int>(rule.pattern.size()) != qubits)
            throw std::invalid_argument("tree: pattern length mismatch");
    validate_node(*root, qubits, {});
}

namespace {

std::unique_ptr<TreeNode> node_from_json(const json& j) {
    auto node = std::make_unique<TreeNode>();
    if (j.contains("gates"))
        for (const auto& g : j["gates"]) {
            GateOp op;
            op.gate = g.at("gate").get<std::string>();
            op.target = g.at("target").get<int>();
            if (g.contains("control")) op.control = g["control"].get<int>();
            node->gates.push_back(op);
        }
    if (j.contains("measure")) {
        node->measure = j["measure"].get<int>();
        if (j.contains("branches")) {
            const auto& b = j["branches"];
            if (b.contains("0")) node->branch0 = node_from_json(b["0"]);
            if (b.contains("1")) node->branch1 = node_from_json(b["1"]);
        }
    }
    return node;
}

json node_to_json(const TreeNode& node) {
    json j = json::object();
    if (!node.gates.empty()) {
        json gates = json::array();
        for (const auto& g : node.gates) {
            json go;
            go["gate"] = g.gate;
            if (g.control >= 0) go["control"] = g.control;
            go["target"] = g.target;
            gates.push_back(go);
        }
        j["gates"] = gates;
    }
    if (node.measure >= 0) {
        j["measure"] = node.measure;
        json branches = json::object();
        if (node.branch0) branches["0"] = node_to_json(*node.branch0);
        if (node.branch1) branches["1"] = node_to_json(*node.branch1);
        if (!branches.empty()) j["branches"] = branches;
    }
    return j;
}

}  // namespace

DecisionTree decision_tree_from_json(const std::string& text) {
    const json j = json::parse(text);
    DecisionTree tree;
    tree.name = j.value("name", "");
    tree.qubits = j.at("qubits").get<int>();
    tree.root = node_from_json(j.at("root"));
    for (const auto& row : j.at("table"))
        tree.table.push_back({row.at("pattern").get<std::string>(),
                              row.at("decision").get<std::string>()});
    tree.validate();
    return tree;
}

std::string decision_tree_to_json(const DecisionTree& tree) {
    json j;
    j["name"] = tree.name;
    j["qubits"] = tree.qubits;
    j["root"] = node_to_json(*tree.root);
    json table = json::array();
    for (const auto& rule : tree.table)
        table.push_back({{"pattern", rule.pattern}, {"decision", rule.decision}});
    j["table"] = table;
    return j.dump(2);
}

DecisionTree builtin_tree(int n_bins) {
    static const char* kTreeN2 = R"({
      "name": "sc-n2", "qubits": 2,
      "root": {
        "gates": [{"gate": "CH", "control": 0, "target": 1}],
        "measure": 1,
        "branches": {"0": {"gates": [{"gate": "H", "target": 0}], "measure": 0}}
      },
      "table": [
        {"pattern": "00", "decision": "00"},
        {"pattern": "10", "decision": "01"},
        {"pattern": "*1", "decision": "error"}
      ]
    })";
    static const char* kTreeN4 = R"({
      "name": "sc-n4", "qubits": 3,
      "root": {
        "gates": [{"gate": "CH", "control": 0, "target": 1},
                  {"gate": "CH", "control": 0, "target": 2}],
        "measure": 1,
        "branches": {
          "0": {"measure": 2,
                "branches": {"0": {"gates": [{"gate": "H", "target": 0}], "measure": 0}}}
        }
      },
      "table": [
        {"pattern": "000", "decision": "0000"},
        {"pattern": "100", "decision": "0001"},
        {"pattern": "*01", "decision": "0010"},
        {"pattern": "*1*", "decision": "error"}
      ]
    })";
    static const char* kTreeN8 = R"({
      "name": "sc-n8", "qubits": 4,
      "root": {
        "gates": [{"gate": "CH", "control": 0, "target": 1}],
        "measure": 1,
        "branches": {
          "0": {
            "gates": [{"gate": "CH", "control": 0, "target": 2}],
            "measure": 2,
            "branches": {
              "0": {
                "gates": [{"gate": "CH", "control": 0, "target": 3}],
                "measure": 3,
                "branches": {
                  "0": {"gates": [{"gate": "H", "target": 0}], "measure": 0}
                }
              },
              "1": {"gates": [{"gate": "H", "target": 3}], "measure": 3}
            }
          },
          "1": {
            "gates": [{"gate": "H", "target": 2}],
            "measure": 2,
            "branches": {
              "0": {"gates": [{"gate": "H", "target": 3}], "measure": 3},
              "1": {"gates": [{"gate": "H", "target": 3}], "measure": 3}
            }
          }
        }
      },
      "table": [
        {"pattern": "0000", "decision": "00000000"},
        {"pattern": "1000", "decision": "00000001"},
        {"pattern": "1001", "decision": "00000010"},
        {"pattern": "1010", "decision": "00000100"},
        {"pattern": "1011", "decision": "00000110"},
        {"pattern": "1100", "decision": "00010000"},
        {"pattern": "1101", "decision": "00010010"},
        {"pattern": "1110", "decision": "00010100"},
        {"pattern": "1111", "decision": "00010110"}
      ]
    })";
    switch (n_bins) {
        case 2: return decision_tree_from_json(kTreeN2);
        case 4: return decision_tree_from_json(kTreeN4);
        case 8: return decision_tree_from_json(kTreeN8);
        default: throw std::invalid_argument("builtin_tree: N must be 2, 4 or 8");
    }
}

namespace {

struct TreeWalker {
    int nq;
    const GateNoise& noise;
    KrausChannel n1, n2;
    std::map<std::string, double>* out;

    TreeWalker(int nq, const GateNoise& noise, std::map<std::string, double>* out)
        : nq(nq), noise(noise), out(out) {
        if (noise.enabled()) {
            n1 = pauli_channel(noise.model, noise.p, 1);
            n2 = pauli_channel(noise.model, noise.p, 2);
        }
    }

    DensityMatrix run_gates(DensityMatrix rho, const std::vector<GateOp>& gates) const {
        for (const auto& g : gates) {
            const Mat u = gate_matrix(g.gate);
            const bool two = g.gate == "CH" || g.gate == "CNOT";
            const std::vector<int> targets =
                two ? std::vector<int>{g.control, g.target} : std::vector<int>{g.target};
            rho = apply_unitary(rho, u, targets);
            if (noise.enabled()) rho = apply_channel(rho, two ? n2 : n1, targets);
        }
        return rho;
    }

    // (probability, normalized post-measurement state) for outcome m on qubit q
    std::pair<double, DensityMatrix> project(const DensityMatrix& rho, int q, int m) const {
        const int d = 1 << nq;
        DensityMatrix post;
        post.qubits = nq;
        post.m = Mat::Zero(d, d);
        for (int a = 0; a < d; ++a) {
            if (((a >> (nq - 1 - q)) & 1) != m) continue;
            for (int b = 0; b < d; ++b)
                if (((b >> (nq - 1 - q)) & 1) == m) post.m(a, b) = rho.m(a, b);
        }
        const double pr = post.trace();
        if (pr > 0) post.m /= pr;
        return {pr, std::move(post)};
    }

    void finish(const DensityMatrix& rho, std::map<int, int>& outcomes,
                const std::vector<int>& rest, size_t idx, double weight) const {
        if (weight < 1e-300) return;
        if (idx == rest.size()) {
            std::string s(nq, '0');
            for (const auto& [q, m] : outcomes) s[q] = m ? '1' : '0';
            (*out)[s] += weight;
            return;
        }
        const int q = rest[idx];
        for (int m = 0; m < 2; ++m) {
            auto [pr, post] = project(rho, q, m);
            if (pr <= 0) continue;
            outcomes[q] = m;
            finish(post, outcomes, rest, idx + 1, weight * pr);
            outcomes.erase(q);
        }
    }

    void walk(DensityMatrix rho, const TreeNode& node, std::map<int, int>& outcomes,
              double weight) const {
        if (weight < 1e-300) return;
        rho = run_gates(std::move(rho), node.gates);
        if (node.measure < 0) {
            std::vector<int> rest;
            for (int q = 0; q < nq; ++q)
                if (!outcomes.count(q)) rest.push_back(q);
            finish(rho, outcomes, rest, 0, weight);
            return;
        }
        for (int m = 0; m < 2; ++m) {
            auto [pr, post] = project(rho, node.measure, m);
            if (pr <= 0) continue;
            outcomes[node.measure] = m;
            const TreeNode* child = m ? node.branch1.get() : node.branch0.get();
            if (child) {
                walk(std::move(post), *child, outcomes, weight * pr);
            } else {
                std::vector<int> rest;
                for (int q = 0; q < nq; ++q)
                    if (!outcomes.count(q)) rest.push_back(q);
                finish(post, outcomes, rest, 0, weight * pr);
            }
            outcomes.erase(node.measure);
        }
    }
};

}  // namespace

LeafDistribution decision_tree_decode(const DensityMatrix& reg, const DecisionTree& tree,
                                      const GateNoise& noise) {
    tree.validate();
    if (reg.qubits != tree.qubits)
        throw std::invalid_argument("decision_tree_decode: register/tree qubit mismatch");
    LeafDistribution dist;
    TreeWalker walker(tree.qubits, noise, &dist.raw);
    std::map<int, int> outcomes;
    walker.walk(reg, *tree.root, outcomes, 1.0);

    dist.labels = tree.decision_labels();
    dist.p.assign(dist.labels.size(), 0.0);
    for (const auto& [s, w] : dist.raw) {
        const std::string d = tree.decide(s);
        const auto it = std::find(dist.labels.begin(), dist.labels.end(), d);
        dist.p[it - dist.labels.begin()] += w;
    }
    return dist;
}

TransitionMatrix noisy_pipeline_channel(const PolarCode& code, double alpha,
                                        const NoiseConfig& noise, ExecPolicy policy) {
    const TimeBinEncoding enc = standard_encoding(code.n_bins);
    const CompressionProcess proc = build_compression_process(enc, noise.compression, policy);
    const DecisionTree tree = builtin_tree(code.n_bins);
    return noisy_pipeline_channel(code, alpha, noise, proc, tree, policy);
}

TransitionMatrix noisy_pipeline_channel(const PolarCode& code, double alpha,
                                        const NoiseConfig& noise,
                                        const CompressionProcess& process,
                                        const DecisionTree& tree, ExecPolicy policy) {
    code.validate();
    const Codebook cb = build_codebook(code);
    const std::vector<std::string> labels = tree.decision_labels();
    const double eps =
        residual_multiphoton_probability(Bits(code.n_bins, 0), alpha, 1);

    // multi-photon mass: uniform over raw strings, mapped through the table
    std::vector<double> string_image(labels.size(), 0.0);
    const int nstrings = 1 << tree.qubits;
    for (int s = 0; s < nstrings; ++s) {
        std::string raw(tree.qubits, '0');
        for (int q = 0; q < tree.qubits; ++q)
            raw[q] = ((s >> (tree.qubits - 1 - q)) & 1) ? '1' : '0';
        const std::string d = tree.decide(raw);
        const auto it = std::find(labels.begin(), labels.end(), d);
        string_image[it - labels.begin()] += 1.0 / nstrings;
    }

    TransitionMatrix tm;
    tm.outputs = labels;
    tm.p.resize(cb.entries.size(), labels.size());
    for (const auto& e : cb.entries) tm.inputs.push_back(bits_to_string(e.message));

    const int rows = static_cast<int>(cb.entries.size());
    auto compute_row = [&](int a) {
        const TruncatedPhotonicState st = bpsk_codeword_state(cb.entries[a].codeword, alpha);
        Mat rho = st.amplitudes * st.amplitudes.adjoint();
        if (noise.transducer_p > 0) rho = transducer_channel(rho, noise.transducer_p);
        const Mat reg = process.apply(rho);
        DensityMatrix dm;
        dm.qubits = tree.qubits;
        dm.m = reg;
        const LeafDistribution dist = decision_tree_decode(dm, tree, noise.decoding);
        for (size_t b = 0; b < labels.size(); ++b)
            tm.p(a, b) = (1.0 - eps) * dist.p[b] + eps * string_image[b];
    };

    if (policy == ExecPolicy::Parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int a = 0; a < rows; ++a) compute_row(a);
    } else {
        for (int a = 0; a < rows; ++a) compute_row(a);
    }
    return tm;
}

ChannelBuilder circuit_channel_builder(const PolarCode& code, const NoiseConfig& noise,
                                       ExecPolicy policy) {
    auto enc = standard_encoding(code.n_bins);
    auto proc = std::make_shared<CompressionProcess>(
        build_compression_process(enc, noise.compression, policy));
    auto tree = std::make_shared<DecisionTree>(builtin_tree(code.n_bins));
    return [code, noise, proc, tree, policy](double alpha) {
        return noisy_pipeline_channel(code, alpha, noise, *proc, *tree, policy);
    };
}

}  // namespace qrx
