#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qrx/scdecoder.hpp"

namespace qrx {

/// Qubit 0 is the most significant bit of the basis index.
struct DensityMatrix {
    Mat m;
    int qubits = 0;

    static DensityMatrix zero_state(int qubits);
    double trace() const { return m.trace().real(); }
};

struct KrausChannel {
    std::vector<Mat> ops;
    int arity = 1;
};

enum class PauliModel { Independent, Uniform, Paired };

PauliModel pauli_model_from_string(const std::string& name);
std::string to_string(PauliModel model);

/// Single-qubit: depolarizing with total error p (px=py=pz=p/3).
/// Two-qubit: Independent = tensor of two single-qubit channels;
/// Paired = identity w.p. 1-p, the 9 both-nontrivial Paulis w.p. p/9 each;
/// Uniform = identity w.p. 1-p, the 15 nontrivial Paulis w.p. p/15 each.
KrausChannel pauli_channel(PauliModel model, double p, int arity);

/// Operator on `targets` (targets[0] = most significant) embedded into nq qubits.
Mat embed_operator(const Mat& op, int nq, const std::vector<int>& targets);

DensityMatrix apply_unitary(const DensityMatrix& rho, const Mat& u,
                            const std::vector<int>& targets);
DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& channel,
                            const std::vector<int>& targets);

/// (1-p) rho + p/dim * tr(rho) I on the truncated photonic space.
Mat transducer_channel(const Mat& photonic_dm, double p);

/// Register image of each photonic level: index 0 = vacuum (must map to 0),
/// index i = bin i.
struct TimeBinEncoding {
    int n_bins = 0;
    int qubits = 0;
    std::vector<uint32_t> reg_of;

    void validate() const;
};

/// Flag qubit 0 + binary(i-1) on the remaining qubits.
TimeBinEncoding standard_encoding(int n_bins);

/// 2^q x (N+1) isometry realized by the noiseless compression circuit.
Mat compression_isometry(const TimeBinEncoding& enc);

struct GateNoise {
    PauliModel model = PauliModel::Independent;
    double p = 0.0;

    bool enabled() const { return p > 0.0; }
};

enum class ExecPolicy { Serial, Parallel };

/// The compression step as a linear map from photonic to register operators,
/// stored as the images of the photonic matrix units |j><k|, j <= k. Built by
/// evolving one live control qubit per time bin.
struct CompressionProcess {
    TimeBinEncoding encoding;
    std::vector<Mat> images;  // upper-triangular (j,k) pairs, row-major

    const Mat& image(int j, int k) const;  // requires j <= k
    Mat apply(const Mat& photonic_dm) const;
};

CompressionProcess build_compression_process(const TimeBinEncoding& enc,
                                             const GateNoise& noise = {},
                                             ExecPolicy policy = ExecPolicy::Parallel);

/// Register state after mapping a photonic operator through the compression
/// circuit. Noiseless operation is the exact isometry.
DensityMatrix compression_circuit(const Mat& photonic_dm, const TimeBinEncoding& enc,
                                  const GateNoise& noise = {},
                                  ExecPolicy policy = ExecPolicy::Parallel);

/// Straightforward serial simulation on the full photonic x control x register
/// space. Kept as an independent reference for testing and benchmarking.
DensityMatrix compression_circuit_reference(const Mat& photonic_dm, const TimeBinEncoding& enc,
                                            const GateNoise& noise = {});

// --- decision trees ---

struct GateOp {
    std::string gate;  // "H", "CH", "CNOT", "X", "Z"
    int control = -1;  // CH/CNOT only
    int target = 0;
};

struct TreeNode {
    std::vector<GateOp> gates;
    int measure = -1;  // -1: measure all remaining qubits in index order
    std::unique_ptr<TreeNode> branch0, branch1;
};

struct DecodeRule {
    std::string pattern;  // one char per qubit, '*' matches both
    std::string decision; // message string or "error"
};

struct DecisionTree {
    std::string name;
    int qubits = 0;
    std::unique_ptr<TreeNode> root;
    std::vector<DecodeRule> table;

    std::string decide(const std::string& raw) const;
    std::vector<std::string> decision_labels() const;  // table order + "error"
    void validate() const;
};

DecisionTree decision_tree_from_json(const std::string& text);
std::string decision_tree_to_json(const DecisionTree& tree);

/// Trees for N = 2, 4, 8 transcribed as data.
DecisionTree builtin_tree(int n_bins);

struct LeafDistribution {
    std::map<std::string, double> raw;   // probability per measurement string
    std::vector<std::string> labels;     // decision labels incl. "error"
    std::vector<double> p;               // probability per decision
};

/// Walks every branch of the tree: gates with configured post-gate noise,
/// Z-measurement branching on the normalized post-measurement states, leaves
/// mapped through the decoding table.
LeafDistribution decision_tree_decode(const DensityMatrix& reg, const DecisionTree& tree,
                                      const GateNoise& noise = {});

struct NoiseConfig {
    double transducer_p = 0.0;
    GateNoise decoding;     // after each gate of the decoding circuit
    GateNoise compression;  // after each CNOT / control H of the compression step
};

/// Full circuit path: encode, transducer noise, compression, tree decoding.
/// Multi-photon residual mass is spread uniformly over raw measurement
/// strings and mapped through the decoding table. Outputs are the decision
/// labels (including the error herald).
TransitionMatrix noisy_pipeline_channel(const PolarCode& code, double alpha,
                                        const NoiseConfig& noise,
                                        ExecPolicy policy = ExecPolicy::Parallel);

/// Same, with the compression process and tree prebuilt (sweeps reuse them).
TransitionMatrix noisy_pipeline_channel(const PolarCode& code, double alpha,
                                        const NoiseConfig& noise,
                                        const CompressionProcess& process,
                                        const DecisionTree& tree,
                                        ExecPolicy policy = ExecPolicy::Parallel);

/// Channel builder over alpha with shared prebuilt machinery.
ChannelBuilder circuit_channel_builder(const PolarCode& code, const NoiseConfig& noise,
                                       ExecPolicy policy = ExecPolicy::Parallel);

}  // namespace qrx
