// Finite probability models shared by construction, coding and region
// computation: discrete memoryless channels, auxiliary-variable models,
// pairwise (source, side) joints, information measures and the stochastic
// degradation test.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace marton {

// Thrown when a model or observation violates a contract (bad pmf,
// alphabet mismatch, impossible side sequence, ...).
class model_error : public std::runtime_error {
public:
    explicit model_error(const std::string& what) : std::runtime_error(what) {}
};

double binary_entropy(double p);

// Discrete memoryless channel with a finite input and output alphabet.
// The input alphabet is binary for the point-to-point and superposition
// schemes, and the range of phi (up to 8 symbols) for binning/Marton.
class Channel {
public:
    Channel(int input_size, int output_size, std::vector<double> pmf);

    static Channel bsc(double crossover);
    // Outputs: 0, 1, 2 (erasure).
    static Channel bec(double erasure);
    static Channel identity(int alphabet = 2);

    int input_size() const { return input_size_; }
    int output_size() const { return output_size_; }
    double prob(int y, int x) const { return pmf_[x * output_size_ + y]; }

private:
    int input_size_;
    int output_size_;
    std::vector<double> pmf_;  // pmf_[x * output_size + y]
};

// Joint pmf over a tuple of named finite variables.  Small alphabets only;
// everything is computed by exact summation over the full support.
class JointPmf {
public:
    JointPmf(std::vector<std::string> names, std::vector<int> cards,
             std::vector<double> probs);

    int arity() const { return static_cast<int>(cards_.size()); }
    const std::vector<int>& cards() const { return cards_; }
    const std::vector<double>& probs() const { return probs_; }

    double entropy(std::span<const std::string> vars) const;
    double conditional_entropy(std::span<const std::string> of,
                               std::span<const std::string> given) const;
    double mutual_information(std::span<const std::string> a,
                              std::span<const std::string> b,
                              std::span<const std::string> given = {}) const;

    // Convenience overloads taking initializer-list style vectors.
    double entropy(std::initializer_list<std::string> vars) const;
    double mutual_information(std::initializer_list<std::string> a,
                              std::initializer_list<std::string> b,
                              std::initializer_list<std::string> given = {}) const;

private:
    std::vector<int> indices_of(std::span<const std::string> vars) const;
    double group_entropy(const std::vector<int>& idx) const;

    std::vector<std::string> names_;
    std::vector<int> cards_;
    std::vector<double> probs_;  // row-major in variable order
};

// Joint of one binary variable T and a finite side symbol S; the i.i.d.
// per-position law driving polarization of T given side S.
struct PairwiseJoint {
    int side_size = 1;
    std::vector<double> p;  // p[t * side_size + s], sums to 1

    PairwiseJoint() : p{0.5, 0.5} {}
    PairwiseJoint(int side, std::vector<double> probs);

    double prob(int t, int s) const { return p[t * side_size + s]; }
    double side_marginal(int s) const { return prob(0, s) + prob(1, s); }

    static PairwiseJoint source_only(double p1);  // T ~ Bern(p1), no side
};

// Auxiliary-variable model for the broadcast schemes.
//   arity 1: (V, X) with the full joint p_{V,X} stored; phi unused, X binary.
//   arity 2: (V1, V2) with X = phi(v1, v2).
//   arity 3: (V, V1, V2) with X = phi(v, v1, v2).
class AuxModel {
public:
    AuxModel(int arity, std::vector<double> joint, int input_size,
             std::vector<int> phi);

    static AuxModel pair_vx(std::vector<double> joint_vx);  // arity 1

    int arity() const { return arity_; }
    int input_size() const { return input_size_; }
    // Number of binary variables in the stored joint (arity, or 2 when the
    // arity-1 model carries X explicitly).
    int num_vars() const { return num_vars_; }
    double joint(int flat_index) const { return joint_[flat_index]; }
    const std::vector<double>& joint() const { return joint_; }
    int channel_input(std::span<const int> aux_values) const;
    int phi(int flat_index) const { return phi_[flat_index]; }

    // Joint of the model variables, the channel input and the outputs of the
    // given channels (named Y1, Y2, ... in argument order).
    JointPmf with_channels(std::span<const Channel* const> channels) const;

    // Names of the stored binary variables, in index order.
    std::vector<std::string> var_names() const;

private:
    int arity_;
    int num_vars_;
    int input_size_;
    std::vector<double> joint_;  // over {0,1}^num_vars, first variable = MSB
    std::vector<int> phi_;       // arity >= 2 only
};

// Exact joint of (observed variable, side tuple) where the side tuple is the
// given conditioned variables followed (optionally) by the output of
// `channel` applied to the model's channel input.  Side symbol packs the
// conditioned variables first (first listed = most significant), channel
// output last.
PairwiseJoint effective_channel(const AuxModel& model, int observed_var,
                                std::span<const int> conditioned_vars,
                                const Channel* channel);

// True iff q is stochastically degraded with respect to p, i.e. q = p * M for
// some stochastic matrix M; decided by LP feasibility with tolerance 1e-9.
bool check_stochastic_degradation(const Channel& p, const Channel& q,
                                  double tol = 1e-9);

}  // namespace marton
