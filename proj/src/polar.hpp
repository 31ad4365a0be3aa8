// Polar transform G_n (Kronecker power, no bit-reversal) and the exact
// successive-cancellation probability recursion over i.i.d. (binary source,
// side information) pairs.
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "prob.hpp"

namespace marton {

// x -> x * G_n over GF(2); an involution. Length must be a power of two.
std::vector<uint8_t> polar_transform(std::vector<uint8_t> x);

bool is_power_of_two(std::size_t v);

// Successive-cancellation engine for U = X * G_n where (X^j, side^j) are
// i.i.d. with the given pairwise joint. Bits are processed strictly in order:
// posterior() gives P(U^i | decided prefix, side sequence), set_bit() fixes
// the bit and advances. After all n bits, encoded() returns x = u * G_n.
// Butterfly stages are memoized, so a full pass costs Theta(n log n).
class ScEngine {
public:
    ScEngine(const PairwiseJoint& pairwise, std::vector<int> side_sequence);

    int n() const { return n_; }
    int pos() const { return pos_; }

    // Exact conditional distribution (P(U^i=0|.), P(U^i=1|.)) of the current
    // bit. Throws model_error on an impossible side sequence.
    std::array<double, 2> posterior();

    void set_bit(int u);

    // The decided u bits so far.
    const std::vector<uint8_t>& decided() const { return u_; }

    // Valid after all n bits are decided: x = u * G_n.
    const std::vector<uint8_t>& encoded() const;

    void reset(std::vector<int> side_sequence);

private:
    void ensure_probs();

    PairwiseJoint pairwise_;
    int n_;
    int m_;
    int pos_;
    std::vector<int> side_;
    std::vector<uint8_t> u_;
    // probs_[d] / bits_[d]: depth-d buffers, node r at depth d owning the
    // slice [r * n/2^d, (r+1) * n/2^d).
    std::vector<std::vector<std::array<double, 2>>> probs_;
    std::vector<std::vector<uint8_t>> bits_;
};

// One-shot posterior of U^i (1-based prefix semantics: prefix holds
// u^{1:i-1}) given the side sequence.
std::array<double, 2> sc_posterior(const PairwiseJoint& pairwise,
                                   const std::vector<int>& side_sequence,
                                   const std::vector<uint8_t>& prefix);

}  // namespace marton
