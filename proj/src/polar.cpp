#include "polar.hpp"

#include <bit>
#include <cmath>

namespace marton {

bool is_power_of_two(std::size_t v) {
    return v > 0 && (v & (v - 1)) == 0;
}

std::vector<uint8_t> polar_transform(std::vector<uint8_t> x) {
    const std::size_t n = x.size();
    if (!is_power_of_two(n))
        throw model_error("polar_transform: length is not a power of two");
    // x * (F tensor G) = (t0 xor t1, t1): combine sub-blocks bottom-up.
    for (std::size_t s = 1; s < n; s <<= 1)
        for (std::size_t base = 0; base < n; base += 2 * s)
            for (std::size_t b = 0; b < s; ++b)
                x[base + b] ^= x[base + s + b];
    return x;
}

ScEngine::ScEngine(const PairwiseJoint& pairwise, std::vector<int> side_sequence)
    : pairwise_(pairwise) {
    n_ = static_cast<int>(side_sequence.size());
    if (!is_power_of_two(static_cast<std::size_t>(n_)))
        throw model_error("ScEngine: block length is not a power of two");
    m_ = std::countr_zero(static_cast<unsigned>(n_));
    probs_.assign(m_ + 1, std::vector<std::array<double, 2>>(n_));
    bits_.assign(m_ + 1, std::vector<uint8_t>(n_, 0));
    reset(std::move(side_sequence));
}

void ScEngine::reset(std::vector<int> side_sequence) {
    if (static_cast<int>(side_sequence.size()) != n_)
        throw model_error("ScEngine: side sequence length mismatch");
    for (int s : side_sequence)
        if (s < 0 || s >= pairwise_.side_size)
            throw model_error("ScEngine: side symbol outside alphabet");
    side_ = std::move(side_sequence);
    u_.assign(n_, 0);
    pos_ = 0;
}

void ScEngine::ensure_probs() {
    const int phi = pos_;
    int start_depth;  // depth from which fresh distributions are needed
    if (phi == 0) {
        for (int j = 0; j < n_; ++j) {
            double p0 = pairwise_.prob(0, side_[j]);
            double p1 = pairwise_.prob(1, side_[j]);
            double sum = p0 + p1;
            if (sum <= 0.0)
                throw model_error("ScEngine: impossible side symbol under the model");
            probs_[0][j] = {p0 / sum, p1 / sum};
        }
        start_depth = 1;
    } else {
        int s = std::countr_zero(static_cast<unsigned>(phi));
        // Node at depth m-s is a plus child; its parent's distributions are
        // still valid from the previous descent.
        int d = m_ - s;
        int branch = phi >> s;          // odd: plus child
        int len = n_ >> d;              // symbols owned by this node
        int off = branch * len;
        int poff = (branch >> 1) * (2 * len);  // parent slice at depth d-1
        const auto& a = probs_[d - 1];
        const auto& mu = bits_[d];      // decided minus-sibling symbols
        int sib = (branch - 1) * len;
        for (int b = 0; b < len; ++b) {
            int mb = mu[sib + b];
            double p0 = a[poff + b][mb] * a[poff + len + b][0];
            double p1 = a[poff + b][mb ^ 1] * a[poff + len + b][1];
            double sum = p0 + p1;
            if (sum <= 0.0)
                throw model_error("ScEngine: impossible side sequence under the model");
            probs_[d][off + b] = {p0 / sum, p1 / sum};
        }
        start_depth = d + 1;
    }
    // Descend through minus children down to the leaf.
    for (int d = start_depth; d <= m_; ++d) {
        int branch = phi >> (m_ - d);   // even: minus child
        int len = n_ >> d;
        int off = branch * len;
        int poff = (branch >> 1) * (2 * len);
        const auto& a = probs_[d - 1];
        for (int b = 0; b < len; ++b) {
            double p0 = a[poff + b][0] * a[poff + len + b][0] +
                        a[poff + b][1] * a[poff + len + b][1];
            double p1 = a[poff + b][0] * a[poff + len + b][1] +
                        a[poff + b][1] * a[poff + len + b][0];
            double sum = p0 + p1;
            if (sum <= 0.0)
                throw model_error("ScEngine: impossible side sequence under the model");
            probs_[d][off + b] = {p0 / sum, p1 / sum};
        }
    }
}

std::array<double, 2> ScEngine::posterior() {
    if (pos_ >= n_)
        throw model_error("ScEngine: all bits already decided");
    ensure_probs();
    return probs_[m_][pos_];
}

void ScEngine::set_bit(int u) {
    if (pos_ >= n_)
        throw model_error("ScEngine: all bits already decided");
    ensure_probs();
    u_[pos_] = static_cast<uint8_t>(u & 1);
    bits_[m_][pos_] = u_[pos_];
    // Bubble completed symbol vectors up while we are a plus child.
    int idx = pos_;
    for (int d = m_; d > 0 && (idx & 1); --d, idx >>= 1) {
        int len = n_ >> d;
        int moff = (idx - 1) * len;
        int poff = (idx >> 1) * (2 * len);
        const auto& mu = bits_[d];
        auto& parent = bits_[d - 1];
        for (int b = 0; b < len; ++b) {
            uint8_t pi = bits_[d][idx * len + b];
            parent[poff + b] = static_cast<uint8_t>(mu[moff + b] ^ pi);
            parent[poff + len + b] = pi;
        }
    }
    ++pos_;
}

const std::vector<uint8_t>& ScEngine::encoded() const {
    if (pos_ != n_)
        throw model_error("ScEngine: block not fully decided");
    return bits_[0];
}

std::array<double, 2> sc_posterior(const PairwiseJoint& pairwise,
                                   const std::vector<int>& side_sequence,
                                   const std::vector<uint8_t>& prefix) {
    if (prefix.size() >= side_sequence.size())
        throw model_error("sc_posterior: prefix too long");
    ScEngine eng(pairwise, side_sequence);
    for (uint8_t b : prefix) eng.set_bit(b);
    return eng.posterior();
}

}  // namespace marton
