// Bhattacharyya parameter computation (exact and Monte-Carlo), polarized
// index-set reports, and the chaining layouts for the superposition,
// binning, and Marton broadcast schemes.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "polar.hpp"
#include "prob.hpp"

namespace marton {

// A requested rate point cannot be realized by the constructed sets.
class rate_infeasible_error : public std::runtime_error {
public:
    explicit rate_infeasible_error(const std::string& what)
        : std::runtime_error(what) {}
};

enum class SelectionPolicy { theoretical_threshold, rate_targeted };

struct ConstructionParams {
    int n = 0;
    double beta = 0.45;
    int mc_samples = 100000;
    uint64_t seed = 0;
    SelectionPolicy policy = SelectionPolicy::theoretical_threshold;
    // Rate-targeted policy: fraction of smallest-Z indices forming the low
    // set (the high fraction is passed per call as target_rate).
    double low_fraction = -1.0;

    double delta() const;
    void validate() const;
};

// Per-index Z values and the derived high/low sets for one (source, side)
// pair, e.g. "V|Y2".
struct IndexSetReport {
    int n = 0;
    std::string label;
    std::vector<double> z;
    std::vector<int> high_set;
    std::vector<int> low_set;
    double high_threshold = 1.0;
    double low_threshold = 0.0;
    std::vector<char> high_mask;  // derived from high_set
    std::vector<char> low_mask;

    void finalize_masks();
    bool in_high(int i) const { return high_mask[i] != 0; }
    bool in_low(int i) const { return low_mask[i] != 0; }
};

// Z(U^i | U^{1:i-1}, side^{1:n}) by exhaustive enumeration (0-based i).
// Refuses when the enumeration would exceed the feasibility cap.
double exact_Z(const PairwiseJoint& pairwise, int n, int i);
// All n values in one sweep (same enumeration, shared between indices).
std::vector<double> exact_Z_all(const PairwiseJoint& pairwise, int n);

// Unbiased Monte-Carlo estimate of all n Z values; deterministic given the
// seed, independent of the thread count (fixed chunk partition).
std::vector<double> estimate_Z(const PairwiseJoint& pairwise,
                               const ConstructionParams& params,
                               int threads = 1);

// Threshold (theoretical policy) or sorting (rate-targeted policy with
// target_rate = high-set fraction) assignment of high/low sets.
IndexSetReport build_index_sets(const std::vector<double>& z,
                                const ConstructionParams& params,
                                std::optional<double> target_rate = std::nullopt,
                                const std::string& label = "");

enum class SuperpositionTarget { full_rate, min_rate };
enum class ChainDirection { backward, forward };

// Scheme-specific partition of [n] per variable plus the chain length.
// Set names: superposition uses I1, I2, Iv1, D1, D2, R2, B1, B2, Fr1, Fd1,
// Fr2, Fd2; binning uses I1, Fr1, Fd1, I2, R, Fr2, Fd2, Fout2, Fcr2;
// marton uses Isup2, Iv1, D1, D2, Rsup, B2, Fr0, Fd0 (U0 space), I1, B1,
// Rbin, Fr1, Fd1, Fout1, Fcr1 (U1 space), Ibin2, Fr2, Fd2 (U2 space).
struct ChainingLayout {
    std::string scheme;
    int n = 0;
    int k = 0;
    SuperpositionTarget target = SuperpositionTarget::full_rate;
    ChainDirection direction = ChainDirection::backward;
    double common_rate_fraction = 0.0;
    std::map<std::string, std::vector<int>> sets;

    const std::vector<int>& set(const std::string& name) const;
    int size(const std::string& name) const;
};

ChainingLayout build_superposition_layout(const IndexSetReport& v_plain,
                                          const IndexSetReport& v_y1,
                                          const IndexSetReport& v_y2,
                                          const IndexSetReport& x_v,
                                          const IndexSetReport& x_vy1,
                                          int k, SuperpositionTarget target);

ChainingLayout build_binning_layout(const IndexSetReport& v1_plain,
                                    const IndexSetReport& v1_y1,
                                    const IndexSetReport& v2_plain,
                                    const IndexSetReport& v2_v1,
                                    const IndexSetReport& v2_y2,
                                    int k, ChainDirection direction);

ChainingLayout build_marton_layout(const IndexSetReport& v_plain,
                                   const IndexSetReport& v_y1,
                                   const IndexSetReport& v_y2,
                                   const IndexSetReport& v2_v,
                                   const IndexSetReport& v2_vy2,
                                   const IndexSetReport& v1_v,
                                   const IndexSetReport& v1_vy1,
                                   const IndexSetReport& v1_vv2,
                                   int k, double common_rate_fraction);

// Payload sizes in message bits for one whole chain (k blocks).
int user1_payload_bits(const ChainingLayout& layout);
int user2_payload_bits(const ChainingLayout& layout);

// JSON (de)serialization for CLI artifacts.
std::string report_to_json(const IndexSetReport& report);
IndexSetReport report_from_json(const std::string& text);
std::string layout_to_json(const ChainingLayout& layout);
ChainingLayout layout_from_json(const std::string& text);

}  // namespace marton
