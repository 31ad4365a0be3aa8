// Experiment harness: configuration parsing, code construction from channel
// and model specs, Monte-Carlo block-error simulation, and the artifact
// documents written by the command-line front end.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "construct.hpp"
#include "prob.hpp"
#include "regions.hpp"
#include "schemes.hpp"

namespace marton {

// Thrown for configuration documents that parse but violate a contract.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

struct ChannelSpec {
    std::string type;  // "bsc" | "bec" | "generic" | "identity"
    double param = 0.0;
    int input_size = 2, output_size = 2;
    std::vector<double> pmf;  // generic only

    Channel make() const;
    std::string describe() const;
};

struct SimulationConfig {
    std::string scheme;  // "p2p" | "superposition" | "binning" | "marton"
    ChannelSpec channel1, channel2;

    // Model: p2p uses `joint` = {P(X=0), P(X=1)}; superposition uses the
    // (V, X) joint; binning/marton use the auxiliary joint plus `phi`.
    std::vector<double> joint;
    int input_size = 2;
    std::vector<int> phi;

    int n = 256;
    int k = 2;
    double beta = 0.45;
    int mc_samples = 100000;
    int trials = 100;
    uint64_t seed = 1;

    // Rate selection: explicit per-user rates (bits per channel use), or the
    // corner selector which keeps the given fraction of each threshold-built
    // decodable set (payloads `corner_backoff` inside the constructed corner).
    std::optional<double> rate1, rate2;
    double corner_backoff = 0.1;

    std::string direction = "backward";          // binning chain direction
    std::string superposition_mode = "auto";     // "full" | "min-rate" | "auto"
    double common_rate_fraction = 0.0;           // marton common message
    bool randomized_rounding = false;

    std::vector<double> grid;  // region/compare sweep; empty = default

    static SimulationConfig from_json_text(const std::string& text);
    std::string to_json_text() const;

    void validate() const;
    AuxModel make_model() const;
};

// One constructed codec (whichever of the four schemes the config names),
// plus the reports it was built from.
struct ConstructedCode {
    std::string scheme;
    std::vector<IndexSetReport> reports;
    // p2p only:
    std::optional<P2pCode> p2p;
    // chained schemes:
    std::optional<ChainingLayout> layout;
    std::optional<SuperpositionCode> superposition;
    std::optional<BinningCode> binning;
    std::optional<MartonCode> marton;

    int payload_bits_user1() const;
    int payload_bits_user2() const;
};

ConstructedCode construct_code(const SimulationConfig& config, int threads = 1);

struct UserStats {
    int errors = 0;
    int trials = 0;
};

struct SimulationReport {
    std::string resolved_config;  // JSON text of the config actually used
    std::map<std::string, int> set_sizes;
    std::map<std::string, double> z_summary;  // per report label: max info-set Z
    double rate1 = 0.0, rate2 = 0.0;
    UserStats user1, user2;
    std::vector<std::array<int, 2>> trial_errors;  // per trial (user1, user2)

    std::string to_json_text() const;
    std::string trials_csv() const;  // columns: trial,user,error
};

SimulationReport run_simulation(const SimulationConfig& config, int threads = 1);

// Construction-only artifact: the layout (chained schemes) or the index-set
// reports (p2p) as a JSON document, with the resolved config embedded.
std::string construct_document(const SimulationConfig& config, int threads = 1);

// Per-alpha comparison of the two superposition region variants in whichever
// user orientation satisfies the AGG degradation precondition.
// Columns: alpha,swapped,agg_valid,max_gap.
std::string compare_csv(const SimulationConfig& config);

// Deterministic per-position channel-output sampling (inverse CDF).
int sample_channel_output(const Channel& channel, int x, double u);

}  // namespace marton
