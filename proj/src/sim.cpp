#include "sim.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "polar.hpp"
#include "rng.hpp"

namespace marton {

using nlohmann::json;

namespace {

double uniform_from(uint64_t mixed) {
    return static_cast<double>(mixed >> 11) * 0x1.0p-53;
}

int message_bit(uint64_t seed, int user, int trial, int index) {
    return static_cast<int>(
        mix_seed(seed, kStreamMessageGen, static_cast<uint64_t>(user),
                 static_cast<uint64_t>(trial), static_cast<uint64_t>(index)) &
        1);
}

std::vector<uint8_t> make_message(uint64_t seed, int user, int trial, int bits) {
    std::vector<uint8_t> msg(bits);
    for (int i = 0; i < bits; ++i)
        msg[i] = static_cast<uint8_t>(message_bit(seed, user, trial, i));
    return msg;
}

std::vector<int> sample_outputs(const Channel& channel, const std::vector<int>& x,
                                uint64_t seed, int user, int trial, int block) {
    std::vector<int> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        double u = uniform_from(mix_seed(
            seed, kStreamChannelNoise, static_cast<uint64_t>(user),
            static_cast<uint64_t>(trial), static_cast<uint64_t>(block),
            static_cast<uint64_t>(i)));
        y[i] = sample_channel_output(channel, x[i], u);
    }
    return y;
}

// Keep only the most reliable (smallest-Z) fraction of the report's low set.
void shrink_low_set(IndexSetReport& report, double keep_fraction) {
    auto low = report.low_set;
    std::stable_sort(low.begin(), low.end(), [&](int a, int b) {
        return report.z[a] < report.z[b];
    });
    low.resize(static_cast<std::size_t>(
        std::floor(keep_fraction * static_cast<double>(low.size()))));
    std::sort(low.begin(), low.end());
    report.low_set = std::move(low);
    report.finalize_masks();
}

json channel_to_json(const ChannelSpec& spec) {
    json j;
    j["type"] = spec.type;
    if (spec.type == "bsc" || spec.type == "bec") j["param"] = spec.param;
    if (spec.type == "identity") j["input_size"] = spec.input_size;
    if (spec.type == "generic") {
        j["input_size"] = spec.input_size;
        j["output_size"] = spec.output_size;
        j["pmf"] = spec.pmf;
    }
    return j;
}

ChannelSpec channel_from_json(const json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("type"))
        throw config_error(where + ": expected an object with a \"type\" key");
    ChannelSpec spec;
    spec.type = j.at("type").get<std::string>();
    if (spec.type == "bsc" || spec.type == "bec") {
        spec.param = j.at("param").get<double>();
    } else if (spec.type == "identity") {
        spec.input_size = j.value("input_size", 2);
        spec.output_size = spec.input_size;
    } else if (spec.type == "generic") {
        spec.input_size = j.at("input_size").get<int>();
        spec.output_size = j.at("output_size").get<int>();
        spec.pmf = j.at("pmf").get<std::vector<double>>();
    } else {
        throw config_error(where + ": unknown channel type \"" + spec.type + "\"");
    }
    return spec;
}

ConstructionParams base_params(const SimulationConfig& config) {
    ConstructionParams params;
    params.n = config.n;
    params.beta = config.beta;
    params.mc_samples = config.mc_samples;
    params.policy = SelectionPolicy::theoretical_threshold;
    return params;
}

IndexSetReport build_report(const PairwiseJoint& pairwise,
                            const SimulationConfig& config,
                            const std::string& label, uint64_t stream_tag,
                            int threads, std::optional<double> low_fraction) {
    ConstructionParams params = base_params(config);
    params.seed = mix_seed(config.seed, kStreamConstruction, stream_tag);
    std::optional<double> target;
    if (low_fraction) {
        params.policy = SelectionPolicy::rate_targeted;
        params.low_fraction = *low_fraction;
        target = 0.0;  // no explicit high set; only the low set is rate-driven
    }
    std::vector<double> z = estimate_Z(pairwise, params, threads);
    return build_index_sets(z, params, target, label);
}

int count_info(const IndexSetReport& plain, const IndexSetReport& side) {
    int count = 0;
    for (int i = 0; i < plain.n; ++i)
        if (plain.in_high(i) && side.in_low(i)) ++count;
    return count;
}

}  // namespace

// --- ChannelSpec ------------------------------------------------------------

Channel ChannelSpec::make() const {
    if (type == "bsc") return Channel::bsc(param);
    if (type == "bec") return Channel::bec(param);
    if (type == "identity") return Channel::identity(input_size);
    return Channel(input_size, output_size, pmf);
}

std::string ChannelSpec::describe() const {
    std::ostringstream out;
    if (type == "bsc" || type == "bec") {
        out << type << "(" << param << ")";
    } else if (type == "identity") {
        out << "identity(" << input_size << ")";
    } else {
        out << "generic(" << input_size << "x" << output_size << ")";
    }
    return out.str();
}

// --- SimulationConfig -------------------------------------------------------

SimulationConfig SimulationConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("config parse error: ") + e.what());
    }
    SimulationConfig config;
    config.scheme = j.value("scheme", "");
    if (j.contains("channel1"))
        config.channel1 = channel_from_json(j.at("channel1"), "channel1");
    if (j.contains("channel2"))
        config.channel2 = channel_from_json(j.at("channel2"), "channel2");
    if (j.contains("model")) {
        const json& m = j.at("model");
        config.joint = m.value("joint", std::vector<double>{});
        config.input_size = m.value("input_size", 2);
        config.phi = m.value("phi", std::vector<int>{});
    }
    config.n = j.value("n", config.n);
    config.k = j.value("k", config.k);
    config.beta = j.value("beta", config.beta);
    config.mc_samples = j.value("mc_samples", config.mc_samples);
    config.trials = j.value("trials", config.trials);
    config.seed = j.value("seed", config.seed);
    if (j.contains("rates")) {
        const json& r = j.at("rates");
        if (r.contains("rate1")) config.rate1 = r.at("rate1").get<double>();
        if (r.contains("rate2")) config.rate2 = r.at("rate2").get<double>();
    }
    config.corner_backoff = j.value("corner_backoff", config.corner_backoff);
    config.direction = j.value("direction", config.direction);
    config.superposition_mode =
        j.value("superposition_mode", config.superposition_mode);
    config.common_rate_fraction =
        j.value("common_rate_fraction", config.common_rate_fraction);
    config.randomized_rounding =
        j.value("randomized_rounding", config.randomized_rounding);
    config.grid = j.value("grid", std::vector<double>{});
    config.validate();
    return config;
}

std::string SimulationConfig::to_json_text() const {
    json j;
    j["scheme"] = scheme;
    j["channel1"] = channel_to_json(channel1);
    j["channel2"] = channel_to_json(channel2);
    json m;
    m["joint"] = joint;
    m["input_size"] = input_size;
    m["phi"] = phi;
    j["model"] = m;
    j["n"] = n;
    j["k"] = k;
    j["beta"] = beta;
    j["mc_samples"] = mc_samples;
    j["trials"] = trials;
    j["seed"] = seed;
    if (rate1 || rate2) {
        json r;
        if (rate1) r["rate1"] = *rate1;
        if (rate2) r["rate2"] = *rate2;
        j["rates"] = r;
    }
    j["corner_backoff"] = corner_backoff;
    j["direction"] = direction;
    j["superposition_mode"] = superposition_mode;
    j["common_rate_fraction"] = common_rate_fraction;
    j["randomized_rounding"] = randomized_rounding;
    if (!grid.empty()) j["grid"] = grid;
    return j.dump(2);
}

void SimulationConfig::validate() const {
    auto check_channel = [](const ChannelSpec& spec, const std::string& name) {
        if (spec.type.empty()) return;
        if ((spec.type == "bsc" || spec.type == "bec") &&
            (spec.param < 0.0 || spec.param > 1.0))
            throw config_error(name + ": parameter must be in [0, 1]");
        if (spec.type == "generic") {
            if (static_cast<int>(spec.pmf.size()) !=
                spec.input_size * spec.output_size)
                throw config_error(name + ": pmf size mismatch");
            for (int x = 0; x < spec.input_size; ++x) {
                double sum = 0.0;
                for (int y = 0; y < spec.output_size; ++y)
                    sum += spec.pmf[x * spec.output_size + y];
                if (std::abs(sum - 1.0) > 1e-9)
                    throw config_error(name + ": pmf row does not sum to 1");
            }
        }
    };
    check_channel(channel1, "channel1");
    check_channel(channel2, "channel2");
    if (scheme.empty()) return;  // region/compare configs carry no scheme

    if (scheme != "p2p" && scheme != "superposition" && scheme != "binning" &&
        scheme != "marton")
        throw config_error("unknown scheme \"" + scheme + "\"");
    if (!is_power_of_two(n)) throw config_error("n must be a power of two");
    if (scheme != "p2p" && k < 2) throw config_error("k must be at least 2");
    if (trials < 1) throw config_error("trials must be at least 1");
    if (mc_samples < 1) throw config_error("mc_samples must be positive");
    if (beta <= 0.0 || beta >= 1.0) throw config_error("beta must be in (0, 1)");
    if (corner_backoff < 0.0 || corner_backoff >= 1.0)
        throw config_error("corner_backoff must be in [0, 1)");
    if (common_rate_fraction < 0.0 || common_rate_fraction > 1.0)
        throw config_error("common_rate_fraction must be in [0, 1]");
    if (direction != "backward" && direction != "forward")
        throw config_error("direction must be \"backward\" or \"forward\"");
    if (superposition_mode != "auto" && superposition_mode != "full" &&
        superposition_mode != "min-rate")
        throw config_error("superposition_mode must be auto/full/min-rate");

    std::size_t want_joint = 0, want_phi = 0;
    if (scheme == "p2p") want_joint = 2;
    if (scheme == "superposition") want_joint = 4;
    if (scheme == "binning") { want_joint = 4; want_phi = 4; }
    if (scheme == "marton") { want_joint = 8; want_phi = 8; }
    if (joint.size() != want_joint)
        throw config_error("model joint must have " +
                           std::to_string(want_joint) + " entries");
    double sum = 0.0;
    for (double p : joint) {
        if (p < 0.0) throw config_error("model joint has a negative entry");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw config_error("model joint does not sum to 1");
    if (phi.size() != want_phi)
        throw config_error("model phi must have " + std::to_string(want_phi) +
                           " entries");
    for (int s : phi)
        if (s < 0 || s >= input_size)
            throw config_error("phi value outside the channel input alphabet");
    if (scheme == "p2p" || scheme == "superposition") {
        if (input_size != 2)
            throw config_error(scheme + ": channel input must be binary");
    }
    auto rate_ok = [](const std::optional<double>& r) {
        return !r || (*r >= 0.0 && *r <= 1.0);
    };
    if (!rate_ok(rate1) || !rate_ok(rate2))
        throw config_error("target rates must be in [0, 1]");
}

AuxModel SimulationConfig::make_model() const {
    if (scheme == "superposition") return AuxModel::pair_vx(joint);
    if (scheme == "binning") return AuxModel(2, joint, input_size, phi);
    return AuxModel(3, joint, input_size, phi);
}

// --- construction ------------------------------------------------------------

int ConstructedCode::payload_bits_user1() const {
    if (p2p) return p2p->message_bits();
    return user1_payload_bits(*layout);
}

int ConstructedCode::payload_bits_user2() const {
    if (p2p) return 0;
    return user2_payload_bits(*layout);
}

namespace {

ConstructedCode construct_p2p(const SimulationConfig& config, int threads) {
    Channel ch = config.channel1.make();
    if (ch.input_size() != 2)
        throw config_error("p2p: channel input must be binary");
    double p1 = config.joint[1];
    PairwiseJoint x_plain = PairwiseJoint::source_only(p1);
    std::vector<double> pj(2 * ch.output_size());
    for (int t = 0; t < 2; ++t)
        for (int y = 0; y < ch.output_size(); ++y)
            pj[t * ch.output_size() + y] = config.joint[t] * ch.prob(y, t);
    PairwiseJoint x_y(ch.output_size(), std::move(pj));

    ConstructedCode code;
    code.scheme = "p2p";
    IndexSetReport plain =
        build_report(x_plain, config, "X", 1, threads, std::nullopt);
    IndexSetReport side =
        build_report(x_y, config, "X|Y", 2, threads, config.rate1);
    if (!config.rate1) shrink_low_set(side, 1.0 - config.corner_backoff);
    code.reports = {plain, side};

    P2pCode p2p;
    p2p.plain = std::move(plain);
    p2p.with_side = std::move(side);
    p2p.x_plain = x_plain;
    p2p.x_y = x_y;
    p2p.shared.seed = config.seed;
    p2p.randomized_rounding = config.randomized_rounding;
    code.p2p = std::move(p2p);
    return code;
}

ConstructedCode construct_superposition(const SimulationConfig& config,
                                        int threads) {
    AuxModel model = config.make_model();
    Channel ch1 = config.channel1.make();
    Channel ch2 = config.channel2.make();
    std::array<int, 1> cond_v{0};

    PairwiseJoint v_plain = effective_channel(model, 0, {}, nullptr);
    PairwiseJoint v_y1 = effective_channel(model, 0, {}, &ch1);
    PairwiseJoint v_y2 = effective_channel(model, 0, {}, &ch2);
    PairwiseJoint x_v = effective_channel(model, 1, cond_v, nullptr);
    PairwiseJoint x_vy1 = effective_channel(model, 1, cond_v, &ch1);

    IndexSetReport rv = build_report(v_plain, config, "V", 1, threads, {});
    IndexSetReport rv1 = build_report(v_y1, config, "V|Y1", 2, threads, {});
    IndexSetReport rv2 =
        build_report(v_y2, config, "V|Y2", 3, threads, config.rate2);
    IndexSetReport rx = build_report(x_v, config, "X|V", 4, threads, {});
    IndexSetReport rx1 =
        build_report(x_vy1, config, "X|V,Y1", 5, threads, config.rate1);
    if (!config.rate2) shrink_low_set(rv2, 1.0 - config.corner_backoff);
    if (!config.rate1) shrink_low_set(rx1, 1.0 - config.corner_backoff);

    SuperpositionTarget target;
    if (config.superposition_mode == "full") {
        target = SuperpositionTarget::full_rate;
    } else if (config.superposition_mode == "min-rate") {
        target = SuperpositionTarget::min_rate;
    } else {
        // Pick the variant whose chaining direction is feasible: min-rate
        // stores user-2 content inside user-1's larger decodable set.
        target = count_info(rv, rv1) >= count_info(rv, rv2)
                     ? SuperpositionTarget::min_rate
                     : SuperpositionTarget::full_rate;
    }

    ConstructedCode code;
    code.scheme = "superposition";
    code.layout = build_superposition_layout(rv, rv1, rv2, rx, rx1, config.k,
                                             target);
    code.reports = {rv, rv1, rv2, rx, rx1};
    code.superposition = make_superposition_code(
        model, ch1, ch2, *code.layout, config.seed, config.randomized_rounding);
    return code;
}

ConstructedCode construct_binning(const SimulationConfig& config, int threads) {
    AuxModel model = config.make_model();
    Channel ch1 = config.channel1.make();
    Channel ch2 = config.channel2.make();
    std::array<int, 1> cond_v1{0};

    PairwiseJoint v1_plain = effective_channel(model, 0, {}, nullptr);
    PairwiseJoint v1_y1 = effective_channel(model, 0, {}, &ch1);
    PairwiseJoint v2_plain = effective_channel(model, 1, {}, nullptr);
    PairwiseJoint v2_v1 = effective_channel(model, 1, cond_v1, nullptr);
    PairwiseJoint v2_y2 = effective_channel(model, 1, {}, &ch2);

    IndexSetReport r1p = build_report(v1_plain, config, "V1", 1, threads, {});
    IndexSetReport r1y =
        build_report(v1_y1, config, "V1|Y1", 2, threads, config.rate1);
    IndexSetReport r2p = build_report(v2_plain, config, "V2", 3, threads, {});
    IndexSetReport r2v = build_report(v2_v1, config, "V2|V1", 4, threads, {});
    IndexSetReport r2y =
        build_report(v2_y2, config, "V2|Y2", 5, threads, config.rate2);
    if (!config.rate1) shrink_low_set(r1y, 1.0 - config.corner_backoff);
    if (!config.rate2) shrink_low_set(r2y, 1.0 - config.corner_backoff);

    ChainDirection direction = config.direction == "forward"
                                   ? ChainDirection::forward
                                   : ChainDirection::backward;
    ConstructedCode code;
    code.scheme = "binning";
    code.layout =
        build_binning_layout(r1p, r1y, r2p, r2v, r2y, config.k, direction);
    code.reports = {r1p, r1y, r2p, r2v, r2y};
    code.binning = make_binning_code(model, ch1, ch2, *code.layout, config.seed,
                                     config.randomized_rounding);
    return code;
}

ConstructedCode construct_marton(const SimulationConfig& config, int threads) {
    AuxModel model = config.make_model();
    Channel ch1 = config.channel1.make();
    Channel ch2 = config.channel2.make();
    std::array<int, 1> cond_v{0};
    std::array<int, 2> cond_vv2{0, 2};

    PairwiseJoint v_plain = effective_channel(model, 0, {}, nullptr);
    PairwiseJoint v_y1 = effective_channel(model, 0, {}, &ch1);
    PairwiseJoint v_y2 = effective_channel(model, 0, {}, &ch2);
    PairwiseJoint v2_v = effective_channel(model, 2, cond_v, nullptr);
    PairwiseJoint v2_vy2 = effective_channel(model, 2, cond_v, &ch2);
    PairwiseJoint v1_v = effective_channel(model, 1, cond_v, nullptr);
    PairwiseJoint v1_vy1 = effective_channel(model, 1, cond_v, &ch1);
    PairwiseJoint v1_vv2 = effective_channel(model, 1, cond_vv2, nullptr);

    IndexSetReport rv = build_report(v_plain, config, "V", 1, threads, {});
    IndexSetReport rvy1 = build_report(v_y1, config, "V|Y1", 2, threads, {});
    IndexSetReport rvy2 = build_report(v_y2, config, "V|Y2", 3, threads, {});
    IndexSetReport r2v = build_report(v2_v, config, "V2|V", 4, threads, {});
    IndexSetReport r2y =
        build_report(v2_vy2, config, "V2|V,Y2", 5, threads, config.rate2);
    IndexSetReport r1v = build_report(v1_v, config, "V1|V", 6, threads, {});
    IndexSetReport r1y =
        build_report(v1_vy1, config, "V1|V,Y1", 7, threads, config.rate1);
    IndexSetReport r1vv2 =
        build_report(v1_vv2, config, "V1|V,V2", 8, threads, {});
    if (!config.rate2) shrink_low_set(r2y, 1.0 - config.corner_backoff);
    if (!config.rate1) shrink_low_set(r1y, 1.0 - config.corner_backoff);

    ConstructedCode code;
    code.scheme = "marton";
    code.layout =
        build_marton_layout(rv, rvy1, rvy2, r2v, r2y, r1v, r1y, r1vv2,
                            config.k, config.common_rate_fraction);
    code.reports = {rv, rvy1, rvy2, r2v, r2y, r1v, r1y, r1vv2};
    code.marton = make_marton_code(model, ch1, ch2, *code.layout, config.seed,
                                   config.randomized_rounding);
    return code;
}

}  // namespace

ConstructedCode construct_code(const SimulationConfig& config, int threads) {
    if (config.scheme == "p2p") return construct_p2p(config, threads);
    if (config.scheme == "superposition")
        return construct_superposition(config, threads);
    if (config.scheme == "binning") return construct_binning(config, threads);
    if (config.scheme == "marton") return construct_marton(config, threads);
    throw config_error("construct: config carries no scheme");
}

// --- simulation ----------------------------------------------------------------

int sample_channel_output(const Channel& channel, int x, double u) {
    double cum = 0.0;
    for (int y = 0; y < channel.output_size(); ++y) {
        cum += channel.prob(y, x);
        if (u < cum) return y;
    }
    return channel.output_size() - 1;
}

namespace {

std::array<int, 2> run_trial(const ConstructedCode& code,
                             const SimulationConfig& config, int trial,
                             const Channel& ch1, const Channel& ch2) {
    uint64_t seed = config.seed;
    if (code.p2p) {
        const P2pCode& p2p = *code.p2p;
        std::vector<uint8_t> msg =
            make_message(seed, 1, trial, p2p.message_bits());
        std::vector<uint8_t> x = p2p_encode(p2p, msg);
        std::vector<int> xi(x.begin(), x.end());
        std::vector<int> y = sample_outputs(ch1, xi, seed, 1, trial, 0);
        std::vector<uint8_t> decoded = p2p_decode(p2p, y);
        return {decoded == msg ? 0 : 1, 0};
    }
    if (code.superposition) {
        const SuperpositionCode& sup = *code.superposition;
        std::vector<uint8_t> msg1 =
            make_message(seed, 1, trial, user1_payload_bits(sup.layout));
        std::vector<uint8_t> msg2 =
            make_message(seed, 2, trial, user2_payload_bits(sup.layout));
        auto blocks = superposition_encode_chain(sup, msg1, msg2);
        std::vector<std::vector<int>> y1(blocks.size()), y2(blocks.size());
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            y1[b] = sample_outputs(ch1, blocks[b], seed, 1, trial,
                                   static_cast<int>(b));
            y2[b] = sample_outputs(ch2, blocks[b], seed, 2, trial,
                                   static_cast<int>(b));
        }
        std::array<int, 2> err{0, 0};
        err[0] = superposition_decode_chain(sup, 1, y1) == msg1 ? 0 : 1;
        err[1] = superposition_decode_chain(sup, 2, y2) == msg2 ? 0 : 1;
        return err;
    }
    if (code.binning) {
        const BinningCode& bin = *code.binning;
        std::vector<uint8_t> msg1 =
            make_message(seed, 1, trial, user1_payload_bits(bin.layout));
        std::vector<uint8_t> msg2 =
            make_message(seed, 2, trial, user2_payload_bits(bin.layout));
        auto blocks = binning_encode_chain(bin, msg1, msg2);
        std::vector<std::vector<int>> y1(blocks.size()), y2(blocks.size());
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            y1[b] = sample_outputs(ch1, blocks[b], seed, 1, trial,
                                   static_cast<int>(b));
            y2[b] = sample_outputs(ch2, blocks[b], seed, 2, trial,
                                   static_cast<int>(b));
        }
        std::array<int, 2> err{0, 0};
        err[0] = binning_decode_chain(bin, 1, y1) == msg1 ? 0 : 1;
        err[1] = binning_decode_chain(bin, 2, y2) == msg2 ? 0 : 1;
        return err;
    }
    const MartonCode& mar = *code.marton;
    std::vector<uint8_t> msg0 = make_message(seed, 0, trial, mar.common_bits());
    std::vector<uint8_t> msg1 =
        make_message(seed, 1, trial, user1_payload_bits(mar.layout));
    std::vector<uint8_t> msg2 =
        make_message(seed, 2, trial, mar.user2_private_bits());
    auto blocks = marton_encode_chain(mar, msg0, msg1, msg2);
    std::vector<std::vector<int>> y1(blocks.size()), y2(blocks.size());
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        y1[b] = sample_outputs(ch1, blocks[b], seed, 1, trial,
                               static_cast<int>(b));
        y2[b] = sample_outputs(ch2, blocks[b], seed, 2, trial,
                               static_cast<int>(b));
    }
    std::array<int, 2> err{0, 0};
    auto [common1, private1] = marton_decode_chain(mar, 1, y1);
    auto [common2, private2] = marton_decode_chain(mar, 2, y2);
    err[0] = (common1 == msg0 && private1 == msg1) ? 0 : 1;
    err[1] = (common2 == msg0 && private2 == msg2) ? 0 : 1;
    return err;
}

void fill_metadata(SimulationReport& report, const ConstructedCode& code) {
    if (code.layout)
        for (const auto& [name, members] : code.layout->sets)
            report.set_sizes[name] = static_cast<int>(members.size());
    for (const auto& r : code.reports) {
        report.set_sizes[r.label + " low"] = static_cast<int>(r.low_set.size());
        report.set_sizes[r.label + " high"] =
            static_cast<int>(r.high_set.size());
        double max_low = 0.0;
        for (int i : r.low_set) max_low = std::max(max_low, r.z[i]);
        report.z_summary[r.label] = max_low;
    }
}

}  // namespace

SimulationReport run_simulation(const SimulationConfig& config, int threads) {
    if (config.scheme.empty())
        throw config_error("simulate: config carries no scheme");
    ConstructedCode code = construct_code(config, threads);

    SimulationReport report;
    report.resolved_config = config.to_json_text();
    fill_metadata(report, code);
    int span = config.scheme == "p2p" ? config.n : config.k * config.n;
    report.rate1 =
        static_cast<double>(code.payload_bits_user1()) / static_cast<double>(span);
    report.rate2 =
        static_cast<double>(code.payload_bits_user2()) / static_cast<double>(span);

    Channel ch1 = config.channel1.make();
    Channel ch2 = config.scheme == "p2p" ? config.channel1.make()
                                         : config.channel2.make();
    report.trial_errors.assign(config.trials, {0, 0});
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int t = next.fetch_add(1); t < config.trials;
             t = next.fetch_add(1))
            report.trial_errors[t] = run_trial(code, config, t, ch1, ch2);
    };
    int workers = std::max(1, threads);
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (const auto& e : report.trial_errors) {
        report.user1.trials += 1;
        report.user1.errors += e[0];
        if (config.scheme != "p2p") {
            report.user2.trials += 1;
            report.user2.errors += e[1];
        }
    }
    return report;
}

std::string SimulationReport::to_json_text() const {
    json j;
    j["config"] = json::parse(resolved_config);
    j["set_sizes"] = set_sizes;
    j["z_summary"] = z_summary;
    j["rate1"] = rate1;
    j["rate2"] = rate2;
    j["user1"] = {{"errors", user1.errors}, {"trials", user1.trials}};
    j["user2"] = {{"errors", user2.errors}, {"trials", user2.trials}};
    return j.dump(2) + "\n";
}

std::string SimulationReport::trials_csv() const {
    std::ostringstream out;
    out << "trial,user,error\n";
    for (std::size_t t = 0; t < trial_errors.size(); ++t) {
        out << t << ",1," << trial_errors[t][0] << "\n";
        if (user2.trials > 0) out << t << ",2," << trial_errors[t][1] << "\n";
    }
    return out.str();
}

std::string construct_document(const SimulationConfig& config, int threads) {
    ConstructedCode code = construct_code(config, threads);
    json j;
    j["config"] = json::parse(config.to_json_text());
    json reports = json::array();
    for (const auto& r : code.reports)
        reports.push_back(json::parse(report_to_json(r)));
    j["reports"] = reports;
    if (code.layout) j["layout"] = json::parse(layout_to_json(*code.layout));
    j["payload_bits_user1"] = code.payload_bits_user1();
    j["payload_bits_user2"] = code.payload_bits_user2();
    return j.dump(2) + "\n";
}

std::string compare_csv(const SimulationConfig& config) {
    Channel ch1 = config.channel1.make();
    Channel ch2 = config.channel2.make();
    if (ch1.input_size() != 2 || ch2.input_size() != 2)
        throw config_error("compare: channels must be binary-input");
    std::vector<double> grid =
        config.grid.empty() ? default_sweep_grid() : config.grid;

    std::ostringstream out;
    out << "# channel1=" << config.channel1.describe()
        << " channel2=" << config.channel2.describe() << "\n";
    out << "alpha,swapped,agg_valid,max_gap\n";
    for (double alpha : grid) {
        AuxModel model = AuxModel::pair_vx(
            {(1 - alpha) / 2, alpha / 2, alpha / 2, (1 - alpha) / 2});
        RegionPolytope agg =
            superposition_region(model, ch1, ch2, RegionVariant::agg);
        bool swapped = false;
        RegionPolytope info;
        if (agg.degradedness_ok) {
            info = superposition_region(model, ch1, ch2, RegionVariant::info);
        } else {
            RegionPolytope agg_sw =
                superposition_region(model, ch2, ch1, RegionVariant::agg);
            if (agg_sw.degradedness_ok) {
                swapped = true;
                agg = std::move(agg_sw);
                info = superposition_region(model, ch2, ch1, RegionVariant::info);
            } else {
                info = superposition_region(model, ch1, ch2, RegionVariant::info);
            }
        }
        double r1max = 0.0;
        for (const auto& v : info.vertices) r1max = std::max(r1max, v.r1);
        double gap = 0.0;
        for (int i = 0; i <= 200; ++i) {
            double r1 = r1max * i / 200.0;
            double fi = std::max(info.max_r2_at(r1), 0.0);
            double fa = std::max(agg.max_r2_at(r1), 0.0);
            gap = std::max(gap, std::abs(fi - fa));
        }
        char line[128];
        std::snprintf(line, sizeof(line), "%.10g,%d,%d,%.10g\n", alpha,
                      swapped ? 1 : 0, agg.degradedness_ok ? 1 : 0, gap);
        out << line;
    }
    return out.str();
}

}  // namespace marton
