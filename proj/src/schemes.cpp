#include "schemes.hpp"

#include <algorithm>

#include "rng.hpp"

namespace marton {

int SharedRandomness::bit(int var, int block, int pos) const {
    return static_cast<int>(
        mix_seed(seed, kStreamSharedRandomness, var, block, pos) & 1);
}

double SharedRandomness::uniform(int var, int block, int pos) const {
    uint64_t r = mix_seed(seed, kStreamSharedRandomness, 16 + var, block, pos);
    return static_cast<double>(r >> 11) * 0x1p-53;
}

namespace {

// Lockstep bank of SC engines over one u-sequence with different side
// information; each decision rule reads the posterior of its own engine.
class EngineBank {
public:
    explicit EngineBank(std::size_t capacity) { engines_.reserve(capacity); }

    int add(const PairwiseJoint& pj, std::vector<int> side) {
        engines_.emplace_back(pj, std::move(side));
        return static_cast<int>(engines_.size()) - 1;
    }
    std::array<double, 2> posterior(int e) { return engines_[e].posterior(); }
    void set_bit(int u) {
        for (auto& e : engines_) e.set_bit(u);
    }

private:
    std::vector<ScEngine> engines_;
};

enum class Role : uint8_t { fixed, shared, argmax0, argmax1, argmax2 };

struct BlockPlan {
    int n = 0;
    int var = 0;
    int block = 0;
    std::vector<Role> role;
    std::vector<uint8_t> value;  // for Role::fixed

    BlockPlan(int n_, int var_, int block_)
        : n(n_), var(var_), block(block_), role(n_, Role::fixed), value(n_, 0) {}

    void assign(const std::vector<int>& set, Role r) {
        for (int i : set) role[i] = r;
    }
    void assign_fixed(const std::vector<int>& set, uint8_t v) {
        for (int i : set) { role[i] = Role::fixed; value[i] = v; }
    }
    // Paired verbatim copy: set and src_positions are sorted, same size.
    void assign_copied(const std::vector<int>& set,
                       const std::vector<uint8_t>& src_u,
                       const std::vector<int>& src_positions) {
        for (std::size_t t = 0; t < set.size(); ++t) {
            role[set[t]] = Role::fixed;
            value[set[t]] = src_u[src_positions[t]];
        }
    }
};

int pick_bit(const std::array<double, 2>& p, const SharedRandomness& sr,
             bool randomized, int var, int block, int pos) {
    if (randomized) return sr.uniform(var, block, pos) < p[1] ? 1 : 0;
    return p[1] > p[0] ? 1 : 0;  // ties break to 0
}

std::vector<uint8_t> run_block(EngineBank& bank, const BlockPlan& plan,
                               const SharedRandomness& sr, bool randomized) {
    std::vector<uint8_t> u(plan.n);
    for (int i = 0; i < plan.n; ++i) {
        int b;
        switch (plan.role[i]) {
            case Role::fixed: b = plan.value[i]; break;
            case Role::shared:
                // Common-randomness rounding from the encoder-side posterior;
                // every decoder reproduces the bit with its lockstep engine.
                // At fully randomized positions this is a fair coin.
                b = sr.uniform(plan.var, plan.block, i) <
                            bank.posterior(0)[1]
                        ? 1
                        : 0;
                break;
            case Role::argmax0:
                b = pick_bit(bank.posterior(0), sr, randomized, plan.var,
                             plan.block, i);
                break;
            case Role::argmax1:
                b = pick_bit(bank.posterior(1), sr, randomized, plan.var,
                             plan.block, i);
                break;
            default:
                b = pick_bit(bank.posterior(2), sr, randomized, plan.var,
                             plan.block, i);
                break;
        }
        u[i] = static_cast<uint8_t>(b);
        bank.set_bit(b);
    }
    return u;
}

std::vector<int> no_side(int n) { return std::vector<int>(n, 0); }

std::vector<int> packed_side(const std::vector<uint8_t>& msb,
                             const std::vector<int>& lsb, int lsb_size) {
    std::vector<int> s(msb.size());
    for (std::size_t t = 0; t < msb.size(); ++t)
        s[t] = msb[t] * lsb_size + lsb[t];
    return s;
}

std::vector<int> to_side(const std::vector<uint8_t>& v) {
    return std::vector<int>(v.begin(), v.end());
}

std::vector<int> union_sets(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> r;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                   std::back_inserter(r));
    return r;
}

std::vector<int> intersect_sets(const std::vector<int>& a,
                                const std::vector<int>& b) {
    std::vector<int> r;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                          std::back_inserter(r));
    return r;
}

std::vector<int> subtract_sets(const std::vector<int>& a,
                               const std::vector<int>& b) {
    std::vector<int> r;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(r));
    return r;
}

void check_message_size(const std::vector<uint8_t>& msg, int want,
                        const char* who) {
    if (static_cast<int>(msg.size()) != want)
        throw model_error(std::string(who) + ": message length mismatch");
}

void check_y_block(const std::vector<int>& y, int n) {
    if (static_cast<int>(y.size()) != n)
        throw model_error("decode_block: output block length mismatch");
}

// Consumes message bits in (block, index) order at the info positions.
class MessageCursor {
public:
    explicit MessageCursor(const std::vector<uint8_t>& msg) : msg_(msg) {}
    void place(std::vector<uint8_t>& u, const std::vector<int>& positions) {
        for (int i : positions) u[i] = msg_[pos_++];
    }
    bool exhausted() const { return pos_ == msg_.size(); }

private:
    const std::vector<uint8_t>& msg_;
    std::size_t pos_ = 0;
};

void extract(std::vector<uint8_t>& out, const std::vector<uint8_t>& u,
             const std::vector<int>& positions) {
    for (int i : positions) out.push_back(u[i]);
}

}  // namespace

std::vector<int> scheme_info_positions(const ChainingLayout& lay,
                                       const std::string& variable, int block) {
    const int k = lay.k;
    if (block < 0 || block >= k)
        throw model_error("scheme_info_positions: block out of range");
    const bool first = block == 0, last = block == k - 1;
    if (lay.scheme == "superposition") {
        if (variable == "U1") {
            if (lay.target == SuperpositionTarget::min_rate || last)
                return lay.set("I1");
            return subtract_sets(lay.set("I1"), lay.set("B1"));
        }
        if (variable == "U2") {
            if (lay.target == SuperpositionTarget::min_rate) {
                auto c = intersect_sets(lay.set("Iv1"), lay.set("I2"));
                return first ? c : union_sets(c, lay.set("D2"));
            }
            if (first) return lay.set("Iv1");
            if (!last) return union_sets(lay.set("Iv1"), lay.set("B2"));
            return union_sets(intersect_sets(lay.set("Iv1"), lay.set("I2")),
                              lay.set("B2"));
        }
    } else if (lay.scheme == "binning") {
        bool fixed_block = lay.direction == ChainDirection::backward ? last : first;
        if (variable == "U1")
            return fixed_block ? std::vector<int>{} : lay.set("I1");
        if (variable == "U2") {
            bool full = lay.direction == ChainDirection::backward ? first : last;
            return full ? lay.set("I2") : subtract_sets(lay.set("I2"), lay.set("R"));
        }
    } else if (lay.scheme == "marton") {
        if (variable == "U0") {
            if (first) return lay.set("Iv1");
            if (!last) return union_sets(lay.set("Iv1"), lay.set("B2"));
            return union_sets(intersect_sets(lay.set("Iv1"), lay.set("Isup2")),
                              lay.set("B2"));
        }
        if (variable == "U1") {
            if (last) return lay.set("I1");
            return subtract_sets(lay.set("I1"),
                                 union_sets(lay.set("B1"), lay.set("Rbin")));
        }
        if (variable == "U2")
            return first ? std::vector<int>{} : lay.set("Ibin2");
    }
    throw model_error("scheme_info_positions: unknown scheme/variable");
}

// ---------------------------------------------------------------------------
// Compression.

std::vector<uint8_t> compress(const IndexSetReport& report,
                              const std::vector<uint8_t>& x) {
    if (static_cast<int>(x.size()) != report.n)
        throw model_error("compress: block length mismatch");
    auto u = polar_transform(x);
    std::vector<uint8_t> out;
    out.reserve(report.high_set.size());
    for (int i : report.high_set) out.push_back(u[i]);
    return out;
}

std::vector<uint8_t> decompress(const PairwiseJoint& pairwise,
                                const IndexSetReport& report,
                                const std::vector<int>& side,
                                const std::vector<uint8_t>& stored) {
    if (static_cast<int>(side.size()) != report.n)
        throw model_error("decompress: side length mismatch");
    if (stored.size() != report.high_set.size())
        throw model_error("decompress: stored bit count mismatch");
    ScEngine eng(pairwise, side);
    std::size_t next = 0;
    std::vector<uint8_t> u(report.n);
    for (int i = 0; i < report.n; ++i) {
        int b;
        if (report.in_high(i)) {
            b = stored[next++];
            eng.set_bit(b);
        } else {
            auto p = eng.posterior();
            b = p[1] > p[0] ? 1 : 0;
            eng.set_bit(b);
        }
        u[i] = static_cast<uint8_t>(b);
    }
    return polar_transform(u);
}

// ---------------------------------------------------------------------------
// Point-to-point channel coding.

int P2pCode::message_bits() const {
    return static_cast<int>(
        intersect_sets(plain.high_set, with_side.low_set).size());
}

std::vector<uint8_t> p2p_encode(const P2pCode& code,
                                const std::vector<uint8_t>& message) {
    const int n = code.plain.n;
    check_message_size(message, code.message_bits(), "p2p_encode");
    BlockPlan plan(n, kVarU1, 0);
    auto info = intersect_sets(code.plain.high_set, code.with_side.low_set);
    plan.assign(code.plain.high_set, Role::shared);  // H \ I overwritten below
    for (int i = 0; i < n; ++i)
        if (!code.plain.in_high(i))
            plan.role[i] = code.plain.in_low(i) ? Role::argmax0 : Role::shared;
    std::size_t next = 0;
    for (int i : info) { plan.role[i] = Role::fixed; plan.value[i] = message[next++]; }
    EngineBank bank(1);
    bank.add(code.x_plain, no_side(n));
    auto u = run_block(bank, plan, code.shared, code.randomized_rounding);
    return polar_transform(u);
}

std::vector<uint8_t> p2p_decode(const P2pCode& code, const std::vector<int>& y) {
    const int n = code.plain.n;
    check_y_block(y, n);
    BlockPlan plan(n, kVarU1, 0);
    auto info = intersect_sets(code.plain.high_set, code.with_side.low_set);
    for (int i = 0; i < n; ++i) {
        if (code.plain.in_high(i)) plan.role[i] = Role::shared;
        else plan.role[i] = code.plain.in_low(i) ? Role::argmax0 : Role::shared;
    }
    plan.assign(info, Role::argmax1);
    EngineBank bank(2);
    bank.add(code.x_plain, no_side(n));
    bank.add(code.x_y, y);
    auto u = run_block(bank, plan, code.shared, code.randomized_rounding);
    std::vector<uint8_t> msg;
    extract(msg, u, info);
    return msg;
}

// ---------------------------------------------------------------------------
// Superposition.

SuperpositionCode make_superposition_code(const AuxModel& model,
                                          const Channel& ch1, const Channel& ch2,
                                          ChainingLayout layout, uint64_t seed,
                                          bool randomized_rounding) {
    if (model.arity() != 1)
        throw model_error("superposition: model must carry (V, X)");
    SuperpositionCode code;
    code.layout = std::move(layout);
    code.v_plain = effective_channel(model, 0, {}, nullptr);
    code.v_y1 = effective_channel(model, 0, {}, &ch1);
    code.v_y2 = effective_channel(model, 0, {}, &ch2);
    std::vector<int> cond{0};
    code.x_v = effective_channel(model, 1, cond, nullptr);
    code.x_vy1 = effective_channel(model, 1, cond, &ch1);
    code.out1 = ch1.output_size();
    code.shared.seed = seed;
    code.randomized_rounding = randomized_rounding;
    return code;
}

std::vector<std::vector<int>> superposition_encode_chain(
    const SuperpositionCode& code, const std::vector<uint8_t>& msg1,
    const std::vector<uint8_t>& msg2) {
    const ChainingLayout& lay = code.layout;
    const int n = lay.n, k = lay.k;
    const bool min_rate = lay.target == SuperpositionTarget::min_rate;
    check_message_size(msg1, user1_payload_bits(lay), "superposition_encode");
    check_message_size(msg2, user2_payload_bits(lay), "superposition_encode");

    // Cloud blocks: all prescribed bits are known up front (chained copies
    // repeat message bits), so blocks encode in natural order.
    std::vector<std::vector<uint8_t>> u2(k, std::vector<uint8_t>(n, 0));
    MessageCursor cur2(msg2);
    for (int j = 0; j < k; ++j)
        cur2.place(u2[j], scheme_info_positions(lay, "U2", j));
    std::vector<std::vector<uint8_t>> v(k);
    for (int j = 0; j < k; ++j) {
        BlockPlan plan(n, kVarU2, j);
        plan.assign(lay.set("Fr2"), Role::shared);
        plan.assign(lay.set("Fd2"), Role::argmax0);
        for (int i : scheme_info_positions(lay, "U2", j))
            { plan.role[i] = Role::fixed; plan.value[i] = u2[j][i]; }
        if (min_rate) {
            // D1 holds zeros except R, which repeats the next block's D2.
            plan.assign_fixed(lay.set("D1"), 0);
            if (j + 1 < k)
                plan.assign_copied(lay.set("R2"), u2[j + 1], lay.set("D2"));
            if (j == 0) plan.assign_fixed(lay.set("D2"), 0);
        } else {
            if (j == 0) plan.assign_fixed(lay.set("D2"), 0);
            else plan.assign_copied(lay.set("R2"), u2[j - 1], lay.set("D1"));
            if (j == k - 1) plan.assign_fixed(lay.set("D1"), 0);
        }
        EngineBank bank(1);
        bank.add(code.v_plain, no_side(n));
        u2[j] = run_block(bank, plan, code.shared, code.randomized_rounding);
        v[j] = polar_transform(u2[j]);
    }

    // Satellite blocks: B1 of block j repeats B2 of block j+1.
    std::vector<std::vector<int>> x(k);
    MessageCursor cur1(msg1);
    for (int j = 0; j < k; ++j) {
        BlockPlan plan(n, kVarU1, j);
        plan.assign(lay.set("Fr1"), Role::shared);
        plan.assign(lay.set("Fd1"), Role::argmax0);
        std::vector<uint8_t> u(n, 0);
        cur1.place(u, scheme_info_positions(lay, "U1", j));
        for (int i : scheme_info_positions(lay, "U1", j))
            { plan.role[i] = Role::fixed; plan.value[i] = u[i]; }
        if (!min_rate && j + 1 < k)
            plan.assign_copied(lay.set("B1"), u2[j + 1], lay.set("B2"));
        EngineBank bank(1);
        bank.add(code.x_v, to_side(v[j]));
        auto u1 = run_block(bank, plan, code.shared, code.randomized_rounding);
        auto xb = polar_transform(u1);
        x[j].assign(xb.begin(), xb.end());
    }
    return x;
}

SuperpositionDecoder::SuperpositionDecoder(const SuperpositionCode& code,
                                           int user)
    : code_(code), user_(user),
      u2_(code.layout.k), u1_(code.layout.k) {
    if (user != 1 && user != 2)
        throw model_error("SuperpositionDecoder: user must be 1 or 2");
}

int SuperpositionDecoder::expected_block() const {
    return user_ == 1 ? done_ : code_.layout.k - 1 - done_;
}

void SuperpositionDecoder::decode_block(int block, const std::vector<int>& y) {
    const ChainingLayout& lay = code_.layout;
    const int n = lay.n, k = lay.k;
    if (finished() || block != expected_block())
        throw model_error("SuperpositionDecoder: blocks must be decoded in "
                          "order (forward for user 1, backward for user 2)");
    check_y_block(y, n);
    const bool min_rate = lay.target == SuperpositionTarget::min_rate;
    const int j = block;

    BlockPlan plan(n, kVarU2, j);
    plan.assign(lay.set("Fr2"), Role::shared);
    plan.assign(lay.set("Fd2"), Role::argmax0);
    if (user_ == 1) {
        plan.assign(lay.set("Iv1"), Role::argmax1);
        if (min_rate) {
            // D1 \ R2 is fixed to zeros everywhere; R2 repeats future message
            // bits, so it must be decoded like the rest of Iv1.
            plan.assign_fixed(subtract_sets(lay.set("D1"), lay.set("R2")), 0);
            if (j == k - 1) plan.assign_fixed(lay.set("R2"), 0);
            if (j == 0) plan.assign_fixed(lay.set("D2"), 0);
            else plan.assign_copied(lay.set("D2"), u2_[j - 1], lay.set("R2"));
        } else {
            if (j == 0) {
                plan.assign_fixed(lay.set("D2"), 0);
            } else {
                plan.assign_copied(lay.set("R2"), u2_[j - 1], lay.set("D1"));
                plan.assign_copied(lay.set("B2"), u1_[j - 1], lay.set("B1"));
            }
            if (j == k - 1) plan.assign_fixed(lay.set("D1"), 0);
        }
    } else {
        plan.assign(lay.set("I2"), Role::argmax1);
        if (min_rate) {
            plan.assign_fixed(lay.set("D1"), 0);
            if (j + 1 < k)
                plan.assign_copied(lay.set("R2"), u2_[j + 1], lay.set("D2"));
            if (j == 0) plan.assign_fixed(lay.set("D2"), 0);
        } else {
            if (j == k - 1) plan.assign_fixed(lay.set("D1"), 0);
            else plan.assign_copied(lay.set("D1"), u2_[j + 1], lay.set("R2"));
            if (j == 0) plan.assign_fixed(lay.set("D2"), 0);
        }
    }
    EngineBank bank(2);
    bank.add(code_.v_plain, no_side(n));
    bank.add(user_ == 1 ? code_.v_y1 : code_.v_y2, y);
    u2_[j] = run_block(bank, plan, code_.shared, code_.randomized_rounding);

    if (user_ == 1) {
        auto v = polar_transform(u2_[j]);
        BlockPlan plan1(n, kVarU1, j);
        plan1.assign(lay.set("Fr1"), Role::shared);
        plan1.assign(lay.set("Fd1"), Role::argmax0);
        plan1.assign(lay.set("I1"), Role::argmax1);
        EngineBank bank1(2);
        bank1.add(code_.x_v, to_side(v));
        bank1.add(code_.x_vy1, packed_side(v, y, code_.out1));
        u1_[j] = run_block(bank1, plan1, code_.shared, code_.randomized_rounding);
    }
    ++done_;
}

std::vector<uint8_t> SuperpositionDecoder::message() const {
    if (!finished())
        throw model_error("SuperpositionDecoder: chain not fully decoded");
    std::vector<uint8_t> msg;
    const auto& u = user_ == 1 ? u1_ : u2_;
    const char* var = user_ == 1 ? "U1" : "U2";
    for (int j = 0; j < code_.layout.k; ++j)
        extract(msg, u[j], scheme_info_positions(code_.layout, var, j));
    return msg;
}

std::vector<uint8_t> superposition_decode_chain(
    const SuperpositionCode& code, int user,
    const std::vector<std::vector<int>>& y_blocks) {
    if (static_cast<int>(y_blocks.size()) != code.layout.k)
        throw model_error("superposition_decode_chain: block count mismatch");
    SuperpositionDecoder dec(code, user);
    while (!dec.finished()) {
        int j = dec.expected_block();
        dec.decode_block(j, y_blocks[j]);
    }
    return dec.message();
}

// ---------------------------------------------------------------------------
// Binning.

BinningCode make_binning_code(const AuxModel& model, const Channel& ch1,
                              const Channel& ch2, ChainingLayout layout,
                              uint64_t seed, bool randomized_rounding) {
    if (model.arity() != 2)
        throw model_error("binning: model must carry (V1, V2)");
    BinningCode code{std::move(layout), model, {}, {}, {}, {}, {}, {}, false};
    code.v1_plain = effective_channel(model, 0, {}, nullptr);
    code.v1_y1 = effective_channel(model, 0, {}, &ch1);
    code.v2_plain = effective_channel(model, 1, {}, nullptr);
    std::vector<int> cond{0};
    code.v2_v1 = effective_channel(model, 1, cond, nullptr);
    code.v2_y2 = effective_channel(model, 1, {}, &ch2);
    code.shared.seed = seed;
    code.randomized_rounding = randomized_rounding;
    return code;
}

std::vector<std::vector<int>> binning_encode_chain(
    const BinningCode& code, const std::vector<uint8_t>& msg1,
    const std::vector<uint8_t>& msg2) {
    const ChainingLayout& lay = code.layout;
    const int n = lay.n, k = lay.k;
    check_message_size(msg1, user1_payload_bits(lay), "binning_encode");
    check_message_size(msg2, user2_payload_bits(lay), "binning_encode");

    // First user's blocks are independent; the no-information block carries
    // fixed zeros in I1 so both decoders can reproduce v1 there.
    std::vector<std::vector<uint8_t>> v1(k);
    MessageCursor cur1(msg1);
    for (int j = 0; j < k; ++j) {
        BlockPlan plan(n, kVarU1, j);
        plan.assign(lay.set("Fr1"), Role::shared);
        plan.assign(lay.set("Fd1"), Role::argmax0);
        std::vector<uint8_t> u(n, 0);
        cur1.place(u, scheme_info_positions(lay, "U1", j));
        for (int i : lay.set("I1")) { plan.role[i] = Role::fixed; plan.value[i] = u[i]; }
        EngineBank bank(1);
        bank.add(code.v1_plain, no_side(n));
        auto u1 = run_block(bank, plan, code.shared, code.randomized_rounding);
        v1[j] = polar_transform(u1);
    }

    // Second user's blocks chain the critical bits through R: backward
    // direction stores the previous block's criticals (encode forward),
    // forward direction the next block's (encode backward).
    const bool backward = lay.direction == ChainDirection::backward;
    std::vector<std::vector<uint8_t>> u2(k);
    std::vector<std::vector<uint8_t>> msg_bits(k, std::vector<uint8_t>(n, 0));
    MessageCursor cur2(msg2);
    for (int j = 0; j < k; ++j)
        cur2.place(msg_bits[j], scheme_info_positions(lay, "U2", j));
    for (int step = 0; step < k; ++step) {
        int j = backward ? step : k - 1 - step;
        BlockPlan plan(n, kVarU2, j);
        plan.assign(lay.set("Fr2"), Role::shared);
        plan.assign(lay.set("Fd2"), Role::argmax0);
        plan.assign(lay.set("Fout2"), Role::argmax1);
        plan.assign(lay.set("Fcr2"), Role::argmax1);
        for (int i : scheme_info_positions(lay, "U2", j))
            { plan.role[i] = Role::fixed; plan.value[i] = msg_bits[j][i]; }
        if (backward && j > 0)
            plan.assign_copied(lay.set("R"), u2[j - 1], lay.set("Fcr2"));
        if (!backward && j + 1 < k)
            plan.assign_copied(lay.set("R"), u2[j + 1], lay.set("Fcr2"));
        EngineBank bank(2);
        bank.add(code.v2_plain, no_side(n));
        bank.add(code.v2_v1, to_side(v1[j]));
        u2[j] = run_block(bank, plan, code.shared, code.randomized_rounding);
    }

    std::vector<std::vector<int>> x(k, std::vector<int>(n));
    for (int j = 0; j < k; ++j) {
        auto v2 = polar_transform(u2[j]);
        for (int t = 0; t < n; ++t) {
            int vals[2] = {v1[j][t], v2[t]};
            x[j][t] = code.model.channel_input(vals);
        }
    }
    return x;
}

BinningDecoder::BinningDecoder(const BinningCode& code, int user)
    : code_(code), user_(user), u1_(code.layout.k), u2_(code.layout.k) {
    if (user != 1 && user != 2)
        throw model_error("BinningDecoder: user must be 1 or 2");
}

int BinningDecoder::expected_block() const {
    bool backward = code_.layout.direction == ChainDirection::backward;
    if (user_ == 1) return done_;  // blocks are independent for user 1
    return backward ? code_.layout.k - 1 - done_ : done_;
}

void BinningDecoder::decode_block(int block, const std::vector<int>& y) {
    const ChainingLayout& lay = code_.layout;
    const int n = lay.n, k = lay.k;
    if (finished() || block != expected_block())
        throw model_error("BinningDecoder: blocks must be decoded in the "
                          "chained order");
    check_y_block(y, n);
    const bool backward = lay.direction == ChainDirection::backward;
    const int j = block;
    const int fixed_block = backward ? k - 1 : 0;

    if (user_ == 1) {
        BlockPlan plan(n, kVarU1, j);
        plan.assign(lay.set("Fr1"), Role::shared);
        plan.assign(lay.set("Fd1"), Role::argmax0);
        if (j == fixed_block) plan.assign_fixed(lay.set("I1"), 0);
        else plan.assign(lay.set("I1"), Role::argmax1);
        EngineBank bank(2);
        bank.add(code_.v1_plain, no_side(n));
        bank.add(code_.v1_y1, y);
        u1_[j] = run_block(bank, plan, code_.shared, code_.randomized_rounding);
        ++done_;
        return;
    }

    BlockPlan plan(n, kVarU2, j);
    plan.assign(lay.set("Fr2"), Role::shared);
    plan.assign(lay.set("Fd2"), Role::argmax0);
    plan.assign(lay.set("I2"), Role::argmax1);
    EngineBank bank(3);
    bank.add(code_.v2_plain, no_side(n));
    bank.add(code_.v2_y2, y);
    if (j == fixed_block) {
        // Reproduce v1 exactly from the fixed and shared bits, then replicate
        // the encoder's rule for the outlier and critical positions.
        BlockPlan plan1(n, kVarU1, j);
        plan1.assign_fixed(lay.set("I1"), 0);
        plan1.assign(lay.set("Fr1"), Role::shared);
        plan1.assign(lay.set("Fd1"), Role::argmax0);
        EngineBank bank1(1);
        bank1.add(code_.v1_plain, no_side(n));
        auto u1 = run_block(bank1, plan1, code_.shared, code_.randomized_rounding);
        auto v1 = polar_transform(u1);
        bank.add(code_.v2_v1, to_side(v1));
        plan.assign(lay.set("Fout2"), Role::argmax2);
        plan.assign(lay.set("Fcr2"), Role::argmax2);
    } else {
        plan.assign(lay.set("Fout2"), Role::argmax1);
        int src = backward ? j + 1 : j - 1;
        plan.assign_copied(lay.set("Fcr2"), u2_[src], lay.set("R"));
    }
    u2_[j] = run_block(bank, plan, code_.shared, code_.randomized_rounding);
    ++done_;
}

std::vector<uint8_t> BinningDecoder::message() const {
    if (!finished())
        throw model_error("BinningDecoder: chain not fully decoded");
    std::vector<uint8_t> msg;
    const auto& u = user_ == 1 ? u1_ : u2_;
    const char* var = user_ == 1 ? "U1" : "U2";
    for (int j = 0; j < code_.layout.k; ++j)
        extract(msg, u[j], scheme_info_positions(code_.layout, var, j));
    return msg;
}

std::vector<uint8_t> binning_decode_chain(
    const BinningCode& code, int user,
    const std::vector<std::vector<int>>& y_blocks) {
    if (static_cast<int>(y_blocks.size()) != code.layout.k)
        throw model_error("binning_decode_chain: block count mismatch");
    BinningDecoder dec(code, user);
    while (!dec.finished()) {
        int j = dec.expected_block();
        dec.decode_block(j, y_blocks[j]);
    }
    return dec.message();
}

// ---------------------------------------------------------------------------
// Marton.

int MartonCode::common_bits() const {
    const ChainingLayout& lay = layout;
    int c = static_cast<int>(
        intersect_sets(lay.set("Iv1"), lay.set("Isup2")).size());
    int u0 = lay.size("Iv1") +
             (lay.k - 2) * (lay.size("Iv1") + lay.size("B2")) +
             c + lay.size("B2");
    return static_cast<int>(lay.common_rate_fraction * u0);
}

int MartonCode::user2_private_bits() const {
    return user2_payload_bits(layout) - common_bits();
}

MartonCode make_marton_code(const AuxModel& model, const Channel& ch1,
                            const Channel& ch2, ChainingLayout layout,
                            uint64_t seed, bool randomized_rounding) {
    if (model.arity() != 3)
        throw model_error("marton: model must carry (V, V1, V2)");
    MartonCode code{std::move(layout), model, {}, {}, {}, {}, {}, {}, {}, {},
                    2, 2, {}, false};
    code.v_plain = effective_channel(model, 0, {}, nullptr);
    code.v_y1 = effective_channel(model, 0, {}, &ch1);
    code.v_y2 = effective_channel(model, 0, {}, &ch2);
    std::vector<int> cond_v{0};
    std::vector<int> cond_vv2{0, 2};
    code.v1_v = effective_channel(model, 1, cond_v, nullptr);
    code.v1_vy1 = effective_channel(model, 1, cond_v, &ch1);
    code.v1_vv2 = effective_channel(model, 1, cond_vv2, nullptr);
    code.v2_v = effective_channel(model, 2, cond_v, nullptr);
    code.v2_vy2 = effective_channel(model, 2, cond_v, &ch2);
    code.out1 = ch1.output_size();
    code.out2 = ch2.output_size();
    code.shared.seed = seed;
    code.randomized_rounding = randomized_rounding;
    return code;
}

std::vector<std::vector<int>> marton_encode_chain(
    const MartonCode& code, const std::vector<uint8_t>& msg_common,
    const std::vector<uint8_t>& msg1, const std::vector<uint8_t>& msg2) {
    const ChainingLayout& lay = code.layout;
    const int n = lay.n, k = lay.k;
    check_message_size(msg_common, code.common_bits(), "marton_encode");
    check_message_size(msg1, user1_payload_bits(lay), "marton_encode");
    check_message_size(msg2, code.user2_private_bits(), "marton_encode");
    std::vector<uint8_t> payload2(msg_common);
    payload2.insert(payload2.end(), msg2.begin(), msg2.end());

    // U0 forward, like the superposition cloud (all prescribed bits known).
    std::vector<std::vector<uint8_t>> u0(k, std::vector<uint8_t>(n, 0));
    MessageCursor cur2(payload2);
    for (int j = 0; j < k; ++j)
        cur2.place(u0[j], scheme_info_positions(lay, "U0", j));
    std::vector<std::vector<uint8_t>> v(k);
    for (int j = 0; j < k; ++j) {
        BlockPlan plan(n, kVarU0, j);
        plan.assign(lay.set("Fr0"), Role::shared);
        plan.assign(lay.set("Fd0"), Role::argmax0);
        for (int i : scheme_info_positions(lay, "U0", j))
            { plan.role[i] = Role::fixed; plan.value[i] = u0[j][i]; }
        if (j == 0) plan.assign_fixed(lay.set("D2"), 0);
        else plan.assign_copied(lay.set("Rsup"), u0[j - 1], lay.set("D1"));
        if (j == k - 1) plan.assign_fixed(lay.set("D1"), 0);
        EngineBank bank(1);
        bank.add(code.v_plain, no_side(n));
        u0[j] = run_block(bank, plan, code.shared, code.randomized_rounding);
        v[j] = polar_transform(u0[j]);
    }

    // U2 per block given v; block 1 carries the fixed known sequence.
    std::vector<std::vector<uint8_t>> v2(k);
    std::vector<std::vector<uint8_t>> u2(k);
    for (int j = 0; j < k; ++j) {
        BlockPlan plan(n, kVarU2, j);
        plan.assign(lay.set("Fr2"), Role::shared);
        plan.assign(lay.set("Fd2"), Role::argmax0);
        if (j == 0) plan.assign_fixed(lay.set("Ibin2"), 0);
        else {
            std::vector<uint8_t> u(n, 0);
            cur2.place(u, scheme_info_positions(lay, "U2", j));
            for (int i : lay.set("Ibin2"))
                { plan.role[i] = Role::fixed; plan.value[i] = u[i]; }
        }
        EngineBank bank(1);
        bank.add(code.v2_v, to_side(v[j]));
        u2[j] = run_block(bank, plan, code.shared, code.randomized_rounding);
        v2[j] = polar_transform(u2[j]);
    }

    // U1 backward: R_bin of block j repeats the criticals of block j+1,
    // which exist only once that block has been encoded.
    std::vector<std::vector<uint8_t>> u1(k);
    std::vector<std::vector<uint8_t>> msg_bits(k, std::vector<uint8_t>(n, 0));
    MessageCursor cur1(msg1);
    for (int j = 0; j < k; ++j)
        cur1.place(msg_bits[j], scheme_info_positions(lay, "U1", j));
    for (int j = k - 1; j >= 0; --j) {
        BlockPlan plan(n, kVarU1, j);
        plan.assign(lay.set("Fr1"), Role::shared);
        plan.assign(lay.set("Fd1"), Role::argmax0);
        plan.assign(lay.set("Fout1"), Role::argmax1);
        plan.assign(lay.set("Fcr1"), Role::argmax1);
        for (int i : scheme_info_positions(lay, "U1", j))
            { plan.role[i] = Role::fixed; plan.value[i] = msg_bits[j][i]; }
        if (j + 1 < k) {
            plan.assign_copied(lay.set("B1"), u0[j + 1], lay.set("B2"));
            plan.assign_copied(lay.set("Rbin"), u1[j + 1], lay.set("Fcr1"));
        }
        EngineBank bank(2);
        bank.add(code.v1_v, to_side(v[j]));
        bank.add(code.v1_vv2, packed_side(v[j], to_side(v2[j]), 2));
        u1[j] = run_block(bank, plan, code.shared, code.randomized_rounding);
    }

    std::vector<std::vector<int>> x(k, std::vector<int>(n));
    for (int j = 0; j < k; ++j) {
        auto v1 = polar_transform(u1[j]);
        for (int t = 0; t < n; ++t) {
            int vals[3] = {v[j][t], v1[t], v2[j][t]};
            x[j][t] = code.model.channel_input(vals);
        }
    }
    return x;
}

MartonDecoder::MartonDecoder(const MartonCode& code, int user)
    : code_(code), user_(user),
      u0_(code.layout.k), u1_(code.layout.k), u2_(code.layout.k) {
    if (user != 1 && user != 2)
        throw model_error("MartonDecoder: user must be 1 or 2");
}

int MartonDecoder::expected_block() const {
    return user_ == 1 ? done_ : code_.layout.k - 1 - done_;
}

void MartonDecoder::decode_block(int block, const std::vector<int>& y) {
    const ChainingLayout& lay = code_.layout;
    const int n = lay.n, k = lay.k;
    if (finished() || block != expected_block())
        throw model_error("MartonDecoder: blocks must be decoded in order "
                          "(forward for user 1, backward for user 2)");
    check_y_block(y, n);
    const int j = block;

    // U0 first, with the superposition forward/backward rules.
    BlockPlan plan0(n, kVarU0, j);
    plan0.assign(lay.set("Fr0"), Role::shared);
    plan0.assign(lay.set("Fd0"), Role::argmax0);
    if (user_ == 1) {
        plan0.assign(lay.set("Iv1"), Role::argmax1);
        if (j == 0) {
            plan0.assign_fixed(lay.set("D2"), 0);
        } else {
            plan0.assign_copied(lay.set("Rsup"), u0_[j - 1], lay.set("D1"));
            plan0.assign_copied(lay.set("B2"), u1_[j - 1], lay.set("B1"));
        }
        if (j == k - 1) plan0.assign_fixed(lay.set("D1"), 0);
    } else {
        plan0.assign(lay.set("Isup2"), Role::argmax1);
        if (j == k - 1) plan0.assign_fixed(lay.set("D1"), 0);
        else plan0.assign_copied(lay.set("D1"), u0_[j + 1], lay.set("Rsup"));
        if (j == 0) plan0.assign_fixed(lay.set("D2"), 0);
    }
    EngineBank bank0(2);
    bank0.add(code_.v_plain, no_side(n));
    bank0.add(user_ == 1 ? code_.v_y1 : code_.v_y2, y);
    u0_[j] = run_block(bank0, plan0, code_.shared, code_.randomized_rounding);
    auto v = polar_transform(u0_[j]);

    if (user_ == 2) {
        BlockPlan plan2(n, kVarU2, j);
        plan2.assign(lay.set("Fr2"), Role::shared);
        plan2.assign(lay.set("Fd2"), Role::argmax0);
        if (j == 0) plan2.assign_fixed(lay.set("Ibin2"), 0);
        else plan2.assign(lay.set("Ibin2"), Role::argmax1);
        EngineBank bank2(2);
        bank2.add(code_.v2_v, to_side(v));
        bank2.add(code_.v2_vy2, packed_side(v, y, code_.out2));
        u2_[j] = run_block(bank2, plan2, code_.shared, code_.randomized_rounding);
        ++done_;
        return;
    }

    BlockPlan plan1(n, kVarU1, j);
    plan1.assign(lay.set("Fr1"), Role::shared);
    plan1.assign(lay.set("Fd1"), Role::argmax0);
    plan1.assign(lay.set("I1"), Role::argmax1);
    plan1.assign(lay.set("Fout1"), Role::argmax1);
    EngineBank bank1(3);
    bank1.add(code_.v1_v, to_side(v));
    bank1.add(code_.v1_vy1, packed_side(v, y, code_.out1));
    if (j == 0) {
        // Rebuild the first u2 block from its fixed and shared bits, then
        // replicate the encoder's critical-bit rule given (v, v2).
        BlockPlan plan2(n, kVarU2, 0);
        plan2.assign_fixed(lay.set("Ibin2"), 0);
        plan2.assign(lay.set("Fr2"), Role::shared);
        plan2.assign(lay.set("Fd2"), Role::argmax0);
        EngineBank bank2(1);
        bank2.add(code_.v2_v, to_side(v));
        auto u2 = run_block(bank2, plan2, code_.shared, code_.randomized_rounding);
        auto v2 = polar_transform(u2);
        bank1.add(code_.v1_vv2, packed_side(v, to_side(v2), 2));
        plan1.assign(lay.set("Fcr1"), Role::argmax2);
    } else {
        plan1.assign_copied(lay.set("Fcr1"), u1_[j - 1], lay.set("Rbin"));
    }
    u1_[j] = run_block(bank1, plan1, code_.shared, code_.randomized_rounding);
    ++done_;
}

std::vector<uint8_t> MartonDecoder::common_message() const {
    if (!finished())
        throw model_error("MartonDecoder: chain not fully decoded");
    std::vector<uint8_t> u0_payload;
    for (int j = 0; j < code_.layout.k; ++j)
        extract(u0_payload, u0_[j],
                scheme_info_positions(code_.layout, "U0", j));
    u0_payload.resize(code_.common_bits());
    return u0_payload;
}

std::vector<uint8_t> MartonDecoder::private_message() const {
    if (!finished())
        throw model_error("MartonDecoder: chain not fully decoded");
    std::vector<uint8_t> msg;
    if (user_ == 1) {
        for (int j = 0; j < code_.layout.k; ++j)
            extract(msg, u1_[j], scheme_info_positions(code_.layout, "U1", j));
        return msg;
    }
    for (int j = 0; j < code_.layout.k; ++j)
        extract(msg, u0_[j], scheme_info_positions(code_.layout, "U0", j));
    for (int j = 0; j < code_.layout.k; ++j)
        extract(msg, u2_[j], scheme_info_positions(code_.layout, "U2", j));
    msg.erase(msg.begin(), msg.begin() + code_.common_bits());
    return msg;
}

std::pair<std::vector<uint8_t>, std::vector<uint8_t>> marton_decode_chain(
    const MartonCode& code, int user,
    const std::vector<std::vector<int>>& y_blocks) {
    if (static_cast<int>(y_blocks.size()) != code.layout.k)
        throw model_error("marton_decode_chain: block count mismatch");
    MartonDecoder dec(code, user);
    while (!dec.finished()) {
        int j = dec.expected_block();
        dec.decode_block(j, y_blocks[j]);
    }
    return {dec.common_message(), dec.private_message()};
}

}  // namespace marton
