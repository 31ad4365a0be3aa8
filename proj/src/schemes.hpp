// Executable encoders and decoders: lossless compression with side
// information, point-to-point asymmetric-channel coding, and the chained
// superposition, binning, and Marton broadcast codecs.
#pragma once

#include <cstdint>
#include <vector>

#include "construct.hpp"
#include "polar.hpp"
#include "prob.hpp"

namespace marton {

// Deterministic shared randomness: every frozen-random bit is a PRF of
// (session seed, variable id, block, position), so encoder and decoders
// agree without communicating.
struct SharedRandomness {
    uint64_t seed = 0;

    int bit(int var, int block, int pos) const;
    double uniform(int var, int block, int pos) const;  // randomized rounding
};

inline constexpr int kVarU0 = 0;
inline constexpr int kVarU1 = 1;
inline constexpr int kVarU2 = 2;

// ---------------------------------------------------------------------------
// Lossless compression with side information at the decoder: store the
// transform coefficients indexed by the report's high set.
std::vector<uint8_t> compress(const IndexSetReport& report,
                              const std::vector<uint8_t>& x);
std::vector<uint8_t> decompress(const PairwiseJoint& pairwise,
                                const IndexSetReport& report,
                                const std::vector<int>& side,
                                const std::vector<uint8_t>& stored);

// ---------------------------------------------------------------------------
// Point-to-point coding over an asymmetric channel: information in
// H_X cap L_{X|Y}, shared-random bits on the rest of H_X (and the
// unpolarized residue), deterministic argmax bits on L_X.
struct P2pCode {
    IndexSetReport plain;      // H_X / L_X
    IndexSetReport with_side;  // L_{X|Y}
    PairwiseJoint x_plain;     // side-free law of X
    PairwiseJoint x_y;         // joint of X and the channel output
    SharedRandomness shared;
    bool randomized_rounding = false;

    int message_bits() const;
};

std::vector<uint8_t> p2p_encode(const P2pCode& code,
                                const std::vector<uint8_t>& message);
std::vector<uint8_t> p2p_decode(const P2pCode& code, const std::vector<int>& y);

// ---------------------------------------------------------------------------
// Superposition codec.
struct SuperpositionCode {
    ChainingLayout layout;
    PairwiseJoint v_plain, v_y1, v_y2;  // cloud variable V
    PairwiseJoint x_v, x_vy1;           // satellite X given V (and Y1)
    int out1 = 2;                       // |Y1|, for packing (v, y1) sides
    SharedRandomness shared;
    bool randomized_rounding = false;
};

SuperpositionCode make_superposition_code(const AuxModel& model,
                                          const Channel& ch1, const Channel& ch2,
                                          ChainingLayout layout, uint64_t seed,
                                          bool randomized_rounding = false);

// k blocks of channel inputs; msg1/msg2 sized by user*_payload_bits(layout).
std::vector<std::vector<int>> superposition_encode_chain(
    const SuperpositionCode& code, const std::vector<uint8_t>& msg1,
    const std::vector<uint8_t>& msg2);

// Block-stepped decoder; user 1 consumes blocks 0..k-1, user 2 k-1..0, and
// out-of-order calls are refused.
class SuperpositionDecoder {
public:
    SuperpositionDecoder(const SuperpositionCode& code, int user);

    int expected_block() const;
    bool finished() const { return done_ == code_.layout.k; }
    void decode_block(int block, const std::vector<int>& y);
    std::vector<uint8_t> message() const;

private:
    const SuperpositionCode& code_;
    int user_;
    int done_ = 0;
    std::vector<std::vector<uint8_t>> u2_, u1_;
};

std::vector<uint8_t> superposition_decode_chain(
    const SuperpositionCode& code, int user,
    const std::vector<std::vector<int>>& y_blocks);

// ---------------------------------------------------------------------------
// Binning codec.
struct BinningCode {
    ChainingLayout layout;
    AuxModel model;  // supplies phi(v1, v2)
    PairwiseJoint v1_plain, v1_y1;
    PairwiseJoint v2_plain, v2_v1, v2_y2;
    SharedRandomness shared;
    bool randomized_rounding = false;
};

BinningCode make_binning_code(const AuxModel& model, const Channel& ch1,
                              const Channel& ch2, ChainingLayout layout,
                              uint64_t seed, bool randomized_rounding = false);

std::vector<std::vector<int>> binning_encode_chain(
    const BinningCode& code, const std::vector<uint8_t>& msg1,
    const std::vector<uint8_t>& msg2);

class BinningDecoder {
public:
    BinningDecoder(const BinningCode& code, int user);

    int expected_block() const;
    bool finished() const { return done_ == code_.layout.k; }
    void decode_block(int block, const std::vector<int>& y);
    std::vector<uint8_t> message() const;

private:
    const BinningCode& code_;
    int user_;
    int done_ = 0;
    std::vector<std::vector<uint8_t>> u1_, u2_;
};

std::vector<uint8_t> binning_decode_chain(
    const BinningCode& code, int user,
    const std::vector<std::vector<int>>& y_blocks);

// ---------------------------------------------------------------------------
// Marton codec with an optional common message carried on the leading
// fraction of the U0 payload.
struct MartonCode {
    ChainingLayout layout;
    AuxModel model;  // supplies phi(v, v1, v2)
    PairwiseJoint v_plain, v_y1, v_y2;   // U0
    PairwiseJoint v1_v, v1_vy1, v1_vv2;  // U1
    PairwiseJoint v2_v, v2_vy2;          // U2
    int out1 = 2, out2 = 2;
    SharedRandomness shared;
    bool randomized_rounding = false;

    int common_bits() const;
    int user2_private_bits() const;
};

MartonCode make_marton_code(const AuxModel& model, const Channel& ch1,
                            const Channel& ch2, ChainingLayout layout,
                            uint64_t seed, bool randomized_rounding = false);

std::vector<std::vector<int>> marton_encode_chain(
    const MartonCode& code, const std::vector<uint8_t>& msg_common,
    const std::vector<uint8_t>& msg1, const std::vector<uint8_t>& msg2);

class MartonDecoder {
public:
    MartonDecoder(const MartonCode& code, int user);

    int expected_block() const;
    bool finished() const { return done_ == code_.layout.k; }
    void decode_block(int block, const std::vector<int>& y);
    std::vector<uint8_t> common_message() const;
    std::vector<uint8_t> private_message() const;

private:
    const MartonCode& code_;
    int user_;
    int done_ = 0;
    std::vector<std::vector<uint8_t>> u0_, u1_, u2_;
};

// Returns (common message, user's private message).
std::pair<std::vector<uint8_t>, std::vector<uint8_t>> marton_decode_chain(
    const MartonCode& code, int user,
    const std::vector<std::vector<int>>& y_blocks);

// Per-block information positions (used by encoder placement, decoder
// extraction, and the rate-accounting tests).  Blocks are 0-based.
std::vector<int> scheme_info_positions(const ChainingLayout& layout,
                                       const std::string& variable, int block);

}  // namespace marton
