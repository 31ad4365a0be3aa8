#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "construct.hpp"

using namespace marton;

namespace {

PairwiseJoint random_pairwise(std::mt19937_64& rng, int side_size) {
    std::uniform_real_distribution<double> u(0.02, 1.0);
    std::vector<double> p(2 * side_size);
    double sum = 0.0;
    for (double& v : p) { v = u(rng); sum += v; }
    for (double& v : p) v /= sum;
    return PairwiseJoint(side_size, std::move(p));
}

IndexSetReport make_report(int n, std::vector<int> high, std::vector<int> low) {
    IndexSetReport r;
    r.n = n;
    r.z.assign(n, 0.5);
    r.high_set = std::move(high);
    r.low_set = std::move(low);
    r.finalize_masks();
    return r;
}

std::vector<int> range_set(int lo, int hi) {
    std::vector<int> v;
    for (int i = lo; i < hi; ++i) v.push_back(i);
    return v;
}

}  // namespace

TEST_CASE("exact Z base values for a Bernoulli source") {
    // n = 1: Z = 2 sqrt(p (1-p)).
    CHECK(exact_Z(PairwiseJoint::source_only(0.11), 1, 0) ==
          doctest::Approx(2.0 * std::sqrt(0.11 * 0.89)).epsilon(1e-12));

    // n = 2: U1 = X1 xor X2 ~ Bern(q), q = 2 p (1-p);
    // Z(U2 | U1) = 2 sqrt(P(00) P(01)) + 2 sqrt(P(10) P(11)).
    double p = 0.11, q = 2.0 * p * (1.0 - p);
    auto z = exact_Z_all(PairwiseJoint::source_only(p), 2);
    CHECK(z[0] == doctest::Approx(2.0 * std::sqrt(q * (1.0 - q))).epsilon(1e-12));
    double z1 = 2.0 * std::sqrt((1 - p) * (1 - p) * p * p) +
                2.0 * std::sqrt(p * (1 - p) * p * (1 - p));
    CHECK(z[1] == doctest::Approx(z1).epsilon(1e-12));
}

TEST_CASE("exact Z degenerate sources") {
    // Constant source: every conditional is deterministic.
    PairwiseJoint constant(1, {1.0, 0.0});
    for (double v : exact_Z_all(constant, 4)) CHECK(v == 0.0);

    // Side reveals the symbol exactly: all indices fully predictable.
    PairwiseJoint revealed(2, {0.35, 0.0, 0.0, 0.65});
    for (double v : exact_Z_all(revealed, 8)) CHECK(v <= 1e-9);

    // No side, uniform source: Z = 1 at every index, every n.
    for (int n : {1, 2, 4, 8})
        for (double v : exact_Z_all(PairwiseJoint::source_only(0.5), n))
            CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("exact Z refuses oversized enumerations") {
    CHECK_THROWS_AS(exact_Z(PairwiseJoint::source_only(0.3), 16, 0), model_error);
    PairwiseJoint wide(8, std::vector<double>(16, 1.0 / 16.0));
    CHECK_THROWS_AS(exact_Z_all(wide, 8), model_error);
}

TEST_CASE("Monte-Carlo Z tracks exact Z") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 12; ++trial) {
        int n = 2 << (trial % 3);  // 2, 4, 8
        int side_size = 1 + static_cast<int>(rng() % 3);
        PairwiseJoint pj = random_pairwise(rng, side_size);
        auto exact = exact_Z_all(pj, n);
        ConstructionParams params;
        params.n = n;
        params.mc_samples = 100000;
        params.seed = rng();
        auto est = estimate_Z(pj, params);
        for (int i = 0; i < n; ++i)
            CHECK(std::abs(est[i] - exact[i]) < 0.02);
    }
}

TEST_CASE("Monte-Carlo Z is independent of the thread count") {
    PairwiseJoint pj(2, {0.4, 0.1, 0.2, 0.3});
    ConstructionParams params;
    params.n = 64;
    params.mc_samples = 20000;
    params.seed = 1234;
    auto a = estimate_Z(pj, params, 1);
    auto b = estimate_Z(pj, params, 4);
    auto c = estimate_Z(pj, params, 7);
    CHECK(a == b);
    CHECK(a == c);
}

TEST_CASE("threshold policy reproduces the literal delta rule") {
    auto z = exact_Z_all(PairwiseJoint::source_only(0.11), 8);
    ConstructionParams params;
    params.n = 8;
    params.beta = 0.45;
    auto rep = build_index_sets(z, params, std::nullopt, "X");
    double delta = std::exp2(-std::pow(8.0, 0.45));
    CHECK(rep.high_threshold == doctest::Approx(1.0 - delta));
    CHECK(rep.low_threshold == doctest::Approx(delta));
    for (int i = 0; i < 8; ++i) {
        CHECK(rep.in_high(i) == (z[i] >= 1.0 - delta));
        CHECK(rep.in_low(i) == (z[i] <= delta));
        CHECK_FALSE((rep.in_high(i) && rep.in_low(i)));
    }
    CHECK_THROWS_AS(build_index_sets(z, params, 0.5), model_error);
}

TEST_CASE("rate-targeted policy picks extreme-Z indices deterministically") {
    std::vector<double> z = {0.9, 0.1, 0.5, 0.9, 0.05, 0.5, 0.99, 0.2};
    ConstructionParams params;
    params.n = 8;
    params.policy = SelectionPolicy::rate_targeted;
    params.low_fraction = 0.25;
    auto rep = build_index_sets(z, params, 0.375);
    CHECK(rep.high_set == std::vector<int>{0, 3, 6});
    CHECK(rep.low_set == std::vector<int>{1, 4});
    CHECK(rep.high_threshold == doctest::Approx(0.9));
    CHECK(rep.low_threshold == doctest::Approx(0.1));
    // Same inputs, same sets.
    auto rep2 = build_index_sets(z, params, 0.375);
    CHECK(rep.high_set == rep2.high_set);
    CHECK(rep.low_set == rep2.low_set);
    // Overlapping fractions are rejected.
    params.low_fraction = 0.8;
    CHECK_THROWS_AS(build_index_sets(z, params, 0.375), model_error);
    params.low_fraction = 0.25;
    CHECK_THROWS_AS(build_index_sets(z, params, std::nullopt), model_error);
}

TEST_CASE("polarized-set inclusions for a degraded side variable") {
    // X ~ Bern(0.4) observed through a BSC(0.1): conditioning can only help,
    // so high(X | Y) is contained in high(X) and low(X) in low(X | Y).
    double px = 0.4, f = 0.1;
    PairwiseJoint plain = PairwiseJoint::source_only(px);
    PairwiseJoint with_y(2, {(1 - px) * (1 - f), (1 - px) * f,
                             px * f, px * (1 - f)});
    int n = 8;
    auto z_plain = exact_Z_all(plain, n);
    auto z_side = exact_Z_all(with_y, n);
    ConstructionParams params;
    params.n = n;
    auto rp = build_index_sets(z_plain, params);
    auto rs = build_index_sets(z_side, params);
    for (int i = 0; i < n; ++i) {
        CHECK(z_side[i] <= z_plain[i] + 1e-12);
        if (rs.in_high(i)) CHECK(rp.in_high(i));
        if (rp.in_low(i)) CHECK(rs.in_low(i));
    }
}

TEST_CASE("superposition layout arithmetic") {
    int n = 32;
    // Cloud space: I2 = [0,12), Iv1 = [4,14), overlap [4,12) of size 8.
    auto i2 = range_set(0, 12);
    auto iv1 = range_set(4, 14);
    std::vector<int> hv = range_set(0, 14);
    auto v_plain = make_report(n, hv, range_set(20, 32));
    auto v_y2 = make_report(n, {}, i2);
    auto v_y1 = make_report(n, {}, iv1);
    // Satellite space: I1 = [0,10).
    auto x_v = make_report(n, range_set(0, 10), range_set(24, 32));
    auto x_vy1 = make_report(n, {}, range_set(0, 10));

    auto lay = build_superposition_layout(v_plain, v_y1, v_y2, x_v, x_vy1, 3,
                                          SuperpositionTarget::full_rate);
    CHECK(lay.size("I2") == 12);
    CHECK(lay.size("Iv1") == 10);
    CHECK(lay.set("D2") == range_set(0, 4));
    CHECK(lay.set("D1") == range_set(12, 14));
    CHECK(lay.set("R2") == range_set(0, 2));
    CHECK(lay.set("B2") == range_set(2, 4));
    CHECK(lay.set("B1") == range_set(0, 2));
    CHECK(lay.size("Fd2") == 12);
    // Frozen-random cloud set: [14,20) residue plus nothing decodable.
    CHECK(lay.set("Fr2") == range_set(14, 20));
    // |Iv1 union I2| = |Iv1| + |D2| = |I2| + |D1|.
    CHECK(lay.size("Iv1") + lay.size("D2") == lay.size("I2") + lay.size("D1"));

    // Payload accounting, k = 3: user 2 carries Iv1 in block 1, Iv1 + B2 in
    // middle blocks, (Iv1 cap I2) + B2 in the last block.
    CHECK(user2_payload_bits(lay) == 10 + (10 + 2) + (8 + 2));
    CHECK(user1_payload_bits(lay) == 2 * (10 - 2) + 10);

    // Min-rate corner on the mirrored orientation: swap the user roles.
    auto lay_min = build_superposition_layout(v_plain, v_y2, v_y1, x_v, x_vy1,
                                              3, SuperpositionTarget::min_rate);
    CHECK(lay_min.set("D1") == range_set(0, 4));
    CHECK(lay_min.set("D2") == range_set(12, 14));
    CHECK(lay_min.size("R2") == 2);
    CHECK(lay_min.set("R2") == range_set(0, 2));
    CHECK(user2_payload_bits(lay_min) == 3 * 8 + 2 * 2);
    CHECK(user1_payload_bits(lay_min) == 3 * 10);

    // Full-rate chaining needs |D2| >= |D1|.
    CHECK_THROWS_AS(build_superposition_layout(v_plain, v_y2, v_y1, x_v, x_vy1,
                                               3, SuperpositionTarget::full_rate),
                    rate_infeasible_error);
    // Satellite must fit the extra B2 bits.
    auto x_v_small = make_report(n, {0}, range_set(24, 32));
    auto x_vy1_small = make_report(n, {}, {0});
    CHECK_THROWS_AS(build_superposition_layout(v_plain, v_y1, v_y2, x_v_small,
                                               x_vy1_small, 3,
                                               SuperpositionTarget::full_rate),
                    rate_infeasible_error);
}

TEST_CASE("binning layout arithmetic") {
    int n = 64;
    auto v1_plain = make_report(n, range_set(0, 30), range_set(40, 64));
    auto v1_y1 = make_report(n, {}, range_set(0, 25));
    // Second user's space: H(V2|V1) = [0,20), L(V2) = [30,64),
    // L(V2|Y2) = [0,20) + [25,28) -> I2 of size 20, Fout2 = [25,28),
    // Fcr2 = [20,25) minus nothing -> [20,25)? Keep |Fcr2| = 3: shrink.
    auto v2_plain = make_report(n, range_set(0, 20), range_set(30, 64));
    auto v2_v1 = make_report(n, range_set(0, 20), range_set(23, 64));
    auto v2_y2 = make_report(n, {}, range_set(0, 28));
    auto lay = build_binning_layout(v1_plain, v1_y1, v2_plain, v2_v1, v2_y2, 4,
                                    ChainDirection::backward);
    CHECK(lay.size("I1") == 25);
    CHECK(lay.set("Fr1") == range_set(25, 40));
    CHECK(lay.size("I2") == 20);
    CHECK(lay.set("Fout2") == range_set(20, 28));
    CHECK(lay.size("Fcr2") == 2);  // [28,30): not high, not L(V2), not L(V2|Y2)
    CHECK(lay.set("Fcr2") == range_set(28, 30));
    CHECK(lay.set("R") == range_set(0, 2));
    CHECK(user1_payload_bits(lay) == 3 * 25);
    CHECK(user2_payload_bits(lay) == 20 + 3 * 18);

    // |Fcr2| > |I2| is infeasible.
    auto v2_v1_tiny = make_report(n, {0}, range_set(23, 64));
    auto v2_y2_tiny = make_report(n, {}, {0});
    CHECK_THROWS_AS(build_binning_layout(v1_plain, v1_y1, v2_plain, v2_v1_tiny,
                                         v2_y2_tiny, 4, ChainDirection::backward),
                    rate_infeasible_error);
}

TEST_CASE("binning class assignment is a partition") {
    int n = 64;
    std::mt19937_64 rng(5);
    for (int t = 0; t < 10; ++t) {
        auto rand_set = [&](double frac) {
            std::vector<int> v;
            for (int i = 0; i < n; ++i)
                if (std::uniform_real_distribution<>(0, 1)(rng) < frac)
                    v.push_back(i);
            return v;
        };
        auto v1_plain = make_report(n, rand_set(0.4), {});
        auto v1_y1 = make_report(n, {}, rand_set(0.5));
        auto v2_plain = make_report(n, {}, rand_set(0.3));
        auto v2_v1 = make_report(n, rand_set(0.2), {});
        auto v2_y2 = make_report(n, {}, rand_set(0.9));
        ChainingLayout lay;
        try {
            lay = build_binning_layout(v1_plain, v1_y1, v2_plain, v2_v1, v2_y2,
                                       2, ChainDirection::backward);
        } catch (const rate_infeasible_error&) {
            continue;
        }
        std::vector<int> count(n, 0);
        for (const char* s : {"I2", "Fr2", "Fd2", "Fout2", "Fcr2"})
            for (int i : lay.set(s)) ++count[i];
        for (int i = 0; i < n; ++i) CHECK(count[i] == 1);
        std::vector<int> count1(n, 0);
        for (const char* s : {"I1", "Fr1", "Fd1"})
            for (int i : lay.set(s)) ++count1[i];
        for (int i = 0; i < n; ++i) CHECK(count1[i] == 1);
    }
}

TEST_CASE("marton layout arithmetic") {
    int n = 32;
    auto v_plain = make_report(n, range_set(0, 14), range_set(20, 32));
    auto v_y2 = make_report(n, {}, range_set(0, 12));   // Isup2
    auto v_y1 = make_report(n, {}, range_set(4, 14));   // Iv1
    auto v2_v = make_report(n, range_set(0, 16), range_set(24, 32));
    auto v2_vy2 = make_report(n, {}, range_set(0, 13));
    // U1 space: H(V1|V) = [0,12), L(V1|V,Y1) = [0,9), so I1 = [0,9) and
    // [9,12) splits by H(V1|V,V2) = [9,11) -> Fr1, leaving {11} critical.
    auto v1_v = make_report(n, range_set(0, 12), range_set(20, 32));
    auto v1_vy1 = make_report(n, {}, range_set(0, 9));
    // Positions [12,20) are unresolved given v alone but still random given
    // (v, v2), so they land in the shared-random class.
    std::vector<int> h_vv2 = range_set(9, 11);
    for (int i : range_set(12, 20)) h_vv2.push_back(i);
    auto v1_vv2 = make_report(n, h_vv2, {});

    auto lay = build_marton_layout(v_plain, v_y1, v_y2, v2_v, v2_vy2, v1_v,
                                   v1_vy1, v1_vv2, 3, 0.0);
    CHECK(lay.set("D2") == range_set(0, 4));
    CHECK(lay.set("D1") == range_set(12, 14));
    CHECK(lay.set("Rsup") == range_set(0, 2));
    CHECK(lay.set("B2") == range_set(2, 4));
    CHECK(lay.set("Ibin2") == range_set(0, 13));
    CHECK(lay.set("Fr2") == range_set(13, 24));
    CHECK(lay.set("I1") == range_set(0, 9));
    std::vector<int> fr1 = range_set(9, 11);
    for (int i : range_set(12, 20)) fr1.push_back(i);
    CHECK(lay.set("Fr1") == fr1);
    CHECK(lay.set("Fcr1") == std::vector<int>{11});
    CHECK(lay.set("B1") == range_set(0, 2));
    CHECK(lay.set("Rbin") == std::vector<int>{2});
    // U1 payload: middle blocks lose B1 and Rbin, last block carries all of I1.
    CHECK(user1_payload_bits(lay) == 2 * (9 - 2 - 1) + 9);
    // U2 payload: superposition cloud bits plus the per-block binning bits.
    CHECK(user2_payload_bits(lay) == (10 + (10 + 2) + (8 + 2)) + 2 * 13);

    // Infeasible when I1 cannot host both chained sets.
    auto v1_vy1_tiny = make_report(n, {}, range_set(0, 2));
    auto v1_vv2_none = make_report(n, {}, {});
    CHECK_THROWS_AS(build_marton_layout(v_plain, v_y1, v_y2, v2_v, v2_vy2,
                                        v1_v, v1_vy1_tiny, v1_vv2_none, 3, 0.0),
                    rate_infeasible_error);
}

TEST_CASE("report and layout JSON round-trips") {
    auto z = exact_Z_all(PairwiseJoint::source_only(0.2), 8);
    ConstructionParams params;
    params.n = 8;
    auto rep = build_index_sets(z, params, std::nullopt, "V|Y1");
    auto rep2 = report_from_json(report_to_json(rep));
    CHECK(rep2.n == rep.n);
    CHECK(rep2.label == rep.label);
    CHECK(rep2.z == rep.z);
    CHECK(rep2.high_set == rep.high_set);
    CHECK(rep2.low_set == rep.low_set);

    int n = 32;
    auto lay = build_superposition_layout(
        make_report(n, range_set(0, 14), range_set(20, 32)),
        make_report(n, {}, range_set(4, 14)),
        make_report(n, {}, range_set(0, 12)),
        make_report(n, range_set(0, 10), range_set(24, 32)),
        make_report(n, {}, range_set(0, 10)), 3,
        SuperpositionTarget::full_rate);
    auto lay2 = layout_from_json(layout_to_json(lay));
    CHECK(lay2.scheme == lay.scheme);
    CHECK(lay2.n == lay.n);
    CHECK(lay2.k == lay.k);
    CHECK(lay2.sets == lay.sets);
    CHECK(layout_to_json(lay2) == layout_to_json(lay));
}
