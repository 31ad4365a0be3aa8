#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "prob.hpp"

using namespace marton;

namespace {

std::vector<double> random_pmf(std::mt19937_64& rng, int size) {
    std::uniform_real_distribution<double> u(0.01, 1.0);
    std::vector<double> p(size);
    double sum = 0.0;
    for (double& v : p) { v = u(rng); sum += v; }
    for (double& v : p) v /= sum;
    return p;
}

Channel random_channel(std::mt19937_64& rng, int in, int out) {
    std::vector<double> pmf;
    for (int x = 0; x < in; ++x) {
        auto row = random_pmf(rng, out);
        pmf.insert(pmf.end(), row.begin(), row.end());
    }
    return Channel(in, out, std::move(pmf));
}

// q = p followed by a random stochastic matrix.
Channel degrade(std::mt19937_64& rng, const Channel& p, int out) {
    std::vector<std::vector<double>> m(p.output_size());
    for (auto& row : m) row = random_pmf(rng, out);
    std::vector<double> pmf(p.input_size() * out, 0.0);
    for (int x = 0; x < p.input_size(); ++x)
        for (int y = 0; y < p.output_size(); ++y)
            for (int y2 = 0; y2 < out; ++y2)
                pmf[x * out + y2] += p.prob(y, x) * m[y][y2];
    return Channel(p.input_size(), out, std::move(pmf));
}

double info_xy(const Channel& ch, const std::vector<double>& px) {
    std::vector<double> joint(px.size() * ch.output_size());
    for (int x = 0; x < static_cast<int>(px.size()); ++x)
        for (int y = 0; y < ch.output_size(); ++y)
            joint[x * ch.output_size() + y] = px[x] * ch.prob(y, x);
    JointPmf j({"X", "Y"}, {static_cast<int>(px.size()), ch.output_size()},
               std::move(joint));
    return j.mutual_information({"X"}, {"Y"});
}

}  // namespace

TEST_CASE("binary entropy") {
    CHECK(binary_entropy(0.5) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(1.0) == 0.0);
    CHECK(binary_entropy(0.11) == doctest::Approx(0.49993).epsilon(2e-4));
    CHECK_THROWS_AS(binary_entropy(-0.1), std::domain_error);
    CHECK_THROWS_AS(binary_entropy(1.1), std::domain_error);
}

TEST_CASE("mutual information through standard channels") {
    std::vector<double> uniform{0.5, 0.5};
    CHECK(info_xy(Channel::bec(0.2), uniform) == doctest::Approx(0.8).epsilon(1e-10));
    CHECK(info_xy(Channel::bsc(0.11), uniform) ==
          doctest::Approx(0.50007).epsilon(2e-4));
    CHECK(info_xy(Channel::bsc(0.5), uniform) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("independence gives zero information") {
    JointPmf j({"X", "Y"}, {2, 2}, {0.25, 0.25, 0.25, 0.25});
    CHECK(j.mutual_information({"X"}, {"Y"}) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("unknown variable rejected") {
    JointPmf j({"X", "Y"}, {2, 2}, {0.25, 0.25, 0.25, 0.25});
    CHECK_THROWS_AS(j.mutual_information({"X"}, {"Z"}), model_error);
}

TEST_CASE("unnormalized joint rejected") {
    CHECK_THROWS_AS(JointPmf({"X"}, {2}, {0.7, 0.7}), model_error);
}

TEST_CASE("chain rule on random joints") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        JointPmf j({"V", "X", "Y"}, {2, 2, 3}, random_pmf(rng, 12));
        double lhs = j.mutual_information({"V", "X"}, {"Y"});
        double rhs = j.mutual_information({"V"}, {"Y"}) +
                     j.mutual_information({"X"}, {"Y"}, {"V"});
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
}

TEST_CASE("effective channel: perfectly correlated pair") {
    // V1 = V2 uniform; observed V2, side V1, no channel.
    AuxModel m(2, {0.5, 0.0, 0.0, 0.5}, 2, {0, 0, 1, 1});
    std::vector<int> cond{0};
    PairwiseJoint pj = effective_channel(m, 1, cond, nullptr);
    CHECK(pj.prob(0, 0) == doctest::Approx(0.5));
    CHECK(pj.prob(1, 1) == doctest::Approx(0.5));
    CHECK(pj.prob(0, 1) == doctest::Approx(0.0));
    CHECK(pj.prob(1, 0) == doctest::Approx(0.0));
}

TEST_CASE("effective channel: independent uniform pair") {
    AuxModel m(2, {0.25, 0.25, 0.25, 0.25}, 2, {0, 0, 1, 1});
    std::vector<int> cond{0};
    PairwiseJoint pj = effective_channel(m, 1, cond, nullptr);
    for (int t = 0; t < 2; ++t)
        for (int s = 0; s < 2; ++s)
            CHECK(pj.prob(t, s) == doctest::Approx(0.25));
}

TEST_CASE("effective channel: BSC cascade") {
    // V uniform, X = V through BSC(0.1); observe V with side Y = X through
    // BSC(0.11); effective crossover 0.1*0.89 + 0.9*0.11 = 0.188.
    std::vector<double> joint{0.5 * 0.9, 0.5 * 0.1, 0.5 * 0.1, 0.5 * 0.9};
    AuxModel m = AuxModel::pair_vx(joint);
    Channel ch = Channel::bsc(0.11);
    PairwiseJoint pj = effective_channel(m, 0, {}, &ch);
    CHECK(pj.side_size == 2);
    CHECK(pj.prob(0, 0) == doctest::Approx(0.5 * 0.812).epsilon(1e-12));
    CHECK(pj.prob(0, 1) == doctest::Approx(0.5 * 0.188).epsilon(1e-12));
    CHECK(pj.prob(1, 0) == doctest::Approx(0.5 * 0.188).epsilon(1e-12));
    CHECK(pj.prob(1, 1) == doctest::Approx(0.5 * 0.812).epsilon(1e-12));
}

TEST_CASE("data processing inequality via effective channels") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        AuxModel m = AuxModel::pair_vx(random_pmf(rng, 4));
        Channel ch = random_channel(rng, 2, 3);
        const Channel* chp = &ch;
        JointPmf j = m.with_channels(std::span<const Channel* const>(&chp, 1));
        CHECK(j.mutual_information({"V"}, {"Y1"}) <=
              j.mutual_information({"X"}, {"Y1"}) + 1e-10);
    }
}

TEST_CASE("degradation: identical channels") {
    Channel p = Channel::bsc(0.11);
    CHECK(check_stochastic_degradation(p, p));
}

TEST_CASE("degradation: BEC vs BSC") {
    CHECK(check_stochastic_degradation(Channel::bec(0.2), Channel::bsc(0.11)));
    CHECK_FALSE(check_stochastic_degradation(Channel::bec(0.4), Channel::bsc(0.11)));
    // Boundary epsilon = 2p resolves as degraded.
    CHECK(check_stochastic_degradation(Channel::bec(0.22), Channel::bsc(0.11)));
}

TEST_CASE("degradation implies information ordering") {
    std::mt19937_64 rng(99);
    Channel p = random_channel(rng, 2, 3);
    Channel q = degrade(rng, p, 3);
    REQUIRE(check_stochastic_degradation(p, q));
    for (int trial = 0; trial < 100; ++trial) {
        auto px = random_pmf(rng, 2);
        CHECK(info_xy(q, px) <= info_xy(p, px) + 1e-10);
    }
}

TEST_CASE("degradation reflexive and transitive") {
    std::mt19937_64 rng(123);
    for (int trial = 0; trial < 10; ++trial) {
        Channel p = random_channel(rng, 2, 3);
        Channel q = degrade(rng, p, 3);
        Channel r = degrade(rng, q, 2);
        CHECK(check_stochastic_degradation(p, p));
        CHECK(check_stochastic_degradation(q, q));
        CHECK(check_stochastic_degradation(p, q));
        CHECK(check_stochastic_degradation(q, r));
        CHECK(check_stochastic_degradation(p, r));
    }
}
