#include "construct.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include <json.hpp>

#include "rng.hpp"

namespace marton {

using nlohmann::json;

double ConstructionParams::delta() const {
    return std::exp2(-std::pow(static_cast<double>(n), beta));
}

void ConstructionParams::validate() const {
    if (!is_power_of_two(static_cast<std::size_t>(n)))
        throw model_error("ConstructionParams: n must be a power of two");
    if (beta <= 0.0 || beta >= 0.5)
        throw model_error("ConstructionParams: beta must lie in (0, 0.5)");
    if (mc_samples < 1)
        throw model_error("ConstructionParams: mc_samples must be positive");
}

void IndexSetReport::finalize_masks() {
    high_mask.assign(n, 0);
    low_mask.assign(n, 0);
    for (int i : high_set) high_mask[i] = 1;
    for (int i : low_set) low_mask[i] = 1;
}

namespace {

constexpr double kExactWorkCap = 1.0 * (1 << 28);

}  // namespace

std::vector<double> exact_Z_all(const PairwiseJoint& pairwise, int n) {
    if (n > 8)
        throw model_error("exact_Z: n > 8 refused (combinatorial blowup)");
    if (!is_power_of_two(static_cast<std::size_t>(n)))
        throw model_error("exact_Z: n must be a power of two");
    const int s = pairwise.side_size;
    double work = std::pow(static_cast<double>(s), n) *
                  std::pow(2.0, n) * n;
    if (work > kExactWorkCap)
        throw model_error("exact_Z: enumeration too large for this side alphabet");

    std::vector<double> z(n, 0.0);
    std::vector<int> side(n, 0);
    std::vector<uint8_t> x(n);
    const int xn = 1 << n;
    std::vector<double> a(xn);
    for (;;) {
        // Joint weight of (x, side) accumulated per u = x * G_n, with u^1
        // as the most significant bit of the flat index.
        std::fill(a.begin(), a.end(), 0.0);
        for (int xm = 0; xm < xn; ++xm) {
            double w = 1.0;
            for (int j = 0; j < n; ++j) {
                x[j] = (xm >> j) & 1;
                w *= pairwise.prob(x[j], side[j]);
            }
            if (w == 0.0) continue;
            auto u = polar_transform(x);
            int flat = 0;
            for (int j = 0; j < n; ++j) flat = (flat << 1) | u[j];
            a[flat] += w;
        }
        for (int i = 0; i < n; ++i) {
            const int bs = 1 << (n - i);  // block per prefix of length i
            for (int p = 0; p < (1 << i); ++p) {
                double s0 = 0.0, s1 = 0.0;
                int base = p * bs;
                for (int t = 0; t < bs / 2; ++t) {
                    s0 += a[base + t];
                    s1 += a[base + bs / 2 + t];
                }
                z[i] += 2.0 * std::sqrt(s0 * s1);
            }
        }
        // Advance the side-sequence odometer.
        int j = 0;
        while (j < n && ++side[j] == s) side[j++] = 0;
        if (j == n) break;
    }
    return z;
}

double exact_Z(const PairwiseJoint& pairwise, int n, int i) {
    if (i < 0 || i >= n) throw model_error("exact_Z: index out of range");
    return exact_Z_all(pairwise, n)[i];
}

namespace {

constexpr int kMcChunks = 64;

void mc_chunk(const PairwiseJoint& pairwise, int n, uint64_t chunk_seed,
              int samples, std::vector<double>& sum) {
    const int s = pairwise.side_size;
    std::mt19937_64 rng = make_rng(chunk_seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<uint8_t> x(n);
    std::vector<int> side(n);
    ScEngine eng(pairwise, side);
    sum.assign(n, 0.0);
    for (int t = 0; t < samples; ++t) {
        for (int j = 0; j < n; ++j) {
            double r = unif(rng);
            double acc = 0.0;
            int pick = 2 * s - 1;
            for (int c = 0; c < 2 * s; ++c) {
                acc += pairwise.p[c];
                if (r < acc) { pick = c; break; }
            }
            x[j] = static_cast<uint8_t>(pick / s);
            side[j] = pick % s;
        }
        auto u = polar_transform(x);
        eng.reset(side);
        for (int i = 0; i < n; ++i) {
            auto p = eng.posterior();
            sum[i] += 2.0 * std::sqrt(p[0] * p[1]);
            eng.set_bit(u[i]);
        }
    }
}

}  // namespace

std::vector<double> estimate_Z(const PairwiseJoint& pairwise,
                               const ConstructionParams& params, int threads) {
    params.validate();
    const int n = params.n;
    const int chunks = std::min(kMcChunks, params.mc_samples);
    std::vector<int> chunk_samples(chunks, params.mc_samples / chunks);
    for (int c = 0; c < params.mc_samples % chunks; ++c) ++chunk_samples[c];
    std::vector<std::vector<double>> sums(chunks);

    if (threads < 1) threads = 1;
    threads = std::min(threads, chunks);
    std::atomic<int> next{0};
    auto worker = [&] {
        for (;;) {
            int c = next.fetch_add(1);
            if (c >= chunks) break;
            mc_chunk(pairwise, n,
                     mix_seed(params.seed, kStreamConstruction, c),
                     chunk_samples[c], sums[c]);
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    // Reduce in fixed chunk order so results do not depend on thread count.
    std::vector<double> z(n, 0.0);
    for (int c = 0; c < chunks; ++c)
        for (int i = 0; i < n; ++i) z[i] += sums[c][i];
    for (double& v : z) v /= params.mc_samples;
    return z;
}

IndexSetReport build_index_sets(const std::vector<double>& z,
                                const ConstructionParams& params,
                                std::optional<double> target_rate,
                                const std::string& label) {
    const int n = static_cast<int>(z.size());
    IndexSetReport rep;
    rep.n = n;
    rep.label = label;
    rep.z = z;
    if (params.policy == SelectionPolicy::theoretical_threshold) {
        if (target_rate.has_value())
            throw model_error(
                "build_index_sets: target_rate conflicts with the threshold policy");
        double delta = params.delta();
        rep.high_threshold = 1.0 - delta;
        rep.low_threshold = delta;
        for (int i = 0; i < n; ++i) {
            if (z[i] >= rep.high_threshold) rep.high_set.push_back(i);
            else if (z[i] <= rep.low_threshold) rep.low_set.push_back(i);
        }
    } else {
        if (!target_rate.has_value())
            throw model_error("build_index_sets: rate-targeted policy needs a target");
        if (*target_rate < 0.0 || *target_rate > 1.0 ||
            params.low_fraction < 0.0 || params.low_fraction > 1.0)
            throw model_error("build_index_sets: fractions must lie in [0,1]");
        int hi = static_cast<int>(std::ceil(*target_rate * n));
        int lo = static_cast<int>(std::ceil(params.low_fraction * n));
        if (hi + lo > n)
            throw model_error("build_index_sets: high and low fractions overlap");
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            if (z[a] != z[b]) return z[a] > z[b];
            return a < b;
        });
        rep.high_set.assign(order.begin(), order.begin() + hi);
        rep.low_set.assign(order.end() - lo, order.end());
        std::sort(rep.high_set.begin(), rep.high_set.end());
        std::sort(rep.low_set.begin(), rep.low_set.end());
        rep.high_threshold = hi > 0 ? z[order[hi - 1]] : 1.0;
        rep.low_threshold = lo > 0 ? z[order[n - lo]] : 0.0;
    }
    rep.finalize_masks();
    return rep;
}

const std::vector<int>& ChainingLayout::set(const std::string& name) const {
    auto it = sets.find(name);
    if (it == sets.end())
        throw model_error("ChainingLayout: unknown set " + name);
    return it->second;
}

int ChainingLayout::size(const std::string& name) const {
    return static_cast<int>(set(name).size());
}

namespace {

void check_reports(std::initializer_list<const IndexSetReport*> reports, int k) {
    int n = -1;
    for (const auto* r : reports) {
        if (n < 0) n = r->n;
        if (r->n != n || static_cast<int>(r->high_mask.size()) != n)
            throw model_error("layout: reports disagree on block length");
    }
    if (k < 2) throw model_error("layout: chain length k must be at least 2");
}

std::vector<int> lowest_subset(const std::vector<int>& v, int count) {
    return std::vector<int>(v.begin(), v.begin() + count);
}

std::vector<int> subtract(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> r;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(r));
    return r;
}

}  // namespace

ChainingLayout build_superposition_layout(const IndexSetReport& v_plain,
                                          const IndexSetReport& v_y1,
                                          const IndexSetReport& v_y2,
                                          const IndexSetReport& x_v,
                                          const IndexSetReport& x_vy1,
                                          int k, SuperpositionTarget target) {
    check_reports({&v_plain, &v_y1, &v_y2, &x_v, &x_vy1}, k);
    const int n = v_plain.n;
    ChainingLayout lay;
    lay.scheme = "superposition";
    lay.n = n;
    lay.k = k;
    lay.target = target;

    // Cloud variable (U2) index space: information-capable positions are
    // those decodable by at least one user; the rest are frozen.
    std::vector<int> I2, Iv1, Fr2, Fd2;
    for (int i = 0; i < n; ++i) {
        if (v_plain.in_high(i)) {
            bool d2 = v_y2.in_low(i), d1 = v_y1.in_low(i);
            if (d2) I2.push_back(i);
            if (d1) Iv1.push_back(i);
            if (!d1 && !d2) Fr2.push_back(i);
        } else if (v_plain.in_low(i)) {
            Fd2.push_back(i);
        } else {
            Fr2.push_back(i);
        }
    }
    std::vector<int> D2 = subtract(I2, Iv1);
    std::vector<int> D1 = subtract(Iv1, I2);

    // Satellite variable (U1) index space: plain point-to-point classes.
    std::vector<int> I1, Fr1, Fd1;
    for (int i = 0; i < n; ++i) {
        if (x_v.in_high(i)) (x_vy1.in_low(i) ? I1 : Fr1).push_back(i);
        else if (x_v.in_low(i)) Fd1.push_back(i);
        else Fr1.push_back(i);
    }

    std::vector<int> R2, B2, B1;
    if (target == SuperpositionTarget::full_rate) {
        if (D2.size() < D1.size())
            throw rate_infeasible_error(
                "superposition: |D2| < |D1|; the full-rate corner needs "
                "I(V;Y2) >= I(V;Y1) orientation");
        R2 = lowest_subset(D2, static_cast<int>(D1.size()));
        B2 = subtract(D2, R2);
        if (I1.size() < B2.size())
            throw rate_infeasible_error(
                "superposition: |I1| < |B2|; rate pair infeasible");
        B1 = lowest_subset(I1, static_cast<int>(B2.size()));
    } else {
        // Min-rate corner: roles of I2 and Iv1 swapped in the chaining; the
        // repetition set lives inside D1 and stores the next block's D2 bits.
        if (D1.size() < D2.size())
            throw rate_infeasible_error(
                "superposition: |D1| < |D2|; the min-rate corner needs "
                "I(V;Y1) >= I(V;Y2) orientation");
        R2 = lowest_subset(D1, static_cast<int>(D2.size()));
        // B2 = B1 = empty by construction.
    }

    lay.sets["I2"] = std::move(I2);
    lay.sets["Iv1"] = std::move(Iv1);
    lay.sets["D1"] = std::move(D1);
    lay.sets["D2"] = std::move(D2);
    lay.sets["R2"] = std::move(R2);
    lay.sets["B2"] = std::move(B2);
    lay.sets["Fr2"] = std::move(Fr2);
    lay.sets["Fd2"] = std::move(Fd2);
    lay.sets["I1"] = std::move(I1);
    lay.sets["B1"] = std::move(B1);
    lay.sets["Fr1"] = std::move(Fr1);
    lay.sets["Fd1"] = std::move(Fd1);
    return lay;
}

ChainingLayout build_binning_layout(const IndexSetReport& v1_plain,
                                    const IndexSetReport& v1_y1,
                                    const IndexSetReport& v2_plain,
                                    const IndexSetReport& v2_v1,
                                    const IndexSetReport& v2_y2,
                                    int k, ChainDirection direction) {
    check_reports({&v1_plain, &v1_y1, &v2_plain, &v2_v1, &v2_y2}, k);
    const int n = v1_plain.n;
    ChainingLayout lay;
    lay.scheme = "binning";
    lay.n = n;
    lay.k = k;
    lay.direction = direction;

    std::vector<int> I1, Fr1, Fd1;
    for (int i = 0; i < n; ++i) {
        if (v1_plain.in_high(i)) (v1_y1.in_low(i) ? I1 : Fr1).push_back(i);
        else if (v1_plain.in_low(i)) Fd1.push_back(i);
        else Fr1.push_back(i);
    }

    // The second user's space is a five-way partition; priority order keeps
    // it a partition even when noisy Z estimates overlap the defining sets.
    std::vector<int> I2, Fr2, Fd2, Fout2, Fcr2;
    for (int i = 0; i < n; ++i) {
        if (v2_v1.in_high(i)) (v2_y2.in_low(i) ? I2 : Fr2).push_back(i);
        else if (v2_plain.in_low(i)) Fd2.push_back(i);
        else if (v2_y2.in_low(i)) Fout2.push_back(i);
        else Fcr2.push_back(i);
    }
    if (Fcr2.size() > I2.size())
        throw rate_infeasible_error(
            "binning: |Fcr2| > |I2|; rate pair infeasible");
    std::vector<int> R = lowest_subset(I2, static_cast<int>(Fcr2.size()));

    lay.sets["I1"] = std::move(I1);
    lay.sets["Fr1"] = std::move(Fr1);
    lay.sets["Fd1"] = std::move(Fd1);
    lay.sets["I2"] = std::move(I2);
    lay.sets["R"] = std::move(R);
    lay.sets["Fr2"] = std::move(Fr2);
    lay.sets["Fd2"] = std::move(Fd2);
    lay.sets["Fout2"] = std::move(Fout2);
    lay.sets["Fcr2"] = std::move(Fcr2);
    return lay;
}

ChainingLayout build_marton_layout(const IndexSetReport& v_plain,
                                   const IndexSetReport& v_y1,
                                   const IndexSetReport& v_y2,
                                   const IndexSetReport& v2_v,
                                   const IndexSetReport& v2_vy2,
                                   const IndexSetReport& v1_v,
                                   const IndexSetReport& v1_vy1,
                                   const IndexSetReport& v1_vv2,
                                   int k, double common_rate_fraction) {
    check_reports({&v_plain, &v_y1, &v_y2, &v2_v, &v2_vy2, &v1_v, &v1_vy1,
                   &v1_vv2}, k);
    if (common_rate_fraction < 0.0 || common_rate_fraction > 1.0)
        throw model_error("marton: common_rate_fraction must lie in [0,1]");
    const int n = v_plain.n;
    ChainingLayout lay;
    lay.scheme = "marton";
    lay.n = n;
    lay.k = k;
    lay.common_rate_fraction = common_rate_fraction;

    // U0 space: identical treatment to the superposition cloud variable.
    std::vector<int> Isup2, Iv1, Fr0, Fd0;
    for (int i = 0; i < n; ++i) {
        if (v_plain.in_high(i)) {
            bool d2 = v_y2.in_low(i), d1 = v_y1.in_low(i);
            if (d2) Isup2.push_back(i);
            if (d1) Iv1.push_back(i);
            if (!d1 && !d2) Fr0.push_back(i);
        } else if (v_plain.in_low(i)) {
            Fd0.push_back(i);
        } else {
            Fr0.push_back(i);
        }
    }
    std::vector<int> D2 = subtract(Isup2, Iv1);
    std::vector<int> D1 = subtract(Iv1, Isup2);
    if (D2.size() < D1.size())
        throw rate_infeasible_error(
            "marton: |D2| < |D1|; caller must orient users so that "
            "I(V;Y1) <= I(V;Y2)");
    std::vector<int> Rsup = lowest_subset(D2, static_cast<int>(D1.size()));
    std::vector<int> B2 = subtract(D2, Rsup);

    // U2 space: point-to-point classes with the decoded u0 as side info.
    std::vector<int> Ibin2, Fr2, Fd2;
    for (int i = 0; i < n; ++i) {
        if (v2_v.in_high(i)) (v2_vy2.in_low(i) ? Ibin2 : Fr2).push_back(i);
        else if (v2_v.in_low(i)) Fd2.push_back(i);
        else Fr2.push_back(i);
    }

    // U1 space: binning-style classes; positions random given (v, v2) go to
    // the shared-random class, the rest of the unresolved middle is critical.
    std::vector<int> I1, Fr1, Fd1, Fout1, Fcr1;
    for (int i = 0; i < n; ++i) {
        if (v1_v.in_high(i)) {
            if (v1_vy1.in_low(i)) I1.push_back(i);
            else (v1_vv2.in_high(i) ? Fr1 : Fcr1).push_back(i);
        } else if (v1_v.in_low(i)) {
            Fd1.push_back(i);
        } else if (v1_vy1.in_low(i)) {
            Fout1.push_back(i);
        } else if (v1_vv2.in_high(i)) {
            Fr1.push_back(i);
        } else {
            Fcr1.push_back(i);
        }
    }
    if (I1.size() < B2.size() + Fcr1.size())
        throw rate_infeasible_error(
            "marton: |I1| < |B1| + |Rbin|; rate pair infeasible");
    std::vector<int> B1 = lowest_subset(I1, static_cast<int>(B2.size()));
    std::vector<int> Rbin =
        lowest_subset(subtract(I1, B1), static_cast<int>(Fcr1.size()));

    lay.sets["Isup2"] = std::move(Isup2);
    lay.sets["Iv1"] = std::move(Iv1);
    lay.sets["D1"] = std::move(D1);
    lay.sets["D2"] = std::move(D2);
    lay.sets["Rsup"] = std::move(Rsup);
    lay.sets["B2"] = std::move(B2);
    lay.sets["Fr0"] = std::move(Fr0);
    lay.sets["Fd0"] = std::move(Fd0);
    lay.sets["I1"] = std::move(I1);
    lay.sets["B1"] = std::move(B1);
    lay.sets["Rbin"] = std::move(Rbin);
    lay.sets["Fr1"] = std::move(Fr1);
    lay.sets["Fd1"] = std::move(Fd1);
    lay.sets["Fout1"] = std::move(Fout1);
    lay.sets["Fcr1"] = std::move(Fcr1);
    lay.sets["Ibin2"] = std::move(Ibin2);
    lay.sets["Fr2"] = std::move(Fr2);
    lay.sets["Fd2"] = std::move(Fd2);
    return lay;
}

namespace {

int intersection_size(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> r;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                          std::back_inserter(r));
    return static_cast<int>(r.size());
}

}  // namespace

int user1_payload_bits(const ChainingLayout& lay) {
    const int k = lay.k;
    if (lay.scheme == "superposition") {
        if (lay.target == SuperpositionTarget::min_rate)
            return k * lay.size("I1");
        return (k - 1) * (lay.size("I1") - lay.size("B1")) + lay.size("I1");
    }
    if (lay.scheme == "binning") return (k - 1) * lay.size("I1");
    if (lay.scheme == "marton")
        return (k - 1) * (lay.size("I1") - lay.size("B1") - lay.size("Rbin")) +
               lay.size("I1");
    throw model_error("user1_payload_bits: unknown scheme " + lay.scheme);
}

int user2_payload_bits(const ChainingLayout& lay) {
    const int k = lay.k;
    if (lay.scheme == "superposition") {
        int c = intersection_size(lay.set("Iv1"), lay.set("I2"));
        if (lay.target == SuperpositionTarget::min_rate)
            return k * c + (k - 1) * lay.size("D2");
        return lay.size("Iv1") + (k - 2) * (lay.size("Iv1") + lay.size("B2")) +
               c + lay.size("B2");
    }
    if (lay.scheme == "binning")
        return lay.size("I2") + (k - 1) * (lay.size("I2") - lay.size("R"));
    if (lay.scheme == "marton") {
        int c = intersection_size(lay.set("Iv1"), lay.set("Isup2"));
        int u0 = lay.size("Iv1") + (k - 2) * (lay.size("Iv1") + lay.size("B2")) +
                 c + lay.size("B2");
        return u0 + (k - 1) * lay.size("Ibin2");
    }
    throw model_error("user2_payload_bits: unknown scheme " + lay.scheme);
}

std::string report_to_json(const IndexSetReport& rep) {
    json j;
    j["n"] = rep.n;
    j["label"] = rep.label;
    j["z_values"] = rep.z;
    j["high_set"] = rep.high_set;
    j["low_set"] = rep.low_set;
    j["high_threshold"] = rep.high_threshold;
    j["low_threshold"] = rep.low_threshold;
    return j.dump(2);
}

IndexSetReport report_from_json(const std::string& text) {
    json j = json::parse(text);
    IndexSetReport rep;
    rep.n = j.at("n").get<int>();
    rep.label = j.at("label").get<std::string>();
    rep.z = j.at("z_values").get<std::vector<double>>();
    rep.high_set = j.at("high_set").get<std::vector<int>>();
    rep.low_set = j.at("low_set").get<std::vector<int>>();
    rep.high_threshold = j.at("high_threshold").get<double>();
    rep.low_threshold = j.at("low_threshold").get<double>();
    rep.finalize_masks();
    return rep;
}

std::string layout_to_json(const ChainingLayout& lay) {
    json j;
    j["scheme"] = lay.scheme;
    j["n"] = lay.n;
    j["k"] = lay.k;
    j["target"] =
        lay.target == SuperpositionTarget::full_rate ? "full" : "min-rate";
    j["direction"] =
        lay.direction == ChainDirection::backward ? "backward" : "forward";
    j["common_rate_fraction"] = lay.common_rate_fraction;
    j["sets"] = lay.sets;
    return j.dump(2);
}

ChainingLayout layout_from_json(const std::string& text) {
    json j = json::parse(text);
    ChainingLayout lay;
    lay.scheme = j.at("scheme").get<std::string>();
    lay.n = j.at("n").get<int>();
    lay.k = j.at("k").get<int>();
    lay.target = j.at("target").get<std::string>() == "full"
                     ? SuperpositionTarget::full_rate
                     : SuperpositionTarget::min_rate;
    lay.direction = j.at("direction").get<std::string>() == "backward"
                        ? ChainDirection::backward
                        : ChainDirection::forward;
    lay.common_rate_fraction = j.at("common_rate_fraction").get<double>();
    lay.sets = j.at("sets").get<std::map<std::string, std::vector<int>>>();
    return lay;
}

}  // namespace marton
