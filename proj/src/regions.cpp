#include "regions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace marton {
namespace {

constexpr double kFeasTol = 1e-9;

// --- small linear algebra over the inequality system --------------------

struct Row2 {
    double a1, a2, b;
};

std::vector<Row2> rows_2d(const std::vector<RegionPolytope::Inequality>& ineqs) {
    std::vector<Row2> rows;
    for (const auto& q : ineqs) {
        if (q.coeff[1] == 0.0 && q.coeff[2] == 0.0) continue;  // R0-only row
        rows.push_back({q.coeff[1], q.coeff[2], q.bound});
    }
    rows.push_back({-1.0, 0.0, 0.0});
    rows.push_back({0.0, -1.0, 0.0});
    return rows;
}

bool feasible_2d(const std::vector<Row2>& rows, double r1, double r2) {
    for (const auto& r : rows)
        if (r.a1 * r1 + r.a2 * r2 > r.b + kFeasTol) return false;
    return true;
}

std::vector<RatePoint> enumerate_vertices_2d(const std::vector<Row2>& rows) {
    std::vector<RatePoint> verts;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = i + 1; j < rows.size(); ++j) {
            double det = rows[i].a1 * rows[j].a2 - rows[i].a2 * rows[j].a1;
            if (std::abs(det) < 1e-12) continue;
            double r1 = (rows[i].b * rows[j].a2 - rows[i].a2 * rows[j].b) / det;
            double r2 = (rows[i].a1 * rows[j].b - rows[i].b * rows[j].a1) / det;
            if (!feasible_2d(rows, r1, r2)) continue;
            bool dup = false;
            for (const auto& v : verts)
                if (std::abs(v.r1 - r1) < 1e-7 && std::abs(v.r2 - r2) < 1e-7) {
                    dup = true;
                    break;
                }
            if (!dup) verts.push_back({0.0, r1, r2});
        }
    }
    return verts;
}

std::vector<RatePoint> enumerate_vertices_3d(
    const std::vector<RegionPolytope::Inequality>& ineqs) {
    std::vector<std::array<double, 4>> rows;  // a0 r0 + a1 r1 + a2 r2 <= b
    for (const auto& q : ineqs)
        rows.push_back({q.coeff[0], q.coeff[1], q.coeff[2], q.bound});
    rows.push_back({-1.0, 0.0, 0.0, 0.0});
    rows.push_back({0.0, -1.0, 0.0, 0.0});
    rows.push_back({0.0, 0.0, -1.0, 0.0});

    auto feasible = [&](double r0, double r1, double r2) {
        for (const auto& r : rows)
            if (r[0] * r0 + r[1] * r1 + r[2] * r2 > r[3] + kFeasTol) return false;
        return true;
    };

    std::vector<RatePoint> verts;
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = i + 1; j < rows.size(); ++j)
            for (std::size_t l = j + 1; l < rows.size(); ++l) {
                const auto &A = rows[i], &B = rows[j], &C = rows[l];
                double det = A[0] * (B[1] * C[2] - B[2] * C[1]) -
                             A[1] * (B[0] * C[2] - B[2] * C[0]) +
                             A[2] * (B[0] * C[1] - B[1] * C[0]);
                if (std::abs(det) < 1e-12) continue;
                double d0 = A[3] * (B[1] * C[2] - B[2] * C[1]) -
                            A[1] * (B[3] * C[2] - B[2] * C[3]) +
                            A[2] * (B[3] * C[1] - B[1] * C[3]);
                double d1 = A[0] * (B[3] * C[2] - B[2] * C[3]) -
                            A[3] * (B[0] * C[2] - B[2] * C[0]) +
                            A[2] * (B[0] * C[3] - B[3] * C[0]);
                double d2 = A[0] * (B[1] * C[3] - B[3] * C[1]) -
                            A[1] * (B[0] * C[3] - B[3] * C[0]) +
                            A[3] * (B[0] * C[1] - B[1] * C[0]);
                double r0 = d0 / det, r1 = d1 / det, r2 = d2 / det;
                if (!feasible(r0, r1, r2)) continue;
                bool dup = false;
                for (const auto& v : verts)
                    if (std::abs(v.r0 - r0) < 1e-7 && std::abs(v.r1 - r1) < 1e-7 &&
                        std::abs(v.r2 - r2) < 1e-7) {
                        dup = true;
                        break;
                    }
                if (!dup) verts.push_back({r0, r1, r2});
            }
    return verts;
}

double cross(const RatePoint& o, const RatePoint& a, const RatePoint& b) {
    return (a.r1 - o.r1) * (b.r2 - o.r2) - (a.r2 - o.r2) * (b.r1 - o.r1);
}

std::vector<RatePoint> convex_hull_2d(std::vector<RatePoint> pts) {
    std::sort(pts.begin(), pts.end(), [](const RatePoint& a, const RatePoint& b) {
        return a.r1 < b.r1 || (a.r1 == b.r1 && a.r2 < b.r2);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const RatePoint& a, const RatePoint& b) {
                              return std::abs(a.r1 - b.r1) < 1e-9 &&
                                     std::abs(a.r2 - b.r2) < 1e-9;
                          }),
              pts.end());
    if (pts.size() < 3) return pts;
    std::vector<RatePoint> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {  // lower hull
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 1e-12) --k;
        hull[k++] = p;
    }
    std::size_t lower = k + 1;
    for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {  // upper hull
        while (k >= lower && cross(hull[k - 2], hull[k - 1], *it) <= 1e-12) --k;
        hull[k++] = *it;
    }
    hull.resize(k - 1);
    return hull;
}

RegionShape classify_2d(const std::vector<RatePoint>& verts) {
    auto hull = convex_hull_2d(verts);
    if (hull.size() < 3) return RegionShape::degenerate;
    if (hull.size() == 3) return RegionShape::triangle;
    if (hull.size() == 5) return RegionShape::pentagon;
    if (hull.size() == 4) {
        for (std::size_t i = 0; i < 4; ++i) {
            const auto& a = hull[i];
            const auto& b = hull[(i + 1) % 4];
            if (std::abs(a.r1 - b.r1) > 1e-9 && std::abs(a.r2 - b.r2) > 1e-9)
                return RegionShape::right_trapezoid;
        }
        return RegionShape::rectangle;
    }
    return RegionShape::degenerate;
}

// --- model plumbing ------------------------------------------------------

JointPmf full_joint(const AuxModel& model, const Channel& ch1,
                    const Channel& ch2) {
    std::array<const Channel*, 2> chans{&ch1, &ch2};
    return model.with_channels(chans);
}

std::vector<std::string> joint_names(const AuxModel& model) {
    std::vector<std::string> names = model.var_names();
    if (model.arity() >= 2) names.push_back("X");
    names.push_back("Y1");
    names.push_back("Y2");
    return names;
}

// Conditional law of `out_name` given `in_name` as a Channel; zero-mass
// input symbols get a uniform row.
Channel conditional_channel(const JointPmf& joint,
                            const std::vector<std::string>& names,
                            const std::string& in_name,
                            const std::string& out_name) {
    const auto& cards = joint.cards();
    const auto& probs = joint.probs();
    int in_idx = -1, out_idx = -1;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == in_name) in_idx = static_cast<int>(i);
        if (names[i] == out_name) out_idx = static_cast<int>(i);
    }
    if (in_idx < 0 || out_idx < 0)
        throw model_error("conditional_channel: unknown variable name");
    int in_card = cards[in_idx], out_card = cards[out_idx];

    std::vector<double> mass(static_cast<std::size_t>(in_card) * out_card, 0.0);
    std::vector<double> in_mass(in_card, 0.0);
    std::vector<int> strides(cards.size());
    int stride = 1;
    for (int i = static_cast<int>(cards.size()) - 1; i >= 0; --i) {
        strides[i] = stride;
        stride *= cards[i];
    }
    for (std::size_t flat = 0; flat < probs.size(); ++flat) {
        double p = probs[flat];
        if (p == 0.0) continue;
        int vi = static_cast<int>(flat) / strides[in_idx] % in_card;
        int vo = static_cast<int>(flat) / strides[out_idx] % out_card;
        mass[static_cast<std::size_t>(vi) * out_card + vo] += p;
        in_mass[vi] += p;
    }
    std::vector<double> pmf(mass.size());
    for (int vi = 0; vi < in_card; ++vi)
        for (int vo = 0; vo < out_card; ++vo) {
            std::size_t at = static_cast<std::size_t>(vi) * out_card + vo;
            pmf[at] = in_mass[vi] > 0.0 ? mass[at] / in_mass[vi] : 1.0 / out_card;
        }
    return Channel(in_card, out_card, std::move(pmf));
}

void finalize_2d(RegionPolytope& poly) {
    poly.dim = 2;
    poly.vertices = enumerate_vertices_2d(rows_2d(poly.inequalities));
    poly.shape = classify_2d(poly.vertices);
}

double need(const InfoBundle& info, const std::string& key) {
    auto it = info.find(key);
    if (it == info.end())
        throw model_error("corner_points: missing quantity " + key);
    return it->second;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

}  // namespace

// --- RegionPolytope -------------------------------------------------------

bool RegionPolytope::contains(const RatePoint& p, double tol) const {
    if (p.r0 < -tol || p.r1 < -tol || p.r2 < -tol) return false;
    for (const auto& q : inequalities)
        if (q.coeff[0] * p.r0 + q.coeff[1] * p.r1 + q.coeff[2] * p.r2 >
            q.bound + tol)
            return false;
    return true;
}

namespace {

// Largest feasible value of coordinate `want` given coordinate `have` fixed
// (R0 = 0); negative if the fixed coordinate is already infeasible.
double max_coord(const std::vector<RegionPolytope::Inequality>& ineqs,
                 int want, int have, double have_value) {
    if (have_value < -kFeasTol) return -1.0;
    double best = std::numeric_limits<double>::infinity();
    bool bounded = false;
    for (const auto& q : ineqs) {
        double slack = q.bound - q.coeff[have] * have_value;
        if (q.coeff[want] > 1e-12) {
            best = std::min(best, slack / q.coeff[want]);
            bounded = true;
        } else if (slack < -kFeasTol) {
            return -1.0;
        }
    }
    if (!bounded || best < -kFeasTol) return -1.0;
    return std::max(best, 0.0);
}

}  // namespace

double RegionPolytope::max_r2_at(double r1) const {
    return max_coord(inequalities, 2, 1, r1);
}

double RegionPolytope::max_r1_at(double r2) const {
    return max_coord(inequalities, 1, 2, r2);
}

// --- mutual-information bundles -------------------------------------------

InfoBundle superposition_info(const AuxModel& model, const Channel& ch1,
                              const Channel& ch2) {
    if (model.arity() != 1)
        throw model_error("superposition_info: expected an arity-1 model");
    JointPmf j = full_joint(model, ch1, ch2);
    InfoBundle info;
    info["I(X;Y1|V)"] = j.mutual_information({"X"}, {"Y1"}, {"V"});
    info["I(V;Y1)"] = j.mutual_information({"V"}, {"Y1"});
    info["I(V;Y2)"] = j.mutual_information({"V"}, {"Y2"});
    info["I(X;Y1)"] = j.mutual_information({"X"}, {"Y1"});
    info["I(X;Y2)"] = j.mutual_information({"X"}, {"Y2"});
    return info;
}

InfoBundle binning_info(const AuxModel& model, const Channel& ch1,
                        const Channel& ch2) {
    if (model.arity() != 2)
        throw model_error("binning_info: expected an arity-2 model");
    JointPmf j = full_joint(model, ch1, ch2);
    InfoBundle info;
    info["I(V1;Y1)"] = j.mutual_information({"V1"}, {"Y1"});
    info["I(V2;Y2)"] = j.mutual_information({"V2"}, {"Y2"});
    info["I(V1;V2)"] = j.mutual_information({"V1"}, {"V2"});
    info["I(X;Y1)"] = j.mutual_information({"X"}, {"Y1"});
    info["I(X;Y2)"] = j.mutual_information({"X"}, {"Y2"});
    return info;
}

InfoBundle marton_info(const AuxModel& model, const Channel& ch1,
                       const Channel& ch2) {
    if (model.arity() != 3)
        throw model_error("marton_info: expected an arity-3 model");
    JointPmf j = full_joint(model, ch1, ch2);
    InfoBundle info;
    info["I(V;Y1)"] = j.mutual_information({"V"}, {"Y1"});
    info["I(V;Y2)"] = j.mutual_information({"V"}, {"Y2"});
    info["I(V,V1;Y1)"] = j.mutual_information({"V", "V1"}, {"Y1"});
    info["I(V,V2;Y2)"] = j.mutual_information({"V", "V2"}, {"Y2"});
    info["I(V1;Y1|V)"] = j.mutual_information({"V1"}, {"Y1"}, {"V"});
    info["I(V2;Y2|V)"] = j.mutual_information({"V2"}, {"Y2"}, {"V"});
    info["I(V1;V2|V)"] = j.mutual_information({"V1"}, {"V2"}, {"V"});
    return info;
}

// --- region builders -------------------------------------------------------

RegionPolytope superposition_region(const AuxModel& model, const Channel& ch1,
                                    const Channel& ch2, RegionVariant variant) {
    InfoBundle info = superposition_info(model, ch1, ch2);
    RegionPolytope poly;
    poly.inequalities.push_back({{0.0, 1.0, 0.0}, info["I(X;Y1|V)"]});
    poly.inequalities.push_back({{0.0, 0.0, 1.0}, info["I(V;Y2)"]});
    if (variant == RegionVariant::info) {
        poly.inequalities.push_back({{0.0, 1.0, 1.0}, info["I(X;Y1)"]});
    } else {
        JointPmf j = full_joint(model, ch1, ch2);
        auto names = joint_names(model);
        Channel y1_v = conditional_channel(j, names, "V", "Y1");
        Channel y2_v = conditional_channel(j, names, "V", "Y2");
        poly.degradedness_ok = check_stochastic_degradation(y1_v, y2_v);
    }
    finalize_2d(poly);
    return poly;
}

RegionPolytope binning_region(const AuxModel& model, const Channel& ch1,
                              const Channel& ch2, RegionVariant variant) {
    InfoBundle info = binning_info(model, ch1, ch2);
    double i1 = info["I(V1;Y1)"], i2 = info["I(V2;Y2)"], i12 = info["I(V1;V2)"];
    RegionPolytope poly;
    poly.inequalities.push_back({{0.0, 1.0, 0.0}, i1});
    if (variant == RegionVariant::info) {
        poly.inequalities.push_back({{0.0, 0.0, 1.0}, i2});
        poly.inequalities.push_back({{0.0, 1.0, 1.0}, i1 + i2 - i12});
    } else {
        poly.inequalities.push_back({{0.0, 0.0, 1.0}, i2 - i12});
        JointPmf j = full_joint(model, ch1, ch2);
        auto names = joint_names(model);
        Channel y2_v2 = conditional_channel(j, names, "V2", "Y2");
        Channel v1_v2 = conditional_channel(j, names, "V2", "V1");
        poly.degradedness_ok = check_stochastic_degradation(y2_v2, v1_v2);
    }
    finalize_2d(poly);
    return poly;
}

RegionPolytope marton_mgp_region(const AuxModel& model, const Channel& ch1,
                                 const Channel& ch2, bool with_common) {
    InfoBundle info = marton_info(model, ch1, ch2);
    double a = info["I(V,V1;Y1)"];
    double b = info["I(V,V2;Y2)"];
    double s1 = a + info["I(V2;Y2|V)"] - info["I(V1;V2|V)"];
    double s2 = b + info["I(V1;Y1|V)"] - info["I(V1;V2|V)"];
    RegionPolytope poly;
    if (!with_common) {
        poly.inequalities.push_back({{0.0, 1.0, 0.0}, a});
        poly.inequalities.push_back({{0.0, 0.0, 1.0}, b});
        poly.inequalities.push_back({{0.0, 1.0, 1.0}, s1});
        poly.inequalities.push_back({{0.0, 1.0, 1.0}, s2});
        finalize_2d(poly);
        return poly;
    }
    double r0cap = std::min(info["I(V;Y1)"], info["I(V;Y2)"]);
    poly.dim = 3;
    poly.inequalities.push_back({{1.0, 0.0, 0.0}, r0cap});
    poly.inequalities.push_back({{1.0, 1.0, 0.0}, a});
    poly.inequalities.push_back({{1.0, 0.0, 1.0}, b});
    poly.inequalities.push_back({{1.0, 1.0, 1.0}, s1});
    poly.inequalities.push_back({{1.0, 1.0, 1.0}, s2});
    poly.vertices = enumerate_vertices_3d(poly.inequalities);
    // Shape describes the private-rate trade-off, i.e. the R0 = 0 slice.
    poly.shape = classify_2d(enumerate_vertices_2d(rows_2d(poly.inequalities)));
    return poly;
}

// --- corner points ----------------------------------------------------------

namespace {

std::pair<RegionShape, std::vector<RatePoint>> superposition_corners(
    const InfoBundle& info) {
    double iv1 = need(info, "I(V;Y1)");
    double iv2 = need(info, "I(V;Y2)");
    double ix1v = need(info, "I(X;Y1|V)");
    double ix1 = need(info, "I(X;Y1)");
    if (iv2 <= iv1)
        return {RegionShape::rectangle, {{0.0, ix1v, iv2}}};
    if (ix1 > iv2)
        return {RegionShape::pentagon,
                {{0.0, ix1 - iv2, iv2}, {0.0, ix1v, iv1}}};
    return {RegionShape::right_trapezoid, {{0.0, ix1v, iv1}, {0.0, 0.0, ix1}}};
}

std::pair<RegionShape, std::vector<RatePoint>> binning_corners(
    const InfoBundle& info) {
    double i1 = need(info, "I(V1;Y1)");
    double i2 = need(info, "I(V2;Y2)");
    double i12 = need(info, "I(V1;V2)");
    double s = i1 + i2 - i12;
    if (s <= 1e-12) return {RegionShape::degenerate, {}};
    if (i12 <= std::min(i1, i2)) {
        if (i12 < 1e-12) return {RegionShape::rectangle, {{0.0, i1, i2}}};
        return {RegionShape::pentagon,
                {{0.0, i1, i2 - i12}, {0.0, i1 - i12, i2}}};
    }
    if (i2 <= i12 && i12 < i1)
        return {RegionShape::right_trapezoid,
                {{0.0, i1 - i12, i2}, {0.0, s, 0.0}}};
    if (i1 <= i12 && i12 < i2)
        return {RegionShape::right_trapezoid,
                {{0.0, i1, i2 - i12}, {0.0, 0.0, s}}};
    return {RegionShape::triangle, {{0.0, s, 0.0}, {0.0, 0.0, s}}};
}

std::pair<RegionShape, std::vector<RatePoint>> marton_corners(
    const InfoBundle& info) {
    double ivy1 = need(info, "I(V;Y1)");
    double ivy2 = need(info, "I(V;Y2)");
    if (ivy1 > ivy2) {
        // The proposition assumes I(V;Y1) <= I(V;Y2); the region itself is
        // symmetric under exchanging the users, so swap, solve, swap back.
        InfoBundle sw;
        sw["I(V;Y1)"] = ivy2;
        sw["I(V;Y2)"] = ivy1;
        sw["I(V,V1;Y1)"] = need(info, "I(V,V2;Y2)");
        sw["I(V,V2;Y2)"] = need(info, "I(V,V1;Y1)");
        sw["I(V1;Y1|V)"] = need(info, "I(V2;Y2|V)");
        sw["I(V2;Y2|V)"] = need(info, "I(V1;Y1|V)");
        sw["I(V1;V2|V)"] = need(info, "I(V1;V2|V)");
        auto [shape, pts] = marton_corners(sw);
        for (auto& p : pts) std::swap(p.r1, p.r2);
        return {shape, pts};
    }
    double a = need(info, "I(V,V1;Y1)");
    double b = need(info, "I(V,V2;Y2)");
    double i12v = need(info, "I(V1;V2|V)");
    double g1 = need(info, "I(V2;Y2|V)") - i12v;
    double g2 = a - i12v - ivy2;  // equals (R1+R2 bound) - I(V,V2;Y2)
    double s1 = a + g1;
    if (s1 <= 1e-12) return {RegionShape::degenerate, {}};
    if (g1 > 0.0 && g2 > 0.0)
        return {RegionShape::pentagon, {{0.0, a, g1}, {0.0, g2, b}}};
    if (g1 > 0.0)
        return {RegionShape::right_trapezoid, {{0.0, a, g1}, {0.0, 0.0, s1}}};
    if (g2 > 0.0)
        return {RegionShape::right_trapezoid, {{0.0, g2, b}, {0.0, s1, 0.0}}};
    return {RegionShape::triangle, {{0.0, s1, 0.0}, {0.0, 0.0, s1}}};
}

}  // namespace

std::pair<RegionShape, std::vector<RatePoint>> corner_points(
    SchemeKind kind, const InfoBundle& info) {
    switch (kind) {
        case SchemeKind::superposition: return superposition_corners(info);
        case SchemeKind::binning: return binning_corners(info);
        default: return marton_corners(info);
    }
}

// --- sweep ------------------------------------------------------------------

std::vector<double> default_sweep_grid() {
    std::vector<double> grid;
    for (int i = 0; i <= 50; ++i) grid.push_back(i * 0.01);
    return grid;
}

namespace {

AuxModel bsc_cloud_model(double alpha) {
    // V uniform, X = V through a BSC(alpha); marginally X is uniform.
    return AuxModel::pair_vx(
        {(1 - alpha) / 2, alpha / 2, alpha / 2, (1 - alpha) / 2});
}

struct Candidate {
    double alpha, r1, r2;
};

std::vector<FrontierPoint> pareto_frontier(
    const std::vector<Candidate>& cands,
    const std::vector<const RegionPolytope*>& regions,
    const std::string& variant) {
    std::vector<FrontierPoint> out;
    for (const auto& c : cands) {
        bool dominated = false;
        for (const auto* r : regions) {
            if (r->max_r2_at(c.r1) > c.r2 + 1e-9 ||
                r->max_r1_at(c.r2) > c.r1 + 1e-9) {
                dominated = true;
                break;
            }
        }
        if (!dominated) out.push_back({variant, c.alpha, c.r1, c.r2});
    }
    std::sort(out.begin(), out.end(), [](const FrontierPoint& a,
                                         const FrontierPoint& b) {
        return a.r1 < b.r1 || (a.r1 == b.r1 && a.r2 > b.r2);
    });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const FrontierPoint& a, const FrontierPoint& b) {
                              return std::abs(a.r1 - b.r1) < 1e-9 &&
                                     std::abs(a.r2 - b.r2) < 1e-9;
                          }),
              out.end());
    return out;
}

std::vector<FrontierPoint> hull_frontier(const std::vector<Candidate>& cands,
                                         const std::string& variant) {
    std::vector<RatePoint> pts;
    pts.reserve(cands.size() + 1);
    for (const auto& c : cands) pts.push_back({0.0, c.r1, c.r2});
    pts.push_back({0.0, 0.0, 0.0});
    auto hull = convex_hull_2d(std::move(pts));
    // Keep the Pareto-nondominated hull vertices (the north-east boundary).
    std::vector<FrontierPoint> out;
    for (const auto& h : hull) {
        bool dominated = false;
        for (const auto& o : hull)
            if (o.r1 >= h.r1 - 1e-12 && o.r2 >= h.r2 - 1e-12 &&
                (o.r1 > h.r1 + 1e-9 || o.r2 > h.r2 + 1e-9)) {
                dominated = true;
                break;
            }
        if (dominated) continue;
        double alpha = -1.0;
        for (const auto& c : cands)
            if (std::abs(c.r1 - h.r1) < 1e-9 && std::abs(c.r2 - h.r2) < 1e-9) {
                alpha = c.alpha;
                break;
            }
        out.push_back({variant, alpha, h.r1, h.r2});
    }
    std::sort(out.begin(), out.end(),
              [](const FrontierPoint& a, const FrontierPoint& b) {
                  return a.r1 < b.r1;
              });
    return out;
}

}  // namespace

SweepResult region_sweep(const Channel& ch1, const Channel& ch2,
                         const std::vector<double>& grid) {
    if (ch1.input_size() != 2 || ch2.input_size() != 2)
        throw model_error("region_sweep: channels must be binary-input");
    if (grid.empty()) throw model_error("region_sweep: empty grid");

    SweepResult sweep;
    sweep.grid = grid;
    {
        InfoBundle caps = superposition_info(bsc_cloud_model(0.5), ch1, ch2);
        sweep.c1 = caps["I(X;Y1)"];
        sweep.c2 = caps["I(X;Y2)"];
    }

    std::vector<RegionPolytope> info_swapped, agg_swapped;
    for (double alpha : grid) {
        AuxModel model = bsc_cloud_model(alpha);
        SweepPoint pt;
        pt.alpha = alpha;
        pt.info = superposition_region(model, ch1, ch2, RegionVariant::info);
        pt.agg = superposition_region(model, ch1, ch2, RegionVariant::agg);
        RegionPolytope agg_sw =
            superposition_region(model, ch2, ch1, RegionVariant::agg);
        pt.swapped_degradedness_ok = agg_sw.degradedness_ok;
        info_swapped.push_back(
            superposition_region(model, ch2, ch1, RegionVariant::info));
        agg_swapped.push_back(std::move(agg_sw));
        sweep.points.push_back(std::move(pt));
    }

    std::vector<Candidate> info_cands, agg_cands, info_hull_cands, agg_hull_cands;
    std::vector<const RegionPolytope*> info_regions, agg_regions;
    for (std::size_t i = 0; i < sweep.points.size(); ++i) {
        const SweepPoint& pt = sweep.points[i];
        info_regions.push_back(&pt.info);
        for (const auto& v : pt.info.vertices) {
            info_cands.push_back({pt.alpha, v.r1, v.r2});
            info_hull_cands.push_back({pt.alpha, v.r1, v.r2});
        }
        for (const auto& v : info_swapped[i].vertices)
            info_hull_cands.push_back({pt.alpha, v.r2, v.r1});
        if (pt.agg.degradedness_ok) {
            agg_regions.push_back(&pt.agg);
            for (const auto& v : pt.agg.vertices) {
                agg_cands.push_back({pt.alpha, v.r1, v.r2});
                agg_hull_cands.push_back({pt.alpha, v.r1, v.r2});
            }
        }
        if (pt.swapped_degradedness_ok)
            for (const auto& v : agg_swapped[i].vertices)
                agg_hull_cands.push_back({pt.alpha, v.r2, v.r1});
    }
    // The time-sharing endpoints are achievable by point-to-point codes
    // regardless of the sweep family.
    for (auto* cands : {&info_hull_cands, &agg_hull_cands}) {
        cands->push_back({-1.0, sweep.c1, 0.0});
        cands->push_back({-1.0, 0.0, sweep.c2});
    }

    sweep.info_frontier = pareto_frontier(info_cands, info_regions, "info");
    sweep.agg_frontier = pareto_frontier(agg_cands, agg_regions, "agg");
    sweep.info_hull = hull_frontier(info_hull_cands, "info-hull");
    sweep.agg_hull = hull_frontier(agg_hull_cands, "agg-hull");
    return sweep;
}

double frontier_value(const std::vector<FrontierPoint>& hull, double r1) {
    if (hull.empty()) return 0.0;
    if (r1 <= hull.front().r1) return hull.front().r2;
    if (r1 >= hull.back().r1) return hull.back().r2;
    for (std::size_t i = 1; i < hull.size(); ++i) {
        if (r1 <= hull[i].r1 + 1e-15) {
            double span = hull[i].r1 - hull[i - 1].r1;
            if (span < 1e-15) return std::max(hull[i - 1].r2, hull[i].r2);
            double t = (r1 - hull[i - 1].r1) / span;
            return hull[i - 1].r2 + t * (hull[i].r2 - hull[i - 1].r2);
        }
    }
    return hull.back().r2;
}

std::string frontier_csv(const SweepResult& sweep, const std::string& ch1_desc,
                         const std::string& ch2_desc) {
    std::ostringstream out;
    out << "# channel1=" << ch1_desc << "\n";
    out << "# channel2=" << ch2_desc << "\n";
    out << "# grid_size=" << sweep.grid.size() << " alpha_min="
        << fmt(sweep.grid.front()) << " alpha_max=" << fmt(sweep.grid.back())
        << "\n";
    out << "# c1=" << fmt(sweep.c1) << " c2=" << fmt(sweep.c2) << "\n";
    out << "variant,alpha,R1,R2\n";
    auto emit = [&](const std::vector<FrontierPoint>& pts) {
        for (const auto& p : pts)
            out << p.variant << "," << fmt(p.alpha) << "," << fmt(p.r1) << ","
                << fmt(p.r2) << "\n";
    };
    emit(sweep.info_frontier);
    emit(sweep.agg_frontier);
    emit(sweep.info_hull);
    emit(sweep.agg_hull);
    out << "time-sharing,-1," << fmt(sweep.c1) << ",0\n";
    out << "time-sharing,-1,0," << fmt(sweep.c2) << "\n";
    return out.str();
}

}  // namespace marton
