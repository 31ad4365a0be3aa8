#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "regions.hpp"

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

// Symmetric noisy channel on a quaternary alphabet.
Channel noisy4(double stay = 0.85) {
    double off = (1.0 - stay) / 3.0;
    std::vector<double> pmf(16, off);
    for (int x = 0; x < 4; ++x) pmf[x * 4 + x] = stay;
    return Channel(4, 4, std::move(pmf));
}

AuxModel random_binning_model(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> sym(0, 3);
    std::vector<int> phi(4);
    for (int& s : phi) s = sym(rng);
    return AuxModel(2, random_pmf(rng, 4), 4, phi);
}

AuxModel random_marton_model(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> sym(0, 3);
    std::vector<int> phi(8);
    for (int& s : phi) s = sym(rng);
    return AuxModel(3, random_pmf(rng, 8), 4, phi);
}

// Arity-3 model whose cloud variable V is constant zero, matching the given
// arity-2 model on (V1, V2).
AuxModel constant_cloud(const AuxModel& binning) {
    std::vector<double> joint(8, 0.0);
    std::vector<int> phi(8);
    for (int i = 0; i < 4; ++i) {
        joint[i] = binning.joint()[i];
        phi[i] = binning.phi(i);
        phi[4 + i] = binning.phi(i);
    }
    return AuxModel(3, joint, binning.input_size(), phi);
}

bool same_vertex_sets(const std::vector<RatePoint>& a,
                      const std::vector<RatePoint>& b, double tol) {
    if (a.size() != b.size()) return false;
    for (const auto& p : a) {
        bool found = false;
        for (const auto& q : b)
            if (std::abs(p.r0 - q.r0) < tol && std::abs(p.r1 - q.r1) < tol &&
                std::abs(p.r2 - q.r2) < tol) {
                found = true;
                break;
            }
        if (!found) return false;
    }
    return true;
}

int tight_count(const RegionPolytope& poly, const RatePoint& p) {
    int count = 0;
    for (const auto& q : poly.inequalities)
        if (std::abs(q.coeff[0] * p.r0 + q.coeff[1] * p.r1 +
                     q.coeff[2] * p.r2 - q.bound) < 1e-9)
            ++count;
    if (std::abs(p.r1) < 1e-9) ++count;
    if (std::abs(p.r2) < 1e-9) ++count;
    if (poly.dim == 3 && std::abs(p.r0) < 1e-9) ++count;
    return count;
}

void check_vertices_feasible(const RegionPolytope& poly) {
    for (const auto& v : poly.vertices) CHECK(poly.contains(v, 1e-9));
}

}  // namespace

TEST_CASE("superposition region: independent cloud gives a segment") {
    AuxModel model = AuxModel::pair_vx({0.25, 0.25, 0.25, 0.25});
    Channel ch1 = Channel::bsc(0.11), ch2 = Channel::bec(0.2);
    RegionPolytope poly =
        superposition_region(model, ch1, ch2, RegionVariant::info);
    check_vertices_feasible(poly);
    CHECK(poly.shape == RegionShape::degenerate);
    double c1 = 1.0 - binary_entropy(0.11);
    double max_r1 = 0.0, max_r2 = 0.0;
    for (const auto& v : poly.vertices) {
        max_r1 = std::max(max_r1, v.r1);
        max_r2 = std::max(max_r2, v.r2);
    }
    CHECK(max_r1 == doctest::Approx(c1).epsilon(1e-9));
    CHECK(max_r2 == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("superposition region: cloud equals input kills the private rate") {
    AuxModel model = AuxModel::pair_vx({0.5, 0.0, 0.0, 0.5});
    Channel ch1 = Channel::bsc(0.11), ch2 = Channel::bec(0.2);
    RegionPolytope poly =
        superposition_region(model, ch1, ch2, RegionVariant::info);
    check_vertices_feasible(poly);
    // R1 <= I(X;Y1|V) = 0 and R2 <= min(I(V;Y2), I(X;Y1)).
    double c1 = 1.0 - binary_entropy(0.11);
    double bound = std::min(0.8, c1);
    double max_r1 = 0.0, max_r2 = 0.0;
    for (const auto& v : poly.vertices) {
        max_r1 = std::max(max_r1, v.r1);
        max_r2 = std::max(max_r2, v.r2);
    }
    CHECK(max_r1 == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(max_r2 == doctest::Approx(bound).epsilon(1e-9));
}

TEST_CASE("superposition variants coincide in the degraded orientation") {
    // BSC(0.11) is a degraded version of BEC(0.2), so the orientation with
    // the erasure channel decoding the satellite satisfies the AGG
    // precondition and the Eq-style sum bound is redundant.
    AuxModel model = AuxModel::pair_vx({0.425, 0.075, 0.075, 0.425});  // alpha = 0.15
    Channel bsc = Channel::bsc(0.11), bec = Channel::bec(0.2);
    RegionPolytope info = superposition_region(model, bec, bsc, RegionVariant::info);
    RegionPolytope agg = superposition_region(model, bec, bsc, RegionVariant::agg);
    CHECK(agg.degradedness_ok);
    CHECK(info.shape == RegionShape::rectangle);
    CHECK(same_vertex_sets(info.vertices, agg.vertices, 1e-6));

    // The opposite orientation cannot satisfy the degradation check: the
    // erasure side carries strictly more cloud information.
    RegionPolytope agg_bad = superposition_region(model, bsc, bec, RegionVariant::agg);
    CHECK_FALSE(agg_bad.degradedness_ok);
}

TEST_CASE("binning region: bounds follow the mutual-information arithmetic") {
    std::mt19937_64 rng(321);
    Channel ch1 = Channel::identity(4), ch2 = noisy4();
    // V1 = V2 with phi(v1, v2) = v1: sum bound is I1 + I2 - H(V).
    {
        AuxModel model(2, {0.35, 0.0, 0.0, 0.65}, 2, {0, 0, 1, 1});
        Channel b1 = Channel::bsc(0.05), b2 = Channel::bsc(0.2);
        RegionPolytope poly = binning_region(model, b1, b2, RegionVariant::info);
        InfoBundle info = binning_info(model, b1, b2);
        double hv = binary_entropy(0.35);
        CHECK(info["I(V1;V2)"] == doctest::Approx(hv).epsilon(1e-12));
        CHECK(poly.inequalities[2].bound ==
              doctest::Approx(info["I(V1;Y1)"] + info["I(V2;Y2)"] - hv));
        check_vertices_feasible(poly);
    }
    // Independent auxiliaries: the sum bound is slack and the region is a
    // rectangle.
    {
        AuxModel model(2, {0.25, 0.25, 0.25, 0.25}, 4, {0, 1, 2, 3});
        RegionPolytope poly =
            binning_region(model, Channel::identity(4), Channel::identity(4),
                           RegionVariant::info);
        CHECK(poly.shape == RegionShape::rectangle);
        InfoBundle info =
            binning_info(model, Channel::identity(4), Channel::identity(4));
        CHECK(info["I(V1;V2)"] == doctest::Approx(0.0).epsilon(1e-12));
        for (const auto& v : poly.vertices) {
            CHECK(v.r1 <= 1.0 + 1e-9);
            CHECK(v.r2 <= 1.0 + 1e-9);
        }
    }
    // Random models: every vertex feasible.
    for (int t = 0; t < 10; ++t) {
        AuxModel model = random_binning_model(rng);
        check_vertices_feasible(binning_region(model, ch1, ch2, RegionVariant::info));
        check_vertices_feasible(binning_region(model, ch1, ch2, RegionVariant::agg));
    }
}

TEST_CASE("binning AGG variant with a revealing channel passes degradation") {
    AuxModel model(2, {0.3, 0.2, 0.25, 0.25}, 4, {0, 1, 2, 3});
    Channel ch1 = noisy4(), ch2 = Channel::identity(4);
    RegionPolytope poly = binning_region(model, ch1, ch2, RegionVariant::agg);
    CHECK(poly.degradedness_ok);
    InfoBundle info = binning_info(model, ch1, ch2);
    CHECK(poly.inequalities[1].bound ==
          doctest::Approx(info["I(V2;Y2)"] - info["I(V1;V2)"]));
    check_vertices_feasible(poly);
}

TEST_CASE("binning region is symmetric under exchanging users and axes") {
    std::mt19937_64 rng(97);
    Channel ch1 = Channel::identity(4), ch2 = noisy4(0.7);
    for (int t = 0; t < 10; ++t) {
        std::vector<double> joint = random_pmf(rng, 4);
        std::uniform_int_distribution<int> sym(0, 3);
        std::vector<int> phi(4);
        for (int& s : phi) s = sym(rng);
        std::vector<double> joint_sw(4);
        std::vector<int> phi_sw(4);
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                joint_sw[a * 2 + b] = joint[b * 2 + a];
                phi_sw[a * 2 + b] = phi[b * 2 + a];
            }
        AuxModel model(2, joint, 4, phi);
        AuxModel swapped(2, joint_sw, 4, phi_sw);
        RegionPolytope poly = binning_region(model, ch1, ch2, RegionVariant::info);
        RegionPolytope poly_sw =
            binning_region(swapped, ch2, ch1, RegionVariant::info);
        std::vector<RatePoint> mirrored;
        for (const auto& v : poly_sw.vertices)
            mirrored.push_back({0.0, v.r2, v.r1});
        CHECK(same_vertex_sets(poly.vertices, mirrored, 1e-9));
    }
}

TEST_CASE("Marton region with constant cloud equals the binning region") {
    std::mt19937_64 rng(555);
    Channel ch1 = noisy4(0.8), ch2 = Channel::identity(4);
    for (int t = 0; t < 10; ++t) {
        AuxModel binning = random_binning_model(rng);
        RegionPolytope b = binning_region(binning, ch1, ch2, RegionVariant::info);
        RegionPolytope m =
            marton_mgp_region(constant_cloud(binning), ch1, ch2, false);
        CHECK(same_vertex_sets(b.vertices, m.vertices, 1e-9));
    }
}

TEST_CASE("MGP polytope sliced at zero common rate equals the Marton region") {
    std::mt19937_64 rng(556);
    Channel ch1 = noisy4(0.9), ch2 = noisy4(0.7);
    for (int t = 0; t < 10; ++t) {
        AuxModel model = random_marton_model(rng);
        RegionPolytope marton = marton_mgp_region(model, ch1, ch2, false);
        RegionPolytope mgp = marton_mgp_region(model, ch1, ch2, true);
        check_vertices_feasible(mgp);
        std::vector<RatePoint> slice;
        for (const auto& v : mgp.vertices)
            if (std::abs(v.r0) < 1e-9) slice.push_back({0.0, v.r1, v.r2});
        CHECK(same_vertex_sets(slice, marton.vertices, 1e-9));
        CHECK(mgp.shape == marton.shape);
    }
}

TEST_CASE("corner points follow the propositions' case analysis") {
    // Rectangle case: the second receiver's cloud information is the smaller.
    {
        InfoBundle info{{"I(V;Y1)", 0.4}, {"I(V;Y2)", 0.3},
                        {"I(X;Y1|V)", 0.5}, {"I(X;Y1)", 0.9}};
        auto [shape, pts] = corner_points(SchemeKind::superposition, info);
        CHECK(shape == RegionShape::rectangle);
        REQUIRE(pts.size() == 1);
        CHECK(pts[0].r1 == doctest::Approx(0.5));
        CHECK(pts[0].r2 == doctest::Approx(0.3));
    }
    // Pentagon case.
    {
        InfoBundle info{{"I(V;Y1)", 0.2}, {"I(V;Y2)", 0.3},
                        {"I(X;Y1|V)", 0.5}, {"I(X;Y1)", 0.7}};
        auto [shape, pts] = corner_points(SchemeKind::superposition, info);
        CHECK(shape == RegionShape::pentagon);
        REQUIRE(pts.size() == 2);
        CHECK(pts[0].r1 == doctest::Approx(0.4));
        CHECK(pts[0].r2 == doctest::Approx(0.3));
        CHECK(pts[1].r1 == doctest::Approx(0.5));
        CHECK(pts[1].r2 == doctest::Approx(0.2));
    }
    // Right trapezoid case.
    {
        InfoBundle info{{"I(V;Y1)", 0.1}, {"I(V;Y2)", 0.6},
                        {"I(X;Y1|V)", 0.3}, {"I(X;Y1)", 0.4}};
        auto [shape, pts] = corner_points(SchemeKind::superposition, info);
        CHECK(shape == RegionShape::right_trapezoid);
        REQUIRE(pts.size() == 2);
        CHECK(pts[1].r1 == doctest::Approx(0.0));
        CHECK(pts[1].r2 == doctest::Approx(0.4));
    }
    // Binning: independence collapses the pentagon to a rectangle corner.
    {
        InfoBundle info{{"I(V1;Y1)", 0.4}, {"I(V2;Y2)", 0.5}, {"I(V1;V2)", 0.0}};
        auto [shape, pts] = corner_points(SchemeKind::binning, info);
        CHECK(shape == RegionShape::rectangle);
        REQUIRE(pts.size() == 1);
        CHECK(pts[0].r1 == doctest::Approx(0.4));
        CHECK(pts[0].r2 == doctest::Approx(0.5));
    }
    // Binning: overwhelming correlation gives a triangle.
    {
        InfoBundle info{{"I(V1;Y1)", 0.4}, {"I(V2;Y2)", 0.5}, {"I(V1;V2)", 0.6}};
        auto [shape, pts] = corner_points(SchemeKind::binning, info);
        CHECK(shape == RegionShape::triangle);
        REQUIRE(pts.size() == 2);
        CHECK(pts[0].r1 == doctest::Approx(0.3));
        CHECK(pts[1].r2 == doctest::Approx(0.3));
    }
    // Missing quantity is an error.
    {
        InfoBundle info{{"I(V1;Y1)", 0.4}};
        CHECK_THROWS_AS(corner_points(SchemeKind::binning, info), model_error);
    }
}

TEST_CASE("corner points lie on the region boundary") {
    std::mt19937_64 rng(777);
    Channel ch1 = Channel::bsc(0.06), ch2 = Channel::bsc(0.18);
    std::uniform_real_distribution<double> au(0.02, 0.48);
    for (int t = 0; t < 8; ++t) {
        double alpha = au(rng);
        AuxModel model = AuxModel::pair_vx(
            {(1 - alpha) / 2, alpha / 2, alpha / 2, (1 - alpha) / 2});
        RegionPolytope poly =
            superposition_region(model, ch1, ch2, RegionVariant::info);
        auto [shape, pts] =
            corner_points(SchemeKind::superposition, superposition_info(model, ch1, ch2));
        (void)shape;
        for (const auto& p : pts) {
            CHECK(poly.contains(p, 1e-9));
            CHECK(tight_count(poly, p) >= 2);
        }
    }
    Channel id4 = Channel::identity(4);
    Channel n4 = noisy4(0.75);
    for (int t = 0; t < 8; ++t) {
        AuxModel model = random_binning_model(rng);
        RegionPolytope poly = binning_region(model, id4, n4, RegionVariant::info);
        auto [shape, pts] =
            corner_points(SchemeKind::binning, binning_info(model, id4, n4));
        (void)shape;
        for (const auto& p : pts) {
            CHECK(poly.contains(p, 1e-9));
            CHECK(tight_count(poly, p) >= 2);
        }
    }
    for (int t = 0; t < 8; ++t) {
        AuxModel model = random_marton_model(rng);
        RegionPolytope poly = marton_mgp_region(model, id4, n4, false);
        auto [shape, pts] =
            corner_points(SchemeKind::marton, marton_info(model, id4, n4));
        (void)shape;
        for (const auto& p : pts) {
            CHECK(poly.contains(p, 1e-9));
            CHECK(tight_count(poly, p) >= 2);
        }
    }
}

TEST_CASE("sweep endpoints: extreme mixing recovers the single-user points") {
    Channel ch1 = Channel::bsc(0.11), ch2 = Channel::bec(0.2);
    SweepResult sweep = region_sweep(ch1, ch2, {0.0, 0.25, 0.5});
    double c1 = 1.0 - binary_entropy(0.11);
    CHECK(sweep.c1 == doctest::Approx(c1).epsilon(1e-9));
    CHECK(sweep.c2 == doctest::Approx(0.8).epsilon(1e-9));
    // alpha = 0.5 decouples V from X: the full private rate is available.
    CHECK(frontier_value(sweep.info_hull, c1 - 1e-9) >= -1e-9);
    CHECK(sweep.info_hull.back().r1 == doctest::Approx(c1).epsilon(1e-9));
    CHECK(sweep.info_hull.back().r2 == doctest::Approx(0.0).epsilon(1e-7));
    // alpha = 0 puts everything on the cloud; with the user swap the hull
    // reaches the second user's capacity.
    CHECK(sweep.info_hull.front().r1 == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(sweep.info_hull.front().r2 == doctest::Approx(0.8).epsilon(1e-9));
}

TEST_CASE("sweep reproduces the coinciding-region comparison") {
    Channel ch1 = Channel::bsc(0.11), ch2 = Channel::bec(0.2);
    SweepResult sweep = region_sweep(ch1, ch2, default_sweep_grid());
    double gap = 0.0, margin = -1.0;
    for (int i = 0; i <= 200; ++i) {
        double r1 = sweep.c1 * i / 200.0;
        double fi = frontier_value(sweep.info_hull, r1);
        double fa = frontier_value(sweep.agg_hull, r1);
        double ts = sweep.c2 * (1.0 - r1 / sweep.c1);
        gap = std::max(gap, std::abs(fi - fa));
        if (i == 100) margin = std::min(fi, fa) - ts;
    }
    CHECK(gap <= 1e-3);
    CHECK(margin > 0.01);
}

TEST_CASE("sweep reproduces the collapsed AGG comparison") {
    Channel ch1 = Channel::bsc(0.11), ch2 = Channel::bec(0.4);
    SweepResult sweep = region_sweep(ch1, ch2, default_sweep_grid());
    CHECK(sweep.c2 == doctest::Approx(0.6).epsilon(1e-9));
    double agg_gap = 0.0;
    int exceed = 0;
    for (int i = 1; i < 200; ++i) {
        double r1 = sweep.c1 * i / 200.0;
        double ts = sweep.c2 * (1.0 - r1 / sweep.c1);
        agg_gap = std::max(agg_gap,
                           std::abs(frontier_value(sweep.agg_hull, r1) - ts));
        if (frontier_value(sweep.info_hull, r1) > ts + 1e-3) ++exceed;
    }
    CHECK(agg_gap <= 1e-3);
    CHECK(exceed >= 10);
}

TEST_CASE("sweep validation and CSV output") {
    Channel ch1 = Channel::bsc(0.11), ch2 = Channel::bec(0.2);
    CHECK_THROWS_AS(region_sweep(ch1, ch2, {}), model_error);
    CHECK_THROWS_AS(region_sweep(Channel::identity(4), ch2, {0.1}), model_error);

    SweepResult sweep = region_sweep(ch1, ch2, {0.0, 0.1, 0.5});
    std::string csv = frontier_csv(sweep, "bsc(0.11)", "bec(0.2)");
    CHECK(csv.find("variant,alpha,R1,R2\n") != std::string::npos);
    CHECK(csv.find("info-hull,") != std::string::npos);
    CHECK(csv.find("agg-hull,") != std::string::npos);
    CHECK(csv.find("time-sharing,") != std::string::npos);
    CHECK(csv == frontier_csv(sweep, "bsc(0.11)", "bec(0.2)"));
}
