// Analytic achievable-rate regions for the two-user broadcast schemes:
// inequality systems, vertex enumeration, corner-point classification and
// the BSC/BEC comparison sweep.
#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "prob.hpp"

namespace marton {

enum class RegionVariant { info, agg };
enum class RegionShape { rectangle, pentagon, right_trapezoid, triangle, degenerate };
enum class SchemeKind { superposition, binning, marton };

struct RatePoint {
    double r0 = 0.0, r1 = 0.0, r2 = 0.0;
};

// Closed polytope over the rate tuple (R0, R1, R2); two-dimensional regions
// fix R0 = 0 and carry zero R0 coefficients.  Rates are in bits.
struct RegionPolytope {
    struct Inequality {
        std::array<double, 3> coeff;  // over (R0, R1, R2)
        double bound;
    };

    int dim = 2;  // 2 => (R1, R2); 3 => (R0, R1, R2)
    std::vector<Inequality> inequalities;
    std::vector<RatePoint> vertices;
    RegionShape shape = RegionShape::degenerate;
    // For AGG variants: whether the scheme's stochastic-degradation
    // precondition holds.  Always true for information-theoretic regions.
    bool degradedness_ok = true;

    bool contains(const RatePoint& p, double tol = 1e-9) const;
    // Largest feasible R2 at the given R1 (R0 = 0); negative if infeasible.
    double max_r2_at(double r1) const;
    // Largest feasible R1 at the given R2 (R0 = 0); negative if infeasible.
    double max_r1_at(double r2) const;
};

// Named mutual informations, e.g. "I(X;Y1|V)", computed exactly from the
// model joint and the channel laws.
using InfoBundle = std::map<std::string, double>;

InfoBundle superposition_info(const AuxModel& model, const Channel& ch1,
                              const Channel& ch2);
InfoBundle binning_info(const AuxModel& model, const Channel& ch1,
                        const Channel& ch2);
InfoBundle marton_info(const AuxModel& model, const Channel& ch1,
                       const Channel& ch2);

RegionPolytope superposition_region(const AuxModel& model, const Channel& ch1,
                                    const Channel& ch2, RegionVariant variant);
RegionPolytope binning_region(const AuxModel& model, const Channel& ch1,
                              const Channel& ch2, RegionVariant variant);
// with_common = false: the four-inequality system over (R1, R2);
// with_common = true: the five-inequality common-message system over
// (R0, R1, R2), with shape classified on the R0 = 0 slice.
RegionPolytope marton_mgp_region(const AuxModel& model, const Channel& ch1,
                                 const Channel& ch2, bool with_common);

// Dominant corner points of the region, classified per the case analysis of
// the equivalent-region propositions.  Throws model_error if the bundle is
// missing a required quantity.
std::pair<RegionShape, std::vector<RatePoint>> corner_points(
    SchemeKind kind, const InfoBundle& info);

// ---------------------------------------------------------------------------
// Parameter sweep over the family p(v, x) = uniform X with V = X through a
// BSC(alpha), comparing the information-theoretic and AGG superposition
// regions against the time-sharing segment.

struct FrontierPoint {
    std::string variant;  // "info", "agg", "info-hull", "agg-hull"
    double alpha;         // generating grid value; -1 for synthesized endpoints
    double r1, r2;
};

struct SweepPoint {
    double alpha;
    RegionPolytope info;
    RegionPolytope agg;
    bool swapped_degradedness_ok;  // AGG validity with the users exchanged
};

struct SweepResult {
    std::vector<double> grid;
    std::vector<SweepPoint> points;
    double c1 = 0.0, c2 = 0.0;  // time-sharing endpoints (C1, 0) and (0, C2)
    // Pareto-maximal vertices of the plain union over the grid (no user swap,
    // no hulling), per variant.
    std::vector<FrontierPoint> info_frontier, agg_frontier;
    // Upper concave hull of the union including the user-swapped regions and
    // the time-sharing endpoints; sorted by increasing R1.
    std::vector<FrontierPoint> info_hull, agg_hull;
};

std::vector<double> default_sweep_grid();  // {0, 0.01, ..., 0.5}

SweepResult region_sweep(const Channel& ch1, const Channel& ch2,
                         const std::vector<double>& grid);

// Piecewise-linear evaluation of a hull frontier at the given R1 (clamped to
// the frontier's R1 range).
double frontier_value(const std::vector<FrontierPoint>& hull, double r1);

// CSV with a '#' metadata header and rows (variant, alpha, R1, R2) covering
// both plain frontiers, both hull frontiers and the time-sharing segment.
std::string frontier_csv(const SweepResult& sweep, const std::string& ch1_desc,
                         const std::string& ch2_desc);

}  // namespace marton
