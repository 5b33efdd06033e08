#pragma once

#include "cfdual/chart.hpp"
#include "cfdual/check.hpp"
#include "cfdual/jet_linalg.hpp"
#include "cfdual/lorentz.hpp"

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cfdual {

/// Pair of chart maps x into Q^{n+1}_+ and y into Q^{n+1}_- on a common box.
struct FrontalPair {
    std::string name;
    ChartMap x, y;

    FrontalPair(std::string name, ChartMap x, ChartMap y);

    std::size_t dim() const noexcept { return x.dim(); }
    const Box& box() const noexcept { return x.box(); }
};

/// (-y, -x): the same frontal bundle with the roles of x and y exchanged.
FrontalPair exchange_roles(const FrontalPair& p);

struct PairResiduals {
    double xx = 0, yy = 0, xy = 0, dx_y = 0, dy_x = 0;

    double max() const noexcept;
};

PairResiduals pair_residuals(const FrontalPair& pair, std::span<const double> p);

struct FormTriple {
    Point point;
    Eigen::MatrixXd first, second, third;
    double asymmetry = 0.0;  // max |⟨∂_i x, ∂_j y⟩ - ⟨∂_j x, ∂_i y⟩|
};

/// I = ⟨dx,dx⟩, II = -⟨dx,dy⟩ (symmetrized), III = ⟨dy,dy⟩. Requires pair
/// residuals <= 1e-6.
FormTriple fundamental_forms(const FrontalPair& pair, std::span<const double> p);

struct FormJets {
    JetMatrix first, second, third;
};

/// The forms as jets, one order below `order`.
FormJets form_jets(const FrontalPair& pair, std::span<const double> p, int order);

/// max over i<j and frame indices a, b of |⟨R^D(∂_i,∂_j)e_a, e_b⟩ - RHS| for
/// the Gauss equation of a frontal bundle in the lightcone, D being the flat
/// connection projected to {x,y}^⊥ and e an orthonormal frame of it.
/// Throws DegenerateMetricError when I is degenerate at p.
double gauss_equation_residual(const FrontalPair& pair, std::span<const double> p);

struct FrontTest {
    bool front = false;
    int rank = 0;     // stacked (dx; dy)
    int rank_dx = 0;
    int rank_dy = 0;
};

FrontTest front_test(const FrontalPair& pair, std::span<const double> p, double tol = kRankTolerance);

struct SpacelikeTest {
    bool spacelike = false;
    int gram_rank = 0;       // rank of I
    int immersion_rank = 0;  // rank of dx
    double min_eigenvalue = 0.0;  // of I
};

/// An immersion whose induced form is degenerate (immersion rank > Gram rank)
/// or a form with a negative eigenvalue is not spacelike.
SpacelikeTest spacelike_test(const FrontalPair& pair, std::span<const double> p, double tol = kRankTolerance);

/// Signed fold indicator min_i (1 - κ_i), κ_i the principal curvatures of
/// f = (x - y)/√2 in H^{n+1} with respect to ν = (x + y)/√2. Where it
/// vanishes, dx = (df + dν)/√2 drops rank. Requires f to be an immersion.
double fold_indicator(const FrontalPair& pair, std::span<const double> p);

/// Bisects fold_indicator along the segment a-b; nullopt without a sign change.
std::optional<Point> locate_fold(const FrontalPair& pair, std::span<const double> a, std::span<const double> b,
                                 int iterations = 60);

struct GcfTolerances {
    double forms = 1e-6;        // -II vs Schouten(I), III vs dual of I
    double lemma = 1e-6;        // Ricci and scalar relations
    double gauss = 1e-6;
    double izumiya = 1e-7;      // n = 2: K + Trace_I(II)
    double min_pass_fraction = 0.95;
    double parabolic = 1e-10;
};

/// Intrinsic data read off a frontal pair and its cross-checks.
struct GcfRecord {
    std::size_t samples = 0;
    std::size_t regular = 0;  // I nondegenerate
    std::size_t parabolic = 0;
    std::vector<Point> singular_points;
    std::vector<Point> parabolic_points;
    double regular_fraction = 0.0;

    std::size_t forms_passed = 0;     // regular samples passing both form checks
    double forms_pass_fraction = 0.0;
    ResidualCheck schouten{"schouten_equals_minus_II"};
    ResidualCheck dual{"III_equals_dual_of_I"};
    ResidualCheck ricci{"ricci_relation"};
    ResidualCheck scalar{"scalar_relation"};
    ResidualCheck izumiya{"gaussian_curvature_relation"};
    ResidualCheck gauss{"gauss_equation"};
    /// Samples where "dG+ and dG- both have full rank" disagrees with "not parabolic".
    std::size_t gauss_map_mismatches = 0;
    std::vector<Point> gauss_map_mismatch_points;

    bool passed(const GcfTolerances& tol = {}) const;
};

/// n >= 3: Schouten, dual metric, Ricci and scalar relations; n = 2: K = -Trace_I(II).
/// Throws PreconditionError when no sample is regular.
GcfRecord gcf_from_frontal(const FrontalPair& pair, std::span<const Point> samples, const GcfTolerances& tol = {});

} // namespace cfdual
