#pragma once

// Two-pass shape recovery from area moments.  Phase A traces the outer-most
// level curves of lambda_n^{1/2} built from mu*; Phase B repeats the same
// pipeline on mu' = mu_hat - mu*, where mu_hat are the moments of the
// recovered polygons.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "archi/bergman.hpp"
#include "archi/christoffel.hpp"
#include "archi/geometry.hpp"
#include "archi/moments.hpp"

namespace archi {

struct ReconstructionConfig {
    int degree = 60;
    int nx = 256;
    int ny = 256;
    /// Manual frame.  When unset the frame is the bounding box of the zeros
    /// of p_n, widened by `margin` times the zero spread on every side.
    std::optional<Frame> frame;
    double margin = 0.5;
    /// Manual level; overrides level_rule.
    std::optional<double> level;
    /// PerIsland: every outer curve gets its own level, the median of
    ///   lambda_n^{1/2} along the curve where lambda_n / lambda_{n/2} takes its
    ///   disk boundary value.
    /// Calibrated: one level from calibrate_level on the disk of equal area.
    enum class LevelRule { PerIsland, Calibrated };
    LevelRule level_rule = LevelRule::PerIsland;
    Precision precision = Precision::DoubleDouble;
    int threads = 0;
    /// Move traced vertices onto the exact level along their grid edges.
    /// Not applied to the Calibrated rule, whose level already absorbs the
    /// interpolation bias.
    bool refine = true;
    /// Douglas-Peucker at h/2 on every recovered ring before the polygon moments.
    bool decimate = false;
    /// Phase B is declared infeasible below this usable degree.
    int min_degree = 4;
    /// Orthogonalize Phase B in the centroid frame of mu'.
    bool recenter_lakes = true;

    /// Throws RangeError: degree < 4, nx or ny < 32, margin < 0.
    void validate() const;
};

struct PhaseResult {
    bool feasible = false;
    int degree_requested = 0;
    int degree_used = 0;
    std::optional<int> breakdown;
    /// Phase B only: degree cap from the ring-error bound
    std::optional<int> uncertainty_degree;
    double max_residual = 0.0;
    BergmanBasis basis;
    std::vector<Point> zeros;
    Frame frame{};
    bool frame_auto = true;
    /// frame enlargements needed to keep the level curves off the border
    int frame_growths = 0;
    /// lambda_n^{1/2}
    ScalarField field;
    /// smallest level in use
    double level = 0.0;
    std::optional<LevelCalibration> calibration;
    /// (lambda_n / lambda_{n/2})^{1/2} and its boundary value, PerIsland rule only
    std::optional<ScalarField> ratio_field;
    double ratio_level = 0.0;
    ContourSet seeds;
    /// one set per distinct level, ascending
    std::vector<ContourSet> contours;
    /// counterclockwise rings of the outer-most closed level curves
    std::vector<Polygon> boundary;
    /// level of each boundary ring
    std::vector<double> levels;
    int open_contours = 0;
    std::vector<std::string> warnings;
};

/// Phase A on mu*.  Orthogonalization stays in the frame of the moments.
/// Breakdown and open contours are reported in the result, not thrown.
PhaseResult phase_a(const MomentMatrix& moments_star, const ReconstructionConfig& config);

/// Exact polygon moments of the recovered rings.  Throws GeometryError on an
/// empty list.
MomentMatrix polygon_moments_of_ghat(std::span<const Polygon> g_hat, int n, Precision precision,
                                     MomentFrame frame = {});

/// Phase B.  mu' = mu_hat - mu*, then the Phase A pipeline on mu' at the
/// largest clean degree not above config.degree.  `mass_floor` bounds the
/// total variation of mu' coming from the error of the recovered rings; no
/// lake is reported when mu'_00 (z units) does not exceed it.  With rings
/// given, degrees k where mass_floor * max over the rings of |p_k|^2 reaches
/// 1/10 are dropped: there the ring error can carry a tenth of the norm.
PhaseResult phase_b(const MomentMatrix& moments_star, const MomentMatrix& mu_hat, const ReconstructionConfig& config,
                    double mass_floor = 0.0, std::span<const Polygon> g_hat = {});

struct ReconstructionResult {
    PhaseResult a;
    std::optional<PhaseResult> b;
    std::optional<MomentMatrix> mu_hat;
    std::optional<MomentMatrix> mu_prime;
    /// mu_hat was supplied by the caller (moments of the true G) instead of
    /// being computed from the Phase A polygons
    bool oracle_mu_hat = false;
    double mass_floor = 0.0;
    std::vector<std::string> warnings;

    const std::vector<Polygon>& g_hat() const { return a.boundary; }
    std::vector<Polygon> k_hat() const;
};

/// Phase A, the polygon moments, then Phase B.  With `run_b` false only
/// Phase A runs.  A supplied `mu_hat` replaces the polygon moments.
ReconstructionResult reconstruct_full(const MomentMatrix& moments_star, const ReconstructionConfig& config,
                                      bool run_b = true, const std::optional<MomentMatrix>& mu_hat = std::nullopt);

/// The steps after Phase A: polygon moments (or the supplied mu_hat) and Phase B.
ReconstructionResult reconstruct_lakes(const MomentMatrix& moments_star, const ReconstructionConfig& config,
                                       PhaseResult a, const std::optional<MomentMatrix>& mu_hat = std::nullopt);

/// Closed-ring Douglas-Peucker.  Keeps at least three vertices.
std::vector<Point> douglas_peucker(std::span<const Point> ring, double tol);

/// mu_10 / mu_00 and sqrt(2 (mu_11 / mu_00 - |c|^2)) in z units, or nullopt
/// when mu_00 <= 0 or the spread is not positive.
std::optional<MomentFrame> centroid_frame(const MomentMatrix& m);

}  // namespace archi
