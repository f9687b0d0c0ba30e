#include "archi/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "archi/errors.hpp"

namespace archi {

void ReconstructionConfig::validate() const {
    if (degree < 4) throw RangeError("reconstruction needs degree >= 4");
    if (nx < 32 || ny < 32) throw RangeError("grid resolution must be at least 32 in each direction");
    if (!(margin >= 0.0)) throw RangeError("frame margin must be non-negative");
    if (min_degree < 1) throw RangeError("minimum Phase B degree must be positive");
    if (level && !(*level > 0.0)) throw RangeError("manual level must be positive");
    if (frame) {
        Frame f = *frame;
        f.nx = nx;
        f.ny = ny;
        f.validate();
    }
}

namespace {

double mass_z(const MomentMatrix& m) { return m.at(0, 0).real() * m.frame().scale * m.frame().scale; }

std::string str(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

// Perpendicular distance of p from the chord ab.
double chord_distance(Point p, Point a, Point b) { return segment_distance(p, a, b); }

void dp_range(std::span<const Point> pts, std::size_t i, std::size_t j, double tol, std::vector<char>& keep) {
    if (j <= i + 1) return;
    double best = -1.0;
    std::size_t at = i;
    for (std::size_t k = i + 1; k < j; ++k) {
        const double d = chord_distance(pts[k], pts[i], pts[j % pts.size()]);
        if (d > best) {
            best = d;
            at = k;
        }
    }
    if (best <= tol) return;
    keep[at] = 1;
    dp_range(pts, i, at, tol, keep);
    dp_range(pts, at, j, tol, keep);
}

double perimeter(const Polygon& p) {
    const auto& v = p.vertices();
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += std::abs(v[(i + 1) % v.size()] - v[i]);
    return s;
}

// Ring of a closed level curve.  A ring that is not simple is decimated
// once at h/2 before giving up on it.
bool add_ring(PhaseResult& r, const Polyline& line, double level, bool decimate) {
    const double h = r.field.spacing();
    std::vector<Point> ring = line.points;
    if (decimate) ring = douglas_peucker(ring, 0.5 * h);
    try {
        r.boundary.emplace_back(ring);
        r.levels.push_back(level);
        return true;
    } catch (const GeometryError&) {
    }
    if (!decimate) {
        try {
            r.boundary.emplace_back(douglas_peucker(ring, 0.5 * h));
            r.levels.push_back(level);
            r.warnings.push_back("a level curve self-intersected and was decimated at h/2");
            return true;
        } catch (const GeometryError&) {
        }
    }
    r.warnings.push_back("dropped a level curve with " + std::to_string(ring.size()) +
                         " vertices that is not a simple polygon");
    return false;
}

Frame grow(const Frame& f, double factor) {
    const double cx = 0.5 * (f.xmin + f.xmax), cy = 0.5 * (f.ymin + f.ymax);
    const double hx = 0.5 * factor * (f.xmax - f.xmin), hy = 0.5 * factor * (f.ymax - f.ymin);
    return Frame{cx - hx, cx + hx, cy - hy, cy + hy, f.nx, f.ny};
}

// Moves each vertex of a traced curve to the exact zero of g on its lattice
// edge, by regula falsi.
template <class G>
Polyline refine_curve(const Polyline& line, const G& g, const Frame& f) {
    Polyline out = line;
    for (Point& p : out.points) {
        const double fx = (p.real() - f.xmin) / f.hx() - 0.5, fy = (p.imag() - f.ymin) / f.hy() - 0.5;
        const bool horizontal = std::abs(fy - std::round(fy)) <= std::abs(fx - std::round(fx));
        Point a, b;
        if (horizontal) {
            const int ix = static_cast<int>(std::floor(fx)), iy = static_cast<int>(std::lround(fy));
            a = f.cell_center(ix, iy);
            b = f.cell_center(ix + 1, iy);
        } else {
            const int ix = static_cast<int>(std::lround(fx)), iy = static_cast<int>(std::floor(fy));
            a = f.cell_center(ix, iy);
            b = f.cell_center(ix, iy + 1);
        }
        double ta = 0.0, tb = 1.0, ga = g(a), gb = g(b);
        if (!(ga * gb < 0.0) || !std::isfinite(ga) || !std::isfinite(gb)) continue;
        int side = 0;
        double t = 0.5;
        for (int it = 0; it < 40 && tb - ta > 1e-12; ++it) {
            t = (ta * gb - tb * ga) / (gb - ga);
            const double gt = g(a + t * (b - a));
            if (gt == 0.0) break;
            if ((gt < 0.0) == (ga < 0.0)) {
                ta = t;
                ga = gt;
                if (side == -1) gb *= 0.5;
                side = -1;
            } else {
                tb = t;
                gb = gt;
                if (side == 1) ga *= 0.5;
                side = 1;
            }
        }
        p = a + t * (b - a);
    }
    return out;
}

std::size_t count_inside(const Polyline& ring, std::span<const Point> pts) {
    std::size_t c = 0;
    for (Point p : pts) c += point_in_ring(ring.points, p) ? 1 : 0;
    return c;
}

// Cell centers inside a closed curve, thinned to about `cap` points.
std::vector<Point> interior_cells(const Polyline& ring, const Frame& f, std::size_t cap = 1500) {
    double x0 = ring.points.front().real(), x1 = x0, y0 = ring.points.front().imag(), y1 = y0;
    for (Point p : ring.points) {
        x0 = std::min(x0, p.real());
        x1 = std::max(x1, p.real());
        y0 = std::min(y0, p.imag());
        y1 = std::max(y1, p.imag());
    }
    const double cells = std::abs(ring.signed_area()) / (f.hx() * f.hy());
    const int stride = std::max(1, static_cast<int>(std::ceil(std::sqrt(cells / static_cast<double>(cap)))));
    const int ix0 = std::max(0, static_cast<int>((x0 - f.xmin) / f.hx()));
    const int ix1 = std::min(f.nx - 1, static_cast<int>((x1 - f.xmin) / f.hx()) + 1);
    const int iy0 = std::max(0, static_cast<int>((y0 - f.ymin) / f.hy()));
    const int iy1 = std::min(f.ny - 1, static_cast<int>((y1 - f.ymin) / f.hy()) + 1);
    std::vector<Point> out;
    for (int iy = iy0; iy <= iy1; iy += stride)
        for (int ix = ix0; ix <= ix1; ix += stride) {
            const Point z = f.cell_center(ix, iy);
            if (point_in_ring(ring.points, z)) out.push_back(z);
        }
    if (out.empty()) out = ring.points;
    return out;
}

double median(std::vector<double> v) {
    const std::size_t k = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end());
    return v[k];
}

// Seeds from the degree-ratio field and one level per seed.
std::vector<double> island_levels(PhaseResult& r, const ScalarField& log_n, int threads, bool refine) {
    const int n = r.degree_used;
    const int m = std::max(1, n / 2);
    const ScalarField log_m = field(r.basis, m, r.field.frame, FieldMeaning::LogLambda, threads);
    ScalarField rho = log_n;
    for (std::size_t i = 0; i < rho.values.size(); ++i)
        rho.values[i] = std::exp(0.5 * (log_n.values[i] - log_m.values[i]));
    r.ratio_level = disk_boundary_level(n, 1.0) / disk_boundary_level(m, 1.0);
    const double h = r.field.spacing();
    ContourSet all = contours(rho, r.ratio_level);
    r.seeds = ContourSet{all.level, {}};
    const double target = std::log(r.ratio_level);
    const auto g = [&](Point z) { return 0.5 * (log_lambda(r.basis, n, z) - log_lambda(r.basis, m, z)) - target; };
    for (const Polyline* p : all.outermost())
        if (p->signed_area() >= 4.0 * h * h) r.seeds.polylines.push_back(refine ? refine_curve(*p, g, rho.frame) : *p);
    r.ratio_field = std::move(rho);
    std::vector<double> levels;
    for (const Polyline& s : r.seeds.polylines) {
        std::vector<double> v;
        v.reserve(s.points.size());
        for (Point z : s.points) v.push_back(std::exp(0.5 * log_lambda(r.basis, n, z)));
        levels.push_back(median(std::move(v)));
    }
    return levels;
}

// Steps II-IV shared by both phases, on an already orthogonalized basis.
void trace_phase(PhaseResult& r, const MomentMatrix& m, const ReconstructionConfig& cfg) {
    const int n = r.degree_used;
    const double mass = mass_z(m);
    if (!(mass > 0.0)) {
        r.warnings.push_back("non-positive mass mu_00; nothing to trace");
        return;
    }
    const double radius = std::sqrt(mass / std::numbers::pi);

    try {
        r.zeros = zeros(r.basis, n);
    } catch (const ConvergenceError& e) {
        r.warnings.push_back(e.what());
    }

    if (cfg.frame) {
        r.frame = *cfg.frame;
        r.frame.nx = cfg.nx;
        r.frame.ny = cfg.ny;
        r.frame_auto = false;
    } else {
        Point lo, hi;
        if (r.zeros.empty()) {
            const Point c = m.frame().to_global(m.at(1, 0) / m.at(0, 0));
            lo = hi = c;
        } else {
            lo = hi = r.zeros.front();
            for (Point z : r.zeros) {
                lo = {std::min(lo.real(), z.real()), std::min(lo.imag(), z.imag())};
                hi = {std::max(hi.real(), z.real()), std::max(hi.imag(), z.imag())};
            }
        }
        const double spread = std::max(diameter(r.zeros), 2.0 * radius);
        const double pad = cfg.margin * spread;
        r.frame = Frame{lo.real() - pad, hi.real() + pad, lo.imag() - pad, hi.imag() + pad, cfg.nx, cfg.ny};
        r.frame_auto = true;
    }
    r.frame.validate();

    using Rule = ReconstructionConfig::LevelRule;
    std::vector<double> seed_levels;
    for (;;) {
        const ScalarField log_n = field(r.basis, n, r.frame, FieldMeaning::LogLambda, cfg.threads);
        r.field = log_n;
        r.field.meaning = FieldMeaning::LambdaSqrt;
        for (double& v : r.field.values) v = std::exp(0.5 * v);
        r.calibration.reset();
        r.ratio_field.reset();
        r.seeds = {};
        seed_levels.clear();
        if (cfg.level) {
            r.level = *cfg.level;
        } else {
            if (cfg.level_rule == Rule::PerIsland) seed_levels = island_levels(r, log_n, cfg.threads, cfg.refine);
            if (seed_levels.empty()) {
                r.calibration = calibrate_level(n, r.field.spacing(), radius);
                r.level = r.calibration->level;
            } else {
                r.level = *std::min_element(seed_levels.begin(), seed_levels.end());
            }
        }
        r.field.level_constant = r.level / r.field.spacing();
        if (!r.frame_auto || r.field.border_max() < r.level || r.frame_growths >= 10) break;
        r.frame = grow(r.frame, 1.5);
        ++r.frame_growths;
    }
    if (r.frame_auto && r.field.border_max() >= r.level)
        r.warnings.push_back("frame still meets the level set after 10 enlargements");
    if (!cfg.level && cfg.level_rule == Rule::PerIsland && seed_levels.empty())
        r.warnings.push_back("no island seed on the degree-ratio field; fell back to the calibrated level");

    std::vector<double> distinct = seed_levels.empty() ? std::vector<double>{r.level} : seed_levels;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    for (double L : distinct) {
        r.contours.push_back(contours(r.field, L));
        r.open_contours += r.contours.back().count_open();
    }
    if (r.open_contours > 0)
        r.warnings.push_back(std::to_string(r.open_contours) +
                             " open level curve(s) reach the frame border; the frame is too small");

    // grid interpolation is only kept where the calibrated level expects it
    const bool refine = cfg.refine && !r.calibration;
    const auto emit = [&](const Polyline& line, double L) {
        if (refine) {
            const double target = std::log(L);
            const auto g = [&](Point z) { return 0.5 * log_lambda(r.basis, n, z) - target; };
            return add_ring(r, refine_curve(line, g, r.frame), L, cfg.decimate);
        }
        return add_ring(r, line, L, cfg.decimate);
    };
    if (seed_levels.empty()) {
        for (const Polyline* line : r.contours.front().outermost()) emit(*line, r.level);
    } else {
        const auto& seeds = r.seeds.polylines;
        // a seed owns the level curve covering most of its interior, unless
        // that curve also covers most of another seed
        std::vector<std::vector<Point>> inner;
        for (const Polyline& sd : seeds) inner.push_back(interior_cells(sd, r.frame));
        for (std::size_t j = 0; j < seeds.size(); ++j) {
            const double L = seed_levels[j];
            const auto set = std::find_if(r.contours.begin(), r.contours.end(),
                                          [&](const ContourSet& c) { return c.level == L; });
            const Polyline* pick = nullptr;
            std::size_t best = 0;
            for (const Polyline* c : set->outermost()) {
                const std::size_t in = count_inside(*c, inner[j]);
                if (in > best) {
                    best = in;
                    pick = c;
                }
            }
            bool ok = pick && 2 * best >= inner[j].size();
            for (std::size_t k = 0; ok && k < seeds.size(); ++k)
                if (k != j && 2 * count_inside(*pick, inner[k]) >= inner[k].size()) ok = false;
            if (ok) {
                emit(*pick, L);
            } else if (add_ring(r, seeds[j], L, cfg.decimate)) {
                r.warnings.push_back("island " + std::to_string(j) +
                                     " has no separate level curve; its degree-ratio curve is used");
            }
        }
    }
    if (r.boundary.empty()) r.warnings.push_back("no closed outer level curve found");
    r.feasible = !r.boundary.empty();
}

void record_basis(PhaseResult& r) {
    r.breakdown = r.basis.breakdown_degree();
    r.degree_used = std::min(r.degree_requested, r.basis.degree());
    r.max_residual = r.basis.degree() >= 0 ? r.basis.max_residual() : 0.0;
    if (r.breakdown)
        r.warnings.push_back("orthogonalization broke down at degree " + std::to_string(*r.breakdown) +
                             "; using degree " + std::to_string(std::max(r.degree_used, 0)));
}

}  // namespace

std::vector<Point> douglas_peucker(std::span<const Point> ring, double tol) {
    const std::size_t n = ring.size();
    if (n <= 3) return {ring.begin(), ring.end()};
    // split at the vertex farthest from vertex 0
    std::size_t far = 1;
    for (std::size_t k = 1; k < n; ++k)
        if (std::abs(ring[k] - ring[0]) > std::abs(ring[far] - ring[0])) far = k;
    std::vector<char> keep(n, 0);
    keep[0] = keep[far] = 1;
    dp_range(ring, 0, far, tol, keep);
    dp_range(ring, far, n, tol, keep);
    std::vector<Point> out;
    for (std::size_t k = 0; k < n; ++k)
        if (keep[k]) out.push_back(ring[k]);
    // a ring needs three vertices; add the farthest remaining one
    if (out.size() < 3) {
        std::size_t best = 0;
        double dbest = -1.0;
        for (std::size_t k = 0; k < n; ++k) {
            if (keep[k]) continue;
            const double d = chord_distance(ring[k], ring[0], ring[far]);
            if (d > dbest) {
                dbest = d;
                best = k;
            }
        }
        keep[best] = 1;
        out.clear();
        for (std::size_t k = 0; k < n; ++k)
            if (keep[k]) out.push_back(ring[k]);
    }
    return out;
}

std::optional<MomentFrame> centroid_frame(const MomentMatrix& m) {
    const std::complex<double> m00 = m.at(0, 0);
    if (!(m00.real() > 0.0)) return std::nullopt;
    const std::complex<double> c = m.at(1, 0) / m00.real();
    const double var = m.at(1, 1).real() / m00.real() - std::norm(c);
    if (!(var > 0.0) || !std::isfinite(var)) return std::nullopt;
    const MomentFrame& f = m.frame();
    return MomentFrame{f.to_global(c), f.scale * std::sqrt(2.0 * var)};
}

PhaseResult phase_a(const MomentMatrix& moments_star, const ReconstructionConfig& config) {
    config.validate();
    if (config.degree > moments_star.degree())
        throw RangeError("degree " + std::to_string(config.degree) + " exceeds moment degree " +
                         std::to_string(moments_star.degree()));
    PhaseResult r;
    r.degree_requested = config.degree;
    const MomentMatrix m = moments_star.with_precision(config.precision);
    r.basis = orthogonalize(m, config.degree);
    record_basis(r);
    if (r.degree_used < 1) {
        r.warnings.push_back("no usable polynomial of positive degree");
        return r;
    }
    trace_phase(r, m, config);
    return r;
}

MomentMatrix polygon_moments_of_ghat(std::span<const Polygon> g_hat, int n, Precision precision, MomentFrame frame) {
    if (g_hat.empty()) throw GeometryError("no recovered polygons to take moments of");
    return polygon_set_moments(g_hat, n, precision, frame);
}

PhaseResult phase_b(const MomentMatrix& moments_star, const MomentMatrix& mu_hat, const ReconstructionConfig& config,
                    double mass_floor, std::span<const Polygon> g_hat) {
    config.validate();
    if (moments_star.degree() != mu_hat.degree()) throw RangeError("Phase B needs moments of equal degree");
    if (!(moments_star.frame() == mu_hat.frame())) throw RangeError("Phase B needs moments in the same frame");
    const Precision p = std::max(config.precision, std::max(moments_star.precision(), mu_hat.precision()));
    const MomentMatrix diff = mu_hat.with_precision(p) - moments_star.with_precision(p);

    PhaseResult r;
    r.degree_requested = std::min(config.degree, diff.degree());
    const double mass = mass_z(diff);
    if (!(mass > mass_floor)) {
        r.warnings.push_back("no lakes detected: mu'_00 = " + str(mass) + " is not above " + str(mass_floor));
        return r;
    }
    MomentMatrix m = diff;
    if (config.recenter_lakes) {
        if (const auto cf = centroid_frame(diff)) m = reframe(diff, *cf);
    }
    r.basis = orthogonalize(m, r.degree_requested);
    record_basis(r);
    if (mass_floor > 0.0 && !g_hat.empty() && r.degree_used >= 0) {
        // log max over the ring vertices of |p_k|^2, k = 0..degree_used
        std::vector<double> worst(static_cast<std::size_t>(r.degree_used) + 1, -std::numeric_limits<double>::infinity());
        for (const Polygon& g : g_hat)
            for (Point v : g.vertices()) {
                const ScaledValues sv = evaluate_all(r.basis, r.degree_used, v);
                for (std::size_t k = 0; k < worst.size(); ++k)
                    worst[k] = std::max(worst[k], 2.0 * (std::log(std::abs(sv.values[k])) + sv.log_scale));
            }
        const double cut = std::log(0.1 / mass_floor);
        for (std::size_t k = 0; k < worst.size(); ++k)
            if (worst[k] >= cut) {
                r.uncertainty_degree = static_cast<int>(k) - 1;
                r.degree_used = std::min(r.degree_used, static_cast<int>(k) - 1);
                r.warnings.push_back(k == 0 ? std::string("ring error bound exceeds the lake mass itself")
                                            : "ring error bound limits the lake degree to " +
                                                  std::to_string(r.degree_used));
                break;
            }
    }
    if (r.degree_used < config.min_degree) {
        r.warnings.push_back("lake reconstruction infeasible: usable degree " +
                             (r.degree_used < 0 ? std::string("none") : std::to_string(r.degree_used)) +
                             ", need " + std::to_string(config.min_degree));
        return r;
    }
    trace_phase(r, m, config);
    return r;
}

std::vector<Polygon> ReconstructionResult::k_hat() const {
    if (!b) return {};
    return b->boundary;
}

ReconstructionResult reconstruct_full(const MomentMatrix& moments_star, const ReconstructionConfig& config, bool run_b,
                                      const std::optional<MomentMatrix>& mu_hat) {
    PhaseResult a = phase_a(moments_star, config);
    if (!run_b) {
        ReconstructionResult res;
        res.a = std::move(a);
        return res;
    }
    return reconstruct_lakes(moments_star, config, std::move(a), mu_hat);
}

ReconstructionResult reconstruct_lakes(const MomentMatrix& moments_star, const ReconstructionConfig& config,
                                       PhaseResult a, const std::optional<MomentMatrix>& mu_hat) {
    ReconstructionResult res;
    res.a = std::move(a);
    if (mu_hat) {
        res.mu_hat = *mu_hat;
        res.oracle_mu_hat = true;
        res.mass_floor = 1e-20 * std::abs(mass_z(moments_star));
    } else {
        if (res.a.boundary.empty()) {
            res.warnings.push_back("Phase B skipped: Phase A recovered no polygon");
            return res;
        }
        // the rings carry errors near the grid spacing, far above double-double
        // rounding, so mp buys nothing here and costs two orders of magnitude
        const Precision top = std::max(config.precision, moments_star.precision());
        res.mu_hat = polygon_moments_of_ghat(res.a.boundary, moments_star.degree(),
                                             std::min(top, Precision::DoubleDouble), moments_star.frame())
                         .with_precision(top);
        // area uncertainty of the recovered rings: perimeter times the expected radial error
        const double h = res.a.field.spacing();
        const double eps = res.a.calibration ? std::max(res.a.calibration->mean_radial_error, 0.01 * h) : 0.25 * h;
        for (const Polygon& g : res.a.boundary) res.mass_floor += 2.0 * perimeter(g) * eps;
    }
    res.b = phase_b(moments_star, *res.mu_hat, config, res.mass_floor,
                    res.oracle_mu_hat ? std::span<const Polygon>{} : std::span<const Polygon>(res.a.boundary));
    const Precision p = std::max(config.precision, std::max(moments_star.precision(), res.mu_hat->precision()));
    res.mu_prime = res.mu_hat->with_precision(p) - moments_star.with_precision(p);

    for (const Polygon& k : res.b->boundary) {
        bool inside = false;
        for (const Polygon& g : res.a.boundary) {
            bool all = true;
            for (Point v : k.vertices())
                if (!point_in_ring(g.vertices(), v)) {
                    all = false;
                    break;
                }
            if (all) {
                inside = true;
                break;
            }
        }
        if (!inside) res.warnings.push_back("a recovered lake is not inside any recovered island");
    }
    return res;
}

}  // namespace archi
