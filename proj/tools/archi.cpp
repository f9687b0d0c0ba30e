// archi: command-line front end over the library.
//
// Every subcommand writes into an output directory (-o) and appends one
// block to <dir>/manifest.txt.  Exit codes: 0 success, 1 domain error
// (the message names the failing stage), 2 usage error.

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "archi/bergman.hpp"
#include "archi/christoffel.hpp"
#include "archi/errors.hpp"
#include "archi/geometry.hpp"
#include "archi/moments.hpp"
#include "archi/reconstruct.hpp"
#include "archi/verify.hpp"

namespace fs = std::filesystem;
using namespace archi;

namespace {

// a library failure tagged with the stage that raised it
struct StageError : std::runtime_error {
    StageError(const std::string& stage, const std::string& what) : std::runtime_error(stage + ": " + what) {}
};

std::string r17(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

class Manifest {
public:
    explicit Manifest(std::string sub) : sub_(std::move(sub)) {}

    void input(const std::string& k, const std::string& v) { inputs_.emplace_back(k, v); }
    void param(const std::string& k, const std::string& v) { params_.emplace_back(k, v); }
    void precision(Precision p) { precision_ = std::string(to_string(p)); }

    template <class F>
    auto stage(const std::string& name, F&& f) {
        const auto t0 = std::chrono::steady_clock::now();
        auto done = [&] {
            stages_.emplace_back(name, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
        };
        try {
            if constexpr (std::is_void_v<decltype(f())>) {
                f();
                done();
            } else {
                auto r = f();
                done();
                return r;
            }
        } catch (const archi::Error& e) {
            throw StageError(name, e.what());
        } catch (const std::ios_base::failure& e) {
            throw StageError(name, e.what());
        }
    }

    void append(const fs::path& dir) const {
        std::ofstream os(dir / "manifest.txt", std::ios::app);
        os << "run " << sub_ << '\n';
        os << "version " << library_version() << '\n';
        for (const auto& [k, v] : inputs_) os << "input " << k << '=' << v << '\n';
        for (const auto& [k, v] : params_) os << "param " << k << '=' << v << '\n';
        if (!precision_.empty()) os << "precision " << precision_ << '\n';
        for (const auto& [k, t] : stages_) os << "stage " << k << ' ' << std::fixed << std::setprecision(3) << t << " s\n";
        const std::time_t now = std::time(nullptr);
        std::tm tm{};
        gmtime_r(&now, &tm);
        os << "timestamp " << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ") << "\n\n";
    }

private:
    std::string sub_;
    std::vector<std::pair<std::string, std::string>> inputs_, params_;
    std::string precision_;
    std::vector<std::pair<std::string, double>> stages_;
};

fs::path out_dir(const std::string& s) {
    const fs::path p(s);
    fs::create_directories(p);
    return p;
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream os(p);
    if (!os) throw StageError("output", "cannot write " + p.string());
    return os;
}

std::ifstream open_in(const std::string& p) {
    std::ifstream is(p);
    if (!is) throw StageError("input", "cannot read " + p);
    return is;
}

std::vector<double> split_numbers(const std::string& s, char sep) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, sep)) {
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != tok.size()) throw CLI::ValidationError("malformed number '" + tok + "' in '" + s + "'");
        out.push_back(v);
    }
    return out;
}

std::pair<int, int> parse_grid(const std::string& s) {
    const auto v = split_numbers(s, 'x');
    if (v.size() != 2 || v[0] != static_cast<int>(v[0]) || v[1] != static_cast<int>(v[1]))
        throw CLI::ValidationError("--grid expects NXxNY, got '" + s + "'");
    return {static_cast<int>(v[0]), static_cast<int>(v[1])};
}

Frame parse_box(const std::string& s, int nx, int ny) {
    const auto v = split_numbers(s, ',');
    if (v.size() != 4) throw CLI::ValidationError("--frame expects x0,x1,y0,y1, got '" + s + "'");
    if (!(v[0] < v[1] && v[2] < v[3])) throw CLI::ValidationError("--frame box is empty: '" + s + "'");
    return Frame{v[0], v[1], v[2], v[3], nx, ny};
}

MomentFrame parse_moment_frame(const std::string& s, const Scene& scene) {
    if (s == "natural") return natural_frame(scene);
    if (s == "identity") return {};
    const auto v = split_numbers(s, ',');
    if (v.size() != 3 || !(v[2] > 0)) throw CLI::ValidationError("--frame expects natural, identity or cx,cy,s");
    return {{v[0], v[1]}, v[2]};
}

const std::vector<std::string> kPrecisions{"double", "dd", "mp"};

std::string frame_str(const Frame& f) {
    return r17(f.xmin) + "," + r17(f.xmax) + "," + r17(f.ymin) + "," + r17(f.ymax) + " " + std::to_string(f.nx) + "x" +
           std::to_string(f.ny);
}

void write_rings(std::ostream& os, std::span<const Polygon> rings) {
    os << "ring_id,seq,x,y\n";
    for (std::size_t r = 0; r < rings.size(); ++r) {
        const auto& v = rings[r].vertices();
        for (std::size_t k = 0; k < v.size(); ++k)
            os << r << ',' << k << ',' << r17(v[k].real()) << ',' << r17(v[k].imag()) << '\n';
    }
}

ContourSet rings_as_contours(std::span<const Polygon> rings, double level) {
    ContourSet c;
    c.level = level;
    for (const Polygon& p : rings) c.polylines.push_back({p.vertices(), true});
    return c;
}

Frame frame_around(std::span<const Point> pts, int nx, int ny) {
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    for (Point z : pts) {
        x0 = std::min(x0, z.real());
        x1 = std::max(x1, z.real());
        y0 = std::min(y0, z.imag());
        y1 = std::max(y1, z.imag());
    }
    if (pts.empty()) x0 = y0 = -1, x1 = y1 = 1;
    const double pad = 0.1 * std::max({x1 - x0, y1 - y0, 1e-3});
    return {x0 - pad, x1 + pad, y0 - pad, y1 + pad, nx, ny};
}

// ---------------------------------------------------------------------------

struct MomentsArgs {
    std::string scene, which = "gstar", precision = "double", frame = "natural", out;
    int degree = 20;
};

void run_moments(const MomentsArgs& a) {
    Manifest m("moments");
    m.input("scene", a.scene);
    m.param("degree", std::to_string(a.degree));
    m.param("which", a.which);
    m.param("frame", a.frame);
    const Precision p = parse_precision(a.precision);
    m.precision(p);
    const fs::path dir = out_dir(a.out);
    const Scene scene = m.stage("read_scene", [&] { return read_scene_file(a.scene); });
    const MomentFrame frame = parse_moment_frame(a.frame, scene);
    const PointSet which = a.which == "g" ? PointSet::G : a.which == "k" ? PointSet::K : PointSet::GStar;
    const MomentMatrix mm = m.stage("moments", [&] { return scene_moments(scene, a.degree, which, p, frame); });
    m.stage("write", [&] {
        auto os = open_out(dir / "moments.txt");
        write_moments(os, mm);
    });
    m.append(dir);
}

struct OrthoArgs {
    std::string moments, out;
    int degree = 0;
    double tol = 0.0;
};

void run_orthogonalize(const OrthoArgs& a) {
    Manifest m("orthogonalize");
    m.input("moments", a.moments);
    const fs::path dir = out_dir(a.out);
    const MomentMatrix mm = m.stage("read_moments", [&] {
        auto is = open_in(a.moments);
        return read_moments(is);
    });
    const int n = a.degree > 0 ? a.degree : mm.degree();
    if (n > mm.degree())
        throw CLI::ValidationError("--degree " + std::to_string(n) + " exceeds the moment degree " +
                                   std::to_string(mm.degree()));
    m.param("degree", std::to_string(n));
    m.param("breakdown_tol", r17(a.tol));
    m.precision(mm.precision());
    OrthogonalizeOptions opt;
    opt.breakdown_tol = a.tol;
    const BergmanBasis b = m.stage("orthogonalize", [&] { return orthogonalize(mm, n, opt); });
    m.stage("write", [&] {
        auto os = open_out(dir / "basis.txt");
        write_basis(os, b);
        auto gs = open_out(dir / "gamma.csv");
        gs << "k,log_gamma,residual\n";
        for (int k = 0; k <= b.degree(); ++k) gs << k << ',' << r17(b.log_gamma(k)) << ',' << r17(b.residual(k)) << '\n';
        auto rs = open_out(dir / "report.txt");
        rs << "requested degree " << n << "\nclean degree " << b.degree() << '\n';
        if (b.breakdown_degree()) rs << "breakdown at degree " << *b.breakdown_degree() << '\n';
        rs << "max residual " << r17(b.max_residual()) << '\n';
    });
    if (b.breakdown_degree())
        std::cerr << "archi orthogonalize: breakdown at degree " << *b.breakdown_degree() << "; basis kept to degree "
                  << b.degree() << '\n';
    m.append(dir);
}

BergmanBasis load_basis(Manifest& m, const std::string& path) {
    m.input("basis", path);
    return m.stage("read_basis", [&] {
        auto is = open_in(path);
        return read_basis(is);
    });
}

struct ZerosArgs {
    std::string basis, out;
    int k = 0;
};

void run_zeros(const ZerosArgs& a) {
    Manifest m("zeros");
    const fs::path dir = out_dir(a.out);
    const BergmanBasis b = load_basis(m, a.basis);
    const int k = a.k > 0 ? a.k : b.degree();
    m.param("k", std::to_string(k));
    m.precision(b.precision());
    const auto z = m.stage("zeros", [&] { return zeros(b, k); });
    m.stage("write", [&] {
        auto os = open_out(dir / "zeros.csv");
        os << "x,y\n";
        for (Point p : z) os << r17(p.real()) << ',' << r17(p.imag()) << '\n';
        auto svg = open_out(dir / "zeros.svg");
        write_svg(svg, frame_around(z, 2, 2), {}, z, "zeros of p_" + std::to_string(k));
    });
    m.append(dir);
}

struct FieldArgs {
    std::string basis, frame, grid = "256x256", meaning = "lambda_sqrt", out;
    int n = 0, threads = 0;
    std::optional<double> level_radius;
};

void run_field(const FieldArgs& a) {
    Manifest m("lambda-field");
    const fs::path dir = out_dir(a.out);
    const auto [nx, ny] = parse_grid(a.grid);
    const Frame frame = parse_box(a.frame, nx, ny);
    const FieldMeaning meaning = parse_field_meaning(a.meaning);
    const BergmanBasis b = load_basis(m, a.basis);
    const int n = a.n > 0 ? a.n : b.degree();
    if (n > b.degree())
        throw CLI::ValidationError("--n " + std::to_string(n) + " exceeds the basis degree " + std::to_string(b.degree()));
    m.param("n", std::to_string(n));
    m.param("frame", frame_str(frame));
    m.param("meaning", a.meaning);
    m.param("threads", std::to_string(a.threads));
    m.precision(b.precision());
    ScalarField f = m.stage("field", [&] { return field(b, n, frame, meaning, a.threads); });
    if (a.level_radius) {
        m.param("level_radius", r17(*a.level_radius));
        const auto cal = m.stage("calibrate", [&] { return calibrate_level(n, f.spacing(), *a.level_radius); });
        f.level_constant = cal.constant;
    }
    m.stage("write", [&] {
        auto os = open_out(dir / "field.csv");
        write_field(os, f);
    });
    m.append(dir);
}

struct ContourArgs {
    std::string field, level = "auto", out;
};

void run_contours(const ContourArgs& a) {
    Manifest m("contours");
    m.input("field", a.field);
    const fs::path dir = out_dir(a.out);
    const ScalarField f = m.stage("read_field", [&] {
        auto is = open_in(a.field);
        return read_field(is);
    });
    double level = 0.0;
    if (a.level == "auto") {
        if (!f.level_constant)
            throw StageError("level", "the field carries no level_constant; pass --level <v> or build it with "
                                      "--level-radius");
        level = *f.level_constant * f.spacing();
    } else {
        const auto v = split_numbers(a.level, ',');
        if (v.size() != 1) throw CLI::ValidationError("--level expects auto or a number");
        level = v[0];
    }
    m.param("level", r17(level));
    const ContourSet c = m.stage("contours", [&] { return contours(f, level); });
    m.stage("write", [&] {
        auto os = open_out(dir / "contours.csv");
        write_contours(os, c);
        auto svg = open_out(dir / "contours.svg");
        const SvgLayer layer{&c};
        write_svg(svg, f.frame, std::span<const SvgLayer>(&layer, 1), {}, "level " + r17(level));
    });
    if (c.count_open() > 0)
        std::cerr << "archi contours: " << c.count_open() << " open level curve(s) reach the frame border\n";
    m.append(dir);
}

struct ReconArgs {
    std::string moments, scene, true_moments, frame = "auto", level = "auto", level_rule = "per-island", phase = "ab",
                                                grid = "256x256", precision, out;
    int degree = 60, threads = 0;
    double margin = 0.5;
    bool oracle = false, decimate = false, no_refine = false;
};

void report_phase(std::ostream& os, const std::string& name, const PhaseResult& r) {
    os << name << '\n';
    os << "  feasible " << (r.feasible ? "yes" : "no") << '\n';
    os << "  degree requested " << r.degree_requested << " used " << r.degree_used << '\n';
    if (r.breakdown) os << "  breakdown at degree " << *r.breakdown << '\n';
    if (r.uncertainty_degree) os << "  ring-error degree cap " << *r.uncertainty_degree << '\n';
    os << "  max residual " << r17(r.max_residual) << '\n';
    if (r.field.values.empty()) return;
    os << "  frame " << frame_str(r.frame) << (r.frame_auto ? " (auto" : " (manual");
    if (r.frame_growths) os << ", grown " << r.frame_growths << " times";
    os << ")\n";
    os << "  zeros " << r.zeros.size() << '\n';
    if (r.calibration) os << "  calibrated level constant " << r17(r.calibration->constant) << '\n';
    if (r.ratio_field) os << "  degree-ratio level " << r17(r.ratio_level) << '\n';
    os << "  closed outer curves " << r.boundary.size() << '\n';
    for (std::size_t k = 0; k < r.boundary.size(); ++k)
        os << "    ring " << k << " level " << r17(r.levels[k]) << " vertices " << r.boundary[k].size() << " area "
           << r17(r.boundary[k].area()) << '\n';
    os << "  open curves " << r.open_contours << '\n';
    for (const auto& w : r.warnings) os << "  warning: " << w << '\n';
}

void write_phase_svg(const fs::path& p, const PhaseResult& r, const std::string& title) {
    auto os = open_out(p);
    std::vector<SvgLayer> layers;
    for (const auto& c : r.contours) layers.push_back({&c, "#7f9cc9"});
    const ContourSet rings = rings_as_contours(r.boundary, r.level);
    layers.push_back({&rings, "#0b2a5b"});
    write_svg(os, r.frame, layers, r.zeros, title);
}

int run_reconstruct(const ReconArgs& a) {
    Manifest m("reconstruct");
    if (a.moments.empty() == a.scene.empty()) throw CLI::ValidationError("give exactly one of --moments and --scene");
    if (a.oracle && a.scene.empty()) throw CLI::ValidationError("--oracle needs --scene");
    if (a.oracle && !a.true_moments.empty()) throw CLI::ValidationError("--oracle and --true-moments exclude each other");
    const bool run_b = a.phase == "ab";

    ReconstructionConfig cfg;
    cfg.degree = a.degree;
    std::tie(cfg.nx, cfg.ny) = parse_grid(a.grid);
    if (a.frame != "auto") cfg.frame = parse_box(a.frame, cfg.nx, cfg.ny);
    cfg.margin = a.margin;
    if (a.level != "auto") {
        const auto v = split_numbers(a.level, ',');
        if (v.size() != 1) throw CLI::ValidationError("--level expects auto or a number");
        cfg.level = v[0];
    }
    cfg.level_rule = a.level_rule == "calibrated" ? ReconstructionConfig::LevelRule::Calibrated
                                                  : ReconstructionConfig::LevelRule::PerIsland;
    cfg.threads = a.threads;
    cfg.decimate = a.decimate;
    cfg.refine = !a.no_refine;
    try {
        cfg.validate();
    } catch (const archi::Error& e) {
        throw CLI::ValidationError(e.what());
    }

    const fs::path dir = out_dir(a.out);
    std::optional<Scene> scene;
    std::optional<MomentMatrix> mu_hat;
    std::optional<MomentMatrix> star;
    Precision p = a.precision.empty() ? Precision::DoubleDouble : parse_precision(a.precision);
    if (!a.scene.empty()) {
        m.input("scene", a.scene);
        scene = m.stage("read_scene", [&] { return read_scene_file(a.scene); });
        const MomentFrame mf = natural_frame(*scene);
        star = m.stage("moments", [&] { return scene_moments(*scene, cfg.degree, PointSet::GStar, p, mf); });
        if (a.oracle) mu_hat = m.stage("moments_g", [&] { return scene_moments(*scene, cfg.degree, PointSet::G, p, mf); });
    } else {
        m.input("moments", a.moments);
        MomentMatrix mm = m.stage("read_moments", [&] {
            auto is = open_in(a.moments);
            return read_moments(is);
        });
        if (mm.degree() < cfg.degree)
            throw CLI::ValidationError("--degree " + std::to_string(cfg.degree) + " exceeds the moment degree " +
                                       std::to_string(mm.degree()));
        if (a.precision.empty()) p = mm.precision();
        star = mm.truncated(cfg.degree).with_precision(p);
    }
    if (!a.true_moments.empty()) {
        m.input("true_moments", a.true_moments);
        MomentMatrix tm = m.stage("read_true_moments", [&] {
            auto is = open_in(a.true_moments);
            return read_moments(is);
        });
        if (tm.degree() < cfg.degree) throw CLI::ValidationError("--true-moments degree is below --degree");
        tm = tm.truncated(cfg.degree).with_precision(p);
        if (!(tm.frame() == star->frame())) tm = reframe(tm, star->frame());
        mu_hat = tm;
    }
    cfg.precision = p;
    m.precision(p);
    m.param("degree", std::to_string(cfg.degree));
    m.param("grid", a.grid);
    m.param("frame", a.frame);
    m.param("margin", r17(cfg.margin));
    m.param("level", a.level);
    m.param("level_rule", a.level_rule);
    m.param("phase", a.phase);
    m.param("oracle", mu_hat ? "yes" : "no");
    m.param("threads", std::to_string(cfg.threads));
    m.param("refine", cfg.refine ? "yes" : "no");
    m.param("decimate", cfg.decimate ? "yes" : "no");

    ReconstructionResult res;
    res.a = m.stage("phase_a", [&] { return phase_a(*star, cfg); });
    if (run_b) res = m.stage("phase_b", [&] { return reconstruct_lakes(*star, cfg, std::move(res.a), mu_hat); });

    m.stage("write", [&] {
        {
            auto os = open_out(dir / "ghat.csv");
            write_rings(os, res.g_hat());
        }
        {
            auto os = open_out(dir / "khat.csv");
            write_rings(os, res.k_hat());
        }
        {
            auto os = open_out(dir / "field_a.csv");
            write_field(os, res.a.field);
        }
        if (res.b && !res.b->field.values.empty()) {
            auto os = open_out(dir / "field_b.csv");
            write_field(os, res.b->field);
        } else {
            std::error_code ec;
            fs::remove(dir / "field_b.csv", ec);
        }
        {
            auto os = open_out(dir / "zeros.csv");
            os << "phase,x,y\n";
            for (Point z : res.a.zeros) os << "a," << r17(z.real()) << ',' << r17(z.imag()) << '\n';
            if (res.b)
                for (Point z : res.b->zeros) os << "b," << r17(z.real()) << ',' << r17(z.imag()) << '\n';
        }
        {
            auto os = open_out(dir / "zeros.svg");
            const ContourSet rings = rings_as_contours(res.a.boundary, res.a.level);
            const SvgLayer layer{&rings, "#0b2a5b"};
            write_svg(os, res.a.frame, std::span<const SvgLayer>(&layer, 1), res.a.zeros,
                      "zeros of p_" + std::to_string(res.a.degree_used));
        }
        write_phase_svg(dir / "phase_a.svg", res.a, "outer level curves, degree " + std::to_string(res.a.degree_used));
        if (res.b && !res.b->field.values.empty())
            write_phase_svg(dir / "phase_b.svg", *res.b, "lake level curves, degree " + std::to_string(res.b->degree_used));
        else {
            std::error_code ec;
            fs::remove(dir / "phase_b.svg", ec);
        }

        auto os = open_out(dir / "report.txt");
        os << "degree " << cfg.degree << "\nprecision " << to_string(p) << '\n';
        report_phase(os, "phase A", res.a);
        if (res.b) {
            os << "lake moments " << (res.oracle_mu_hat ? "oracle (moments of G)" : "from the recovered polygons")
               << "\nmass floor " << r17(res.mass_floor) << '\n';
            // areas in z units
            const double s2 = star->frame().scale * star->frame().scale;
            os << "area G* " << r17(star->at(0, 0).real() * s2) << '\n';
            if (res.mu_hat) os << "area mu_hat " << r17(res.mu_hat->at(0, 0).real() * s2) << '\n';
            if (res.mu_prime) os << "area mu_prime " << r17(res.mu_prime->at(0, 0).real() * s2) << '\n';
            report_phase(os, "phase B", *res.b);
        }
        for (const auto& w : res.warnings) os << "warning: " << w << '\n';
        if (scene) {
            if (!res.g_hat().empty())
                os << "hausdorff ghat " << r17(hausdorff_to_boundary(res.g_hat(), *scene, BoundarySet::Gamma)) << '\n';
            if (!res.k_hat().empty() && !scene->lakes().empty())
                os << "hausdorff khat " << r17(hausdorff_to_boundary(res.k_hat(), *scene, BoundarySet::Lakes)) << '\n';
        }
    });

    for (const auto& w : res.a.warnings) std::cerr << "archi reconstruct: phase A: " << w << '\n';
    if (res.b)
        for (const auto& w : res.b->warnings) std::cerr << "archi reconstruct: phase B: " << w << '\n';
    for (const auto& w : res.warnings) std::cerr << "archi reconstruct: " << w << '\n';
    m.append(dir);
    if (!res.a.feasible) throw StageError("phase_a", "no closed outer level curve was recovered");
    return 0;
}

struct VerifyArgs {
    std::string suite, precision = "dd", out;
    int n = 0, threads = 0;
    bool strict = false;
};

int run_verify(const VerifyArgs& a) {
    Manifest m("verify");
    const fs::path dir = out_dir(a.out);
    VerifyOptions opt;
    opt.n = a.n;
    opt.precision = parse_precision(a.precision);
    opt.threads = a.threads;
    m.param("suite", a.suite);
    m.param("n", std::to_string(a.n));
    m.precision(opt.precision);
    std::vector<std::string> suites = a.suite == "all" ? list_suites() : std::vector<std::string>{a.suite};
    std::vector<Check> checks;
    for (const auto& s : suites) {
        auto cs = m.stage(s, [&] { return verify_suite(s, opt); });
        if (suites.size() > 1)
            for (auto& c : cs) c.name = s + "/" + c.name;
        checks.insert(checks.end(), cs.begin(), cs.end());
    }
    int failed = 0;
    for (const Check& c : checks) failed += !c.pass;
    m.stage("write", [&] {
        auto os = open_out(dir / "report.csv");
        write_report_csv(os, checks);
        auto ts = open_out(dir / "report.txt");
        write_report_text(ts, checks);
    });
    write_report_text(std::cout, checks);
    std::cout << checks.size() - failed << '/' << checks.size() << " checks passed\n";
    m.append(dir);
    return a.strict && failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Shape reconstruction from complex area moments"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(library_version()));

    MomentsArgs ma;
    auto* mo = app.add_subcommand("moments", "complex area moments of a scene file");
    mo->add_option("--scene", ma.scene, "scene file")->required()->check(CLI::ExistingFile);
    mo->add_option("--degree", ma.degree, "highest degree")->check(CLI::Range(0, kMaxDegree));
    mo->add_option("--which", ma.which, "g, gstar or k")->check(CLI::IsMember({"g", "gstar", "k"}));
    mo->add_option("--precision", ma.precision)->check(CLI::IsMember(kPrecisions));
    mo->add_option("--frame", ma.frame, "natural, identity or cx,cy,s");
    mo->add_option("-o,--out", ma.out, "output directory")->required();

    OrthoArgs oa;
    auto* og = app.add_subcommand("orthogonalize", "Bergman polynomials by Arnoldi Gram-Schmidt");
    og->add_option("--moments", oa.moments)->required()->check(CLI::ExistingFile);
    og->add_option("--degree", oa.degree, "defaults to the moment degree")->check(CLI::Range(0, kMaxDegree));
    og->add_option("--breakdown-tol", oa.tol, "0 picks the precision default")->check(CLI::NonNegativeNumber);
    og->add_option("-o,--out", oa.out)->required();

    ZerosArgs za;
    auto* zo = app.add_subcommand("zeros", "zeros of p_k from the Hessenberg matrix");
    zo->add_option("--basis", za.basis)->required()->check(CLI::ExistingFile);
    zo->add_option("--k", za.k, "defaults to the basis degree")->check(CLI::Range(1, kMaxDegree));
    zo->add_option("-o,--out", za.out)->required();

    FieldArgs fa;
    auto* fo = app.add_subcommand("lambda-field", "Christoffel function on a grid");
    fo->add_option("--basis", fa.basis)->required()->check(CLI::ExistingFile);
    fo->add_option("--n", fa.n, "defaults to the basis degree")->check(CLI::Range(0, kMaxDegree));
    fo->add_option("--frame", fa.frame, "x0,x1,y0,y1")->required();
    fo->add_option("--grid", fa.grid, "NXxNY");
    fo->add_option("--meaning", fa.meaning)->check(CLI::IsMember({"lambda_sqrt", "lambda", "log_lambda"}));
    fo->add_option("--level-radius", fa.level_radius, "attach the calibrated level for a disk of this radius")
        ->check(CLI::PositiveNumber);
    fo->add_option("--threads", fa.threads)->check(CLI::NonNegativeNumber);
    fo->add_option("-o,--out", fa.out)->required();

    ContourArgs ca;
    auto* co = app.add_subcommand("contours", "level curves of a field file");
    co->add_option("--field", ca.field)->required()->check(CLI::ExistingFile);
    co->add_option("--level", ca.level, "auto or a value");
    co->add_option("-o,--out", ca.out)->required();

    ReconArgs ra;
    auto* ro = app.add_subcommand("reconstruct", "islands and lakes from moments");
    ro->add_option("--moments", ra.moments, "moments of G*")->check(CLI::ExistingFile);
    ro->add_option("--scene", ra.scene, "scene file; moments are computed from it")->check(CLI::ExistingFile);
    ro->add_option("--true-moments", ra.true_moments, "moments of G for the oracle lake pass")->check(CLI::ExistingFile);
    ro->add_flag("--oracle", ra.oracle, "with --scene: lake pass from the moments of G");
    ro->add_option("--degree", ra.degree)->check(CLI::Range(4, kMaxDegree));
    ro->add_option("--grid", ra.grid, "NXxNY");
    ro->add_option("--frame", ra.frame, "auto or x0,x1,y0,y1");
    ro->add_option("--margin", ra.margin, "auto frame margin")->check(CLI::NonNegativeNumber);
    ro->add_option("--level", ra.level, "auto or a value");
    ro->add_option("--level-rule", ra.level_rule)->check(CLI::IsMember({"per-island", "calibrated"}));
    ro->add_option("--phase", ra.phase)->check(CLI::IsMember({"a", "ab"}));
    ro->add_option("--precision", ra.precision, "defaults to dd, or the file precision with --moments")
        ->check(CLI::IsMember(kPrecisions));
    ro->add_option("--threads", ra.threads)->check(CLI::NonNegativeNumber);
    ro->add_flag("--decimate", ra.decimate, "Douglas-Peucker at h/2 before the polygon moments");
    ro->add_flag("--no-refine", ra.no_refine, "keep the interpolated contour vertices");
    ro->add_option("-o,--out", ra.out)->required();

    VerifyArgs va;
    auto* vo = app.add_subcommand("verify", "oracle suites");
    std::vector<std::string> names = list_suites();
    names.push_back("all");
    vo->add_option("--suite", va.suite)->required()->check(CLI::IsMember(names));
    vo->add_option("--n", va.n, "0 keeps the suite default")->check(CLI::Range(0, kMaxDegree));
    vo->add_option("--precision", va.precision)->check(CLI::IsMember(kPrecisions));
    vo->add_option("--threads", va.threads)->check(CLI::NonNegativeNumber);
    vo->add_flag("--strict", va.strict, "exit 1 when a check fails");
    vo->add_option("-o,--out", va.out)->required();

    std::string stage_cmd;
    try {
        app.parse(argc, argv);
        for (auto* sub : app.get_subcommands()) stage_cmd = sub->get_name();
        if (*mo) run_moments(ma);
        else if (*og) run_orthogonalize(oa);
        else if (*zo) run_zeros(za);
        else if (*fo) run_field(fa);
        else if (*co) run_contours(ca);
        else if (*ro) return run_reconstruct(ra);
        else if (*vo) return run_verify(va);
        return 0;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const StageError& e) {
        std::cerr << "archi " << stage_cmd << ": " << e.what() << '\n';
        return 1;
    } catch (const archi::Error& e) {
        std::cerr << "archi " << stage_cmd << ": " << e.what() << '\n';
        return 1;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "archi " << stage_cmd << ": output: " << e.what() << '\n';
        return 1;
    }
}
