#include "archi/christoffel.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <thread>

#include "archi/errors.hpp"
#include "text_util.hpp"

namespace archi {

double log_lambda(const BergmanBasis& basis, int n, Point z) {
    const ScaledValues s = evaluate_all(basis, n, z);
    double sum = 0.0;
    for (const auto& v : s.values) sum += std::norm(v);
    return -(std::log(sum) + 2.0 * s.log_scale);
}

double lambda(const BergmanBasis& basis, int n, Point z) { return std::exp(log_lambda(basis, n, z)); }

std::complex<double> kernel(const BergmanBasis& basis, int n, Point z, Point zeta) {
    const ScaledValues a = evaluate_all(basis, n, z), b = evaluate_all(basis, n, zeta);
    std::complex<double> s = 0.0;
    for (std::size_t k = 0; k < a.values.size(); ++k) s += std::conj(b.values[k]) * a.values[k];
    return s * std::exp(a.log_scale + b.log_scale);
}

std::string_view to_string(FieldMeaning m) {
    switch (m) {
        case FieldMeaning::LambdaSqrt: return "lambda_sqrt";
        case FieldMeaning::Lambda: return "lambda";
        case FieldMeaning::LogLambda: return "log_lambda";
    }
    return "lambda_sqrt";
}

FieldMeaning parse_field_meaning(std::string_view s) {
    if (s == "lambda_sqrt") return FieldMeaning::LambdaSqrt;
    if (s == "lambda") return FieldMeaning::Lambda;
    if (s == "log_lambda") return FieldMeaning::LogLambda;
    throw std::invalid_argument("unknown field meaning '" + std::string(s) + "'");
}

double disk_lambda_sqrt(int n, double r) {
    // 1/lambda = (1/pi) sum (k+1) r^(2k); factor out the top power when r > 1
    const double t = r * r;
    double s = 0.0, lg = 0.0;
    if (t <= 1.0) {
        double p = 1.0;
        for (int k = 0; k <= n; ++k, p *= t) s += (k + 1) * p;
    } else {
        double p = 1.0;
        for (int k = n; k >= 0; --k, p /= t) s += (k + 1) * p;
        lg = n * std::log(t);
    }
    const double log_inv = std::log(s) + lg - std::log(std::numbers::pi);
    return std::exp(-0.5 * log_inv);
}

double disk_boundary_level(int n, double radius) {
    return radius * std::sqrt(2.0 * std::numbers::pi / ((n + 1.0) * (n + 2.0)));
}

double ScalarField::max() const { return *std::max_element(values.begin(), values.end()); }
double ScalarField::min() const { return *std::min_element(values.begin(), values.end()); }

double ScalarField::border_max() const {
    double m = -std::numeric_limits<double>::infinity();
    for (int ix = 0; ix < frame.nx; ++ix) m = std::max({m, at(ix, 0), at(ix, frame.ny - 1)});
    for (int iy = 0; iy < frame.ny; ++iy) m = std::max({m, at(0, iy), at(frame.nx - 1, iy)});
    return m;
}

double ScalarField::spacing() const { return std::sqrt(frame.hx() * frame.hy()); }

ScalarField field(const BergmanBasis& basis, int n, const Frame& frame, FieldMeaning meaning, int threads) {
    frame.validate();
    if (n < 0 || n > basis.degree())
        throw RangeError("field degree " + std::to_string(n) + " outside basis 0.." + std::to_string(basis.degree()));
    ScalarField f;
    f.frame = frame;
    f.degree = n;
    f.meaning = meaning;
    f.values.assign(static_cast<std::size_t>(frame.nx) * static_cast<std::size_t>(frame.ny), 0.0);

    const auto rows = [&](int y0, int y1) {
        for (int iy = y0; iy < y1; ++iy)
            for (int ix = 0; ix < frame.nx; ++ix) {
                const double ll = log_lambda(basis, n, frame.cell_center(ix, iy));
                double v = ll;
                if (meaning == FieldMeaning::Lambda) v = std::exp(ll);
                else if (meaning == FieldMeaning::LambdaSqrt) v = std::exp(0.5 * ll);
                f.values[static_cast<std::size_t>(iy) * static_cast<std::size_t>(frame.nx) +
                         static_cast<std::size_t>(ix)] = v;
            }
    };
    int t = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    t = std::min(t, frame.ny);
    if (t <= 1) {
        rows(0, frame.ny);
        return f;
    }
    std::vector<std::thread> pool;
    for (int k = 0; k < t; ++k) pool.emplace_back(rows, frame.ny * k / t, frame.ny * (k + 1) / t);
    for (auto& th : pool) th.join();
    return f;
}

// ---------------------------------------------------------------------------

double Polyline::signed_area() const { return closed ? archi::signed_area(points) : 0.0; }

int ContourSet::count_open() const {
    return static_cast<int>(std::count_if(polylines.begin(), polylines.end(), [](const Polyline& p) { return !p.closed; }));
}

int ContourSet::count_closed() const { return static_cast<int>(polylines.size()) - count_open(); }

std::vector<const Polyline*> ContourSet::outermost() const {
    std::vector<const Polyline*> pos;
    for (const auto& p : polylines)
        if (p.closed && p.signed_area() > 0) pos.push_back(&p);
    std::vector<const Polyline*> out;
    for (const Polyline* p : pos) {
        bool inside = false;
        for (const Polyline* q : pos)
            if (q != p && std::abs(q->signed_area()) > std::abs(p->signed_area()) &&
                point_in_ring(q->points, p->points.front())) {
                inside = true;
                break;
            }
        if (!inside) out.push_back(p);
    }
    return out;
}

ContourSet contours(const ScalarField& f, double level) {
    ContourSet cs;
    cs.level = level;
    const int nx = f.frame.nx, ny = f.frame.ny;
    if (!(level > f.min() && level < f.max())) return cs;

    // edge ids: horizontal (ix,iy)-(ix+1,iy), then vertical (ix,iy)-(ix,iy+1)
    const int nh = (nx - 1) * ny;
    const auto H = [&](int ix, int iy) { return iy * (nx - 1) + ix; };
    const auto V = [&](int ix, int iy) { return nh + iy * nx + ix; };
    const int nedges = nh + nx * (ny - 1);

    std::vector<int> next(static_cast<std::size_t>(nedges), -1), prev(static_cast<std::size_t>(nedges), -1);
    std::vector<Point> where(static_cast<std::size_t>(nedges));

    const auto crossing = [&](int ax, int ay, int bx, int by) {
        const double va = f.at(ax, ay), vb = f.at(bx, by);
        const double t = std::clamp((level - va) / (vb - va), 1e-9, 1.0 - 1e-9);
        const Point pa = f.frame.cell_center(ax, ay), pb = f.frame.cell_center(bx, by);
        return pa + t * (pb - pa);
    };
    const auto link = [&](int from, int to) {
        next[static_cast<std::size_t>(from)] = to;
        prev[static_cast<std::size_t>(to)] = from;
    };

    for (int iy = 0; iy + 1 < ny; ++iy)
        for (int ix = 0; ix + 1 < nx; ++ix) {
            // corners counterclockwise from bottom-left, and the edge after each corner
            const int cx[4] = {ix, ix + 1, ix + 1, ix};
            const int cy[4] = {iy, iy, iy + 1, iy + 1};
            const int edge[4] = {H(ix, iy), V(ix + 1, iy), H(ix, iy + 1), V(ix, iy)};
            bool in[4];
            double sum = 0.0;
            for (int k = 0; k < 4; ++k) {
                const double v = f.at(cx[k], cy[k]);
                in[k] = v > level;
                sum += v;
            }
            // crossings in counterclockwise order, tagged by direction
            int ids[4], n = 0;
            bool leaving[4];
            for (int k = 0; k < 4; ++k) {
                const int k1 = (k + 1) % 4;
                if (in[k] == in[k1]) continue;
                ids[n] = k;
                leaving[n] = in[k];
                ++n;
            }
            if (n == 0) continue;
            for (int q = 0; q < n; ++q) {
                const int k = ids[q], k1 = (k + 1) % 4;
                where[static_cast<std::size_t>(edge[k])] = crossing(cx[k], cy[k], cx[k1], cy[k1]);
            }
            // each segment runs from a leaving crossing to an entering one, high side on the left
            if (n == 2) {
                const int from = leaving[0] ? 0 : 1;
                link(edge[ids[from]], edge[ids[1 - from]]);
            } else {
                const bool center_high = sum / 4.0 > level;
                for (int q = 0; q < 4; ++q) {
                    if (!leaving[q]) continue;
                    const int partner = center_high ? (q + 1) % 4 : (q + 3) % 4;
                    link(edge[ids[q]], edge[ids[partner]]);
                }
            }
        }

    std::vector<char> used(static_cast<std::size_t>(nedges), 0);
    const auto trace = [&](int start, bool closed) {
        Polyline p;
        p.closed = closed;
        int e = start;
        do {
            used[static_cast<std::size_t>(e)] = 1;
            p.points.push_back(where[static_cast<std::size_t>(e)]);
            e = next[static_cast<std::size_t>(e)];
        } while (e >= 0 && e != start);
        cs.polylines.push_back(std::move(p));
    };
    for (int e = 0; e < nedges; ++e)
        if (next[static_cast<std::size_t>(e)] >= 0 && prev[static_cast<std::size_t>(e)] < 0) trace(e, false);
    for (int e = 0; e < nedges; ++e)
        if (next[static_cast<std::size_t>(e)] >= 0 && !used[static_cast<std::size_t>(e)]) trace(e, true);

    std::stable_sort(cs.polylines.begin(), cs.polylines.end(), [](const Polyline& a, const Polyline& b) {
        const double aa = std::abs(a.signed_area()), ab = std::abs(b.signed_area());
        if (aa != ab) return aa > ab;
        return a.closed && !b.closed;
    });
    return cs;
}

// ---------------------------------------------------------------------------

LevelCalibration calibrate_level(int n, double spacing, double radius) {
    if (!(spacing > 0) || !(radius > 0)) throw RangeError("calibration needs positive spacing and radius");
    const double half = radius + 6.0 * spacing;
    const int m = std::max(8, static_cast<int>(std::lround(2.0 * half / spacing)));
    ScalarField f;
    f.frame = Frame{-half, half, -half, half, m, m};
    f.degree = n;
    f.values.resize(static_cast<std::size_t>(m) * static_cast<std::size_t>(m));
    for (int iy = 0; iy < m; ++iy)
        for (int ix = 0; ix < m; ++ix)
            f.values[static_cast<std::size_t>(iy * m + ix)] =
                radius * disk_lambda_sqrt(n, std::abs(f.frame.cell_center(ix, iy)) / radius);

    const auto error = [&](double level) {
        const ContourSet cs = contours(f, level);
        const auto outer = cs.outermost();
        if (outer.empty()) return std::numeric_limits<double>::infinity();
        double s = 0.0;
        for (Point p : outer.front()->points) s += std::abs(std::abs(p) - radius);
        return s / static_cast<double>(outer.front()->points.size());
    };

    const double exact = disk_boundary_level(n, radius);
    double a = 0.25 * exact, b = std::min(3.0 * exact, 0.9 * f.max());
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = error(x1), f2 = error(x2);
    for (int it = 0; it < 48 && b - a > 1e-6 * exact; ++it) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = error(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = error(x2);
        }
    }
    const double best = f1 <= f2 ? x1 : x2;
    return {best / spacing, best, std::min(f1, f2)};
}

// ---------------------------------------------------------------------------

void write_field(std::ostream& os, const ScalarField& f) {
    using text::real17;
    const Frame& fr = f.frame;
    os << "# field v1 xmin=" << real17(fr.xmin) << " xmax=" << real17(fr.xmax) << " ymin=" << real17(fr.ymin)
       << " ymax=" << real17(fr.ymax) << " nx=" << fr.nx << " ny=" << fr.ny << " n=" << f.degree
       << " meaning=" << to_string(f.meaning);
    if (f.level_constant) os << " level_constant=" << real17(*f.level_constant);
    os << "\nx,y,value\n";
    for (int iy = 0; iy < fr.ny; ++iy)
        for (int ix = 0; ix < fr.nx; ++ix) {
            const Point p = fr.cell_center(ix, iy);
            os << real17(p.real()) << ',' << real17(p.imag()) << ',' << real17(f.at(ix, iy)) << '\n';
        }
}

ScalarField read_field(std::istream& is) {
    std::string line;
    int lineno = 1;
    if (!std::getline(is, line) || line.rfind("# ", 0) != 0) throw ParseError("expected '# field v1' header", 1);
    const auto kv = text::header_fields(line.substr(2), "field", lineno);
    ScalarField f;
    f.frame = {0, 0, 0, 0, 0, 0};
    int have = 0;
    for (const auto& [k, v] : kv) {
        if (k == "xmin") f.frame.xmin = text::to_real(v, lineno);
        else if (k == "xmax") f.frame.xmax = text::to_real(v, lineno);
        else if (k == "ymin") f.frame.ymin = text::to_real(v, lineno);
        else if (k == "ymax") f.frame.ymax = text::to_real(v, lineno);
        else if (k == "nx") f.frame.nx = text::to_int(v, lineno);
        else if (k == "ny") f.frame.ny = text::to_int(v, lineno);
        else if (k == "n") f.degree = text::to_int(v, lineno);
        else if (k == "level_constant") f.level_constant = text::to_real(v, lineno);
        else if (k == "meaning") {
            try {
                f.meaning = parse_field_meaning(v);
            } catch (const std::exception& e) {
                throw ParseError(e.what(), lineno);
            }
        } else throw ParseError("unknown header field '" + k + "'", lineno);
        if (k != "level_constant") ++have;
    }
    if (have != 8) throw ParseError("field header incomplete", lineno);
    try {
        f.frame.validate();
    } catch (const GeometryError& e) {
        throw ParseError(e.what(), lineno);
    }
    ++lineno;
    if (!std::getline(is, line) || line.rfind("x,y,value", 0) != 0) throw ParseError("expected 'x,y,value'", lineno);
    const std::size_t want = static_cast<std::size_t>(f.frame.nx) * static_cast<std::size_t>(f.frame.ny);
    f.values.reserve(want);
    while (std::getline(is, line)) {
        ++lineno;
        if (text::blank(line)) continue;
        const auto c1 = line.find(','), c2 = line.find(',', c1 == std::string::npos ? c1 : c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos) throw ParseError("expected 'x,y,value'", lineno);
        if (f.values.size() == want) throw ParseError("more values than nx*ny", lineno);
        f.values.push_back(text::to_real(line.substr(c2 + 1), lineno));
    }
    if (f.values.size() != want) throw ParseError("field has fewer values than nx*ny", lineno + 1);
    return f;
}

void write_contours(std::ostream& os, const ContourSet& c) {
    os << "curve_id,seq,x,y,closed\n";
    for (std::size_t id = 0; id < c.polylines.size(); ++id) {
        const auto& p = c.polylines[id];
        for (std::size_t s = 0; s < p.points.size(); ++s)
            os << id << ',' << s << ',' << text::real17(p.points[s].real()) << ','
               << text::real17(p.points[s].imag()) << ',' << (p.closed ? 1 : 0) << '\n';
    }
}

void write_svg(std::ostream& os, const Frame& frame, std::span<const SvgLayer> layers, std::span<const Point> zeros,
               const std::string& title) {
    using text::real17;
    const double w = frame.xmax - frame.xmin, h = frame.ymax - frame.ymin;
    const double px = 800.0, py = px * h / w;
    const double stroke = 0.0015 * std::max(w, h);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px << "\" height=\"" << py << "\" viewBox=\""
       << real17(frame.xmin) << ' ' << real17(-frame.ymax) << ' ' << real17(w) << ' ' << real17(h) << "\">\n";
    if (!title.empty()) os << "<title>" << title << "</title>\n";
    os << "<g transform=\"scale(1,-1)\">\n";
    os << "<rect x=\"" << real17(frame.xmin) << "\" y=\"" << real17(frame.ymin) << "\" width=\"" << real17(w)
       << "\" height=\"" << real17(h) << "\" fill=\"white\" stroke=\"#888\" stroke-width=\"" << stroke << "\"/>\n";
    for (const auto& layer : layers) {
        if (!layer.contours) continue;
        for (const auto& p : layer.contours->polylines) {
            if (p.points.empty()) continue;
            os << "<path data-level=\"" << real17(layer.contours->level) << "\" data-closed=\"" << (p.closed ? 1 : 0)
               << "\" fill=\"none\" stroke=\"" << layer.stroke << "\" stroke-width=\"" << stroke << "\" d=\"M";
            for (std::size_t k = 0; k < p.points.size(); ++k)
                os << (k ? " L" : "") << real17(p.points[k].real()) << ' ' << real17(p.points[k].imag());
            if (p.closed) os << " Z";
            os << "\"/>\n";
        }
    }
    for (Point z : zeros)
        os << "<circle cx=\"" << real17(z.real()) << "\" cy=\"" << real17(z.imag()) << "\" r=\"" << 2.5 * stroke
           << "\" fill=\"#c0392b\"/>\n";
    os << "</g>\n</svg>\n";
}

}  // namespace archi
