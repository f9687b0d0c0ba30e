#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "archi/errors.hpp"
#include "archi/geometry.hpp"
#include "text_util.hpp"

namespace archi {

namespace {

std::vector<double> numbers(std::istringstream& ls, int lineno) {
    std::vector<double> v;
    std::string tok;
    while (ls >> tok) {
        if (tok[0] == '#') break;
        v.push_back(text::to_real(tok, lineno));
    }
    return v;
}

void need(const std::vector<double>& v, std::size_t n, const std::string& what, int lineno) {
    if (v.size() != n)
        throw ParseError(what + " takes " + std::to_string(n) + " numbers, got " + std::to_string(v.size()), lineno);
}

}  // namespace

Scene read_scene(std::istream& is) {
    std::vector<Region> islands, lakes;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (text::blank(line)) continue;
        std::istringstream ls(line);
        std::string role, kind;
        ls >> role >> kind;
        if (role != "island" && role != "lake") throw ParseError("expected 'island' or 'lake', got '" + role + "'", lineno);
        auto& out = role == "island" ? islands : lakes;
        const std::vector<double> v = numbers(ls, lineno);
        try {
            if (kind == "disk") {
                need(v, 3, "disk", lineno);
                out.push_back(Region::disk({v[0], v[1]}, v[2]));
            } else if (kind == "ellipse") {
                need(v, 4, "ellipse", lineno);
                if (!(v[2] > 0 && v[3] > 0)) throw GeometryError("ellipse semi-axes must be positive");
                out.push_back(Region::jordan(EllipseCurve{{v[0], v[1]}, v[2], v[3]}));
            } else if (kind == "polygon") {
                if (v.size() < 6 || v.size() % 2 != 0)
                    throw ParseError("polygon needs at least three x y pairs", lineno);
                std::vector<Point> pts;
                for (std::size_t k = 0; k < v.size(); k += 2) pts.push_back(checked_point(v[k], v[k + 1]));
                out.push_back(Region::polygon(std::move(pts)));
            } else if (kind == "lemniscate") {
                if (v.size() != 2 && v.size() != 3) throw ParseError("lemniscate takes m r [lobe]", lineno);
                const double mr = v[0];
                if (mr != static_cast<int>(mr) || mr < 1) throw ParseError("lemniscate m must be a positive integer", lineno);
                const int m = static_cast<int>(mr);
                if (!(v[1] > 0 && v[1] < 1)) throw GeometryError("lemniscate needs 0 < r < 1");
                if (v.size() == 3) {
                    const int k = static_cast<int>(v[2]);
                    if (k != v[2] || k < 0 || k >= m) throw ParseError("lemniscate lobe out of range", lineno);
                    out.push_back(Region::jordan(LemniscateLobe{m, v[1], k}));
                } else {
                    for (int k = 0; k < m; ++k) out.push_back(Region::jordan(LemniscateLobe{m, v[1], k}));
                }
            } else {
                throw ParseError("unknown primitive '" + kind + "'", lineno);
            }
        } catch (const GeometryError& e) {
            throw ParseError(e.what(), lineno);
        }
    }
    if (islands.empty()) throw ParseError("scene has no island", lineno);
    return Scene(std::move(islands), std::move(lakes));
}

Scene read_scene_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open scene file '" + path + "'");
    return read_scene(in);
}

void write_scene(std::ostream& os, const Scene& scene) {
    const auto put = [&](const char* role, const Region& r) {
        os << role << ' ';
        std::visit(
            [&](const auto& s) {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, Disk>) {
                    os << "disk " << text::real17(s.center.real()) << ' ' << text::real17(s.center.imag()) << ' '
                       << text::real17(s.radius);
                } else if constexpr (std::is_same_v<T, Polygon>) {
                    os << "polygon";
                    for (Point p : s.vertices()) os << ' ' << text::real17(p.real()) << ' ' << text::real17(p.imag());
                } else {
                    std::visit(
                        [&](const auto& c) {
                            using C = std::decay_t<decltype(c)>;
                            if constexpr (std::is_same_v<C, CircleCurve>) {
                                os << "disk " << text::real17(c.center.real()) << ' ' << text::real17(c.center.imag())
                                   << ' ' << text::real17(c.radius);
                            } else if constexpr (std::is_same_v<C, EllipseCurve>) {
                                os << "ellipse " << text::real17(c.center.real()) << ' '
                                   << text::real17(c.center.imag()) << ' ' << text::real17(c.semi_x) << ' '
                                   << text::real17(c.semi_y);
                            } else if constexpr (std::is_same_v<C, LemniscateLobe>) {
                                os << "lemniscate " << c.m << ' ' << text::real17(c.r) << ' ' << c.lobe;
                            } else {
                                throw GeometryError("a custom curve has no text form");
                            }
                        },
                        s.curve());
                }
            },
            r.shape());
        os << '\n';
    };
    for (const Region& r : scene.islands()) put("island", r);
    for (const Region& r : scene.lakes()) put("lake", r);
}

}  // namespace archi
