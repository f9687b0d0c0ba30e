#pragma once

// Shared helpers for the line-oriented text formats.

#include <iomanip>
#include <map>
#include <sstream>
#include <string>

#include "archi/errors.hpp"
#include "archi/geometry.hpp"

namespace archi::text {

/// Splits "<magic> v1 key=value ..." into its fields.
inline std::map<std::string, std::string> header_fields(const std::string& line, const std::string& magic,
                                                        int lineno) {
    std::istringstream hs(line);
    std::string m, version, tok;
    hs >> m >> version;
    if (m != magic || version != "v1") throw ParseError("expected '" + magic + " v1' header", lineno);
    std::map<std::string, std::string> out;
    while (hs >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos || eq == 0) throw ParseError("malformed header field '" + tok + "'", lineno);
        if (!out.emplace(tok.substr(0, eq), tok.substr(eq + 1)).second)
            throw ParseError("repeated header field '" + tok + "'", lineno);
    }
    return out;
}

inline double to_real(const std::string& s, int lineno) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw ParseError("malformed number '" + s + "'", lineno);
}

inline int to_int(const std::string& s, int lineno) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(s, &used);
        if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw ParseError("malformed integer '" + s + "'", lineno);
}

/// "re,im"
inline Point to_point(const std::string& s, int lineno) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) throw ParseError("expected 're,im', got '" + s + "'", lineno);
    return {to_real(s.substr(0, comma), lineno), to_real(s.substr(comma + 1), lineno)};
}

inline bool blank(const std::string& line) {
    const auto p = line.find_first_not_of(" \t\r");
    return p == std::string::npos || line[p] == '#';
}

inline std::string real17(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

}  // namespace archi::text
