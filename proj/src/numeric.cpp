#include "archi/numeric.hpp"

namespace archi {

std::string_view to_string(Precision p) {
    switch (p) {
        case Precision::Double: return "double";
        case Precision::DoubleDouble: return "dd";
        case Precision::Multi: return "mp";
    }
    return "double";
}

Precision parse_precision(std::string_view s) {
    if (s == "double") return Precision::Double;
    if (s == "dd" || s == "extended") return Precision::DoubleDouble;
    if (s == "mp") return Precision::Multi;
    throw std::invalid_argument("unknown precision '" + std::string(s) + "' (double, dd, mp)");
}

#ifndef ARCHI_VERSION
#define ARCHI_VERSION "0.0.0"
#endif

std::string_view library_version() { return ARCHI_VERSION; }

int output_digits(Precision p) {
    switch (p) {
        case Precision::Double: return 17;
        case Precision::DoubleDouble: return 36;
        case Precision::Multi: return std::numeric_limits<MpReal>::max_digits10;
    }
    return 17;
}

}  // namespace archi
