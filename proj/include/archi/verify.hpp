#pragma once

// Named oracle suites.  Every check carries a measured value, a threshold and
// the comparison that decides PASS, so reports can be written without
// re-deriving anything.

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "archi/bergman.hpp"
#include "archi/geometry.hpp"

namespace archi {

struct Check {
    enum class Cmp { Below, AtMost, Above, Equal };

    std::string name;
    /// short description of the property being measured
    std::string ref;
    double value = 0.0;
    double threshold = 0.0;
    Cmp cmp = Cmp::Below;
    bool pass = false;
    std::string note;

    static Check make(std::string name, std::string ref, double value, double threshold, Cmp cmp = Cmp::Below,
                      std::string note = "");
};

struct VerifyOptions {
    /// 0 gives the suite's own degree
    int n = 0;
    /// Multi gives the suite's own precision for mp-only suites
    Precision precision = Precision::DoubleDouble;
    int threads = 0;
};

/// disk-annulus, kernel, lemniscate, exterior
std::vector<std::string> list_suites();

/// Throws RangeError for an unknown suite name.
std::vector<Check> verify_suite(const std::string& suite, const VerifyOptions& options = {});

/// CSV check,paper_ref,value,threshold,pass
void write_report_csv(std::ostream& os, std::span<const Check> checks);

/// One line per check: PASS/FAIL name value threshold.
void write_report_text(std::ostream& os, std::span<const Check> checks);

/// Points where lambda_n(G*, z) > lambda_n(G, z) (1 + slack) for any n in ns.
int comparison_violations(const BergmanBasis& star, const BergmanBasis& g, std::span<const Point> points,
                          std::span<const int> ns, double slack = 1e-12);

/// Largest distance from the zeros of p_k (k in ks) to the convex hull.
double zero_hull_excess(const BergmanBasis& basis, std::span<const int> ks, std::span<const Point> hull);

/// n uniform points in the box, fixed seed.
std::vector<Point> random_points(int n, double xmin, double xmax, double ymin, double ymax, unsigned seed);

}  // namespace archi
