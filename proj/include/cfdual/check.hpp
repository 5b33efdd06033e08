#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace cfdual {

/// Worst residual of one named check over a sample set, with the point
/// attaining it. NaN residuals count as infinite.
struct ResidualCheck {
    std::string name;
    bool pass = true;
    double worst = 0.0;
    std::vector<double> worst_point;
    std::size_t evaluated = 0;
    double tolerance = 0.0;

    explicit ResidualCheck(std::string n = {}) : name(std::move(n)) {}

    void record(double r, std::span<const double> p)
    {
        ++evaluated;
        if (std::isnan(r)) r = std::numeric_limits<double>::infinity();
        if (worst_point.empty() || r > worst) {
            worst = r;
            worst_point.assign(p.begin(), p.end());
        }
    }
    void finish(double tol)
    {
        tolerance = tol;
        pass = !(worst > tol);
    }
};

} // namespace cfdual
