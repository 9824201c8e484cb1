#pragma once

#include "polyham/radial.hpp"

#include <functional>
#include <string>
#include <vector>

namespace polyham::check {

// The analytic operations under test; replaceable for fault injection.
struct RadialOps {
    std::function<radial::OperatorMatrix(const radial::RadialBasis&)> r2;
    std::function<radial::OperatorMatrix(const radial::RadialBasis&)> inv_r2;
    std::function<radial::OperatorMatrix(const radial::RadialBasis&)> d2dr2;
    std::function<radial::OperatorMatrix(const radial::RadialBasis&, radial::Shift)> r;
    std::function<radial::OperatorMatrix(const radial::RadialBasis&, radial::Shift)> inv_r;
    std::function<radial::OperatorMatrix(const radial::RadialBasis&, radial::Shift)> ddr;

    static RadialOps analytic();
};

struct Item {
    std::string name;
    bool passed;
    double worst;      // largest error measured
    double tolerance;
};

struct Options {
    std::vector<double> lambdas{1.2, 2.5, 7.0, 57.0};
    int n = 20;
    double tolerance = 1e-9;
};

std::vector<Item> run_battery(const Options& options = {}, const RadialOps& ops = RadialOps::analytic());

}  // namespace polyham::check
