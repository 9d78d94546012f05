#pragma once

#include <vector>

#include "tflow/metric.hpp"

namespace tflow {

// Rotationally symmetric translator profile obtained by 1-D shooting.
struct RadialSolution {
    double lambda = 0.0;
    std::vector<double> r;  // sample radii, ascending
    std::vector<double> w;  // profile, normalized to zero metric mean over the disk
    std::vector<double> q;  // w'(r)
};

// Solves the radial reduction of the translator equation on a disk of radius
// R with constant boundary data D_nu w = a (nu inward): find lambda such that
// the solution of
//     q' = (1 + q^2) (lambda - q f'(r)/f(r)),   q(0) = 0
// satisfies q(R) = -a. Shooting uses fixed-step RK4 with `samples` steps and
// bisection on lambda to 1e-10. Requires a rotationally symmetric family.
RadialSolution radial_oracle(double a, const MetricDescriptor& metric, double R,
                             int samples = 10000);

} // namespace tflow
