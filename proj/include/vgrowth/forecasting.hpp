#pragma once

#include <span>
#include <vector>

#include "vgrowth/estimation.hpp"
#include "vgrowth/robust_inference.hpp"

namespace vgrowth {

struct ForecastPoint {
    double t;
    double point;
    double lower;
    double upper;
    double predictor_sd;  // sqrt((1, t) Sigma (1, t)')
};

struct ForecastBand {
    double c;
    std::vector<ForecastPoint> points;
};

// Point forecasts logistic(alpha + beta t) at absolute times `horizons`, with
// the band obtained by moving the linear predictor by -+ c standard deviations
// before applying the logistic map. Throws NegativeC.
ForecastBand forecast(const FitResult& fit, const VarianceEstimate& variance, std::span<const double> horizons,
                      double c);

}  // namespace vgrowth
