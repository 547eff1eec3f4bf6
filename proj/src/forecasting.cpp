#include "vgrowth/forecasting.hpp"

#include <cmath>

#include "vgrowth/error.hpp"

namespace vgrowth {

ForecastBand forecast(const FitResult& fit, const VarianceEstimate& variance, std::span<const double> horizons,
                      double c) {
    if (!(c >= 0.0)) throw Error(ErrorCode::NegativeC, "band multiplier c must be non-negative");
    if (variance.matrix.rows() != 2 || variance.matrix.cols() != 2) {
        throw Error(ErrorCode::InvalidArgument, "forecast needs a 2x2 (alpha, beta) covariance");
    }
    const Eigen::Matrix2d sigma = variance.matrix;
    ForecastBand band{c, {}};
    band.points.reserve(horizons.size());
    for (double t : horizons) {
        const Eigen::Vector2d design(1.0, t);
        const double v = std::fmax(0.0, design.dot(sigma * design));
        const double sd = std::sqrt(v);
        const double eta = fit.params.alpha + fit.params.beta * t;
        const double point = logistic(eta);
        const double lower = c == 0.0 ? point : logistic(eta - c * sd);
        const double upper = c == 0.0 ? point : logistic(eta + c * sd);
        band.points.push_back({t, point, std::fmin(lower, point), std::fmax(upper, point), sd});
    }
    return band;
}

}  // namespace vgrowth
