// fit.hpp — weighted nonlinear least squares, information criteria and frequency seeding

#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sqsim::fit {

using Params = Eigen::VectorXd;
using Model = std::function<double(double x, const Params& p)>;

struct FitResult {
    std::vector<std::string> names;
    Params params;
    Params stderr_;
    Eigen::MatrixXd cov;
    double rss{0.0};        // weighted residual sum of squares
    double red_chi2{0.0};
    double aicc{0.0};
    int n{0};
    int k{0};
    int iterations{0};
    std::vector<double> residuals;

    int index(const std::string& name) const;
    double value(const std::string& name) const;
    double error(const std::string& name) const;
    // symmetric normal interval at the given two-sided level
    std::pair<double, double> ci(const std::string& name, double level = 0.95) const;
};

// Levenberg-Marquardt; sigma empty means unit weights; covariance scaled by reduced chi2.
// Throws fit_failure when the solver does not converge or returns non-finite parameters.
FitResult least_squares(const Model& f, const std::vector<double>& x, const std::vector<double>& y,
                        const std::vector<double>& sigma, const Params& p0,
                        const std::vector<std::string>& names, int max_evals = 4000);

// corrected Akaike information criterion for Gaussian residuals
double aicc(double rss, int n, int k);

// angular frequency of the largest non-DC DFT bin of a uniformly sampled record, refined
// by parabolic interpolation; x in any unit, result in rad per that unit
double dft_peak_frequency(const std::vector<double>& x, const std::vector<double>& y);

} // namespace sqsim::fit
