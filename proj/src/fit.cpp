// fit.cpp — weighted nonlinear least squares, information criteria and frequency seeding

#include "sqsim/fit.hpp"

#include <cmath>
#include <complex>
#include <limits>

#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include <boost/math/special_functions/erf.hpp>

#include "sqsim/common.hpp"

namespace sqsim::fit {

int FitResult::index(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return static_cast<int>(i);
    throw Error(ErrorCode::invalid_params, "unknown fit parameter " + name);
}

double FitResult::value(const std::string& name) const { return params(index(name)); }
double FitResult::error(const std::string& name) const { return stderr_(index(name)); }

std::pair<double, double> FitResult::ci(const std::string& name, double level) const {
    double z = std::sqrt(2.0) * boost::math::erf_inv(level);
    double v = value(name), e = error(name);
    return {v - z * e, v + z * e};
}

namespace {

struct Functor {
    using Scalar = double;
    using InputType = Eigen::VectorXd;
    using ValueType = Eigen::VectorXd;
    using JacobianType = Eigen::MatrixXd;
    enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

    const Model* f;
    const std::vector<double>* x;
    const std::vector<double>* y;
    std::vector<double> w;
    int k;

    int inputs() const { return k; }
    int values() const { return static_cast<int>(x->size()); }

    int operator()(const Eigen::VectorXd& p, Eigen::VectorXd& r) const {
        for (std::size_t i = 0; i < x->size(); ++i)
            r(static_cast<Eigen::Index>(i)) = ((*f)((*x)[i], p) - (*y)[i]) * w[i];
        return 0;
    }
};

} // namespace

FitResult least_squares(const Model& f, const std::vector<double>& x, const std::vector<double>& y,
                        const std::vector<double>& sigma, const Params& p0,
                        const std::vector<std::string>& names, int max_evals) {
    const int n = static_cast<int>(x.size());
    const int k = static_cast<int>(p0.size());
    if (y.size() != x.size() || (!sigma.empty() && sigma.size() != x.size()))
        throw Error(ErrorCode::invalid_params, "fit: size mismatch");
    if (static_cast<int>(names.size()) != k) throw Error(ErrorCode::invalid_params, "fit: names/params mismatch");
    if (n <= k) throw Error(ErrorCode::fit_failure, "fit: fewer points than parameters");

    Functor fn{&f, &x, &y, std::vector<double>(x.size(), 1.0), k};
    if (!sigma.empty()) {
        double floor = 0.0;
        for (double s : sigma) floor = std::max(floor, s);
        floor = floor > 0 ? 1e-3 * floor : 1.0;
        for (std::size_t i = 0; i < sigma.size(); ++i) fn.w[i] = 1.0 / std::max(sigma[i], floor);
    }

    Eigen::NumericalDiff<Functor> nd(fn);
    Eigen::LevenbergMarquardt<Eigen::NumericalDiff<Functor>> lm(nd);
    lm.parameters.maxfev = max_evals;
    lm.parameters.xtol = 1e-12;
    lm.parameters.ftol = 1e-12;
    Eigen::VectorXd p = p0;
    auto status = lm.minimize(p);

    bool ok = status == Eigen::LevenbergMarquardtSpace::RelativeReductionTooSmall ||
              status == Eigen::LevenbergMarquardtSpace::RelativeErrorTooSmall ||
              status == Eigen::LevenbergMarquardtSpace::RelativeErrorAndReductionTooSmall ||
              status == Eigen::LevenbergMarquardtSpace::CosinusTooSmall ||
              status == Eigen::LevenbergMarquardtSpace::FtolTooSmall ||
              status == Eigen::LevenbergMarquardtSpace::XtolTooSmall ||
              status == Eigen::LevenbergMarquardtSpace::GtolTooSmall;
    if (!ok || !p.allFinite())
        throw Error(ErrorCode::fit_failure, "fit: Levenberg-Marquardt status " + std::to_string(int(status)));

    FitResult out;
    out.names = names;
    out.params = p;
    out.n = n;
    out.k = k;
    out.iterations = static_cast<int>(lm.nfev);

    Eigen::VectorXd r(n);
    fn(p, r);
    out.rss = r.squaredNorm();
    out.red_chi2 = out.rss / (n - k);
    out.residuals.assign(r.data(), r.data() + n);
    out.aicc = aicc(out.rss, n, k);

    Eigen::MatrixXd J(n, k);
    nd.df(p, J);
    Eigen::MatrixXd JtJ = J.transpose() * J;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(JtJ);
    if (!lu.isInvertible()) {
        out.cov = Eigen::MatrixXd::Constant(k, k, std::numeric_limits<double>::infinity());
    } else {
        out.cov = lu.inverse() * out.red_chi2;
    }
    out.stderr_ = out.cov.diagonal().cwiseAbs().cwiseSqrt();
    return out;
}

double aicc(double rss, int n, int k) {
    double r = std::max(rss, 1e-300);
    double base = n * std::log(r / n) + 2.0 * k;
    if (n - k - 1 <= 0) return std::numeric_limits<double>::infinity();
    return base + 2.0 * k * (k + 1.0) / (n - k - 1.0);
}

double dft_peak_frequency(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 4 || y.size() != n) throw Error(ErrorCode::invalid_params, "dft: need >= 4 samples");
    const double dx = (x.back() - x.front()) / double(n - 1);
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= double(n);
    // zero-padded DFT on a fine grid of bins
    const std::size_t pad = 8;
    const std::size_t m = n * pad;
    std::vector<double> pw(m / 2);
    for (std::size_t kb = 1; kb < m / 2; ++kb) {
        std::complex<double> acc{0.0, 0.0};
        double w = kTwoPi * double(kb) / double(m);
        for (std::size_t i = 0; i < n; ++i) acc += (y[i] - mean) * std::polar(1.0, -w * double(i));
        pw[kb] = std::norm(acc);
    }
    std::size_t best = 1;
    for (std::size_t kb = 2; kb < m / 2; ++kb)
        if (pw[kb] > pw[best]) best = kb;
    double shift = 0.0;
    if (best > 1 && best + 1 < m / 2) {
        double a = pw[best - 1], b = pw[best], c = pw[best + 1];
        double den = a - 2 * b + c;
        if (den != 0.0) shift = 0.5 * (a - c) / den;
    }
    return kTwoPi * (double(best) + shift) / (double(m) * dx);
}

} // namespace sqsim::fit
