// common.hpp — shared scalar types, constants and the error type

#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace sqsim {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr cd kI{0.0, 1.0};

enum class ErrorCode {
    invalid_params,
    invalid_truncation,
    invalid_operator,
    invalid_regime,
    invalid_grid,
    invalid_rates,
    numeric_failure,
    quadrature_failure,
    fit_failure,
    compile_error,
    statistics_error,
    insufficient_window,
    singularity,
    config_error,
};

const char* to_string(ErrorCode c);

struct Error : std::runtime_error {
    ErrorCode code;
    Error(ErrorCode c, const std::string& msg)
        : std::runtime_error(std::string(to_string(c)) + ": " + msg), code(c) {}
};

// true for errors that mean "the numbers went wrong" rather than "bad input"
bool is_numeric(ErrorCode c);

namespace units {
constexpr double h = 6.62607015e-34;  // J s
constexpr double hbar = h / kTwoPi;
constexpr double kB = 1.380649e-23;   // J/K

// cycles/ns <-> rad/ns
constexpr double ghz_to_rad(double f_ghz) { return kTwoPi * f_ghz; }
constexpr double mhz_to_rad(double f_mhz) { return kTwoPi * f_mhz * 1e-3; }
constexpr double rad_to_ghz(double w) { return w / kTwoPi; }
constexpr double rad_to_mhz(double w) { return w / kTwoPi * 1e3; }
// hbar*omega/kB in kelvin for omega in rad/ns
constexpr double rad_ns_to_kelvin(double w) { return hbar * w * 1e9 / kB; }
} // namespace units

} // namespace sqsim
