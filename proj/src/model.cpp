#include "fluctuate/model.hpp"

#include "fluctuate/errors.hpp"

#include <cmath>
#include <vector>

namespace fluctuate {

namespace {

void throw_if_any(std::vector<std::string>& violations, const char* what) {
    if (violations.empty()) return;
    std::string msg(what);
    msg += ":";
    for (const auto& v : violations) {
        msg += " ";
        msg += v;
        msg += ";";
    }
    throw validation_error(msg);
}

} // namespace

void validate(const ModelParams& p) {
    std::vector<std::string> v;
    if (!std::isfinite(p.alpha) || p.alpha <= 0.0) v.push_back("alpha must be positive");
    if (!std::isfinite(p.beta) || p.beta < 0.0) v.push_back("beta must be nonnegative");
    if (!std::isfinite(p.nu) || p.nu < 0.0) v.push_back("nu must be nonnegative");
    if (!std::isfinite(p.delta) || p.delta <= 0.0) v.push_back("delta must be positive");
    if (!std::isfinite(p.N) || p.N < 1.0) v.push_back("N must be >= 1");
    if (!std::isfinite(p.N0) || p.N0 < 1.0) v.push_back("N0 must be >= 1");
    if (p.N < p.N0) v.push_back("N must be >= N0");
    if (std::isfinite(p.alpha) && std::isfinite(p.beta) && p.alpha - p.beta <= 0.0) {
        v.push_back("lambda must be positive (alpha > beta, supercritical clones)");
    }
    throw_if_any(v, "invalid model parameters");
}

void validate(const LpsmParams& p) {
    std::vector<std::string> v;
    if (!std::isfinite(p.gamma) || p.gamma <= 0.0) v.push_back("gamma must be positive");
    if (!std::isfinite(p.theta) || p.theta < 0.0) v.push_back("theta must be nonnegative");
    if (!std::isfinite(p.q) || p.q < 0.0 || p.q >= 1.0) v.push_back("q must be in [0,1)");
    throw_if_any(v, "invalid LPSM parameters");
}

DerivedQuantities derive(const ModelParams& p) {
    validate(p);
    DerivedQuantities d{};
    d.lambda = p.alpha - p.beta;
    d.gamma = p.delta / d.lambda;
    d.mu = p.nu / p.alpha;
    d.q = p.beta / p.alpha;
    d.theta = p.N * d.mu;
    d.phi = 1.0 - 1.0 / p.N;
    d.tau = std::log(p.N) / p.delta;
    d.m = p.nu * (p.N - p.N0) / p.delta;
    return d;
}

XiY xi_of_z(double z, double q) {
    if (!(z < 1.0)) throw validation_error("xi_of_z: requires z < 1");
    if (!(q < 1.0) || q < 0.0) throw validation_error("xi_of_z: requires q in [0,1)");
    XiY r{};
    r.xi = (q - z) / (1.0 - z);
    r.y = (z - q) / (1.0 - q);
    return r;
}

} // namespace fluctuate
