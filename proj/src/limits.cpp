#include "fluctuate/limits.hpp"

#include "fluctuate/errors.hpp"
#include "fluctuate/lpsm.hpp"
#include "fluctuate/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fluctuate::limits {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double csc_pi_half(double gamma) {
    return 1.0 / specfun::sin_pi(gamma / 2.0);
}

} // namespace

GammaRegime classify_gamma(double gamma, double tol) {
    if (std::abs(gamma - 1.0) <= tol) return GammaRegime::EqualOne;
    if (std::abs(gamma - 2.0) <= tol) return GammaRegime::EqualTwo;
    if (gamma < 1.0) return GammaRegime::Below1;
    if (gamma < 2.0) return GammaRegime::Between1And2;
    return GammaRegime::Above2;
}

StableParams stable_params(double gamma) {
    if (!(gamma > 0.0)) throw validation_error("stable_params: gamma must be positive");
    const GammaRegime reg = classify_gamma(gamma);
    StableParams s{};
    s.mu = 0.0;
    switch (reg) {
        case GammaRegime::EqualOne:
            s.alpha = 1.0;
            s.sigma = M_PI / 2.0; // Landau distribution
            s.beta = 1.0;
            break;
        case GammaRegime::Below1:
        case GammaRegime::Between1And2:
            s.alpha = gamma;
            s.sigma = std::pow(M_PI * gamma / 2.0 * csc_pi_half(gamma), 1.0 / gamma);
            s.beta = 1.0;
            break;
        case GammaRegime::EqualTwo:
        case GammaRegime::Above2:
            s.alpha = 2.0;
            s.sigma = 1.0 / std::sqrt(2.0);
            s.beta = 0.0;
            break;
    }
    return s;
}

LimitLaw large_theta_law(double gamma, double q, double theta) {
    if (!(gamma > 0.0)) throw validation_error("large_theta_law: gamma must be positive");
    if (!(q >= 0.0 && q < 1.0)) throw validation_error("large_theta_law: q must be in [0,1)");
    if (!(theta > 1.0)) throw validation_error("large_theta_law: requires theta > 1 (log theta positive)");

    LimitLaw law{};
    law.family = Family::LargeTheta;
    law.regime = classify_gamma(gamma);
    law.gamma = gamma;
    law.q = q;
    const StableParams st = stable_params(gamma);
    law.stable_alpha = st.alpha;
    law.stable_sigma = st.sigma;
    law.stable_beta = st.beta;
    law.stable_mu = st.mu;

    switch (law.regime) {
        case GammaRegime::Below1:
        case GammaRegime::Between1And2: {
            law.scale_a = std::pow(theta, 1.0 / gamma) / (1.0 - q);
            law.shift_b = std::pow(theta, 1.0 - 1.0 / gamma) / (gamma - 1.0);
            const double coeff = -M_PI / specfun::sin_pi(gamma);
            law.exponent = [coeff, gamma](double s) { return coeff * std::pow(s, gamma); };
            law.mean = (law.regime == GammaRegime::Below1) ? kInf : 0.0;
            law.variance = kInf;
            break;
        }
        case GammaRegime::EqualOne:
            law.scale_a = theta / (1.0 - q);
            law.shift_b = std::log(theta);
            law.exponent = [](double s) { return s * std::log(s); };
            law.mean = kInf;
            law.variance = kInf;
            break;
        case GammaRegime::EqualTwo:
            law.scale_a = std::sqrt(theta * std::log(theta)) / (1.0 - q);
            law.shift_b = std::sqrt(theta / std::log(theta));
            law.exponent = [](double s) { return 0.5 * s * s; };
            law.mean = 0.0;
            law.variance = 1.0;
            break;
        case GammaRegime::Above2:
            law.scale_a = std::sqrt(theta / ((gamma - 1.0) * (1.0 - q)));
            law.shift_b = std::sqrt(theta / ((1.0 - q) * (gamma - 1.0)));
            law.exponent = [](double s) { return 0.5 * s * s; };
            law.mean = 0.0;
            law.variance = 1.0;
            break;
    }
    return law;
}

LimitLaw large_N_law(const ModelParams& p) {
    const DerivedQuantities d = derive(p);
    if (!(d.mu > 0.0)) throw validation_error("large_N_law: requires mu > 0");
    const double gamma = d.gamma;
    const double q = d.q;
    const double mu = d.mu;
    const double N = p.N;

    LimitLaw law{};
    law.family = Family::LargeNFixedMu;
    law.regime = classify_gamma(gamma);
    law.gamma = gamma;
    law.q = q;
    const StableParams st = stable_params(gamma);
    law.stable_alpha = st.alpha;
    law.stable_sigma = st.sigma;
    law.stable_beta = st.beta;
    law.stable_mu = st.mu;

    switch (law.regime) {
        case GammaRegime::Above2: {
            law.scale_a = std::sqrt(N) / (1.0 - q);
            law.shift_b = mu / (gamma - 1.0) * std::sqrt(N);
            const double v = mu * (gamma - q * (gamma - 2.0)) / ((gamma - 2.0) * (gamma - 1.0));
            law.exponent = [v](double s) { return 0.5 * v * s * s; };
            law.mean = 0.0;
            law.variance = v;
            break;
        }
        case GammaRegime::EqualTwo:
            law.scale_a = std::sqrt(N * std::log(N)) / (1.0 - q);
            law.shift_b = mu * std::sqrt(N / std::log(N));
            law.exponent = [mu](double s) { return 0.5 * mu * s * s; };
            law.mean = 0.0;
            law.variance = mu;
            break;
        case GammaRegime::Between1And2:
            law.scale_a = std::pow(N, 1.0 / gamma) / (1.0 - q);
            law.shift_b = mu / (gamma - 1.0) * (std::pow(N, 1.0 - 1.0 / gamma) - 1.0);
            law.exponent = [mu, gamma](double s) {
                return mu / (2.0 - gamma) * s * s * specfun::hyp2f1(1.0, 2.0 - gamma, 3.0 - gamma, -s);
            };
            law.mean = 0.0;
            law.variance = 2.0 * mu / (2.0 - gamma);
            break;
        case GammaRegime::EqualOne:
            law.scale_a = N / (1.0 - q);
            law.shift_b = mu * (1.0 + std::log(N));
            law.exponent = [mu](double s) { return mu * s * (1.0 + std::log1p(s)); };
            law.mean = mu;
            law.variance = 2.0 * mu;
            break;
        case GammaRegime::Below1:
            law.scale_a = std::pow(N, 1.0 / gamma) / (1.0 - q);
            law.shift_b = 0.0;
            law.exponent = [mu, gamma](double s) {
                return mu / (gamma - 1.0) * s * specfun::hyp2f1(1.0, 1.0 - gamma, 2.0 - gamma, -s);
            };
            law.mean = mu / (gamma - 1.0);
            law.variance = 2.0 * mu / (2.0 - gamma);
            break;
    }
    return law;
}

ConvergenceReport verify_limit_convergence(const LpsmParams& p,
                                           std::span<const double> theta_sequence,
                                           std::span<const double> s_grid) {
    validate(p);
    if (theta_sequence.empty() || s_grid.empty()) {
        throw validation_error("verify_limit_convergence: empty theta sequence or s grid");
    }
    for (std::size_t i = 1; i < theta_sequence.size(); ++i) {
        if (theta_sequence[i] <= theta_sequence[i - 1]) {
            throw validation_error("verify_limit_convergence: theta sequence must be increasing");
        }
    }

    ConvergenceReport rep;
    for (const double theta : theta_sequence) {
        const LimitLaw law = large_theta_law(p.gamma, p.q, theta);
        double sup_target = 0.0;
        for (const double s : s_grid) sup_target = std::max(sup_target, std::abs(law.exponent(s)));
        if (sup_target == 0.0) sup_target = 1.0;

        // V pathway: Lambda_V(e^{-s/a}) + b s with 1-z formed to full precision.
        double v_sup = 0.0;
        {
            const LpsmParams pv{p.gamma, theta, p.q};
            for (const double s : s_grid) {
                const double w = -std::expm1(-s / law.scale_a); // 1 - z
                const double xi = 1.0 - (1.0 - p.q) / w;
                const double rescaled = lpsm::log_gf_V_xi(pv, xi) + law.shift_b * s;
                v_sup = std::max(v_sup, std::abs(rescaled - law.exponent(s)));
            }
        }
        rep.v_distance.push_back(v_sup / sup_target);

        // W pathway at mu = 1/theta: Lambda_W(s/a)|_{a = mu^{1/gamma}}, recentred
        // in the gamma = 1 case where the drift diverges with log(mu).
        double w_sup = 0.0;
        {
            const double mu = 1.0 / theta;
            ModelParams mp;
            mp.beta = p.q;
            mp.alpha = 1.0;
            mp.nu = mu;
            mp.delta = p.gamma * (1.0 - p.q);
            mp.N = 10.0;
            mp.N0 = 1.0;
            const LimitLaw wlaw = large_N_law(mp);
            const GammaRegime reg = wlaw.regime;
            double a_w;
            if (reg == GammaRegime::EqualTwo || reg == GammaRegime::Above2) {
                a_w = std::sqrt(wlaw.variance);
            } else {
                a_w = std::pow(mu, 1.0 / p.gamma);
            }
            for (const double s : s_grid) {
                double rescaled = wlaw.exponent(s / a_w);
                if (reg == GammaRegime::EqualOne) rescaled -= s * (1.0 - std::log(mu));
                w_sup = std::max(w_sup, std::abs(rescaled - law.exponent(s)));
            }
        }
        rep.w_distance.push_back(w_sup / sup_target);
        rep.thetas.push_back(theta);
    }
    return rep;
}

} // namespace fluctuate::limits
