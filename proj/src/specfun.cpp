#include "fluctuate/specfun.hpp"

#include "fluctuate/errors.hpp"

#include <cmath>
#include <cstdlib>
#include <initializer_list>
#include <limits>
#include <string>

namespace fluctuate::specfun {

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008;
constexpr int kMaxSeriesTerms = 100000;
constexpr double kIntegerSnapTol = 1e-12;
constexpr double kNearIntegerGuard = 0.05;
constexpr double kSeriesFallbackZMax = 0.995;

bool is_nonpositive_integer(double x, double tol = kIntegerSnapTol) {
    if (x > 0.5) return false;
    const double r = std::round(x);
    return r <= 0.5 && std::abs(x - r) <= tol;
}

// Kahan-compensated accumulator.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;
    void add(double v) {
        const double y = v - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

// Lanczos rational approximation, 13 terms, g = 6.024680040776729583740234375
// (Godfrey/Pugh constants, exp(g)-scaled numerator).
constexpr double kLanczosG = 6.024680040776729583740234375;

double lanczos_sum_expg_scaled(double z) {
    static const double num[13] = {
        56906521.91347156388090791033559122686859,
        103794043.1163445451906271053616070238554,
        86363131.28813859145546927288977868422342,
        43338889.32467613834773723740590533316085,
        14605578.08768506808414169982791359218571,
        3481712.15498064590882071018964774556468,
        601859.6171681098786670226533699352302507,
        75999.29304014542649875303443598909137092,
        6955.999602515376140356310115515198987526,
        449.9445569063168119446858607650988409623,
        19.51992788247617482847860966235652136208,
        0.5098416655656676188125178644804694509993,
        0.006061842346248906525783753964555936883222,
    };
    static const double den[13] = {
        0.0,
        39916800.0,
        120543840.0,
        150917976.0,
        105258076.0,
        45995730.0,
        13339535.0,
        2637558.0,
        357423.0,
        32670.0,
        1925.0,
        66.0,
        1.0,
    };
    if (z <= 1000.0) {
        double p = num[12];
        double q = den[12];
        for (int i = 11; i >= 0; --i) {
            p = p * z + num[i];
            q = q * z + den[i];
        }
        return p / q;
    }
    const double w = 1.0 / z;
    double p = num[0];
    double q = den[0];
    for (int i = 1; i <= 12; ++i) {
        p = p * w + num[i];
        q = q * w + den[i];
    }
    return p / q;
}

} // namespace

double sin_pi(double x) {
    if (!std::isfinite(x)) throw validation_error("sin_pi: non-finite argument");
    const double fl = std::floor(x);
    double f = x - fl;
    int sign = (static_cast<long long>(std::fmod(fl, 2.0)) != 0) ? -1 : 1;
    if (f > 0.5) f = 1.0 - f;
    return sign * std::sin(M_PI * f);
}

double cos_pi(double x) {
    return sin_pi(x + 0.5);
}

double ln_gamma(double x) {
    if (!(x > 0.0)) throw validation_error("ln_gamma: argument must be positive, got " + std::to_string(x));
    if (x == 1.0 || x == 2.0) return 0.0;
    const double zgh = x + kLanczosG - 0.5;
    return (x - 0.5) * (std::log(zgh) - 1.0) + std::log(lanczos_sum_expg_scaled(x));
}

LnGammaSigned lgamma_signed(double x) {
    if (x > 0.0) return {ln_gamma(x), 1};
    if (is_nonpositive_integer(x)) {
        throw validation_error("lgamma_signed: pole at nonpositive integer " + std::to_string(x));
    }
    // Reflection Gamma(x) Gamma(1-x) = pi / sin(pi x).
    const double s = sin_pi(x);
    const double log_abs = std::log(M_PI) - std::log(std::abs(s)) - ln_gamma(1.0 - x);
    return {log_abs, s > 0.0 ? 1 : -1};
}

double digamma(double x) {
    if (!std::isfinite(x)) throw validation_error("digamma: non-finite argument");
    if (is_nonpositive_integer(x)) {
        throw validation_error("digamma: pole at nonpositive integer " + std::to_string(x));
    }
    if (x < 0.0) {
        // Psi(x) = Psi(1-x) - pi cot(pi x)
        return digamma(1.0 - x) - M_PI * cos_pi(x) / sin_pi(x);
    }
    double acc = 0.0;
    while (x < 10.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    const double w = 1.0 / (x * x);
    // Psi(x) ~ ln x - 1/(2x) - sum B_2k / (2k x^2k)
    double series = w * (1.0 / 12.0
                  - w * (1.0 / 120.0
                  - w * (1.0 / 252.0
                  - w * (1.0 / 240.0
                  - w * (1.0 / 132.0
                  - w * (691.0 / 32760.0
                  - w * (1.0 / 12.0)))))));
    return acc + std::log(x) - 0.5 / x - series;
}

double polygamma1(double x) {
    if (!(x > 0.0)) throw validation_error("polygamma1: argument must be positive, got " + std::to_string(x));
    double acc = 0.0;
    while (x < 12.0) {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    const double w = 1.0 / (x * x);
    // Psi_1(x) ~ 1/x + 1/(2x^2) + sum B_2k / x^(2k+1)
    double series = (1.0 / x) * w * (1.0 / 6.0
                  - w * (1.0 / 30.0
                  - w * (1.0 / 42.0
                  - w * (1.0 / 30.0
                  - w * (5.0 / 66.0
                  - w * (691.0 / 2730.0
                  - w * (7.0 / 6.0)))))));
    return acc + 1.0 / x + 0.5 * w + series;
}

double pochhammer(double a, long long n) {
    if (n < 0) throw validation_error("pochhammer: order must be nonnegative");
    if (n == 0) return 1.0;
    const double r = std::round(a);
    const bool a_nonpos_int = (a <= 0.0 && std::abs(a - r) <= kIntegerSnapTol);
    if (a_nonpos_int && static_cast<double>(n) >= 1.0 - r) return 0.0; // product crosses zero
    if (n <= 64) {
        double p = 1.0;
        for (long long k = 0; k < n; ++k) p *= a + static_cast<double>(k);
        return p;
    }
    const LnGammaSigned top = lgamma_signed(a + static_cast<double>(n));
    const LnGammaSigned bot = lgamma_signed(a);
    return (top.sign * bot.sign) * std::exp(top.log_abs - bot.log_abs);
}

namespace {

// Product of Gammas over product of Gammas with sign tracking.
// A pole in a denominator factor sends the quotient to zero.
double gamma_quotient(std::initializer_list<double> numer, std::initializer_list<double> denom) {
    double log_abs = 0.0;
    int sign = 1;
    for (double x : numer) {
        if (is_nonpositive_integer(x)) {
            throw numeric_error("gamma_quotient: pole in numerator at " + std::to_string(x));
        }
        const LnGammaSigned g = lgamma_signed(x);
        log_abs += g.log_abs;
        sign *= g.sign;
    }
    for (double x : denom) {
        if (is_nonpositive_integer(x)) return 0.0;
        const LnGammaSigned g = lgamma_signed(x);
        log_abs -= g.log_abs;
        sign *= g.sign;
    }
    return sign * std::exp(log_abs);
}

double hyp2f1_dispatch(double a, double b, double c, double z, double rel_tol, int depth,
                       double one_minus_z);

// Maclaurin series, valid for |z| < 1 (used for z in [0, ~0.5] plus fallbacks).
double hyp2f1_series(double a, double b, double c, double z, double rel_tol) {
    CompensatedSum s;
    s.add(1.0);
    double term = 1.0;
    int small_streak = 0;
    for (int k = 0; k < kMaxSeriesTerms; ++k) {
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
        s.add(term);
        if (std::abs(term) <= rel_tol * (std::abs(s.sum) + 1e-300)) {
            if (++small_streak >= 2) return s.sum;
        } else {
            small_streak = 0;
        }
    }
    throw numeric_error("hyp2f1: series did not converge within " + std::to_string(kMaxSeriesTerms)
                        + " terms (a=" + std::to_string(a) + ", b=" + std::to_string(b)
                        + ", c=" + std::to_string(c) + ", z=" + std::to_string(z) + ")");
}

// Terminating case: a (or b) a nonpositive integer. Exact finite sum, any z <= 1.
double hyp2f1_terminating(double a, double b, double c, double z) {
    if (is_nonpositive_integer(b) && !is_nonpositive_integer(a)) std::swap(a, b);
    const long long n = static_cast<long long>(-std::round(a));
    if (n > kMaxSeriesTerms) {
        throw numeric_error("hyp2f1: terminating series degree exceeds iteration cap");
    }
    const double a_snap = -static_cast<double>(n);
    CompensatedSum s;
    s.add(1.0);
    double term = 1.0;
    for (long long k = 0; k < n; ++k) {
        term *= (a_snap + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
        s.add(term);
    }
    return s.sum;
}

// Gauss's theorem at z = 1, requires c - a - b > 0.
double hyp2f1_gauss_at_1(double a, double b, double c) {
    return gamma_quotient({c, c - a - b}, {c - a, c - b});
}

// c = a + b: logarithmic connection series around z = 1 (w = 1 - z).
double hyp2f1_z_near_1_log(double a, double b, double w, double rel_tol) {
    const double logw = std::log(w);
    double psi_k1 = -kEulerGamma; // psi(1)
    double psi_ak = digamma(a);
    double psi_bk = digamma(b);
    CompensatedSum s;
    double term = 1.0; // (a)_k (b)_k / (k!)^2 w^k at k = 0
    int small_streak = 0;
    for (int k = 0; k < kMaxSeriesTerms; ++k) {
        const double bracket = 2.0 * psi_k1 - psi_ak - psi_bk - logw;
        const double contrib = term * bracket;
        s.add(contrib);
        if (std::abs(contrib) <= rel_tol * (std::abs(s.sum) + 1e-300)) {
            if (++small_streak >= 2) break;
        } else {
            small_streak = 0;
        }
        term *= (a + k) * (b + k) / ((k + 1.0) * (k + 1.0)) * w;
        psi_k1 += 1.0 / (k + 1.0);
        psi_ak += 1.0 / (a + k);
        psi_bk += 1.0 / (b + k);
        if (k + 1 == kMaxSeriesTerms) {
            throw numeric_error("hyp2f1: log-connection series did not converge");
        }
    }
    return gamma_quotient({a + b}, {a, b}) * s.sum;
}

// c = a + b + m, m >= 1 (A&S 15.3.11).
double hyp2f1_z_near_1_int_pos(double a, double b, int m, double w, double rel_tol) {
    const double c = a + b + m;
    const double logw = std::log(w);

    CompensatedSum s1;
    {
        double term = 1.0; // (a)_k (b)_k / (k! (1-m)_k) w^k
        for (int k = 0; k < m; ++k) {
            s1.add(term);
            if (k + 1 < m) term *= (a + k) * (b + k) / ((k + 1.0) * (1.0 - m + k)) * w;
        }
    }
    const double front1 = gamma_quotient({static_cast<double>(m), c}, {a + m, b + m});

    CompensatedSum s2;
    {
        double term = std::exp(-ln_gamma(m + 1.0)); // 1 / m!
        double psi_k1 = -kEulerGamma;
        double psi_km = digamma(m + 1.0);
        double psi_am = digamma(a + m);
        double psi_bm = digamma(b + m);
        int small_streak = 0;
        for (int k = 0; k < kMaxSeriesTerms; ++k) {
            const double bracket = logw - psi_k1 - psi_km + psi_am + psi_bm;
            const double contrib = term * bracket;
            s2.add(contrib);
            if (std::abs(contrib) <= rel_tol * (std::abs(s2.sum) + 1e-300)) {
                if (++small_streak >= 2) break;
            } else {
                small_streak = 0;
            }
            term *= (a + m + k) * (b + m + k) / ((k + 1.0) * (k + 1.0 + m)) * w;
            psi_k1 += 1.0 / (k + 1.0);
            psi_km += 1.0 / (k + 1.0 + m);
            psi_am += 1.0 / (a + m + k);
            psi_bm += 1.0 / (b + m + k);
            if (k + 1 == kMaxSeriesTerms) {
                throw numeric_error("hyp2f1: integer connection series did not converge");
            }
        }
    }
    const double sign2 = (m % 2 == 0) ? -1.0 : 1.0; // (-1)^(m+1)
    const double front2 = gamma_quotient({c}, {a, b});
    return front1 * s1.sum + sign2 * front2 * std::pow(w, m) * s2.sum;
}

// c = a + b - M, M >= 1 (A&S 15.3.12).
double hyp2f1_z_near_1_int_neg(double a, double b, int bigM, double w, double rel_tol) {
    const double c = a + b - bigM;
    const double logw = std::log(w);

    CompensatedSum s1;
    {
        double term = 1.0; // (a-M)_k (b-M)_k / (k! (1-M)_k) w^k
        for (int k = 0; k < bigM; ++k) {
            s1.add(term);
            if (k + 1 < bigM) term *= (a - bigM + k) * (b - bigM + k) / ((k + 1.0) * (1.0 - bigM + k)) * w;
        }
    }
    const double front1 = gamma_quotient({static_cast<double>(bigM), c}, {a, b});

    CompensatedSum s2;
    {
        double term = std::exp(-ln_gamma(bigM + 1.0)); // 1 / M!
        double psi_k1 = -kEulerGamma;
        double psi_km = digamma(bigM + 1.0);
        double psi_ak = digamma(a);
        double psi_bk = digamma(b);
        int small_streak = 0;
        for (int k = 0; k < kMaxSeriesTerms; ++k) {
            const double bracket = logw - psi_k1 - psi_km + psi_ak + psi_bk;
            const double contrib = term * bracket;
            s2.add(contrib);
            if (std::abs(contrib) <= rel_tol * (std::abs(s2.sum) + 1e-300)) {
                if (++small_streak >= 2) break;
            } else {
                small_streak = 0;
            }
            term *= (a + k) * (b + k) / ((k + 1.0) * (k + 1.0 + bigM)) * w;
            psi_k1 += 1.0 / (k + 1.0);
            psi_km += 1.0 / (k + 1.0 + bigM);
            psi_ak += 1.0 / (a + k);
            psi_bk += 1.0 / (b + k);
            if (k + 1 == kMaxSeriesTerms) {
                throw numeric_error("hyp2f1: integer connection series did not converge");
            }
        }
    }
    const double sign2 = (bigM % 2 == 0) ? -1.0 : 1.0; // -(-1)^M
    const double front2 = gamma_quotient({c}, {a - bigM, b - bigM});
    return front1 * std::pow(w, -bigM) * s1.sum + sign2 * front2 * s2.sum;
}

// Generic two-series connection around z = 1 (A&S 15.3.6), c - a - b non-integer.
double hyp2f1_z_near_1_generic(double a, double b, double c, double w, double rel_tol) {
    const double d = c - a - b;
    const double t1 = gamma_quotient({c, d}, {c - a, c - b});
    const double t2 = gamma_quotient({c, -d}, {a, b});
    double r = 0.0;
    if (t1 != 0.0) r += t1 * hyp2f1_series(a, b, 1.0 - d, w, rel_tol);
    if (t2 != 0.0) r += t2 * std::pow(w, d) * hyp2f1_series(c - a, c - b, 1.0 + d, w, rel_tol);
    return r;
}

double hyp2f1_connect_near_1(double a, double b, double c, double z, double rel_tol, double one_minus_z) {
    const double w = std::isnan(one_minus_z) ? 1.0 - z : one_minus_z;
    const double d = c - a - b;
    const double m = std::round(d);
    if (std::abs(d - m) <= kIntegerSnapTol) {
        const int mi = static_cast<int>(m);
        if (mi == 0) return hyp2f1_z_near_1_log(a, b, w, rel_tol);
        if (mi > 0) return hyp2f1_z_near_1_int_pos(a, b, mi, w, rel_tol);
        return hyp2f1_z_near_1_int_neg(a, b, -mi, w, rel_tol);
    }
    if (std::abs(d - m) < kNearIntegerGuard) {
        // Too close to a degenerate case for the two-series split; the direct
        // series still converges geometrically for z away from 1.
        if (z <= kSeriesFallbackZMax) return hyp2f1_series(a, b, c, z, rel_tol);
        throw numeric_error("hyp2f1: c-a-b within " + std::to_string(kNearIntegerGuard)
                            + " of an integer and z too close to 1 (z=" + std::to_string(z) + ")");
    }
    return hyp2f1_z_near_1_generic(a, b, c, w, rel_tol);
}

double hyp2f1_dispatch(double a, double b, double c, double z, double rel_tol, int depth,
                       double one_minus_z) {
    if (is_nonpositive_integer(a) || is_nonpositive_integer(b)) {
        return hyp2f1_terminating(a, b, c, z);
    }
    if (z == 0.0) return 1.0;
    if (z == 1.0) {
        if (c - a - b > 0.0) return hyp2f1_gauss_at_1(a, b, c);
        throw validation_error("hyp2f1: z = 1 requires c - a - b > 0; see hyp2f1_z1_limit");
    }
    if (z < 0.0) {
        if (depth > 0) throw numeric_error("hyp2f1: transformation recursion failed");
        // Pfaff: F(a,b;c;z) = (1-z)^(-b) F(c-a, b; c; z/(z-1)).
        // 1 - mapped = 1/(1-z) is passed exactly so the inner connection does
        // not lose it to cancellation when z is far negative.
        const double mapped = z / (z - 1.0);
        return std::pow(1.0 - z, -b)
               * hyp2f1_dispatch(c - a, b, c, mapped, rel_tol, depth + 1, 1.0 / (1.0 - z));
    }
    if (z <= 0.5) return hyp2f1_series(a, b, c, z, rel_tol);
    return hyp2f1_connect_near_1(a, b, c, z, rel_tol, one_minus_z);
}

} // namespace

double hyp2f1(const Hyp2F1Request& req) {
    if (!(req.rel_tol > 0.0)) throw validation_error("hyp2f1: rel_tol must be positive");
    if (!std::isfinite(req.a) || !std::isfinite(req.b) || !std::isfinite(req.c) || !std::isfinite(req.z)) {
        throw validation_error("hyp2f1: non-finite parameter");
    }
    if (is_nonpositive_integer(req.c)) {
        throw validation_error("hyp2f1: c must not be zero or a negative integer, got " + std::to_string(req.c));
    }
    if (req.z > 1.0) {
        throw validation_error("hyp2f1: real branch requires z <= 1, got " + std::to_string(req.z));
    }
    return hyp2f1_dispatch(req.a, req.b, req.c, req.z, req.rel_tol, 0, std::numeric_limits<double>::quiet_NaN());
}

double hyp2f1(double a, double b, double c, double z, double rel_tol) {
    return hyp2f1(Hyp2F1Request{a, b, c, z, rel_tol});
}

Z1Limit hyp2f1_z1_limit(double a, double b, double c) {
    if (is_nonpositive_integer(c)) {
        throw validation_error("hyp2f1_z1_limit: c must not be zero or a negative integer");
    }
    Z1Limit out{};
    if (is_nonpositive_integer(a) || is_nonpositive_integer(b)) {
        out.kind = Z1Limit::Kind::Finite;
        out.value = hyp2f1_terminating(a, b, c, 1.0);
        return out;
    }
    const double d = c - a - b;
    if (std::abs(d) <= 1e-12) {
        out.kind = Z1Limit::Kind::LogDivergent;
        out.coefficient = gamma_quotient({a + b}, {a, b});
        return out;
    }
    if (d > 0.0) {
        out.kind = Z1Limit::Kind::Finite;
        out.value = hyp2f1_gauss_at_1(a, b, c);
        return out;
    }
    out.kind = Z1Limit::Kind::PowerDivergent;
    out.exponent = d;
    out.coefficient = gamma_quotient({c, -d}, {a, b});
    return out;
}

} // namespace fluctuate::specfun
