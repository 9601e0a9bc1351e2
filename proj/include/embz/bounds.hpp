#pragma once

// Scalar lower-bound formulas on embezzlement complexity, with validity
// guards. All entropic quantities are expressed in units of the declared
// log base; d, d_e, k, m are the chain/locality parameters and c the
// small-incremental-entangling constant (default 22).

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace embz {

struct BoundParams {
    double delta_S = 0.0;   // embezzled entropy, in log_base units
    double epsilon = 0.0;   // protocol precision
    int d = 2;
    int d_e = 2;
    double c = 22.0;
    int k = 2;
    int m = 1;
    double log_base = 2.718281828459045235360287471352662498;

    void validate_fannes() const {
        if (epsilon < 0.0 || epsilon > 1.0 / std::exp(1.0))
            throw std::invalid_argument("BoundParams: epsilon must lie in [0, 1/e]");
    }
    void validate() const {
        if (delta_S < 0.0) throw std::invalid_argument("BoundParams: delta_S must be >= 0");
        if (d < 2 || d_e < d) throw std::invalid_argument("BoundParams: need 2 <= d <= d_e");
        if (c <= 0.0) throw std::invalid_argument("BoundParams: c must be positive");
        if (k < 2) throw std::invalid_argument("BoundParams: k must be >= 2");
        if (log_base <= 1.0) throw std::invalid_argument("BoundParams: log base must exceed 1");
    }
    double logb(double x) const { return std::log(x) / std::log(log_base); }
};

struct BoundReport {
    std::string formula;
    BoundParams params;
    std::vector<double> per_cut_terms;
    double total = 0.0;
};

// epsilon * log(dim) - epsilon * log(epsilon), valid for epsilon <= 1/e.
inline double fannes_bound(double epsilon, std::int64_t dim, double log_base = std::exp(1.0)) {
    if (epsilon < 0.0 || epsilon > 1.0 / std::exp(1.0))
        throw std::invalid_argument("fannes_bound: epsilon must lie in [0, 1/e]");
    if (epsilon == 0.0) return 0.0;
    return (epsilon * std::log(static_cast<double>(dim)) - epsilon * std::log(epsilon)) /
           std::log(log_base);
}

// (sum_i |dS(rho_i)|) / (c log d) from measured per-cut entropy changes.
inline double entropy_sum_bound(const std::vector<double>& delta_S_per_cut, int d, double c,
                                double log_base = std::exp(1.0)) {
    double sum = 0.0;
    for (double v : delta_S_per_cut) {
        if (v < 0.0) throw std::invalid_argument("entropy_sum_bound: negative entry");
        sum += v;
    }
    return sum / (c * std::log(d) / std::log(log_base));
}

// per-cut term i: max(dS - eps * log(d_e d^i / eps), 0); total = sum / (c log d).
inline BoundReport finite_n_bound(const BoundParams& params, int n) {
    params.validate();
    params.validate_fannes();
    if (n < 1) throw std::invalid_argument("finite_n_bound: n must be >= 1");
    BoundReport rep;
    rep.formula = "finite_n";
    rep.params = params;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double fannes = params.epsilon * (params.logb(params.d_e) + i * params.logb(params.d) -
                                                params.logb(params.epsilon));
        const double term = std::max(params.delta_S - fannes, 0.0);
        rep.per_cut_terms.push_back(term);
        sum += term;
    }
    rep.total = sum / (params.c * params.logb(params.d));
    return rep;
}

struct AsymptoticBound {
    int M = 0;               // floor(delta_S / (log(d) epsilon))
    double epsilon_M = 0.0;  // delta_S / (log(d) M), the integer-M precision
    double exact_M_sum = 0.0;
    double clipped_sum = 0.0;  // direct summation of the finite-n terms over i < M
    double leading_term = 0.0; // delta_S^2 / (2 c log^2(d) epsilon_M)
};

inline double epsilon_for_M(const BoundParams& params, int M) {
    return params.delta_S / (params.logb(params.d) * M);
}

// Closed-form large-M expression alongside the direct clipped sum and the
// leading 1/epsilon divergence.
inline AsymptoticBound asymptotic_bound(const BoundParams& params) {
    params.validate();
    if (params.epsilon <= 0.0) throw std::invalid_argument("asymptotic_bound: epsilon must be > 0");
    const double logd = params.logb(params.d);
    // absolute slack keeps exact integer ratios from flooring one short
    const int M = static_cast<int>(std::floor(params.delta_S / (logd * params.epsilon) + 1e-9));
    if (M < 1) throw std::invalid_argument("asymptotic_bound: M must be >= 1");

    AsymptoticBound out;
    out.M = M;
    out.epsilon_M = epsilon_for_M(params, M);
    out.exact_M_sum = (M * params.delta_S / (2.0 * params.c * logd)) *
                      (1.0 +
                       2.0 * params.logb(params.delta_S / (logd * M * params.d_e)) / (logd * M) +
                       1.0 / M);
    out.leading_term = params.delta_S * params.delta_S /
                       (2.0 * params.c * logd * logd * params.epsilon);

    BoundParams p = params;
    p.epsilon = out.epsilon_M;
    // epsilon_M can exceed 1/e for tiny M; the clipped sum is only reported
    // when the Fannes guard admits it
    if (p.epsilon <= 1.0 / std::exp(1.0)) out.clipped_sum = finite_n_bound(p, M).total;
    return out;
}

// Same report with M given directly instead of via params.epsilon.
inline AsymptoticBound asymptotic_bound_at_M(BoundParams params, int M) {
    if (M < 1) throw std::invalid_argument("asymptotic_bound_at_M: M must be >= 1");
    params.epsilon = epsilon_for_M(params, M);
    return asymptotic_bound(params);
}

enum class KLocalRemedy { overall_factor, strided_sum };

// finite_n_bound with log d -> floor(k/2) log d in the SIE denominator and
// one of the paper's two over-counting remedies.
inline BoundReport klocal_adjusted_bound(const BoundParams& params, int n, KLocalRemedy remedy) {
    BoundReport base = finite_n_bound(params, n);
    BoundReport rep;
    rep.formula = remedy == KLocalRemedy::overall_factor ? "klocal_overall_factor" : "klocal_strided";
    rep.params = params;
    const int half_k = params.k / 2;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const bool counted =
            remedy == KLocalRemedy::overall_factor || (i % (params.k - 1)) == 0;
        const double term = counted ? base.per_cut_terms[i] : 0.0;
        rep.per_cut_terms.push_back(term);
        sum += term;
    }
    double total = sum / (params.c * half_k * params.logb(params.d));
    if (remedy == KLocalRemedy::overall_factor) total /= (params.k - 1);
    rep.total = total;
    return rep;
}

// finite_n_bound truncated to the first m cuts; caps at m dS / (c log d).
inline BoundReport coarse_grained_bound(const BoundParams& params, int m) {
    if (m < 1) throw std::invalid_argument("coarse_grained_bound: m must be >= 1");
    BoundReport rep = finite_n_bound(params, m);
    rep.formula = "coarse_grained";
    return rep;
}

// 1/2 sum_i max(delta_norm_i - epsilon, 0)
inline double schatten_bound(const std::vector<double>& norm_deltas, double epsilon) {
    double sum = 0.0;
    for (double v : norm_deltas) {
        if (v < 0.0) throw std::invalid_argument("schatten_bound: negative entry");
        sum += std::max(v - epsilon, 0.0);
    }
    return 0.5 * sum;
}

// Closed-form Schatten p-norm of the 2i-site alternating-block product state.
inline double itp_norm(double lambda1, double lambda2, int i, double p) {
    if (p < 1.0) throw std::invalid_argument("itp_norm: p must be >= 1");
    if (i < 0) throw std::invalid_argument("itp_norm: i must be >= 0");
    const double base = std::pow(1.0 + std::pow(lambda1, p), 1.0 / p) *
                        std::pow(1.0 + std::pow(lambda2, p), 1.0 / p) /
                        ((1.0 + lambda1) * (1.0 + lambda2));
    return std::pow(base, i);
}

// Coefficient of the 1/i tail of the per-pair norm deltas. The harmonic-sum
// asymptote below carries natural logs, so the default base is e.
inline double itp_A_constant(double lambda1, double lambda2, double log_base = std::exp(1.0)) {
    if (!(lambda1 > 0.0 && lambda1 < 1.0 && lambda2 > 0.0 && lambda2 < 1.0))
        throw std::invalid_argument("itp_A_constant: lambdas must lie in (0,1)");
    return (std::log(2.0) / std::log(log_base)) *
           std::pow(lambda1, lambda1 / (1.0 + lambda1)) *
           std::pow(lambda2, lambda2 / (1.0 + lambda2)) /
           ((1.0 + lambda1) * (1.0 + lambda2));
}

// Per-pair norm delta entering the Schatten lower bound at exponent 1 + 1/i.
inline double itp_norm_delta(double lambda1, double lambda2, int i) {
    if (i < 1) throw std::invalid_argument("itp_norm_delta: i must be >= 1");
    const double p = 1.0 + 1.0 / i;
    return (1.0 - std::pow(2.0, -1.0 / (1.0 + i))) * itp_norm(lambda1, lambda2, i, p);
}

struct ItpAsymptoticBound {
    double direct_sum = 0.0;      // (1/2)(1 + sum_{i>=1} max(delta_i - eps, 0))
    double divergent_part = 0.0;  // sum_{i>=1} max(delta_i - eps, 0) = 2 direct_sum - 1
    double asymptote = 0.0;       // A ln(A / eps)
};

// Direct clipped summation of the Schatten bound for the alternating-block
// family against its logarithmic asymptote.
inline ItpAsymptoticBound itp_asymptotic_bound(double lambda1, double lambda2, double epsilon) {
    if (epsilon <= 0.0) throw std::invalid_argument("itp_asymptotic_bound: epsilon must be > 0");
    const double a = itp_A_constant(lambda1, lambda2);
    double sum = 0.0;
    // norm deltas decrease like A/i; clip once below epsilon
    const long i_max = static_cast<long>(std::ceil(4.0 * a / epsilon)) + 16;
    for (long i = 1; i <= i_max; ++i) {
        const double term = itp_norm_delta(lambda1, lambda2, static_cast<int>(i)) - epsilon;
        if (term <= 0.0 && i > 4) break;
        if (term > 0.0) sum += term;
    }
    ItpAsymptoticBound out;
    out.divergent_part = sum;
    out.direct_sum = 0.5 * (1.0 + sum);
    out.asymptote = a * std::log(a / epsilon);
    return out;
}

}  // namespace embz
