#pragma once

// Randomized property harness for the inequalities the bound derivations
// rest on: small incremental entangling, Fannes continuity, Schatten norm
// monotonicity, and the cost-entropy chain. Deterministic given a seed.

#include "embz/bounds.hpp"
#include "embz/circuit.hpp"
#include "embz/qcore.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace embz {

inline constexpr double kVerifySlack = 1e-7;

struct VerificationRecord {
    std::string check_name;
    int trials = 0;
    int violations = 0;
    double worst_margin = 0.0;  // min over trials of (rhs - lhs)
    std::uint64_t seed = 0;
};

// Haar-random pure state: normalized complex Gaussian vector.
inline Ket haar_random_ket(const HilbertFactorization& fact, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector v(fact.total_dim());
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(gauss(rng), gauss(rng));
    v /= v.norm();
    return Ket(fact, std::move(v));
}

// Random mixed state: partial trace of a Haar-random purification.
inline DensityMatrix random_mixed_state(const HilbertFactorization& fact, std::mt19937_64& rng) {
    const auto dim = fact.total_dim();
    HilbertFactorization doubled({static_cast<int>(dim), static_cast<int>(dim)});
    Ket purified = haar_random_ket(doubled, rng);
    // outer product formed directly; the dim^2-sized intermediate state never
    // passes through the validating DensityMatrix constructor
    Matrix outer = purified.amplitudes * purified.amplitudes.adjoint();
    return DensityMatrix(fact, partial_trace_keep_prefix(outer, doubled, 1));
}

// Gaussian Hermitian ensemble, rescaled to the target operator norm.
inline Matrix random_hermitian(std::int64_t dim, double target_norm, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix a(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) a(i, j) = Complex(gauss(rng), gauss(rng));
    Matrix h = 0.5 * (a + a.adjoint());
    const double norm = operator_norm(h);
    return norm > 0.0 ? Matrix(h * (target_norm / norm)) : h;
}

// Small incremental entangling on a 4-factor split: random pure states,
// random Hamiltonians coupling factors 2-3 only, central finite-difference
// entropy derivative against c log(D) ||H||.
inline VerificationRecord check_sie(int trials, const ChainSpec& spec, std::uint64_t seed) {
    const auto fact = spec.factorization();
    if (fact.num_factors() < 4)
        throw std::invalid_argument("check_sie: need at least 4 factors");
    std::vector<int> dims4{fact.dims[0], fact.dims[1], fact.dims[2], 1};
    for (std::size_t s = 3; s < fact.num_factors(); ++s) dims4[3] *= fact.dims[s];
    HilbertFactorization f4(dims4);
    if (f4.total_dim() > (std::int64_t{1} << 10))
        throw std::invalid_argument("check_sie: dimension cap 2^10 exceeded");

    const double step = 1e-5;
    const double bound_c = 22.0;
    const double log_d = std::log(std::min(dims4[1], dims4[2]));

    VerificationRecord rec{"sie", trials, 0, std::numeric_limits<double>::infinity(), seed};
    for (int t = 0; t < trials; ++t) {
        std::mt19937_64 rng(seed + static_cast<std::uint64_t>(t));
        Ket chi = haar_random_ket(f4, rng);
        const std::int64_t d23 = static_cast<std::int64_t>(dims4[1]) * dims4[2];
        std::uniform_real_distribution<double> norm_dist(0.1, 2.0);
        Matrix h23 = random_hermitian(d23, norm_dist(rng), rng);
        Matrix h = kron(kron(Matrix::Identity(dims4[0], dims4[0]), h23),
                        Matrix::Identity(dims4[3], dims4[3]));
        const double h_norm = operator_norm(h23);

        auto entropy_12 = [&](double dt) {
            Ket evolved = hermitian_evolve(chi, h, dt);
            return von_neumann_entropy(partial_trace_keep_prefix(pure_state(evolved), 2));
        };
        const double deriv = std::abs((entropy_12(step) - entropy_12(-step)) / (2.0 * step));
        const double rhs = bound_c * log_d * h_norm;
        const double margin = rhs - deriv;
        rec.worst_margin = std::min(rec.worst_margin, margin);
        if (margin < -kVerifySlack) ++rec.violations;
    }
    return rec;
}

// Fannes continuity on random pairs constructed by mixing toward a random
// state, kept within trace distance 1/e.
inline VerificationRecord check_fannes(int trials, int dim, std::uint64_t seed) {
    if (dim < 2 || dim > 64) throw std::invalid_argument("check_fannes: dim must be in [2, 64]");
    HilbertFactorization fact({dim});
    VerificationRecord rec{"fannes", trials, 0, std::numeric_limits<double>::infinity(), seed};
    for (int t = 0; t < trials; ++t) {
        std::mt19937_64 rng(seed + static_cast<std::uint64_t>(t));
        DensityMatrix rho = random_mixed_state(fact, rng);
        DensityMatrix tau = random_mixed_state(fact, rng);
        std::uniform_real_distribution<double> mix(0.0, 1.0);
        double s = mix(rng);
        Matrix blend = (1.0 - s) * rho.entries + s * tau.entries;
        double eps = trace_norm(blend - rho.entries);
        const double cap = 1.0 / std::exp(1.0);
        if (eps > cap) {
            // shrink the mixing weight so the premise holds
            s *= 0.999 * cap / eps;
            blend = (1.0 - s) * rho.entries + s * tau.entries;
            eps = trace_norm(blend - rho.entries);
        }
        DensityMatrix sigma(fact, std::move(blend));
        const double lhs = std::abs(von_neumann_entropy(rho) - von_neumann_entropy(sigma));
        const double rhs = eps > 0.0 ? eps * std::log(static_cast<double>(dim)) - eps * std::log(eps)
                                     : 0.0;
        const double margin = rhs - lhs;
        rec.worst_margin = std::min(rec.worst_margin, margin);
        if (margin < -kVerifySlack) ++rec.violations;
    }
    return rec;
}

// ||A||_p <= ||A||_1 for p in {1.5, 2, 3, inf} and ||Tr_partial A||_1 <= ||A||_1
// on random Hermitian A.
inline VerificationRecord check_norm_monotonicity(int trials, const HilbertFactorization& dims,
                                                  std::uint64_t seed) {
    if (dims.total_dim() > (std::int64_t{1} << 10))
        throw std::invalid_argument("check_norm_monotonicity: dimension cap 2^10 exceeded");
    const double p_values[] = {1.5, 2.0, 3.0, std::numeric_limits<double>::infinity()};
    VerificationRecord rec{"norm_monotonicity", trials, 0,
                           std::numeric_limits<double>::infinity(), seed};
    for (int t = 0; t < trials; ++t) {
        std::mt19937_64 rng(seed + static_cast<std::uint64_t>(t));
        std::uniform_real_distribution<double> norm_dist(0.1, 3.0);
        Matrix a = random_hermitian(dims.total_dim(), norm_dist(rng), rng);
        const double tn = trace_norm(a);
        double worst = std::numeric_limits<double>::infinity();
        for (double p : p_values) worst = std::min(worst, tn - schatten_norm(a, p));
        std::uniform_int_distribution<std::size_t> keep_dist(1, dims.num_factors() - 1);
        Matrix reduced = partial_trace_keep_prefix(a, dims, keep_dist(rng));
        worst = std::min(worst, tn - trace_norm(reduced));
        rec.worst_margin = std::min(rec.worst_margin, worst);
        if (worst < -kVerifySlack) ++rec.violations;
    }
    return rec;
}

// Random k = 2 schedule on the chain's generator basis.
inline Schedule random_schedule(const std::vector<GeneratorTerm>& generators, std::mt19937_64& rng,
                                int max_slices = 3, int max_terms_per_slice = 4,
                                double max_coeff = 2.0) {
    std::uniform_int_distribution<int> n_slices_dist(1, max_slices);
    std::uniform_int_distribution<int> n_terms_dist(1, max_terms_per_slice);
    std::uniform_int_distribution<std::size_t> which(0, generators.size() - 1);
    std::uniform_real_distribution<double> coeff(-max_coeff, max_coeff);
    std::uniform_real_distribution<double> dur(0.2, 1.0);

    Schedule sched;
    sched.terms = generators;
    const int n_slices = n_slices_dist(rng);
    std::vector<double> durations(n_slices);
    double total = 0.0;
    for (auto& d : durations) total += (d = dur(rng));
    for (int s = 0; s < n_slices; ++s) {
        Slice slice;
        slice.duration = durations[s] / total;
        const int n_terms = n_terms_dist(rng);
        for (int j = 0; j < n_terms; ++j) slice.coefficients[generators[which(rng)].label] = coeff(rng);
        sched.slices.push_back(std::move(slice));
    }
    return sched;
}

// sum_i |dS(rho_i)| <= c log(d) cost on random schedules from random product
// or random pure initial states.
inline VerificationRecord check_cost_entropy_chain(int trials, const ChainSpec& spec,
                                                   std::uint64_t seed, int substeps = 48) {
    const auto fact = spec.factorization();
    if (fact.total_dim() > (std::int64_t{1} << 10))
        throw std::invalid_argument("check_cost_entropy_chain: dimension cap 2^10 exceeded");
    const auto generators = build_generators(
        spec, 2, spec.d == 2 && spec.d_e == 2 ? GeneratorBasis::pauli_like : GeneratorBasis::gellmann_like);
    const double bound_c = 22.0;

    VerificationRecord rec{"cost_entropy_chain", trials, 0,
                           std::numeric_limits<double>::infinity(), seed};
    for (int t = 0; t < trials; ++t) {
        std::mt19937_64 rng(seed + static_cast<std::uint64_t>(t));
        std::bernoulli_distribution use_product(0.5);
        DensityMatrix initial = [&] {
            if (use_product(rng)) {
                DensityMatrix state = pure_state(haar_random_ket(HilbertFactorization({fact.dims[0]}), rng));
                for (std::size_t s = 1; s < fact.num_factors(); ++s)
                    state = tensor_product(
                        state, pure_state(haar_random_ket(HilbertFactorization({fact.dims[s]}), rng)));
                return state;
            }
            return pure_state(haar_random_ket(fact, rng));
        }();

        Schedule sched = random_schedule(generators, rng);
        Trajectory traj = evolve_schedule(initial, sched, substeps);
        double lhs = 0.0;
        for (double v : entropy_flow(traj)) lhs += v;
        const double rhs = bound_c * std::log(spec.d) * schedule_cost(sched);
        const double margin = rhs - lhs;
        rec.worst_margin = std::min(rec.worst_margin, margin);
        if (margin < -kVerifySlack) ++rec.violations;
    }
    return rec;
}

}  // namespace embz
