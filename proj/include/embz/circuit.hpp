#pragma once

// Trotterized circuits generated by restricted control Hamiltonians on qudit
// chains: generator bases, schedule evolution, circuit cost, entropy flow
// across cuts, and compilation of basis permutations into nearest-neighbor
// two-level rotations.

#include "embz/qcore.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace embz {

// Chain geometry: site 0 is the embezzler (dimension d_e), sites 1..n are
// catalyst sites of dimension d.
struct ChainSpec {
    int n;
    int d;
    int d_e;

    ChainSpec(int sites, int local_dim, int embezzler_dim)
        : n(sites), d(local_dim), d_e(embezzler_dim) {
        if (n < 1 || d < 2 || d_e < 2) throw std::invalid_argument("ChainSpec: invalid geometry");
    }

    HilbertFactorization factorization() const {
        std::vector<int> dims{d_e};
        dims.insert(dims.end(), n, d);
        return HilbertFactorization(dims);
    }
    int num_sites() const { return n + 1; }
};

struct GeneratorTerm {
    std::string label;
    Matrix matrix;                     // on the window's Hilbert space
    int first_site = 0;                // support [first_site, first_site + k - 1]
    std::vector<int> window_dims;
    std::vector<int> nontrivial_sites; // absolute site indices where it acts
    double penalty = 1.0;

    int window_size() const { return static_cast<int>(window_dims.size()); }
    bool crosses_cut(int cut) const {
        bool left = false, right = false;
        for (int s : nontrivial_sites) {
            if (s <= cut) left = true;
            if (s > cut) right = true;
        }
        return left && right;
    }
};

namespace detail {

inline Matrix trace_out_site(const Matrix& m, const std::vector<int>& dims, int site) {
    std::int64_t pre = 1, post = 1;
    for (int s = 0; s < site; ++s) pre *= dims[s];
    for (std::size_t s = site + 1; s < dims.size(); ++s) post *= dims[s];
    const std::int64_t ds = dims[site];
    Matrix out = Matrix::Zero(pre * post, pre * post);
    for (std::int64_t p = 0; p < pre; ++p)
        for (std::int64_t q = 0; q < pre; ++q)
            for (std::int64_t a = 0; a < post; ++a)
                for (std::int64_t b = 0; b < post; ++b) {
                    Complex s = 0.0;
                    for (std::int64_t x = 0; x < ds; ++x)
                        s += m((p * ds + x) * post + a, (q * ds + x) * post + b);
                    out(p * post + a, q * post + b) = s;
                }
    return out;
}

inline Matrix insert_identity_at(const Matrix& m, const std::vector<int>& dims, int site) {
    std::int64_t pre = 1, post = 1;
    for (int s = 0; s < site; ++s) pre *= dims[s];
    for (std::size_t s = site + 1; s < dims.size(); ++s) post *= dims[s];
    const std::int64_t ds = dims[site];
    Matrix out = Matrix::Zero(pre * ds * post, pre * ds * post);
    for (std::int64_t p = 0; p < pre; ++p)
        for (std::int64_t q = 0; q < pre; ++q)
            for (std::int64_t x = 0; x < ds; ++x)
                for (std::int64_t a = 0; a < post; ++a)
                    for (std::int64_t b = 0; b < post; ++b)
                        out((p * ds + x) * post + a, (q * ds + x) * post + b) =
                            m(p * post + a, q * post + b);
    return out;
}

inline bool acts_trivially_on(const Matrix& m, const std::vector<int>& dims, int site) {
    Matrix reduced = trace_out_site(m, dims, site) / static_cast<double>(dims[site]);
    return (m - insert_identity_at(reduced, dims, site)).cwiseAbs().maxCoeff() < 1e-12;
}

inline std::vector<int> find_nontrivial_sites(const Matrix& m, const std::vector<int>& dims,
                                              int first_site) {
    std::vector<int> out;
    for (std::size_t s = 0; s < dims.size(); ++s)
        if (!acts_trivially_on(m, dims, static_cast<int>(s))) out.push_back(first_site + static_cast<int>(s));
    return out;
}

}  // namespace detail

inline GeneratorTerm make_generator(std::string label, Matrix m, int first_site,
                                    std::vector<int> window_dims, double penalty = 1.0) {
    GeneratorTerm t;
    if (std::abs(m.trace()) > kHermTol) throw std::invalid_argument("GeneratorTerm: not traceless");
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kHermTol)
        throw std::invalid_argument("GeneratorTerm: not Hermitian");
    if (std::abs(operator_norm(m) - 1.0) > kHermTol)
        throw std::invalid_argument("GeneratorTerm: operator norm must be 1");
    if (penalty <= 0.0) throw std::invalid_argument("GeneratorTerm: penalty must be positive");
    t.label = std::move(label);
    t.nontrivial_sites = detail::find_nontrivial_sites(m, window_dims, first_site);
    t.matrix = std::move(m);
    t.first_site = first_site;
    t.window_dims = std::move(window_dims);
    t.penalty = penalty;
    return t;
}

struct Slice {
    double duration = 0.0;
    std::map<std::string, double> coefficients;  // label -> Y_I
};

struct Schedule {
    std::vector<GeneratorTerm> terms;
    std::vector<Slice> slices;

    const GeneratorTerm& term(const std::string& label) const {
        for (const auto& t : terms)
            if (t.label == label) return t;
        throw std::invalid_argument("Schedule: unknown generator label " + label);
    }

    void validate() const {
        if (slices.empty()) return;
        double total = 0.0;
        for (const auto& s : slices) {
            if (s.duration <= 0.0) throw std::invalid_argument("Schedule: nonpositive duration");
            total += s.duration;
            for (const auto& [label, y] : s.coefficients) {
                (void)y;
                term(label);  // throws on unknown label
            }
        }
        if (std::abs(total - 1.0) > 1e-9)
            throw std::invalid_argument("Schedule: durations must sum to 1");
    }
};

struct Trajectory {
    HilbertFactorization factorization;
    std::vector<DensityMatrix> states;               // after each substep, [0] = initial
    std::vector<std::vector<double>> cut_entropies;  // nats, per record per cut
};

enum class GeneratorBasis { pauli_like, gellmann_like };
enum class CostMode { unweighted, distance_penalty };

namespace detail {

// Per-site operator basis: index 0 is the identity, the rest are traceless
// Hermitian with unit operator norm (Pauli-style for d = 2, generalized
// Gell-Mann style otherwise).
inline std::vector<Matrix> site_basis(int d, GeneratorBasis basis) {
    if (basis == GeneratorBasis::pauli_like && d != 2)
        throw std::invalid_argument("build_generators: pauli_like basis requires d = 2");
    std::vector<Matrix> ops;
    ops.push_back(Matrix::Identity(d, d));
    if (d == 2) {
        Matrix x(2, 2), y(2, 2), z(2, 2);
        x << 0, 1, 1, 0;
        y << 0, Complex(0, -1), Complex(0, 1), 0;
        z << 1, 0, 0, -1;
        ops.push_back(x);
        ops.push_back(y);
        ops.push_back(z);
        return ops;
    }
    for (int j = 0; j < d; ++j)
        for (int k = j + 1; k < d; ++k) {
            Matrix sym = Matrix::Zero(d, d), asym = Matrix::Zero(d, d);
            sym(j, k) = sym(k, j) = 1.0;
            asym(j, k) = Complex(0, -1);
            asym(k, j) = Complex(0, 1);
            ops.push_back(sym);
            ops.push_back(asym);
        }
    for (int l = 1; l < d; ++l) {
        Matrix diag = Matrix::Zero(d, d);
        for (int j = 0; j < l; ++j) diag(j, j) = 1.0;
        diag(l, l) = -static_cast<double>(l);
        ops.push_back(diag / static_cast<double>(l));  // operator norm l before scaling
    }
    return ops;
}

inline Matrix embed_window(const Matrix& m, const HilbertFactorization& fact, int first_site,
                           int window_size) {
    const std::int64_t pre = fact.prefix_dim(first_site);
    std::int64_t post = 1;
    for (std::size_t s = first_site + window_size; s < fact.num_factors(); ++s) post *= fact.dims[s];
    return kron(kron(Matrix::Identity(pre, pre), m), Matrix::Identity(post, post));
}

}  // namespace detail

// Complete traceless Hermitian generator basis on every contiguous k-site
// window of the chain, unit operator norm each.
inline std::vector<GeneratorTerm> build_generators(const ChainSpec& spec, int k,
                                                   GeneratorBasis basis) {
    if (k < 2 || k > spec.num_sites())
        throw std::invalid_argument("build_generators: k out of range");
    const auto fact = spec.factorization();
    std::vector<GeneratorTerm> out;
    for (int first = 0; first + k <= spec.num_sites(); ++first) {
        std::vector<int> wdims(fact.dims.begin() + first, fact.dims.begin() + first + k);
        std::vector<std::vector<Matrix>> bases;
        for (int d : wdims) bases.push_back(detail::site_basis(d, basis));

        std::vector<int> idx(k, 0);
        while (true) {
            // advance mixed-radix counter
            int s = k - 1;
            while (s >= 0) {
                if (++idx[s] < static_cast<int>(bases[s].size())) break;
                idx[s] = 0;
                --s;
            }
            if (s < 0) break;
            Matrix m = bases[0][idx[0]];
            for (int t = 1; t < k; ++t) m = kron(m, bases[t][idx[t]]);
            std::string label = "w" + std::to_string(first) + ":";
            for (int t = 0; t < k; ++t) label += (t ? "," : "") + std::to_string(idx[t]);
            out.push_back(make_generator(std::move(label), std::move(m), first, wdims));
        }
    }
    return out;
}

inline Matrix slice_hamiltonian(const Schedule& schedule, const Slice& slice,
                                const HilbertFactorization& fact) {
    const auto dim = fact.total_dim();
    Matrix h = Matrix::Zero(dim, dim);
    for (const auto& [label, y] : slice.coefficients) {
        const auto& t = schedule.term(label);
        h += y * detail::embed_window(t.matrix, fact, t.first_site, t.window_size());
    }
    return h;
}

inline std::vector<double> cut_entropy_profile(const DensityMatrix& rho) {
    std::vector<double> out;
    for (std::size_t keep = 1; keep < rho.factorization.num_factors(); ++keep)
        out.push_back(von_neumann_entropy(partial_trace_keep_prefix(rho, keep)));
    return out;
}

// Path-ordered evolution, e^{-i dt H} per substep, recording the full state
// and all cut entropies after each substep.
inline Trajectory evolve_schedule(const DensityMatrix& initial, const Schedule& schedule,
                                  int substeps = 64) {
    if (substeps < 1) throw std::invalid_argument("evolve_schedule: substeps must be >= 1");
    schedule.validate();
    Trajectory traj;
    traj.factorization = initial.factorization;
    traj.states.push_back(initial);
    traj.cut_entropies.push_back(cut_entropy_profile(initial));
    for (const auto& slice : schedule.slices) {
        Matrix h = slice_hamiltonian(schedule, slice, initial.factorization);
        Matrix u = hermitian_exponential(h, -slice.duration / substeps);
        for (int s = 0; s < substeps; ++s) {
            const auto& prev = traj.states.back();
            DensityMatrix next(prev.factorization, u * prev.entries * u.adjoint());
            traj.cut_entropies.push_back(cut_entropy_profile(next));
            traj.states.push_back(std::move(next));
        }
    }
    return traj;
}

// Symmetric (Strang) product-formula evolution over the individual generator
// terms, second-order in the substep size. The per-slice exponential in
// evolve_schedule is exact; this path exists to expose the discretization
// error of term-by-term trotterization.
inline DensityMatrix evolve_schedule_trotter(const DensityMatrix& initial, const Schedule& schedule,
                                             int substeps) {
    if (substeps < 1) throw std::invalid_argument("evolve_schedule_trotter: substeps must be >= 1");
    schedule.validate();
    DensityMatrix state = initial;
    for (const auto& slice : schedule.slices) {
        const double dt = slice.duration / substeps;
        std::vector<Matrix> half_steps;
        for (const auto& [label, y] : slice.coefficients) {
            const auto& t = schedule.term(label);
            Matrix h = y * detail::embed_window(t.matrix, initial.factorization, t.first_site,
                                                t.window_size());
            half_steps.push_back(hermitian_exponential(h, -dt / 2.0));
        }
        Matrix step = Matrix::Identity(state.dim(), state.dim());
        for (const auto& u : half_steps) step = u * step;
        for (auto it = half_steps.rbegin(); it != half_steps.rend(); ++it) step = (*it) * step;
        for (int s = 0; s < substeps; ++s)
            state = DensityMatrix(state.factorization, step * state.entries * step.adjoint());
    }
    return state;
}

inline double schedule_cost(const Schedule& schedule, CostMode mode = CostMode::unweighted) {
    double cost = 0.0;
    for (const auto& slice : schedule.slices)
        for (const auto& [label, y] : slice.coefficients) {
            const double w = (mode == CostMode::distance_penalty) ? schedule.term(label).penalty : 1.0;
            cost += slice.duration * w * std::abs(y);
        }
    return cost;
}

// Cost restricted to generators acting nontrivially on both sides of `cut`.
inline double schedule_cost_crossing_cut(const Schedule& schedule, int cut) {
    double cost = 0.0;
    for (const auto& slice : schedule.slices)
        for (const auto& [label, y] : slice.coefficients)
            if (schedule.term(label).crosses_cut(cut)) cost += slice.duration * std::abs(y);
    return cost;
}

// |S(rho_i(final)) - S(rho_i(initial))| per cut, in the given log base.
inline std::vector<double> entropy_flow(const Trajectory& traj, double log_base = std::exp(1.0)) {
    if (traj.cut_entropies.size() < 2)
        throw std::invalid_argument("entropy_flow: trajectory has fewer than 2 records");
    std::vector<double> out;
    const auto& first = traj.cut_entropies.front();
    const auto& last = traj.cut_entropies.back();
    for (std::size_t i = 0; i < first.size(); ++i)
        out.push_back(std::abs(last[i] - first[i]) / std::log(log_base));
    return out;
}

namespace detail {

inline std::vector<int> digits_of(std::int64_t index, const std::vector<int>& dims) {
    std::vector<int> out(dims.size());
    for (std::size_t s = dims.size(); s-- > 0;) {
        out[s] = static_cast<int>(index % dims[s]);
        index /= dims[s];
    }
    return out;
}

inline std::int64_t index_of(const std::vector<int>& digits, const std::vector<int>& dims) {
    std::int64_t idx = 0;
    for (std::size_t s = 0; s < dims.size(); ++s) idx = idx * dims[s] + digits[s];
    return idx;
}

// Transposition (x, y) as a palindrome of adjacent-index transpositions:
// T(x,y) = T(x,x+1) ... T(y-2,y-1) T(y-1,y) T(y-2,y-1) ... T(x,x+1).
inline std::vector<std::pair<std::int64_t, std::int64_t>> route_transposition(std::int64_t x,
                                                                              std::int64_t y) {
    if (x > y) std::swap(x, y);
    std::vector<std::pair<std::int64_t, std::int64_t>> out;
    for (std::int64_t j = x; j + 1 < y; ++j) out.emplace_back(j, j + 1);
    out.emplace_back(y - 1, y);
    for (std::int64_t j = y - 1; j-- > x;) out.emplace_back(j, j + 1);
    return out;
}

}  // namespace detail

// Compiles a basis permutation of the full chain into a schedule of two-level
// rotations between nearest-neighbor basis levels (Givens generators, angle
// pi/2 each), routed through adjacent-index transpositions. The compiled
// unitary equals the permutation matrix up to signs on individual elements,
// which drop out under conjugation of basis-diagonal states. Correctness over
// optimality: the cost is an upper bound on the complexity of the permutation.
inline Schedule compile_permutation(const std::vector<std::int64_t>& perm, const ChainSpec& spec) {
    const auto fact = spec.factorization();
    const auto dim = fact.total_dim();
    if (dim > (std::int64_t{1} << 10))
        throw std::invalid_argument("compile_permutation: dimension cap 2^10 exceeded");
    if (static_cast<std::int64_t>(perm.size()) != dim)
        throw std::invalid_argument("compile_permutation: permutation length mismatch");

    // cycle decomposition into transpositions
    std::vector<std::pair<std::int64_t, std::int64_t>> transpositions;
    std::vector<bool> seen(perm.size(), false);
    for (std::size_t start = 0; start < perm.size(); ++start) {
        if (seen[start] || perm[start] == static_cast<std::int64_t>(start)) continue;
        std::vector<std::int64_t> cycle;
        std::int64_t cur = static_cast<std::int64_t>(start);
        while (!seen[cur]) {
            seen[cur] = true;
            cycle.push_back(cur);
            cur = perm[cur];
        }
        // cycle c0 -> c1 -> ... -> cm -> c0 equals T(c0,c1)...T(c_{m-1},c_m)
        // with the rightmost factor applied first
        for (std::size_t i = cycle.size(); i-- > 1;)
            transpositions.emplace_back(cycle[i - 1], cycle[i]);
    }

    std::vector<std::pair<std::int64_t, std::int64_t>> moves;
    for (const auto& [x, y] : transpositions) {
        auto routed = detail::route_transposition(x, y);
        moves.insert(moves.end(), routed.begin(), routed.end());
    }

    Schedule schedule;
    if (moves.empty()) return schedule;

    const double slice_duration = 1.0 / static_cast<double>(moves.size());
    int counter = 0;
    for (const auto& [a, b] : moves) {
        Matrix g = Matrix::Zero(dim, dim);
        g(a, b) = Complex(0, -1);
        g(b, a) = Complex(0, 1);
        std::string label = "givens" + std::to_string(counter++);
        schedule.terms.push_back(make_generator(label, std::move(g), 0, fact.dims));

        Slice slice;
        slice.duration = slice_duration;
        slice.coefficients[label] = (M_PI / 2.0) / slice_duration;
        schedule.slices.push_back(std::move(slice));
    }
    return schedule;
}

// Exact unitary action of the compiled two-level rotation sequence, for
// cross-checks against the raw permutation matrix.
inline Matrix schedule_unitary(const Schedule& schedule, const HilbertFactorization& fact) {
    const auto dim = fact.total_dim();
    Matrix u = Matrix::Identity(dim, dim);
    for (const auto& slice : schedule.slices) {
        Matrix h = slice_hamiltonian(schedule, slice, fact);
        u = hermitian_exponential(h, -slice.duration) * u;
    }
    return u;
}

}  // namespace embz
