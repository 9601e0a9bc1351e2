#pragma once

// Universal embezzling families and the embezzlement protocol, one- and
// two-sided. Basis convention throughout: embezzler index is the major
// (leftmost) factor, catalyst indices follow.

#include "embz/qcore.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

namespace embz {

// Schmidt-rank-N catalyst with probabilities p_j = (1/j)/H_N.
struct VdhFamily {
    int N;
    explicit VdhFamily(int n) : N(n) {
        if (N < 2) throw std::invalid_argument("VdhFamily: N must be >= 2");
    }
};

// Infinite-tensor-product style state built from alternating
// diag(1, lambda)/(1 + lambda) two-level blocks.
struct ItpFamily {
    double lambda1;
    double lambda2;
    int n_pairs;
    ItpFamily(double l1, double l2, int pairs) : lambda1(l1), lambda2(l2), n_pairs(pairs) {
        if (!(lambda1 > 0.0 && lambda1 < 1.0 && lambda2 > 0.0 && lambda2 < 1.0))
            throw std::invalid_argument("ItpFamily: lambdas must lie in (0,1)");
        if (lambda1 == lambda2) throw std::invalid_argument("ItpFamily: lambdas must be distinct");
        if (n_pairs < 1) throw std::invalid_argument("ItpFamily: n_pairs must be >= 1");
    }
};

// Initial product state phi and entangled target psi of the embezzling
// system, each a bipartite ket on d_e x d_e.
struct EmbezzleTask {
    Ket phi;
    Ket psi;
    int d_e;

    EmbezzleTask(Ket phi_in, Ket psi_in, int de)
        : phi(std::move(phi_in)), psi(std::move(psi_in)), d_e(de) {
        HilbertFactorization expected({de, de});
        if (!(phi.factorization == expected) || !(psi.factorization == expected))
            throw std::invalid_argument("EmbezzleTask: states must live on d_e x d_e");
        if (schmidt_spectrum(psi, 1).size() < 2 || schmidt_spectrum(psi, 1)[1] <= kEigClamp)
            throw std::invalid_argument("EmbezzleTask: psi must have Schmidt rank >= 2");
    }
};

// phi = |00>, psi = rank-d maximally entangled state embedded in d_e x d_e.
inline EmbezzleTask epr_task(int d, int d_e) {
    if (d < 2 || d_e < d) throw std::invalid_argument("epr_task: need 2 <= d <= d_e");
    HilbertFactorization fact({d_e, d_e});
    Vector psi = Vector::Zero(fact.total_dim());
    for (int j = 0; j < d; ++j) psi(static_cast<std::int64_t>(j) * d_e + j) = 1.0 / std::sqrt(d);
    return EmbezzleTask(basis_ket(fact, 0), Ket(fact, std::move(psi)), d_e);
}

// Schmidt-diagonal task from explicit squared Schmidt coefficients.
inline EmbezzleTask schmidt_task(const std::vector<double>& phi_probs,
                                 const std::vector<double>& psi_probs, int d_e) {
    HilbertFactorization fact({d_e, d_e});
    auto build = [&](const std::vector<double>& probs) {
        Vector v = Vector::Zero(fact.total_dim());
        for (std::size_t j = 0; j < probs.size(); ++j)
            v(static_cast<std::int64_t>(j) * d_e + j) = std::sqrt(probs[j]);
        return Ket(fact, std::move(v));
    };
    return EmbezzleTask(build(phi_probs), build(psi_probs), d_e);
}

inline std::vector<double> vdh_schmidt_vector(int N) {
    if (N < 2) throw std::invalid_argument("vdh_schmidt_vector: N must be >= 2");
    std::vector<double> p(N);
    double h = 0.0;
    for (int j = 1; j <= N; ++j) h += 1.0 / j;
    for (int j = 1; j <= N; ++j) p[j - 1] = (1.0 / j) / h;
    return p;
}

// One-sided reduction of a bipartite ket, as squared Schmidt coefficients in
// the ket's own basis order (diagonal states only) padded to length d_e.
inline std::vector<double> one_sided_spectrum(const Ket& psi, int d_e) {
    auto s = schmidt_spectrum(psi, 1);
    s.resize(d_e, 0.0);
    return s;
}

struct EmbezzlePermutation {
    std::vector<std::int64_t> perm;  // perm[source index] = target index
    double achieved_overlap;
};

// Sorted-spectra matching of catalyst (x) phi against catalyst (x) psi over
// the joint index e * len(catalyst) + c. The achieved overlap is
// sum_r sqrt(a_r b_r) over the descending-sorted spectra.
inline EmbezzlePermutation embezzle_permutation(const std::vector<double>& catalyst,
                                                const EmbezzleTask& task) {
    const auto nc = static_cast<std::int64_t>(catalyst.size());
    const auto spec_phi = one_sided_spectrum(task.phi, task.d_e);
    const auto spec_psi = one_sided_spectrum(task.psi, task.d_e);
    const std::int64_t len = nc * task.d_e;

    std::vector<double> a(len), b(len);
    for (int e = 0; e < task.d_e; ++e)
        for (std::int64_t c = 0; c < nc; ++c) {
            a[e * nc + c] = catalyst[c] * spec_phi[e];
            b[e * nc + c] = catalyst[c] * spec_psi[e];
        }

    std::vector<std::int64_t> order_a(len), order_b(len);
    std::iota(order_a.begin(), order_a.end(), 0);
    std::iota(order_b.begin(), order_b.end(), 0);
    std::stable_sort(order_a.begin(), order_a.end(),
                     [&](std::int64_t i, std::int64_t j) { return a[i] > a[j]; });
    std::stable_sort(order_b.begin(), order_b.end(),
                     [&](std::int64_t i, std::int64_t j) { return b[i] > b[j]; });

    EmbezzlePermutation out;
    out.perm.resize(len);
    out.achieved_overlap = 0.0;
    for (std::int64_t r = 0; r < len; ++r) {
        out.perm[order_a[r]] = order_b[r];
        out.achieved_overlap += std::sqrt(a[order_a[r]] * b[order_b[r]]);
    }
    return out;
}

inline Matrix permutation_matrix(const std::vector<std::int64_t>& perm) {
    const auto n = static_cast<Eigen::Index>(perm.size());
    Matrix p = Matrix::Zero(n, n);
    for (Eigen::Index src = 0; src < n; ++src) p(perm[src], src) = 1.0;
    return p;
}

inline DensityMatrix diagonal_state(const HilbertFactorization& fact,
                                    const std::vector<double>& probs) {
    Vector d = Vector::Zero(fact.total_dim());
    for (std::size_t i = 0; i < probs.size(); ++i) d(static_cast<Eigen::Index>(i)) = probs[i];
    return DensityMatrix(fact, Matrix(d.asDiagonal()));
}

inline bool is_unitary(const Matrix& u, double tol = 1e-9) {
    return (u.adjoint() * u - Matrix::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff() <= tol;
}

// || U (phi_A (x) omega) U^dag - psi_A (x) omega ||_1 with the one-sided
// reductions of the task states on the embezzler (major) factor.
inline double one_sided_deviation(const DensityMatrix& omega, const EmbezzleTask& task,
                                  const Matrix& u) {
    const auto nc = omega.dim();
    if (u.rows() != nc * task.d_e || u.cols() != nc * task.d_e)
        throw std::invalid_argument("one_sided_deviation: unitary dimension mismatch");
    if (!is_unitary(u)) throw std::invalid_argument("one_sided_deviation: U is not unitary");
    Matrix phi_a = partial_trace_keep_prefix(pure_state(task.phi), 1).entries;
    Matrix psi_a = partial_trace_keep_prefix(pure_state(task.psi), 1).entries;
    Matrix initial = kron(phi_a, omega.entries);
    Matrix target = kron(psi_a, omega.entries);
    return trace_norm(u * initial * u.adjoint() - target);
}

// |<Omega, psi_e| U_A (x) U_B |Omega, phi>| for a bipartite catalyst ket.
// U_A acts on (A_e, A_c), U_B on (B_e, B_c), embezzler-major.
inline double two_sided_overlap(const Ket& omega_ket, const EmbezzleTask& task, const Matrix& u_a,
                                const Matrix& u_b) {
    if (omega_ket.factorization.num_factors() != 2)
        throw std::invalid_argument("two_sided_overlap: catalyst ket must be bipartite");
    const std::int64_t dac = omega_ket.factorization.dims[0];
    const std::int64_t dbc = omega_ket.factorization.dims[1];
    if (u_a.rows() != task.d_e * dac || u_b.rows() != task.d_e * dbc)
        throw std::invalid_argument("two_sided_overlap: unitary dimension mismatch");

    Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> w(
        omega_ket.amplitudes.data(), dac, dbc);
    Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> phim(
        task.phi.amplitudes.data(), task.d_e, task.d_e);
    Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> psim(
        task.psi.amplitudes.data(), task.d_e, task.d_e);

    Matrix x = kron(Matrix(phim), Matrix(w));   // initial, rows (A_e,A_c), cols (B_e,B_c)
    Matrix t = kron(Matrix(psim), Matrix(w));   // target
    Complex ov = (t.adjoint() * u_a * x * u_b.transpose()).trace();
    return std::abs(ov);
}

struct UhlmannPartner {
    Matrix w;        // unitary on the purifying factor
    double overlap;  // |<purif(target)| (1 (x) W) |purif(evolved)>| = sqrt(F)
};

// Purifying unitary aligning the standard purifications of two states,
// built from the polar decomposition of the cross-Gram matrix.
inline UhlmannPartner uhlmann_partner(const DensityMatrix& rho_evolved,
                                      const DensityMatrix& rho_target, int purification_dim) {
    if (rho_evolved.dim() != rho_target.dim())
        throw std::invalid_argument("uhlmann_partner: dimension mismatch");
    const auto n = rho_evolved.dim();

    Eigen::SelfAdjointEigenSolver<Matrix> er(rho_evolved.entries);
    Eigen::SelfAdjointEigenSolver<Matrix> et(rho_target.entries);
    auto rank = [&](const Eigen::VectorXd& lam) {
        int r = 0;
        for (Eigen::Index i = 0; i < lam.size(); ++i)
            if (lam(i) > kEigClamp) ++r;
        return r;
    };
    if (purification_dim < std::max(rank(er.eigenvalues()), rank(et.eigenvalues())))
        throw std::invalid_argument("uhlmann_partner: purification_dim below state rank");

    const int r = static_cast<int>(std::min<std::int64_t>(n, purification_dim));
    // Cross-Gram over the purifier slots: G(k,l) = sqrt(l_k) sqrt(m_l) <v_l|u_k>.
    Matrix g = Matrix::Zero(r, r);
    for (int k = 0; k < r; ++k)
        for (int l = 0; l < r; ++l) {
            // Descending eigenvalue order so the leading slots carry the rank.
            const auto ik = static_cast<Eigen::Index>(n - 1 - k);
            const auto il = static_cast<Eigen::Index>(n - 1 - l);
            double lk = std::max(0.0, er.eigenvalues()(ik));
            double ml = std::max(0.0, et.eigenvalues()(il));
            g(k, l) = std::sqrt(lk) * std::sqrt(ml) *
                      (et.eigenvectors().col(il).adjoint() * er.eigenvectors().col(ik))(0, 0);
        }

    Eigen::JacobiSVD<Matrix> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Matrix w_small = svd.matrixV() * svd.matrixU().adjoint();

    UhlmannPartner out;
    out.w = Matrix::Identity(purification_dim, purification_dim);
    out.w.topLeftCorner(r, r) = w_small;
    out.overlap = std::abs((w_small * g).trace());
    return out;
}

// Tensor product of `sites` alternating two-level blocks, lambda1 first.
inline DensityMatrix itp_reduced_state(const ItpFamily& family, int sites) {
    if (sites < 0 || sites > 2 * family.n_pairs || sites % 2 != 0)
        throw std::invalid_argument("itp_reduced_state: sites must be even and within range");
    if (sites == 0) return DensityMatrix(HilbertFactorization{}, Matrix::Ones(1, 1));
    HilbertFactorization fact(std::vector<int>(sites, 2));
    Vector diag(fact.total_dim());
    for (std::int64_t idx = 0; idx < fact.total_dim(); ++idx) {
        double v = 1.0;
        for (int s = 0; s < sites; ++s) {
            const double lam = (s % 2 == 0) ? family.lambda1 : family.lambda2;
            const bool excited = (idx >> (sites - 1 - s)) & 1;
            v *= (excited ? lam : 1.0) / (1.0 + lam);
        }
        diag(idx) = v;
    }
    return DensityMatrix(fact, Matrix(diag.asDiagonal()));
}

// |S(phi_A) - S(psi_A)| in the given log base.
inline double entanglement_delta(const EmbezzleTask& task, double log_base = std::exp(1.0)) {
    return std::abs(shannon_entropy(schmidt_spectrum(task.phi, 1), log_base) -
                    shannon_entropy(schmidt_spectrum(task.psi, 1), log_base));
}

}  // namespace embz
