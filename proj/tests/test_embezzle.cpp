#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "embz/embezzle.hpp"
#include "embz/verify.hpp"

#include <random>

using namespace embz;

TEST_CASE("vdh schmidt vector") {
    auto p2 = vdh_schmidt_vector(2);
    CHECK(std::abs(p2[0] - 2.0 / 3.0) < 1e-15);
    CHECK(std::abs(p2[1] - 1.0 / 3.0) < 1e-15);

    auto p4 = vdh_schmidt_vector(4);
    const double expected4[] = {0.48, 0.24, 0.16, 0.12};
    for (int j = 0; j < 4; ++j) CHECK(std::abs(p4[j] - expected4[j]) < 1e-15);

    CHECK_THROWS(vdh_schmidt_vector(1));

    for (int N : {2, 17, 512}) {
        double sum = 0.0;
        for (double v : vdh_schmidt_vector(N)) sum += v;
        CHECK(std::abs(sum - 1.0) < 1e-12);
    }
}

TEST_CASE("embezzle permutation: trivial task is the identity") {
    auto task = epr_task(2, 2);
    EmbezzleTask same(task.psi, task.psi, 2);
    auto p = embezzle_permutation(vdh_schmidt_vector(4), same);
    CHECK(std::abs(p.achieved_overlap - 1.0) < 1e-12);
    for (std::size_t i = 0; i < p.perm.size(); ++i) CHECK(p.perm[i] == static_cast<std::int64_t>(i));
}

TEST_CASE("embezzle permutation overlaps for small N") {
    auto task = epr_task(2, 2);
    auto p2 = embezzle_permutation(vdh_schmidt_vector(2), task);
    // sorted-spectra overlap of (2/3,1/3,0,0) vs (1/3,1/3,1/6,1/6)
    CHECK(std::abs(p2.achieved_overlap - (std::sqrt(2.0) / 3.0 + 1.0 / 3.0)) < 1e-12);

    auto p4 = embezzle_permutation(vdh_schmidt_vector(4), task);
    // oracle: direct summation over the sorted spectra
    std::vector<double> a{0.48, 0.24, 0.16, 0.12, 0, 0, 0, 0};
    std::vector<double> b{0.24, 0.24, 0.12, 0.12, 0.08, 0.08, 0.06, 0.06};
    double expected = 0.0;
    for (int i = 0; i < 8; ++i) expected += std::sqrt(a[i] * b[i]);
    CHECK(std::abs(p4.achieved_overlap - expected) < 1e-12);
    CHECK(std::abs(p4.achieved_overlap - 0.8380) < 1e-4);
    CHECK(1.0 - p4.achieved_overlap <= std::log(2.0) / std::log(4.0));
}

TEST_CASE("vdh precision law and monotonicity in N") {
    for (int d : {2, 3, 4}) {
        auto task = epr_task(d, d);
        double prev = 0.0;
        for (int N = 2; N <= 4096; N *= 2) {
            auto p = embezzle_permutation(vdh_schmidt_vector(N), task);
            CHECK(1.0 - p.achieved_overlap <= std::log(d) / std::log(N) + 1e-12);
            CHECK(p.achieved_overlap >= prev - 1e-12);
            prev = p.achieved_overlap;
        }
    }
}

TEST_CASE("one sided deviation: identity cases") {
    auto catalyst = vdh_schmidt_vector(4);
    DensityMatrix omega = diagonal_state(HilbertFactorization({4}), catalyst);

    auto task = epr_task(2, 2);
    EmbezzleTask same(task.psi, task.psi, 2);
    CHECK(one_sided_deviation(omega, same, Matrix::Identity(8, 8)) < 1e-12);

    // phi pure vs psi maximally mixed on one side: ||phi_A - psi_A||_1 = 1
    CHECK(std::abs(one_sided_deviation(omega, task, Matrix::Identity(8, 8)) - 1.0) < 1e-12);

    CHECK_THROWS(one_sided_deviation(omega, task, Matrix::Identity(4, 4)));
    CHECK_THROWS(one_sided_deviation(omega, task, Matrix(2.0 * Matrix::Identity(8, 8))));
}

TEST_CASE("one sided deviation of the vdh permutation") {
    auto task = epr_task(2, 2);
    double prev = std::numeric_limits<double>::infinity();
    for (int N : {4, 16, 64}) {
        auto catalyst = vdh_schmidt_vector(N);
        auto p = embezzle_permutation(catalyst, task);
        DensityMatrix omega = diagonal_state(HilbertFactorization({N}), catalyst);
        const double dev = one_sided_deviation(omega, task, permutation_matrix(p.perm));

        // oracle: sorted-spectra l1 distance
        std::vector<double> a(2 * N, 0.0), b(2 * N, 0.0);
        for (int c = 0; c < N; ++c) {
            a[c] = catalyst[c];
            b[c] = catalyst[c] / 2.0;
            b[N + c] = catalyst[c] / 2.0;
        }
        std::sort(a.begin(), a.end(), std::greater<>());
        std::sort(b.begin(), b.end(), std::greater<>());
        double expected = 0.0;
        for (int i = 0; i < 2 * N; ++i) expected += std::abs(a[i] - b[i]);
        CHECK(std::abs(dev - expected) < 1e-10);

        // Fuchs-van de Graaf style cap and decrease in N
        CHECK(dev <= 2.0 * std::sqrt(2.0 * (1.0 - p.achieved_overlap)) + 1e-12);
        CHECK(dev < prev);
        prev = dev;
    }
}

TEST_CASE("two sided overlap") {
    auto task = epr_task(2, 2);
    HilbertFactorization f22({2, 2});
    Vector omega_amp = Vector::Zero(4);
    auto p2 = vdh_schmidt_vector(2);
    omega_amp(0) = std::sqrt(p2[0]);
    omega_amp(3) = std::sqrt(p2[1]);
    Ket omega(f22, omega_amp);

    EmbezzleTask same(task.psi, task.psi, 2);
    CHECK(std::abs(two_sided_overlap(omega, same, Matrix::Identity(4, 4),
                                     Matrix::Identity(4, 4)) - 1.0) < 1e-12);

    // psi orthogonal to phi, identity unitaries
    Vector psi_orth = Vector::Zero(4);
    psi_orth(1) = psi_orth(2) = 1.0 / std::sqrt(2.0);
    EmbezzleTask orth(task.phi, Ket(HilbertFactorization({2, 2}), psi_orth), 2);
    CHECK(two_sided_overlap(omega, orth, Matrix::Identity(4, 4), Matrix::Identity(4, 4)) < 1e-12);

    // mirrored vdh permutations reproduce the sorted-spectra overlap
    auto p = embezzle_permutation(p2, task);
    Matrix u = permutation_matrix(p.perm);
    const double ov = two_sided_overlap(omega, task, u, u);
    CHECK(std::abs(ov - p.achieved_overlap) < 1e-9);
    CHECK(std::abs(ov - 0.8047) < 1e-4);
}

TEST_CASE("two sided overlap matches one-sided construction for larger N") {
    auto task = epr_task(2, 2);
    for (int N : {4, 8}) {
        auto catalyst = vdh_schmidt_vector(N);
        HilbertFactorization fc({N, N});
        Vector amp = Vector::Zero(static_cast<Eigen::Index>(N) * N);
        for (int j = 0; j < N; ++j) amp(static_cast<Eigen::Index>(j) * N + j) = std::sqrt(catalyst[j]);
        Ket omega(fc, amp);
        auto p = embezzle_permutation(catalyst, task);
        Matrix u = permutation_matrix(p.perm);
        CHECK(std::abs(two_sided_overlap(omega, task, u, u) - p.achieved_overlap) < 1e-9);
    }
}

TEST_CASE("uhlmann partner") {
    auto k0 = pure_state(basis_ket(HilbertFactorization({2}), 0));
    auto partner = uhlmann_partner(k0, k0, 2);
    CHECK(std::abs(partner.overlap - 1.0) < 1e-12);

    // two pure states: overlap |<a|b>|
    HilbertFactorization f2({2});
    Vector b(2);
    b << std::cos(0.3), std::sin(0.3);
    auto kb = pure_state(Ket(f2, b));
    CHECK(std::abs(uhlmann_partner(k0, kb, 2).overlap - std::cos(0.3)) < 1e-8);

    // maximally mixed vs pure: sqrt(F) = sqrt(1/2)
    auto half = maximally_mixed(f2);
    CHECK(std::abs(uhlmann_partner(half, k0, 2).overlap - std::sqrt(0.5)) < 1e-8);

    CHECK_THROWS(uhlmann_partner(half, k0, 1));

    // random states: purification overlap equals sqrt(fidelity)
    for (int t = 0; t < 10; ++t) {
        std::mt19937_64 rng(500 + t);
        auto rho = random_mixed_state(HilbertFactorization({4}), rng);
        auto sigma = random_mixed_state(HilbertFactorization({4}), rng);
        auto up = uhlmann_partner(rho, sigma, 4);
        CHECK(is_unitary(up.w, 1e-9));
        CHECK(std::abs(up.overlap - std::sqrt(fidelity(rho, sigma))) < 1e-8);
    }
}

TEST_CASE("itp reduced state") {
    ItpFamily fam(0.5, 0.25, 4);
    CHECK_THROWS(itp_reduced_state(fam, 3));
    CHECK_THROWS(itp_reduced_state(fam, 10));

    auto empty = itp_reduced_state(fam, 0);
    CHECK(empty.dim() == 1);
    CHECK(std::abs(empty.entries(0, 0).real() - 1.0) < 1e-15);

    auto two = itp_reduced_state(fam, 2);
    const double z = 1.875;  // (1 + 0.5)(1 + 0.25)
    const double expected[] = {1.0 / z, 0.25 / z, 0.5 / z, 0.125 / z};
    for (int i = 0; i < 4; ++i) CHECK(std::abs(two.entries(i, i).real() - expected[i]) < 1e-14);

    for (int sites : {2, 4, 6, 8}) CHECK(std::abs(trace_norm(itp_reduced_state(fam, sites).entries) - 1.0) < 1e-12);
}

TEST_CASE("entanglement delta") {
    auto task = epr_task(2, 2);
    EmbezzleTask same(task.psi, task.psi, 2);
    CHECK(entanglement_delta(same) < 1e-12);
    CHECK(std::abs(entanglement_delta(task) - std::log(2.0)) < 1e-12);
    CHECK(std::abs(entanglement_delta(task, 2.0) - 1.0) < 1e-12);
    for (int d : {3, 4}) CHECK(std::abs(entanglement_delta(epr_task(d, d)) - std::log(d)) < 1e-12);
}

TEST_CASE("task validation") {
    auto task = epr_task(2, 2);
    CHECK_THROWS(EmbezzleTask(task.phi, task.phi, 2));  // psi must be entangled
    CHECK_THROWS(epr_task(2, 1));
    CHECK_THROWS(epr_task(1, 2));
}
