#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "embz/circuit.hpp"
#include "embz/embezzle.hpp"
#include "embz/verify.hpp"

#include <random>

using namespace embz;

namespace {

Schedule single_term_schedule(const ChainSpec& spec, GeneratorBasis basis,
                              const std::string& label, double y) {
    Schedule sched;
    sched.terms = build_generators(spec, 2, basis);
    Slice slice;
    slice.duration = 1.0;
    slice.coefficients[label] = y;
    sched.slices.push_back(std::move(slice));
    return sched;
}

}  // namespace

TEST_CASE("generator basis: counts and invariants") {
    ChainSpec spec(2, 2, 2);
    auto gens = build_generators(spec, 2, GeneratorBasis::pauli_like);
    CHECK(gens.size() == 30);  // 2 windows x (16 - 1)

    int window0 = 0, window1 = 0;
    for (const auto& g : gens) {
        CHECK(std::abs(g.matrix.trace()) < 1e-12);
        CHECK(std::abs(operator_norm(g.matrix) - 1.0) < 1e-10);
        CHECK((g.matrix - g.matrix.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
        if (g.first_site == 0) ++window0;
        if (g.first_site == 1) ++window1;
    }
    CHECK(window0 == 15);
    CHECK(window1 == 15);

    // together with the identity, a window's generators span all of 4x4
    Eigen::MatrixXcd stacked(16, 16);
    stacked.col(0) = Eigen::Map<const Eigen::VectorXcd>(
        Matrix(Matrix::Identity(4, 4)).data(), 16);
    int col = 1;
    for (const auto& g : gens)
        if (g.first_site == 0)
            stacked.col(col++) = Eigen::Map<const Eigen::VectorXcd>(g.matrix.data(), 16);
    CHECK(Eigen::ColPivHouseholderQR<Eigen::MatrixXcd>(stacked).rank() == 16);
}

TEST_CASE("generator basis: window count is n and qutrits work") {
    for (int n : {1, 3, 5}) {
        auto gens = build_generators(ChainSpec(n, 2, 2), 2, GeneratorBasis::pauli_like);
        CHECK(gens.size() == static_cast<std::size_t>(n) * 15);
    }

    auto qutrit = build_generators(ChainSpec(1, 3, 3), 2, GeneratorBasis::gellmann_like);
    CHECK(qutrit.size() == 80);  // 9*9 - 1
    for (const auto& g : qutrit) {
        CHECK(std::abs(g.matrix.trace()) < 1e-12);
        CHECK(std::abs(operator_norm(g.matrix) - 1.0) < 1e-10);
    }

    CHECK_THROWS(build_generators(ChainSpec(1, 3, 3), 2, GeneratorBasis::pauli_like));
    CHECK_THROWS(build_generators(ChainSpec(2, 2, 2), 1, GeneratorBasis::pauli_like));
    CHECK_THROWS(build_generators(ChainSpec(2, 2, 2), 4, GeneratorBasis::pauli_like));
}

TEST_CASE("make_generator rejects malformed terms") {
    Matrix x(2, 2), z(2, 2);
    x << 0, 1, 1, 0;
    z << 1, 0, 0, -1;
    CHECK_NOTHROW(make_generator("x", x, 0, {2}));
    CHECK_THROWS(make_generator("scaled", Matrix(0.5 * x), 0, {2}));
    CHECK_THROWS(make_generator("traceful", Matrix(Matrix::Identity(2, 2)), 0, {2}));
    Matrix nh(2, 2);
    nh << 0, 1, 0, 0;
    CHECK_THROWS(make_generator("nonhermitian", nh, 0, {2}));
    CHECK_THROWS(make_generator("penalty", x, 0, {2}, -1.0));
}

TEST_CASE("evolve_schedule: empty schedule leaves the state unchanged") {
    ChainSpec spec(2, 2, 2);
    Schedule empty;
    auto initial = pure_state(basis_ket(spec.factorization(), 0));
    auto traj = evolve_schedule(initial, empty, 8);
    CHECK(traj.states.size() == 1);
    CHECK((traj.states[0].entries - initial.entries).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("evolve_schedule: sigma_x rotation flips the embezzler") {
    ChainSpec spec(2, 2, 2);
    auto sched = single_term_schedule(spec, GeneratorBasis::pauli_like, "w0:1,0", M_PI / 2.0);
    auto initial = pure_state(basis_ket(spec.factorization(), 0));
    auto traj = evolve_schedule(initial, sched, 16);
    auto flipped = pure_state(basis_ket(spec.factorization(), 4));  // |100>
    CHECK(std::abs(fidelity(traj.states.back(), flipped) - 1.0) < 1e-10);
    CHECK(std::abs(schedule_cost(sched) - M_PI / 2.0) < 1e-12);
}

TEST_CASE("evolve_schedule: SWAP synthesis on sites (1,2)") {
    ChainSpec spec(2, 2, 2);
    Schedule sched;
    sched.terms = build_generators(spec, 2, GeneratorBasis::pauli_like);
    Slice slice;
    slice.duration = 1.0;
    slice.coefficients["w1:1,1"] = M_PI / 4.0;  // XX
    slice.coefficients["w1:2,2"] = M_PI / 4.0;  // YY
    slice.coefficients["w1:3,3"] = M_PI / 4.0;  // ZZ
    sched.slices.push_back(std::move(slice));

    std::mt19937_64 rng(42);
    HilbertFactorization f2({2});
    auto a = random_mixed_state(f2, rng);
    auto b = random_mixed_state(f2, rng);
    auto c = random_mixed_state(f2, rng);
    auto initial = tensor_product(tensor_product(a, b), c);
    auto traj = evolve_schedule(initial, sched, 32);
    auto expected = tensor_product(tensor_product(a, c), b);
    CHECK((traj.states.back().entries - expected.entries).cwiseAbs().maxCoeff() < 1e-8);

    // global entropy conserved along the whole trajectory
    const double s0 = von_neumann_entropy(initial);
    for (const auto& state : traj.states)
        CHECK(std::abs(von_neumann_entropy(state) - s0) < 1e-8);
}

TEST_CASE("evolve_schedule: per-slice exponential is exact in substeps") {
    ChainSpec spec(2, 2, 2);
    std::mt19937_64 rng(7);
    auto gens = build_generators(spec, 2, GeneratorBasis::pauli_like);
    auto sched = random_schedule(gens, rng);
    auto initial = pure_state(haar_random_ket(spec.factorization(), rng));
    auto fine = evolve_schedule(initial, sched, 9).states.back();
    auto coarse = evolve_schedule(initial, sched, 1).states.back();
    CHECK((fine.entries - coarse.entries).cwiseAbs().maxCoeff() < 1e-10);
    CHECK_THROWS(evolve_schedule(initial, sched, 0));
}

TEST_CASE("trotterized evolution converges at second order") {
    ChainSpec spec(2, 2, 2);
    Schedule sched;
    sched.terms = build_generators(spec, 2, GeneratorBasis::pauli_like);
    Slice slice;
    slice.duration = 1.0;
    slice.coefficients["w0:1,0"] = 1.3;  // X on the embezzler
    slice.coefficients["w0:3,3"] = 0.9;  // ZZ on sites (0,1)
    slice.coefficients["w1:1,1"] = -0.7; // XX on sites (1,2)
    sched.slices.push_back(std::move(slice));

    std::mt19937_64 rng(11);
    auto initial = pure_state(haar_random_ket(spec.factorization(), rng));
    auto exact = evolve_schedule(initial, sched, 1).states.back();
    auto error = [&](int substeps) {
        auto approx = evolve_schedule_trotter(initial, sched, substeps);
        return 0.5 * trace_norm(approx.entries - exact.entries);
    };
    const double e4 = error(4), e8 = error(8), e16 = error(16);
    CHECK(e4 > 1e-6);  // the probe is actually sensitive
    CHECK(std::log2(e4 / e8) >= 1.8);
    CHECK(std::log2(e8 / e16) >= 1.8);
}

TEST_CASE("schedule_cost examples and subdivision invariance") {
    Matrix x(2, 2);
    x << 0, 1, 1, 0;
    Schedule sched;
    sched.terms.push_back(make_generator("x", x, 0, {2}));
    sched.terms.push_back(make_generator("xp", x, 1, {2}, 2.5));

    Slice zero;
    zero.duration = 1.0;
    zero.coefficients["x"] = 0.0;
    sched.slices = {zero};
    CHECK(schedule_cost(sched) == 0.0);

    Slice one;
    one.duration = 1.0;
    one.coefficients["x"] = -3.0;
    sched.slices = {one};
    CHECK(std::abs(schedule_cost(sched) - 3.0) < 1e-12);

    Slice s1, s2;
    s1.duration = 0.5;
    s1.coefficients["x"] = 2.0;
    s2.duration = 0.5;
    s2.coefficients["x"] = -4.0;
    sched.slices = {s1, s2};
    CHECK(std::abs(schedule_cost(sched) - 3.0) < 1e-12);

    // distance_penalty weighs by the term's penalty
    Slice sp;
    sp.duration = 1.0;
    sp.coefficients["xp"] = 2.0;
    sched.slices = {sp};
    CHECK(std::abs(schedule_cost(sched, CostMode::distance_penalty) - 5.0) < 1e-12);

    // subdividing slices leaves the cost unchanged
    std::mt19937_64 rng(13);
    ChainSpec spec(2, 2, 2);
    auto gens = build_generators(spec, 2, GeneratorBasis::pauli_like);
    auto rand_sched = random_schedule(gens, rng);
    Schedule split = rand_sched;
    split.slices.clear();
    for (const auto& slice : rand_sched.slices) {
        Slice half = slice;
        half.duration = slice.duration / 2.0;
        split.slices.push_back(half);
        split.slices.push_back(half);
    }
    CHECK(std::abs(schedule_cost(split) - schedule_cost(rand_sched)) < 1e-12);
}

TEST_CASE("schedule validation") {
    Matrix x(2, 2);
    x << 0, 1, 1, 0;
    Schedule sched;
    sched.terms.push_back(make_generator("x", x, 0, {2}));
    Slice bad;
    bad.duration = 0.4;
    bad.coefficients["x"] = 1.0;
    sched.slices = {bad};
    CHECK_THROWS(sched.validate());  // durations must sum to 1
    sched.slices[0].duration = 1.0;
    sched.slices[0].coefficients["unknown"] = 1.0;
    CHECK_THROWS(sched.validate());
}

TEST_CASE("entropy_flow: zeros, locality, and EPR creation") {
    // identity evolution -> all zeros
    ChainSpec small(2, 2, 2);
    Schedule empty_sched;
    empty_sched.terms = build_generators(small, 2, GeneratorBasis::pauli_like);
    Slice idle;
    idle.duration = 1.0;
    empty_sched.slices = {idle};
    auto initial = pure_state(basis_ket(small.factorization(), 3));
    auto traj = evolve_schedule(initial, empty_sched, 4);
    for (double v : entropy_flow(traj)) CHECK(std::abs(v) < 1e-12);

    // action on sites (3,4) leaves cuts 0..2 untouched for product input
    ChainSpec chain(4, 2, 2);
    Schedule far = single_term_schedule(chain, GeneratorBasis::pauli_like, "w3:2,1", 0.8);
    auto product = pure_state(basis_ket(chain.factorization(), 0));
    auto far_traj = evolve_schedule(product, far, 16);
    auto flow = entropy_flow(far_traj);
    REQUIRE(flow.size() == 4);
    for (int cut : {0, 1, 2}) CHECK(std::abs(flow[cut]) < 1e-10);

    // Givens rotation by pi/4 between |00> and |11> on sites (1,2) makes an
    // EPR pair across cut 1
    ChainSpec epr_chain(2, 2, 2);
    Matrix g = Matrix::Zero(4, 4);
    g(0, 3) = Complex(0, -1);
    g(3, 0) = Complex(0, 1);
    Schedule epr_sched;
    epr_sched.terms.push_back(make_generator("g", g, 1, {2, 2}));
    Slice rot;
    rot.duration = 1.0;
    rot.coefficients["g"] = M_PI / 4.0;
    epr_sched.slices = {rot};
    auto epr_traj = evolve_schedule(pure_state(basis_ket(epr_chain.factorization(), 0)),
                                    epr_sched, 16);
    auto epr_flow = entropy_flow(epr_traj);
    REQUIRE(epr_flow.size() == 2);
    CHECK(std::abs(epr_flow[0]) < 1e-10);
    CHECK(std::abs(epr_flow[1] - std::log(2.0)) < 1e-10);

    // base conversion
    auto flow_bits = entropy_flow(epr_traj, 2.0);
    CHECK(std::abs(flow_bits[1] - 1.0) < 1e-10);

    Trajectory short_traj;
    short_traj.cut_entropies = {{0.0}};
    CHECK_THROWS(entropy_flow(short_traj));
}

TEST_CASE("per-cut entropy change obeys the crossing-cost bound") {
    ChainSpec spec(2, 2, 2);
    auto gens = build_generators(spec, 2, GeneratorBasis::pauli_like);
    for (int t = 0; t < 8; ++t) {
        std::mt19937_64 rng(900 + t);
        auto sched = random_schedule(gens, rng);
        auto initial = pure_state(haar_random_ket(spec.factorization(), rng));
        auto traj = evolve_schedule(initial, sched, 48);
        auto flow = entropy_flow(traj);
        double total = 0.0;
        for (std::size_t cut = 0; cut < flow.size(); ++cut) {
            CHECK(flow[cut] <=
                  22.0 * std::log(2.0) * schedule_cost_crossing_cut(sched, static_cast<int>(cut)) +
                      1e-7);
            total += flow[cut];
        }
        CHECK(total <= 22.0 * std::log(2.0) * schedule_cost(sched) + 1e-7);
    }
}

TEST_CASE("compile_permutation: identity and adjacent transpositions") {
    ChainSpec spec(1, 2, 2);
    std::vector<std::int64_t> identity{0, 1, 2, 3};
    auto empty = compile_permutation(identity, spec);
    CHECK(empty.slices.empty());
    CHECK(schedule_cost(empty) == 0.0);

    std::vector<std::int64_t> adjacent{0, 2, 1, 3};
    auto sched = compile_permutation(adjacent, spec);
    CHECK(sched.slices.size() == 1);
    CHECK(std::abs(schedule_cost(sched) - M_PI / 2.0) < 1e-12);
    Matrix u = schedule_unitary(sched, spec.factorization());
    CHECK(std::abs(std::abs(u(2, 1)) - 1.0) < 1e-10);
    CHECK(std::abs(std::abs(u(1, 2)) - 1.0) < 1e-10);
    CHECK(std::abs(std::abs(u(0, 0)) - 1.0) < 1e-10);

    // non-adjacent transposition routes through a palindrome of 5 moves
    std::vector<std::int64_t> far{3, 1, 2, 0};
    auto routed = compile_permutation(far, spec);
    CHECK(routed.slices.size() == 5);
    CHECK(std::abs(schedule_cost(routed) - 5.0 * M_PI / 2.0) < 1e-12);
    Matrix ur = schedule_unitary(routed, spec.factorization());
    for (std::size_t x = 0; x < far.size(); ++x)
        CHECK(std::abs(std::abs(ur(far[x], x)) - 1.0) < 1e-7);
}

TEST_CASE("compile_permutation reproduces arbitrary permutations on basis states") {
    ChainSpec spec(2, 2, 2);
    std::mt19937_64 rng(321);
    for (int t = 0; t < 4; ++t) {
        std::vector<std::int64_t> perm(8);
        for (int i = 0; i < 8; ++i) perm[i] = i;
        std::shuffle(perm.begin(), perm.end(), rng);
        auto sched = compile_permutation(perm, spec);
        sched.validate();
        Matrix u = schedule_unitary(sched, spec.factorization());
        CHECK(is_unitary(u, 1e-9));
        for (std::size_t x = 0; x < perm.size(); ++x)
            CHECK(std::abs(std::abs(u(perm[x], x)) - 1.0) < 1e-7);
    }

    CHECK_THROWS(compile_permutation({0, 1}, spec));  // length mismatch
}

TEST_CASE("compile_permutation: vdh embezzling circuit matches the raw permutation") {
    const int N = 4;
    auto task = epr_task(2, 2);
    auto catalyst = vdh_schmidt_vector(N);
    auto p = embezzle_permutation(catalyst, task);
    ChainSpec spec(2, 2, 2);  // 2 catalyst qubits + embezzler, dim 8

    auto sched = compile_permutation(p.perm, spec);
    sched.validate();
    Matrix u = schedule_unitary(sched, spec.factorization());
    Matrix raw = permutation_matrix(p.perm);
    for (int x = 0; x < 8; ++x)
        CHECK(std::abs(std::abs(u(p.perm[x], x)) - 1.0) < 1e-7);

    DensityMatrix omega = diagonal_state(HilbertFactorization({N}), catalyst);
    const double dev_raw = one_sided_deviation(omega, task, raw);
    const double dev_compiled = one_sided_deviation(omega, task, u);
    CHECK(std::abs(dev_compiled - dev_raw) < 1e-6);
    CHECK(schedule_cost(sched) > 0.0);
}
