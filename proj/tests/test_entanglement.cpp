#include <catch2/catch_amalgamated.hpp>

#include <sawmap/entanglement.hpp>
#include <sawmap/sawtooth.hpp>

#include "test_helpers.hpp"

using namespace sawmap;

TEST_CASE("reduced state of the two most significant qubits") {
    SECTION("initial state reduces to the maximally entangled pair") {
        const ReducedState rs = reduce_top_two(initial_state(5));
        CHECK((rs.rho - test::bell_state()).cwiseAbs().maxCoeff() < 1e-14);
    }
    SECTION("reduction is a valid density matrix for random states") {
        for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
            const ReducedState rs = reduce_top_two(test::random_state(6, seed));
            CHECK_NOTHROW(validate_reduced_state(rs));
        }
    }
    SECTION("two-qubit reduction is the full projector") {
        StateVector s = test::random_state(2, 9);
        const ReducedState rs = reduce_top_two(s);
        Eigen::Vector4cd psi;
        for (int i = 0; i < 4; ++i) psi(i) = s.amp[static_cast<std::size_t>(i)];
        CHECK((rs.rho - psi * psi.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
    }
    SECTION("needs two qubits") {
        CHECK_THROWS_AS(reduce_top_two(StateVector(1)), std::domain_error);
    }
}

TEST_CASE("reduced-state validation catches tampered matrices") {
    ReducedState rs = reduce_top_two(test::random_state(5, 11));

    SECTION("broken hermiticity") {
        rs.rho(0, 1) += complex{1e-6, 0.0};
        CHECK_THROWS_AS(validate_reduced_state(rs), std::runtime_error);
    }
    SECTION("broken trace") {
        rs.rho(0, 0) += 1e-6;
        CHECK_THROWS_AS(validate_reduced_state(rs), std::runtime_error);
    }
    SECTION("broken positivity") {
        rs.rho(3, 3) -= 1.0;
        rs.rho(0, 0) += 1.0;
        CHECK_THROWS_AS(validate_reduced_state(rs), std::runtime_error);
    }
}

TEST_CASE("concurrence of closed-form states") {
    SECTION("bell state") {
        ReducedState rs;
        rs.rho = test::bell_state();
        const ConcurrenceResult r = concurrence(rs);
        CHECK(r.C == Catch::Approx(1.0).margin(1e-12));
        CHECK(r.E_f == Catch::Approx(1.0).margin(1e-12));
    }
    SECTION("maximally mixed state") {
        ReducedState rs;
        rs.rho = 0.25 * Eigen::Matrix4cd::Identity();
        CHECK(concurrence(rs).C == 0.0);
    }
    SECTION("werner family matches (3p - 1)/2") {
        for (double p : {0.0, 0.2, 1.0 / 3.0, 0.5, 0.75, 1.0}) {
            ReducedState rs;
            rs.rho = test::werner_state(p);
            const double expect = std::max(0.0, (3.0 * p - 1.0) / 2.0);
            INFO("p = " << p);
            CHECK(concurrence(rs).C == Catch::Approx(expect).margin(1e-10));
        }
    }
    SECTION("product states are unentangled") {
        ReducedState rs;
        rs.rho = test::pure_product({0.6, 0.1}, {0.79, 0.0}, {0.3, -0.4}, {0.5, 0.7});
        // Defect eigenvalues of order machine epsilon surface as sqrt(eps)
        // in the lambdas, so the zero here is only good to ~1e-8.
        CHECK(concurrence(rs).C == Catch::Approx(0.0).margin(1e-8));
    }
    SECTION("pure states match 2 |psi00 psi11 - psi01 psi10|") {
        Eigen::Vector4cd psi;
        psi << complex{0.5, 0.1}, complex{-0.2, 0.3}, complex{0.4, 0.0}, complex{0.1, -0.6};
        psi.normalize();
        ReducedState rs;
        rs.rho = test::pure_state(psi);
        const double expect = 2.0 * std::abs(psi(0) * psi(3) - psi(1) * psi(2));
        CHECK(concurrence(rs).C == Catch::Approx(expect).margin(1e-10));
    }
}

TEST_CASE("concurrence agrees with the matrix-square-root route") {
    SECTION("random pure reductions") {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const ReducedState rs = reduce_top_two(test::random_state(6, 100 + seed));
            const double oracle = test::concurrence_matrix_sqrt(rs.rho);
            CHECK(concurrence(rs).C == Catch::Approx(oracle).margin(1e-8));
        }
    }
    SECTION("map-evolved reductions") {
        const MapParams p{6, 0.5, 4};
        StateVector s = initial_state(6);
        SplitMix64 rng(1);
        const GateProgram program = build_step_program(p);
        for (int t = 1; t <= 150; ++t) {
            map_step(s, p, NoiseModel{}, rng, program);
            if (t % 30 != 0) continue;
            const ReducedState rs = reduce_top_two(s);
            const double oracle = test::concurrence_matrix_sqrt(rs.rho);
            INFO("t = " << t);
            CHECK(concurrence(rs).C == Catch::Approx(oracle).margin(1e-8));
        }
    }
    SECTION("mixtures of random reductions") {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const ReducedState a = reduce_top_two(test::random_state(5, 300 + seed));
            const ReducedState b = reduce_top_two(test::random_state(5, 400 + seed));
            ReducedState mix;
            mix.rho = 0.3 * a.rho + 0.7 * b.rho;
            const double oracle = test::concurrence_matrix_sqrt(mix.rho);
            CHECK(concurrence(mix).C == Catch::Approx(oracle).margin(1e-8));
        }
    }
}

TEST_CASE("concurrence is invariant under unitaries on the traced-out register") {
    StateVector s = test::random_state(5, 77);
    const double before = concurrence(reduce_top_two(s)).C;

    GateProgram local;
    local.append(hadamard_gate(3));
    local.append(phase_gate(4, 0.83));
    local.append(controlled_phase_gate(3, 5, -1.2));
    local.append(swap_gate(4, 5));
    local.append(hadamard_gate(5));
    apply_program(s, local);

    CHECK(concurrence(reduce_top_two(s)).C == Catch::Approx(before).margin(1e-12));
}

TEST_CASE("entropy helpers") {
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(1.0) == 0.0);
    CHECK(binary_entropy(0.5) == Catch::Approx(1.0));
    CHECK(entanglement_of_formation(0.0) == 0.0);
    CHECK(entanglement_of_formation(1.0) == Catch::Approx(1.0));

    double prev = 0.0;
    for (double c : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const double ef = entanglement_of_formation(c);
        CHECK(ef > prev);
        prev = ef;
    }
}

TEST_CASE("block scalar products and reflection symmetry") {
    SECTION("initial state has Q14 = 1, Q23 = 0") {
        const auto [q14, q23] = scalar_product_diagnostics(initial_state(4));
        CHECK(q14 == Catch::Approx(1.0).margin(1e-12));
        CHECK(q23 == Catch::Approx(0.0).margin(1e-12));
    }
    SECTION("initial state reflection defect is 4/N") {
        // Only the two support-edge pairs (N/4, 3N/4) break the reflection,
        // each contributing |sqrt(2/N)|^2.
        CHECK(symmetry_defect(initial_state(4)) == Catch::Approx(0.25).margin(1e-12));
        CHECK(symmetry_defect(initial_state(6)) == Catch::Approx(0.0625).margin(1e-12));
    }
    SECTION("basis |0> is reflection symmetric") {
        CHECK(symmetry_defect(basis_state(3, 0)) == 0.0);
    }
}
