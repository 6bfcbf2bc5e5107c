#include <catch2/catch_amalgamated.hpp>

#include <sawmap/gates.hpp>
#include <sawmap/qft.hpp>
#include <sawmap/state_vector.hpp>

#include "test_helpers.hpp"

using namespace sawmap;

TEST_CASE("state vector construction") {
    SECTION("starts in |0>") {
        StateVector s(3);
        REQUIRE(s.size() == 8);
        CHECK((s.amp[0] == complex{1.0, 0.0}));
        for (std::size_t i = 1; i < 8; ++i) CHECK((s.amp[i] == complex{0.0, 0.0}));
        CHECK(norm(s) == Catch::Approx(1.0));
    }
    SECTION("qubit count bounds") {
        CHECK_THROWS_AS(StateVector(0), std::domain_error);
        CHECK_THROWS_AS(StateVector(-1), std::domain_error);
        CHECK_THROWS_AS(StateVector(31), std::domain_error);
        CHECK_NOTHROW(StateVector(1));
    }
    SECTION("qubit 1 is the most significant bit") {
        StateVector s(4);
        CHECK(s.qubit_mask(1) == 8);
        CHECK(s.qubit_mask(4) == 1);
        CHECK_THROWS_AS(s.qubit_mask(0), std::domain_error);
        CHECK_THROWS_AS(s.qubit_mask(5), std::domain_error);
    }
}

TEST_CASE("basis and initial states") {
    SECTION("basis state") {
        StateVector s = basis_state(3, 5);
        CHECK((s.amp[5] == complex{1.0, 0.0}));
        CHECK(norm(s) == Catch::Approx(1.0));
        CHECK_THROWS_AS(basis_state(3, 8), std::domain_error);
    }
    SECTION("initial state occupies the outer quarters") {
        StateVector s = initial_state(4);
        const double expect = std::sqrt(2.0 / 16.0);
        for (std::size_t n = 0; n < 16; ++n) {
            const bool outer = n < 4 || n >= 12;
            CHECK(s.amp[n] == (outer ? complex{expect, 0.0} : complex{0.0, 0.0}));
        }
        CHECK(norm(s) == Catch::Approx(1.0));
    }
    SECTION("initial state needs two qubits") {
        CHECK_THROWS_AS(initial_state(1), std::domain_error);
    }
}

TEST_CASE("gate application matches reference definitions") {
    const int n_q = 4;
    for (std::uint64_t seed : {11u, 12u, 13u}) {
        StateVector s = test::random_state(n_q, seed);

        SECTION("phase, seed " + std::to_string(seed)) {
            for (int q = 1; q <= n_q; ++q) {
                StateVector a = s, b = s;
                apply_gate(a, phase_gate(q, 0.7 * q));
                test::ref_phase(b, q, 0.7 * q);
                CHECK(test::max_diff(a, b) < 1e-15);
            }
        }
        SECTION("controlled phase, seed " + std::to_string(seed)) {
            for (int qa = 1; qa <= n_q; ++qa)
                for (int qb = 1; qb <= n_q; ++qb) {
                    if (qa == qb) continue;
                    StateVector a = s, b = s;
                    apply_gate(a, controlled_phase_gate(qa, qb, -1.3));
                    test::ref_controlled_phase(b, qa, qb, -1.3);
                    CHECK(test::max_diff(a, b) < 1e-15);
                }
        }
        SECTION("hadamard, seed " + std::to_string(seed)) {
            for (int q = 1; q <= n_q; ++q) {
                StateVector a = s, b = s;
                apply_gate(a, hadamard_gate(q));
                test::ref_hadamard(b, q);
                CHECK(test::max_diff(a, b) < 1e-15);
            }
        }
        SECTION("swap, seed " + std::to_string(seed)) {
            for (int qa = 1; qa <= n_q; ++qa)
                for (int qb = 1; qb <= n_q; ++qb) {
                    if (qa == qb) continue;
                    StateVector a = s, b = s;
                    apply_gate(a, swap_gate(qa, qb));
                    test::ref_swap(b, qa, qb);
                    CHECK(test::max_diff(a, b) < 1e-15);
                }
        }
    }
}

TEST_CASE("gate algebra") {
    StateVector s = test::random_state(5, 99);

    SECTION("hadamard is an involution") {
        StateVector a = s;
        apply_gate(a, hadamard_gate(3));
        apply_gate(a, hadamard_gate(3));
        CHECK(test::max_diff(a, s) < 1e-15);
    }
    SECTION("controlled phase is symmetric in its qubits") {
        StateVector a = s, b = s;
        apply_gate(a, controlled_phase_gate(2, 4, 0.9));
        apply_gate(b, controlled_phase_gate(4, 2, 0.9));
        CHECK(test::max_diff(a, b) == 0.0);
    }
    SECTION("phase gates on different qubits commute") {
        StateVector a = s, b = s;
        apply_gate(a, phase_gate(1, 0.4));
        apply_gate(a, phase_gate(5, -0.8));
        apply_gate(b, phase_gate(5, -0.8));
        apply_gate(b, phase_gate(1, 0.4));
        // The two orders round differently; only the association changes.
        CHECK(test::max_diff(a, b) < 1e-15);
    }
    SECTION("two-qubit factories reject equal qubits") {
        CHECK_THROWS_AS(controlled_phase_gate(2, 2, 0.1), std::invalid_argument);
        CHECK_THROWS_AS(swap_gate(3, 3), std::invalid_argument);
    }
    SECTION("norm is preserved by every gate kind") {
        StateVector a = s;
        apply_gate(a, phase_gate(1, 2.1));
        apply_gate(a, controlled_phase_gate(1, 2, -0.3));
        apply_gate(a, hadamard_gate(4));
        apply_gate(a, swap_gate(2, 5));
        CHECK(norm(a) == Catch::Approx(1.0).margin(1e-14));
    }
}

TEST_CASE("gate programs") {
    SECTION("append and counts") {
        GateProgram prog;
        prog.append(hadamard_gate(1));
        prog.append(phase_gate(2, 0.5));
        prog.append(controlled_phase_gate(1, 2, 0.25));
        prog.append(swap_gate(1, 2));

        GateProgram tail;
        tail.append(phase_gate(1, -0.5));
        prog.append(tail);

        const GateCounts counts = prog.counts();
        CHECK(counts.n_hadamard == 1);
        CHECK(counts.n_phase == 2);
        CHECK(counts.n_controlled_phase == 1);
        CHECK(counts.n_swap == 1);
        CHECK(counts.total() == 5);
        CHECK(prog.size() == 5);
    }
    SECTION("program application equals sequential gates") {
        StateVector a = test::random_state(3, 5);
        StateVector b = a;
        GateProgram prog;
        prog.append(hadamard_gate(2));
        prog.append(controlled_phase_gate(2, 3, 1.1));
        prog.append(swap_gate(1, 3));
        apply_program(a, prog);
        for (const Gate& g : prog.gates) apply_gate(b, g);
        CHECK(test::max_diff(a, b) == 0.0);
    }
}

TEST_CASE("partition probabilities") {
    SECTION("sum to one and match quarters") {
        StateVector s = test::random_state(4, 21);
        const PartitionProbabilities w = partition_probabilities(s);
        CHECK(w.w00 + w.w01 + w.w10 + w.w11 == Catch::Approx(1.0).margin(1e-12));

        double q0 = 0.0;
        for (std::size_t n = 0; n < 4; ++n) q0 += std::norm(s.amp[n]);
        CHECK(w.w00 == Catch::Approx(q0).margin(1e-14));
    }
    SECTION("initial state splits between outer quarters") {
        const PartitionProbabilities w = partition_probabilities(initial_state(5));
        CHECK(w.w00 == Catch::Approx(0.5).margin(1e-12));
        CHECK(w.w11 == Catch::Approx(0.5).margin(1e-12));
        CHECK(w.w01 == Catch::Approx(0.0).margin(1e-12));
        CHECK(w.w10 == Catch::Approx(0.0).margin(1e-12));
    }
    SECTION("requires two qubits") {
        CHECK_THROWS_AS(partition_probabilities(StateVector(1)), std::domain_error);
    }
}

TEST_CASE("fourier transform circuit") {
    SECTION("matches the dense transform, n_q = 1..6") {
        for (int n_q = 1; n_q <= 6; ++n_q) {
            StateVector a = test::random_state(n_q, 100 + n_q);
            StateVector b = a;
            qft(a, false);
            test::dense_fourier(b, false);
            CHECK(test::max_diff(a, b) < 1e-12);
        }
    }
    SECTION("inverse matches the dense inverse") {
        for (int n_q = 1; n_q <= 6; ++n_q) {
            StateVector a = test::random_state(n_q, 200 + n_q);
            StateVector b = a;
            qft(a, true);
            test::dense_fourier(b, true);
            CHECK(test::max_diff(a, b) < 1e-12);
        }
    }
    SECTION("round trip is the identity") {
        StateVector a = test::random_state(7, 300);
        StateVector b = a;
        qft(a, false);
        qft(a, true);
        CHECK(test::max_diff(a, b) < 1e-13);
    }
    SECTION("transforms a basis state to a uniform phase ramp") {
        StateVector s = basis_state(3, 3);
        qft(s, false);
        for (std::size_t m = 0; m < 8; ++m) {
            const complex expect =
                std::polar(1.0 / std::sqrt(8.0), 2.0 * M_PI * 3.0 * m / 8.0);
            CHECK(std::abs(s.amp[m] - expect) < 1e-14);
        }
    }
}
