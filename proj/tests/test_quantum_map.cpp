#include <catch2/catch_amalgamated.hpp>

#include <cstring>

#include <sawmap/map_params.hpp>
#include <sawmap/sawtooth.hpp>

#include "test_helpers.hpp"

using namespace sawmap;

TEST_CASE("map parameter validation") {
    CHECK_NOTHROW((MapParams{2, 0.5, 4}.validate()));
    CHECK_THROWS_AS((MapParams{1, 0.5, 4}.validate()), std::domain_error);
    CHECK_THROWS_AS((MapParams{8, 0.5, 3}.validate()), std::domain_error);
    CHECK_THROWS_AS((MapParams{8, 0.5, -4}.validate()), std::domain_error);
    CHECK_THROWS_AS((MapParams{8, -0.1, 4}.validate()), std::domain_error);

    const MapParams p{6, 1.5, 8};
    CHECK(p.N() == 64);
    CHECK(p.T() == Catch::Approx(2.0 * M_PI * 8.0 / 64.0));
    CHECK(p.k() == Catch::Approx(1.5 / p.T()));
}

TEST_CASE("diagonal step programs act as the intended diagonals") {
    const MapParams p{5, 0.8, 4};
    const double T = p.T();
    const double k = p.k();
    const std::size_t N = p.N();

    SECTION("rotation program multiplies by exp(-i T n^2 / 2)") {
        StateVector s = test::random_state(p.n_q, 31);
        StateVector expect = s;
        apply_program(s, build_rotation_program(p));
        for (std::size_t n = 0; n < N; ++n)
            expect.amp[n] *=
                std::polar(1.0, -0.5 * T * static_cast<double>(n) * static_cast<double>(n));
        CHECK(test::max_diff(s, expect) < 1e-13);
    }

    SECTION("kick program multiplies by exp(i k (theta_j^2 - pi^2) / 2)") {
        StateVector s = test::random_state(p.n_q, 32);
        StateVector expect = s;
        apply_program(s, build_kick_program(p));
        for (std::size_t j = 0; j < N; ++j) {
            const double theta =
                -M_PI + 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(N);
            expect.amp[j] *= std::polar(1.0, 0.5 * k * (theta * theta - M_PI * M_PI));
        }
        CHECK(test::max_diff(s, expect) < 1e-12);
    }
}

TEST_CASE("step program gate inventory") {
    const MapParams p{4, 0.5, 4};
    const GateCounts counts = build_step_program(p).counts();
    // rotation and kick: 4 phases + 6 controlled phases each; two transforms:
    // 4 hadamards + 6 controlled phases + 2 swaps each; 2 offset phases.
    CHECK(counts.n_phase == 10);
    CHECK(counts.n_controlled_phase == 24);
    CHECK(counts.n_hadamard == 8);
    CHECK(counts.n_swap == 4);
}

TEST_CASE("gate-based step matches the dense transform step") {
    for (int n_q : {2, 3, 4, 6}) {
        for (double K : {0.25, 0.5, 1.7}) {
            const MapParams p{n_q, K, 4};
            StateVector gate_state = test::random_state(n_q, 700 + n_q);
            StateVector dense_state = gate_state;
            map_step(gate_state, p, NoiseModel{});
            direct_step(dense_state, p);
            INFO("n_q=" << n_q << " K=" << K);
            CHECK(test::max_diff_up_to_phase(dense_state, gate_state) < 1e-10);
        }
    }
}

TEST_CASE("dense step with K = 0 reduces to the free rotation") {
    const MapParams p{4, 0.0, 4};
    StateVector s = test::random_state(4, 44);
    StateVector expect = s;
    direct_step(s, p);
    for (std::size_t n = 0; n < 16; ++n)
        expect.amp[n] *=
            std::polar(1.0, -0.5 * p.T() * static_cast<double>(n) * static_cast<double>(n));
    CHECK(test::max_diff(s, expect) < 1e-12);
}

TEST_CASE("zero noise takes the exact path bit for bit") {
    const MapParams p{5, 0.5, 4};
    const GateProgram program = build_step_program(p);

    StateVector ideal = test::random_state(5, 50);
    StateVector noisy = ideal;
    apply_program(ideal, program);

    NoiseModel noise;
    noise.seed = 123;
    SplitMix64 rng = noise.make_stream();
    execute_with_noise(noisy, program, noise, rng);

    REQUIRE(std::memcmp(ideal.amp.data(), noisy.amp.data(),
                        ideal.size() * sizeof(complex)) == 0);
    // the stream must be untouched on the exact path
    CHECK(rng.next() == noise.make_stream().next());
}

TEST_CASE("rotated gate forms reduce to the exact gates at the ideal angles") {
    StateVector s = test::random_state(4, 60);

    SECTION("hadamard at phi = pi/2") {
        StateVector a = s, b = s;
        detail::apply_hadamard_rotated(a, a.qubit_mask(2), 0.5 * M_PI);
        test::ref_hadamard(b, 2);
        CHECK(test::max_diff(a, b) < 1e-15);
    }
    SECTION("swap at phi = pi") {
        StateVector a = s, b = s;
        detail::apply_swap_rotated(a, a.qubit_mask(1), a.qubit_mask(3), M_PI);
        test::ref_swap(b, 1, 3);
        CHECK(test::max_diff(a, b) < 1e-15);
    }
    SECTION("swap at phi = 0 is the identity") {
        StateVector a = s;
        detail::apply_swap_rotated(a, a.qubit_mask(2), a.qubit_mask(4), 0.0);
        CHECK(test::max_diff(a, s) < 1e-15);
    }
    SECTION("rotated gates are unitary at any angle") {
        StateVector a = s;
        detail::apply_hadamard_rotated(a, a.qubit_mask(1), 1.234);
        CHECK(norm(a) == Catch::Approx(1.0).margin(1e-14));
        detail::apply_swap_rotated(a, a.qubit_mask(2), a.qubit_mask(3), -2.5);
        CHECK(norm(a) == Catch::Approx(1.0).margin(1e-14));
    }
}

TEST_CASE("noisy evolution") {
    const MapParams p{4, 0.5, 4};

    SECTION("noise perturbs the state by O(eps) per step") {
        StateVector ideal = initial_state(4);
        StateVector noisy = ideal;
        map_step(ideal, p, NoiseModel{});
        NoiseModel noise;
        noise.epsilon = 1e-6;
        noise.seed = 9;
        map_step(noisy, p, noise);
        const double diff = test::max_diff(ideal, noisy);
        CHECK(diff > 0.0);
        CHECK(diff < 1e-4);
    }

    SECTION("same realization is reproducible, different realizations differ") {
        NoiseModel noise;
        noise.epsilon = 0.01;
        noise.seed = 77;

        StateVector a = initial_state(4);
        StateVector b = initial_state(4);
        map_step(a, p, noise);
        map_step(b, p, noise);
        REQUIRE(std::memcmp(a.amp.data(), b.amp.data(), a.size() * sizeof(complex)) == 0);

        noise.realization_id = 1;
        StateVector c = initial_state(4);
        map_step(c, p, noise);
        CHECK(test::max_diff(a, c) > 0.0);
    }

    SECTION("norm is conserved under noise, including noisy swaps") {
        NoiseModel noise;
        noise.epsilon = 0.05;
        noise.seed = 5;
        noise.noisy_swaps = true;
        StateVector s = initial_state(4);
        SplitMix64 rng = noise.make_stream();
        const GateProgram program = build_step_program(p);
        for (int t = 0; t < 200; ++t) map_step(s, p, noise, rng, program);
        CHECK(norm(s) == Catch::Approx(1.0).margin(1e-11));
    }
}

TEST_CASE("evolve records the full observable series") {
    const MapParams p{4, 0.5, 4};

    SECTION("time grid and initial record") {
        StateVector s = initial_state(4);
        const TimeSeries series = evolve(s, p, 50, NoiseModel{});
        REQUIRE(series.size() == 51);
        for (std::int64_t t = 0; t <= 50; ++t)
            CHECK(series.records[static_cast<std::size_t>(t)].t == t);
        CHECK(series.records[0].C == Catch::Approx(1.0).margin(1e-12));
        CHECK(series.records[0].W00 == Catch::Approx(0.5).margin(1e-12));
        CHECK(series.records[0].W11 == Catch::Approx(0.5).margin(1e-12));
        for (const StepRecord& r : series.records)
            CHECK(r.norm == Catch::Approx(1.0).margin(1e-12));
    }

    SECTION("zero steps yields only the initial record") {
        StateVector s = initial_state(4);
        const TimeSeries series = evolve(s, p, 0, NoiseModel{});
        REQUIRE(series.size() == 1);
        CHECK(series.records[0].t == 0);
    }

    SECTION("observer sees every step") {
        StateVector s = initial_state(4);
        int calls = 0;
        evolve(s, p, 10, NoiseModel{},
               [&](std::int64_t t, const StateVector&, const StepRecord& rec) {
                   ++calls;
                   CHECK(rec.t == t);
               });
        CHECK(calls == 10);
    }

    SECTION("negative t_max and qubit mismatch are rejected") {
        StateVector s = initial_state(4);
        CHECK_THROWS_AS(evolve(s, p, -1, NoiseModel{}), std::domain_error);
        StateVector wrong = initial_state(5);
        CHECK_THROWS_AS(map_step(wrong, p, NoiseModel{}), std::domain_error);
    }

    SECTION("metadata is carried on the series") {
        StateVector s = initial_state(4);
        NoiseModel noise;
        noise.epsilon = 0.002;
        noise.seed = 3;
        const TimeSeries series = evolve(s, p, 3, noise);
        CHECK(series.params.n_q == 4);
        CHECK(series.noise.epsilon == 0.002);
        CHECK(series.noise.seed == 3);
    }
}

TEST_CASE("map step is deterministic across repeated program builds") {
    const MapParams p{6, 0.5, 4};
    StateVector a = initial_state(6);
    StateVector b = initial_state(6);
    const GateProgram prog1 = build_step_program(p);
    const GateProgram prog2 = build_step_program(p);
    NoiseModel noise;
    SplitMix64 r1 = noise.make_stream(), r2 = noise.make_stream();
    map_step(a, p, noise, r1, prog1);
    map_step(b, p, noise, r2, prog2);
    REQUIRE(std::memcmp(a.amp.data(), b.amp.data(), a.size() * sizeof(complex)) == 0);
}
