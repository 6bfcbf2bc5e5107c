#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "sawmap/map_params.hpp"

namespace sawmap {

/// Observables recorded after each map step.
struct StepRecord {
    std::int64_t t = 0;
    double C = 0.0;
    double W00 = 0.0;
    double W01 = 0.0;
    double W10 = 0.0;
    double W11 = 0.0;
    double Q14 = 0.0;
    double Q23 = 0.0;
    double norm = 0.0;

    static constexpr std::array<const char*, 8> value_names = {"C",   "W00", "W01", "W10",
                                                               "W11", "Q14", "Q23", "norm"};

    std::array<double, 8> values() const { return {C, W00, W01, W10, W11, Q14, Q23, norm}; }

    void set_values(const std::array<double, 8>& v) {
        C = v[0];
        W00 = v[1];
        W01 = v[2];
        W10 = v[3];
        W11 = v[4];
        Q14 = v[5];
        Q23 = v[6];
        norm = v[7];
    }
};

struct TimeSeries {
    std::vector<StepRecord> records;
    MapParams params{};
    NoiseModel noise{};

    std::size_t size() const { return records.size(); }
    bool empty() const { return records.empty(); }
};

}  // namespace sawmap
