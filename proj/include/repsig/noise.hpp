#pragma once
// Signal-quality metrics over a labelled sample: the inaccuracy ratio, the
// five-way noise decomposition, and per-platform/country class distribution
// tables.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "repsig/events.hpp"

namespace repsig {

struct NoiseDecomposition {
    double accurate = 0.0;
    double false_noise = 0.0;
    double quasi_noise = 0.0;
    double soft_noise = 0.0;
    double hard_noise = 0.0;
    std::size_t n = 0;
};

// Records without a class label, removed before metrics. Metrics themselves
// treat unlabelled input as an error rather than skipping silently.
std::vector<ContentRecord> filter_labelled(
    std::span<const ContentRecord> records);

// 1 - |VM records| / n.
double inaccuracy(std::span<const ContentRecord> sample);

// Buckets every record through noise_type(); fractions over n.
NoiseDecomposition decompose(std::span<const ContentRecord> sample);

struct ClassDistributionRow {
    Platform platform;
    Country country;
    GcrcClass cls;
    std::uint64_t count = 0;
    double share = 0.0;  // within (platform, country)
    // Signed FB - IG item-count difference for (country, cls); absent when
    // the country has records from a single platform only.
    std::optional<std::int64_t> deviation;
};

struct ClassDistribution {
    std::vector<ClassDistributionRow> rows;
};

ClassDistribution distribution_table(std::span<const ContentRecord> sample);

std::string to_json_string(const NoiseDecomposition& d);
std::string to_csv(const ClassDistribution& dist);

}  // namespace repsig
