#pragma once
// Behaviour-based synthetic data: a content catalog with ground-truth
// labels, a reporter population with four behaviour profiles, and the
// report-event stream they emit. Presets are calibrated so the downstream
// metrics land on the published marginals they mirror.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "repsig/events.hpp"
#include "repsig/taxonomy.hpp"

namespace repsig {

enum class Behaviour : std::uint8_t {
    FaithfulFlagger,    // flags plausible false news to moderators
    DislikeJealousy,    // reports disliked posts and social-comparison bait
    ConfusedReporter,   // reports policy-breaking content in the wrong channel
    AttentionSeeker,    // flags denunciations / calls for moderator attention
};

inline constexpr std::size_t kNumBehaviours = 4;

inline constexpr std::array<Behaviour, kNumBehaviours> kAllBehaviours = {
    Behaviour::FaithfulFlagger,
    Behaviour::DislikeJealousy,
    Behaviour::ConfusedReporter,
    Behaviour::AttentionSeeker,
};

std::string_view to_string(Behaviour b);
std::optional<Behaviour> parse_behaviour(std::string_view s);

struct BehaviourProfile {
    Behaviour kind = Behaviour::FaithfulFlagger;
    // Probability that one report from this profile targets content of a
    // given ground-truth class.
    std::array<double, kNumGcrcClasses> target_class_weights{};
    // Probability of the reporting category attached to one report.
    std::array<double, kNumCategories> category_weights{};
    // Reports-per-reporter heavy-tail law: discrete Pareto(shape, scale),
    // truncated at the generator's activity cap.
    double activity_shape = 1.2;
    double activity_scale = 0.3;
};

// The four default profiles as used by the ig-us preset.
std::array<BehaviourProfile, kNumBehaviours> default_profiles();

struct SliceConfig {
    Platform platform = Platform::IG;
    Country country = Country::US;
    double share = 1.0;  // fraction of n_content
    std::array<double, kNumGcrcClasses> class_marginals{};
};

struct GeneratorConfig {
    std::size_t n_content = 4056;
    std::size_t n_reporters = 70000;
    std::array<double, kNumBehaviours> behaviour_mix{};
    std::array<BehaviourProfile, kNumBehaviours> profiles{};
    std::vector<SliceConfig> slices;
    double vm_rate_given_c = 0.173;
    std::array<double, kNumGcrcClasses> vo_rates{};
    int window_days = 90;
    std::int64_t window_start_ts = 1591142400;  // 2020-06-03T00:00:00Z
    // Content attractiveness ladder: items inside one (slice, class) group
    // take deterministic lognormal quantiles exp(sigma * z_q), so per-class
    // count distributions have a fixed heavy-tail profile and only the
    // report allocation itself is random.
    double tail_sigma = 1.6;
    std::uint64_t activity_cap = 3000;
    std::map<Country, std::uint64_t> mau;
    std::map<Country, double> rate_targets;  // reports per 1000 MAU
    std::uint64_t seed = 1;

    // Throws ConfigError with a field-level reason.
    void validate() const;
};

// Shipped presets: "ig-us", "ig-fr", "fb-us".
GeneratorConfig preset_config(std::string_view name, std::uint64_t seed = 1);
std::vector<std::string> preset_names();

std::string config_to_json(const GeneratorConfig& cfg);
GeneratorConfig config_from_json(const std::string& text);

struct SynthDataset {
    std::vector<ContentRecord> contents;
    std::vector<ReportEvent> events;
    std::map<std::string, Behaviour> reporters;
};

// Deterministic in the config (including seed): same input, same bytes.
SynthDataset generate(const GeneratorConfig& cfg);

struct CalibrationRow {
    std::string name;
    double achieved = 0.0;
    std::optional<double> target;
    std::optional<double> tolerance;
    bool ok = true;
};

struct CalibrationReport {
    std::vector<CalibrationRow> rows;
    bool all_ok = true;
};

// Achieved marginals vs the config's implied targets: aggregated-class
// shares, verification rates, the noise split, activity tail counts, and
// per-country distinct-item rates.
CalibrationReport calibration_report(const SynthDataset& dataset,
                                     const GeneratorConfig& cfg);

std::string format_report(const CalibrationReport& report);

}  // namespace repsig
