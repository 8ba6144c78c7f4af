#pragma once
// Label system for reviewed content: the 16 content classes, verification
// flags, the aggregation used for volume statistics and classification
// targets, and the mapping of every (class, flag) pair onto a noise type.
// Everything here is a pure total mapping over closed enumerations.

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace repsig {

enum class GcrcClass : std::uint8_t {
    C0,
    C1,
    C2,
    C2Star,
    C3,
    M1,
    M2,
    M3,
    MS,
    H1,
    H2,
    H3,
    O1,
    O2,
    I,
    J,
};

inline constexpr std::size_t kNumGcrcClasses = 16;

inline constexpr std::array<GcrcClass, kNumGcrcClasses> kAllGcrcClasses = {
    GcrcClass::C0, GcrcClass::C1, GcrcClass::C2, GcrcClass::C2Star,
    GcrcClass::C3, GcrcClass::M1, GcrcClass::M2, GcrcClass::M3,
    GcrcClass::MS, GcrcClass::H1, GcrcClass::H2, GcrcClass::H3,
    GcrcClass::O1, GcrcClass::O2, GcrcClass::I,  GcrcClass::J,
};

enum class VerificationFlag : std::uint8_t {
    None,  // not reviewed, or reviewed without confirmation
    VM,    // confirmed misinformation by fact-checkers
    VO,    // confirmed violation of another policy by moderators
};

inline constexpr std::array<VerificationFlag, 3> kAllVerificationFlags = {
    VerificationFlag::None,
    VerificationFlag::VM,
    VerificationFlag::VO,
};

enum class AggregatedClass : std::uint8_t { C, M, HM, OH, I };

inline constexpr std::array<AggregatedClass, 5> kAllAggregatedClasses = {
    AggregatedClass::C, AggregatedClass::M, AggregatedClass::HM,
    AggregatedClass::OH, AggregatedClass::I,
};

enum class TargetClass : std::uint8_t { C, M, I, Others };

inline constexpr std::array<TargetClass, 4> kAllTargetClasses = {
    TargetClass::C, TargetClass::M, TargetClass::I, TargetClass::Others,
};

enum class NoiseType : std::uint8_t {
    Accurate,
    FalseNoise,
    QuasiNoise,
    SoftNoise,
    HardNoise,
};

// Canonical label strings, used verbatim in every file format.
std::string_view to_string(GcrcClass c);
std::string_view to_string(VerificationFlag v);  // None renders as ""
std::string_view to_string(AggregatedClass a);
std::string_view to_string(TargetClass t);
std::string_view to_string(NoiseType n);

// Closed-set parsers: any string outside the enumeration yields nullopt.
std::optional<GcrcClass> parse_gcrc(std::string_view s);
std::optional<VerificationFlag> parse_verification(std::string_view s);
std::optional<AggregatedClass> parse_aggregated(std::string_view s);
std::optional<TargetClass> parse_target(std::string_view s);

// C -> {C0,C1,C2,C2*,C3}, M -> {M2,M3,MS}, HM -> {H2,H3,M1},
// OH -> {H1,O1,O2}, I -> {I}. J is an opaque residual label; it rides
// with OH here and counts as hard noise below.
AggregatedClass aggregate_class(GcrcClass c);

// C->C, M->M, I->I, HM and OH collapse into Others.
TargetClass target_class(AggregatedClass a);

// Flag precedence: VM beats VO beats the base class. A VM item is accurate
// signal whatever its class; a VO item is quasi-noise (moderatable, just not
// in this channel); otherwise the base class decides.
NoiseType noise_type(GcrcClass c, VerificationFlag v);

}  // namespace repsig
