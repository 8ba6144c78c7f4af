#pragma once
// Carrier types for the reporting signal: single report events, reviewed
// content records, and the per-content multi-channel count vector.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "repsig/taxonomy.hpp"

namespace repsig {

// The ten platform reporting categories, in canonical column order.
enum class ReportCategory : std::uint8_t {
    FalseNews,
    NuditySexualSolicitation,
    Violence,
    Harassment,
    SuicideInjury,
    Spam,
    HateSpeech,
    UnauthorisedSales,
    InappropriateContent,
    IDontLikeIt,
};

inline constexpr std::size_t kNumCategories = 10;

inline constexpr std::array<ReportCategory, kNumCategories> kAllCategories = {
    ReportCategory::FalseNews,
    ReportCategory::NuditySexualSolicitation,
    ReportCategory::Violence,
    ReportCategory::Harassment,
    ReportCategory::SuicideInjury,
    ReportCategory::Spam,
    ReportCategory::HateSpeech,
    ReportCategory::UnauthorisedSales,
    ReportCategory::InappropriateContent,
    ReportCategory::IDontLikeIt,
};

enum class Platform : std::uint8_t { FB, IG };
enum class Country : std::uint8_t { FR, UK, US };
enum class Gender : std::uint8_t { F, M, Other };

inline constexpr std::array<Platform, 2> kAllPlatforms = {Platform::FB,
                                                          Platform::IG};
inline constexpr std::array<Country, 3> kAllCountries = {
    Country::FR, Country::UK, Country::US};
inline constexpr std::array<Gender, 3> kAllGenders = {Gender::F, Gender::M,
                                                      Gender::Other};

std::string_view to_string(ReportCategory c);
std::string_view to_string(Platform p);
std::string_view to_string(Country c);
std::string_view to_string(Gender g);

std::optional<ReportCategory> parse_category(std::string_view s);
std::optional<Platform> parse_platform(std::string_view s);
std::optional<Country> parse_country(std::string_view s);
std::optional<Gender> parse_gender(std::string_view s);

// One user report of one content item under one category at one time.
struct ReportEvent {
    std::string report_id;
    std::string content_id;
    std::string reporter_id;
    Platform platform = Platform::IG;
    Country country = Country::US;
    ReportCategory category = ReportCategory::FalseNews;
    std::int64_t ts = 0;  // seconds since epoch, UTC

    bool operator==(const ReportEvent&) const = default;
};

// A reviewed content item. Demographics describe the sampled reporter and
// exist only to drive balanced sample construction.
struct ContentRecord {
    std::string content_id;
    Platform platform = Platform::IG;
    Country country = Country::US;
    std::optional<GcrcClass> gcrc;
    VerificationFlag verification = VerificationFlag::None;
    std::optional<Gender> reporter_gender;
    std::optional<int> reporter_age_band;

    bool operator==(const ContentRecord&) const = default;
};

// Per-content report counts over a window, one slot per category.
struct FeatureVector {
    std::string content_id;
    std::array<std::uint64_t, kNumCategories> counts{};
    std::uint64_t total = 0;
    int window_days = 90;

    bool operator==(const FeatureVector&) const = default;
};

}  // namespace repsig
