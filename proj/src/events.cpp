#include "repsig/events.hpp"

namespace repsig {

std::string_view to_string(ReportCategory c) {
    switch (c) {
        case ReportCategory::FalseNews: return "false_news";
        case ReportCategory::NuditySexualSolicitation:
            return "nudity_sexual_solicitation";
        case ReportCategory::Violence: return "violence";
        case ReportCategory::Harassment: return "harassment";
        case ReportCategory::SuicideInjury: return "suicide_injury";
        case ReportCategory::Spam: return "spam";
        case ReportCategory::HateSpeech: return "hate_speech";
        case ReportCategory::UnauthorisedSales: return "unauthorised_sales";
        case ReportCategory::InappropriateContent:
            return "inappropriate_content";
        case ReportCategory::IDontLikeIt: return "i_dont_like_it";
    }
    return "?";
}

std::string_view to_string(Platform p) {
    switch (p) {
        case Platform::FB: return "FB";
        case Platform::IG: return "IG";
    }
    return "?";
}

std::string_view to_string(Country c) {
    switch (c) {
        case Country::FR: return "FR";
        case Country::UK: return "UK";
        case Country::US: return "US";
    }
    return "?";
}

std::string_view to_string(Gender g) {
    switch (g) {
        case Gender::F: return "F";
        case Gender::M: return "M";
        case Gender::Other: return "Other";
    }
    return "?";
}

std::optional<ReportCategory> parse_category(std::string_view s) {
    for (ReportCategory c : kAllCategories) {
        if (s == to_string(c)) return c;
    }
    return std::nullopt;
}

std::optional<Platform> parse_platform(std::string_view s) {
    for (Platform p : kAllPlatforms) {
        if (s == to_string(p)) return p;
    }
    return std::nullopt;
}

std::optional<Country> parse_country(std::string_view s) {
    for (Country c : kAllCountries) {
        if (s == to_string(c)) return c;
    }
    return std::nullopt;
}

std::optional<Gender> parse_gender(std::string_view s) {
    for (Gender g : kAllGenders) {
        if (s == to_string(g)) return g;
    }
    return std::nullopt;
}

}  // namespace repsig
