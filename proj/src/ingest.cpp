#include "repsig/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "repsig/errors.hpp"
#include "repsig/rng.hpp"

namespace repsig {

using nlohmann::json;

std::string_view to_string(IssueKind k) {
    switch (k) {
        case IssueKind::MalformedRecord: return "malformed_record";
        case IssueKind::MissingField: return "missing_field";
        case IssueKind::UnknownCategory: return "unknown_category";
        case IssueKind::UnknownCountry: return "unknown_country";
        case IssueKind::UnknownPlatform: return "unknown_platform";
        case IssueKind::InvalidValue: return "invalid_value";
    }
    return "?";
}

namespace {

bool get_string_field(const json& j, const char* key, std::string& out) {
    const auto it = j.find(key);
    if (it == j.end() || !it->is_string()) return false;
    out = it->get<std::string>();
    return true;
}

}  // namespace

EventParseResult parse_events(std::istream& in) {
    EventParseResult result;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            result.issues.push_back(
                {line_no, IssueKind::MalformedRecord, "not a JSON object"});
            continue;
        }
        ReportEvent ev;
        std::string platform, country, category;
        if (!get_string_field(j, "report_id", ev.report_id) ||
            !get_string_field(j, "content_id", ev.content_id) ||
            !get_string_field(j, "reporter_id", ev.reporter_id) ||
            !get_string_field(j, "platform", platform) ||
            !get_string_field(j, "country", country) ||
            !get_string_field(j, "category", category) ||
            !j.contains("ts")) {
            result.issues.push_back(
                {line_no, IssueKind::MissingField,
                 "required keys: report_id, content_id, reporter_id, "
                 "platform, country, category, ts"});
            continue;
        }
        if (ev.report_id.empty() || ev.content_id.empty() ||
            ev.reporter_id.empty()) {
            result.issues.push_back(
                {line_no, IssueKind::InvalidValue, "empty id"});
            continue;
        }
        const auto p = parse_platform(platform);
        if (!p) {
            result.issues.push_back(
                {line_no, IssueKind::UnknownPlatform, platform});
            continue;
        }
        const auto c = parse_country(country);
        if (!c) {
            result.issues.push_back(
                {line_no, IssueKind::UnknownCountry, country});
            continue;
        }
        const auto cat = parse_category(category);
        if (!cat) {
            result.issues.push_back(
                {line_no, IssueKind::UnknownCategory, category});
            continue;
        }
        if (!j["ts"].is_number_integer() ||
            j["ts"].get<std::int64_t>() < 0) {
            result.issues.push_back(
                {line_no, IssueKind::InvalidValue, "ts must be >= 0"});
            continue;
        }
        ev.platform = *p;
        ev.country = *c;
        ev.category = *cat;
        ev.ts = j["ts"].get<std::int64_t>();
        result.events.push_back(std::move(ev));
    }
    return result;
}

void write_events_jsonl(std::ostream& out,
                        std::span<const ReportEvent> events) {
    for (const auto& ev : events) {
        json j;
        j["report_id"] = ev.report_id;
        j["content_id"] = ev.content_id;
        j["reporter_id"] = ev.reporter_id;
        j["platform"] = to_string(ev.platform);
        j["country"] = to_string(ev.country);
        j["category"] = to_string(ev.category);
        j["ts"] = ev.ts;
        out << j.dump() << '\n';
    }
}

ContentParseResult parse_contents_csv(std::istream& in) {
    ContentParseResult result;
    std::string line;
    std::size_t line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!saw_header) {
            saw_header = true;
            if (line.rfind("content_id,", 0) != 0) {
                result.issues.push_back({line_no, IssueKind::MalformedRecord,
                                         "missing header row"});
            }
            continue;
        }
        const auto fields = io::split_csv_line(line);
        if (fields.size() != 7) {
            result.issues.push_back(
                {line_no, IssueKind::MalformedRecord,
                 "expected 7 fields, got " + std::to_string(fields.size())});
            continue;
        }
        ContentRecord rec;
        rec.content_id = fields[0];
        if (rec.content_id.empty()) {
            result.issues.push_back(
                {line_no, IssueKind::InvalidValue, "empty content_id"});
            continue;
        }
        const auto p = parse_platform(fields[1]);
        if (!p) {
            result.issues.push_back(
                {line_no, IssueKind::UnknownPlatform, fields[1]});
            continue;
        }
        const auto c = parse_country(fields[2]);
        if (!c) {
            result.issues.push_back(
                {line_no, IssueKind::UnknownCountry, fields[2]});
            continue;
        }
        rec.platform = *p;
        rec.country = *c;
        if (!fields[3].empty()) {
            const auto g = parse_gcrc(fields[3]);
            if (!g) {
                result.issues.push_back(
                    {line_no, IssueKind::InvalidValue,
                     "unknown gcrc label: " + fields[3]});
                continue;
            }
            rec.gcrc = *g;
        }
        const auto v = parse_verification(fields[4]);
        if (!v) {
            result.issues.push_back({line_no, IssueKind::InvalidValue,
                                     "unknown verification: " + fields[4]});
            continue;
        }
        rec.verification = *v;
        if (rec.verification != VerificationFlag::None && !rec.gcrc) {
            result.issues.push_back(
                {line_no, IssueKind::InvalidValue,
                 "verification flag without gcrc label"});
            continue;
        }
        if (!fields[5].empty()) {
            const auto g = parse_gender(fields[5]);
            if (!g) {
                result.issues.push_back({line_no, IssueKind::InvalidValue,
                                         "unknown gender: " + fields[5]});
                continue;
            }
            rec.reporter_gender = *g;
        }
        if (!fields[6].empty()) {
            try {
                rec.reporter_age_band = std::stoi(fields[6]);
            } catch (const std::exception&) {
                result.issues.push_back({line_no, IssueKind::InvalidValue,
                                         "bad age_band: " + fields[6]});
                continue;
            }
        }
        result.records.push_back(std::move(rec));
    }
    return result;
}

void write_contents_csv(std::ostream& out,
                        std::span<const ContentRecord> records) {
    out << "content_id,platform,country,gcrc,verification,gender,age_band\n";
    for (const auto& rec : records) {
        out << rec.content_id << ',' << to_string(rec.platform) << ','
            << to_string(rec.country) << ','
            << (rec.gcrc ? to_string(*rec.gcrc) : std::string_view{}) << ','
            << to_string(rec.verification) << ','
            << (rec.reporter_gender ? to_string(*rec.reporter_gender)
                                    : std::string_view{})
            << ',';
        if (rec.reporter_age_band) out << *rec.reporter_age_band;
        out << '\n';
    }
}

std::vector<FeatureVector> parse_features_csv(std::istream& in) {
    std::vector<FeatureVector> vectors;
    std::string line;
    bool saw_header = false;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!saw_header) {
            saw_header = true;
            continue;
        }
        const auto fields = io::split_csv_line(line);
        if (fields.size() != kNumCategories + 2) {
            throw DataError("features.csv line " + std::to_string(line_no) +
                            ": expected " +
                            std::to_string(kNumCategories + 2) + " fields");
        }
        FeatureVector fv;
        fv.content_id = fields[0];
        std::uint64_t sum = 0;
        for (std::size_t i = 0; i < kNumCategories; ++i) {
            fv.counts[i] = std::stoull(fields[1 + i]);
            sum += fv.counts[i];
        }
        fv.total = std::stoull(fields[kNumCategories + 1]);
        if (fv.total != sum) {
            throw DataError("features.csv line " + std::to_string(line_no) +
                            ": total does not match category sum");
        }
        vectors.push_back(std::move(fv));
    }
    return vectors;
}

void write_features_csv(std::ostream& out,
                        std::span<const FeatureVector> vectors) {
    out << "content_id";
    for (ReportCategory c : kAllCategories) out << ',' << to_string(c);
    out << ",total\n";
    for (const auto& fv : vectors) {
        out << fv.content_id;
        for (std::size_t i = 0; i < kNumCategories; ++i) {
            out << ',' << fv.counts[i];
        }
        out << ',' << fv.total << '\n';
    }
}

std::map<std::string, FeatureVector> aggregate_features(
    std::span<const ReportEvent> events, TimeWindow window) {
    if (window.end < window.start) {
        throw ConfigError("aggregate_features: window end before start");
    }
    // Order-free dedup: smallest payload wins for a reused report_id.
    std::unordered_map<std::string, const ReportEvent*> by_id;
    by_id.reserve(events.size());
    for (const auto& ev : events) {
        if (ev.ts < window.start || ev.ts >= window.end) continue;
        auto [it, inserted] = by_id.emplace(ev.report_id, &ev);
        if (!inserted) {
            const ReportEvent& cur = *it->second;
            const auto key = [](const ReportEvent& e) {
                return std::tie(e.category, e.content_id, e.ts, e.reporter_id);
            };
            if (key(ev) < key(cur)) it->second = &ev;
        }
    }
    std::map<std::string, FeatureVector> out;
    const int days = window.days();
    for (const auto& [id, ev] : by_id) {
        auto& fv = out[ev->content_id];
        if (fv.content_id.empty()) {
            fv.content_id = ev->content_id;
            fv.window_days = days;
        }
        fv.counts[static_cast<std::size_t>(ev->category)] += 1;
        fv.total += 1;
    }
    return out;
}

std::map<std::string, FeatureVector> merge_feature_maps(
    const std::map<std::string, FeatureVector>& a,
    const std::map<std::string, FeatureVector>& b) {
    std::map<std::string, FeatureVector> out = a;
    for (const auto& [id, fv] : b) {
        auto it = out.find(id);
        if (it == out.end()) {
            out.emplace(id, fv);
            continue;
        }
        for (std::size_t i = 0; i < kNumCategories; ++i) {
            it->second.counts[i] += fv.counts[i];
        }
        it->second.total += fv.total;
    }
    return out;
}

ClipResult clip_outliers(std::span<const FeatureVector> vectors, double q) {
    if (vectors.empty()) {
        throw EmptyInput("clip_outliers: empty input");
    }
    if (!(q > 0.0) || q > 1.0) {
        throw ConfigError("clip_outliers: quantile must be in (0, 1]");
    }
    std::vector<std::uint64_t> totals;
    totals.reserve(vectors.size());
    for (const auto& fv : vectors) totals.push_back(fv.total);
    std::sort(totals.begin(), totals.end());
    const auto n = totals.size();
    auto rank = static_cast<std::size_t>(
        std::ceil(q * static_cast<double>(n)));
    if (rank < 1) rank = 1;
    if (rank > n) rank = n;
    ClipResult result;
    result.threshold = totals[rank - 1];
    for (const auto& fv : vectors) {
        (fv.total > result.threshold ? result.excluded : result.kept)
            .push_back(fv);
    }
    return result;
}

namespace {

struct StratumKey {
    Country country;
    std::optional<Gender> gender;
    std::optional<int> age_band;

    auto tie() const { return std::make_tuple(country, gender, age_band); }
    bool operator<(const StratumKey& o) const { return tie() < o.tie(); }
};

}  // namespace

std::vector<ContentRecord> build_sample(std::span<const ContentRecord> records,
                                        std::span<const ReportEvent> events,
                                        std::size_t target_n,
                                        std::uint64_t seed, bool strict) {
    (void)seed;  // selection is pinned by the id-order tie break
    std::set<std::string> distinct_content;
    for (const auto& rec : records) distinct_content.insert(rec.content_id);
    if (target_n > distinct_content.size()) {
        throw InsufficientRecords(
            "build_sample: target_n exceeds distinct content count");
    }
    if (target_n == 0) return {};

    std::unordered_map<std::string, std::vector<std::string>> reporters_of;
    for (const auto& ev : events) {
        auto& v = reporters_of[ev.content_id];
        if (std::find(v.begin(), v.end(), ev.reporter_id) == v.end()) {
            v.push_back(ev.reporter_id);
        }
    }

    std::map<StratumKey, std::vector<std::size_t>> cells;
    for (std::size_t i = 0; i < records.size(); ++i) {
        cells[{records[i].country, records[i].reporter_gender,
               records[i].reporter_age_band}]
            .push_back(i);
    }
    if (strict) {
        // Full cross product of observed attribute values must be populated.
        std::set<Country> countries;
        std::set<std::optional<Gender>> genders;
        std::set<std::optional<int>> ages;
        for (const auto& rec : records) {
            countries.insert(rec.country);
            genders.insert(rec.reporter_gender);
            ages.insert(rec.reporter_age_band);
        }
        for (Country c : countries) {
            for (const auto& g : genders) {
                for (const auto& a : ages) {
                    if (!cells.count({c, g, a})) {
                        throw InsufficientRecords(
                            "build_sample: empty stratum in strict mode");
                    }
                }
            }
        }
    }

    // Largest-remainder allocation of target_n across cells.
    const double total = static_cast<double>(records.size());
    std::vector<std::pair<const StratumKey*, std::size_t>> quota;
    std::vector<std::pair<double, const StratumKey*>> remainders;
    std::map<const StratumKey*, std::size_t> alloc;
    std::size_t allocated = 0;
    for (const auto& [key, rows] : cells) {
        const double exact = static_cast<double>(target_n) *
                             static_cast<double>(rows.size()) / total;
        const auto base = static_cast<std::size_t>(std::floor(exact));
        alloc[&key] = base;
        allocated += base;
        remainders.emplace_back(exact - std::floor(exact), &key);
    }
    std::sort(remainders.begin(), remainders.end(),
              [](const auto& a, const auto& b) {
                  if (a.first != b.first) return a.first > b.first;
                  return a.second->tie() < b.second->tie();
              });
    for (auto& [rem, key] : remainders) {
        if (allocated >= target_n) break;
        if (alloc[key] < cells.at(*key).size()) {
            ++alloc[key];
            ++allocated;
        }
    }
    // Proportional floors can leave unfilled quota when small cells cap
    // out; spill the rest over cells with room, in key order.
    while (allocated < target_n) {
        bool moved = false;
        for (auto& [key, rows] : cells) {
            if (allocated >= target_n) break;
            auto it = alloc.find(&key);
            if (it->second < rows.size()) {
                ++it->second;
                ++allocated;
                moved = true;
            }
        }
        if (!moved) break;
    }

    std::vector<ContentRecord> sample;
    sample.reserve(target_n);
    std::unordered_set<std::string> seen_content;
    std::unordered_set<std::string> seen_reporters;
    for (const auto& [key, rows] : cells) {
        std::size_t want = alloc[&key];
        std::vector<std::size_t> remaining = rows;
        while (want > 0 && !remaining.empty()) {
            std::size_t best_pos = 0;
            auto score = [&](std::size_t row) {
                const auto& rec = records[row];
                const int content_seen =
                    seen_content.count(rec.content_id) ? 1 : 0;
                int all_reporters_seen = 1;
                const auto it = reporters_of.find(rec.content_id);
                if (it == reporters_of.end() || it->second.empty()) {
                    all_reporters_seen = 0;
                } else {
                    for (const auto& r : it->second) {
                        if (!seen_reporters.count(r)) {
                            all_reporters_seen = 0;
                            break;
                        }
                    }
                }
                return std::make_tuple(content_seen, all_reporters_seen,
                                       rec.content_id, row);
            };
            auto best = score(remaining[0]);
            for (std::size_t i = 1; i < remaining.size(); ++i) {
                auto s = score(remaining[i]);
                if (s < best) {
                    best = s;
                    best_pos = i;
                }
            }
            const std::size_t row = remaining[best_pos];
            remaining.erase(remaining.begin() +
                            static_cast<std::ptrdiff_t>(best_pos));
            const auto& rec = records[row];
            sample.push_back(rec);
            seen_content.insert(rec.content_id);
            const auto it = reporters_of.find(rec.content_id);
            if (it != reporters_of.end()) {
                for (const auto& r : it->second) seen_reporters.insert(r);
            }
            --want;
        }
    }
    return sample;
}

std::map<Country, double> reporting_rate(
    std::span<const ReportEvent> events,
    const std::map<Country, std::uint64_t>& mau) {
    for (const auto& [country, m] : mau) {
        if (m == 0) {
            throw ConfigError("reporting_rate: mau must be positive for " +
                              std::string(to_string(country)));
        }
    }
    std::map<Country, std::set<std::string>> distinct;
    for (const auto& ev : events) {
        if (!mau.count(ev.country)) {
            throw MissingMau("reporting_rate: no MAU for country " +
                             std::string(to_string(ev.country)));
        }
        distinct[ev.country].insert(ev.content_id);
    }
    std::map<Country, double> rates;
    for (const auto& [country, m] : mau) {
        const auto it = distinct.find(country);
        const double d =
            it == distinct.end() ? 0.0 : static_cast<double>(it->second.size());
        rates[country] = 1000.0 * d / static_cast<double>(m);
    }
    return rates;
}

}  // namespace repsig
