#pragma once
// Report-stream ingestion: JSONL event parsing, labelled-content CSV,
// per-content multi-channel aggregation over a time window, quantile
// outlier clipping, balanced sample construction, and per-country
// reporting rates.

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "repsig/events.hpp"

namespace repsig {

enum class IssueKind {
    MalformedRecord,
    MissingField,
    UnknownCategory,
    UnknownCountry,
    UnknownPlatform,
    InvalidValue,
};

std::string_view to_string(IssueKind k);

// A rejected input line; `line` is 1-based.
struct ParseIssue {
    std::size_t line = 0;
    IssueKind kind = IssueKind::MalformedRecord;
    std::string detail;
};

struct EventParseResult {
    std::vector<ReportEvent> events;  // in input order
    std::vector<ParseIssue> issues;
};

struct ContentParseResult {
    std::vector<ContentRecord> records;
    std::vector<ParseIssue> issues;
};

// JSONL, one object per line with keys report_id, content_id, reporter_id,
// platform, country, category, ts. Bad lines become issues, good lines
// keep flowing.
EventParseResult parse_events(std::istream& in);
void write_events_jsonl(std::ostream& out, std::span<const ReportEvent> events);

// CSV with header content_id,platform,country,gcrc,verification,gender,age_band.
// Empty cells mean absent.
ContentParseResult parse_contents_csv(std::istream& in);
void write_contents_csv(std::ostream& out,
                        std::span<const ContentRecord> records);

// CSV with header content_id,<ten category columns>,total.
std::vector<FeatureVector> parse_features_csv(std::istream& in);
void write_features_csv(std::ostream& out,
                        std::span<const FeatureVector> vectors);

// Half-open time window [start, end).
struct TimeWindow {
    std::int64_t start = 0;
    std::int64_t end = 0;

    int days() const {
        return static_cast<int>((end - start + 86399) / 86400);
    }
};

// One vector per content item with at least one in-window event. Duplicate
// report_ids count once; among payload-divergent duplicates the smallest
// (category, content_id, ts) tuple wins so the result is order-free.
std::map<std::string, FeatureVector> aggregate_features(
    std::span<const ReportEvent> events, TimeWindow window);

// Merge of two disjoint-partition aggregations; counts add slot-wise.
std::map<std::string, FeatureVector> merge_feature_maps(
    const std::map<std::string, FeatureVector>& a,
    const std::map<std::string, FeatureVector>& b);

struct ClipResult {
    std::vector<FeatureVector> kept;
    std::vector<FeatureVector> excluded;
    std::uint64_t threshold = 0;  // nearest-rank q-quantile of totals
};

// Nearest-rank quantile clip: the threshold is the ceil(q*n)-th order
// statistic of totals; vectors strictly above it are excluded. q = 1
// keeps everything.
ClipResult clip_outliers(std::span<const FeatureVector> vectors, double q);

// Deterministic balanced subsample of target_n records. Strata are
// country x gender x age cells with largest-remainder allocation; inside a
// cell selection greedily prefers unseen content ids, then records whose
// reporters are not all covered yet, with ties broken by id order. The
// seed is folded into the interface for forward compatibility; with the
// id-order tie break the selection is already fully determined.
std::vector<ContentRecord> build_sample(std::span<const ContentRecord> records,
                                        std::span<const ReportEvent> events,
                                        std::size_t target_n,
                                        std::uint64_t seed,
                                        bool strict = false);

// Distinct content items reported per thousand monthly active users, for
// every country present in `mau`. Events from a country without an MAU
// entry raise MissingMau.
std::map<Country, double> reporting_rate(
    std::span<const ReportEvent> events,
    const std::map<Country, std::uint64_t>& mau);

}  // namespace repsig
