#include "repsig/noise.hpp"

#include <map>
#include <sstream>

#include <json.hpp>

#include "repsig/errors.hpp"
#include "repsig/io.hpp"

namespace repsig {

std::vector<ContentRecord> filter_labelled(
    std::span<const ContentRecord> records) {
    std::vector<ContentRecord> out;
    out.reserve(records.size());
    for (const auto& rec : records) {
        if (rec.gcrc) out.push_back(rec);
    }
    return out;
}

namespace {

void require_labelled(std::span<const ContentRecord> sample) {
    if (sample.empty()) {
        throw EmptySample("metrics require a non-empty sample");
    }
    for (const auto& rec : sample) {
        if (!rec.gcrc) {
            throw UnlabelledRecord("unlabelled record: " + rec.content_id);
        }
    }
}

}  // namespace

double inaccuracy(std::span<const ContentRecord> sample) {
    require_labelled(sample);
    std::size_t vm = 0;
    for (const auto& rec : sample) {
        if (rec.verification == VerificationFlag::VM) ++vm;
    }
    return 1.0 - static_cast<double>(vm) / static_cast<double>(sample.size());
}

NoiseDecomposition decompose(std::span<const ContentRecord> sample) {
    require_labelled(sample);
    std::size_t counts[5] = {0, 0, 0, 0, 0};
    for (const auto& rec : sample) {
        counts[static_cast<std::size_t>(
            noise_type(*rec.gcrc, rec.verification))] += 1;
    }
    const auto n = static_cast<double>(sample.size());
    NoiseDecomposition d;
    d.accurate = static_cast<double>(counts[0]) / n;
    d.false_noise = static_cast<double>(counts[1]) / n;
    d.quasi_noise = static_cast<double>(counts[2]) / n;
    d.soft_noise = static_cast<double>(counts[3]) / n;
    d.hard_noise = static_cast<double>(counts[4]) / n;
    d.n = sample.size();
    return d;
}

ClassDistribution distribution_table(std::span<const ContentRecord> sample) {
    require_labelled(sample);
    std::map<std::pair<Platform, Country>, std::map<GcrcClass, std::uint64_t>>
        counts;
    std::map<std::pair<Platform, Country>, std::uint64_t> totals;
    for (const auto& rec : sample) {
        const auto key = std::make_pair(rec.platform, rec.country);
        counts[key][*rec.gcrc] += 1;
        totals[key] += 1;
    }
    ClassDistribution dist;
    for (const auto& [key, per_class] : counts) {
        const auto [platform, country] = key;
        const auto other =
            platform == Platform::FB ? Platform::IG : Platform::FB;
        const auto other_it = counts.find({other, country});
        for (GcrcClass cls : kAllGcrcClasses) {
            const auto it = per_class.find(cls);
            const std::uint64_t count = it == per_class.end() ? 0 : it->second;
            ClassDistributionRow row;
            row.platform = platform;
            row.country = country;
            row.cls = cls;
            row.count = count;
            row.share = static_cast<double>(count) /
                        static_cast<double>(totals.at(key));
            if (other_it != counts.end()) {
                const auto& other_counts = other_it->second;
                const auto oit = other_counts.find(cls);
                const std::uint64_t other_count =
                    oit == other_counts.end() ? 0 : oit->second;
                const auto fb = platform == Platform::FB ? count : other_count;
                const auto ig = platform == Platform::FB ? other_count : count;
                row.deviation = static_cast<std::int64_t>(fb) -
                                static_cast<std::int64_t>(ig);
            }
            dist.rows.push_back(row);
        }
    }
    return dist;
}

std::string to_json_string(const NoiseDecomposition& d) {
    nlohmann::ordered_json j;
    j["n"] = d.n;
    j["accurate"] = d.accurate;
    j["false_noise"] = d.false_noise;
    j["quasi_noise"] = d.quasi_noise;
    j["soft_noise"] = d.soft_noise;
    j["hard_noise"] = d.hard_noise;
    j["inaccuracy"] = 1.0 - d.accurate;
    return j.dump(2) + "\n";
}

std::string to_csv(const ClassDistribution& dist) {
    std::ostringstream out;
    out << "platform,country,class,count,share,deviation\n";
    for (const auto& row : dist.rows) {
        out << to_string(row.platform) << ',' << to_string(row.country) << ','
            << to_string(row.cls) << ',' << row.count << ','
            << io::format_double(row.share) << ',';
        if (row.deviation) out << *row.deviation;
        out << '\n';
    }
    return out.str();
}

}  // namespace repsig
