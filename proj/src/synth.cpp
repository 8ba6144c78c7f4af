#include "repsig/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "repsig/errors.hpp"
#include "repsig/io.hpp"
#include "repsig/noise.hpp"
#include "repsig/prob.hpp"
#include "repsig/rng.hpp"

namespace repsig {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view to_string(Behaviour b) {
    switch (b) {
        case Behaviour::FaithfulFlagger: return "faithful_flagger";
        case Behaviour::DislikeJealousy: return "dislike_jealousy";
        case Behaviour::ConfusedReporter: return "confused_reporter";
        case Behaviour::AttentionSeeker: return "attention_seeker";
    }
    return "?";
}

std::optional<Behaviour> parse_behaviour(std::string_view s) {
    for (Behaviour b : kAllBehaviours) {
        if (s == to_string(b)) return b;
    }
    return std::nullopt;
}

namespace {

constexpr std::size_t kC = kNumGcrcClasses;

std::size_t idx(GcrcClass c) { return static_cast<std::size_t>(c); }
std::size_t idx(ReportCategory c) { return static_cast<std::size_t>(c); }

// Integer allocation of n across weights, largest remainder, ties by index.
std::vector<std::size_t> largest_remainder(std::span<const double> weights,
                                           std::size_t n) {
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    std::vector<std::size_t> counts(weights.size(), 0);
    if (total <= 0.0 || n == 0) return counts;
    std::vector<std::pair<double, std::size_t>> rem;
    std::size_t allocated = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double exact = static_cast<double>(n) * weights[i] / total;
        counts[i] = static_cast<std::size_t>(std::floor(exact));
        allocated += counts[i];
        rem.emplace_back(exact - std::floor(exact), i);
    }
    std::sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (std::size_t k = 0; allocated < n && k < rem.size(); ++k) {
        ++counts[rem[k].second];
        ++allocated;
    }
    return counts;
}

struct GroupMasses {
    double c, m, i, hm, oh;
};

// Spread one behaviour's aggregated-group masses over the 16 classes,
// proportional to the catalog marginals inside each group. Two profile
// quirks: the confused reporter's M mass sits on M2/MS only (with its HM
// mass leaning on M1), and the attention seeker's M mass concentrates on
// M3.
std::array<double, kC> spread_targets(
    Behaviour kind, const GroupMasses& gm,
    const std::array<double, kC>& marginals) {
    std::array<double, kC> out{};
    auto spread = [&](double mass, std::span<const GcrcClass> classes) {
        double total = 0.0;
        for (GcrcClass c : classes) total += marginals[idx(c)];
        for (GcrcClass c : classes) {
            const double w = total > 0.0
                                 ? marginals[idx(c)] / total
                                 : 1.0 / static_cast<double>(classes.size());
            out[idx(c)] += mass * w;
        }
    };
    static constexpr std::array<GcrcClass, 5> c_group = {
        GcrcClass::C0, GcrcClass::C1, GcrcClass::C2, GcrcClass::C2Star,
        GcrcClass::C3};
    static constexpr std::array<GcrcClass, 3> m_group = {
        GcrcClass::M2, GcrcClass::M3, GcrcClass::MS};
    static constexpr std::array<GcrcClass, 2> m_confusable = {GcrcClass::M2,
                                                              GcrcClass::MS};
    static constexpr std::array<GcrcClass, 1> m3_only = {GcrcClass::M3};
    static constexpr std::array<GcrcClass, 3> hm_group = {
        GcrcClass::H2, GcrcClass::H3, GcrcClass::M1};
    static constexpr std::array<GcrcClass, 2> hm_humour = {GcrcClass::H2,
                                                           GcrcClass::H3};
    static constexpr std::array<GcrcClass, 1> m1_only = {GcrcClass::M1};
    static constexpr std::array<GcrcClass, 4> oh_group = {
        GcrcClass::H1, GcrcClass::O1, GcrcClass::O2, GcrcClass::J};
    static constexpr std::array<GcrcClass, 1> i_group = {GcrcClass::I};

    spread(gm.c, c_group);
    spread(gm.i, i_group);
    spread(gm.oh, oh_group);
    switch (kind) {
        case Behaviour::ConfusedReporter:
            spread(gm.m, m_confusable);
            spread(gm.hm * 0.8, m1_only);
            spread(gm.hm * 0.2, hm_humour);
            break;
        case Behaviour::AttentionSeeker:
            spread(gm.m * 0.9, m3_only);
            spread(gm.m * 0.1, m_confusable);
            spread(gm.hm, hm_group);
            break;
        default:
            spread(gm.m, m_group);
            spread(gm.hm, hm_group);
            break;
    }
    return out;
}

std::array<double, kNumCategories> category_table(Behaviour b) {
    std::array<double, kNumCategories> w{};
    auto set = [&](ReportCategory c, double v) { w[idx(c)] = v; };
    switch (b) {
        case Behaviour::FaithfulFlagger:
            set(ReportCategory::FalseNews, 0.865);
            set(ReportCategory::NuditySexualSolicitation, 0.005);
            set(ReportCategory::Violence, 0.02);
            set(ReportCategory::Harassment, 0.015);
            set(ReportCategory::SuicideInjury, 0.005);
            set(ReportCategory::Spam, 0.02);
            set(ReportCategory::HateSpeech, 0.03);
            set(ReportCategory::UnauthorisedSales, 0.005);
            set(ReportCategory::InappropriateContent, 0.03);
            set(ReportCategory::IDontLikeIt, 0.005);
            break;
        case Behaviour::DislikeJealousy:
            set(ReportCategory::FalseNews, 0.38);
            set(ReportCategory::NuditySexualSolicitation, 0.005);
            set(ReportCategory::Violence, 0.02);
            set(ReportCategory::Harassment, 0.08);
            set(ReportCategory::SuicideInjury, 0.005);
            set(ReportCategory::Spam, 0.01);
            set(ReportCategory::HateSpeech, 0.005);
            set(ReportCategory::UnauthorisedSales, 0.005);
            set(ReportCategory::InappropriateContent, 0.07);
            set(ReportCategory::IDontLikeIt, 0.42);
            break;
        case Behaviour::ConfusedReporter:
            set(ReportCategory::FalseNews, 0.50);
            set(ReportCategory::NuditySexualSolicitation, 0.12);
            set(ReportCategory::Violence, 0.11);
            set(ReportCategory::Harassment, 0.02);
            set(ReportCategory::SuicideInjury, 0.005);
            set(ReportCategory::Spam, 0.17);
            set(ReportCategory::HateSpeech, 0.01);
            set(ReportCategory::UnauthorisedSales, 0.01);
            set(ReportCategory::InappropriateContent, 0.05);
            set(ReportCategory::IDontLikeIt, 0.005);
            break;
        case Behaviour::AttentionSeeker:
            set(ReportCategory::FalseNews, 0.40);
            set(ReportCategory::NuditySexualSolicitation, 0.005);
            set(ReportCategory::Violence, 0.10);
            set(ReportCategory::Harassment, 0.22);
            set(ReportCategory::SuicideInjury, 0.02);
            set(ReportCategory::Spam, 0.02);
            set(ReportCategory::HateSpeech, 0.16);
            set(ReportCategory::UnauthorisedSales, 0.01);
            set(ReportCategory::InappropriateContent, 0.06);
            set(ReportCategory::IDontLikeIt, 0.005);
            break;
    }
    return w;
}

struct PresetShape {
    std::array<double, kC> marginals{};
    std::array<double, kNumBehaviours> mix{};
    std::array<GroupMasses, kNumBehaviours> groups{};
    Platform platform = Platform::IG;
    Country country = Country::US;
    std::uint64_t mau = 0;
    double rate_target = 0.0;
};

PresetShape preset_shape(std::string_view name) {
    PresetShape p;
    auto set = [&](GcrcClass c, double v) { p.marginals[idx(c)] = v; };
    if (name == "ig-us") {
        set(GcrcClass::C0, 0.06);
        set(GcrcClass::C1, 0.08);
        set(GcrcClass::C2, 0.218);
        set(GcrcClass::C2Star, 0.03);
        set(GcrcClass::C3, 0.03);
        set(GcrcClass::M1, 0.012);
        set(GcrcClass::M2, 0.05);
        set(GcrcClass::M3, 0.05);
        set(GcrcClass::MS, 0.09);
        set(GcrcClass::H1, 0.045);
        set(GcrcClass::H2, 0.008);
        set(GcrcClass::H3, 0.006);
        set(GcrcClass::O1, 0.075);
        set(GcrcClass::O2, 0.006);
        set(GcrcClass::I, 0.212);
        set(GcrcClass::J, 0.028);
        p.mix = {0.55, 0.18, 0.15, 0.12};
        p.groups = {GroupMasses{0.90, 0.008, 0.015, 0.007, 0.07},
                    GroupMasses{0.35, 0.05, 0.42, 0.015, 0.165},
                    GroupMasses{0.30, 0.31, 0.06, 0.09, 0.24},
                    GroupMasses{0.31, 0.31, 0.11, 0.03, 0.24}};
        p.platform = Platform::IG;
        p.country = Country::US;
        p.mau = 4000000;
        p.rate_target = 0.81;
    } else if (name == "ig-fr") {
        set(GcrcClass::C0, 0.02);
        set(GcrcClass::C1, 0.003);
        set(GcrcClass::C2, 0.045);
        set(GcrcClass::C2Star, 0.005);
        set(GcrcClass::C3, 0.007);
        set(GcrcClass::M1, 0.02);
        set(GcrcClass::M2, 0.06);
        set(GcrcClass::M3, 0.04);
        set(GcrcClass::MS, 0.58);
        set(GcrcClass::H1, 0.01);
        set(GcrcClass::H2, 0.02);
        set(GcrcClass::H3, 0.01);
        set(GcrcClass::O1, 0.04);
        set(GcrcClass::O2, 0.01);
        set(GcrcClass::I, 0.12);
        set(GcrcClass::J, 0.01);
        p.mix = {0.22, 0.18, 0.45, 0.15};
        p.groups = {GroupMasses{0.70, 0.10, 0.06, 0.04, 0.10},
                    GroupMasses{0.10, 0.15, 0.45, 0.05, 0.25},
                    GroupMasses{0.08, 0.70, 0.05, 0.09, 0.08},
                    GroupMasses{0.08, 0.62, 0.12, 0.04, 0.14}};
        p.platform = Platform::IG;
        p.country = Country::FR;
        p.mau = 4100000;
        p.rate_target = 0.78;
    } else if (name == "fb-us") {
        set(GcrcClass::C0, 0.05);
        set(GcrcClass::C1, 0.10);
        set(GcrcClass::C2, 0.25);
        set(GcrcClass::C2Star, 0.02);
        set(GcrcClass::C3, 0.03);
        set(GcrcClass::M1, 0.02);
        set(GcrcClass::M2, 0.04);
        set(GcrcClass::M3, 0.05);
        set(GcrcClass::MS, 0.05);
        set(GcrcClass::H1, 0.03);
        set(GcrcClass::H2, 0.04);
        set(GcrcClass::H3, 0.02);
        set(GcrcClass::O1, 0.12);
        set(GcrcClass::O2, 0.05);
        set(GcrcClass::I, 0.12);
        set(GcrcClass::J, 0.01);
        p.mix = {0.50, 0.22, 0.12, 0.16};
        p.groups = {GroupMasses{0.90, 0.008, 0.015, 0.007, 0.07},
                    GroupMasses{0.35, 0.05, 0.42, 0.015, 0.165},
                    GroupMasses{0.30, 0.31, 0.06, 0.09, 0.24},
                    GroupMasses{0.31, 0.31, 0.11, 0.03, 0.24}};
        p.platform = Platform::FB;
        p.country = Country::US;
        p.mau = 4000000;
        p.rate_target = 0.81;
    } else {
        throw ConfigError("unknown preset: " + std::string(name));
    }
    return p;
}

void check_distribution(std::span<const double> w, const std::string& field) {
    double total = 0.0;
    for (double v : w) {
        if (v < 0.0 || v > 1.0) {
            throw ConfigError(field + ": weights must be in [0,1]");
        }
        total += v;
    }
    if (std::fabs(total - 1.0) > 1e-9) {
        throw ConfigError(field + ": weights must sum to 1, got " +
                          io::format_double(total));
    }
}

std::string content_id_of(std::size_t i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "c%06zu", i);
    return buf;
}

std::string reporter_id_of(std::size_t i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "u%06zu", i);
    return buf;
}

std::string report_id_of(std::size_t i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "r%08zu", i);
    return buf;
}

}  // namespace

std::array<BehaviourProfile, kNumBehaviours> default_profiles() {
    return preset_config("ig-us").profiles;
}

void GeneratorConfig::validate() const {
    if (n_content == 0) throw ConfigError("n_content: must be positive");
    if (n_reporters == 0) throw ConfigError("n_reporters: must be positive");
    if (window_days <= 0) throw ConfigError("window_days: must be positive");
    if (!(tail_sigma > 0.0)) throw ConfigError("tail_sigma: must be positive");
    if (activity_cap == 0) throw ConfigError("activity_cap: must be >= 1");
    if (vm_rate_given_c < 0.0 || vm_rate_given_c > 1.0) {
        throw ConfigError("vm_rate_given_c: must be in [0,1]");
    }
    for (double v : vo_rates) {
        if (v < 0.0 || v > 1.0) {
            throw ConfigError("vo_rates: must be in [0,1]");
        }
    }
    check_distribution(behaviour_mix, "behaviour_mix");
    for (const auto& profile : profiles) {
        const std::string tag =
            "profiles[" + std::string(to_string(profile.kind)) + "]";
        check_distribution(profile.target_class_weights,
                           tag + ".target_class_weights");
        check_distribution(profile.category_weights,
                           tag + ".category_weights");
        if (!(profile.activity_shape > 0.0) ||
            !(profile.activity_scale > 0.0)) {
            throw ConfigError(tag + ": activity shape/scale must be positive");
        }
    }
    if (slices.empty()) throw ConfigError("slices: at least one required");
    double share_total = 0.0;
    for (std::size_t s = 0; s < slices.size(); ++s) {
        const std::string tag = "slices[" + std::to_string(s) + "]";
        if (slices[s].share < 0.0) {
            throw ConfigError(tag + ".share: must be >= 0");
        }
        share_total += slices[s].share;
        check_distribution(slices[s].class_marginals,
                           tag + ".class_marginals");
    }
    if (std::fabs(share_total - 1.0) > 1e-9) {
        throw ConfigError("slices: shares must sum to 1");
    }
}

GeneratorConfig preset_config(std::string_view name, std::uint64_t seed) {
    const PresetShape shape = preset_shape(name);
    GeneratorConfig cfg;
    cfg.seed = seed;
    cfg.behaviour_mix = shape.mix;
    for (std::size_t b = 0; b < kNumBehaviours; ++b) {
        BehaviourProfile& profile = cfg.profiles[b];
        profile.kind = kAllBehaviours[b];
        profile.target_class_weights = spread_targets(
            profile.kind, shape.groups[b], shape.marginals);
        profile.category_weights = category_table(profile.kind);
        profile.activity_shape = 1.2;
        profile.activity_scale = 0.3;
    }
    SliceConfig slice;
    slice.platform = shape.platform;
    slice.country = shape.country;
    slice.share = 1.0;
    slice.class_marginals = shape.marginals;
    cfg.slices = {slice};
    cfg.vm_rate_given_c = 0.173;
    cfg.vo_rates = {};
    cfg.vo_rates[idx(GcrcClass::M2)] = 0.55;
    cfg.vo_rates[idx(GcrcClass::M3)] = 0.55;
    cfg.vo_rates[idx(GcrcClass::MS)] = 0.55;
    cfg.vo_rates[idx(GcrcClass::I)] = 0.075;
    cfg.mau = {{shape.country, shape.mau}};
    cfg.rate_targets = {{shape.country, shape.rate_target}};
    return cfg;
}

std::vector<std::string> preset_names() { return {"ig-us", "ig-fr", "fb-us"}; }

std::string config_to_json(const GeneratorConfig& cfg) {
    ordered_json j;
    j["n_content"] = cfg.n_content;
    j["n_reporters"] = cfg.n_reporters;
    j["seed"] = cfg.seed;
    j["window_days"] = cfg.window_days;
    j["window_start_ts"] = cfg.window_start_ts;
    j["tail_sigma"] = cfg.tail_sigma;
    j["activity_cap"] = cfg.activity_cap;
    j["vm_rate_given_c"] = cfg.vm_rate_given_c;
    ordered_json vo = ordered_json::object();
    for (GcrcClass c : kAllGcrcClasses) {
        if (cfg.vo_rates[idx(c)] > 0.0) {
            vo[std::string(to_string(c))] = cfg.vo_rates[idx(c)];
        }
    }
    j["vo_rates"] = vo;
    ordered_json mix = ordered_json::object();
    for (std::size_t b = 0; b < kNumBehaviours; ++b) {
        mix[std::string(to_string(kAllBehaviours[b]))] = cfg.behaviour_mix[b];
    }
    j["behaviour_mix"] = mix;
    j["profiles"] = ordered_json::array();
    for (const auto& profile : cfg.profiles) {
        ordered_json p;
        p["kind"] = to_string(profile.kind);
        p["activity_shape"] = profile.activity_shape;
        p["activity_scale"] = profile.activity_scale;
        ordered_json t = ordered_json::object();
        for (GcrcClass c : kAllGcrcClasses) {
            t[std::string(to_string(c))] =
                profile.target_class_weights[idx(c)];
        }
        p["target_class_weights"] = t;
        ordered_json cw = ordered_json::object();
        for (ReportCategory c : kAllCategories) {
            cw[std::string(to_string(c))] = profile.category_weights[idx(c)];
        }
        p["category_weights"] = cw;
        j["profiles"].push_back(p);
    }
    j["slices"] = ordered_json::array();
    for (const auto& slice : cfg.slices) {
        ordered_json s;
        s["platform"] = to_string(slice.platform);
        s["country"] = to_string(slice.country);
        s["share"] = slice.share;
        ordered_json m = ordered_json::object();
        for (GcrcClass c : kAllGcrcClasses) {
            m[std::string(to_string(c))] = slice.class_marginals[idx(c)];
        }
        s["class_marginals"] = m;
        j["slices"].push_back(s);
    }
    ordered_json mau = ordered_json::object();
    for (const auto& [country, m] : cfg.mau) {
        mau[std::string(to_string(country))] = m;
    }
    j["mau"] = mau;
    ordered_json rt = ordered_json::object();
    for (const auto& [country, r] : cfg.rate_targets) {
        rt[std::string(to_string(country))] = r;
    }
    j["rate_targets"] = rt;
    return j.dump(2) + "\n";
}

GeneratorConfig config_from_json(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw ConfigError("config: not a JSON object");
    }
    GeneratorConfig cfg;
    try {
        cfg.n_content = j.at("n_content").get<std::size_t>();
        cfg.n_reporters = j.at("n_reporters").get<std::size_t>();
        if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("window_days")) {
            cfg.window_days = j["window_days"].get<int>();
        }
        if (j.contains("window_start_ts")) {
            cfg.window_start_ts = j["window_start_ts"].get<std::int64_t>();
        }
        if (j.contains("tail_sigma")) {
            cfg.tail_sigma = j["tail_sigma"].get<double>();
        }
        if (j.contains("activity_cap")) {
            cfg.activity_cap = j["activity_cap"].get<std::uint64_t>();
        }
        cfg.vm_rate_given_c = j.at("vm_rate_given_c").get<double>();
        cfg.vo_rates = {};
        for (const auto& [key, value] : j.at("vo_rates").items()) {
            const auto c = parse_gcrc(key);
            if (!c) throw ConfigError("vo_rates: unknown class " + key);
            cfg.vo_rates[idx(*c)] = value.get<double>();
        }
        for (const auto& [key, value] : j.at("behaviour_mix").items()) {
            const auto b = parse_behaviour(key);
            if (!b) throw ConfigError("behaviour_mix: unknown behaviour " + key);
            cfg.behaviour_mix[static_cast<std::size_t>(*b)] =
                value.get<double>();
        }
        const auto& profiles = j.at("profiles");
        if (!profiles.is_array() || profiles.size() != kNumBehaviours) {
            throw ConfigError("profiles: expected 4 entries");
        }
        for (const auto& p : profiles) {
            const auto kind = parse_behaviour(p.at("kind").get<std::string>());
            if (!kind) {
                throw ConfigError("profiles: unknown kind " +
                                  p.at("kind").get<std::string>());
            }
            BehaviourProfile& profile =
                cfg.profiles[static_cast<std::size_t>(*kind)];
            profile.kind = *kind;
            profile.activity_shape = p.at("activity_shape").get<double>();
            profile.activity_scale = p.at("activity_scale").get<double>();
            profile.target_class_weights = {};
            for (const auto& [key, value] :
                 p.at("target_class_weights").items()) {
                const auto c = parse_gcrc(key);
                if (!c) {
                    throw ConfigError("target_class_weights: unknown class " +
                                      key);
                }
                profile.target_class_weights[idx(*c)] = value.get<double>();
            }
            profile.category_weights = {};
            for (const auto& [key, value] : p.at("category_weights").items()) {
                const auto c = parse_category(key);
                if (!c) {
                    throw ConfigError("category_weights: unknown category " +
                                      key);
                }
                profile.category_weights[idx(*c)] = value.get<double>();
            }
        }
        for (const auto& s : j.at("slices")) {
            SliceConfig slice;
            const auto platform =
                parse_platform(s.at("platform").get<std::string>());
            const auto country =
                parse_country(s.at("country").get<std::string>());
            if (!platform) throw ConfigError("slices: unknown platform");
            if (!country) throw ConfigError("slices: unknown country");
            slice.platform = *platform;
            slice.country = *country;
            slice.share = s.at("share").get<double>();
            slice.class_marginals = {};
            for (const auto& [key, value] : s.at("class_marginals").items()) {
                const auto c = parse_gcrc(key);
                if (!c) {
                    throw ConfigError("class_marginals: unknown class " + key);
                }
                slice.class_marginals[idx(*c)] = value.get<double>();
            }
            cfg.slices.push_back(std::move(slice));
        }
        if (j.contains("mau")) {
            for (const auto& [key, value] : j["mau"].items()) {
                const auto c = parse_country(key);
                if (!c) throw ConfigError("mau: unknown country " + key);
                cfg.mau[*c] = value.get<std::uint64_t>();
            }
        }
        if (j.contains("rate_targets")) {
            for (const auto& [key, value] : j["rate_targets"].items()) {
                const auto c = parse_country(key);
                if (!c) {
                    throw ConfigError("rate_targets: unknown country " + key);
                }
                cfg.rate_targets[*c] = value.get<double>();
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

SynthDataset generate(const GeneratorConfig& cfg) {
    cfg.validate();
    SynthDataset out;
    Rng rng_content(derive_seed(cfg.seed, "synth.content"));
    Rng rng_reporters(derive_seed(cfg.seed, "synth.reporters"));
    Rng rng_events(derive_seed(cfg.seed, "synth.events"));

    // --- content catalog
    std::vector<double> slice_shares;
    for (const auto& s : cfg.slices) slice_shares.push_back(s.share);
    const auto slice_counts = largest_remainder(slice_shares, cfg.n_content);

    static constexpr std::array<double, 3> kGenderWeights = {0.47, 0.47, 0.06};
    static constexpr std::array<double, 6> kAgeWeights = {0.20, 0.25, 0.20,
                                                          0.15, 0.12, 0.08};
    const auto gender_cum = cumulative_weights(kGenderWeights);
    const auto age_cum = cumulative_weights(kAgeWeights);

    std::vector<double> item_weight(cfg.n_content, 0.0);
    std::array<std::vector<std::size_t>, kC> class_items;
    out.contents.reserve(cfg.n_content);
    std::size_t next_item = 0;
    for (std::size_t s = 0; s < cfg.slices.size(); ++s) {
        const SliceConfig& slice = cfg.slices[s];
        const auto class_counts =
            largest_remainder(slice.class_marginals, slice_counts[s]);
        std::vector<GcrcClass> classes;
        classes.reserve(slice_counts[s]);
        for (std::size_t c = 0; c < kC; ++c) {
            classes.insert(classes.end(), class_counts[c], kAllGcrcClasses[c]);
        }
        rng_content.shuffle(classes);
        std::array<std::size_t, kC> ladder_pos{};
        for (GcrcClass cls : classes) {
            ContentRecord rec;
            rec.content_id = content_id_of(next_item);
            rec.platform = slice.platform;
            rec.country = slice.country;
            rec.gcrc = cls;
            if (aggregate_class(cls) == AggregatedClass::C &&
                rng_content.bernoulli(cfg.vm_rate_given_c)) {
                rec.verification = VerificationFlag::VM;
            } else if (rng_content.bernoulli(cfg.vo_rates[idx(cls)])) {
                rec.verification = VerificationFlag::VO;
            }
            rec.reporter_gender =
                kAllGenders[rng_content.categorical(gender_cum)];
            rec.reporter_age_band =
                static_cast<int>(rng_content.categorical(age_cum)) + 1;

            // Deterministic heavy-tail ladder within the (slice, class)
            // group: the j-th item takes the lognormal quantile at
            // (j + 0.5) / n.
            const std::size_t j = ladder_pos[idx(cls)]++;
            const double q = (static_cast<double>(j) + 0.5) /
                             static_cast<double>(class_counts[idx(cls)]);
            item_weight[next_item] =
                std::exp(cfg.tail_sigma * prob::normal_ppf(q));

            class_items[idx(cls)].push_back(next_item);
            out.contents.push_back(std::move(rec));
            ++next_item;
        }
    }

    std::array<std::vector<double>, kC> class_cum;
    for (std::size_t c = 0; c < kC; ++c) {
        std::vector<double> w;
        w.reserve(class_items[c].size());
        for (std::size_t item : class_items[c]) {
            w.push_back(item_weight[item]);
        }
        class_cum[c] = cumulative_weights(w);
    }

    // --- behaviour pick tables, restricted to populated classes
    std::array<std::vector<double>, kNumBehaviours> pick_cum;
    std::array<std::vector<std::size_t>, kNumBehaviours> pick_cls;
    for (std::size_t b = 0; b < kNumBehaviours; ++b) {
        std::vector<double> w;
        for (std::size_t c = 0; c < kC; ++c) {
            if (class_items[c].empty()) continue;
            const double v = cfg.profiles[b].target_class_weights[c];
            if (v <= 0.0) continue;
            w.push_back(v);
            pick_cls[b].push_back(c);
        }
        if (w.empty()) {
            throw ConfigError(
                "profiles[" +
                std::string(to_string(cfg.profiles[b].kind)) +
                "]: no populated target class");
        }
        pick_cum[b] = cumulative_weights(w);
    }
    std::array<std::vector<double>, kNumBehaviours> cat_cum;
    for (std::size_t b = 0; b < kNumBehaviours; ++b) {
        cat_cum[b] = cumulative_weights(cfg.profiles[b].category_weights);
    }
    const auto mix_cum = cumulative_weights(cfg.behaviour_mix);

    // --- reporters
    struct Reporter {
        Behaviour behaviour;
        std::uint64_t activity;
    };
    std::vector<Reporter> reporters;
    reporters.reserve(cfg.n_reporters);
    for (std::size_t r = 0; r < cfg.n_reporters; ++r) {
        const auto b = static_cast<std::size_t>(
            rng_reporters.categorical(mix_cum));
        const auto& profile = cfg.profiles[b];
        const std::uint64_t activity = rng_reporters.pareto_count(
            profile.activity_shape, profile.activity_scale, cfg.activity_cap);
        reporters.push_back({kAllBehaviours[b], activity});
        out.reporters.emplace(reporter_id_of(r), kAllBehaviours[b]);
    }

    // --- events, reporter-major order
    const std::uint64_t window_secs =
        static_cast<std::uint64_t>(cfg.window_days) * 86400u;
    std::size_t total_events = 0;
    for (const auto& rep : reporters) total_events += rep.activity;
    out.events.reserve(total_events);
    std::size_t next_report = 0;
    for (std::size_t r = 0; r < reporters.size(); ++r) {
        const auto b = static_cast<std::size_t>(reporters[r].behaviour);
        const std::string reporter_id = reporter_id_of(r);
        for (std::uint64_t k = 0; k < reporters[r].activity; ++k) {
            const std::size_t cls =
                pick_cls[b][rng_events.categorical(pick_cum[b])];
            const std::size_t item =
                class_items[cls][rng_events.categorical(class_cum[cls])];
            ReportEvent ev;
            ev.report_id = report_id_of(next_report++);
            ev.content_id = out.contents[item].content_id;
            ev.reporter_id = reporter_id;
            ev.platform = out.contents[item].platform;
            ev.country = out.contents[item].country;
            ev.category =
                kAllCategories[rng_events.categorical(cat_cum[b])];
            ev.ts = cfg.window_start_ts +
                    static_cast<std::int64_t>(rng_events.uniform(window_secs));
            out.events.push_back(std::move(ev));
        }
    }
    return out;
}

CalibrationReport calibration_report(const SynthDataset& dataset,
                                     const GeneratorConfig& cfg) {
    CalibrationReport report;
    auto add = [&](std::string name, double achieved,
                   std::optional<double> target,
                   std::optional<double> tolerance) {
        CalibrationRow row;
        row.name = std::move(name);
        row.achieved = achieved;
        row.target = target;
        row.tolerance = tolerance;
        row.ok = !target || !tolerance ||
                 std::fabs(achieved - *target) <= *tolerance;
        report.all_ok = report.all_ok && row.ok;
        report.rows.push_back(std::move(row));
    };

    // Blended class marginals over slices.
    std::array<double, kC> marginals{};
    for (const auto& slice : cfg.slices) {
        for (std::size_t c = 0; c < kC; ++c) {
            marginals[c] += slice.share * slice.class_marginals[c];
        }
    }

    const double n = static_cast<double>(dataset.contents.size());
    std::array<double, 5> agg_share{};     // achieved, by AggregatedClass
    std::array<double, 5> agg_target{};
    for (std::size_t c = 0; c < kC; ++c) {
        agg_target[static_cast<std::size_t>(
            aggregate_class(kAllGcrcClasses[c]))] += marginals[c];
    }
    std::size_t n_c_items = 0, n_vm = 0, n_magg = 0, n_magg_vo = 0;
    for (const auto& rec : dataset.contents) {
        const auto agg = aggregate_class(*rec.gcrc);
        agg_share[static_cast<std::size_t>(agg)] += 1.0;
        if (agg == AggregatedClass::C) {
            ++n_c_items;
            if (rec.verification == VerificationFlag::VM) ++n_vm;
        }
        if (agg == AggregatedClass::M) {
            ++n_magg;
            if (rec.verification == VerificationFlag::VO) ++n_magg_vo;
        }
    }
    for (AggregatedClass agg : kAllAggregatedClasses) {
        const auto a = static_cast<std::size_t>(agg);
        add("share[" + std::string(to_string(agg)) + "]", agg_share[a] / n,
            agg_target[a], 0.02);
    }
    if (n_c_items > 0) {
        add("vm_rate_given_C",
            static_cast<double>(n_vm) / static_cast<double>(n_c_items),
            cfg.vm_rate_given_c, 0.02);
    }
    if (n_magg > 0) {
        double vo_target_mass = 0.0, magg_mass = 0.0;
        for (GcrcClass c :
             {GcrcClass::M2, GcrcClass::M3, GcrcClass::MS}) {
            vo_target_mass += marginals[idx(c)] * cfg.vo_rates[idx(c)];
            magg_mass += marginals[idx(c)];
        }
        add("vo_rate_given_M",
            static_cast<double>(n_magg_vo) / static_cast<double>(n_magg),
            magg_mass > 0 ? std::optional<double>(vo_target_mass / magg_mass)
                          : std::nullopt,
            0.02);
    }

    // Closed-form noise targets from the config.
    double t_acc = 0.0, t_false = 0.0, t_quasi = 0.0, t_soft = 0.0,
           t_hard = 0.0;
    for (std::size_t c = 0; c < kC; ++c) {
        const GcrcClass cls = kAllGcrcClasses[c];
        double rest = marginals[c];
        if (aggregate_class(cls) == AggregatedClass::C) {
            t_acc += rest * cfg.vm_rate_given_c;
            rest *= 1.0 - cfg.vm_rate_given_c;
        }
        t_quasi += rest * cfg.vo_rates[c];
        rest *= 1.0 - cfg.vo_rates[c];
        switch (noise_type(cls, VerificationFlag::None)) {
            case NoiseType::FalseNoise: t_false += rest; break;
            case NoiseType::QuasiNoise: t_quasi += rest; break;
            case NoiseType::SoftNoise: t_soft += rest; break;
            case NoiseType::HardNoise: t_hard += rest; break;
            case NoiseType::Accurate: t_acc += rest; break;
        }
    }
    const NoiseDecomposition d = decompose(dataset.contents);
    add("inaccuracy", 1.0 - d.accurate, 1.0 - t_acc, 0.02);
    add("noise.accurate", d.accurate, t_acc, 0.02);
    add("noise.false", d.false_noise, t_false, 0.02);
    add("noise.quasi", d.quasi_noise, t_quasi, 0.02);
    add("noise.soft", d.soft_noise, t_soft, 0.02);
    add("noise.hard", d.hard_noise, t_hard, 0.02);

    // Activity tail and volume.
    std::map<std::string, std::uint64_t> per_reporter;
    for (const auto& ev : dataset.events) per_reporter[ev.reporter_id] += 1;
    std::size_t supers = 0;
    for (const auto& [id, count] : per_reporter) {
        if (count > 1000) ++supers;
    }
    {
        CalibrationRow row;
        row.name = "super_reporters_gt_1000";
        row.achieved = static_cast<double>(supers);
        row.ok = supers > 0;
        report.all_ok = report.all_ok && row.ok;
        report.rows.push_back(row);
    }
    add("events_total", static_cast<double>(dataset.events.size()),
        std::nullopt, std::nullopt);
    add("mean_reports_per_item", static_cast<double>(dataset.events.size()) / n,
        std::nullopt, std::nullopt);

    // Per-country distinct-item rates.
    if (!cfg.mau.empty()) {
        const auto rates = reporting_rate(dataset.events, cfg.mau);
        for (const auto& [country, rate] : rates) {
            const auto it = cfg.rate_targets.find(country);
            add("rate_per_1000[" + std::string(to_string(country)) + "]",
                rate,
                it != cfg.rate_targets.end()
                    ? std::optional<double>(it->second)
                    : std::nullopt,
                0.05);
        }
    }

    // Achieved behaviour mix.
    std::array<double, kNumBehaviours> mix_achieved{};
    for (const auto& [id, b] : dataset.reporters) {
        mix_achieved[static_cast<std::size_t>(b)] += 1.0;
    }
    for (std::size_t b = 0; b < kNumBehaviours; ++b) {
        add("mix[" + std::string(to_string(kAllBehaviours[b])) + "]",
            mix_achieved[b] / static_cast<double>(dataset.reporters.size()),
            cfg.behaviour_mix[b], 0.02);
    }
    return report;
}

std::string format_report(const CalibrationReport& report) {
    std::ostringstream out;
    out << "calibration report\n";
    for (const auto& row : report.rows) {
        char buf[160];
        if (row.target) {
            std::snprintf(buf, sizeof(buf),
                          "  %-32s %12.4f  target %8.4f +/- %.4f  [%s]\n",
                          row.name.c_str(), row.achieved, *row.target,
                          row.tolerance.value_or(0.0), row.ok ? "ok" : "MISS");
        } else {
            std::snprintf(buf, sizeof(buf), "  %-32s %12.4f\n",
                          row.name.c_str(), row.achieved);
        }
        out << buf;
    }
    out << (report.all_ok ? "all targets met\n" : "TARGETS MISSED\n");
    return out.str();
}

}  // namespace repsig
