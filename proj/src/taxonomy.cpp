#include "repsig/taxonomy.hpp"

namespace repsig {

std::string_view to_string(GcrcClass c) {
    switch (c) {
        case GcrcClass::C0: return "C0";
        case GcrcClass::C1: return "C1";
        case GcrcClass::C2: return "C2";
        case GcrcClass::C2Star: return "C2*";
        case GcrcClass::C3: return "C3";
        case GcrcClass::M1: return "M1";
        case GcrcClass::M2: return "M2";
        case GcrcClass::M3: return "M3";
        case GcrcClass::MS: return "MS";
        case GcrcClass::H1: return "H1";
        case GcrcClass::H2: return "H2";
        case GcrcClass::H3: return "H3";
        case GcrcClass::O1: return "O1";
        case GcrcClass::O2: return "O2";
        case GcrcClass::I: return "I";
        case GcrcClass::J: return "J";
    }
    return "?";
}

std::string_view to_string(VerificationFlag v) {
    switch (v) {
        case VerificationFlag::None: return "";
        case VerificationFlag::VM: return "VM";
        case VerificationFlag::VO: return "VO";
    }
    return "?";
}

std::string_view to_string(AggregatedClass a) {
    switch (a) {
        case AggregatedClass::C: return "C";
        case AggregatedClass::M: return "M";
        case AggregatedClass::HM: return "HM";
        case AggregatedClass::OH: return "OH";
        case AggregatedClass::I: return "I";
    }
    return "?";
}

std::string_view to_string(TargetClass t) {
    switch (t) {
        case TargetClass::C: return "C";
        case TargetClass::M: return "M";
        case TargetClass::I: return "I";
        case TargetClass::Others: return "Others";
    }
    return "?";
}

std::string_view to_string(NoiseType n) {
    switch (n) {
        case NoiseType::Accurate: return "accurate";
        case NoiseType::FalseNoise: return "false_noise";
        case NoiseType::QuasiNoise: return "quasi_noise";
        case NoiseType::SoftNoise: return "soft_noise";
        case NoiseType::HardNoise: return "hard_noise";
    }
    return "?";
}

std::optional<GcrcClass> parse_gcrc(std::string_view s) {
    for (GcrcClass c : kAllGcrcClasses) {
        if (s == to_string(c)) return c;
    }
    return std::nullopt;
}

std::optional<VerificationFlag> parse_verification(std::string_view s) {
    for (VerificationFlag v : kAllVerificationFlags) {
        if (s == to_string(v)) return v;
    }
    return std::nullopt;
}

std::optional<AggregatedClass> parse_aggregated(std::string_view s) {
    for (AggregatedClass a : kAllAggregatedClasses) {
        if (s == to_string(a)) return a;
    }
    return std::nullopt;
}

std::optional<TargetClass> parse_target(std::string_view s) {
    for (TargetClass t : kAllTargetClasses) {
        if (s == to_string(t)) return t;
    }
    return std::nullopt;
}

AggregatedClass aggregate_class(GcrcClass c) {
    switch (c) {
        case GcrcClass::C0:
        case GcrcClass::C1:
        case GcrcClass::C2:
        case GcrcClass::C2Star:
        case GcrcClass::C3:
            return AggregatedClass::C;
        case GcrcClass::M2:
        case GcrcClass::M3:
        case GcrcClass::MS:
            return AggregatedClass::M;
        case GcrcClass::H2:
        case GcrcClass::H3:
        case GcrcClass::M1:
            return AggregatedClass::HM;
        case GcrcClass::H1:
        case GcrcClass::O1:
        case GcrcClass::O2:
        case GcrcClass::J:
            return AggregatedClass::OH;
        case GcrcClass::I:
            return AggregatedClass::I;
    }
    return AggregatedClass::OH;
}

TargetClass target_class(AggregatedClass a) {
    switch (a) {
        case AggregatedClass::C: return TargetClass::C;
        case AggregatedClass::M: return TargetClass::M;
        case AggregatedClass::I: return TargetClass::I;
        case AggregatedClass::HM:
        case AggregatedClass::OH:
            return TargetClass::Others;
    }
    return TargetClass::Others;
}

NoiseType noise_type(GcrcClass c, VerificationFlag v) {
    if (v == VerificationFlag::VM) return NoiseType::Accurate;
    if (v == VerificationFlag::VO) return NoiseType::QuasiNoise;
    switch (c) {
        case GcrcClass::C0:
        case GcrcClass::C1:
        case GcrcClass::C2:
        case GcrcClass::C2Star:
        case GcrcClass::C3:
            return NoiseType::FalseNoise;
        case GcrcClass::M2:
        case GcrcClass::M3:
        case GcrcClass::MS:
            return NoiseType::QuasiNoise;
        case GcrcClass::M1:
        case GcrcClass::H2:
        case GcrcClass::H3:
        case GcrcClass::O2:
            return NoiseType::SoftNoise;
        case GcrcClass::H1:
        case GcrcClass::O1:
        case GcrcClass::I:
        case GcrcClass::J:
            return NoiseType::HardNoise;
    }
    return NoiseType::HardNoise;
}

}  // namespace repsig
