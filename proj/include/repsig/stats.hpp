#pragma once
// Two-sample test battery used to order aggregated classes by report
// volume: Welch's unequal-variance t-test, the D'Agostino-Pearson
// normality omnibus, the two-sample Kolmogorov-Smirnov test, and the
// pairwise partial-order derivation.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "repsig/taxonomy.hpp"

namespace repsig {

enum class Alternative { Greater, Less, TwoSided };

std::string_view to_string(Alternative a);

struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
    std::optional<double> df;  // Welch-Satterthwaite degrees of freedom
    Alternative alternative = Alternative::TwoSided;
};

// t = (mean(a) - mean(b)) / sqrt(s2a/na + s2b/nb), Welch-Satterthwaite df,
// p from the t tail per `alternative` (Greater means mean(a) > mean(b)).
TestResult welch_t(std::span<const double> a, std::span<const double> b,
                   Alternative alternative);

// K^2 = Z(skewness)^2 + Z(kurtosis)^2 against chi-square with 2 df.
// Requires n >= 20; the z-transforms are unstable below that.
TestResult dagostino_pearson(std::span<const double> a);

// D = sup |ECDF_a - ECDF_b|; p from the asymptotic Kolmogorov distribution
// at lambda = (sqrt(ne) + 0.12 + 0.11/sqrt(ne)) * D with ne = na*nb/(na+nb).
TestResult ks_two_sample(std::span<const double> a, std::span<const double> b);

enum class EdgeStrength { Strong, Weak };

struct OrderEdge {
    AggregatedClass greater;
    AggregatedClass lesser;
    double p_value = 1.0;
    EdgeStrength strength = EdgeStrength::Strong;
};

struct PartialOrder {
    std::vector<AggregatedClass> nodes;
    std::vector<OrderEdge> edges;

    bool has_edge(AggregatedClass greater, AggregatedClass lesser) const;
};

// One-sided Welch per ordered class pair; p <= alpha_strong gives a strong
// edge, otherwise p <= alpha_weak a weak one. All significant edges are
// retained (no transitive reduction). A directed cycle in the result is an
// error.
PartialOrder derive_partial_order(
    const std::map<AggregatedClass, std::vector<double>>& samples,
    double alpha_strong = 0.05, double alpha_weak = 0.10);

std::string to_dot(const PartialOrder& order);
std::string to_csv(const PartialOrder& order);

}  // namespace repsig
