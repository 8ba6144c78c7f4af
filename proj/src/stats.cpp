#include "repsig/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "repsig/errors.hpp"
#include "repsig/io.hpp"
#include "repsig/prob.hpp"

namespace repsig {

std::string_view to_string(Alternative a) {
    switch (a) {
        case Alternative::Greater: return "greater";
        case Alternative::Less: return "less";
        case Alternative::TwoSided: return "two-sided";
    }
    return "?";
}

namespace {

struct Moments {
    double mean = 0.0;
    double var = 0.0;  // sample variance, ddof = 1
    std::size_t n = 0;
};

Moments mean_and_variance(std::span<const double> x) {
    Moments m;
    m.n = x.size();
    for (double v : x) m.mean += v;
    m.mean /= static_cast<double>(m.n);
    if (m.n > 1) {
        double acc = 0.0;
        for (double v : x) acc += (v - m.mean) * (v - m.mean);
        m.var = acc / static_cast<double>(m.n - 1);
    }
    return m;
}

double p_from_t(double t, double df, Alternative alternative) {
    switch (alternative) {
        case Alternative::Greater:
            return prob::student_t_sf(t, df);
        case Alternative::Less:
            return prob::student_t_sf(-t, df);
        case Alternative::TwoSided:
            return std::min(1.0, 2.0 * prob::student_t_sf(std::fabs(t), df));
    }
    return 1.0;
}

}  // namespace

TestResult welch_t(std::span<const double> a, std::span<const double> b,
                   Alternative alternative) {
    if (a.size() < 2 || b.size() < 2) {
        throw InsufficientSample("welch_t: both samples need >= 2 values");
    }
    const Moments ma = mean_and_variance(a);
    const Moments mb = mean_and_variance(b);
    const double na = static_cast<double>(ma.n);
    const double nb = static_cast<double>(mb.n);
    const double se2 = ma.var / na + mb.var / nb;
    TestResult result;
    result.alternative = alternative;
    if (se2 <= 0.0) {
        if (ma.mean == mb.mean) {
            throw DegenerateVariance(
                "welch_t: zero variance in both samples with equal means");
        }
        // Separated constants: the direction is certain.
        result.statistic = ma.mean > mb.mean
                               ? std::numeric_limits<double>::infinity()
                               : -std::numeric_limits<double>::infinity();
        result.df = na + nb - 2.0;
        result.p_value = p_from_t(result.statistic, *result.df, alternative);
        return result;
    }
    result.statistic = (ma.mean - mb.mean) / std::sqrt(se2);
    const double va_n = ma.var / na;
    const double vb_n = mb.var / nb;
    result.df = se2 * se2 /
                (va_n * va_n / (na - 1.0) + vb_n * vb_n / (nb - 1.0));
    result.p_value = p_from_t(result.statistic, *result.df, alternative);
    return result;
}

TestResult dagostino_pearson(std::span<const double> a) {
    constexpr std::size_t kMinSample = 20;
    if (a.size() < kMinSample) {
        throw SampleTooSmall("dagostino_pearson: n = " +
                             std::to_string(a.size()) + ", minimum is 20");
    }
    const double n = static_cast<double>(a.size());
    double mean = 0.0;
    for (double v : a) mean += v;
    mean /= n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : a) {
        const double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    if (m2 <= 0.0) {
        throw DegenerateSample("dagostino_pearson: zero variance");
    }
    const double g1 = m3 / std::pow(m2, 1.5);
    const double b2 = m4 / (m2 * m2);

    // Skewness transform (D'Agostino 1970).
    const double y = g1 * std::sqrt((n + 1.0) * (n + 3.0) / (6.0 * (n - 2.0)));
    const double beta2 = 3.0 * (n * n + 27.0 * n - 70.0) * (n + 1.0) *
                         (n + 3.0) /
                         ((n - 2.0) * (n + 5.0) * (n + 7.0) * (n + 9.0));
    const double w2 = -1.0 + std::sqrt(2.0 * (beta2 - 1.0));
    const double delta = 1.0 / std::sqrt(0.5 * std::log(w2));
    const double alpha = std::sqrt(2.0 / (w2 - 1.0));
    const double ya = y / alpha;
    const double z1 = delta * std::log(ya + std::sqrt(ya * ya + 1.0));

    // Kurtosis transform (Anscombe-Glynn 1983).
    const double eb2 = 3.0 * (n - 1.0) / (n + 1.0);
    const double vb2 = 24.0 * n * (n - 2.0) * (n - 3.0) /
                       ((n + 1.0) * (n + 1.0) * (n + 3.0) * (n + 5.0));
    const double x = (b2 - eb2) / std::sqrt(vb2);
    const double sqrt_b1 =
        6.0 * (n * n - 5.0 * n + 2.0) / ((n + 7.0) * (n + 9.0)) *
        std::sqrt(6.0 * (n + 3.0) * (n + 5.0) / (n * (n - 2.0) * (n - 3.0)));
    const double big_a =
        6.0 + 8.0 / sqrt_b1 *
                  (2.0 / sqrt_b1 + std::sqrt(1.0 + 4.0 / (sqrt_b1 * sqrt_b1)));
    const double z2 =
        ((1.0 - 2.0 / (9.0 * big_a)) -
         std::cbrt((1.0 - 2.0 / big_a) /
                   (1.0 + x * std::sqrt(2.0 / (big_a - 4.0))))) /
        std::sqrt(2.0 / (9.0 * big_a));

    TestResult result;
    result.alternative = Alternative::TwoSided;
    result.statistic = z1 * z1 + z2 * z2;
    result.p_value = prob::chi2_sf_2df(result.statistic);
    return result;
}

TestResult ks_two_sample(std::span<const double> a,
                         std::span<const double> b) {
    if (a.empty() || b.empty()) {
        throw EmptySample("ks_two_sample: both samples must be non-empty");
    }
    std::vector<double> sa(a.begin(), a.end());
    std::vector<double> sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    const double na = static_cast<double>(sa.size());
    const double nb = static_cast<double>(sb.size());
    std::size_t ia = 0, ib = 0;
    double d = 0.0;
    while (ia < sa.size() && ib < sb.size()) {
        const double v = std::min(sa[ia], sb[ib]);
        while (ia < sa.size() && sa[ia] <= v) ++ia;
        while (ib < sb.size() && sb[ib] <= v) ++ib;
        const double diff = std::fabs(static_cast<double>(ia) / na -
                                      static_cast<double>(ib) / nb);
        d = std::max(d, diff);
    }
    const double ne = na * nb / (na + nb);
    const double sqrt_ne = std::sqrt(ne);
    const double lambda = (sqrt_ne + 0.12 + 0.11 / sqrt_ne) * d;
    TestResult result;
    result.alternative = Alternative::TwoSided;
    result.statistic = d;
    result.p_value = prob::kolmogorov_q(lambda);
    return result;
}

bool PartialOrder::has_edge(AggregatedClass greater,
                            AggregatedClass lesser) const {
    for (const auto& e : edges) {
        if (e.greater == greater && e.lesser == lesser) return true;
    }
    return false;
}

PartialOrder derive_partial_order(
    const std::map<AggregatedClass, std::vector<double>>& samples,
    double alpha_strong, double alpha_weak) {
    PartialOrder order;
    for (const auto& [cls, values] : samples) {
        if (values.size() < 2) {
            throw InsufficientSample(
                "derive_partial_order: class " +
                std::string(to_string(cls)) + " has fewer than 2 values");
        }
        order.nodes.push_back(cls);
    }
    for (const auto& [x, vx] : samples) {
        for (const auto& [y, vy] : samples) {
            if (x == y) continue;
            const TestResult t = welch_t(vx, vy, Alternative::Greater);
            if (t.p_value <= alpha_strong) {
                order.edges.push_back({x, y, t.p_value, EdgeStrength::Strong});
            } else if (t.p_value <= alpha_weak) {
                order.edges.push_back({x, y, t.p_value, EdgeStrength::Weak});
            }
        }
    }
    // Cycle check over the directed edge set.
    std::map<AggregatedClass, std::vector<AggregatedClass>> adj;
    for (const auto& e : order.edges) adj[e.greater].push_back(e.lesser);
    std::map<AggregatedClass, int> state;  // 0 new, 1 active, 2 done
    auto dfs = [&](auto&& self, AggregatedClass node) -> bool {
        state[node] = 1;
        for (AggregatedClass next : adj[node]) {
            if (state[next] == 1) return false;
            if (state[next] == 0 && !self(self, next)) return false;
        }
        state[node] = 2;
        return true;
    };
    for (AggregatedClass node : order.nodes) {
        if (state[node] == 0 && !dfs(dfs, node)) {
            std::ostringstream msg;
            msg << "derive_partial_order: significant edges form a cycle;";
            for (const auto& e : order.edges) {
                msg << ' ' << to_string(e.greater) << '>' << to_string(e.lesser)
                    << "(p=" << io::format_double(e.p_value) << ')';
            }
            throw CyclicOrder(msg.str());
        }
    }
    return order;
}

std::string to_dot(const PartialOrder& order) {
    std::ostringstream out;
    out << "digraph class_order {\n";
    out << "  rankdir=TB;\n";
    for (AggregatedClass node : order.nodes) {
        out << "  \"" << to_string(node) << "\";\n";
    }
    for (const auto& e : order.edges) {
        out << "  \"" << to_string(e.greater) << "\" -> \""
            << to_string(e.lesser) << "\" [label=\"p="
            << io::format_double(e.p_value) << "\"";
        if (e.strength == EdgeStrength::Weak) {
            out << ", style=dashed, color=grey";
        }
        out << "];\n";
    }
    out << "}\n";
    return out.str();
}

std::string to_csv(const PartialOrder& order) {
    std::ostringstream out;
    out << "greater,lesser,p_value,strength\n";
    for (const auto& e : order.edges) {
        out << to_string(e.greater) << ',' << to_string(e.lesser) << ','
            << io::format_double(e.p_value) << ','
            << (e.strength == EdgeStrength::Strong ? "strong" : "weak")
            << '\n';
    }
    return out.str();
}

}  // namespace repsig
