// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 mentionet contributors

#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "mentionet/graph.hpp"

namespace mentionet {

enum class DegreeKind { in, out, total };

inline const char* to_string(DegreeKind k) {
    switch (k) {
        case DegreeKind::in: return "in";
        case DegreeKind::out: return "out";
        default: return "total";
    }
}

/// Degree (or strength, when weighted) histogram over all graph nodes.
/// Isolated nodes count at degree 0.
struct DegreeDistribution {
    DegreeKind kind = DegreeKind::total;
    bool strength = false;
    std::map<std::uint64_t, std::uint64_t> histogram; // degree -> node count
    std::size_t n_nodes = 0;
};

inline DegreeDistribution degree_sequence(const MentionGraph& graph, DegreeKind kind,
                                          bool weighted) {
    DegreeDistribution dist;
    dist.kind = kind;
    dist.strength = weighted;
    dist.n_nodes = graph.nodes.size();

    std::vector<std::uint64_t> value(graph.nodes.size(), 0);
    for (const auto& e : graph.edges) {
        const std::uint64_t w = weighted ? e.weight : 1;
        if (kind == DegreeKind::out || kind == DegreeKind::total)
            value[graph.node_index(e.src)] += w;
        if (kind == DegreeKind::in || kind == DegreeKind::total)
            value[graph.node_index(e.dst)] += w;
    }
    for (auto v : value) ++dist.histogram[v];
    return dist;
}

struct CcdfPoint {
    std::uint64_t degree;
    double p; // P(X >= degree)
};

/// Complementary CDF at each observed degree, ascending. The first point
/// is always 1.0 and the sequence is non-increasing.
inline std::vector<CcdfPoint> ccdf(const DegreeDistribution& dist) {
    if (dist.n_nodes == 0) throw std::invalid_argument("ccdf: empty distribution");
    std::vector<CcdfPoint> points;
    points.reserve(dist.histogram.size());
    std::uint64_t at_least = dist.n_nodes;
    for (const auto& [degree, count] : dist.histogram) {
        points.push_back({degree, static_cast<double>(at_least) / static_cast<double>(dist.n_nodes)});
        at_least -= count;
    }
    return points;
}

/// Heavy-tail fit: CCDF ~ x^(-alpha) for x >= xmin.
struct TailEstimate {
    double exponent = 0.0; // alpha, reported positive
    std::uint64_t xmin = 1;
    std::size_t n_tail = 0; // points (least squares) or samples (hill) used
    double r2 = 0.0;
    bool reliable = false;
};

enum class TailMethod { least_squares, hill };

/// Estimate the tail exponent. Default method regresses log CCDF against
/// log degree over degrees >= xmin (transparent, matches what a log-log
/// plot shows); hill is the discrete-corrected MLE. xmin defaults to the
/// histogram's 10th-percentile degree, never below 1. Fewer than 5 tail
/// points leave the estimate flagged unreliable but still reported.
inline TailEstimate tail_exponent(const DegreeDistribution& dist,
                                  std::optional<std::uint64_t> xmin = std::nullopt,
                                  TailMethod method = TailMethod::least_squares) {
    if (dist.n_nodes == 0) throw std::invalid_argument("tail_exponent: empty distribution");

    TailEstimate est;
    if (xmin) {
        est.xmin = std::max<std::uint64_t>(*xmin, 1);
    } else {
        const std::uint64_t want = (dist.n_nodes + 9) / 10; // ceil(10%)
        std::uint64_t cum = 0;
        est.xmin = 1;
        for (const auto& [degree, count] : dist.histogram) {
            cum += count;
            if (cum >= want) {
                est.xmin = std::max<std::uint64_t>(degree, 1);
                break;
            }
        }
    }

    if (method == TailMethod::least_squares) {
        std::vector<double> xs, ys;
        for (const auto& point : ccdf(dist)) {
            if (point.degree < est.xmin || point.degree == 0) continue;
            xs.push_back(std::log(static_cast<double>(point.degree)));
            ys.push_back(std::log(point.p));
        }
        est.n_tail = xs.size();
        est.reliable = est.n_tail >= 5;
        if (est.n_tail >= 2) {
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            const double n = static_cast<double>(xs.size());
            for (std::size_t i = 0; i < xs.size(); ++i) {
                sx += xs[i];
                sy += ys[i];
                sxx += xs[i] * xs[i];
                sxy += xs[i] * ys[i];
            }
            const double denom = n * sxx - sx * sx;
            if (denom > 0) {
                const double slope = (n * sxy - sx * sy) / denom;
                const double intercept = (sy - slope * sx) / n;
                est.exponent = -slope;
                double ss_res = 0, ss_tot = 0;
                const double mean_y = sy / n;
                for (std::size_t i = 0; i < xs.size(); ++i) {
                    const double fit = slope * xs[i] + intercept;
                    ss_res += (ys[i] - fit) * (ys[i] - fit);
                    ss_tot += (ys[i] - mean_y) * (ys[i] - mean_y);
                }
                est.r2 = ss_tot > 0 ? std::max(0.0, std::min(1.0, 1.0 - ss_res / ss_tot)) : 0.0;
            }
        }
    } else {
        // Hill / discrete power-law MLE with the -1/2 continuity correction.
        std::uint64_t n_samples = 0;
        double log_sum = 0.0;
        const double shifted_xmin = static_cast<double>(est.xmin) - 0.5;
        for (const auto& [degree, count] : dist.histogram) {
            if (degree < est.xmin || degree == 0) continue;
            n_samples += count;
            log_sum += static_cast<double>(count) * std::log(static_cast<double>(degree) / shifted_xmin);
        }
        est.n_tail = n_samples;
        est.reliable = n_samples >= 5;
        if (n_samples > 0 && log_sum > 0) {
            // MLE gives the pdf exponent; the CCDF exponent is one less.
            const double pdf_alpha = 1.0 + static_cast<double>(n_samples) / log_sum;
            est.exponent = pdf_alpha - 1.0;
            est.r2 = 0.0; // not meaningful for the MLE route
        }
    }
    return est;
}

} // namespace mentionet
