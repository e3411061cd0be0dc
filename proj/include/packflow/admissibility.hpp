#pragma once

// Subset inequalities deciding which curvatures a weighted triangulation
// admits: Thurston's condition, membership in the admissible curvature space,
// the metric-weighted condition and the sphere condition.

#include <Eigen/Dense>

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "packflow/error.hpp"
#include "packflow/mesh.hpp"
#include "packflow/packing2d.hpp"

namespace packflow {

enum class Condition { thurston, y, metric, sphere };

inline const char* to_string(Condition c) {
    switch (c) {
        case Condition::thurston: return "thurston";
        case Condition::y: return "y";
        case Condition::metric: return "metric";
        case Condition::sphere: return "sphere";
    }
    return "?";
}

inline Condition parse_condition(const std::string& s) {
    for (Condition c : {Condition::thurston, Condition::y, Condition::metric, Condition::sphere})
        if (s == to_string(c)) return c;
    throw InvalidInput("unknown condition '" + s + "'");
}

enum class EnumerationMode { exhaustive, supplied };

inline constexpr double kBoundaryMargin = 1e-9;

struct SubsetRecord {
    std::vector<int> subset;
    double lhs = 0.0;
    double rhs = 0.0;
    /// lhs - rhs; the strict inequality needs margin >= kBoundaryMargin.
    double margin = 0.0;
    bool satisfied = false;
    /// |margin| < kBoundaryMargin: a tie, reported as not satisfied.
    bool boundary = false;
};

struct AdmissibilityReport {
    Condition condition = Condition::thurston;
    EnumerationMode mode = EnumerationMode::exhaustive;
    bool verdict = false;
    /// Empty when the verdict is true.
    std::string reason;
    std::size_t subsets_checked = 0;
    std::size_t violations = 0;
    /// Subset with the smallest margin (first in enumeration order on ties).
    std::optional<SubsetRecord> worst;
    /// First subset in enumeration order that is not satisfied.
    std::optional<SubsetRecord> witness;
    /// Every record, in enumeration order, when requested.
    std::vector<SubsetRecord> records;
};

struct AdmissibilityOptions {
    /// Subsets to check instead of exhaustive enumeration.
    std::optional<std::vector<VertexSubset>> subsets;
    bool keep_records = false;
    int enumeration_cap = kDefaultEnumerationCap;
};

/// -sum_{(e,v) in Lk(I)} (pi - Phi(e)) + 2 pi chi(F_I).
inline double subset_rhs(const Surface2Complex& c, const VertexSubset& subset) {
    double sum = 0.0;
    for (const LinkPair& p : link_pairs(c, subset)) sum += std::numbers::pi - c.weight(p.edge);
    return -sum + 2.0 * std::numbers::pi * induced_subcomplex_euler(c, subset);
}

namespace detail {

/// Bit-mask form of subset_rhs, used by the exhaustive loops.
class MaskEvaluator {
public:
    explicit MaskEvaluator(const Surface2Complex& c) : c_(c) {
        for (const auto& e : c.edges()) edge_masks_.push_back(bit(e[0]) | bit(e[1]));
        for (int f = 0; f < c.face_count(); ++f) {
            const auto& t = c.face(f);
            face_masks_.push_back(bit(t[0]) | bit(t[1]) | bit(t[2]));
        }
    }

    double rhs(std::uint64_t mask) const {
        const int n_in = std::popcount(mask);
        int edges = 0;
        for (std::uint64_t em : edge_masks_) edges += (em & mask) == em;
        int faces = 0;
        double link = 0.0;
        for (int f = 0; f < c_.face_count(); ++f) {
            const std::uint64_t fm = face_masks_[f];
            const int k = std::popcount(fm & mask);
            if (k == 3) {
                ++faces;
            } else if (k == 1) {
                const auto& t = c_.face(f);
                const int slot = (mask >> t[0] & 1u) ? 0 : (mask >> t[1] & 1u) ? 1 : 2;
                link += std::numbers::pi - c_.weight(c_.face_edges(f)[slot]);
            }
        }
        return -link + 2.0 * std::numbers::pi * (n_in - edges + faces);
    }

private:
    static std::uint64_t bit(int v) { return std::uint64_t{1} << v; }

    const Surface2Complex& c_;
    std::vector<std::uint64_t> edge_masks_;
    std::vector<std::uint64_t> face_masks_;
};

inline void mask_members(int n, std::uint64_t mask, std::vector<int>& out) {
    out.clear();
    for (int v = 0; v < n; ++v)
        if (mask >> v & 1u) out.push_back(v);
}

/// Runs lhs(members) > rhs(I) over the requested subsets.
template <typename Lhs>
AdmissibilityReport check_subsets(const Surface2Complex& c, Condition cond, Lhs&& lhs,
                                  const AdmissibilityOptions& opt) {
    AdmissibilityReport rep;
    rep.condition = cond;
    auto visit = [&](const std::vector<int>& members, double rhs) {
        SubsetRecord rec;
        rec.lhs = lhs(std::span<const int>(members));
        rec.rhs = rhs;
        rec.margin = rec.lhs - rec.rhs;
        rec.boundary = std::abs(rec.margin) < kBoundaryMargin;
        rec.satisfied = rec.margin >= kBoundaryMargin;
        ++rep.subsets_checked;
        if (!rec.satisfied) ++rep.violations;
        const bool worse = !rep.worst || rec.margin < rep.worst->margin;
        const bool first_failure = !rec.satisfied && !rep.witness;
        if (worse || first_failure || opt.keep_records) rec.subset = members;
        if (worse) rep.worst = rec;
        if (first_failure) rep.witness = rec;
        if (opt.keep_records) rep.records.push_back(std::move(rec));
    };
    if (opt.subsets) {
        rep.mode = EnumerationMode::supplied;
        for (const VertexSubset& s : *opt.subsets) {
            if (s.vertex_count() != c.vertex_count())
                throw InvalidInput("subset refers to a different complex");
            visit(s.members(), subset_rhs(c, s));
        }
    } else {
        rep.mode = EnumerationMode::exhaustive;
        const int n = c.vertex_count();
        std::vector<int> members;
        members.reserve(n);
        if (n > opt.enumeration_cap || n > 62)
            throw EnumerationTooLarge("exhaustive subset enumeration needs N <= " +
                                      std::to_string(std::min(opt.enumeration_cap, 62)) +
                                      ", got " + std::to_string(n));
        const MaskEvaluator eval(c);
        for_each_proper_subset(
            n,
            [&](std::uint64_t mask) {
                mask_members(n, mask, members);
                visit(members, eval.rhs(mask));
            },
            opt.enumeration_cap);
    }
    rep.verdict = rep.violations == 0;
    if (!rep.verdict && rep.witness) {
        std::string list;
        for (int v : rep.witness->subset) list += (list.empty() ? "" : ",") + std::to_string(v);
        rep.reason = std::string(rep.witness->boundary ? "boundary case" : "violated") + " at I = {" +
                     list + "}, margin " + std::to_string(rep.witness->margin);
    }
    return rep;
}

inline double members_sum(const Eigen::VectorXd& x, std::span<const int> members) {
    double s = 0.0;
    for (int v : members) s += x[v];
    return s;
}

}  // namespace detail

/// 2 pi chi |I| / N > RHS(I) for every I.
inline AdmissibilityReport thurston_condition(const Surface2Complex& c,
                                              const AdmissibilityOptions& opt = {}) {
    const double scale = 2.0 * std::numbers::pi * c.euler_characteristic() / c.vertex_count();
    return detail::check_subsets(
        c, Condition::thurston, [&](std::span<const int> m) { return scale * static_cast<double>(m.size()); }, opt);
}

/// x lies on the Gauss-Bonnet plane and sum_{i in I} x_i > RHS(I) for every I.
inline AdmissibilityReport y_membership(const Surface2Complex& c, const Eigen::VectorXd& x,
                                        const AdmissibilityOptions& opt = {}) {
    if (x.size() != c.vertex_count()) throw InvalidInput("curvature vector has the wrong length");
    const double gb = x.sum() - 2.0 * std::numbers::pi * c.euler_characteristic();
    if (std::abs(gb) > 1e-9) {
        AdmissibilityReport rep;
        rep.condition = Condition::y;
        rep.mode = opt.subsets ? EnumerationMode::supplied : EnumerationMode::exhaustive;
        rep.verdict = false;
        rep.reason = "Gauss-Bonnet plane: sum x_i - 2 pi chi = " + std::to_string(gb);
        return rep;
    }
    return detail::check_subsets(
        c, Condition::y, [&](std::span<const int> m) { return detail::members_sum(x, m); }, opt);
}

/// 2 pi chi sum_{i in I} r_i^alpha / ||r||_alpha^alpha > RHS(I) for every I.
inline AdmissibilityReport metric_condition(const Surface2Complex& c, const PackingMetric& r,
                                            double alpha, const AdmissibilityOptions& opt = {}) {
    require_matching(c, r);
    const Eigen::VectorXd w = radii_pow(r, alpha) / total_measure(r, alpha);
    const double scale = 2.0 * std::numbers::pi * c.euler_characteristic();
    return detail::check_subsets(
        c, Condition::metric, [&](std::span<const int> m) { return scale * detail::members_sum(w, m); },
        opt);
}

/// RHS(I) < 0 for every I.
inline AdmissibilityReport sphere_condition(const Surface2Complex& c,
                                            const AdmissibilityOptions& opt = {}) {
    return detail::check_subsets(c, Condition::sphere, [](std::span<const int>) { return 0.0; }, opt);
}

}  // namespace packflow
