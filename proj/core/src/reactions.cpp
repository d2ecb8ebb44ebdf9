#include "coreshell/reactions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace coreshell {

std::string_view to_string(ReactionKind kind) noexcept {
    switch (kind) {
        case ReactionKind::zero: return "zero";
        case ReactionKind::constant_source: return "constant_source";
        case ReactionKind::michaelis_menten: return "michaelis_menten";
        case ReactionKind::substrate_inhibition: return "substrate_inhibition";
        case ReactionKind::tabulated: return "tabulated";
    }
    return "unknown";
}

ReactionKind parse_reaction_kind(std::string_view name) {
    for (auto k : {ReactionKind::zero, ReactionKind::constant_source, ReactionKind::michaelis_menten,
                   ReactionKind::substrate_inhibition, ReactionKind::tabulated})
        if (to_string(k) == name) return k;
    throw std::invalid_argument("unknown reaction kind: " + std::string(name));
}

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

}  // namespace

ReactionTerm ReactionTerm::zero() { return ReactionTerm(); }

ReactionTerm ReactionTerm::constant_source(double s) {
    require(std::isfinite(s), "constant source must be finite");
    ReactionTerm t;
    t.kind_ = ReactionKind::constant_source;
    t.source_ = s;
    return t;
}

ReactionTerm ReactionTerm::michaelis_menten(double v_max, double k_m, double c0) {
    require(v_max >= 0.0 && std::isfinite(v_max), "v_max must be non-negative");
    require(k_m > 0.0 && std::isfinite(k_m), "k_m must be positive");
    require(c0 > 0.0 && std::isfinite(c0), "c0 must be positive");
    ReactionTerm t;
    t.kind_ = ReactionKind::michaelis_menten;
    t.v_max_ = v_max;
    t.k_m_ = k_m;
    t.c0_ = c0;
    return t;
}

ReactionTerm ReactionTerm::substrate_inhibition(double v_max, double k_m, double c0) {
    ReactionTerm t = michaelis_menten(v_max, k_m, c0);
    t.kind_ = ReactionKind::substrate_inhibition;
    return t;
}

ReactionTerm ReactionTerm::tabulated(std::vector<double> v, std::vector<double> g, double c0,
                                     std::optional<double> lipschitz) {
    require(!v.empty() && v.size() == g.size(), "tabulated reaction needs matching non-empty tables");
    require(c0 > 0.0, "c0 must be positive");
    for (std::size_t i = 0; i < v.size(); ++i) {
        require(v[i] > 0.0 && std::isfinite(v[i]), "tabulated abscissae must be positive");
        require(g[i] >= 0.0 && std::isfinite(g[i]), "tabulated consumption must be non-negative");
        if (i > 0) require(v[i] > v[i - 1], "tabulated abscissae must be strictly increasing");
    }
    if (lipschitz) require(*lipschitz >= 0.0, "declared Lipschitz constant must be non-negative");
    ReactionTerm t;
    t.kind_ = ReactionKind::tabulated;
    t.c0_ = c0;
    t.table_v_.reserve(v.size() + 1);
    t.table_g_.reserve(g.size() + 1);
    t.table_v_.push_back(0.0);
    t.table_g_.push_back(0.0);
    t.table_v_.insert(t.table_v_.end(), v.begin(), v.end());
    t.table_g_.insert(t.table_g_.end(), g.begin(), g.end());
    t.v_max_ = *std::max_element(t.table_g_.begin(), t.table_g_.end());
    if (lipschitz) {
        double slope = 0.0;
        for (std::size_t i = 1; i < t.table_v_.size(); ++i)
            slope = std::max(slope, std::abs(t.table_g_[i] - t.table_g_[i - 1]) / (t.table_v_[i] - t.table_v_[i - 1]));
        require(*lipschitz >= slope, "declared Lipschitz constant is below the steepest table segment");
    }
    t.lipschitz_ = lipschitz;
    return t;
}

double ReactionTerm::g(double v) const noexcept {
    if (!(v > 0.0)) return 0.0;
    switch (kind_) {
        case ReactionKind::zero:
        case ReactionKind::constant_source:
            return 0.0;
        case ReactionKind::michaelis_menten:
            return v_max_ * v / (k_m_ + v);
        case ReactionKind::substrate_inhibition:
            return v_max_ * v * k_m_ / (k_m_ * k_m_ + v * v);
        case ReactionKind::tabulated: {
            if (v >= table_v_.back()) return table_g_.back();
            const auto it = std::upper_bound(table_v_.begin(), table_v_.end(), v);
            const auto i = static_cast<std::size_t>(it - table_v_.begin());
            const double t = (v - table_v_[i - 1]) / (table_v_[i] - table_v_[i - 1]);
            return table_g_[i - 1] + t * (table_g_[i] - table_g_[i - 1]);
        }
    }
    return 0.0;
}

double ReactionTerm::g_prime(double v) const noexcept {
    if (!(v > 0.0)) return 0.0;
    switch (kind_) {
        case ReactionKind::zero:
        case ReactionKind::constant_source:
            return 0.0;
        case ReactionKind::michaelis_menten: {
            const double d = k_m_ + v;
            return v_max_ * k_m_ / (d * d);
        }
        case ReactionKind::substrate_inhibition: {
            const double d = k_m_ * k_m_ + v * v;
            return v_max_ * k_m_ * (k_m_ * k_m_ - v * v) / (d * d);
        }
        case ReactionKind::tabulated: {
            if (v >= table_v_.back()) return 0.0;
            const auto it = std::upper_bound(table_v_.begin(), table_v_.end(), v);
            const auto i = static_cast<std::size_t>(it - table_v_.begin());
            return (table_g_[i] - table_g_[i - 1]) / (table_v_[i] - table_v_[i - 1]);
        }
    }
    return 0.0;
}

double evaluate_g(const ReactionTerm& term, double v) noexcept { return term.g(v); }

Field apply_f(const ReactionTerm& term, const Field& u) {
    return u.unaryExpr([&term](double x) { return term.f(x); });
}

Field apply_f_prime(const ReactionTerm& term, const Field& u) {
    return u.unaryExpr([&term](double x) { return term.f_prime(x); });
}

double certify_admissibility(const ReactionTerm& term, const CoreShellGeometry& geometry) {
    constexpr double tiny = std::numeric_limits<double>::min();
    if (term.kind() == ReactionKind::constant_source) {
        if (term.source() == 0.0) return tiny;
        throw InadmissibleReaction(
            "constant_source violates (u, f(u)) <= K for every finite K; allowed in linear test modes only");
    }
    const double measure = geometry.measure();
    const double k = std::max(term.c0() * term.v_max() * measure, term.v_max() * std::sqrt(measure));
    return k > 0.0 ? k : tiny;
}

double certify_lipschitz(const ReactionTerm& term) {
    switch (term.kind()) {
        case ReactionKind::zero:
        case ReactionKind::constant_source:
            return 0.0;
        case ReactionKind::michaelis_menten:
        case ReactionKind::substrate_inhibition:
            return term.v_max() / term.k_m();
        case ReactionKind::tabulated:
            if (!term.declared_lipschitz())
                throw std::invalid_argument("tabulated reaction has no declared Lipschitz constant");
            return *term.declared_lipschitz();
    }
    return 0.0;
}

}  // namespace coreshell
