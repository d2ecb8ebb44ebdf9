#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "coreshell/geometry.hpp"
#include "coreshell/operators.hpp"

namespace coreshell {

enum class ReactionKind { zero, constant_source, michaelis_menten, substrate_inhibition, tabulated };

std::string_view to_string(ReactionKind kind) noexcept;
ReactionKind parse_reaction_kind(std::string_view name);

/// Thrown when a reaction cannot satisfy (u, f(u)) <= K for any finite K.
class InadmissibleReaction : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Oxygen consumption g(v) >= 0, vanishing for v <= 0, entering the
/// transformed equation as f(u) = g(c0 - u).
///
/// constant_source is the exception: f == s regardless of state. It breaks
/// the admissibility bound and is kept for linear test problems only.
class ReactionTerm {
public:
    static ReactionTerm zero();
    static ReactionTerm constant_source(double s);
    static ReactionTerm michaelis_menten(double v_max, double k_m, double c0);
    /// Haldane kinetics v_max * v * k_m / (k_m^2 + v^2); peaks at v = k_m.
    static ReactionTerm substrate_inhibition(double v_max, double k_m, double c0);
    /// Piecewise-linear consumption through (0, 0) and the given points,
    /// constant beyond the last abscissa.
    static ReactionTerm tabulated(std::vector<double> v, std::vector<double> g, double c0,
                                  std::optional<double> lipschitz = std::nullopt);

    ReactionKind kind() const noexcept { return kind_; }
    double v_max() const noexcept { return v_max_; }
    double k_m() const noexcept { return k_m_; }
    double c0() const noexcept { return c0_; }
    double source() const noexcept { return source_; }
    bool test_only() const noexcept { return kind_ == ReactionKind::constant_source; }
    const std::optional<double>& declared_lipschitz() const noexcept { return lipschitz_; }

    double g(double v) const noexcept;
    /// One-sided derivative, taken as 0 at the kink v = 0.
    double g_prime(double v) const noexcept;

    double f(double u) const noexcept {
        return kind_ == ReactionKind::constant_source ? source_ : g(c0_ - u);
    }
    double f_prime(double u) const noexcept {
        return kind_ == ReactionKind::constant_source ? 0.0 : -g_prime(c0_ - u);
    }

private:
    ReactionTerm() = default;

    ReactionKind kind_ = ReactionKind::zero;
    double v_max_ = 0.0;
    double k_m_ = 1.0;
    double c0_ = 1.0;
    double source_ = 0.0;
    std::vector<double> table_v_;
    std::vector<double> table_g_;
    std::optional<double> lipschitz_;
};

double evaluate_g(const ReactionTerm& term, double v) noexcept;

/// Nodewise f(u)_i = g(c0 - u_i), Dirichlet entries included.
Field apply_f(const ReactionTerm& term, const Field& u);
Field apply_f_prime(const ReactionTerm& term, const Field& u);

/// K = max(c0 * v_max * |Omega|, v_max * sqrt|Omega|).
double certify_admissibility(const ReactionTerm& term, const CoreShellGeometry& geometry);

/// Pointwise Lipschitz constant of g, which is also the Lipschitz constant of
/// the superposition operator on H.
double certify_lipschitz(const ReactionTerm& term);

}  // namespace coreshell
