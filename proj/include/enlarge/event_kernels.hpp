#pragma once

// Per-event formulas for jump types that a finite tick grid cannot host as processes: continuous
// parts and totally inaccessible jumps. Everything here is a pure function of the supplied data.

#include "enlarge/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace enlarge {

/// One predictable jump time split into branches h: F- and G-conditional branch laws, the branch
/// values of dD and dN, the multiplier, and the basis weight 2^{-n}.
struct AccessibleEventData {
    Vec p;
    Vec pbar;
    Vec d_vals;
    std::vector<Vec> n_vals;  // n_vals[h] has one entry per component of N
    Vec phi;
    Rational weight{1, 2};
};

/// p and pbar are laws, (1 + phi^T n_h) p_h = pbar_h, d_h < 1 on p_h > 0, and dD, dN average to zero
/// under p. Throws Error(DataInvariantViolated) or Error(DimensionMismatch).
void validate(const AccessibleEventData& data);

/// One totally inaccessible jump with branches B_h on which dW'''_h = alpha_h.
struct InaccessibleEventData {
    Vec q;
    Vec qbar;
    std::vector<Vec> l_vals;  // dN on B_h
    Vec r;                    // E[dN | F_{S-}]
    Vec alpha;
    Vec j3;
    std::vector<Vec> zeta3;   // zeta3[h] has one entry per component of N
    Vec phi;
};

/// q and qbar are laws, l_h = zeta3_h alpha_h, (1 + phi^T l_h) q_h = (1 + phi^T r) qbar_h and
/// 1 + phi^T r > 0. Throws Error(DataInvariantViolated) or Error(DimensionMismatch).
void validate(const InaccessibleEventData& data);

/// K'_h = J'_h + phi^T zeta'_h, with zeta1[h] the row for component h. Throws Error(DimensionMismatch).
Vec k_prime(const Vec& j1, const std::vector<Vec>& zeta1, const Vec& phi);

/// (J'''_h + phi^T zeta'''_h) / (1 + phi^T zeta'''_h alpha_h), or 0 where the denominator vanishes.
/// Validates the data first.
Rational k_triple_prime(const InaccessibleEventData& data, std::size_t h);

/// (d_h + phi^T n_h) / (1 + phi^T n_h). Throws Error(ZeroProbabilityBranch) when p_h or pbar_h is 0.
Rational accessible_jump_value(const AccessibleEventData& data, std::size_t h);

/// Both sides of the squared jump identity at one event: sum_h pbar_h (K^T dW~)_h^2 computed on a
/// one-tick basis realizing the data (through solve_factors and solve_accessible_K), and
/// sum_h pbar_h accessible_jump_value(h)^2. Requires pbar_h > 0 wherever p_h > 0.
struct JumpSeriesCheck {
    Rational kernel_side;
    Rational closed_form;
    bool holds = false;
};
JumpSeriesCheck accessible_series_check(const AccessibleEventData& data);

enum class SeriesVerdict { Finite, Divergent, Inconclusive };
std::string to_string(SeriesVerdict v);

struct SeriesThresholds {
    double growth = 1.5;      // per-refinement factor that signals divergence
    int refinements = 4;      // consecutive refinements that must all grow
    double tolerance = 1e-6;  // relative change that signals convergence
};

/// levels[j] holds 2^{j + first_level} + 1 equally spaced samples on [0, t_end] of the integrand
/// phi^T c phi. Panels touching a non-finite sample are left out. jumps holds phi^T dN_j.
struct SeriesInput {
    double t_end = 1;
    int first_level = 0;
    std::vector<std::vector<double>> levels;
    std::vector<double> jumps;
};

struct SeriesReport {
    SeriesVerdict verdict = SeriesVerdict::Inconclusive;
    std::optional<SeriesVerdict> integral_verdict;
    std::optional<SeriesVerdict> jump_verdict;
    std::vector<double> integral_table;  // trapezoid value per level
    std::vector<double> jump_table;      // partial sums of (x / (1 + x))^2 at prefixes 1, 2, 4, ...
    bool approximate = true;
};

/// Throws Error(BadGrid) for wrong level sizes, t_end <= 0, a jump equal to -1, or no data at all.
SeriesReport series_diagnostics(const SeriesInput& input, const SeriesThresholds& thresholds = {});

/// Classifies a refinement table with the rule used by series_diagnostics.
SeriesVerdict classify_table(const std::vector<double>& table, const SeriesThresholds& thresholds);

}  // namespace enlarge
