#pragma once

#include <optional>
#include <string>
#include <vector>

#include "maslov/evans.hpp"
#include "maslov/index.hpp"
#include "maslov/models.hpp"

namespace maslov {

enum class VerdictStatus { ConsistentWithStability, Unstable, SpectrumDetected, Inconclusive };
const char* verdict_name(VerdictStatus s);

struct BoxWindow {
    double lambda_lo = -7.0;
    double lambda_hi = 0.0;
    double x_lo = -5.0;
    double x_hi = 5.0;
    BoxGrid grid;
    std::size_t top_grid = 257;  // lambda samples for the top-shelf eigenvalue sweep
};

struct StabilityReport {
    VerdictStatus status = VerdictStatus::Inconclusive;
    std::string model;
    BoxResult box;
    std::optional<int> right_full;  // full-line right-shelf index (absent if undefined)
    int left_full = 0;
    int asymptotic = 0;
    int derivative_order = 0;  // order of the first nonvanishing derivative of D at 0
    int derivative_sign = 0;
    int corner = 0;
    std::optional<int> bound;  // lower bound on eigenvalues in (lambda_lo, 0)
    std::vector<CrossingEvent> eigenvalues;
    CurveSet curves;
    std::string message;
};

// Where the right-shelf approach to x = +infinity is read at lambda = 0. At
// lambda = 0 the forward solution decays on the right while rounding error
// feeds the growing mode, so this point is fixed per model rather than
// scaled with the truncation: 10 for gKdV, 24 for KdV-Burgers, or 0.4 L if
// the window is shorter.
double far_point(const SystemDefinition& sys, const TruncationChoice& trunc);

// gKdV: box on the window, full-line right index, corner increment from
// sgn D''(0), the count bound and a top-shelf (Evans sign) sweep.
StabilityReport gkdv_verdict(const GkdvModel& m, const BoxWindow& w, const TruncationChoice& trunc);

// KdV-Burgers: the same ingredients with the corner from sgn D'(0). For
// nu > 1/4 the full-line right index does not exist and the report states
// whether the in-window right-shelf crossings cancel pairwise.
StabilityReport kdvb_verdict(const KdvbModel& m, const BoxWindow& w, const TruncationChoice& trunc);

// Checks wedge_top(u^-(x; lambda1), V~+(lambda1)) > 0 on a uniform grid of
// [-L_minus, L_plus].
bool gkdv_left_shelf_guard(const GkdvModel& m, double lambda1, const TruncationChoice& trunc,
                           std::size_t grid = 801);

}  // namespace maslov
