#include "maslov/verdict.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

namespace maslov {

const char* verdict_name(VerdictStatus s) {
    switch (s) {
        case VerdictStatus::ConsistentWithStability: return "consistent with stability";
        case VerdictStatus::Unstable: return "unstable";
        case VerdictStatus::SpectrumDetected: return "spectrum detected (invariance lost)";
        default: return "inconclusive";
    }
}

double far_point(const SystemDefinition& sys, const TruncationChoice& trunc) {
    const double cap = (sys.label == "kdvb") ? 24.0 : 10.0;
    return std::min(0.4 * trunc.L_plus, cap);
}

namespace {

// Sign of psi2 at large x on the right shelf lambda = 0. It is nonzero
// there, so it persists for lambda slightly below 0 at that x.
int psi2_sign_near_zero(const SystemDefinition& sys, const TruncationChoice& trunc, double x_far) {
    const double lambda = 0.0;
    const AsymptoticSpectrum spec = spectral_data(sys, lambda);
    const ShootingPath eta = integrate_eta_minus(sys, lambda, trunc, x_far, &spec);
    const double p2 = psi_pair_at(eta.at(x_far), spec).psi2;
    return (p2 > 0) - (p2 < 0);
}

void fill_common(StabilityReport& r, const SystemDefinition& sys, const BoxWindow& w,
                 const TruncationChoice& trunc) {
    r.box = maslov_box(sys, w.lambda_lo, w.lambda_hi, w.x_lo, w.x_hi, w.grid, trunc);
    const double xf = far_point(sys, trunc);
    const double xl = -0.8 * trunc.L_minus;
    r.left_full = vertical_shelf(sys, w.lambda_lo, xl, xf, trunc).index;
    if (!r.box.right.broken && !r.box.bottom.broken && !r.box.top.broken && !r.box.left.broken) {
        r.curves = trace_spectral_curves(sys, r.box, trunc);
    }
}

}  // namespace

StabilityReport gkdv_verdict(const GkdvModel& m, const BoxWindow& w, const TruncationChoice& trunc) {
    if (m.p == 4.0) throw ModelError("gkdv_verdict: p = 4 is the degenerate borderline case");
    StabilityReport r;
    r.model = "gkdv";
    const SystemDefinition sys = gkdv_system(m);
    fill_common(r, sys, w, trunc);
    const double xf = far_point(sys, trunc);

    const ShelfResult right = vertical_shelf(sys, w.lambda_hi, -0.8 * trunc.L_minus, xf, trunc);
    const auto ext = asymptotic_right_extension(sys, w.lambda_hi, trunc, xf);
    r.asymptotic = ext ? ext->direction : 0;
    r.right_full = right.index + r.asymptotic;

    r.derivative_order = 2;
    r.derivative_sign = evans_d2prime0_gkdv_sign(m);
    r.corner = corner_increment(r.derivative_sign, 2, psi2_sign_near_zero(sys, trunc, xf));
    r.eigenvalues = top_shelf_eigenvalues(sys, w.lambda_lo, -0.01, trunc.L_plus, trunc, w.top_grid).eigenvalues;

    std::ostringstream msg;
    if (!r.box.m) {
        r.status = VerdictStatus::SpectrumDetected;
        msg << "invariance lost on the box boundary";
    } else {
        r.bound = count_bound({*r.right_full, r.left_full, r.box.bottom.index, *r.box.m, r.corner});
        if (*r.bound >= 1) {
            r.status = VerdictStatus::Unstable;
            msg << "unstable; N >= " << *r.bound;
            if (!r.eigenvalues.empty()) msg << "; eigenvalue near " << r.eigenvalues.front().location;
        } else {
            r.status = VerdictStatus::ConsistentWithStability;
            msg << "no instability detected; m = " << *r.box.m;
        }
    }
    r.message = msg.str();
    return r;
}

StabilityReport kdvb_verdict(const KdvbModel& m, const BoxWindow& w, const TruncationChoice& trunc) {
    StabilityReport r;
    r.model = "kdvb";
    auto shared = std::make_shared<const KdvbModel>(m);
    const SystemDefinition sys = kdvb_system(shared);
    fill_common(r, sys, w, trunc);
    const double xf = far_point(sys, trunc);

    const DerivativeReport d = evans_dprime0(sys, trunc);
    r.derivative_order = 1;
    r.derivative_sign = (d.d1 > 0) - (d.d1 < 0);
    r.corner = corner_increment(r.derivative_sign, 1, psi2_sign_near_zero(sys, trunc, xf));
    r.eigenvalues = top_shelf_eigenvalues(sys, w.lambda_lo, -0.01 * (w.lambda_hi - w.lambda_lo),
                                          trunc.L_plus, trunc, w.top_grid)
                        .eigenvalues;

    std::ostringstream msg;
    if (!r.box.m) {
        r.status = VerdictStatus::SpectrumDetected;
        msg << "invariance lost on the box boundary";
        r.message = msg.str();
        return r;
    }
    try {
        const ShelfResult right = vertical_shelf(sys, w.lambda_hi, -0.8 * trunc.L_minus, xf, trunc);
        const auto ext = asymptotic_right_extension(sys, w.lambda_hi, trunc, xf);
        r.asymptotic = ext ? ext->direction : 0;
        r.right_full = right.index + r.asymptotic;
        r.bound = count_bound({*r.right_full, r.left_full, r.box.bottom.index, *r.box.m, r.corner});
    } catch (const IndexError&) {
        r.right_full.reset();
    }
    if (r.bound && *r.bound >= 1) {
        r.status = VerdictStatus::Unstable;
        msg << "unstable; N >= " << *r.bound;
    } else if (r.bound) {
        r.status = VerdictStatus::ConsistentWithStability;
        msg << "consistent with stability; m = " << *r.box.m;
    } else {
        std::size_t paired = 0, total = 0;
        for (const auto& c : r.curves.curves) {
            if (c.entry != Shelf::Right) continue;
            ++total;
            if (c.exit == Shelf::Right) ++paired;
        }
        r.status = (*r.box.m == 0 && r.eigenvalues.empty()) ? VerdictStatus::ConsistentWithStability
                                                            : VerdictStatus::Inconclusive;
        msg << verdict_name(r.status) << "; full-line right index undefined (oscillatory tail); "
            << paired << " of " << total << " right-shelf curves exit through the right shelf in window";
    }
    r.message = msg.str();
    return r;
}

bool gkdv_left_shelf_guard(const GkdvModel& m, double lambda1, const TruncationChoice& trunc,
                           std::size_t grid) {
    const SystemDefinition sys = gkdv_system(m);
    const AsymptoticSpectrum spec = spectral_data(sys, lambda1);
    const ShootingPath eta = integrate_eta_minus(sys, lambda1, trunc, trunc.L_plus, &spec);
    const std::size_t n = std::max<std::size_t>(grid, 2);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = -trunc.L_minus + (trunc.L_plus + trunc.L_minus) * i / double(n - 1);
        if (!(wedge_top(eta.at(x), spec.vtilde_plus) > 0.0)) return false;
    }
    return true;
}

}  // namespace maslov
