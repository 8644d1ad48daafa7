#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "maslov/shooting.hpp"
#include "maslov/spectral.hpp"

namespace maslov {

// Samples of (psi1, psi2) along a shelf parameter t.
struct PsiPath {
    std::vector<double> ts;
    std::vector<double> psi1;
    std::vector<double> psi2;
    bool broken = false;

    std::size_t size() const { return ts.size(); }
    void push(double t, const PsiPair& p) {
        ts.push_back(t);
        psi1.push_back(p.psi1);
        psi2.push_back(p.psi2);
    }
    double invariance_min() const;
};

// Continuous lift of theta = 2 atan2(psi1, psi2). Crossings (psi1 = 0,
// psi2 != 0) sit at theta in 2 pi Z, i.e. crossing_angle = 0 modulo 2 pi.
struct TrackingAngle {
    std::vector<double> ts;
    std::vector<double> theta;
    double crossing_angle = 0.0;
};

enum class CrossingKind { Interior, StartDeparture, EndArrival, Asymptotic };

struct CrossingEvent {
    double location = 0.0;
    int direction = 0;
    CrossingKind kind = CrossingKind::Interior;
};

struct ShelfResult {
    int index = 0;
    std::vector<CrossingEvent> crossings;
    double invariance_min = 0.0;
    bool broken = false;
    PsiPath path;
    TrackingAngle angle;
};

class IndexError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using PsiFunction = std::function<PsiPair(double)>;

struct ShelfOptions {
    std::size_t initial_samples = 257;
    std::size_t max_samples = std::size_t{1} << 20;
    double snap_tol = 1e-12;       // |psi1|/r below this counts as an exact crossing
    double invariance_tol = 1e-12; // psi1^2 + psi2^2 below this breaks invariance
    double root_rtol = 1e-10;      // crossing refinement, relative to the window
};

// Lift of pre-sampled data; no refinement (|dtheta| >= pi/2 is an error).
TrackingAngle lift_angle(const PsiPath& path);

// Sample f on [a, b] (a > b allowed for reversed traversal), refining until
// consecutive theta values differ by less than pi/2, then lift.
ShelfResult shelf_index(const PsiFunction& f, double a, double b, const ShelfOptions& opt = {});

// Index from a pre-sampled path with the floor convention; crossings are
// located by linear interpolation only.
ShelfResult shelf_index_from_path(const PsiPath& path);

// +1 when psi1' / psi2 > 0, -1 when < 0, 0 when |psi1'| < tol.
int crossing_direction(double psi1_slope, double psi2_value, double tol = 0.0);

enum class PathEnd { Start, Finish };
// Contribution of an endpoint under the arrival/departure conventions.
int endpoint_adjust(const TrackingAngle& angle, PathEnd end);

// Full-line completion of a right shelf at lambda, read at a reliable far x.
std::optional<CrossingEvent> asymptotic_right_extension(const SystemDefinition& sys, double lambda,
                                                        const TruncationChoice& trunc,
                                                        double x_far);

// Shelf at fixed lambda, x running over [x0, x1] (c -> infinity pair).
ShelfResult vertical_shelf(const SystemDefinition& sys, double lambda, double x0, double x1,
                           const TruncationChoice& trunc, const ShelfOptions& opt = {});
// Shelf at fixed x, lambda running over [l0, l1] (c -> infinity pair).
ShelfResult horizontal_shelf(const SystemDefinition& sys, double x, double l0, double l1,
                             const TruncationChoice& trunc, const ShelfOptions& opt = {});

struct TopShelfResult {
    ShelfResult shelf;
    std::vector<CrossingEvent> eigenvalues;
};

// Lambda sweep at x = c of the finite-c pair; sign changes of psi1 are
// reported as eigenvalues refined to lambda_tol.
TopShelfResult top_shelf_eigenvalues(const SystemDefinition& sys, double l0, double l1, double c,
                                     const TruncationChoice& trunc, std::size_t grid = 257,
                                     double lambda_tol = 1e-5);

struct BoxGrid {
    std::size_t n_lambda = 129;
    std::size_t n_x = 129;
};

// psi values on the lambda x x lattice, one forward integration per column.
struct PsiField {
    std::vector<double> lambdas;
    std::vector<double> xs;
    std::vector<double> psi1;  // row-major: [i_lambda * n_x + i_x]
    std::vector<double> psi2;
    double at1(std::size_t il, std::size_t ix) const { return psi1[il * xs.size() + ix]; }
    double at2(std::size_t il, std::size_t ix) const { return psi2[il * xs.size() + ix]; }
};

PsiField psi_field(const SystemDefinition& sys, double l0, double l1, double x0, double x1,
                   const BoxGrid& grid, const TruncationChoice& trunc);

struct BoxResult {
    ShelfResult bottom, right, top, left;
    std::optional<int> m;  // empty when a shelf lost invariance
    double lambda_lo = 0, lambda_hi = 0, x_lo = 0, x_hi = 0;
    PsiField field;
};

BoxResult maslov_box(const SystemDefinition& sys, double l0, double l1, double x0, double x1,
                     const BoxGrid& grid, const TruncationChoice& trunc);

// Spectral curves (psi1 = 0) traced by continuation inside the box.
enum class Shelf { Bottom, Right, Top, Left, None };
const char* shelf_name(Shelf s);

struct CurvePoint {
    double lambda = 0.0;
    double x = 0.0;
    int psi2_sign = 0;
};

struct SpectralCurve {
    std::vector<CurvePoint> points;
    Shelf entry = Shelf::None;
    Shelf exit = Shelf::None;
    double lambda_min = 0.0;
    bool closed = true;  // false if continuation gave up before reaching the boundary
};

struct LossPoint {
    double lambda = 0.0;
    double x = 0.0;
};

struct CurveOptions {
    double initial_step = 1.0 / 512.0;  // fraction of the (scaled) window
    double min_step = 1e-7;
    double max_step = 1.0 / 64.0;
    std::size_t max_points = 20000;
    double corrector_tol = 1e-11;
};

struct CurveSet {
    std::vector<SpectralCurve> curves;
    std::vector<LossPoint> loss_points;
};

CurveSet trace_spectral_curves(const SystemDefinition& sys, const BoxResult& box,
                               const TruncationChoice& trunc, const CurveOptions& opt = {});

// Loss points inside the box: psi2 sign changes along the traced curves,
// refined to `tol` in both variables.
std::vector<LossPoint> invariance_scan(const SystemDefinition& sys, const BoxResult& box,
                                       const TruncationChoice& trunc, double tol = 1e-3);

struct ParityResult {
    int index_m = 0;
    int index_alt = 0;
    int difference = 0;
    bool inconclusive = false;
};

// Recompute a vertical shelf with V~_M built from alt_m.
ParityResult exchange_parity_check(const SystemDefinition& sys, double lambda, double x0, double x1,
                                   const Mat& alt_m, const TruncationChoice& trunc);

struct BoundInputs {
    int right_full = 0;
    int left_full = 0;
    int bottom = 0;
    int m = 0;
    int corner = 0;
};

// max(0, |R - L + B - m| - corner).
int count_bound(const BoundInputs& in);

// Runs f(i) for i in [0, n) on a worker pool sized by MASLOV_BOX_THREADS
// (default: hardware concurrency).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f);
std::size_t worker_count();

}  // namespace maslov
