#include "maslov/index.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include <boost/math/tools/roots.hpp>

namespace maslov {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

double wrap_pi(double d) {
    d = std::remainder(d, kTwoPi);
    return d;
}

double raw_theta(double p1, double p2) { return 2.0 * std::atan2(p1, p2); }

// Doubled-angle increment between consecutive samples. The pair itself is
// continuous, so the undoubled angle is tracked; otherwise a half turn of
// the pair between samples would alias to a small doubled step.
double theta_step(double a1, double a2, double b1, double b2) {
    return 2.0 * wrap_pi(std::atan2(b1, b2) - std::atan2(a1, a2));
}

// Root of g on [lo, hi] given opposite signs at the ends.
double bracket_root(const std::function<double(double)>& g, double lo, double hi, double glo,
                    double ghi, double abs_tol) {
    if (glo == 0.0) return lo;
    if (ghi == 0.0) return hi;
    boost::uintmax_t iters = 200;
    auto tol = [abs_tol](double a, double b) { return std::abs(b - a) <= abs_tol; };
    const auto r = boost::math::tools::toms748_solve(g, lo, hi, glo, ghi, tol, iters);
    return 0.5 * (r.first + r.second);
}

int floor_turns(double theta) { return static_cast<int>(std::floor(theta / kTwoPi)); }

}  // namespace

double PsiPath::invariance_min() const {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ts.size(); ++i) m = std::min(m, psi1[i] * psi1[i] + psi2[i] * psi2[i]);
    return m;
}

TrackingAngle lift_angle(const PsiPath& path) {
    TrackingAngle out;
    out.ts = path.ts;
    out.theta.resize(path.size());
    for (std::size_t i = 0; i < path.size(); ++i) {
        const double raw = raw_theta(path.psi1[i], path.psi2[i]);
        if (i == 0) {
            out.theta[i] = raw;
            continue;
        }
        const double d = theta_step(path.psi1[i - 1], path.psi2[i - 1], path.psi1[i], path.psi2[i]);
        if (std::abs(d) >= M_PI / 2) {
            throw IndexError("lift_angle: samples too coarse (|dtheta| >= pi/2)");
        }
        out.theta[i] = out.theta[i - 1] + d;
        if (path.psi1[i] == 0.0) out.theta[i] = kTwoPi * std::round(out.theta[i] / kTwoPi);
    }
    return out;
}

int crossing_direction(double psi1_slope, double psi2_value, double tol) {
    if (psi2_value == 0.0) throw IndexError("crossing_direction: psi2 vanishes, not a regular crossing");
    if (std::abs(psi1_slope) <= tol) return 0;
    const double r = psi1_slope / psi2_value;
    return (r > 0) - (r < 0);
}

int endpoint_adjust(const TrackingAngle& angle, PathEnd end) {
    const std::size_t n = angle.theta.size();
    if (n < 2) return 0;
    if (end == PathEnd::Start) {
        const double t0 = angle.theta[0];
        if (std::fmod(t0, kTwoPi) != 0.0) return 0;
        // First sample that leaves the crossing value decides the departure.
        for (std::size_t i = 1; i < n; ++i) {
            if (angle.theta[i] != t0) return angle.theta[i] < t0 ? -1 : 0;
        }
        return 0;
    }
    const double t1 = angle.theta[n - 1];
    if (std::fmod(t1, kTwoPi) != 0.0) return 0;
    for (std::size_t i = n - 1; i-- > 0;) {
        if (angle.theta[i] != t1) return angle.theta[i] < t1 ? 1 : 0;
    }
    return 0;
}

namespace {

PsiPair snap(PsiPair p, double tol) {
    const double r = std::hypot(p.psi1, p.psi2);
    if (r > 0 && std::abs(p.psi1) < tol * r) p.psi1 = 0.0;
    return p;
}

void collect_events(ShelfResult& res, const PsiFunction& f, const ShelfOptions& opt) {
    const auto& th = res.angle.theta;
    const auto& ts = res.path.ts;
    const std::size_t n = th.size();
    const double width = std::abs(ts.back() - ts.front());
    for (std::size_t k = 1; k < n; ++k) {
        const int a = floor_turns(th[k - 1]);
        const int b = floor_turns(th[k]);
        if (a == b) continue;
        CrossingEvent ev;
        ev.direction = (b > a) ? 1 : -1;
        const bool exact_prev = res.path.psi1[k - 1] == 0.0;
        const bool exact_cur = res.path.psi1[k] == 0.0;
        if (exact_prev && !exact_cur) {
            ev.location = ts[k - 1];
            ev.kind = (k - 1 == 0) ? CrossingKind::StartDeparture : CrossingKind::Interior;
        } else if (exact_cur) {
            ev.location = ts[k];
            ev.kind = (k == n - 1) ? CrossingKind::EndArrival : CrossingKind::Interior;
        } else {
            auto g = [&f](double t) { return f(t).psi1; };
            const double lo = std::min(ts[k - 1], ts[k]);
            const double hi = std::max(ts[k - 1], ts[k]);
            const double glo = (lo == ts[k - 1]) ? res.path.psi1[k - 1] : res.path.psi1[k];
            const double ghi = (hi == ts[k]) ? res.path.psi1[k] : res.path.psi1[k - 1];
            ev.location = bracket_root(g, lo, hi, glo, ghi, opt.root_rtol * std::max(width, 1e-300));
            ev.kind = CrossingKind::Interior;
        }
        res.crossings.push_back(ev);
    }
}

}  // namespace

ShelfResult shelf_index(const PsiFunction& f, double a, double b, const ShelfOptions& opt) {
    ShelfResult res;
    const std::size_t n0 = std::max<std::size_t>(opt.initial_samples, 2);
    std::vector<double> ts(n0);
    std::vector<PsiPair> ps(n0);
    for (std::size_t i = 0; i < n0; ++i) {
        ts[i] = (i + 1 == n0) ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(n0 - 1);
        ps[i] = snap(f(ts[i]), opt.snap_tol);
    }
    // Refine intervals whose doubled-angle jump is too large.
    std::vector<double> out_t{ts[0]};
    std::vector<PsiPair> out_p{ps[0]};
    std::size_t total = n0;
    for (std::size_t i = 1; i < n0; ++i) {
        std::vector<std::pair<double, PsiPair>> stack{{ts[i], ps[i]}};
        while (!stack.empty()) {
            const auto [t1, p1] = stack.back();
            const double t0 = out_t.back();
            const PsiPair p0 = out_p.back();
            const double r0 = p0.psi1 * p0.psi1 + p0.psi2 * p0.psi2;
            const double r1 = p1.psi1 * p1.psi1 + p1.psi2 * p1.psi2;
            const bool degenerate = r0 < opt.invariance_tol || r1 < opt.invariance_tol;
            const double d = theta_step(p0.psi1, p0.psi2, p1.psi1, p1.psi2);
            if (degenerate || std::abs(d) < M_PI / 2) {
                if (degenerate) res.broken = true;
                out_t.push_back(t1);
                out_p.push_back(p1);
                stack.pop_back();
                continue;
            }
            if (++total > opt.max_samples) {
                throw IndexError("shelf_index: refinement exceeded the sample budget");
            }
            const double tm = 0.5 * (t0 + t1);
            if (tm == t0 || tm == t1) {
                res.broken = true;  // jump at machine resolution: simultaneous zero
                out_t.push_back(t1);
                out_p.push_back(p1);
                stack.pop_back();
                continue;
            }
            stack.emplace_back(tm, snap(f(tm), opt.snap_tol));
        }
    }
    for (std::size_t i = 0; i < out_t.size(); ++i) res.path.push(out_t[i], out_p[i]);
    res.invariance_min = res.path.invariance_min();
    if (res.invariance_min < opt.invariance_tol) res.broken = true;
    if (res.broken) return res;
    res.angle = lift_angle(res.path);
    res.index = floor_turns(res.angle.theta.back()) - floor_turns(res.angle.theta.front());
    collect_events(res, f, opt);
    return res;
}

ShelfResult shelf_index_from_path(const PsiPath& path) {
    ShelfResult res;
    res.path = path;
    res.invariance_min = path.invariance_min();
    if (path.size() < 2 || res.invariance_min <= 0.0) {
        res.broken = true;
        return res;
    }
    res.angle = lift_angle(path);
    res.index = floor_turns(res.angle.theta.back()) - floor_turns(res.angle.theta.front());
    const auto& th = res.angle.theta;
    for (std::size_t k = 1; k < th.size(); ++k) {
        const int a = floor_turns(th[k - 1]), b = floor_turns(th[k]);
        if (a == b) continue;
        CrossingEvent ev;
        ev.direction = b > a ? 1 : -1;
        const double p0 = path.psi1[k - 1], p1 = path.psi1[k];
        const double s = (p0 == p1) ? 0.0 : p0 / (p0 - p1);
        ev.location = path.ts[k - 1] + s * (path.ts[k] - path.ts[k - 1]);
        res.crossings.push_back(ev);
    }
    return res;
}

// ------------------------------------------------------------ shelves ----

namespace {

PsiPair psi_point(const SystemDefinition& sys, const AsymptoticSpectrum& spec, double x,
                  const TruncationChoice& trunc) {
    const double lambda = spec.lambda;
    const double mu = spec.mu_minus;
    const auto& coeff = sys.coeff;
    Rhs rhs = [&coeff, lambda, mu](double t, const Vec& u, Vec& du) {
        du.noalias() = coeff(t, lambda) * u;
        du -= mu * u;
    };
    const Vec u = integrate_to(rhs, -trunc.L_minus, spec.v_minus, x, trunc.ode());
    return psi_pair_at(u, spec);
}

ShelfOptions with_samples(ShelfOptions o, std::size_t n) {
    o.initial_samples = std::max<std::size_t>(n, 2);
    return o;
}

}  // namespace

ShelfResult vertical_shelf(const SystemDefinition& sys, double lambda, double x0, double x1,
                           const TruncationChoice& trunc, const ShelfOptions& opt) {
    const AsymptoticSpectrum spec = spectral_data(sys, lambda);
    const ShootingPath eta = integrate_eta_minus(sys, lambda, trunc, std::max(x0, x1), &spec);
    auto f = [&](double x) {
        if (x == x0 || x == x1) return psi_point(sys, spec, x, trunc);
        return psi_pair_at(eta.at(x), spec);
    };
    return shelf_index(f, x0, x1, opt);
}

ShelfResult horizontal_shelf(const SystemDefinition& sys, double x, double l0, double l1,
                             const TruncationChoice& trunc, const ShelfOptions& opt) {
    auto f = [&](double lambda) { return psi_point(sys, spectral_data(sys, lambda), x, trunc); };
    return shelf_index(f, l0, l1, opt);
}

std::optional<CrossingEvent> asymptotic_right_extension(const SystemDefinition& sys, double lambda,
                                                        const TruncationChoice& trunc,
                                                        double x_far) {
    const AsymptoticSpectrum spec = spectral_data(sys, lambda);
    // Eigenvalue test on the normalized Evans wedge at x = 0.
    const ShootingPath eta = integrate_eta_minus(sys, lambda, trunc, trunc.L_plus, &spec);
    const ShootingPath yt = integrate_ytilde_plus(sys, lambda, trunc, 0.0, &spec);
    const Vec u0 = eta.at(0.0);
    const Vec U0 = yt.at(0.0);
    const double evans_rel = std::abs(wedge_top(u0, U0)) / (u0.norm() * U0.norm());
    if (evans_rel > 1e-7) return std::nullopt;

    const auto ev = ordered_eigenvalues(sys.a_plus(lambda));
    if (ev.size() >= 2 && std::abs(ev[1].imag()) > 1e-12) {
        throw IndexError("asymptotic_right_extension: oscillatory approach at +inf, full-line index undefined");
    }
    // Read the approach at two far points and require agreement.
    auto contribution = [&](double x) {
        const PsiPair p = psi_pair_at(eta.at(x), spec);
        const double th = raw_theta(p.psi1, p.psi2);
        return static_cast<int>(std::round(th / kTwoPi)) - floor_turns(th);
    };
    const double x_check = std::min(trunc.L_plus, 1.5 * x_far);
    const int c1 = contribution(x_far);
    const int c2 = contribution(x_check);
    if (c1 != c2) {
        throw IndexError("asymptotic_right_extension: limit not resolved at this truncation, increase L");
    }
    CrossingEvent e;
    e.location = INFINITY;
    e.direction = c1;
    e.kind = CrossingKind::Asymptotic;
    return e;
}

TopShelfResult top_shelf_eigenvalues(const SystemDefinition& sys, double l0, double l1, double c,
                                     const TruncationChoice& trunc, std::size_t grid,
                                     double lambda_tol) {
    auto f = [&](double lambda) { return finite_c_pair(sys, lambda, c, trunc); };
    ShelfOptions opt;
    opt.initial_samples = grid;
    TopShelfResult out;
    out.shelf = shelf_index(f, l0, l1, opt);

    // For large c the pair flips as a whole across an eigenvalue, which the
    // doubled angle cannot see between samples. Eigenvalues are therefore
    // located from sign changes of psi1 on a uniform grid.
    const std::size_t n = std::max<std::size_t>(grid, 2);
    std::vector<double> ls(n), p1(n);
    for (std::size_t i = 0; i < n; ++i) {
        ls[i] = (i + 1 == n) ? l1 : l0 + (l1 - l0) * static_cast<double>(i) / static_cast<double>(n - 1);
        p1[i] = f(ls[i]).psi1;
    }
    auto g = [&](double lambda) { return f(lambda).psi1; };
    for (std::size_t i = 1; i < n; ++i) {
        if ((p1[i - 1] < 0) == (p1[i] < 0) && p1[i] != 0.0) continue;
        if (p1[i] == 0.0 && i + 1 < n) continue;  // counted on the next interval
        const double lo = std::min(ls[i - 1], ls[i]), hi = std::max(ls[i - 1], ls[i]);
        const double glo = lo == ls[i - 1] ? p1[i - 1] : p1[i];
        const double ghi = hi == ls[i] ? p1[i] : p1[i - 1];
        // Tight bracket so the local lift below resolves the turn.
        const double tight = std::min(lambda_tol, 1e-12 * std::max(1.0, std::abs(lo)));
        const double root = bracket_root(g, lo, hi, glo, ghi, tight);
        CrossingEvent ev;
        ev.location = root;
        ev.kind = CrossingKind::Interior;
        const double w = std::max(16 * tight, 1e-13);
        ShelfOptions local;
        local.initial_samples = 17;
        try {
            const ShelfResult s = shelf_index(f, std::max(lo, root - w), std::min(hi, root + w), local);
            ev.direction = s.broken ? 0 : std::clamp(s.index, -1, 1);
        } catch (const IndexError&) {
            ev.direction = 0;
        }
        out.eigenvalues.push_back(ev);
    }
    return out;
}

// --------------------------------------------------------------- box ----

std::size_t worker_count() {
    if (const char* env = std::getenv("MASLOV_BOX_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<std::size_t>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f) {
    const std::size_t w = std::min(worker_count(), n);
    if (w <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < w; ++k) {
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < n;) {
                try {
                    f(i);
                } catch (...) {
                    std::lock_guard<std::mutex> g(err_mu);
                    if (!err) err = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

PsiField psi_field(const SystemDefinition& sys, double l0, double l1, double x0, double x1,
                   const BoxGrid& grid, const TruncationChoice& trunc) {
    PsiField F;
    const std::size_t nl = std::max<std::size_t>(grid.n_lambda, 2), nx = std::max<std::size_t>(grid.n_x, 2);
    for (std::size_t i = 0; i < nl; ++i) F.lambdas.push_back(l0 + (l1 - l0) * i / double(nl - 1));
    for (std::size_t j = 0; j < nx; ++j) F.xs.push_back(x0 + (x1 - x0) * j / double(nx - 1));
    F.lambdas.back() = l1;
    F.xs.back() = x1;
    F.psi1.assign(nl * nx, 0.0);
    F.psi2.assign(nl * nx, 0.0);
    parallel_for(nl, [&](std::size_t i) {
        const AsymptoticSpectrum spec = spectral_data(sys, F.lambdas[i]);
        const ShootingPath eta = integrate_eta_minus(sys, F.lambdas[i], trunc, x1, &spec);
        for (std::size_t j = 0; j < nx; ++j) {
            const PsiPair p = psi_pair_at(eta.at(F.xs[j]), spec);
            F.psi1[i * nx + j] = p.psi1;
            F.psi2[i * nx + j] = p.psi2;
        }
    });
    return F;
}

BoxResult maslov_box(const SystemDefinition& sys, double l0, double l1, double x0, double x1,
                     const BoxGrid& grid, const TruncationChoice& trunc) {
    BoxResult B;
    B.lambda_lo = l0;
    B.lambda_hi = l1;
    B.x_lo = x0;
    B.x_hi = x1;
    B.field = psi_field(sys, l0, l1, x0, x1, grid, trunc);

    // Corner values are computed once and shared so the four shelves
    // agree bit for bit where they meet.
    const AsymptoticSpectrum s0 = spectral_data(sys, l0), s1 = spectral_data(sys, l1);
    const PsiPair c00 = psi_point(sys, s0, x0, trunc), c01 = psi_point(sys, s0, x1, trunc);
    const PsiPair c10 = psi_point(sys, s1, x0, trunc), c11 = psi_point(sys, s1, x1, trunc);

    auto horizontal = [&](double x, const PsiPair& left, const PsiPair& right) {
        auto f = [&](double lambda) {
            if (lambda == l0) return left;
            if (lambda == l1) return right;
            return psi_point(sys, spectral_data(sys, lambda), x, trunc);
        };
        return shelf_index(f, l0, l1, with_samples({}, grid.n_lambda));
    };
    auto vertical = [&](const AsymptoticSpectrum& spec, const PsiPair& lo, const PsiPair& hi) {
        const ShootingPath eta = integrate_eta_minus(sys, spec.lambda, trunc, x1, &spec);
        auto f = [&](double x) {
            if (x == x0) return lo;
            if (x == x1) return hi;
            return psi_pair_at(eta.at(x), spec);
        };
        return shelf_index(f, x0, x1, with_samples({}, grid.n_x));
    };
    ShelfResult* slots[4] = {&B.bottom, &B.right, &B.top, &B.left};
    parallel_for(4, [&](std::size_t k) {
        switch (k) {
            case 0: *slots[0] = horizontal(x0, c00, c10); break;
            case 1: *slots[1] = vertical(s1, c10, c11); break;
            case 2: *slots[2] = horizontal(x1, c01, c11); break;
            default: *slots[3] = vertical(s0, c00, c01); break;
        }
    });
    if (!(B.bottom.broken || B.right.broken || B.top.broken || B.left.broken)) {
        B.m = B.bottom.index + B.right.index - B.top.index - B.left.index;
    }
    return B;
}

// ------------------------------------------------------------- parity ----

ParityResult exchange_parity_check(const SystemDefinition& sys, double lambda, double x0, double x1,
                                   const Mat& alt_m, const TruncationChoice& trunc) {
    SystemDefinition alt = sys;
    alt.m_matrix = alt_m;
    alt.m_sign = 1.0;
    ParityResult r;
    const ShelfResult a = vertical_shelf(sys, lambda, x0, x1, trunc);
    const ShelfResult b = vertical_shelf(alt, lambda, x0, x1, trunc);
    r.index_m = a.index;
    r.index_alt = b.index;
    r.difference = b.index - a.index;
    r.inconclusive = a.broken || b.broken;
    return r;
}

int count_bound(const BoundInputs& in) {
    const int v = std::abs(in.right_full - in.left_full + in.bottom - in.m) - in.corner;
    return std::max(0, v);
}

}  // namespace maslov
