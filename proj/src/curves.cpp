#include <algorithm>
#include <cmath>
#include <optional>

#include <boost/math/tools/roots.hpp>

#include "maslov/index.hpp"

namespace maslov {

const char* shelf_name(Shelf s) {
    switch (s) {
        case Shelf::Bottom: return "bottom";
        case Shelf::Right: return "right";
        case Shelf::Top: return "top";
        case Shelf::Left: return "left";
        default: return "none";
    }
}

namespace {

struct Z {
    double l = 0, x = 0;  // scaled coordinates in [0, 1]^2
};

Z operator+(Z a, Z b) { return {a.l + b.l, a.x + b.x}; }
Z operator-(Z a, Z b) { return {a.l - b.l, a.x - b.x}; }
Z operator*(double s, Z a) { return {s * a.l, s * a.x}; }
double dot(Z a, Z b) { return a.l * b.l + a.x * b.x; }
double norm(Z a) { return std::hypot(a.l, a.x); }

class Tracer {
public:
    Tracer(const SystemDefinition& sys, const BoxResult& box, const TruncationChoice& trunc,
           const CurveOptions& opt)
        : sys_(sys), trunc_(trunc), opt_(opt), l0_(box.lambda_lo), l1_(box.lambda_hi),
          x0_(box.x_lo), x1_(box.x_hi) {}

    double lam(const Z& z) const { return l0_ + z.l * (l1_ - l0_); }
    double xx(const Z& z) const { return x0_ + z.x * (x1_ - x0_); }

    PsiPair eval(const Z& z) const {
        const double lambda = std::min(lam(z), sys_.lambda_max);
        const AsymptoticSpectrum spec = spectral_data(sys_, lambda);
        const double mu = spec.mu_minus;
        const auto& coeff = sys_.coeff;
        Rhs rhs = [&coeff, lambda, mu](double t, const Vec& u, Vec& du) {
            du.noalias() = coeff(t, lambda) * u;
            du -= mu * u;
        };
        const Vec u = integrate_to(rhs, -trunc_.L_minus, spec.v_minus, xx(z), trunc_.ode());
        return psi_pair_at(u, spec);
    }
    double f(const Z& z) const { return eval(z).psi1; }

    Z gradient(const Z& z) const {
        const double e = 1e-6;
        Z g;
        {
            const bool back = z.l + e > 1.0;
            const bool fwd = z.l - e < 0.0;
            Z a = z, b = z;
            a.l = back ? z.l - e : z.l;
            b.l = fwd ? z.l + e : z.l;
            if (!back && !fwd) {
                a.l = z.l - e;
                b.l = z.l + e;
            }
            g.l = (f(b) - f(a)) / (b.l - a.l);
        }
        {
            Z a = z, b = z;
            a.x = z.x - e;
            b.x = z.x + e;
            g.x = (f(b) - f(a)) / (b.x - a.x);
        }
        return g;
    }

    static Z tangent_of(const Z& g) {
        const double n = norm(g);
        if (n == 0.0) return {0, 0};
        return {-g.x / n, g.l / n};
    }

    // Solve psi1 = 0 along one coordinate near `guess`, searching a bracket
    // of half-width up to `span`.
    std::optional<Z> correct(Z guess, bool solve_x, double span) const {
        auto at = [&](double v) {
            Z z = guess;
            (solve_x ? z.x : z.l) = v;
            return z;
        };
        const double c = solve_x ? guess.x : guess.l;
        const double lo_lim = 0.0, hi_lim = 1.0;
        auto g = [&](double v) { return f(at(v)); };
        const double gc = g(std::clamp(c, lo_lim, hi_lim));
        if (gc == 0.0) return at(std::clamp(c, lo_lim, hi_lim));
        for (double d = span / 8; d <= span * 1.0000001; d *= 2) {
            for (int side : {1, -1}) {
                const double a = std::clamp(c, lo_lim, hi_lim);
                const double b = std::clamp(c + side * d, lo_lim, hi_lim);
                if (a == b) continue;
                const double gb = g(b);
                if ((gc < 0) != (gb < 0) || gb == 0.0) {
                    boost::uintmax_t it = 100;
                    const double tol = opt_.corrector_tol;
                    auto stop = [tol](double p, double q) { return std::abs(p - q) <= tol; };
                    const double lo = std::min(a, b), hi = std::max(a, b);
                    const double glo = lo == a ? gc : gb, ghi = hi == b ? gb : gc;
                    if (glo == 0.0) return at(lo);
                    if (ghi == 0.0) return at(hi);
                    const auto r = boost::math::tools::toms748_solve(g, lo, hi, glo, ghi, stop, it);
                    return at(0.5 * (r.first + r.second));
                }
            }
        }
        return std::nullopt;
    }

    static bool inside(const Z& z) { return z.l >= 0 && z.l <= 1 && z.x >= 0 && z.x <= 1; }

    static Shelf boundary_of(const Z& z) {
        const double e = 1e-12;
        if (z.l >= 1 - e) return Shelf::Right;
        if (z.l <= e) return Shelf::Left;
        if (z.x <= e) return Shelf::Bottom;
        if (z.x >= 1 - e) return Shelf::Top;
        return Shelf::None;
    }

    // Trace from a boundary seed into the box until the curve leaves it.
    SpectralCurve trace(Z seed, Shelf entry, std::vector<LossPoint>& losses) const {
        SpectralCurve c;
        c.entry = entry;
        Z z = seed;
        PsiPair pz = eval(z);
        c.points.push_back({lam(z), xx(z), (pz.psi2 > 0) - (pz.psi2 < 0)});
        Z t = tangent_of(gradient(z));
        double h = opt_.initial_step;
        {
            const Z a = z + h * t, b = z + (-h) * t;
            if (!inside(a) && inside(b)) t = -1.0 * t;
            else if (inside(a) && inside(b)) {
                const Z inward = entry == Shelf::Right ? Z{-1, 0}
                                 : entry == Shelf::Left ? Z{1, 0}
                                 : entry == Shelf::Bottom ? Z{0, 1}
                                                          : Z{0, -1};
                if (dot(t, inward) < 0) t = -1.0 * t;
            }
        }
        bool first = true;
        while (c.points.size() < opt_.max_points) {
            if (h < opt_.min_step) {
                c.closed = false;
                break;
            }
            Z pred = z + h * t;
            const bool solve_x = std::abs(t.l) >= std::abs(t.x);
            std::optional<Z> next;
            bool exiting = false;
            if (!inside(pred)) {
                // Clip the predictor to the boundary it leaves through and
                // solve along that shelf.
                double s = 1.0;
                bool along_x = false;
                if (pred.l > 1) { s = std::min(s, (1 - z.l) / (pred.l - z.l)); }
                if (pred.l < 0) { s = std::min(s, (0 - z.l) / (pred.l - z.l)); }
                double sx = 1.0;
                if (pred.x > 1) sx = (1 - z.x) / (pred.x - z.x);
                if (pred.x < 0) sx = (0 - z.x) / (pred.x - z.x);
                Z q;
                if (sx < s) {
                    q = z + sx * (pred - z);
                    q.x = pred.x > 1 ? 1.0 : 0.0;
                    along_x = false;  // x fixed, solve in lambda
                } else {
                    q = z + s * (pred - z);
                    q.l = pred.l > 1 ? 1.0 : 0.0;
                    along_x = true;  // lambda fixed, solve in x
                }
                if (first && norm(q - seed) < 1e-12) {
                    h *= 0.5;
                    continue;
                }
                next = correct(q, along_x, 2 * h);
                exiting = next.has_value();
            } else {
                next = correct(pred, solve_x, h);
            }
            if (!next || norm(*next - z) > 2.5 * h || dot(*next - z, t) <= 0 || !inside(*next)) {
                h *= 0.5;
                continue;
            }
            const Z zn = *next;
            const PsiPair pn = eval(zn);
            const int sn = (pn.psi2 > 0) - (pn.psi2 < 0);
            const int sp = c.points.back().psi2_sign;
            if (sn != sp && sn != 0 && sp != 0) {
                losses.push_back(refine_loss(z, zn, sp, solve_x));
            }
            c.points.push_back({lam(zn), xx(zn), sn});
            z = zn;
            first = false;
            if (exiting || (boundary_of(zn) != Shelf::None && c.points.size() > 2)) {
                c.exit = boundary_of(zn);
                break;
            }
            Z tn = tangent_of(gradient(z));
            if (dot(tn, t) < 0) tn = -1.0 * tn;
            t = tn;
            h = std::min(h * 1.25, opt_.max_step);
        }
        if (c.exit == Shelf::None) c.closed = false;
        c.lambda_min = c.points.front().lambda;
        for (const auto& p : c.points) c.lambda_min = std::min(c.lambda_min, p.lambda);
        return c;
    }

    LossPoint refine_loss(Z a, Z b, int sign_a, bool solve_x) const {
        double lo = 0.0, hi = 1.0;
        Z best = a;
        for (int it = 0; it < 40; ++it) {
            const double m = 0.5 * (lo + hi);
            const Z guess = a + m * (b - a);
            const auto zc = correct(guess, solve_x, std::max(norm(b - a), 1e-9));
            if (!zc) break;
            best = *zc;
            const double p2 = eval(*zc).psi2;
            const int s = (p2 > 0) - (p2 < 0);
            if (s == sign_a) lo = m;
            else hi = m;
            if ((hi - lo) * norm(b - a) < 1e-10) break;
        }
        return {lam(best), xx(best)};
    }

private:
    const SystemDefinition& sys_;
    const TruncationChoice& trunc_;
    CurveOptions opt_;
    double l0_, l1_, x0_, x1_;
};

}  // namespace

CurveSet trace_spectral_curves(const SystemDefinition& sys, const BoxResult& box,
                               const TruncationChoice& trunc, const CurveOptions& opt) {
    Tracer tr(sys, box, trunc, opt);
    struct Seed {
        Z z;
        Shelf shelf;
        bool used = false;
    };
    std::vector<Seed> seeds;
    const double wl = box.lambda_hi - box.lambda_lo, wx = box.x_hi - box.x_lo;
    auto add = [&](const ShelfResult& s, Shelf which) {
        for (const auto& e : s.crossings) {
            Z z;
            switch (which) {
                case Shelf::Bottom: z = {(e.location - box.lambda_lo) / wl, 0.0}; break;
                case Shelf::Top: z = {(e.location - box.lambda_lo) / wl, 1.0}; break;
                case Shelf::Right: z = {1.0, (e.location - box.x_lo) / wx}; break;
                default: z = {0.0, (e.location - box.x_lo) / wx}; break;
            }
            seeds.push_back({z, which});
        }
    };
    add(box.right, Shelf::Right);
    add(box.bottom, Shelf::Bottom);
    add(box.top, Shelf::Top);
    add(box.left, Shelf::Left);

    CurveSet out;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        if (seeds[i].used) continue;
        seeds[i].used = true;
        SpectralCurve c = tr.trace(seeds[i].z, seeds[i].shelf, out.loss_points);
        if (c.exit != Shelf::None) {
            const Z end{(c.points.back().lambda - box.lambda_lo) / wl, (c.points.back().x - box.x_lo) / wx};
            for (auto& s : seeds) {
                if (!s.used && norm(s.z - end) < 1e-4) s.used = true;
            }
        }
        out.curves.push_back(std::move(c));
    }
    return out;
}

std::vector<LossPoint> invariance_scan(const SystemDefinition& sys, const BoxResult& box,
                                       const TruncationChoice& trunc, double tol) {
    CurveOptions opt;
    opt.corrector_tol = std::min(opt.corrector_tol, tol * 1e-3);
    return trace_spectral_curves(sys, box, trunc, opt).loss_points;
}

}  // namespace maslov
