#include "maslov/tracer.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

namespace maslov::tracer {

namespace fs = std::filesystem;
using json = nlohmann::json;

void validate(const RunConfig& cfg) {
    if (cfg.model != "gkdv" && cfg.model != "kdvb") {
        throw ConfigError("model must be 'gkdv' or 'kdvb', got '" + cfg.model + "'");
    }
    if (!(cfg.lmin < cfg.lmax)) throw ConfigError("lambda window is empty (need lmin < lmax)");
    if (cfg.lmax > 0.0) throw ConfigError("lambda window must lie in (-inf, 0]");
    if (!(cfg.xmin < cfg.xmax)) throw ConfigError("x window is empty (need xmin < xmax)");
    if (cfg.n_lambda < 16 || cfg.n_x < 16) throw ConfigError("grid must have at least 16 points per axis");
    if (!(cfg.rtol > 0 && cfg.rtol <= 1e-4 && cfg.atol > 0 && cfg.atol <= 1e-4)) {
        throw ConfigError("tolerances must lie in (0, 1e-4]");
    }
    if (cfg.L < 0) throw ConfigError("truncation L must be positive");
    if (cfg.model == "gkdv") {
        if (!(cfg.p >= 1.0)) throw ConfigError("gkdv requires p >= 1");
        if (!(cfg.s > 0.0)) throw ConfigError("gkdv requires s > 0");
    } else {
        if (!(cfg.nu > 0.0)) throw ConfigError("kdvb requires nu > 0");
        if (cfg.nu == 0.25) throw ConfigError("kdvb: nu = 1/4 is the excluded borderline case");
    }
}

void parse_grid(const std::string& text, RunConfig& cfg) {
    const auto pos = text.find_first_of("xX,");
    try {
        std::size_t used = 0;
        if (pos == std::string::npos) {
            const unsigned long n = std::stoul(text, &used);
            if (used != text.size()) throw ConfigError("bad grid '" + text + "'");
            cfg.n_lambda = cfg.n_x = n;
        } else {
            cfg.n_lambda = std::stoul(text.substr(0, pos));
            cfg.n_x = std::stoul(text.substr(pos + 1));
        }
    } catch (const std::logic_error&) {
        throw ConfigError("bad grid '" + text + "' (expected N or NLxNX)");
    }
}

BuiltModel build_model(const RunConfig& cfg) {
    validate(cfg);
    BuiltModel b;
    if (cfg.model == "gkdv") {
        b.gkdv = GkdvModel(cfg.p, cfg.s);
        b.sys = gkdv_system(b.gkdv);
    } else {
        const double L = cfg.L > 0 ? std::max(60.0, cfg.L) : 60.0;
        b.kdvb = std::make_shared<const KdvbModel>(cfg.nu, L);
        b.sys = kdvb_system(b.kdvb);
    }
    b.trunc = default_truncation(b.sys);
    if (cfg.L > 0) b.trunc.L_minus = b.trunc.L_plus = cfg.L;
    b.trunc.rtol = cfg.rtol;
    b.trunc.atol = cfg.atol;
    return b;
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void ensure_dir(const fs::path& p) {
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec) throw ConfigError("cannot create output directory " + p.string() + ": " + ec.message());
}

std::ofstream open_out(const fs::path& file) {
    std::ofstream f(file);
    if (!f) throw ConfigError("cannot write " + file.string());
    return f;
}

const char* kind_name(CrossingKind k) {
    switch (k) {
        case CrossingKind::StartDeparture: return "start";
        case CrossingKind::EndArrival: return "end";
        case CrossingKind::Asymptotic: return "asymptotic";
        default: return "interior";
    }
}

std::string xml_escape(const std::string& s) {
    std::string o;
    for (char c : s) {
        switch (c) {
            case '<': o += "&lt;"; break;
            case '>': o += "&gt;"; break;
            case '&': o += "&amp;"; break;
            case '"': o += "&quot;"; break;
            default: o += c;
        }
    }
    return o;
}

json shelf_json(const ShelfResult& s) {
    json j;
    j["index"] = s.index;
    j["broken"] = s.broken;
    j["invariance_min"] = s.invariance_min;
    j["samples"] = s.path.size();
    json cr = json::array();
    for (const auto& e : s.crossings) {
        cr.push_back({{"location", e.location}, {"direction", e.direction}, {"kind", kind_name(e.kind)}});
    }
    j["crossings"] = cr;
    return j;
}

void append_jsonl(const fs::path& file, const json& j) {
    std::ofstream f(file, std::ios::app);
    if (!f) throw ConfigError("cannot write " + file.string());
    f << j.dump() << '\n';
}

BoxWindow window_of(const RunConfig& cfg) {
    BoxWindow w;
    w.lambda_lo = cfg.lmin;
    w.lambda_hi = cfg.lmax;
    w.x_lo = cfg.xmin;
    w.x_hi = cfg.xmax;
    w.grid = {cfg.n_lambda, cfg.n_x};
    return w;
}

int exit_for(VerdictStatus s) {
    switch (s) {
        case VerdictStatus::Unstable: return kExitUnstable;
        case VerdictStatus::SpectrumDetected: return kExitSpectrumDetected;
        default: return kExitOk;
    }
}

struct Scale {
    double lo, hi, a, b;  // data [lo, hi] -> pixels [a, b]
    double operator()(double v) const { return a + (v - lo) / (hi - lo) * (b - a); }
};

void axes(std::ostringstream& o, const Scale& X, const Scale& Y, double xlo, double xhi, double ylo,
          double yhi, const std::string& xl, const std::string& yl, const std::string& title) {
    o << "<rect x=\"" << X.a << "\" y=\"" << Y.b << "\" width=\"" << X.b - X.a << "\" height=\"" << Y.a - Y.b
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double vx = xlo + (xhi - xlo) * k / 4.0, vy = ylo + (yhi - ylo) * k / 4.0;
        o << "<text x=\"" << X(vx) << "\" y=\"" << Y.a + 16 << "\" font-size=\"11\" text-anchor=\"middle\">"
          << xml_escape(format_number(std::round(vx * 1e4) / 1e4)) << "</text>\n";
        o << "<text x=\"" << X.a - 6 << "\" y=\"" << Y(vy) + 4 << "\" font-size=\"11\" text-anchor=\"end\">"
          << xml_escape(format_number(std::round(vy * 1e4) / 1e4)) << "</text>\n";
    }
    o << "<text x=\"" << 0.5 * (X.a + X.b) << "\" y=\"" << Y.a + 36
      << "\" font-size=\"14\" text-anchor=\"middle\">" << xml_escape(xl) << "</text>\n";
    o << "<text x=\"" << X.a - 48 << "\" y=\"" << 0.5 * (Y.a + Y.b)
      << "\" font-size=\"14\" text-anchor=\"middle\">" << xml_escape(yl) << "</text>\n";
    o << "<text x=\"" << 0.5 * (X.a + X.b) << "\" y=\"" << Y.b - 10
      << "\" font-size=\"14\" text-anchor=\"middle\">" << xml_escape(title) << "</text>\n";
}

}  // namespace

void write_shelf_csv(const fs::path& file, const ShelfResult& shelf) {
    auto f = open_out(file);
    f << "t,psi1,psi2,theta\n";
    for (std::size_t i = 0; i < shelf.path.size(); ++i) {
        const double th = i < shelf.angle.theta.size() ? shelf.angle.theta[i] : NAN;
        f << format_number(shelf.path.ts[i]) << ',' << format_number(shelf.path.psi1[i]) << ','
          << format_number(shelf.path.psi2[i]) << ',' << format_number(th) << '\n';
    }
}

PsiPath read_shelf_csv(const fs::path& file) {
    std::ifstream f(file);
    if (!f) throw ConfigError("cannot read " + file.string());
    std::string line;
    std::getline(f, line);
    PsiPath p;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string a, b, c;
        std::getline(ss, a, ',');
        std::getline(ss, b, ',');
        std::getline(ss, c, ',');
        p.push(std::stod(a), {std::stod(b), std::stod(c)});
    }
    return p;
}

std::string box_svg(const BoxResult& box, const CurveSet& curves, const std::string& title) {
    const double W = 640, H = 480, ml = 70, mr = 20, mt = 30, mb = 50;
    const Scale X{box.lambda_lo, box.lambda_hi, ml, W - mr};
    const Scale Y{box.x_lo, box.x_hi, H - mb, mt};
    std::ostringstream o;
    o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 "
      << W << ' ' << H << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    const auto& F = box.field;
    const std::size_t nl = F.lambdas.size(), nx = F.xs.size();
    if (nl > 1 && nx > 1) {
        const double cw = (X.b - X.a) / double(nl - 1), ch = (Y.a - Y.b) / double(nx - 1);
        for (std::size_t i = 0; i < nl; ++i) {
            for (std::size_t j = 0; j < nx; ++j) {
                if (F.at1(i, j) >= 0) continue;
                o << "<rect x=\"" << X(F.lambdas[i]) - cw / 2 << "\" y=\"" << Y(F.xs[j]) - ch / 2 << "\" width=\""
                  << cw << "\" height=\"" << ch << "\" fill=\"#dde6f5\" stroke=\"none\"/>\n";
            }
        }
    }
    for (const auto& c : curves.curves) {
        o << "<polyline fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1.5\" points=\"";
        for (const auto& p : c.points) o << X(p.lambda) << ',' << Y(p.x) << ' ';
        o << "\"/>\n";
    }
    for (const auto& l : curves.loss_points) {
        o << "<circle cx=\"" << X(l.lambda) << "\" cy=\"" << Y(l.x) << "\" r=\"4\" fill=\"black\"/>\n";
    }
    axes(o, X, Y, box.lambda_lo, box.lambda_hi, box.x_lo, box.x_hi, "λ", "x", title);
    o << "</svg>\n";
    return o.str();
}

std::string line_svg(const std::vector<double>& xs, const std::vector<double>& ys, const std::string& xlabel,
                     const std::string& ylabel, const std::string& title) {
    const double W = 640, H = 400, ml = 70, mr = 20, mt = 30, mb = 50;
    double ylo = *std::min_element(ys.begin(), ys.end()), yhi = *std::max_element(ys.begin(), ys.end());
    if (ylo == yhi) {
        ylo -= 1;
        yhi += 1;
    }
    const Scale X{xs.front(), xs.back(), ml, W - mr};
    const Scale Y{ylo, yhi, H - mb, mt};
    std::ostringstream o;
    o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 "
      << W << ' ' << H << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) o << X(xs[i]) << ',' << Y(ys[i]) << ' ';
    o << "\"/>\n";
    axes(o, X, Y, xs.front(), xs.back(), ylo, yhi, xlabel, ylabel, title);
    o << "</svg>\n";
    return o.str();
}

// ------------------------------------------------------------ commands ----

int cmd_wave(const RunConfig& cfg, std::ostream& log) {
    const BuiltModel b = build_model(cfg);
    ensure_dir(cfg.out);
    std::vector<double> xs, us;
    auto f = open_out(cfg.out / "wave.csv");
    f << "x,u,u1,u2\n";
    for (std::size_t j = 0; j < cfg.n_x; ++j) {
        const double x = cfg.xmin + (cfg.xmax - cfg.xmin) * j / double(cfg.n_x - 1);
        const WaveJet w = b.kdvb ? b.kdvb->jet(x) : b.gkdv.jet(x);
        f << format_number(x) << ',' << format_number(w.u) << ',' << format_number(w.u1) << ','
          << format_number(w.u2) << '\n';
        xs.push_back(x);
        us.push_back(w.u);
    }
    if (cfg.svg) {
        auto s = open_out(cfg.out / "wave.svg");
        s << line_svg(xs, us, "x", "u", "wave profile (" + cfg.model + ")");
    }
    log << "wave: " << cfg.n_x << " samples written to " << (cfg.out / "wave.csv").string() << '\n';
    return kExitOk;
}

int cmd_box(const RunConfig& cfg, std::ostream& log) {
    const BuiltModel b = build_model(cfg);
    ensure_dir(cfg.out);
    const BoxWindow w = window_of(cfg);
    const BoxResult box = maslov_box(b.sys, w.lambda_lo, w.lambda_hi, w.x_lo, w.x_hi, w.grid, b.trunc);
    CurveSet curves;
    const bool intact = box.m.has_value();
    if (intact) curves = trace_spectral_curves(b.sys, box, b.trunc);

    write_shelf_csv(cfg.out / "shelf_bottom.csv", box.bottom);
    write_shelf_csv(cfg.out / "shelf_right.csv", box.right);
    write_shelf_csv(cfg.out / "shelf_top.csv", box.top);
    write_shelf_csv(cfg.out / "shelf_left.csv", box.left);
    {
        auto f = open_out(cfg.out / "crossings.csv");
        f << "shelf,location,direction,kind\n";
        const std::pair<const char*, const ShelfResult*> shelves[] = {
            {"bottom", &box.bottom}, {"right", &box.right}, {"top", &box.top}, {"left", &box.left}};
        for (const auto& [name, s] : shelves) {
            for (const auto& e : s->crossings) {
                f << name << ',' << format_number(e.location) << ',' << e.direction << ',' << kind_name(e.kind)
                  << '\n';
            }
        }
    }
    {
        auto f = open_out(cfg.out / "curves.csv");
        f << "curve,lambda,x,psi2_sign\n";
        for (std::size_t k = 0; k < curves.curves.size(); ++k) {
            for (const auto& p : curves.curves[k].points) {
                f << k << ',' << format_number(p.lambda) << ',' << format_number(p.x) << ',' << p.psi2_sign << '\n';
            }
        }
    }
    if (cfg.svg) {
        auto s = open_out(cfg.out / "box.svg");
        s << box_svg(box, curves, "Maslov box (" + cfg.model + ")");
    }
    json j;
    j["record"] = "box";
    j["model"] = cfg.model;
    j["lambda_window"] = {cfg.lmin, cfg.lmax};
    j["x_window"] = {cfg.xmin, cfg.xmax};
    j["bottom"] = shelf_json(box.bottom);
    j["right"] = shelf_json(box.right);
    j["top"] = shelf_json(box.top);
    j["left"] = shelf_json(box.left);
    j["m"] = intact ? json(*box.m) : json(nullptr);
    json cj = json::array();
    for (const auto& c : curves.curves) {
        cj.push_back({{"entry", shelf_name(c.entry)},
                      {"exit", shelf_name(c.exit)},
                      {"lambda_min", c.lambda_min},
                      {"points", c.points.size()},
                      {"closed", c.closed}});
    }
    j["curves"] = cj;
    json lj = json::array();
    for (const auto& l : curves.loss_points) lj.push_back({l.lambda, l.x});
    j["loss_points"] = lj;
    append_jsonl(cfg.out / "verdict.json", j);

    log << "box: bottom " << box.bottom.index << ", right " << box.right.index << ", top " << box.top.index
        << ", left " << box.left.index << "; m = ";
    if (intact) log << *box.m;
    else log << "undefined";
    log << "; " << curves.curves.size() << " curves, " << curves.loss_points.size() << " loss points\n";
    if (!intact) {
        log << "spectrum detected: invariance lost on the box boundary\n";
        return kExitSpectrumDetected;
    }
    return kExitOk;
}

int cmd_evans(const RunConfig& cfg, std::ostream& log) {
    const BuiltModel b = build_model(cfg);
    ensure_dir(cfg.out);
    std::vector<double> ls, ds;
    {
        auto f = open_out(cfg.out / "evans.csv");
        f << "lambda,D\n";
        for (std::size_t i = 0; i < cfg.n_lambda; ++i) {
            const double l = cfg.lmin + (cfg.lmax - cfg.lmin) * i / double(cfg.n_lambda - 1);
            const double d = evans_at(b.sys, l, 0.0, b.trunc).value;
            f << format_number(l) << ',' << format_number(d) << '\n';
            ls.push_back(l);
            ds.push_back(d);
        }
    }
    json j;
    j["record"] = "evans";
    j["model"] = cfg.model;
    int sign_changes = 0;
    for (std::size_t i = 1; i < ds.size(); ++i) {
        if (ds[i - 1] != 0 && ds[i] != 0 && (ds[i - 1] < 0) != (ds[i] < 0)) ++sign_changes;
    }
    j["sign_changes"] = sign_changes;
    if (cfg.lmax == 0.0) {
        const DerivativeReport d = evans_dprime0(b.sys, b.trunc);
        j["d0"] = d.d0;
        j["d1"] = d.d1;
        log << "evans: D(0) = " << format_number(d.d0) << ", D'(0) = " << format_number(d.d1);
        const double x_far = far_point(b.sys, b.trunc);
        const AsymptoticSpectrum spec = spectral_data(b.sys, 0.0);
        const ShootingPath eta = integrate_eta_minus(b.sys, 0.0, b.trunc, x_far, &spec);
        const double p2 = psi_pair_at(eta.at(x_far), spec).psi2;
        const int p2s = (p2 > 0) - (p2 < 0);
        if (cfg.model == "gkdv") {
            const int sgn = evans_d2prime0_gkdv_sign(b.gkdv);
            j["d2_closed_form"] = evans_d2prime0_gkdv(b.gkdv);
            j["d2_finite_difference"] = evans_d2prime0_fd(b.sys, b.trunc);
            j["d2_sign"] = sgn;
            log << ", sgn D''(0) = " << sgn;
            if (sgn != 0) j["corner"] = corner_increment(sgn, 2, p2s);
        } else {
            const int sgn = (d.d1 > 0) - (d.d1 < 0);
            j["d1_finite_difference"] = evans_dprime0_fd(b.sys, b.trunc);
            if (sgn != 0) j["corner"] = corner_increment(sgn, 1, p2s);
        }
        if (j.contains("corner")) log << ", corner increment " << j["corner"].get<int>();
        log << '\n';
    }
    log << "evans: " << sign_changes << " sign change(s) of D on the lambda grid\n";
    if (cfg.svg) {
        auto s = open_out(cfg.out / "evans.svg");
        s << line_svg(ls, ds, "λ", "D", "Evans function (" + cfg.model + ")");
    }
    append_jsonl(cfg.out / "verdict.json", j);
    return kExitOk;
}

int cmd_verdict(const RunConfig& cfg, std::ostream& log) {
    const BuiltModel b = build_model(cfg);
    ensure_dir(cfg.out);
    const BoxWindow w = window_of(cfg);
    StabilityReport r;
    if (cfg.model == "gkdv") {
        if (cfg.p == 4.0) throw ConfigError("gkdv p = 4 is the degenerate borderline case");
        r = gkdv_verdict(b.gkdv, w, b.trunc);
    } else {
        r = kdvb_verdict(*b.kdvb, w, b.trunc);
    }
    json j;
    j["record"] = "verdict";
    j["model"] = cfg.model;
    j["status"] = verdict_name(r.status);
    j["message"] = r.message;
    j["right_full"] = r.right_full ? json(*r.right_full) : json(nullptr);
    j["left_full"] = r.left_full;
    j["bottom"] = r.box.bottom.index;
    j["m"] = r.box.m ? json(*r.box.m) : json(nullptr);
    j["corner"] = r.corner;
    j["derivative_order"] = r.derivative_order;
    j["derivative_sign"] = r.derivative_sign;
    j["bound"] = r.bound ? json(*r.bound) : json(nullptr);
    json ev = json::array();
    for (const auto& e : r.eigenvalues) ev.push_back({{"lambda", e.location}, {"direction", e.direction}});
    j["eigenvalues"] = ev;
    json lj = json::array();
    for (const auto& l : r.curves.loss_points) lj.push_back({l.lambda, l.x});
    j["loss_points"] = lj;
    append_jsonl(cfg.out / "verdict.json", j);

    log << "verdict (" << cfg.model << "): " << r.message << '\n';
    log << "  right shelf, full line: ";
    if (r.right_full) log << *r.right_full;
    else log << "undefined";
    log << "\n  left shelf, full line:  " << r.left_full << "\n  bottom shelf:           " << r.box.bottom.index
        << "\n  m:                      ";
    if (r.box.m) log << *r.box.m;
    else log << "undefined";
    log << "\n  corner increment:       " << r.corner << "\n  bound:                  ";
    if (r.bound) log << "N >= " << *r.bound;
    else log << "unavailable";
    log << '\n';
    if (!r.curves.loss_points.empty()) {
        log << "  " << r.curves.loss_points.size()
            << " isolated invariance-loss point(s); m is then even, here " << (r.box.m ? *r.box.m : 0) << '\n';
    }
    return exit_for(r.status);
}

}  // namespace maslov::tracer
