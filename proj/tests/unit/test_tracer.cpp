#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "maslov/tracer.hpp"

using namespace maslov;
using namespace maslov::tracer;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("maslov_tracer_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(Config, Validation) {
    RunConfig cfg;
    EXPECT_NO_THROW(validate(cfg));
    cfg.lmax = 0.5;
    EXPECT_THROW(validate(cfg), ConfigError);
    cfg = {};
    cfg.model = "nls";
    EXPECT_THROW(validate(cfg), ConfigError);
    cfg = {};
    cfg.model = "kdvb";
    cfg.nu = 0.25;
    EXPECT_THROW(validate(cfg), ConfigError);
    cfg = {};
    cfg.n_lambda = 8;
    EXPECT_THROW(validate(cfg), ConfigError);
}

TEST(Config, GridParsing) {
    RunConfig cfg;
    parse_grid("65", cfg);
    EXPECT_EQ(cfg.n_lambda, 65u);
    EXPECT_EQ(cfg.n_x, 65u);
    parse_grid("33x257", cfg);
    EXPECT_EQ(cfg.n_lambda, 33u);
    EXPECT_EQ(cfg.n_x, 257u);
    EXPECT_THROW(parse_grid("12y4", cfg), ConfigError);
    EXPECT_THROW(parse_grid("", cfg), ConfigError);
}

TEST(Csv, NumberFormatRoundTrips) {
    const double v = 0.1 + 0.2;
    EXPECT_EQ(std::stod(format_number(v)), v);
}

TEST(Csv, ShelfRoundTrip) {
    const fs::path dir = scratch("csv");
    fs::create_directories(dir);
    ShelfResult shelf;
    for (int i = 0; i <= 10; ++i) shelf.path.push(0.1 * i, {1.0 / (i + 3.0), 0.5 - 0.02 * i});
    shelf.angle = lift_angle(shelf.path);
    write_shelf_csv(dir / "s.csv", shelf);
    const PsiPath back = read_shelf_csv(dir / "s.csv");
    ASSERT_EQ(back.size(), shelf.path.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        EXPECT_EQ(back.ts[i], shelf.path.ts[i]);
        EXPECT_EQ(back.psi1[i], shelf.path.psi1[i]);
        EXPECT_EQ(back.psi2[i], shelf.path.psi2[i]);
    }
    fs::remove_all(dir);
}

TEST(Commands, WaveWritesProfile) {
    RunConfig cfg;
    cfg.model = "gkdv";
    cfg.p = 2.0;
    cfg.s = 1.0;
    cfg.svg = true;
    cfg.out = scratch("wave");
    std::ostringstream log;
    EXPECT_EQ(cmd_wave(cfg, log), kExitOk);
    const std::string csv = slurp(cfg.out / "wave.csv");
    EXPECT_EQ(csv.rfind("x,u,u1,u2", 0), 0u);
    EXPECT_TRUE(fs::exists(cfg.out / "wave.svg"));
    fs::remove_all(cfg.out);
}

TEST(Commands, BoxStableCase) {
    RunConfig cfg;
    cfg.n_lambda = cfg.n_x = 33;
    cfg.svg = true;
    cfg.out = scratch("box");
    std::ostringstream log;
    EXPECT_EQ(cmd_box(cfg, log), kExitOk);
    for (const char* f : {"shelf_bottom.csv", "shelf_right.csv", "shelf_top.csv", "shelf_left.csv",
                          "crossings.csv", "curves.csv", "box.svg"}) {
        EXPECT_TRUE(fs::exists(cfg.out / f)) << f;
    }
    const std::string svg = slurp(cfg.out / "box.svg");
    EXPECT_NE(svg.find("<svg"), std::string::npos);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
    fs::remove_all(cfg.out);
}

TEST(Commands, VerdictExitCodes) {
    RunConfig cfg;
    cfg.n_lambda = cfg.n_x = 33;
    cfg.out = scratch("verdict");
    std::ostringstream log;
    cfg.p = 4.5;
    EXPECT_EQ(cmd_verdict(cfg, log), kExitUnstable);
    cfg.p = 2.0;
    EXPECT_EQ(cmd_verdict(cfg, log), kExitOk);
    const std::string json = slurp(cfg.out / "verdict.json");
    EXPECT_NE(json.find("\"unstable\""), std::string::npos);
    fs::remove_all(cfg.out);
}

TEST(Commands, EvansSweep) {
    RunConfig cfg;
    cfg.p = 4.5;
    cfg.lmin = -1.0;
    cfg.n_lambda = 64;
    cfg.out = scratch("evans");
    std::ostringstream log;
    EXPECT_EQ(cmd_evans(cfg, log), kExitOk);
    EXPECT_TRUE(fs::exists(cfg.out / "evans.csv"));
    fs::remove_all(cfg.out);
}
