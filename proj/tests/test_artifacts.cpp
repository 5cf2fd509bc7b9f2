#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <sstream>
#include <string>
#include <vector>

#include "poropinn/artifacts.hpp"
#include "poropinn/loss.hpp"

using namespace poropinn;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) out.push_back(line);
    return out;
}

int commas(const std::string& s) {
    int n = 0;
    for (char c : s)
        if (c == ',') ++n;
    return n;
}

}  // namespace

TEST_CASE("loss history csv has one row per entry and 13 columns") {
    LossHistoryEntry a{0, {}}, b{100, {}};
    a.breakdown.pde = 1.5;
    a.breakdown.total = 2.25;
    b.breakdown.bc_t = 0.125;
    b.breakdown.total = 0.0625;
    std::ostringstream os;
    write_loss_history_csv(os, {a, b});
    const auto lines = lines_of(os.str());
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] ==
          "iteration,total,pde,bc_u,bc_t,bc_p,bc_f,ic_u,ic_p,int_u,int_sigma,int_p,int_q");
    CHECK(commas(lines[1]) == 12);
    CHECK(lines[1].rfind("0,2.25,1.5,", 0) == 0);
    CHECK(lines[2].rfind("100,0.0625,0,0,0.125,", 0) == 0);
}

TEST_CASE("doubles in csv output survive a parse round trip") {
    LossHistoryEntry e{7, {}};
    e.breakdown.total = 0.1 + 0.2;  // not representable exactly; must round-trip anyway
    e.breakdown.int_q = 1.0 / 3.0;
    std::ostringstream os;
    write_loss_history_csv(os, {e});
    const auto lines = lines_of(os.str());
    const std::string& row = lines[1];
    const std::size_t first = row.find(',');
    const std::size_t second = row.find(',', first + 1);
    CHECK(std::stod(row.substr(first + 1, second - first - 1)) == 0.1 + 0.2);
    CHECK(std::stod(row.substr(row.rfind(',') + 1)) == 1.0 / 3.0);
}

TEST_CASE("error field csv uses the fixed eight-column schema") {
    ErrorRecord r;
    r.x = 0.25;
    r.t = 0.5;
    r.u_pred = 1.0;
    r.p_pred = 2.0;
    r.u_exact = 0.5;
    r.p_exact = 2.5;
    r.abs_err_u = 0.5;
    r.abs_err_p = 0.5;
    std::ostringstream os;
    write_error_field_csv(os, {r, r});
    const auto lines = lines_of(os.str());
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "x,t,u_pred,p_pred,u_exact,p_exact,abs_err_u,abs_err_p");
    CHECK(lines[1] == "0.25,0.5,1,2,0.5,2.5,0.5,0.5");
    CHECK(lines[1] == lines[2]);
}

TEST_CASE("sweep csv tabulates layers and width first") {
    std::ostringstream os;
    write_sweep_csv(os, {{1, 5, 0.5, 0.25}, {3, 40, 0.125, 0.0625}});
    const auto lines = lines_of(os.str());
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "layers,width,rmse_u,rmse_p");
    CHECK(lines[1] == "1,5,0.5,0.25");
    CHECK(lines[2] == "3,40,0.125,0.0625");
}

TEST_CASE("metrics round-trip through the key=value reader") {
    RunMetrics m;
    m.rmse_u = 2.6e-4;
    m.rmse_p = 1.0 / 7.0;
    m.max_abs_err_u = 0.875;
    m.max_abs_err_p = 1.5;
    m.final_loss = 1e-6;
    m.wall_time_s = 12.5;
    m.iterations = 70000;
    m.seed = 18446744073709551615ull;  // uint64 max must not truncate
    std::ostringstream os;
    write_metrics(os, m);

    const auto lines = lines_of(os.str());
    REQUIRE(lines.size() == 8);
    CHECK(lines[0].rfind("rmse_u=", 0) == 0);
    CHECK(lines[5].rfind("wall_time_s=", 0) == 0);

    std::istringstream is(os.str());
    const auto kv = read_key_values(is);
    REQUIRE(kv.size() == 8);
    CHECK(std::stod(kv.at("rmse_u")) == 2.6e-4);
    CHECK(std::stod(kv.at("rmse_p")) == 1.0 / 7.0);
    CHECK(std::stod(kv.at("final_loss")) == 1e-6);
    CHECK(kv.at("iterations") == "70000");
    CHECK(kv.at("seed") == "18446744073709551615");

    std::istringstream bad("oops");
    CHECK_THROWS_AS(read_key_values(bad), std::runtime_error);
}

TEST_CASE("heatmaps render the grid with the marker and fixed endpoints") {
    // 3 x 2 grid: columns x = {0, 0.5, 1}, rows t = {0, 1}
    std::vector<ErrorRecord> rec(6);
    for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 3; ++i) {
            rec[j * 3 + i].x = 0.5 * i;
            rec[j * 3 + i].t = j;
        }
    rec[3].abs_err_u = 2.0;  // (t=1, x=0): the maximum
    rec[5].abs_err_u = 1.0;  // (t=1, x=1): midpoint of the ramp
    rec[2].abs_err_u = 0.0;  // (t=0, x=1)

    std::ostringstream os;
    write_error_heatmap_ppm(os, rec, {3, 2}, FieldIndex::Displacement, 0.5);
    const std::string ppm = os.str();
    const std::string header = "P6\n3 2\n255\n";
    REQUIRE(ppm.rfind(header, 0) == 0);
    REQUIRE(ppm.size() == header.size() + 6 * 3);

    auto px = [&](int row, int col) {
        const std::size_t at = header.size() + 3 * (row * 3 + col);
        return std::array<int, 3>{static_cast<unsigned char>(ppm[at]),
                                  static_cast<unsigned char>(ppm[at + 1]),
                                  static_cast<unsigned char>(ppm[at + 2])};
    };
    // top row is t=1: max error at x=0 takes the hottest stop
    CHECK(px(0, 0) == std::array<int, 3>{253, 231, 37});
    // half the maximum lands exactly on the middle stop
    CHECK(px(0, 2) == std::array<int, 3>{33, 145, 140});
    // zero error is the coldest stop
    CHECK(px(1, 2) == std::array<int, 3>{68, 1, 84});
    // the interface column is dashed white near the top
    CHECK(px(0, 1) == std::array<int, 3>{255, 255, 255});
    CHECK(px(1, 1) == std::array<int, 3>{255, 255, 255});

    std::ostringstream other;
    CHECK_THROWS_AS(write_error_heatmap_ppm(other, rec, {4, 2}, FieldIndex::Pressure, 0.5),
                    std::invalid_argument);
}

TEST_CASE("an all-zero error field renders the base color everywhere off the marker") {
    std::vector<ErrorRecord> rec(4);
    std::ostringstream os;
    write_error_heatmap_ppm(os, rec, {2, 2}, FieldIndex::Pressure, 0.25);
    const std::string header = "P6\n2 2\n255\n";
    const std::string ppm = os.str();
    REQUIRE(ppm.size() == header.size() + 4 * 3);
    // dash column is round(0.25 * 1) = 0; column 1 is all base color
    for (int row = 0; row < 2; ++row) {
        const std::size_t at = header.size() + 3 * (row * 2 + 1);
        CHECK(static_cast<unsigned char>(ppm[at]) == 68);
        CHECK(static_cast<unsigned char>(ppm[at + 1]) == 1);
        CHECK(static_cast<unsigned char>(ppm[at + 2]) == 84);
    }
}
