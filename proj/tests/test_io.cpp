#include <doctest.h>

#include "polykin/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace polykin;

namespace {

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::vector<std::string> lines;
    std::string l;
    while (std::getline(in, l)) lines.push_back(l);
    return lines;
}

} // namespace

TEST_CASE("stress csv layout") {
    const std::string dir = (std::filesystem::temp_directory_path() / "polykin_io_test").string();
    io::ensure_directory(dir);
    StressField st;
    st.y = {0.5, 1.5};
    st.tau = {Mat2{1.0, 0.25, 0.25, -1.0}, Mat2{}};
    st.p_p = {2.0, 2.0};
    st.N = {2.0, 2.0};
    const std::string path = dir + "/stress.csv";
    io::write_stress_csv(path, st);
    const auto lines = read_lines(path);
    REQUIRE(lines.size() == 4);
    CHECK(lines[0].rfind("# units:", 0) == 0);
    CHECK(lines[1] == "y,tau_xx,tau_xy,tau_yy,p_p,N");
    CHECK(lines[2] == "0.5,1,0.25,-1,2,2");

    // round-trip precision of a non-representable value
    st.y = {1.0 / 3.0};
    st.tau = {Mat2{}};
    st.p_p = {0.0};
    st.N = {0.0};
    io::write_stress_csv(path, st);
    std::istringstream cell(read_lines(path)[2].substr(0, read_lines(path)[2].find(',')));
    double y = 0.0;
    cell >> y;
    CHECK(y == 1.0 / 3.0);
}

TEST_CASE("profile csv layout") {
    const std::string dir = (std::filesystem::temp_directory_path() / "polykin_io_test").string();
    io::ensure_directory(dir);
    FieldProfile p;
    p.ny = 2;
    p.Ly = 2.0;
    p.N = {1.0, 1.0};
    p.phi = {0.1, 0.1};
    p.v_s = {Vec2{0.2, 0.0}, Vec2{0.3, 0.0}};
    p.v_p = p.v_s;
    p.u = p.v_s;
    p.p_s = {0.0, 0.0};
    p.p_p = {1.0, 1.0};
    p.p = {1.0, 1.0};
    p.tau = {Mat2{}, Mat2{}};
    p.defined = {1, 1};
    const std::string path = dir + "/profiles.csv";
    io::write_profile_csv(path, {p}, {0.5});
    const auto lines = read_lines(path);
    REQUIRE(lines.size() == 4);
    CHECK(lines[1] == "t,y,N,phi,vs_x,vs_y,vp_x,vp_y,u_x,tau_xx,tau_xy,tau_yy,p_p,p");
    std::istringstream row(lines[2]);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(row, cell, ',')) vals.push_back(std::stod(cell));
    REQUIRE(vals.size() == 14);
    CHECK(vals[0] == 0.5);  // t
    CHECK(vals[1] == 0.5);  // y of the first cell
    CHECK(vals[3] == 0.1);  // phi round-trips exactly
    CHECK(vals[4] == 0.2);  // vs_x
    CHECK_THROWS_AS(io::write_profile_csv(path, {p}, {0.5, 1.0}), std::invalid_argument);
}

TEST_CASE("ensemble csv layouts and json output") {
    const std::string dir = (std::filesystem::temp_directory_path() / "polykin_io_test").string();
    io::ensure_directory(dir);

    EnsembleInertial ei;
    ei.time = 1.5;
    ei.p.resize(2);
    ei.p[0].r1 = {0.0, 1.0};
    io::write_ensemble_csv(dir + "/beads.csv", ei);
    auto lines = read_lines(dir + "/beads.csv");
    REQUIRE(lines.size() == 4);
    CHECK(lines[1] == "t,particle,r1x,r1y,r2x,r2y,V1x,V1y,V2x,V2y");
    CHECK(lines[2].rfind("1.5,0,0,1,", 0) == 0);

    EnsembleInertialess es;
    es.time = 2.0;
    es.x = {Vec2{0.5, 0.25}};
    es.q = {Vec2{-1.0, 0.0}};
    io::write_ensemble_csv(dir + "/config.csv", es);
    lines = read_lines(dir + "/config.csv");
    REQUIRE(lines.size() == 3);
    CHECK(lines[1] == "t,particle,x,y,qx,qy");
    CHECK(lines[2] == "2,0,0.5,0.25,-1,0");

    io::write_json(dir + "/meta.json", nlohmann::json{{"a", 1}});
    std::ifstream in(dir + "/meta.json");
    nlohmann::json j;
    in >> j;
    CHECK(j.at("a") == 1);
}
