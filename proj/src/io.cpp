#include "polykin/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace polykin::io {

namespace {

std::FILE* open_or_throw(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("io: cannot open \"" + path + "\" for writing");
    return f;
}

struct FileCloser {
    std::FILE* f;
    ~FileCloser() {
        if (f) std::fclose(f);
    }
};

} // namespace

void ensure_directory(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("io: cannot create directory \"" + dir + "\": " + ec.message());
}

void write_stress_csv(const std::string& path, const StressField& st) {
    std::FILE* f = open_or_throw(path);
    FileCloser guard{f};
    std::fprintf(f, "# units: y [m], tau_* [Pa], p_p [Pa], N [1/m^2]\n");
    std::fprintf(f, "y,tau_xx,tau_xy,tau_yy,p_p,N\n");
    for (std::size_t i = 0; i < st.y.size(); ++i)
        std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", st.y[i], st.tau[i].xx,
                     st.tau[i].xy, st.tau[i].yy, st.p_p[i], st.N[i]);
}

void write_profile_csv(const std::string& path, const std::vector<FieldProfile>& snapshots,
                       const std::vector<double>& times) {
    if (snapshots.size() != times.size())
        throw std::invalid_argument("write_profile_csv: snapshots/times size mismatch");
    std::FILE* f = open_or_throw(path);
    FileCloser guard{f};
    std::fprintf(f, "# units: t [s], y [m], N [1/m^2], phi [-], v* u* [m/s], tau_* p* [Pa]\n");
    std::fprintf(f, "t,y,N,phi,vs_x,vs_y,vp_x,vp_y,u_x,tau_xx,tau_xy,tau_yy,p_p,p\n");
    for (std::size_t s = 0; s < snapshots.size(); ++s) {
        const FieldProfile& p = snapshots[s];
        for (int i = 0; i < p.ny; ++i)
            std::fprintf(f,
                         "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                         "%.17g,%.17g,%.17g\n",
                         times[s], (i + 0.5) * p.hy(), p.N[i], p.phi[i], p.v_s[i].x, p.v_s[i].y,
                         p.v_p[i].x, p.v_p[i].y, p.u[i].x, p.tau[i].xx, p.tau[i].xy, p.tau[i].yy,
                         p.p_p[i], p.p[i]);
    }
}

void write_ensemble_csv(const std::string& path, const EnsembleInertial& ens) {
    std::FILE* f = open_or_throw(path);
    FileCloser guard{f};
    std::fprintf(f, "# units: t [s], r* [m], V* [m/s]\n");
    std::fprintf(f, "t,particle,r1x,r1y,r2x,r2y,V1x,V1y,V2x,V2y\n");
    for (std::size_t i = 0; i < ens.p.size(); ++i) {
        const DumbbellStateInertial& d = ens.p[i];
        std::fprintf(f, "%.17g,%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", ens.time,
                     i, d.r1.x, d.r1.y, d.r2.x, d.r2.y, d.V1.x, d.V1.y, d.V2.x, d.V2.y);
    }
}

void write_ensemble_csv(const std::string& path, const EnsembleInertialess& ens) {
    std::FILE* f = open_or_throw(path);
    FileCloser guard{f};
    std::fprintf(f, "# units: t [s], x y qx qy [m]\n");
    std::fprintf(f, "t,particle,x,y,qx,qy\n");
    for (std::size_t i = 0; i < ens.x.size(); ++i)
        std::fprintf(f, "%.17g,%zu,%.17g,%.17g,%.17g,%.17g\n", ens.time, i, ens.x[i].x,
                     ens.x[i].y, ens.q[i].x, ens.q[i].y);
}

void write_json(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("io: cannot open \"" + path + "\" for writing");
    out << j.dump(2) << '\n';
}

} // namespace polykin::io
