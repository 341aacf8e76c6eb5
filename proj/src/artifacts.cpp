#include "dkg/artifacts.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dkg/errors.hpp"

namespace dkg {

std::string format_g17(double x) {
    // shortest decimal string that parses back to the same double
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

void write_series_csv(const RunSeries& series, std::ostream& os) {
    os << "t,E,E_L,K,J,L4,A_cum,l2,grad2,ut2,alpha_ut2,"
          "u2_in_R,u2_in_2R,u2_in_4R,grad2_in_2R,grad2_ann_R_2R,grad2_ann_2R_4R,"
          "grad2_out_2R,h1_out_2R,u4_in_2R,u4_out_2R\n";
    for (std::size_t k = 0; k < series.t.size(); ++k) {
        const FunctionalRecord& r = series.rec[k];
        const RestrictedIntegrals& q = r.restricted;
        const double row[] = {series.t[k],      r.E,
                              r.E_L,            r.K,
                              r.J,              r.L4,
                              series.A[k],      r.l2,
                              r.grad2,          r.ut2,
                              r.alpha_ut2,      q.u2_in_R,
                              q.u2_in_2R,       q.u2_in_4R,
                              q.grad2_in_2R,    q.grad2_ann_R_2R,
                              q.grad2_ann_2R_4R, q.grad2_out_2R,
                              q.h1_out_2R,      q.u4_in_2R,
                              q.u4_out_2R};
        for (std::size_t c = 0; c < std::size(row); ++c) {
            if (c) os << ',';
            os << format_g17(row[c]);
        }
        os << '\n';
    }
}

namespace {
constexpr const char* cache_magic = "dkg-ground-state-cache v1";
}

void write_ground_state_cache(const GroundState& gs, const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path);
    if (!f) throw ValidationError("cannot write ground-state cache at " + path.string());
    f << cache_magic << '\n';
    f << "r_max " << format_g17(gs.grid.r_max) << " n " << gs.grid.n << " tol "
      << format_g17(gs.tol) << '\n';
    f << "q0 " << format_g17(gs.q0) << " h0 " << format_g17(gs.h0) << " l2 "
      << format_g17(gs.l2) << " grad2 " << format_g17(gs.grad2) << " l4 "
      << format_g17(gs.l4) << " K " << format_g17(gs.K) << " residual "
      << format_g17(gs.residual_sup) << " graft " << format_g17(gs.graft_radius)
      << " tail " << format_g17(gs.tail_coeff) << '\n';
    for (std::size_t i = 0; i < gs.grid.n; ++i)
        f << format_g17(gs.q[i]) << ' ' << format_g17(gs.qp[i]) << '\n';
    if (!f) throw ValidationError("short write to ground-state cache at " + path.string());
}

std::optional<GroundState> load_ground_state_cache(const std::filesystem::path& path,
                                                   const RadialGrid& g, double tol) {
    std::ifstream f(path);
    if (!f) return std::nullopt;
    std::string magic;
    std::getline(f, magic);
    if (magic != cache_magic) return std::nullopt;

    std::string tag;
    double r_max = 0.0, ctol = 0.0;
    std::size_t n = 0;
    f >> tag >> r_max >> tag >> n >> tag >> ctol;
    if (!f || r_max != g.r_max || n != g.n || ctol != tol) return std::nullopt;

    GroundState gs;
    gs.grid = g;
    gs.tol = ctol;
    f >> tag >> gs.q0 >> tag >> gs.h0 >> tag >> gs.l2 >> tag >> gs.grad2 >> tag >> gs.l4 >>
        tag >> gs.K >> tag >> gs.residual_sup >> tag >> gs.graft_radius >> tag >> gs.tail_coeff;
    if (!f) return std::nullopt;
    gs.q.resize(n);
    gs.qp.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        f >> gs.q[i] >> gs.qp[i];
        if (!f) return std::nullopt;
    }
    return gs;
}

GroundState obtain_ground_state(const RadialGrid& g, double tol,
                                const std::filesystem::path& cache_path) {
    if (!cache_path.empty()) {
        if (auto gs = load_ground_state_cache(cache_path, g, tol)) return *gs;
    }
    ShootOptions opt;
    opt.tol = tol;
    GroundState gs = shoot_ground_state(g, opt);
    if (!cache_path.empty()) {
        if (cache_path.has_parent_path())
            std::filesystem::create_directories(cache_path.parent_path());
        write_ground_state_cache(gs, cache_path);
    }
    return gs;
}

} // namespace dkg
