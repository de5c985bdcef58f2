#include "liebdx/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "liebdx/cases.hpp"
#include "liebdx/darboux.hpp"
#include "liebdx/errors.hpp"
#include "liebdx/free_model.hpp"
#include "liebdx/lattice.hpp"
#include "liebdx/parallel.hpp"
#include "liebdx/scattering.hpp"
#include "liebdx/spectral.hpp"

namespace liebdx {

namespace {

using nlohmann::ordered_json;

std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

void atomic_write(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw ConfigError("cannot open output file: " + tmp);
        os << content;
        os.flush();
        if (!os) throw std::runtime_error("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot move output into place: " + path);
}

ordered_json mat_json(const Mat3& m) {
    ordered_json rows = ordered_json::array();
    for (int r = 0; r < 3; ++r) {
        ordered_json row = ordered_json::array();
        for (int c = 0; c < 3; ++c) row.push_back({m[r][c].real(), m[r][c].imag()});
        rows.push_back(row);
    }
    return rows;
}

// ----- config resolution -------------------------------------------------

void apply_json_config(const std::string& path, RunConfig& cfg) {
    std::ifstream is(path);
    if (!is) throw ConfigError("config file not found: " + path);
    ordered_json j;
    try {
        is >> j;
    } catch (const std::exception& ex) {
        throw ConfigError(std::string("config parse error: ") + ex.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");
    for (const auto& [key, val] : j.items()) {
        try {
            if (key == "command") {
                std::string c = val.get<std::string>();
                if (c != cfg.command)
                    throw ConfigError("config is for command '" + c + "', invoked '" +
                                      cfg.command + "'");
            } else if (key == "case") {
                cfg.case_tag = val.get<std::string>();
            } else if (key == "m") {
                cfg.m = val.get<double>();
            } else if (key == "eps") {
                cfg.eps = val.get<double>();
            } else if (key == "hv") {
                cfg.hv = val.get<double>();
            } else if (key == "ell") {
                cfg.ell = val.get<double>();
            } else if (key == "mirror") {
                cfg.mirror = val.get<bool>();
            } else if (key == "flat_chi") {
                cfg.flat_chi = val.get<std::string>();
            } else if (key == "seed") {
                cfg.seed = val.get<std::string>();
            } else if (key == "domain") {
                auto v = val.get<std::vector<double>>();
                if (v.size() != 2) throw ConfigError("domain needs exactly [lo, hi]");
                cfg.domain = std::make_pair(v[0], v[1]);
            } else if (key == "n") {
                cfg.n = val.get<int>();
            } else if (key == "nk") {
                cfg.nk = val.get<int>();
            } else if (key == "L") {
                cfg.L = val.get<double>();
            } else if (key == "energies") {
                cfg.energies = val.get<std::vector<double>>();
            } else if (key == "tau1") {
                cfg.tau1 = val.get<double>();
            } else if (key == "tau2") {
                cfg.tau2 = val.get<double>();
            } else if (key == "tau3") {
                cfg.tau3 = val.get<double>();
            } else if (key == "tau4") {
                cfg.tau4 = val.get<double>();
            } else if (key == "t3") {
                cfg.t3 = val.get<double>();
            } else if (key == "muA") {
                cfg.muA = val.get<double>();
            } else if (key == "muB") {
                cfg.muB = val.get<double>();
            } else if (key == "muC") {
                cfg.muC = val.get<double>();
            } else if (key == "a") {
                cfg.a = val.get<double>();
            } else if (key == "lambda_phase") {
                cfg.lambda_phase = val.get<double>();
            } else if (key == "out") {
                cfg.out = val.get<std::string>();
            } else if (key == "format") {
                cfg.format = val.get<std::string>();
            } else {
                throw ConfigError("unknown config key: " + key);
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& ex) {
            throw ConfigError("config key '" + key + "': " + ex.what());
        }
    }
}

CaseTag parse_tag(const std::string& s) {
    if (s == "I") return CaseTag::I;
    if (s == "II") return CaseTag::II;
    if (s == "III") return CaseTag::III;
    if (s == "IV") return CaseTag::IV;
    throw ConfigError("unknown case tag '" + s + "' (expected I, II, III or IV)");
}

const char* tag_name(CaseTag t) {
    switch (t) {
        case CaseTag::I: return "I";
        case CaseTag::II: return "II";
        case CaseTag::III: return "III";
        case CaseTag::IV: return "IV";
    }
    return "?";
}

double default_eps(CaseTag t) {
    switch (t) {
        case CaseTag::I: return 0.75;
        case CaseTag::II: return -0.25;
        case CaseTag::III: return 0.75;
        case CaseTag::IV: return 0.5;
    }
    return 0.75;
}

CaseModel resolve_case(const RunConfig& cfg) {
    CaseModel p;
    p.tag = parse_tag(cfg.case_tag.value_or("I"));
    p.m = cfg.m.value_or(1.0);
    p.hv = cfg.hv.value_or(1.0);
    p.ell = cfg.ell.value_or(1.0);
    p.mirror = cfg.mirror.value_or(false);
    p.eps = cfg.eps.value_or(default_eps(p.tag));
    p.validate();
    return p;
}

TBParams resolve_tb(const RunConfig& cfg) {
    TBParams p;
    if (cfg.tau1) p.tau1 = *cfg.tau1;
    if (cfg.tau2) p.tau2 = *cfg.tau2;
    if (cfg.tau3) p.tau3 = *cfg.tau3;
    if (cfg.tau4) p.tau4 = *cfg.tau4;
    if (cfg.t3) p.t3 = *cfg.t3;
    if (cfg.muA) p.muA = *cfg.muA;
    if (cfg.muB) p.muB = *cfg.muB;
    if (cfg.muC) p.muC = *cfg.muC;
    if (cfg.a) p.a = *cfg.a;
    if (cfg.lambda_phase) p.lambda_phase = *cfg.lambda_phase;
    if (!(p.a > 0)) throw ConfigError("lattice spacing a must be positive");
    return p;
}

std::string resolve_format(const RunConfig& cfg) {
    std::string def = (cfg.command == "verify" || cfg.command == "spectrum") ? "json" : "csv";
    std::string f = cfg.format.value_or(def);
    if (f != "csv" && f != "json") throw ConfigError("format must be csv or json");
    return f;
}

std::string resolve_out(const RunConfig& cfg, const std::string& fmt) {
    return cfg.out.value_or(cfg.command + "." + fmt);
}

std::pair<double, double> resolve_domain(const RunConfig& cfg) {
    auto d = cfg.domain.value_or(std::make_pair(-8.0, 8.0));
    if (!(d.second > d.first)) throw ConfigError("domain must satisfy lo < hi");
    return d;
}

// Seed + model assembly shared by case/verify/scatter/spectrum.
struct CaseSetup {
    CaseModel p;
    TransformedModel tm;
    bool nonflat = false;
    bool closed_form = false;  // potential comes from the printed profiles
};

CaseSetup build_setup(const RunConfig& cfg) {
    CaseSetup s;
    s.p = resolve_case(cfg);
    std::string seedkind = cfg.seed.value_or("flat");
    if (seedkind != "flat" && seedkind != "nonflat")
        throw ConfigError("seed must be 'flat' or 'nonflat'");
    std::string chi = cfg.flat_chi.value_or("cosh");
    if (chi != "cosh" && chi != "sinh") throw ConfigError("flat-chi must be 'cosh' or 'sinh'");

    if (seedkind == "nonflat") {
        if (s.p.tag != CaseTag::I)
            throw ConfigError("--seed nonflat is only defined for case I");
        s.nonflat = true;
        s.tm = transform(case1_nonflat_seed(s.p), free_hamiltonian(s.p.m, s.p.hv));
    } else if (chi == "sinh") {
        if (s.p.tag != CaseTag::I)
            throw ConfigError("--flat-chi sinh is only defined for case I");
        s.tm = transform(case1_seed(s.p, FlatChi::sinh_profile),
                         free_hamiltonian(s.p.m, s.p.hv));
    } else {
        s.tm = case_model(s.p);
        s.closed_form = true;
    }
    return s;
}

ordered_json case_params_json(const RunConfig& cfg, const CaseSetup& s) {
    ordered_json j;
    j["case"] = tag_name(s.p.tag);
    j["m"] = s.p.m;
    j["eps"] = s.p.eps;
    j["hv"] = s.p.hv;
    j["ell"] = s.p.ell;
    j["mirror"] = s.p.mirror;
    j["seed"] = cfg.seed.value_or("flat");
    j["flat_chi"] = cfg.flat_chi.value_or("cosh");
    return j;
}

}  // namespace

// ----- bands ---------------------------------------------------------------

int cmd_bands(const RunConfig& cfg) {
    TBParams p = resolve_tb(cfg);
    int nk = cfg.nk.value_or(61);
    if (nk < 2) throw ConfigError("nk must be >= 2");
    std::string fmt = resolve_format(cfg);
    std::string out = resolve_out(cfg, fmt);

    BandSurface s = band_scan(p, nk);
    double mid_lo = s.bands[0][1], mid_hi = s.bands[0][1];
    for (const auto& b : s.bands) {
        mid_lo = std::min(mid_lo, b[1]);
        mid_hi = std::max(mid_hi, b[1]);
    }
    bool flat = std::max(std::abs(mid_lo), std::abs(mid_hi)) < 1e-9;

    if (fmt == "csv") {
        std::string text = "kx,ky,e0,e_plus,e_minus\n";
        for (int iy = 0; iy < nk; ++iy)
            for (int ix = 0; ix < nk; ++ix) {
                const auto& b = s.bands[static_cast<std::size_t>(iy) * nk + ix];
                text += csv_num(s.kx[ix]) + "," + csv_num(s.ky[iy]) + "," + csv_num(b[1]) +
                        "," + csv_num(b[2]) + "," + csv_num(b[0]) + "\n";
            }
        atomic_write(out, text);
    } else {
        ordered_json j;
        j["schema"] = 1;
        j["command"] = "bands";
        j["params"] = {{"tau1", p.tau1}, {"tau2", p.tau2}, {"tau3", p.tau3}, {"tau4", p.tau4},
                       {"t3", p.t3},     {"muA", p.muA},   {"muB", p.muB},   {"muC", p.muC},
                       {"a", p.a},       {"lambda_phase", p.lambda_phase}};
        j["grid"] = {{"nk", s.nk}, {"kx", s.kx}, {"ky", s.ky}};
        // bands[b][iy][ix] with b = 0: middle, 1: upper, 2: lower.
        ordered_json bands = ordered_json::array();
        for (int b : {1, 2, 0}) {
            ordered_json sheet = ordered_json::array();
            for (int iy = 0; iy < nk; ++iy) {
                ordered_json row = ordered_json::array();
                for (int ix = 0; ix < nk; ++ix)
                    row.push_back(s.bands[static_cast<std::size_t>(iy) * nk + ix][b]);
                sheet.push_back(row);
            }
            bands.push_back(sheet);
        }
        j["bands"] = std::move(bands);
        j["flat_band"] = {{"middle_min", mid_lo}, {"middle_max", mid_hi}, {"detected", flat}};
        atomic_write(out, j.dump(1) + "\n");
    }
    std::printf("middle band in [%.3e, %.3e]: %s\n", mid_lo, mid_hi,
                flat ? "flat band detected" : "no flat band");
    std::printf("wrote %s\n", out.c_str());
    return 0;
}

// ----- case ------------------------------------------------------------------

int cmd_case(const RunConfig& cfg) {
    CaseSetup s = build_setup(cfg);
    auto domain = resolve_domain(cfg);
    int n = cfg.n.value_or(1601);
    if (n < 2) throw ConfigError("n must be >= 2");
    std::string fmt = resolve_format(cfg);
    std::string out = resolve_out(cfg, fmt);

    RegularityReport reg = regularity_scan(s.tm.seed, domain, n);
    if (!reg.pass) {
        std::fprintf(stderr,
                     "regularity scan failed: |det U| ratio %.3e at x = %.6g (threshold 1e-10)\n",
                     reg.min_ratio, reg.argmin_ratio);
        return 3;
    }

    std::vector<std::string> names{"x"};
    for (int r = 1; r <= 3; ++r)
        for (int c = 1; c <= 3; ++c) {
            names.push_back("V" + std::to_string(r) + std::to_string(c) + "_re");
            names.push_back("V" + std::to_string(r) + std::to_string(c) + "_im");
        }
    for (const auto& pr : s.tm.profiles) names.push_back(pr.first);
    for (int j = 1; j <= 3; ++j)
        for (char comp : {'A', 'B', 'C'})
            names.push_back("ms" + std::to_string(j) + "_" + comp + "_abs");

    const double h = (domain.second - domain.first) / (n - 1);
    std::vector<std::vector<double>> rows(n);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
        double x = domain.first + h * i;
        std::vector<double> row;
        row.reserve(names.size());
        row.push_back(x);
        Mat3 v = s.tm.model.potential(x);
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) {
                row.push_back(v[r][c].real());
                row.push_back(v[r][c].imag());
            }
        for (const auto& pr : s.tm.profiles) row.push_back(pr.second(x));
        for (int j = 0; j < 3; ++j) {
            Vec3 ms = s.tm.missing_states[j].value_at(x);
            for (int c = 0; c < 3; ++c) row.push_back(std::abs(ms[c]));
        }
        rows[i] = std::move(row);
    });

    HermiticityReport herm =
        hermiticity_report(s.tm.seed, free_hamiltonian(s.p.m, s.p.hv), domain, n, 1e-12);

    if (fmt == "csv") {
        std::string text;
        char head[160];
        std::snprintf(head, sizeof head, "# hermiticity: max_defect=%.16e at x=%.16e pass=%d\n",
                      herm.max_defect, herm.x_at_max, herm.pass ? 1 : 0);
        text += head;
        for (std::size_t c = 0; c < names.size(); ++c)
            text += names[c] + (c + 1 < names.size() ? "," : "\n");
        for (const auto& row : rows) {
            for (std::size_t c = 0; c < row.size(); ++c)
                text += csv_num(row[c]) + (c + 1 < row.size() ? "," : "\n");
        }
        atomic_write(out, text);
    } else {
        ordered_json j;
        j["schema"] = 1;
        j["command"] = "case";
        j["params"] = case_params_json(cfg, s);
        j["domain"] = {domain.first, domain.second};
        j["n"] = n;
        j["spectrum"] = s.tm.point_spectrum;
        j["missing_state_labels"] = s.tm.seed.lambda();
        j["regularity"] = {{"min_ratio", reg.min_ratio},
                           {"x", reg.argmin_ratio},
                           {"pass", reg.pass}};
        j["hermiticity"] = {{"max_defect", herm.max_defect},
                            {"x", herm.x_at_max},
                            {"tol", herm.tol},
                            {"pass", herm.pass}};
        j["columns"] = names;
        ordered_json data = ordered_json::array();
        for (const auto& row : rows) data.push_back(row);
        j["data"] = std::move(data);
        atomic_write(out, j.dump(1) + "\n");
    }

    std::printf("hermiticity: max defect %.3e at x = %.6g -> %s\n", herm.max_defect,
                herm.x_at_max, herm.pass ? "pass" : "FAIL");
    std::printf("wrote %s\n", out.c_str());
    return 0;
}

// ----- verify ---------------------------------------------------------------

int cmd_verify(const RunConfig& cfg) {
    CaseSetup s = build_setup(cfg);
    auto domain = resolve_domain(cfg);
    int n = cfg.n.value_or(1601);
    if (n < 2) throw ConfigError("n must be >= 2");
    std::string fmt = resolve_format(cfg);
    std::string out = resolve_out(cfg, fmt);
    DiracModel base = free_hamiltonian(s.p.m, s.p.hv);

    struct Check {
        std::string name;
        double value;
        double threshold;
        bool pass;
    };
    std::vector<Check> checks;

    RegularityReport reg = regularity_scan(s.tm.seed, domain, n);
    checks.push_back({"regularity", reg.min_ratio, 1e-10, reg.pass});
    const bool regular = reg.pass;

    if (regular) {
        HermiticityReport herm = hermiticity_report(s.tm.seed, base, domain, n, 1e-12);
        checks.push_back({"hermiticity", herm.max_defect, 1e-12, herm.pass});

        if (s.closed_form) {
            double dev = oracle_crosscheck(s.p, domain, std::min(n, 801));
            checks.push_back({"closed_form_deviation", dev, 1e-10, dev < 1e-10});
        }

        // Intertwining residual over a spread of base eigensolutions: gap
        // states of both parities, threshold states, and flat-band packets.
        {
            std::vector<SpinorFunction> probes;
            const double m = s.p.m, hv = s.p.hv;
            const double fracs[] = {0.31, -0.47, 0.62, -0.83, 0.11, -0.59};
            for (int i = 0; i < 6; ++i) {
                Parity par = (i % 2 == 0) ? Parity::even_A : Parity::odd_A;
                probes.push_back(gap_solution(fracs[i] * m, m, hv, par));
            }
            using quad::qcplx;
            probes.push_back(threshold_solution(+1, qcplx(1), qcplx(0), m, hv));
            probes.push_back(threshold_solution(+1, qcplx(0), qcplx(1), m, hv));
            probes.push_back(threshold_solution(-1, qcplx(1), qcplx(0), m, hv));
            probes.push_back(threshold_solution(-1, qcplx(0), qcplx(1), m, hv));
            probes.push_back(flat_band_solution(profile_gauss_plane(0.4, 3.0), m, hv));
            probes.push_back(flat_band_solution(profile_cosh(0.37), m, hv));
            double worst = 0.0;
            for (const auto& pr : probes)
                worst = std::max(worst,
                                 intertwining_residual(base, s.tm.seed, pr, domain,
                                                       std::min(n, 801)));
            checks.push_back({"intertwining_residual", worst, 1e-9, worst < 1e-9});
        }

        {
            Grid grid{domain.first, domain.second, std::min(n, 1601)};
            double worst = 0.0;
            for (int j = 0; j < 3; ++j)
                worst = std::max(worst, eigen_residual(s.tm.model, s.tm.missing_states[j],
                                                       s.tm.seed.lambda()[j], grid));
            checks.push_back({"missing_state_eigen_residual", worst, 1e-8, worst < 1e-8});
        }

        if (s.p.tag == CaseTag::I && s.closed_form) {
            const Mat3& chir = spin_generators().s;
            double worst = 0.0;
            const int nc = std::min(n, 401);
            for (int i = 0; i < nc; ++i) {
                double x = domain.first + (domain.second - domain.first) * i / (nc - 1);
                worst = std::max(worst,
                                 mat_max_abs(anticommutator(chir, s.tm.model.potential(x))));
            }
            checks.push_back({"chiral_anticommutation", worst, 1e-12, worst < 1e-12});
        }

        if (s.p.tag == CaseTag::IV) {
            double worst = 0.0;
            const int nc = std::min(n, 401);
            for (int i = 0; i < nc; ++i) {
                double x = domain.first + (domain.second - domain.first) * i / (nc - 1);
                Mat3 v = s.tm.model.potential(x);
                for (int kidx = 0; kidx < 3; ++kidx)
                    worst = std::max({worst, std::abs(v[2][kidx]), std::abs(v[kidx][2])});
            }
            checks.push_back({"block_structure", worst, 1e-12, worst < 1e-12});
        }
    }

    bool all_pass = true;
    for (const auto& c : checks) all_pass = all_pass && c.pass;

    ordered_json j;
    j["schema"] = 1;
    j["command"] = "verify";
    j["params"] = case_params_json(cfg, s);
    j["domain"] = {domain.first, domain.second};
    j["n"] = n;
    ordered_json arr = ordered_json::array();
    for (const auto& c : checks)
        arr.push_back({{"check", c.name},
                       {"value", c.value},
                       {"threshold", c.threshold},
                       {"pass", c.pass}});
    j["checks"] = std::move(arr);
    j["pass"] = all_pass;

    if (fmt == "json") {
        atomic_write(out, j.dump(1) + "\n");
    } else {
        std::string text = "check,value,threshold,pass\n";
        for (const auto& c : checks)
            text += c.name + "," + csv_num(c.value) + "," + csv_num(c.threshold) + "," +
                    (c.pass ? "1" : "0") + "\n";
        atomic_write(out, text);
    }

    for (const auto& c : checks)
        std::printf("[%s] %s value=%.3e threshold=%.1e\n", c.pass ? "pass" : "FAIL",
                    c.name.c_str(), c.value, c.threshold);
    std::printf("wrote %s\n", out.c_str());
    if (!regular) return 3;
    return all_pass ? 0 : 1;
}

// ----- scatter ----------------------------------------------------------------

int cmd_scatter(const RunConfig& cfg) {
    CaseSetup s = build_setup(cfg);
    double L = cfg.L.value_or(30.0);
    std::vector<double> energies =
        cfg.energies.value_or(std::vector<double>{1.1, 1.5, 2.0, 3.0, 5.0});
    if (energies.empty()) throw ConfigError("scatter needs at least one energy");
    std::string fmt = resolve_format(cfg);
    std::string out = resolve_out(cfg, fmt);

    ScatterScan scan = scatter_scan(s.tm.model, energies, L);

    Mat3 wm{}, wp{};
    bool has_w = false;
    try {
        auto ws = asymptotic_w(s.tm.seed, L);
        wm = ws.first;
        wp = ws.second;
        has_w = true;
    } catch (const NoAsymptote& ex) {
        std::fprintf(stderr, "asymptotic W not attached: %s\n", ex.what());
    } catch (const SingularSeed& ex) {
        // Seeds with exponentially split columns underflow the determinant
        // guard far out; the scattering data itself never touches the seed.
        std::fprintf(stderr, "asymptotic W not attached: %s\n", ex.what());
    }
    for (auto& r : scan.results) {
        r.w_minus = wm;
        r.w_plus = wp;
        r.has_w = has_w;
    }
    for (const auto& [e, msg] : scan.errors)
        std::fprintf(stderr, "energy %.6g failed: %s\n", e, msg.c_str());

    if (fmt == "csv") {
        std::string text = "energy,reflection,transmission,k_left,k_right\n";
        for (const auto& r : scan.results)
            text += csv_num(r.energy) + "," + csv_num(r.reflection) + "," +
                    csv_num(r.transmission) + "," + csv_num(r.k_left) + "," +
                    csv_num(r.k_right) + "\n";
        atomic_write(out, text);
    } else {
        ordered_json j;
        j["schema"] = 1;
        j["command"] = "scatter";
        j["params"] = case_params_json(cfg, s);
        j["L"] = L;
        ordered_json arr = ordered_json::array();
        for (const auto& r : scan.results)
            arr.push_back({{"energy", r.energy},
                           {"reflection", r.reflection},
                           {"transmission", r.transmission},
                           {"k_left", r.k_left},
                           {"k_right", r.k_right}});
        j["results"] = std::move(arr);
        ordered_json errs = ordered_json::array();
        for (const auto& [e, msg] : scan.errors) errs.push_back({{"energy", e}, {"error", msg}});
        j["errors"] = std::move(errs);
        if (has_w) {
            j["w_minus"] = mat_json(wm);
            j["w_plus"] = mat_json(wp);
        }
        atomic_write(out, j.dump(1) + "\n");
    }

    for (const auto& r : scan.results)
        std::printf("E=%-8g |r|^2=%.3e |t|^2=%.12g\n", r.energy, r.reflection, r.transmission);
    std::printf("wrote %s\n", out.c_str());
    return 0;
}

// ----- spectrum -----------------------------------------------------------------

int cmd_spectrum(const RunConfig& cfg) {
    CaseSetup s = build_setup(cfg);
    double L = cfg.L.value_or(30.0);
    int n_scan = cfg.n.value_or(201);
    if (n_scan < 2) throw ConfigError("n must be >= 2");
    auto domain = resolve_domain(cfg);
    std::string fmt = resolve_format(cfg);
    std::string out = resolve_out(cfg, fmt);

    const double window = s.p.m - 0.01;
    SpectrumReport rep =
        shoot_bound_states(s.tm.model, {-window, window}, n_scan, L, s.tm.point_spectrum);

    struct Match {
        double energy;
        std::string method;
        double value;
        bool pass;
    };
    std::vector<Match> matches;
    Grid grid{domain.first, domain.second, 2001};
    for (double want : rep.expected) {
        Match mrow{want, "", 0.0, false};
        if (std::abs(want) < 1e-6) {
            // The flat-band energy sits in the excluded degenerate zone of
            // the reduction; confirm it through its missing state instead.
            mrow.method = "missing_state_residual";
            double best = 1e300;
            for (int j = 0; j < 3; ++j) {
                if (std::abs(s.tm.seed.lambda()[j] - want) > 1e-9) continue;
                best = std::min(best, eigen_residual(s.tm.model, s.tm.missing_states[j], want,
                                                     grid));
            }
            mrow.value = best;
            mrow.pass = best < 1e-8;
        } else {
            mrow.method = "shooting";
            double best = 1e300;
            for (double f : rep.found_energies) best = std::min(best, std::abs(f - want));
            mrow.value = best;
            mrow.pass = best < 1e-8;
        }
        matches.push_back(mrow);
    }
    std::vector<double> spurious;
    for (double f : rep.found_energies) {
        bool claimed = false;
        for (double want : rep.expected)
            if (std::abs(want) >= 1e-6 && std::abs(f - want) < 1e-8) claimed = true;
        if (!claimed) spurious.push_back(f);
    }
    bool all_pass = spurious.empty();
    for (const auto& mrow : matches) all_pass = all_pass && mrow.pass;

    if (fmt == "json") {
        ordered_json j;
        j["schema"] = 1;
        j["command"] = "spectrum";
        j["params"] = case_params_json(cfg, s);
        j["window"] = {-window, window};
        j["n_scan"] = n_scan;
        j["L"] = L;
        j["expected"] = rep.expected;
        j["found"] = rep.found_energies;
        j["residuals"] = rep.residuals;
        j["degenerate"] = rep.degenerate_energies;
        ordered_json arr = ordered_json::array();
        for (const auto& mrow : matches)
            arr.push_back({{"energy", mrow.energy},
                           {"method", mrow.method},
                           {"value", mrow.value},
                           {"pass", mrow.pass}});
        j["matches"] = std::move(arr);
        j["spurious"] = spurious;
        j["pass"] = all_pass;
        atomic_write(out, j.dump(1) + "\n");
    } else {
        std::string text = "kind,energy,method,value,pass\n";
        for (const auto& mrow : matches)
            text += std::string("expected,") + csv_num(mrow.energy) + "," + mrow.method + "," +
                    csv_num(mrow.value) + "," + (mrow.pass ? "1" : "0") + "\n";
        for (double f : spurious)
            text += std::string("spurious,") + csv_num(f) + ",shooting," + csv_num(0.0) + ",0\n";
        atomic_write(out, text);
    }

    for (const auto& mrow : matches)
        std::printf("[%s] expected E=%-10g via %s (value %.3e)\n",
                    mrow.pass ? "pass" : "FAIL", mrow.energy, mrow.method.c_str(), mrow.value);
    for (double f : spurious) std::printf("[FAIL] spurious bound state at E=%.10g\n", f);
    std::printf("wrote %s\n", out.c_str());
    return all_pass ? 0 : 1;
}

// ----- frontend ------------------------------------------------------------------

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Darboux-dressed pseudospin-1 Dirac models and Lieb-lattice band structure"};
    app.require_subcommand(1);

    struct Holder {
        std::string config_path, case_tag, flat_chi, seed, out, format;
        double m = 0, eps = 0, hv = 0, ell = 0, L = 0;
        double tau1 = 0, tau2 = 0, tau3 = 0, tau4 = 0, t3 = 0;
        double muA = 0, muB = 0, muC = 0, a = 0, lambda_phase = 0;
        bool mirror = false;
        int n = 0, nk = 0;
        std::vector<double> domain, energies;
    } h;

    CLI::App* sub_bands = app.add_subcommand(
        "bands", "Tight-binding band surface over the Brillouin zone (csv: kx,ky,e0,e+,e-)");
    CLI::App* sub_case = app.add_subcommand(
        "case", "Sample a dressed potential, its profiles and missing states over a domain");
    CLI::App* sub_verify = app.add_subcommand(
        "verify", "Run regularity/hermiticity/intertwining/spectral checks for one case");
    CLI::App* sub_scatter = app.add_subcommand(
        "scatter", "Reflection/transmission coefficients at propagating energies");
    CLI::App* sub_spectrum = app.add_subcommand(
        "spectrum", "Bound-state scan inside the gap, checked against the expected spectrum");

    for (CLI::App* sub :
         {sub_bands, sub_case, sub_verify, sub_scatter, sub_spectrum}) {
        sub->add_option("--config", h.config_path,
                        "JSON config file; explicit flags override its values");
        sub->add_option("--out", h.out, "output path (default <command>.<format>)");
        sub->add_option("--format", h.format, "output format (csv or json)")
            ->check(CLI::IsMember({"csv", "json"}));
    }
    for (CLI::App* sub : {sub_case, sub_verify, sub_scatter, sub_spectrum}) {
        sub->add_option("--case", h.case_tag, "case family: I, II, III or IV")
            ->check(CLI::IsMember({"I", "II", "III", "IV"}));
        sub->add_option("--m", h.m, "mass gap (default 1)");
        sub->add_option("--eps", h.eps,
                        "factorization energy (defaults: I 0.75, II -0.25, III 0.75, IV 0.5)");
        sub->add_option("--hv", h.hv, "hbar times Fermi velocity (default 1)");
        sub->add_option("--ell", h.ell, "case-IV Wronskian constant (default 1)");
        sub->add_flag("--mirror", h.mirror, "case-II mirrored variant (needs 0 < eps < m)");
        sub->add_option("--flat-chi", h.flat_chi,
                        "case-I flat-band profile (cosh regular, sinh singular at 0)")
            ->check(CLI::IsMember({"cosh", "sinh"}));
        sub->add_option("--seed", h.seed, "case-I seed family: flat or nonflat")
            ->check(CLI::IsMember({"flat", "nonflat"}));
        sub->add_option("--domain", h.domain, "sampling domain: LO HI (default -8 8)")
            ->expected(2);
        sub->add_option("--n", h.n,
                        "sample count (default 1601; spectrum: energy-scan count, default 201)");
        sub->add_option("--L", h.L, "asymptotic matching distance (default 30)");
    }
    sub_scatter->add_option("--energies", h.energies,
                            "comma-separated energies (default 1.1,1.5,2,3,5)")
        ->delimiter(',');
    sub_bands->add_option("--nk", h.nk, "k-grid points per axis (default 61)");
    sub_bands->add_option("--tau1", h.tau1, "NN hopping tau1 (default 1)");
    sub_bands->add_option("--tau2", h.tau2, "NN hopping tau2 (default 1)");
    sub_bands->add_option("--tau3", h.tau3, "NN hopping tau3 (default 1)");
    sub_bands->add_option("--tau4", h.tau4, "NN hopping tau4 (default 1)");
    sub_bands->add_option("--t3", h.t3, "NNN amplitude (default 0)");
    sub_bands->add_option("--muA", h.muA, "on-site potential, A site (default 0)");
    sub_bands->add_option("--muB", h.muB, "on-site potential, B site (default 0)");
    sub_bands->add_option("--muC", h.muC, "on-site potential, C site (default 0)");
    sub_bands->add_option("--a", h.a, "NN distance (default 1)");
    sub_bands->add_option("--lambda-phase", h.lambda_phase,
                          "NNN Peierls phase (only pi/2 is implemented)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    CLI::App* sub = app.get_subcommands().front();
    auto given = [&](const char* name) {
        const CLI::Option* o = sub->get_option_no_throw(name);
        return o != nullptr && o->count() > 0;
    };

    try {
        RunConfig cfg;
        cfg.command = sub->get_name();
        if (given("--config")) apply_json_config(h.config_path, cfg);
        if (given("--case")) cfg.case_tag = h.case_tag;
        if (given("--m")) cfg.m = h.m;
        if (given("--eps")) cfg.eps = h.eps;
        if (given("--hv")) cfg.hv = h.hv;
        if (given("--ell")) cfg.ell = h.ell;
        if (given("--mirror")) cfg.mirror = true;
        if (given("--flat-chi")) cfg.flat_chi = h.flat_chi;
        if (given("--seed")) cfg.seed = h.seed;
        if (given("--domain")) cfg.domain = std::make_pair(h.domain[0], h.domain[1]);
        if (given("--n")) cfg.n = h.n;
        if (given("--nk")) cfg.nk = h.nk;
        if (given("--L")) cfg.L = h.L;
        if (given("--energies")) cfg.energies = h.energies;
        if (given("--tau1")) cfg.tau1 = h.tau1;
        if (given("--tau2")) cfg.tau2 = h.tau2;
        if (given("--tau3")) cfg.tau3 = h.tau3;
        if (given("--tau4")) cfg.tau4 = h.tau4;
        if (given("--t3")) cfg.t3 = h.t3;
        if (given("--muA")) cfg.muA = h.muA;
        if (given("--muB")) cfg.muB = h.muB;
        if (given("--muC")) cfg.muC = h.muC;
        if (given("--a")) cfg.a = h.a;
        if (given("--lambda-phase")) cfg.lambda_phase = h.lambda_phase;
        if (given("--out")) cfg.out = h.out;
        if (given("--format")) cfg.format = h.format;

        if (cfg.command == "bands") return cmd_bands(cfg);
        if (cfg.command == "case") return cmd_case(cfg);
        if (cfg.command == "verify") return cmd_verify(cfg);
        if (cfg.command == "scatter") return cmd_scatter(cfg);
        if (cfg.command == "spectrum") return cmd_spectrum(cfg);
        std::fprintf(stderr, "unknown command: %s\n", cfg.command.c_str());
        return 2;
    } catch (const std::invalid_argument& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 2;
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 3;
    }
}

}  // namespace liebdx
