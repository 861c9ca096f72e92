// asepq: conditioned-ASEP generators, shock measures, propagators, and
// identity verification from the command line.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>

#include "asepq/report.hpp"
#include "asepq/verify.hpp"

namespace {

using namespace asepq;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct RunConfig {
    int L = 6;
    int N = -1;
    int K = -1;
    int n = 0;
    int M = -1;
    std::vector<int> x;
    std::string q = "1.5";
    double z = 1.0;
    double t = 0.5;
    std::string mode = "numeric";
    std::string sign = "+";
    std::string driving = "global";
    std::string kind = "II";
    std::string suite;
    std::string check;
    std::string eta;
    double tol = 1e-9;
    std::string out;
    std::uint64_t seed = 20240801;  // reserved
    bool timing = false;

    double q_value() const {
        std::size_t pos = 0;
        double value;
        auto slash = q.find('/');
        if (slash == std::string::npos) {
            value = std::stod(q, &pos);
            if (pos != q.size()) throw std::invalid_argument("cannot parse q: " + q);
        } else {
            double num = std::stod(q.substr(0, slash));
            double den = std::stod(q.substr(slash + 1));
            if (den == 0) throw std::invalid_argument("q denominator is zero");
            value = num / den;
        }
        return value;
    }

    json echo() const {
        json j;
        j["L"] = L;
        if (N >= 0) j["N"] = N;
        if (K >= 0) j["K"] = K;
        if (M >= 0) j["M"] = M;
        j["n"] = n;
        j["x"] = x;
        j["q"] = q;
        j["z"] = z;
        j["t"] = t;
        j["mode"] = mode;
        j["sign"] = sign;
        j["driving"] = driving;
        j["kind"] = kind;
        j["tol"] = tol;
        j["seed"] = seed;
        return j;
    }
};

const std::set<std::string> kConfigKeys = {
    "L", "N", "K", "n", "M", "x", "q", "z", "t", "mode", "sign",
    "driving", "kind", "suite", "check", "eta", "tol", "out", "seed", "timing"};

void load_config_file(const std::string& path, RunConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    json j = json::parse(in, nullptr, true);
    if (!j.is_object()) throw std::invalid_argument("config file must hold a JSON object");
    for (const auto& [key, val] : j.items()) {
        if (!kConfigKeys.count(key)) throw std::invalid_argument("unknown config key: " + key);
        if (key == "L") cfg.L = val.get<int>();
        else if (key == "N") cfg.N = val.get<int>();
        else if (key == "K") cfg.K = val.get<int>();
        else if (key == "n") cfg.n = val.get<int>();
        else if (key == "M") cfg.M = val.get<int>();
        else if (key == "x") cfg.x = val.get<std::vector<int>>();
        else if (key == "q") cfg.q = val.is_string() ? val.get<std::string>() : std::to_string(val.get<double>());
        else if (key == "z") cfg.z = val.get<double>();
        else if (key == "t") cfg.t = val.get<double>();
        else if (key == "mode") cfg.mode = val.get<std::string>();
        else if (key == "sign") cfg.sign = val.get<std::string>();
        else if (key == "driving") cfg.driving = val.get<std::string>();
        else if (key == "kind") cfg.kind = val.get<std::string>();
        else if (key == "suite") cfg.suite = val.get<std::string>();
        else if (key == "check") cfg.check = val.get<std::string>();
        else if (key == "eta") cfg.eta = val.get<std::string>();
        else if (key == "tol") cfg.tol = val.get<double>();
        else if (key == "out") cfg.out = val.get<std::string>();
        else if (key == "seed") cfg.seed = val.get<std::uint64_t>();
        else if (key == "timing") cfg.timing = val.get<bool>();
    }
}

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

void validate_common(const RunConfig& cfg, bool needs_numeric) {
    if (cfg.mode != "numeric" && cfg.mode != "exact")
        throw std::invalid_argument("mode must be 'numeric' or 'exact'");
    if (needs_numeric && cfg.mode == "exact")
        throw std::invalid_argument("propagator commands require numeric mode");
    double q = cfg.q_value();  // parse/validate even when exact mode ignores it
    if (cfg.mode == "numeric" && (!(q > 0) || q == 1.0))
        throw std::invalid_argument("q must be positive and different from 1");
    if (cfg.t < 0) throw std::invalid_argument("t must be nonnegative");
    if (cfg.z < 0) throw std::invalid_argument("z must be nonnegative");
}

SamKind parse_kind(const std::string& s) {
    if (s == "I" || s == "1") return SamKind::I;
    if (s == "II" || s == "2") return SamKind::II;
    throw std::invalid_argument("kind must be I or II");
}

DrivingSpec::Kind parse_driving(const std::string& s) {
    if (s == "global") return DrivingSpec::Kind::global;
    if (s == "boundary") return DrivingSpec::Kind::boundary;
    throw std::invalid_argument("driving must be 'global' or 'boundary'");
}

void print_reports(const std::vector<VerificationReport>& reports) {
    for (const auto& r : reports) {
        std::string resid = r.mode == "exact" ? r.residual_exact : fmt_double(r.residual);
        std::printf("%-4s %-30s %-7s residual=%s  (%.1f ms)\n", r.pass ? "PASS" : "FAIL",
                    r.check.c_str(), r.mode.c_str(), resid.c_str(), r.runtime_ms);
    }
}

// ------------------------------------------------------------------ verify

int cmd_verify(const RunConfig& cfg) {
    validate_common(cfg, false);
    const double q = cfg.q_value();
    std::vector<VerificationReport> reports;

    if (!cfg.suite.empty()) {
        VerifyConfig vc;
        vc.Lcap = cfg.L;
        vc.q = q;
        vc.tol_theorem = cfg.tol;
        vc.seed = cfg.seed;
        reports = run_suite(cfg.suite, vc);
    } else if (!cfg.check.empty()) {
        CheckMode mode = cfg.mode == "exact" ? CheckMode::exact : CheckMode::numeric;
        Sign sign = cfg.sign == "-" ? Sign::minus : Sign::plus;
        if (cfg.check == "prop1") {
            reports.push_back(check_proposition1(cfg.L, cfg.K < 0 ? 1 : cfg.K, cfg.n, sign, mode, q));
        } else if (cfg.check == "theorem1") {
            if (cfg.x.empty()) throw std::invalid_argument("theorem1 needs --x shock sites");
            Configuration eta = [&] {
                if (!cfg.eta.empty()) {
                    Configuration e = Configuration::parse(cfg.eta);
                    if (e.L != cfg.L) throw std::invalid_argument("--eta length must equal L");
                    return e;
                }
                int Ne = cfg.N < 0 ? 1 : cfg.N;
                return Configuration((std::uint64_t(1) << Ne) - 1, cfg.L);
            }();
            reports.push_back(check_duality_theorem1(cfg.L, cfg.x, eta, q, cfg.t, cfg.tol));
        } else if (cfg.check == "theorem2" || cfg.check == "theorem3") {
            if (cfg.N < 0 || cfg.K < 0 || cfg.x.empty())
                throw std::invalid_argument(cfg.check + " needs --N, --K and --x");
            auto* fn = cfg.check == "theorem2" ? check_theorem2 : check_theorem3;
            reports.push_back(fn(cfg.L, cfg.N, cfg.K, cfg.x, cfg.z, q, cfg.t, cfg.tol, cfg.tol / 10));
        } else if (cfg.check == "theorem2-chain") {
            reports.push_back(check_theorem2_chain(cfg.L, cfg.N < 0 ? 2 : cfg.N, cfg.K < 0 ? 1 : cfg.K,
                                                   mode, q, cfg.tol));
        } else if (cfg.check == "appendix") {
            reports.push_back(check_appendix_boundary_relations(cfg.L, mode, q, cfg.tol));
        } else if (cfg.check == "pseudocomm") {
            reports.push_back(check_pseudocommutator(cfg.L, cfg.N < 0 ? 1 : cfg.N, sign, mode, q, cfg.tol));
        } else if (cfg.check == "lemmas") {
            reports.push_back(check_lemmas(cfg.L, mode, q, cfg.tol));
        } else if (cfg.check == "duality-fn") {
            reports.push_back(check_duality_function_identities(cfg.L, mode, q, cfg.tol));
        } else {
            throw std::invalid_argument("unknown check: " + cfg.check);
        }
    } else {
        throw std::invalid_argument("verify needs --suite or --check");
    }

    print_reports(reports);
    bool ok = all_pass(reports);
    std::printf("%zu checks, %s\n", reports.size(), ok ? "all passed" : "FAILURES PRESENT");

    if (!cfg.out.empty()) {
        json j;
        j["config"] = cfg.echo();
        if (!cfg.suite.empty()) j["config"]["suite"] = cfg.suite;
        if (!cfg.check.empty()) j["config"]["check"] = cfg.check;
        j["reports"] = reports_json(reports, cfg.timing);
        j["all_pass"] = ok;
        write_file(cfg.out, j.dump(2) + "\n");
    }
    return ok ? kExitOk : kExitCheckFailed;
}

// ------------------------------------------------------------------ evolve

std::pair<std::vector<double>, SAMSpec> evolved_sam(const RunConfig& cfg) {
    const double q = cfg.q_value();
    SAMSpec spec{cfg.L, cfg.x, parse_kind(cfg.kind)};
    spec.validate();
    const int N = cfg.N < 0 ? spec.K() : cfg.N;
    if (N < spec.K()) throw std::invalid_argument("need N >= K");
    auto v0 = restrict_particles(sam_vector(spec, cfg.z, q, std::pow(q, 1.0 / cfg.L)), cfg.L, N);

    GeneratorSpec<double> g;
    if (cfg.driving == "none") {
        g.L = cfg.L;
        g.q = q;
        g.alpha = q;
        g.beta = 1.0;
    } else {
        DrivingSpec d{parse_driving(cfg.driving), cfg.M < 0 ? spec.K() : cfg.M};
        g = d.generator(cfg.L, q);
    }
    SparseMatrix<double> H = build_sector_generator(g, N);
    double eps = cfg.tol > 0 ? std::min(cfg.tol, 1e-12) : 1e-12;
    return {expm_action(H, v0, cfg.t, eps), spec};
}

int cmd_evolve(const RunConfig& cfg) {
    validate_common(cfg, true);
    auto [vt, spec] = evolved_sam(cfg);
    json j;
    j["config"] = cfg.echo();
    j["sector_N"] = cfg.N < 0 ? spec.K() : cfg.N;
    j["state"] = vector_json(vt);
    std::string text = j.dump(2) + "\n";
    if (!cfg.out.empty())
        write_file(cfg.out, text);
    else
        std::cout << text;
    return kExitOk;
}

// --------------------------------------------------------------- decompose

int cmd_decompose(const RunConfig& cfg) {
    validate_common(cfg, true);
    if (cfg.N < 0) throw std::invalid_argument("decompose needs --N");
    auto [vt, spec] = evolved_sam(cfg);
    const double q = cfg.q_value();
    const int K = spec.K();
    auto dec = decompose_onto_sams(vt, cfg.L, cfg.N, K, cfg.z, q, spec.kind);
    if (dec.rank_deficient)
        throw std::runtime_error("SAM family is rank deficient: rank " + std::to_string(dec.rank));

    SectorBasis sk(cfg.L, K);
    json j;
    j["config"] = cfg.echo();
    j["residual"] = dec.residual;
    j["condition"] = dec.condition;
    j["rank"] = dec.rank;
    json weights = json::object();
    std::string csv = "# config " + cfg.echo().dump() + "\ny,weight\n";
    for (std::uint64_t y = 0; y < sk.dim(); ++y) {
        std::string key = sk.config(y).str();
        weights[key] = dec.weights[y];
        csv += key + "," + fmt_double(dec.weights[y]) + "\n";
    }
    j["weights"] = weights;

    std::string base = cfg.out.empty() ? std::string("decompose") : cfg.out;
    write_file(base + ".json", j.dump(2) + "\n");
    write_file(base + ".csv", csv);
    std::printf("decomposition residual=%s condition=%s rank=%lld -> %s.{json,csv}\n",
                fmt_double(dec.residual).c_str(), fmt_double(dec.condition).c_str(),
                static_cast<long long>(dec.rank), base.c_str());
    return kExitOk;
}

// -------------------------------------------------------------- transition

int cmd_transition(const RunConfig& cfg) {
    validate_common(cfg, true);
    if (cfg.K < 0) throw std::invalid_argument("transition needs --K");
    if (cfg.M < 0) throw std::invalid_argument("transition needs --M (conditioning particle count)");
    const double q = cfg.q_value();
    DrivingSpec d{parse_driving(cfg.driving), cfg.M};
    TransitionTable tab = transition_table(cfg.L, cfg.K, d, q, cfg.t, std::min(cfg.tol, 1e-12));

    SectorBasis sk(cfg.L, cfg.K);
    std::string csv = "# config " + cfg.echo().dump() + "\nx,y,value\n";
    json entries = json::array();
    for (Index x = 0; x < tab.dim; ++x)
        for (Index y = 0; y < tab.dim; ++y) {
            std::string xs = sk.config(static_cast<std::uint64_t>(x)).str();
            std::string ys = sk.config(static_cast<std::uint64_t>(y)).str();
            csv += xs + "," + ys + "," + fmt_double(tab(y, x)) + "\n";
            entries.push_back(json::array({xs, ys, tab(y, x)}));
        }
    json j;
    j["config"] = cfg.echo();
    j["dim"] = tab.dim;
    j["entries"] = std::move(entries);
    std::string base = cfg.out.empty() ? std::string("transition") : cfg.out;
    write_file(base + ".csv", csv);
    write_file(base + ".json", j.dump(2) + "\n");
    std::printf("wrote %lld x %lld transition table -> %s.{csv,json}\n", static_cast<long long>(tab.dim),
                static_cast<long long>(tab.dim), base.c_str());
    return kExitOk;
}

// ------------------------------------------------------------------ profile

int cmd_profile(const RunConfig& cfg) {
    validate_common(cfg, true);
    SAMSpec spec{cfg.L, cfg.x, parse_kind(cfg.kind)};
    spec.validate();
    FugacityProfile p = fugacity_profile(spec, cfg.z, cfg.q_value());
    std::string csv = "# config " + cfg.echo().dump() + "\nk,z_k,rho_k\n";
    for (int k = 1; k <= cfg.L; ++k) {
        const auto& zk = p.zk[static_cast<std::size_t>(k - 1)];
        csv += std::to_string(k) + "," + (zk ? fmt_double(*zk) : std::string("inf")) + "," +
               fmt_double(p.density(k)) + "\n";
    }
    std::string path = cfg.out.empty() ? std::string("profile.csv") : cfg.out;
    write_file(path, csv);
    std::printf("wrote density profile (L=%d, K=%d) -> %s\n", cfg.L, spec.K(), path.c_str());
    return kExitOk;
}

// ------------------------------------------------------------------- report

int cmd_report(const RunConfig& cfg) {
    validate_common(cfg, false);
    VerifyConfig vc;
    vc.Lcap = cfg.L;
    vc.q = cfg.q_value();
    vc.tol_theorem = cfg.tol;
    vc.seed = cfg.seed;
    auto reports = run_suite("all", vc);
    print_reports(reports);
    bool ok = all_pass(reports);
    std::printf("%zu checks, %s\n", reports.size(), ok ? "all passed" : "FAILURES PRESENT");
    json j;
    j["config"] = cfg.echo();
    j["reports"] = reports_json(reports, cfg.timing);
    j["all_pass"] = ok;
    std::string path = cfg.out.empty() ? std::string("report.json") : cfg.out;
    write_file(path, j.dump(2) + "\n");
    return ok ? kExitOk : kExitCheckFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"conditioned-ASEP generators, shock measures, and duality checks"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path;

    // the config file is applied before flag parsing, so flags override it
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--config") config_path = argv[i + 1];
    if (!config_path.empty()) {
        try {
            load_config_file(config_path, cfg);
        } catch (const std::exception& e) {
            std::cerr << "usage error: " << e.what() << "\n";
            return kExitUsage;
        }
    }

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file (flags override)");
        sub->add_option("--L", cfg.L, "lattice size");
        sub->add_option("--q", cfg.q, "asymmetry q (decimal or rational p/r)");
        sub->add_option("--mode", cfg.mode, "exact | numeric");
        sub->add_option("--tol", cfg.tol, "tolerance");
        sub->add_option("--out", cfg.out, "output path");
        sub->add_option("--seed", cfg.seed, "rng seed (reserved)");
        sub->add_flag("--timing", cfg.timing, "include runtimes in written reports");
    };

    auto* verify = app.add_subcommand("verify", "run identity/theorem checks");
    add_common(verify);
    verify->add_option("--suite", cfg.suite, "algebra | duality | theorems | appendix | all");
    verify->add_option("--check", cfg.check,
                       "prop1 | theorem1 | theorem2 | theorem3 | theorem2-chain | appendix | pseudocomm | "
                       "lemmas | duality-fn");
    verify->add_option("--N", cfg.N, "particle number");
    verify->add_option("--K", cfg.K, "shock / sector count");
    verify->add_option("--n", cfg.n, "intertwiner power");
    verify->add_option("--sign", cfg.sign, "+ | -");
    verify->add_option("--x", cfg.x, "shock sites")->delimiter(',');
    verify->add_option("--eta", cfg.eta, "dual configuration as a 0/1 string (site 1 leftmost)");
    verify->add_option("--z", cfg.z, "fugacity");
    verify->add_option("--t", cfg.t, "time");

    auto* evolve = app.add_subcommand("evolve", "evolve a restricted SAM vector");
    add_common(evolve);
    evolve->add_option("--N", cfg.N, "particle number");
    evolve->add_option("--x", cfg.x, "shock sites")->delimiter(',');
    evolve->add_option("--z", cfg.z, "fugacity");
    evolve->add_option("--t", cfg.t, "time");
    evolve->add_option("--kind", cfg.kind, "SAM kind: I | II");
    evolve->add_option("--driving", cfg.driving, "global | boundary | none");
    evolve->add_option("--M", cfg.M, "conditioning particle count (defaults to K)");

    auto* decomp = app.add_subcommand("decompose", "decompose an evolved SAM over the SAM family");
    add_common(decomp);
    decomp->add_option("--N", cfg.N, "particle number");
    decomp->add_option("--x", cfg.x, "shock sites")->delimiter(',');
    decomp->add_option("--z", cfg.z, "fugacity");
    decomp->add_option("--t", cfg.t, "time");
    decomp->add_option("--kind", cfg.kind, "SAM kind: I | II");
    decomp->add_option("--driving", cfg.driving, "global | boundary");
    decomp->add_option("--M", cfg.M, "conditioning particle count (defaults to K)");

    auto* trans = app.add_subcommand("transition", "conditioned K-particle transition table");
    add_common(trans);
    trans->add_option("--K", cfg.K, "particle count of the table");
    trans->add_option("--M", cfg.M, "conditioning particle count");
    trans->add_option("--driving", cfg.driving, "global | boundary");
    trans->add_option("--t", cfg.t, "time");

    auto* profile = app.add_subcommand("profile", "closed-form SAM density profile");
    add_common(profile);
    profile->add_option("--shocks,--x", cfg.x, "shock sites")->delimiter(',');
    profile->add_option("--z", cfg.z, "fugacity");
    profile->add_option("--kind", cfg.kind, "SAM kind: I | II");

    auto* report = app.add_subcommand("report", "run every suite and write one JSON report");
    add_common(report);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (app.got_subcommand("verify")) return cmd_verify(cfg);
        if (app.got_subcommand("evolve")) return cmd_evolve(cfg);
        if (app.got_subcommand("decompose")) return cmd_decompose(cfg);
        if (app.got_subcommand("transition")) return cmd_transition(cfg);
        if (app.got_subcommand("profile")) return cmd_profile(cfg);
        if (app.got_subcommand("report")) return cmd_report(cfg);
        std::cerr << "no subcommand given\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
}
