// curlmat: command-line front end for the operator toolkit.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "curlmat/curlmat.hpp"

using namespace curlmat;
using nlohmann::json;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_breach = 1;
constexpr int exit_usage = 2;

struct usage_error : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

const std::vector<std::string> op_names = {"div", "grad", "curl", "curl-h", "curl-c", "cartesian-curl", "cartesian-curl-c",
                                           "cartesian-curl-h", "cartesian-grad", "cartesian-div"};

OpMatrix operator_by_name(const std::string& op, int l)
{
    if (op == "div") return build_div(l);
    if (op == "grad") return build_grad(l);
    if (op == "curl") return build_curl_cg(l);
    if (op == "curl-h") return build_curl_hermitian(l);
    if (op == "curl-c") return build_curl_complex(l);
    if (op == "cartesian-curl") return cartesian_curl();
    if (op == "cartesian-curl-c") return build_cartesian_curls().complex_curl;
    if (op == "cartesian-curl-h") return build_cartesian_curls().hermitian_curl;
    if (op == "cartesian-grad") return cartesian_grad();
    if (op == "cartesian-div") return cartesian_div();
    throw usage_error("unknown operator " + op);
}

// Prefactor pulled out of the LaTeX array so the printed entries match the
// usual closed forms: 1/(il) for curl, 1/l for curl-h, (1-i)/l for curl-c.
std::optional<std::pair<ExactScalar, std::string>> latex_prefactor(const std::string& op, int l)
{
    const ExactScalar inv_l = ExactScalar::rational(1, l);
    const std::string ls = std::to_string(l);
    if (op == "curl") return std::make_pair((ExactScalar::i() * ExactScalar(l)).inverse(), l == 1 ? "\\frac{1}{i}" : "\\frac{1}{" + ls + "i}");
    if (op == "curl-h" && l > 1) return std::make_pair(inv_l, "\\frac{1}{" + ls + "}");
    if (op == "curl-c")
        return std::make_pair((ExactScalar(1) - ExactScalar::i()) * inv_l, l == 1 ? "(1-i)" : "\\frac{1-i}{" + ls + "}");
    if (op == "cartesian-curl-c") return std::make_pair(ExactScalar(1) + ExactScalar::i(), "(1+i)");
    if (op == "cartesian-curl-h") return std::make_pair(ExactScalar::i(), "i");
    return std::nullopt;
}

std::string format_double(double v)
{
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

std::array<int, 3> parse_triple(const std::string& s, const std::string& what)
{
    std::array<int, 3> out{};
    char c1 = 0, c2 = 0;
    std::istringstream is(s);
    if (!(is >> out[0] >> c1 >> out[1] >> c2 >> out[2]) || c1 != ',' || c2 != ',' || !is.eof())
        throw usage_error(what + " must look like a,b,c");
    return out;
}

GridSpec cube_grid(int n, double box)
{
    GridSpec g = GridSpec::cube(n, box);
    try {
        g.validate();
    } catch (const std::invalid_argument& e) {
        throw usage_error(e.what());
    }
    return g;
}

// ---------------------------------------------------------------------------

struct BuildArgs
{
    std::string op = "curl";
    int l = 1;
    std::string format = "text";
};

int run_build(const BuildArgs& a)
{
    const OpMatrix m = operator_by_name(a.op, a.l);
    if (a.format == "json") {
        json j = to_json(m);
        j["op"] = a.op;
        j["l"] = a.l;
        std::cout << j.dump(2) << "\n";
    } else if (a.format == "latex") {
        std::cout << to_latex(m, latex_prefactor(a.op, a.l)) << "\n";
    } else {
        std::cout << to_text(m);
    }
    return exit_ok;
}

struct CgArgs
{
    int l1 = 1, m1 = 0, l2 = 1, m2 = 0, l = 0, m = 0;
};

int run_cg(const CgArgs& a)
{
    const ExactScalar v = clebsch_gordan(a.l1, a.m1, a.l2, a.m2, a.l, a.m);
    std::cout << "exact: " << to_string(v) << "\n";
    std::cout << "float: " << format_double(v.to_complex().real()) << "\n";
    return exit_ok;
}

struct VerifyArgs
{
    std::string suite = "all";
    int max_l = 4;
    int max_n = 3;
    std::string report = "json";
    std::uint64_t seed = 0x5eedcafe;
};

constexpr double symbol_tolerance = 1e-10;

int run_verify(const VerifyArgs& a)
{
    static const std::map<std::string, Suite> suites = {{"core", Suite::core},         {"powers", Suite::powers},
                                                        {"exp", Suite::exp},           {"hermitian", Suite::hermitian},
                                                        {"complex", Suite::complex},   {"all", Suite::all}};
    set_symbol_check_seed(a.seed);
    std::vector<IdentityReport> reports;
    try {
        reports = run_suite(suites.at(a.suite), a.max_l, a.max_n);
    } catch (const std::domain_error& e) {
        throw usage_error(e.what());
    }
    std::size_t failures = 0;
    for (const auto& r : reports)
        if (!r.passed() || r.symbol_residual > symbol_tolerance) ++failures;

    if (a.report == "json") {
        json arr = json::array();
        for (const auto& r : reports) arr.push_back(to_json(r));
        json j = {{"suite", a.suite},           {"max_l", a.max_l},   {"max_n", a.max_n},
                  {"degree_cap", degree_cap()}, {"seed", a.seed},     {"symbol_tolerance", symbol_tolerance},
                  {"failures", failures},       {"reports", arr}};
        std::cout << j.dump(2) << "\n";
    } else {
        for (const auto& r : reports) {
            std::string range;
            for (int l : r.l_range) range += (range.empty() ? "" : ",") + std::to_string(l);
            std::cout << std::left << std::setw(11) << to_string(r.status) << " " << std::setw(44) << r.identity_id << " l=" << range
                      << "  symbol=" << std::scientific << std::setprecision(2) << r.symbol_residual << std::defaultfloat << "\n";
            if (r.witness) std::cout << to_text(*r.witness);
        }
        std::cout << reports.size() << " identities, " << failures << " failures\n";
    }
    return failures == 0 ? exit_ok : exit_breach;
}

struct ApplyArgs
{
    std::string op = "curl";
    int l = 1;
    std::string in, out;
};

int run_apply(const ApplyArgs& a)
{
    const TensorField f = read_ctf(a.in);
    const OpMatrix m = operator_by_name(a.op, a.l);
    TensorField g;
    try {
        g = apply_operator(m, f);
    } catch (const shape_error& e) {
        throw usage_error(e.what());
    }
    write_ctf(a.out, g);
    json j = {{"op", a.op},
              {"l_in", f.l()},
              {"l_out", g.l()},
              {"basis", to_string(g.basis())},
              {"input_norm", l2_norm(f)},
              {"output_norm", l2_norm(g)}};
    std::cout << j.dump(2) << "\n";
    return exit_ok;
}

struct HelmholtzArgs
{
    std::string in, prefix = "h";
};

int run_helmholtz(const HelmholtzArgs& a)
{
    const TensorField f = read_ctf(a.in);
    HelmholtzParts h;
    try {
        h = helmholtz(f);
    } catch (const shape_error& e) {
        throw usage_error(e.what());
    }
    write_ctf(a.prefix + "_perp.ctf", h.perp);
    write_ctf(a.prefix + "_par.ctf", h.par);
    const double recon = relative(l2_norm(f - h.perp - h.par), l2_norm(f));
    const double div = relative(l2_norm(apply_operator(cartesian_div(), h.perp)), gradient_seminorm(h.perp));
    const double ccurl =
        relative(l2_norm(apply_operator(build_cartesian_curls().complex_curl, h.par)), std::sqrt(2.0) * gradient_seminorm(h.par));
    const bool ok = recon <= 1e-12 && div <= 1e-10 && ccurl <= 1e-10;
    json j = {{"perp", a.prefix + "_perp.ctf"},
              {"par", a.prefix + "_par.ctf"},
              {"reconstruction_error", recon},
              {"div_perp", div},
              {"complex_curl_par", ccurl},
              {"within_tolerance", ok}};
    std::cout << j.dump(2) << "\n";
    return ok ? exit_ok : exit_breach;
}

struct GenArgs
{
    std::string preset = "random-bandlimited";
    std::string out = "field.ctf";
    int grid = 16;
    double box = 2 * std::numbers::pi;
    int l = 1;
    std::string basis = "spherical";
    int m = 1;
    std::string mode = "1,0,0";
    int band = 4;
    std::uint64_t seed = 1;
};

int run_gen(const GenArgs& a)
{
    const GridSpec g = cube_grid(a.grid, a.box);
    const FieldBasis basis = a.basis == "cartesian" ? FieldBasis::cartesian : FieldBasis::spherical;
    TensorField f;
    try {
        if (a.preset == "planewave") {
            f = plane_wave(g, a.l, a.m, parse_triple(a.mode, "--mode"));
            if (basis == FieldBasis::cartesian) f = to_cartesian_field(f);
        } else if (a.preset == "random-bandlimited") {
            f = random_bandlimited(g, a.l, basis, a.band, a.seed);
        } else {
            const Example1Fields ex = example1_fields(g);
            f = ex.u + cplx(0.0, 1.0) * ex.v;
        }
    } catch (const std::domain_error& e) {
        throw usage_error(e.what());
    } catch (const std::invalid_argument& e) {
        throw usage_error(e.what());
    }
    write_ctf(a.out, f);
    json j = ctf_header(f);
    j["preset"] = a.preset;
    j["seed"] = a.seed;
    j["path"] = a.out;
    std::cout << j.dump() << "\n";
    return exit_ok;
}

struct EvolveArgs
{
    int l = 1;
    int grid = 16;
    double box = 2 * std::numbers::pi;
    int steps = 100;
    double dt = 0.01;
    double c = 1.0;
    std::string stepper = "spectral";
    std::string init = "random";
    int band = 4;
    std::uint64_t seed = 1;
    std::string log;
    int dump_every = 0;
    std::string prefix = "run";
};

EvolutionState initial_state(const EvolveArgs& a, const GridSpec& g)
{
    if (a.init == "random") return random_divergence_free_state(g, a.l, a.band, a.seed, a.c);
    const std::string tag = "planewave:";
    if (a.init.rfind(tag, 0) != 0) throw usage_error("--init must be random or planewave:m,jx,jy,jz");
    std::istringstream is(a.init.substr(tag.size()));
    int m = 0;
    char comma = 0;
    std::string rest;
    if (!(is >> m >> comma) || comma != ',' || !std::getline(is, rest)) throw usage_error("--init planewave:m,jx,jy,jz");
    try {
        return plane_wave_state(g, a.l, m, parse_triple(rest, "planewave mode"), a.c);
    } catch (const std::domain_error& e) {
        throw usage_error(e.what());
    }
}

int run_evolve(const EvolveArgs& a)
{
    if (a.steps < 0) throw usage_error("--steps must be >= 0");
    if (!(a.dt > 0.0)) throw usage_error("--dt must be positive");
    if (!(a.c > 0.0)) throw usage_error("--c must be positive");
    const GridSpec g = cube_grid(a.grid, a.box);
    EvolutionState s = initial_state(a, g);

    std::ofstream log;
    if (!a.log.empty()) {
        log.open(a.log);
        if (!log) throw usage_error("cannot open log file " + a.log);
        log << "t,energy,divE_residual,divB_residual";
        for (int m = -a.l; m <= a.l; ++m) log << ",band_m" << m;
        log << "\n" << std::setprecision(17);
    }
    auto record = [&](const Diagnostics& d) {
        if (!log.is_open()) return;
        log << d.t << "," << d.energy << "," << d.div_E << "," << d.div_B;
        for (double b : d.bands) log << "," << b;
        log << "\n";
    };
    auto dump = [&](int step) {
        write_ctf(a.prefix + "_E_" + std::to_string(step) + ".ctf", s.TE);
        write_ctf(a.prefix + "_B_" + std::to_string(step) + ".ctf", s.TB);
    };

    const Diagnostics d0 = diagnostics(s);
    record(d0);
    if (a.dump_every > 0) dump(0);
    Diagnostics d = d0;
    double worst_div_growth = 0.0;
    for (int step = 1; step <= a.steps; ++step) {
        s = a.stepper == "rk4" ? step_rk4(s, a.dt) : step_spectral(s, a.dt);
        d = diagnostics(s);
        record(d);
        worst_div_growth = std::max({worst_div_growth, d.div_E - d0.div_E, d.div_B - d0.div_B});
        if (a.dump_every > 0 && step % a.dump_every == 0) dump(step);
    }
    const double drift = relative(std::abs(d.energy - d0.energy), d0.energy);
    const bool checked = a.stepper == "spectral";
    const bool ok = !checked || (drift <= 1e-10 && worst_div_growth <= 1e-10);
    json j = {{"l", a.l},
              {"stepper", a.stepper},
              {"steps", a.steps},
              {"dt", a.dt},
              {"seed", a.seed},
              {"t_final", s.t},
              {"energy_initial", d0.energy},
              {"energy_final", d.energy},
              {"energy_drift", drift},
              {"divergence_growth", worst_div_growth},
              {"bands_final", d.bands},
              {"within_tolerance", ok}};
    std::cout << j.dump(2) << "\n";
    return ok ? exit_ok : exit_breach;
}

int run_ledger(const std::string& format)
{
    const ConventionLedger& led = convention_ledger();
    if (format == "json") {
        std::cout << to_json(led).dump(2) << "\n";
        return exit_ok;
    }
    const auto& c = led.selected;
    std::cout << "ledger version " << led.version << "\n"
              << "spherical derivative: d+1 = " << c.derivative.plus_sign << " * (dx + i dy)/sqrt2, d-1 = " << c.derivative.minus_sign
              << " * (dx - i dy)/sqrt2, d0 = dz" << (c.derivative.conjugate ? ", conjugated in coupling" : "") << "\n"
              << "coupling reading: " << to_string(c.reading) << "\n"
              << "curl prefactor sign: " << (c.curl_sign > 0 ? "+i" : "-i") << "\n"
              << "candidates: " << led.candidates_accepted << " of " << led.candidates_examined << " accepted\n"
              << "errata:\n";
    for (const auto& e : led.errata) std::cout << "  " << e.id << ": " << e.detail << "\n";
    return exit_ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"curlmat: exact spherical-tensor curl operators, identities, spectral fields and evolution"};
    app.require_subcommand(1);

    BuildArgs build;
    auto* b = app.add_subcommand("build", "print an operator matrix");
    b->add_option("--op", build.op, "operator")->check(CLI::IsMember(op_names));
    b->add_option("--l", build.l, "rank")->check(CLI::Range(0, max_angular_l));
    b->add_option("--format", build.format, "text, json or latex")->check(CLI::IsMember({"text", "json", "latex"}));

    CgArgs cg;
    auto* c = app.add_subcommand("cg", "Clebsch-Gordan coefficient <l1 m1; l2 m2 | l m>");
    c->add_option("--l1", cg.l1)->required();
    c->add_option("--m1", cg.m1)->required();
    c->add_option("--l2", cg.l2)->required();
    c->add_option("--m2", cg.m2)->required();
    c->add_option("--l", cg.l)->required();
    c->add_option("--m", cg.m)->required();

    VerifyArgs verify;
    auto* v = app.add_subcommand("verify", "run identity suites");
    v->add_option("--suite", verify.suite)->check(CLI::IsMember({"core", "powers", "exp", "hermitian", "complex", "all"}));
    v->add_option("--max-l", verify.max_l)->check(CLI::Range(1, 6));
    v->add_option("--max-n", verify.max_n)->check(CLI::Range(1, 64));
    v->add_option("--report", verify.report)->check(CLI::IsMember({"text", "json"}));
    v->add_option("--seed", verify.seed, "seed for the symbol cross-check wavevectors");

    ApplyArgs apply;
    auto* ap = app.add_subcommand("apply", "apply an operator to a .ctf field");
    ap->add_option("--op", apply.op)->check(CLI::IsMember(op_names));
    ap->add_option("--l", apply.l)->check(CLI::Range(0, max_angular_l));
    ap->add_option("--in", apply.in)->required();
    ap->add_option("--out", apply.out)->required();

    HelmholtzArgs helm;
    auto* h = app.add_subcommand("helmholtz", "split a cartesian vector field");
    h->add_option("--in", helm.in)->required();
    h->add_option("--out-prefix", helm.prefix);

    GenArgs gen;
    auto* gn = app.add_subcommand("gen", "generate a .ctf field");
    gn->add_option("--preset", gen.preset)->check(CLI::IsMember({"planewave", "random-bandlimited", "example1"}));
    gn->add_option("--out", gen.out);
    gn->add_option("--grid", gen.grid);
    gn->add_option("--box", gen.box);
    gn->add_option("--l", gen.l)->check(CLI::Range(0, max_angular_l));
    gn->add_option("--basis", gen.basis)->check(CLI::IsMember({"spherical", "cartesian"}));
    gn->add_option("--m", gen.m, "helicity band for planewave");
    gn->add_option("--mode", gen.mode, "jx,jy,jz for planewave");
    gn->add_option("--band", gen.band, "max |j| for random-bandlimited")->check(CLI::NonNegativeNumber);
    gn->add_option("--seed", gen.seed);

    EvolveArgs ev;
    auto* e = app.add_subcommand("evolve", "evolve spin-l free fields");
    e->add_option("--l", ev.l)->check(CLI::IsMember({1, 2}));
    e->add_option("--grid", ev.grid);
    e->add_option("--box", ev.box);
    e->add_option("--steps", ev.steps);
    e->add_option("--dt", ev.dt);
    e->add_option("--c", ev.c, "wave speed");
    e->add_option("--stepper", ev.stepper)->check(CLI::IsMember({"spectral", "rk4"}));
    e->add_option("--init", ev.init, "random or planewave:m,jx,jy,jz");
    e->add_option("--band", ev.band)->check(CLI::NonNegativeNumber);
    e->add_option("--seed", ev.seed);
    e->add_option("--log", ev.log, "CSV diagnostics path");
    e->add_option("--dump-every", ev.dump_every);
    e->add_option("--out-prefix", ev.prefix);

    std::string ledger_format = "json";
    auto* lg = app.add_subcommand("ledger", "print the selected conventions and errata");
    lg->add_option("--format", ledger_format)->check(CLI::IsMember({"text", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        if (err.get_exit_code() == 0) return app.exit(err);
        app.exit(err);
        return exit_usage;
    }

    try {
        if (*b) return run_build(build);
        if (*c) return run_cg(cg);
        if (*v) return run_verify(verify);
        if (*ap) return run_apply(apply);
        if (*h) return run_helmholtz(helm);
        if (*gn) return run_gen(gen);
        if (*e) return run_evolve(ev);
        if (*lg) return run_ledger(ledger_format);
    } catch (const usage_error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return exit_usage;
    } catch (const ctf_error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return exit_usage;
    } catch (const std::domain_error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return exit_usage;
    } catch (const degree_cap_exceeded& err) {
        std::cerr << "error: " << err.what() << "\n";
        return exit_usage;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return exit_breach;
    }
    return exit_usage;
}
