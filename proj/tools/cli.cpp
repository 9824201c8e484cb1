#include "cli.hpp"

#include "table.hpp"

#include "polyham/check.hpp"
#include "polyham/error.hpp"
#include "polyham/solve.hpp"
#include "polyham/spec_io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <optional>

namespace polyham::cli {

namespace {

using hamiltonian::BasisSpec;
using hamiltonian::HamiltonianSpec;

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

struct Common {
    std::string spec;
    std::vector<std::string> sets;
    std::string out;
    std::string format = "csv";
    std::string cg_table;
};

struct BasisOptions {
    std::string basis = "harmonic";
    double scale = 1.0;
    int nu_max = 40;
    int v_max = 6;
};

void add_common(CLI::App* cmd, Common& c, bool needs_spec) {
    auto* s = cmd->add_option("--spec", c.spec, "Hamiltonian config file");
    if (needs_spec) s->required();
    cmd->add_option("--set", c.sets, "override a declared parameter, NAME=VALUE");
    cmd->add_option("--out", c.out, "output file (default: standard output)");
    cmd->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--cg-table", c.cg_table, "SO(5) CG table (overrides the config)");
}

void add_basis(CLI::App* cmd, BasisOptions& b) {
    cmd->add_option("--basis", b.basis, "harmonic | pair:EVEN,ODD | per-v:FILE");
    cmd->add_option("--scale", b.scale, "basis scale a")->check(CLI::PositiveNumber);
    cmd->add_option("--nu-max", b.nu_max, "largest radial index")->check(CLI::NonNegativeNumber);
    cmd->add_option("--vmax", b.v_max, "largest SO(N) label")->check(CLI::NonNegativeNumber);
}

hamiltonian::Overrides overrides(const std::vector<std::string>& sets) {
    hamiltonian::Overrides ov;
    for (const auto& s : sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects NAME=VALUE, got '" + s + "'");
        ov[s.substr(0, eq)] = hamiltonian::evaluate_expression(s.substr(eq + 1), {});
    }
    return ov;
}

std::pair<double, double> parse_range(const std::string& text, const std::string& what) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw ConfigError(what + " expects LO:HI");
    const double lo = hamiltonian::evaluate_expression(text.substr(0, colon), {});
    const double hi = hamiltonian::evaluate_expression(text.substr(colon + 1), {});
    if (!(hi > lo)) throw ConfigError(what + " needs LO < HI");
    return {lo, hi};
}

// "a,b,c" or "start:stop:step" (inclusive, rounded to the step)
std::vector<double> parse_values(const std::string& text) {
    std::vector<double> out;
    if (std::count(text.begin(), text.end(), ':') == 2) {
        const auto c1 = text.find(':');
        const auto c2 = text.find(':', c1 + 1);
        const double start = hamiltonian::evaluate_expression(text.substr(0, c1), {});
        const double stop = hamiltonian::evaluate_expression(text.substr(c1 + 1, c2 - c1 - 1), {});
        const double step = hamiltonian::evaluate_expression(text.substr(c2 + 1), {});
        if (!(step > 0.0) || stop < start) throw ConfigError("--values START:STOP:STEP needs STEP > 0 and STOP >= START");
        const long long count = std::llround(std::floor((stop - start) / step + 1e-9));
        for (long long i = 0; i <= count; ++i) out.push_back(start + i * step);
        return out;
    }
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        out.push_back(hamiltonian::evaluate_expression(item, {}));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

void emit(const Table& t, const Common& c, std::ostream& out) {
    if (c.out.empty()) {
        c.format == "json" ? write_json(t, out) : write_csv(t, out);
        return;
    }
    std::ofstream f(c.out);
    if (!f) throw ConfigError("cannot write '" + c.out + "'");
    c.format == "json" ? write_json(t, f) : write_csv(t, f);
}

HamiltonianSpec load(const Common& c) {
    return hamiltonian::load_spec(c.spec, overrides(c.sets));
}

std::optional<CGTable> load_table(const Common& c, const HamiltonianSpec& spec) {
    if (!spec.couples_odd()) return std::nullopt;
    const std::string path = !c.cg_table.empty() ? c.cg_table : spec.cg_table;
    if (path.empty()) throw ConfigError("triple_q terms need a CG table (--cg-table or cg_table =)");
    return CGTable::load(path);
}

solve::Range default_scale_range(const HamiltonianSpec& spec) {
    const double s = std::sqrt(spec.mass);
    return {0.1 * s, 10.0 * s};
}

// spectrum

struct SpectrumArgs {
    Common common;
    BasisOptions basis;
    std::optional<double> emax;
    std::optional<int> levels;
    std::optional<double> tolerance;
};

int cmd_spectrum(const SpectrumArgs& a, std::ostream& out, std::ostream& err) {
    const HamiltonianSpec spec = load(a.common);
    const auto table = load_table(a.common, spec);
    const BasisSpec basis = hamiltonian::parse_basis(a.basis.basis, spec.dimension, a.basis.scale,
                                                     a.basis.nu_max, a.basis.v_max);
    const auto result = solve::solve_spectrum(spec, basis, table ? &*table : nullptr);

    Table t{"polyham.spectrum", 1,
            {"block", "v", "L", "M", "parity", "index", "energy", "drift", "nu_max", "scale", "basis"}, {}};
    bool converged = true;
    for (const auto& b : result.blocks) {
        const auto& e = b.pairs.values;
        for (int k = 0; k < e.size(); ++k) {
            if (a.levels && k >= *a.levels) break;
            if (a.emax && e(k) >= *a.emax) break;
            const double drift = k < static_cast<int>(b.level_drift.size()) ? b.level_drift[k] : nan;
            if (a.tolerance && !(drift <= *a.tolerance * std::max(1.0, std::abs(e(k))))) converged = false;
            t.add({b.block.label, static_cast<long long>(b.block.v), static_cast<long long>(b.block.L),
                   static_cast<long long>(b.block.M), static_cast<long long>(b.block.parity),
                   static_cast<long long>(k), e(k), drift, static_cast<long long>(result.nu_max),
                   basis.scale(0), result.basis});
        }
    }
    emit(t, a.common, out);
    if (!converged) {
        err << "error: not converged: some reported levels drift by more than the tolerance "
               "between nu_max and nu_max - 10\n";
        return not_converged;
    }
    return ok;
}

// variational

struct VariationalArgs {
    Common common;
    int v_max = 6;
    std::string scale_range;
    std::string lambda_range = "1.05:150";
    std::string select;  // "n,N_basis"
    int v = 0;
};

solve::VariationalOptions variational_options(const HamiltonianSpec& spec, const std::string& scale_range,
                                               const std::string& lambda_range) {
    solve::VariationalOptions o;
    o.scale = default_scale_range(spec);
    if (!scale_range.empty()) {
        auto [lo, hi] = parse_range(scale_range, "--scale-range");
        o.scale = {lo, hi};
    }
    auto [lo, hi] = parse_range(lambda_range, "--lambda-range");
    o.lambda = {lo, hi};
    return o;
}

int cmd_variational(const VariationalArgs& a, std::ostream& out, std::ostream&) {
    const HamiltonianSpec spec = load(a.common);
    if (!spec.central()) throw ConfigError("variational needs a central (scalar-only) Hamiltonian");
    const auto o = variational_options(spec, a.scale_range, a.lambda_range);
    if (!a.select.empty()) {
        const auto comma = a.select.find(',');
        if (comma == std::string::npos) throw ConfigError("--select expects N_STATES,N_BASIS");
        const int n = std::stoi(a.select.substr(0, comma));
        const int nb = std::stoi(a.select.substr(comma + 1));
        std::vector<double> cands;
        for (int l = static_cast<int>(std::ceil(o.lambda.lo)); l <= static_cast<int>(std::floor(o.lambda.hi)); ++l) {
            cands.push_back(l);
        }
        const auto s = solve::select_basis(spec, a.v, n, nb, cands, o.scale);
        Table t{"polyham.selection", 1, {"v", "lambda", "scale", "energy", "chosen"}, {}};
        for (const auto& c : s.evaluated) {
            t.add({static_cast<long long>(a.v), c.lambda, c.scale, c.energy, c.lambda == s.lambda});
        }
        emit(t, a.common, out);
        return ok;
    }
    Table t{"polyham.variational", 1, {"v", "scale", "lambda", "energy", "converged", "starts"}, {}};
    for (int v = 0; v <= a.v_max; ++v) {
        const auto r = solve::variational_optimize(spec, v, o);
        t.add({static_cast<long long>(v), r.scale, r.lambda, r.energy, r.converged,
               static_cast<long long>(r.trace.size())});
    }
    emit(t, a.common, out);
    return ok;
}

// scan

struct ScanArgs {
    Common common;
    std::string param = "alpha";
    std::string values = "0:1:0.1";
    int v_max = 6;
    int nu_max = 99;
    std::string scale_range;
    std::string lambda_range = "1.05:150";
};

int cmd_scan(const ScanArgs& a, std::ostream& out, std::ostream& err) {
    Table t{"polyham.scan", 1,
            {"param", "value", "v", "scale", "lambda", "e_variational", "e_diagonal", "relative_gap"}, {}};
    double worst = -1.0;
    double worst_at = nan;
    for (double value : parse_values(a.values)) {
        auto ov = overrides(a.common.sets);
        ov[a.param] = value;
        const HamiltonianSpec spec = hamiltonian::load_spec(a.common.spec, ov);
        if (!spec.central()) throw ConfigError("scan needs a central (scalar-only) Hamiltonian");
        const auto o = variational_options(spec, a.scale_range, a.lambda_range);
        for (int v = 0; v <= a.v_max; ++v) {
            const auto r = solve::variational_optimize(spec, v, o);
            const double e = solve::eigh(solve::central_block(spec, v, r.lambda, r.scale, a.nu_max)).values(0);
            const double gap = std::abs(r.energy - e) / std::abs(e);
            if (gap > worst) {
                worst = gap;
                worst_at = value;
            }
            t.add({a.param, value, static_cast<long long>(v), r.scale, r.lambda, r.energy, e, gap});
        }
    }
    emit(t, a.common, out);
    err << "largest variational gap " << worst << " at " << a.param << " = " << worst_at << "\n";
    return ok;
}

// crystal-field

struct CrystalArgs {
    Common common;
    BasisOptions basis;
    double chi = 0.0;
    double r0 = 0.0;
    int levels = 5;
};

int cmd_crystal_field(const CrystalArgs& a, std::ostream& out, std::ostream&) {
    const HamiltonianSpec central = load(a.common);
    if (central.dimension != 3 || !central.central()) {
        throw ConfigError("crystal-field needs a central Hamiltonian in dimension 3");
    }
    const BasisSpec basis = hamiltonian::parse_basis(a.basis.basis, 3, a.basis.scale, a.basis.nu_max,
                                                     a.basis.v_max);
    using hamiltonian::OrbitalTensor;
    using hamiltonian::RadialFactor;
    using hamiltonian::Term;
    // H0 = H_c + χ r0² (3cos²θ − 1);  H = H_c + χ r² (3cos²θ − 1)
    HamiltonianSpec h0 = central;
    h0.terms.push_back(Term{a.chi * a.r0 * a.r0, {}, OrbitalTensor::crystal_field});
    HamiltonianSpec h = central;
    h.terms.push_back(Term{a.chi, {RadialFactor::r_power(2)}, OrbitalTensor::crystal_field});
    HamiltonianSpec free = central;
    free.terms.push_back(Term{0.0, {}, OrbitalTensor::crystal_field});

    const auto base = hamiltonian::build_coupled_matrix(free, basis);
    Table t{"polyham.crystal_field", 1, {"hamiltonian", "m", "parity", "index", "energy", "shift"}, {}};
    for (const auto& [name, s] : {std::pair<std::string, const HamiltonianSpec*>{"H0", &h0}, {"H", &h}}) {
        const auto m = hamiltonian::build_coupled_matrix(*s, basis);
        for (std::size_t i = 0; i < m.blocks.size(); ++i) {
            const auto e = solve::eigh(m.blocks[i].matrix).values;
            const auto e_free = solve::eigh(base.blocks[i].matrix).values;
            for (int k = 0; k < std::min<int>(a.levels, e.size()); ++k) {
                t.add({name, static_cast<long long>(m.blocks[i].M), static_cast<long long>(m.blocks[i].parity),
                       static_cast<long long>(k), e(k), e(k) - e_free(k)});
            }
        }
    }
    emit(t, a.common, out);
    return ok;
}

// check

struct CheckArgs {
    Common common;
    std::vector<double> lambdas{1.2, 2.5, 7.0, 57.0};
    int n = 20;
    double tolerance = 1e-9;
};

int run_check(const std::vector<double>& lambdas, int n, double tolerance, const check::RadialOps& ops,
              const Common& common, std::ostream& out, std::ostream& err) {
    const auto items = check::run_battery({lambdas, n, tolerance}, ops);
    Table t{"polyham.check", 1, {"check", "passed", "worst", "tolerance"}, {}};
    int failed = 0;
    for (const auto& i : items) {
        t.add({i.name, i.passed, i.worst, i.tolerance});
        if (!i.passed) {
            ++failed;
            err << "FAIL " << i.name << ": error " << i.worst << " exceeds " << i.tolerance << "\n";
        }
    }
    emit(t, common, out);
    err << items.size() - failed << "/" << items.size() << " checks passed\n";
    return failed ? check_failed : ok;
}

}  // namespace

int run_with_ops(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
                 const check::RadialOps& ops) {
    CLI::App app{"Polynomial Hamiltonians in SU(1,1) x SO(N) bases", "polyham"};
    app.require_subcommand(1);

    SpectrumArgs spectrum;
    auto* sp = app.add_subcommand("spectrum", "assemble, diagonalize and tabulate the spectrum");
    add_common(sp, spectrum.common, true);
    add_basis(sp, spectrum.basis);
    sp->add_option("--emax", spectrum.emax, "report levels below this energy");
    sp->add_option("--levels", spectrum.levels, "report at most this many levels per block");
    sp->add_option("--tolerance", spectrum.tolerance, "relative drift allowed against nu_max - 10");

    ScanArgs scan;
    auto* sc = app.add_subcommand("scan", "variational and diagonal energies over a parameter grid");
    add_common(sc, scan.common, true);
    sc->add_option("--param", scan.param, "parameter to scan");
    sc->add_option("--values", scan.values, "START:STOP:STEP or a comma list");
    sc->add_option("--vmax", scan.v_max, "largest SO(N) label")->check(CLI::NonNegativeNumber);
    sc->add_option("--nu-max", scan.nu_max, "largest radial index of the reference diagonalization")
        ->check(CLI::NonNegativeNumber);
    sc->add_option("--scale-range", scan.scale_range, "LO:HI (default 0.1 to 10 times sqrt(M))");
    sc->add_option("--lambda-range", scan.lambda_range, "LO:HI");

    VariationalArgs var;
    auto* va = app.add_subcommand("variational", "single-state variational optimization per v");
    add_common(va, var.common, true);
    va->add_option("--vmax", var.v_max, "largest SO(N) label")->check(CLI::NonNegativeNumber);
    va->add_option("--scale-range", var.scale_range, "LO:HI (default 0.1 to 10 times sqrt(M))");
    va->add_option("--lambda-range", var.lambda_range, "LO:HI");
    va->add_option("--select", var.select, "N_STATES,N_BASIS: choose an integer lambda by the n-th level");
    va->add_option("--v", var.v, "SO(N) label used with --select")->check(CLI::NonNegativeNumber);

    CrystalArgs cf;
    auto* cr = app.add_subcommand("crystal-field", "level splittings in a quadrupole field");
    add_common(cr, cf.common, true);
    add_basis(cr, cf.basis);
    cf.basis.nu_max = 10;
    cr->add_option("--chi", cf.chi, "field strength");
    cr->add_option("--r0", cf.r0, "radius of the rigid reference H0");
    cr->add_option("--levels", cf.levels, "levels reported per block")->check(CLI::PositiveNumber);

    CheckArgs chk;
    auto* ck = app.add_subcommand("check", "analytic matrix elements against the numerical oracle");
    add_common(ck, chk.common, false);
    ck->add_option("--lambdas", chk.lambdas, "lambda values")->delimiter(',');
    ck->add_option("--n", chk.n, "largest radial index")->check(CLI::NonNegativeNumber);
    ck->add_option("--tolerance", chk.tolerance, "relative tolerance");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: config: " << e.what() << "\n";
        return config_error;
    }

    try {
        if (sp->parsed()) return cmd_spectrum(spectrum, out, err);
        if (sc->parsed()) return cmd_scan(scan, out, err);
        if (va->parsed()) return cmd_variational(var, out, err);
        if (cr->parsed()) return cmd_crystal_field(cf, out, err);
        if (ck->parsed()) return run_check(chk.lambdas, chk.n, chk.tolerance, ops, chk.common, out, err);
    } catch (const MissingCoefficient& e) {
        err << "error: missing coefficient: " << e.key() << "\n";
        return missing_coefficient;
    } catch (const ConvergenceError& e) {
        err << "error: not converged: " << e.what() << "\n";
        return not_converged;
    } catch (const Error& e) {
        err << "error: config: " << e.what() << "\n";
        return config_error;
    } catch (const std::invalid_argument& e) {
        err << "error: config: bad number: " << e.what() << "\n";
        return config_error;
    }
    return config_error;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    return run_with_ops(args, out, err, check::RadialOps::analytic());
}

}  // namespace polyham::cli
