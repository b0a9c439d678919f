// ddgate: command-line front end.
//
//   ddgate pulse-optimize   optimize self-refocusing shapes into a pulse library
//   ddgate gate-bench       mean gate infidelity vs r.m.s. chemical shift
//   ddgate zeno             repeated [[4,2,2]] syndrome measurement under 1/f-like noise
//   ddgate pattern-search   find and verify the toggling-pattern quadruple
//
// Exit codes: 0 success, 1 computational failure, 2 usage error.

#include "ddgate/ddgate.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace ddgate;
namespace fs = std::filesystem;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// "pi", "-pi/2", "3pi/4", "0.5pi" or plain radians.
double parse_angle(const std::string& s) {
    static const std::regex re(R"(^\s*([+-]?)(\d*\.?\d*)\s*pi\s*(?:/\s*(\d+))?\s*$)");
    std::smatch m;
    if (std::regex_match(s, m, re)) {
        const double mult = m[2].length() ? std::stod(m[2]) : 1.0;
        const double den = m[3].length() ? std::stod(m[3]) : 1.0;
        if (den == 0.0) throw UsageError("malformed angle '" + s + "'");
        return (m[1] == "-" ? -1.0 : 1.0) * mult * pi / den;
    }
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError("malformed angle '" + s + "'");
}

/// "1/256" or a decimal.
double parse_step(const std::string& s) {
    const auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return std::stod(s);
        return std::stod(s.substr(0, slash)) / std::stod(s.substr(slash + 1));
    } catch (const std::exception&) {
        throw UsageError("malformed time step '" + s + "'");
    }
}

using Header = std::vector<std::pair<std::string, std::string>>;

void write_header(std::ostream& out, const std::string& title, const Header& h) {
    out << "# " << title << '\n';
    for (const auto& [k, v] : h) out << "# " << k << " = " << v << '\n';
}

std::string fmt(double v) {
    std::ostringstream s;
    s << std::setprecision(12) << v;
    return s.str();
}

template <class T>
std::string join(const std::vector<T>& xs) {
    std::ostringstream s;
    for (std::size_t i = 0; i < xs.size(); ++i) s << (i ? "," : "") << std::setprecision(12) << xs[i];
    return s.str();
}

fs::path output_path(const std::string& dir, const std::string& name) {
    fs::create_directories(dir);
    return fs::path(dir) / name;
}

PulseSet make_pulses(const std::string& kind, int order, const std::string& library) {
    std::optional<PulseLibrary> lib;
    if (!library.empty()) {
        if (!fs::exists(library)) throw UsageError("pulse library " + library + " does not exist");
        lib = PulseLibrary::load(library);
    }
    try {
        return PulseSet(parse_kind(kind), order, lib);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

double default_J(int m) { return pi / (16.0 * std::max(m, 1)); }

struct Common {
    std::string output_dir;
    int workers = 1;
};

// ---------------------------------------------------------------------------

struct OptimizeArgs {
    std::vector<std::string> shapes{"pi:x", "pi/2:x", "pi/2:y"};
    int order = 2;
    int harmonics = 0;
    std::string library;
    std::uint64_t seed = OptimizerOptions{}.restart_seed;
    int starts = OptimizerOptions{}.starts;
};

int cmd_pulse_optimize(const Common& c, const OptimizeArgs& a) {
    if (a.order != 1 && a.order != 2) throw UsageError("--order must be 1 or 2");
    const int k = a.harmonics > 0 ? a.harmonics : default_harmonics(a.order);
    if (k < a.order) throw UsageError("--harmonics must be at least the order");
    std::vector<std::pair<double, Axis>> targets;
    for (const auto& s : a.shapes) {
        const auto colon = s.find(':');
        if (colon == std::string::npos || colon + 2 != s.size())
            throw UsageError("shape '" + s + "' is not of the form angle:axis");
        const double angle = parse_angle(s.substr(0, colon));
        Axis axis;
        try {
            axis = parse_axis(s[colon + 1]);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        if (axis == Axis::z) throw UsageError("pulses drive x or y only");
        targets.emplace_back(angle, axis);
    }
    const std::string path = a.library.empty() ? output_path(c.output_dir, "pulses.json").string() : a.library;
    PulseLibrary lib = fs::exists(path) ? PulseLibrary::load(path) : PulseLibrary{};

    OptimizerOptions opt;
    opt.restart_seed = a.seed;
    opt.starts = a.starts;
    int status = 0;
    std::cout << std::left << std::setw(14) << "shape" << std::setw(14) << "delta1" << std::setw(14) << "delta2"
              << "peak/pi\n";
    for (auto [angle, axis] : targets) {
        const std::string key = shape_key(angle, axis, PulseKind::shaped, a.order);
        try {
            const PulseShape s = optimize_shape(angle, axis, a.order, k, opt);
            const OrderDefect d = order_defect(s);
            std::cout << std::setw(14) << key << std::setw(14) << d.first << std::setw(14) << d.second
                      << peak_amplitude(s) / pi << '\n';
            if (!d.refocuses(a.order)) {
                std::cerr << "error: " << key << " misses the defect tolerance\n";
                status = 1;
                continue;
            }
            lib.put(key, s, a.order);
        } catch (const OptimizationError& e) {
            std::cout << std::setw(14) << key << std::setw(14) << e.best().first << std::setw(14)
                      << e.best().second << "failed\n";
            std::cerr << "error: " << e.what() << '\n';
            status = 1;
        }
    }
    for (auto [angle, axis] : targets) {
        lib.put(shape_key(angle, axis, PulseKind::gaussian, 0), make_gaussian(angle, axis), 0);
        lib.put(shape_key(angle, axis, PulseKind::hard, 0), make_hard(angle, axis), 0);
    }
    lib.save(path);
    std::cout << "wrote " << path << '\n';
    return status;
}

// ---------------------------------------------------------------------------

struct BenchArgs {
    std::string graph = "chain:4";
    int m = 5;
    double J = 0.0;  // 0: pi / (16 m)
    std::string pulses = "shaped";
    int order = 2;
    std::string library;
    double delta_min = 1e-3, delta_max = 1.0;
    int points = 19;
    int draws = 20;
    std::uint64_t seed = 1;
    std::string dt = "1/256";
    std::vector<std::string> gates{"rotation", "cnot"};
    int rotation_qubit = 3;
    std::string rotation_axis = "y";
    std::string rotation_angle = "pi/2";
    std::vector<int> cnot_pair{2, 3};
};

int cmd_gate_bench(const Common& c, const BenchArgs& a) {
    if (a.m < 1) throw UsageError("--m must be positive");
    if (a.draws < 1 || a.points < 2) throw UsageError("need at least one draw and two grid points");
    if (!(a.delta_min > 0) || !(a.delta_max > a.delta_min)) throw UsageError("bad delta range");
    if (a.cnot_pair.size() != 2) throw UsageError("--cnot takes two qubits");
    const double J = a.J > 0 ? a.J : default_J(a.m);
    const QubitGraph g = load_graph(a.graph, J);
    const Compiler comp(g, make_pulses(a.pulses, a.order, a.library), a.m);
    BenchOptions opt;
    opt.draws = a.draws;
    opt.seed = a.seed;
    opt.dt = parse_step(a.dt);
    opt.workers = c.workers;
    const auto grid = log_grid(a.delta_min, a.delta_max, a.points);

    for (const auto& name : a.gates) {
        GateSpec spec;
        if (name == "rotation") {
            spec.q1 = a.rotation_qubit;
            spec.axis = parse_axis(a.rotation_axis.empty() ? '?' : a.rotation_axis[0]);
            spec.angle = parse_angle(a.rotation_angle);
        } else if (name == "cnot") {
            spec.kind = GateSpec::Kind::cnot;
            spec.q1 = a.cnot_pair[0];
            spec.q2 = a.cnot_pair[1];
        } else {
            throw UsageError("unknown gate '" + name + "' (rotation, cnot)");
        }
        const GateBenchResult r = run_gate_bench(comp, spec, grid, opt);
        const auto path = output_path(c.output_dir, "bench_" + name + "_" + comp.pulses().describe() + ".csv");
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        write_header(out, "gate-bench",
                     {{"gate", r.gate},
                      {"graph", a.graph},
                      {"pulses", r.pulses},
                      {"library", a.library.empty() ? "(built-in optimizer)" : a.library},
                      {"m", std::to_string(r.m)},
                      {"J", fmt(J)},
                      {"dt", fmt(r.dt)},
                      {"draws", std::to_string(r.draws)},
                      {"seed", std::to_string(r.seed)},
                      {"delta_grid", fmt(a.delta_min) + ":" + fmt(a.delta_max) + ":" + std::to_string(a.points)},
                      {"schedule_duration", fmt(spec.compile(comp).duration)}});
        write_bench_csv(out, r);
        std::cout << "wrote " << path.string() << '\n';
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct ZenoArgs {
    std::vector<std::string> modes{"WM", "NM", "NP"};
    std::vector<double> tau_c;
    std::vector<double> sigma;
    int cycles = 4;
    int realizations = 20;
    std::uint64_t seed = 1;
    std::string dt = "1/256";
    std::string pulses = "shaped";
    int order = 2;
    std::string library;
    int m = 5;
    double J = 0.0;
    bool pulse_encoding = false;
};

int cmd_zeno(const Common& c, const ZenoArgs& a) {
    if (a.cycles < 1 || a.realizations < 1) throw UsageError("need at least one cycle and one realization");
    std::vector<ZenoMode> modes;
    for (const auto& s : a.modes) {
        try {
            modes.push_back(parse_mode(s));
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    // Default grid: tau_c sweep at sigma = 1e-3 and sigma sweep at tau_c = 128.
    std::vector<std::pair<double, double>> grid;
    if (a.tau_c.empty() && a.sigma.empty()) {
        for (double t : {32.0, 128.0, 512.0}) grid.emplace_back(t, 1e-3);
        for (double s : {5e-4, 2e-3}) grid.emplace_back(128.0, s);
    } else {
        for (double t : a.tau_c.empty() ? std::vector<double>{128.0} : a.tau_c)
            for (double s : a.sigma.empty() ? std::vector<double>{1e-3} : a.sigma) grid.emplace_back(t, s);
    }
    for (auto [t, s] : grid)
        if (!(t > 0) || s < 0) throw UsageError("tau_c must be positive and sigma nonnegative");

    const PulseSet pulses = make_pulses(a.pulses, a.order, a.library);
    const auto rows_path = output_path(c.output_dir, "zeno_results.csv");
    const auto sum_path = output_path(c.output_dir, "zeno_summary.csv");
    std::ofstream rows(rows_path), summary(sum_path);
    if (!rows || !summary) throw std::runtime_error("cannot write zeno outputs to " + c.output_dir);
    std::vector<std::string> grid_desc;
    for (auto [t, s] : grid) grid_desc.push_back(fmt(t) + "/" + fmt(s));
    const Header h{{"modes", join(a.modes)},
                   {"grid (tau_c/sigma)", join(grid_desc)},
                   {"cycles", std::to_string(a.cycles)},
                   {"realizations", std::to_string(a.realizations)},
                   {"seed", std::to_string(a.seed)},
                   {"dt", a.dt},
                   {"pulses", pulses.describe()},
                   {"library", a.library.empty() ? "(built-in optimizer)" : a.library},
                   {"m", std::to_string(a.m)},
                   {"J", fmt(a.J > 0 ? a.J : default_J(a.m))},
                   {"pulse_encoding", a.pulse_encoding ? "true" : "false"}};
    write_header(rows, "zeno realizations", h);
    write_header(summary, "zeno summary; checkpoint 'decode' follows the final decoding", h);

    bool first = true;
    for (auto [tau_c, sigma] : grid) {
        for (ZenoMode mode : modes) {
            ZenoConfig cfg;
            cfg.mode = mode;
            cfg.cycles = a.cycles;
            cfg.m = a.m;
            cfg.J = a.J > 0 ? a.J : default_J(a.m);
            cfg.noise = NoiseParams{sigma, tau_c, 0.0, a.seed};
            cfg.realizations = a.realizations;
            cfg.pulses = pulses;
            cfg.dt = parse_step(a.dt);
            cfg.pulse_encoding = a.pulse_encoding;
            cfg.workers = c.workers;
            const ZenoRecord r = run_zeno(cfg);
            write_zeno_rows(rows, r, first);
            write_zeno_summary(summary, r, first);
            first = false;
            std::cout << mode_name(mode) << " tau_c=" << tau_c << " sigma=" << sigma
                      << " final infidelity=" << r.mean_infidelity.back() << " sp=" << r.mean_sp.back() << '\n';
        }
    }
    std::cout << "wrote " << rows_path.string() << " and " << sum_path.string() << '\n';
    return 0;
}

// ---------------------------------------------------------------------------

struct PatternArgs {
    int slots = 8;
    std::string out;
    std::string verify;
};

void print_checks(std::ostream& out, const std::vector<ConstraintCheck>& checks, const std::string& prefix) {
    for (const auto& c : checks)
        out << prefix << (c.ok ? "ok   " : "FAIL ") << c.name << " (" << c.detail << ")\n";
}

int cmd_pattern_search(const Common& c, const PatternArgs& a) {
    if (!a.verify.empty()) {
        std::ifstream in(a.verify);
        if (!in) throw UsageError("cannot open " + a.verify);
        PatternQuadruple q;
        std::set<std::string> seen;
        std::string line;
        while (std::getline(in, line)) {
            if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
            std::istringstream ls(line);
            std::string name, pat;
            if (!(ls >> name)) continue;
            if (!(ls >> pat)) throw std::runtime_error("fixture line '" + name + "' has no pattern");
            TogglingPattern p = TogglingPattern::parse(pat);
            if (name == "A") q.A = p;
            else if (name == "B") q.B = p;
            else if (name == "C") q.C = p;
            else if (name == "D") q.D = p;
            else continue;
            seen.insert(name);
        }
        if (seen.size() != 4) throw std::runtime_error("fixture must define A, B, C and D");
        const auto checks = check_quadruple(q);
        print_checks(std::cout, checks, "");
        return satisfies_all(q) ? 0 : 1;
    }

    if (a.slots < 2 || a.slots > 20 || a.slots % 2) throw UsageError("--slots must be even, between 2 and 20");
    const auto q = pattern_search(a.slots);
    if (!q) {
        std::cout << "no quadruple satisfies all constraints at " << a.slots << " slots\n";
        return 0;
    }
    std::cout << count_quadruples(a.slots) << " quadruple(s) at " << a.slots << " slots\n";
    const auto path = a.out.empty() ? output_path(c.output_dir, "patterns.txt") : fs::path(a.out);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "# toggling-pattern quadruple, slot length " << slot_length << ", " << a.slots << " slots\n";
    out << "A " << q->A.str() << "\nB " << q->B.str() << "\nC " << q->C.str() << "\nD " << q->D.str() << '\n';
    const auto rot = rotation_patterns(a.slots);
    out << "V1 " << rot.V1.str() << "\nV2 " << rot.V2.str() << '\n';
    print_checks(out, check_quadruple(*q), "# ");
    print_checks(std::cout, check_quadruple(*q), "");
    std::cout << "wrote " << path.string() << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pulse-level simulation of decoupling-protected gates"};
    app.set_config("--config", "", "key = value configuration file; flags override it");
    app.require_subcommand(1);
    Common common;
    const char* env = std::getenv("DDGATE_OUTPUT_DIR");
    common.output_dir = env && *env ? env : ".";
    app.add_option("-o,--output-dir", common.output_dir, "directory for outputs (default $DDGATE_OUTPUT_DIR or .)");
    app.add_option("-j,--workers", common.workers, "worker threads")->check(CLI::Range(1, 1024));

    OptimizeArgs oa;
    auto* opt = app.add_subcommand("pulse-optimize", "optimize self-refocusing pulse shapes");
    opt->add_option("--shape", oa.shapes, "angle:axis targets, e.g. pi:x pi/2:y");
    opt->add_option("--order", oa.order, "self-refocusing order (1 or 2)");
    opt->add_option("--harmonics", oa.harmonics, "cosine harmonics (default order + 1)");
    opt->add_option("--library", oa.library, "library file to create or update");
    opt->add_option("--seed", oa.seed, "restart seed");
    opt->add_option("--starts", oa.starts, "optimizer starts")->check(CLI::Range(1, 1000));

    BenchArgs ba;
    auto* bench = app.add_subcommand("gate-bench", "gate infidelity against chemical-shift disorder");
    bench->add_option("--graph", ba.graph, "graph file or chain:n");
    bench->add_option("--m", ba.m, "ZZ repetitions per CNOT");
    bench->add_option("--J", ba.J, "coupling (default pi/(16 m))");
    bench->add_option("--pulses", ba.pulses, "shaped, gaussian or hard");
    bench->add_option("--order", ba.order, "order of shaped pulses");
    bench->add_option("--library", ba.library, "pulse library file");
    bench->add_option("--delta-min", ba.delta_min);
    bench->add_option("--delta-max", ba.delta_max);
    bench->add_option("--points", ba.points, "logarithmic grid points");
    bench->add_option("--draws", ba.draws, "shift draws per point");
    bench->add_option("--seed", ba.seed);
    bench->add_option("--dt", ba.dt, "integration step, e.g. 1/256");
    bench->add_option("--gates", ba.gates, "rotation and/or cnot");
    bench->add_option("--rotation-qubit", ba.rotation_qubit);
    bench->add_option("--rotation-axis", ba.rotation_axis);
    bench->add_option("--rotation-angle", ba.rotation_angle);
    bench->add_option("--cnot", ba.cnot_pair, "control and target")->expected(2);

    ZenoArgs za;
    auto* zeno = app.add_subcommand("zeno", "repeated syndrome measurement of the [[4,2,2]] code");
    zeno->add_option("--modes", za.modes, "WM, NM and/or NP");
    zeno->add_option("--tau-c", za.tau_c, "noise correlation times");
    zeno->add_option("--sigma", za.sigma, "r.m.s. noise amplitudes");
    zeno->add_option("--cycles", za.cycles);
    zeno->add_option("--realizations", za.realizations);
    zeno->add_option("--seed", za.seed);
    zeno->add_option("--dt", za.dt, "integration step, e.g. 1/256");
    zeno->add_option("--pulses", za.pulses, "shaped, gaussian or hard");
    zeno->add_option("--order", za.order);
    zeno->add_option("--library", za.library, "pulse library file");
    zeno->add_option("--m", za.m);
    zeno->add_option("--J", za.J, "coupling (default pi/(16 m))");
    zeno->add_flag("--pulse-encoding", za.pulse_encoding, "simulate encoding and decoding at pulse level");

    PatternArgs pa;
    auto* pat = app.add_subcommand("pattern-search", "search or verify toggling patterns");
    pat->add_option("--slots", pa.slots);
    pat->add_option("--out", pa.out, "fixture file (default <output-dir>/patterns.txt)");
    pat->add_option("--verify", pa.verify, "re-check an existing fixture");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*opt) return cmd_pulse_optimize(common, oa);
        if (*bench) return cmd_gate_bench(common, ba);
        if (*zeno) return cmd_zeno(common, za);
        if (*pat) return cmd_pattern_search(common, pa);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
