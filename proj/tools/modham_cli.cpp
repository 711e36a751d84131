// Command-line surface: wave-spec ingestion, subcommand dispatch, result
// emission, verification battery.

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "modham/modham.hpp"

namespace {

using namespace modham;

struct CommonOpts {
    std::string wavePath;
    std::string outPath;
    std::string format = "json";
    std::optional<std::string> mode;
    std::optional<double> Rmax, L, m;
    std::optional<int> Nr, N, d;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needsWave) {
    auto* w = cmd->add_option("--wave", o.wavePath, "wave-spec JSON file");
    if (needsWave) w->required();
    cmd->add_option("--out", o.outPath, "output path (default: stdout)");
    cmd->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--mode", o.mode, "grid mode override (radial3d | cartesian-periodic)");
    cmd->add_option("--Rmax", o.Rmax, "radial grid truncation override");
    cmd->add_option("--Nr", o.Nr, "radial point count override");
    cmd->add_option("--L", o.L, "box half-length override");
    cmd->add_option("--N", o.N, "points per axis override");
    cmd->add_option("--d", o.d, "spatial dimension override (cartesian)");
    cmd->add_option("--m", o.m, "mass override");
}

WaveSpec load_spec(const CommonOpts& o) {
    std::ifstream f(o.wavePath);
    if (!f) throw ConfigError("cannot open wave-spec file " + o.wavePath);
    Json j;
    try {
        f >> j;
    } catch (const Json::exception& e) {
        throw ConfigError("wave-spec parse error in " + o.wavePath + ": " + e.what());
    }
    if (o.mode) j["mode"] = *o.mode;
    if (o.Rmax) j["Rmax"] = *o.Rmax;
    if (o.Nr) j["Nr"] = *o.Nr;
    if (o.L) j["L"] = *o.L;
    if (o.N) j["N"] = *o.N;
    if (o.d) j["d"] = *o.d;
    if (o.m) j["m"] = *o.m;
    return parse_wave_spec(j);
}

void emit(const CommonOpts& o, const std::string& content) {
    if (o.outPath.empty()) {
        std::cout << content;
    } else {
        atomic_write(o.outPath, content);
    }
}

std::array<double, 3> parse_center(const std::vector<double>& v) {
    if (v.size() > 3) throw ConfigError("--center takes at most 3 coordinates");
    std::array<double, 3> c{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < v.size(); ++i) c[i] = v[i];
    return c;
}

int run_entropy(const CommonOpts& o, double R, const std::vector<double>& center, double t) {
    CauchyData w = materialize(load_spec(o));
    EntropyReport rep = entropy_ball(w, R, parse_center(center), t);
    emit(o, dump_deterministic(entropy_report_to_json(rep)));
    return 0;
}

int run_scan(const CommonOpts& o, const std::vector<double>& radii,
             const std::vector<double>& center, double t) {
    if (radii.empty()) throw ConfigError("scan: need at least one radius via --R");
    CauchyData w = materialize(load_spec(o));
    auto reports = radius_scan(w, parse_center(center), t, radii);
    if (o.format == "csv") {
        emit(o, scan_to_csv(reports));
    } else {
        Json arr = Json::array();
        for (const auto& r : reports) arr.push_back(entropy_report_to_json(r));
        Json j;
        j["schemaVersion"] = kSchemaVersion;
        j["reports"] = std::move(arr);
        emit(o, dump_deterministic(j));
    }
    return 0;
}

int run_hamiltonian(const CommonOpts& o, double R) {
    CauchyData w = materialize(load_spec(o));
    QuadraticFormBreakdown q = quadratic_form_massive(w, R);
    double me = matrix_element_logDelta(w, w, R);
    if (o.format == "csv") {
        std::ostringstream os;
        os << "R,stress,norm,yukawa,total,matrixElement\n";
        char buf[40];
        auto num = [&](double v) { std::snprintf(buf, sizeof buf, "%.17g", v); os << buf; };
        num(R); os << ',';
        num(q.stress); os << ',';
        num(q.norm); os << ',';
        num(q.yukawa); os << ',';
        num(q.total()); os << ',';
        num(me); os << '\n';
        emit(o, os.str());
    } else {
        Json j;
        j["schemaVersion"] = kSchemaVersion;
        j["R"] = R;
        j["stress"] = q.stress;
        j["norm"] = q.norm;
        j["yukawa"] = q.yukawa;
        j["total"] = q.total();
        j["matrixElement"] = me;
        emit(o, dump_deterministic(j));
    }
    return 0;
}

int run_flow(const CommonOpts& o, double s) {
    CauchyData w = materialize(load_spec(o));
    FlowResult res = flow_geometric(w, s);
    Json j;
    j["schemaVersion"] = kSchemaVersion;
    j["s"] = s;
    j["grid"] = grid_to_json(w.grid);
    j["leakage"] = res.leakage;
    j["f"] = res.wave.f;
    j["g"] = res.wave.g;
    emit(o, dump_deterministic(j));
    return 0;
}

int run_verify(const CommonOpts& o, unsigned seed) {
    auto results = run_battery(seed);
    std::ostringstream table;
    bool allPass = true;
    std::size_t width = 0;
    for (const auto& r : results) width = std::max(width, r.name.size());
    for (const auto& r : results) {
        allPass = allPass && r.pass;
        table << (r.pass ? "PASS  " : "FAIL  ") << r.name
              << std::string(width - r.name.size() + 2, ' ');
        char buf[64];
        std::snprintf(buf, sizeof buf, "residual %.3e  tol %.3e\n", r.residual, r.tolerance);
        table << buf;
    }
    if (!o.outPath.empty() || o.format == "json") {
        Json arr = Json::array();
        for (const auto& r : results) {
            Json e;
            e["name"] = r.name;
            e["residual"] = r.residual;
            e["tolerance"] = r.tolerance;
            e["pass"] = r.pass;
            arr.push_back(std::move(e));
        }
        Json j;
        j["schemaVersion"] = kSchemaVersion;
        j["seed"] = seed;
        j["allPass"] = allPass;
        j["checks"] = std::move(arr);
        emit(o, dump_deterministic(j));
        if (o.outPath.empty()) std::cerr << table.str();
    } else {
        std::cout << table.str();
    }
    return allPass ? 0 : 1;
}

int run_oracle(const CommonOpts& o, const std::vector<double>& masses,
               const std::vector<int>& basisSizes, double Rmax, int Nr) {
    GridSpec g = GridSpec::radial3d(Rmax, Nr);
    Json perMass = Json::array();
    for (double m : masses) {
        std::vector<CauchyData> fixtures = oracle_fixtures(g, m);
        Json perBasis = Json::array();
        for (int n : basisSizes) {
            OracleModel model = build_discretized(g, m, n);
            CrosscheckReport ham = crosscheck_hamiltonian(model, fixtures, 0.05);
            CrosscheckReport ent = crosscheck_entropy(model, fixtures, 0.05);
            Json e;
            e["nBasis"] = n;
            e["gramCondition"] = model.gramCondition;
            e["spectralGap"] = model.md.spectralGap;
            e["hamiltonian"] = crosscheck_to_json(ham);
            e["entropy"] = crosscheck_to_json(ent);
            perBasis.push_back(std::move(e));
        }
        Json jm;
        jm["m"] = m;
        jm["levels"] = std::move(perBasis);
        perMass.push_back(std::move(jm));
    }
    Json j;
    j["schemaVersion"] = kSchemaVersion;
    j["grid"] = grid_to_json(g);
    j["results"] = std::move(perMass);
    emit(o, dump_deterministic(j));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"local modular Hamiltonian and wave-packet entropy toolkit"};
    app.require_subcommand(1);

    CommonOpts entropyOpts, scanOpts, hamOpts, flowOpts, verifyOpts, oracleOpts;
    double entropyR = 1.0, hamR = 1.0, flowS = 0.0, t = 0.0, scanT = 0.0;
    std::vector<double> entropyCenter, scanCenter, scanRadii;
    unsigned seed = 7;
    std::vector<double> oracleMasses{0.0, 1.0};
    std::vector<int> oracleBasis{12, 24};
    double oracleRmax = 2.0;
    int oracleNr = 512;

    auto* cEntropy = app.add_subcommand("entropy", "entropy of a wave packet in a ball");
    add_common(cEntropy, entropyOpts, true);
    cEntropy->add_option("--R", entropyR, "ball radius");
    cEntropy->add_option("--center", entropyCenter, "ball center coordinates");
    cEntropy->add_option("--t", t, "evaluation time");

    auto* cScan = app.add_subcommand("scan", "entropy over a list of radii");
    add_common(cScan, scanOpts, true);
    scanOpts.format = "csv";
    cScan->add_option("--R", scanRadii, "ball radii")->delimiter(',');
    cScan->add_option("--center", scanCenter, "ball center coordinates");
    cScan->add_option("--t", scanT, "evaluation time");

    auto* cHam = app.add_subcommand("hamiltonian", "modular Hamiltonian quadratic form");
    add_common(cHam, hamOpts, true);
    cHam->add_option("--R", hamR, "ball radius");

    auto* cFlow = app.add_subcommand("flow", "geometric modular flow (massless, radial3d)");
    add_common(cFlow, flowOpts, true);
    cFlow->add_option("--s", flowS, "flow parameter")->required();

    auto* cVerify = app.add_subcommand("verify", "run the invariant battery");
    verifyOpts.format = "text";
    cVerify->add_option("--out", verifyOpts.outPath, "output path (default: stdout)");
    cVerify->add_option("--format", verifyOpts.format, "output format")
        ->check(CLI::IsMember({"json", "text"}));
    cVerify->add_option("--seed", seed, "random seed");

    auto* cOracle = app.add_subcommand("oracle", "finite-dimensional refinement report");
    cOracle->add_option("--out", oracleOpts.outPath, "output path (default: stdout)");
    cOracle->add_option("--masses", oracleMasses, "mass values")->delimiter(',');
    cOracle->add_option("--nbasis", oracleBasis, "basis sizes")->delimiter(',');
    cOracle->add_option("--Rmax", oracleRmax, "radial grid truncation");
    cOracle->add_option("--Nr", oracleNr, "radial point count");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (cEntropy->parsed()) return run_entropy(entropyOpts, entropyR, entropyCenter, t);
        if (cScan->parsed()) return run_scan(scanOpts, scanRadii, scanCenter, scanT);
        if (cHam->parsed()) return run_hamiltonian(hamOpts, hamR);
        if (cFlow->parsed()) return run_flow(flowOpts, flowS);
        if (cVerify->parsed()) return run_verify(verifyOpts, seed);
        if (cOracle->parsed())
            return run_oracle(oracleOpts, oracleMasses, oracleBasis, oracleRmax, oracleNr);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
