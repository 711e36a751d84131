#pragma once

#include <array>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "modham/cauchy.hpp"
#include "modham/entropy.hpp"
#include "modham/errors.hpp"
#include "modham/grid.hpp"
#include "modham/modular.hpp"
#include "modham/oracle.hpp"

namespace modham {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// ---- deterministic JSON emission --------------------------------------------
//
// nlohmann's dump() uses shortest-round-trip floats; reports here want a
// fixed width (17 significant digits) so identical runs are byte-identical
// across serializer versions.

namespace detail {

inline void dump_json(const Json& j, std::string& out, int indent, int depth) {
    auto pad = [&](int n) { out.append(static_cast<std::size_t>(n) * 2, ' '); };
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) { out += "{}"; return; }
            out += "{\n";
            std::size_t i = 0;
            for (auto it = j.begin(); it != j.end(); ++it, ++i) {
                pad(depth + 1);
                out += Json(it.key()).dump();
                out += ": ";
                dump_json(it.value(), out, indent, depth + 1);
                if (i + 1 < j.size()) out += ',';
                out += '\n';
            }
            pad(depth);
            out += '}';
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) { out += "[]"; return; }
            out += "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                pad(depth + 1);
                dump_json(j[i], out, indent, depth + 1);
                if (i + 1 < j.size()) out += ',';
                out += '\n';
            }
            pad(depth);
            out += ']';
            return;
        }
        case Json::value_t::number_float: {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", j.get<double>());
            out += buf;
            return;
        }
        default:
            out += j.dump();
            return;
    }
}

} // namespace detail

inline std::string dump_deterministic(const Json& j) {
    std::string out;
    detail::dump_json(j, out, 2, 0);
    out += '\n';
    return out;
}

/// Write via a temp file in the same directory plus rename.
inline void atomic_write(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path dir = target.parent_path();
    if (dir.empty()) dir = ".";
    fs::path tmp = dir / (target.filename().string() + ".tmp");
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw ConfigError("atomic_write: cannot open " + tmp.string());
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!f) throw ConfigError("atomic_write: short write to " + tmp.string());
    }
    fs::rename(tmp, target);
}

// ---- wave-spec ---------------------------------------------------------------

struct WaveComponent {
    ProfileKind kind = ProfileKind::Bump;
    std::array<double, 3> center{0.0, 0.0, 0.0};
    double radius = 1.0;
    double amplitude = 1.0;
    char target = 'f'; // 'f' or 'g'
};

struct WaveSpec {
    GridSpec grid;
    double m = 0.0;
    std::vector<WaveComponent> components;
};

namespace detail {

inline void parse_components(const Json& arr, std::vector<WaveComponent>& out) {
    if (!arr.is_array()) throw ConfigError("wave-spec: components must be an array");
    for (const auto& c : arr) {
        std::string kind = c.value("kind", "bump");
        if (kind == "sum") {
            if (!c.contains("components"))
                throw ConfigError("wave-spec: sum component needs nested components");
            parse_components(c.at("components"), out);
            continue;
        }
        WaveComponent wc;
        if (kind == "bump") wc.kind = ProfileKind::Bump;
        else if (kind == "gaussian-mollified-bump") wc.kind = ProfileKind::GaussianBump;
        else throw ConfigError("wave-spec: unknown component kind '" + kind + "'");
        if (c.contains("center")) {
            auto cc = c.at("center");
            if (!cc.is_array() || cc.size() > 3)
                throw ConfigError("wave-spec: center must be an array of <= 3 numbers");
            for (std::size_t i = 0; i < cc.size(); ++i) wc.center[i] = cc[i].get<double>();
        }
        wc.radius = c.value("radius", 1.0);
        if (wc.radius <= 0.0) throw ConfigError("wave-spec: radius must be positive");
        wc.amplitude = c.value("amplitude", 1.0);
        std::string target = c.value("target", "f");
        if (target != "f" && target != "g")
            throw ConfigError("wave-spec: target must be 'f' or 'g'");
        wc.target = target[0];
        out.push_back(wc);
    }
}

} // namespace detail

inline WaveSpec parse_wave_spec(const Json& j) {
    if (!j.is_object()) throw ConfigError("wave-spec: top level must be an object");
    int ver = j.value("schemaVersion", kSchemaVersion);
    if (ver != kSchemaVersion)
        throw ConfigError("wave-spec: unsupported schemaVersion " + std::to_string(ver));
    WaveSpec spec;
    std::string mode = j.value("mode", "radial3d");
    try {
        if (mode == "radial3d") {
            spec.grid = GridSpec::radial3d(j.value("Rmax", 2.0), j.value("Nr", 512));
        } else if (mode == "cartesian-periodic") {
            spec.grid = GridSpec::cartesian(j.value("d", 3), j.value("L", 2.0),
                                            j.value("N", 64));
        } else {
            throw ConfigError("wave-spec: unknown mode '" + mode + "'");
        }
    } catch (const Json::exception& e) {
        throw ConfigError(std::string("wave-spec: ") + e.what());
    }
    spec.m = j.value("m", 0.0);
    if (spec.m < 0.0) throw ConfigError("wave-spec: mass must be >= 0");
    if (!j.contains("components")) throw ConfigError("wave-spec: missing components");
    detail::parse_components(j.at("components"), spec.components);
    return spec;
}

inline WaveSpec load_wave_spec(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open wave-spec file " + path);
    Json j;
    try {
        f >> j;
    } catch (const Json::exception& e) {
        throw ConfigError("wave-spec parse error in " + path + ": " + e.what());
    }
    return parse_wave_spec(j);
}

inline CauchyData materialize(const WaveSpec& spec) {
    CauchyData w(spec.grid, spec.m);
    for (const WaveComponent& c : spec.components) {
        Field comp = sample_profile(spec.grid, c.kind, c.center, c.radius, c.amplitude);
        Field& dst = (c.target == 'f') ? w.f : w.g;
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += comp[i];
    }
    return w;
}

// ---- report serialization ------------------------------------------------------

inline Json grid_to_json(const GridSpec& g) {
    Json j;
    j["mode"] = g.radial() ? "radial3d" : "cartesian-periodic";
    j["d"] = g.d;
    if (g.radial()) {
        j["Rmax"] = g.Rmax;
        j["Nr"] = g.Nr;
    } else {
        j["L"] = g.L;
        j["N"] = g.N;
    }
    return j;
}

inline Json entropy_report_to_json(const EntropyReport& r) {
    Json j;
    j["schemaVersion"] = kSchemaVersion;
    j["R"] = r.R;
    j["t"] = r.t;
    j["center"] = {r.center[0], r.center[1], r.center[2]};
    j["termStress"] = r.termStress;
    j["termNorm"] = r.termNorm;
    j["termYukawa"] = r.termYukawa;
    j["total"] = r.total;
    j["totalEnergyInBall"] = r.totalEnergyInBall;
    j["ratioLargeR"] = r.ratioLargeR;
    j["smallRArealDensity"] = r.smallRArealDensity;
    j["bekensteinOK"] = r.bekensteinOK;
    return j;
}

inline std::string scan_to_csv(const std::vector<EntropyReport>& reports) {
    std::ostringstream os;
    os << "R,t,termStress,termNorm,termYukawa,total,energy,ratioLargeR,bekensteinOK\n";
    char buf[40];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << buf;
    };
    for (const EntropyReport& r : reports) {
        num(r.R); os << ',';
        num(r.t); os << ',';
        num(r.termStress); os << ',';
        num(r.termNorm); os << ',';
        num(r.termYukawa); os << ',';
        num(r.total); os << ',';
        num(r.totalEnergyInBall); os << ',';
        num(r.ratioLargeR); os << ',';
        os << (r.bekensteinOK ? 1 : 0) << '\n';
    }
    return os.str();
}

/// CSV field dump: grid coordinate columns plus the sample value.
inline std::string field_to_csv(const GridSpec& g, const Field& f) {
    std::ostringstream os;
    char buf[40];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << buf;
    };
    if (g.radial()) {
        os << "r,value\n";
        for (std::size_t i = 0; i < f.size(); ++i) {
            num(g.rnode(static_cast<int>(i))); os << ',';
            num(f[i]); os << '\n';
        }
    } else {
        for (int ax = 0; ax < g.d; ++ax) os << char('x' + ax) << ',';
        os << "value\n";
        for (std::size_t i = 0; i < f.size(); ++i) {
            auto mi = g.unflatten(i);
            for (int ax = 0; ax < g.d; ++ax) { num(g.xnode(mi[ax])); os << ','; }
            num(f[i]); os << '\n';
        }
    }
    return os.str();
}

/// Raw little-endian float64 block prefixed by a one-line JSON header.
inline std::string field_to_raw(const GridSpec& g, const Field& f) {
    Json header;
    header["schemaVersion"] = kSchemaVersion;
    header["grid"] = grid_to_json(g);
    header["dtype"] = "float64le";
    header["count"] = f.size();
    std::string out = header.dump();
    out += '\n';
    static_assert(sizeof(double) == 8);
    out.append(reinterpret_cast<const char*>(f.data()), f.size() * sizeof(double));
    return out;
}

inline Json matrix_to_json(const Mat& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Json subspace_to_json(const StandardSubspace& H) {
    Json j;
    j["schemaVersion"] = kSchemaVersion;
    j["realDim"] = H.ambient.realDim();
    j["basis"] = matrix_to_json(H.basis); // row-major rows of the 2n x k matrix
    j["rankCondition"] = H.rankCondition;
    j["tolerances"] = {{"structure", H.ambient.tol().structure},
                       {"rank", H.ambient.tol().rank},
                       {"factorial", H.ambient.tol().factorial},
                       {"consistency", H.ambient.tol().consistency}};
    return j;
}

inline Json modular_data_to_json(const ModularData& md) {
    Json j;
    j["schemaVersion"] = kSchemaVersion;
    Json evs = Json::array();
    for (Eigen::Index i = 0; i < md.eigenvalues.size(); ++i) evs.push_back(md.eigenvalues(i));
    j["eigenvalues"] = std::move(evs);
    j["spectralGap"] = md.spectralGap;
    j["factorial"] = md.factorial;
    j["delta"] = matrix_to_json(md.delta);
    j["jconj"] = matrix_to_json(md.jconj);
    return j;
}

inline Json crosscheck_to_json(const CrosscheckReport& rep) {
    Json entries = Json::array();
    for (const auto& e : rep.entries) {
        Json je;
        je["discrete"] = e.discrete;
        je["continuum"] = e.continuum;
        je["relDev"] = e.relDev;
        je["projectionResidual"] = e.projectionResidual;
        entries.push_back(std::move(je));
    }
    Json j;
    j["entries"] = std::move(entries);
    j["medianRelDev"] = rep.medianRelDev;
    j["maxRelDev"] = rep.maxRelDev;
    return j;
}

} // namespace modham
