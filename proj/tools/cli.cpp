#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "cg/ambient.hpp"
#include "cg/parallel.hpp"

namespace cgcli {

using nlohmann::json;

namespace {

const std::set<std::string> kTopKeys = {"data",   "grid",    "invariants", "jet_order", "lambda", "output",
                                        "points", "samples", "seed",       "surface",   "tolerances"};

std::vector<double> number_list(const json& j, const char* what) {
    if (!j.is_array()) throw ConfigError(std::string(what) + ": expected an array of numbers");
    std::vector<double> v;
    for (auto& e : j) {
        if (!e.is_number()) throw ConfigError(std::string(what) + ": expected numbers");
        v.push_back(e.get<double>());
    }
    return v;
}

cg::SurfaceChart parse_surface(const json& s, json& canon) {
    if (!s.is_object() || !s.contains("kind")) throw ConfigError("surface: need an object with a kind");
    std::string kind = s.at("kind").get<std::string>();
    canon["kind"] = kind;
    if (kind == "mobius_image") {
        if (!s.contains("base") || !s.contains("transform"))
            throw ConfigError("mobius_image: need base and transform");
        json base;
        auto b = parse_surface(s.at("base"), base);
        canon["base"] = base;
        std::string t = s.at("transform").get<std::string>();
        canon["transform"] = t;
        return cg::SurfaceChart::mobius_image(b, parse_transform(t));
    }
    auto p = s.contains("params") ? number_list(s.at("params"), "surface.params") : std::vector<double>{};
    canon["params"] = p;
    if (kind == "flat_torus" && p.size() == 1 && !(p[0] > 0 && p[0] < 1))
        throw ConfigError("flat_torus: need 0 < r < 1");
    try {
        return cg::SurfaceChart::from_name(kind, p);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace

// ---- config ----

RunConfig parse_config(const json& j) {
    if (!j.is_object()) throw ConfigError("config: expected a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!kTopKeys.count(it.key())) throw ConfigError("config: unknown key " + it.key());
    RunConfig c;
    json canon;

    json s = j.value("surface", json{{"kind", "clifford"}});
    c.chart = parse_surface(s, canon["surface"]);

    json l = j.value("lambda", json{{"kind", "constant"}, {"params", {1.0}}});
    if (!l.is_object() || !l.contains("kind")) throw ConfigError("lambda: need an object with a kind");
    auto lp = l.contains("params") ? number_list(l.at("params"), "lambda.params") : std::vector<double>{};
    try {
        c.lambda = cg::ConformalFactor::from_name(l.at("kind").get<std::string>(), lp);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (c.lambda.is_constant() && !(c.lambda.a() > 0)) throw ConfigError("lambda: constant must be positive");
    if (!c.lambda.is_constant()) {
        auto& b = c.lambda.b();
        if (!(c.lambda.a() > std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2] + b[3] * b[3])))
            throw ConfigError("lambda: affine needs a > |b|");
    }
    canon["lambda"] = {{"kind", c.lambda.name()}, {"params", c.lambda.params()}};

    const cg::Domain& d = c.chart.domain();
    json g = j.value("grid", json::object());
    if (!g.is_object()) throw ConfigError("grid: expected an object");
    c.grid.nu = g.value("nu", 64);
    c.grid.nv = g.value("nv", 64);
    if (c.grid.nu < 8 || c.grid.nv < 8) throw ConfigError("grid: nu and nv must be at least 8");
    auto range = [&](const char* key, double period, double* r) {
        if (g.contains(key)) {
            auto v = number_list(g.at(key), key);
            if (v.size() != 2 || !(v[1] > v[0])) throw ConfigError(std::string("grid.") + key + ": need [lo, hi]");
            r[0] = v[0], r[1] = v[1];
        } else {
            r[0] = 0, r[1] = period;
        }
    };
    range("u_range", d.u_period, c.grid.u_range);
    range("v_range", d.v_period, c.grid.v_range);
    if (g.contains("periodic")) {
        auto p = g.at("periodic");
        if (!p.is_array() || p.size() != 2) throw ConfigError("grid.periodic: need two booleans");
        c.grid.periodic[0] = p[0].get<bool>();
        c.grid.periodic[1] = p[1].get<bool>();
    }
    const double per[2] = {d.u_period, d.v_period};
    const double* rr[2] = {c.grid.u_range, c.grid.v_range};
    for (int k = 0; k < 2; ++k)
        if (c.grid.periodic[k] && std::abs(rr[k][1] - rr[k][0] - per[k]) > 1e-12 * std::max(1.0, per[k]))
            throw ConfigError("grid: a periodic axis must span one period of the chart");
    canon["grid"] = {{"nu", c.grid.nu},
                     {"nv", c.grid.nv},
                     {"u_range", {c.grid.u_range[0], c.grid.u_range[1]}},
                     {"v_range", {c.grid.v_range[0], c.grid.v_range[1]}},
                     {"periodic", {c.grid.periodic[0], c.grid.periodic[1]}}};

    c.jet_order = j.value("jet_order", 6);
    if (c.jet_order < 3 || c.jet_order > 6) throw ConfigError("jet_order must be in [3, 6]");
    canon["jet_order"] = c.jet_order;

    if (j.contains("points")) {
        for (auto& p : j.at("points")) {
            auto v = number_list(p, "points");
            if (v.size() != 2 || !(v[0] > 0)) throw ConfigError("points: need [alpha > 0, rho]");
            c.points.push_back({v[0], v[1]});
        }
    }
    canon["points"] = json::array();
    for (auto& p : c.points) canon["points"].push_back({p[0], p[1]});

    if (j.contains("invariants")) {
        for (auto& n : j.at("invariants")) {
            std::string name = n.get<std::string>();
            const auto& cat = cg::invariant_catalog();
            if (std::none_of(cat.begin(), cat.end(), [&](const cg::InvariantInfo& i) { return i.name == name; }))
                throw ConfigError("invariants: unknown name " + name);
            c.invariants.push_back(name);
        }
        std::sort(c.invariants.begin(), c.invariants.end());
        c.invariants.erase(std::unique(c.invariants.begin(), c.invariants.end()), c.invariants.end());
    }
    canon["invariants"] = c.invariants;

    if (j.contains("tolerances")) {
        for (auto it = j.at("tolerances").begin(); it != j.at("tolerances").end(); ++it) {
            double t = it.value().get<double>();
            if (!(t > 0)) throw ConfigError("tolerances: " + it.key() + " must be positive");
            c.tolerances[it.key()] = t;
        }
    }
    canon["tolerances"] = c.tolerances;

    json o = j.value("output", json::object());
    c.out_path = o.value("path", "");
    c.format = o.value("format", "json");
    if (c.format != "json" && c.format != "csv") throw ConfigError("output.format must be json or csv");
    canon["output"] = {{"path", c.out_path}, {"format", c.format}};

    c.data_path = j.value("data", "");
    canon["data"] = c.data_path;
    c.samples = j.value("samples", 100);
    if (c.samples < 1) throw ConfigError("samples must be positive");
    canon["samples"] = c.samples;
    c.seed = j.value("seed", std::uint64_t{20240601});
    canon["seed"] = c.seed;

    c.source = canon;
    return c;
}

RunConfig load_config(const std::string& path) {
    if (path.empty()) return parse_config(json::object());
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return parse_config(j);
}

std::string RunConfig::fingerprint() const {
    std::ostringstream s;
    // where the result is written does not change it
    json c = source;
    if (c.contains("output")) c["output"].erase("path");
    s << std::hex << std::setw(16) << std::setfill('0') << fnv1a(c.dump());
    return s.str();
}

cg::Grid RunConfig::make_grid() const {
    cg::Grid g;
    g.n[0] = grid.nu + 1;
    g.n[1] = grid.nv + 1;
    g.u0[0] = grid.u_range[0];
    g.u0[1] = grid.v_range[0];
    g.h[0] = (grid.u_range[1] - grid.u_range[0]) / grid.nu;
    g.h[1] = (grid.v_range[1] - grid.v_range[0]) / grid.nv;
    g.periodic[0] = grid.periodic[0];
    g.periodic[1] = grid.periodic[1];
    return g;
}

cg::LorentzMap parse_transform(const std::string& spec) {
    auto colon = spec.find(':');
    if (colon == std::string::npos) throw ConfigError("seed transform: expected kind:args");
    std::string kind = spec.substr(0, colon);
    std::vector<double> a;
    std::stringstream ss(spec.substr(colon + 1));
    for (std::string tok; std::getline(ss, tok, ',');) {
        try {
            std::size_t used = 0;
            a.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw ConfigError("seed transform: bad number '" + tok + "'");
        }
    }
    if (kind == "boost") {
        // boost:axis,rapidity with axis in 1..4, or boost:d1,d2,d3,d4,rapidity
        cg::Vec4 dir{0, 0, 0, 0};
        if (a.size() == 2) {
            int ax = static_cast<int>(a[0]);
            if (ax < 1 || ax > 4 || ax != a[0]) throw ConfigError("boost: axis must be 1..4");
            dir[ax - 1] = 1;
        } else if (a.size() == 5) {
            double n = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2] + a[3] * a[3]);
            if (!(n > 0)) throw ConfigError("boost: zero direction");
            for (int k = 0; k < 4; ++k) dir[k] = a[k] / n;
        } else {
            throw ConfigError("boost: expected axis,rapidity or d1,d2,d3,d4,rapidity");
        }
        return cg::make_boost(dir, a.back());
    }
    if (kind == "rotation") {
        if (a.size() != 3) throw ConfigError("rotation: expected i,j,angle");
        int i = static_cast<int>(a[0]), k = static_cast<int>(a[1]);
        if (i != a[0] || k != a[1] || i < 1 || k < 1 || i > 4 || k > 4 || i == k)
            throw ConfigError("rotation: axes must be distinct in 1..4");
        return cg::make_rotation(i, k, a[2]);
    }
    throw ConfigError("seed transform: unknown kind " + kind);
}

// ---- tabulated data ----

json data_to_json(const cg::ConformalData& d) {
    const cg::Grid& g = d.grid();
    json j;
    j["grid"] = {{"n", {g.n[0], g.n[1]}},
                 {"u0", {g.u0[0], g.u0[1]}},
                 {"h", {g.h[0], g.h[1]}},
                 {"periodic", {g.periodic[0], g.periodic[1]}},
                 {"order", "row-major, index i * n[1] + j with i along u1"}};
    for (int f = 0; f < cg::ConformalData::kFields; ++f) j["fields"][cg::ConformalData::field_name(f)] = d.field(f);
    return j;
}

cg::ConformalData data_from_json(const json& j) {
    try {
        const json& gj = j.at("grid");
        cg::Grid g;
        for (int k = 0; k < 2; ++k) {
            g.n[k] = gj.at("n").at(k).get<int>();
            g.u0[k] = gj.at("u0").at(k).get<double>();
            g.h[k] = gj.at("h").at(k).get<double>();
            g.periodic[k] = gj.at("periodic").at(k).get<bool>();
            if (!(g.h[k] > 0)) throw ConfigError("data: grid spacing must be positive");
        }
        std::array<std::vector<double>, cg::ConformalData::kFields> fields;
        for (int f = 0; f < cg::ConformalData::kFields; ++f)
            fields[f] = j.at("fields").at(cg::ConformalData::field_name(f)).get<std::vector<double>>();
        return cg::ConformalData::tabulated(g, std::move(fields));
    } catch (const json::exception& e) {
        throw ConfigError(std::string("data: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("data: ") + e.what());
    }
}

cg::ConformalData load_data(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open data " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("data parse error: ") + e.what());
    }
    return data_from_json(j);
}

void save_data(const cg::ConformalData& d, const std::string& path) {
    std::ofstream o(path);
    if (!o) throw ConfigError("cannot write " + path);
    o << data_to_json(d).dump() << '\n';
}

// ---- commands ----

namespace {

// Result text goes to the configured path when there is one, otherwise to out.
void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
    if (cfg.out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream o(cfg.out_path);
    if (!o) throw ConfigError("cannot write " + cfg.out_path);
    o << text;
}

std::string num(double v) {
    std::ostringstream s;
    s << std::setprecision(17) << v;
    return s.str();
}

struct Record {
    int i = 0, j = 0;
    double u1 = 0, u2 = 0;
    double E = 0, H = 0, K = 0, normII2 = 0;
    bool conformal = false;
    double m = 0, willmore = 0, a = 0;
    std::vector<cg::InvariantRecord> inv;
    std::vector<std::array<double, 2>> ambient;  // (H~, det G) per configured point
    std::array<double, 5> resid{};
};

const char* kResidNames[5] = {"enveloping", "mobius_metric", "omega_is_II0", "ydagger", "ystar"};

}  // namespace

int cmd_compute(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    const cg::Grid g = cfg.make_grid();
    const int ni = g.n[0] - (g.periodic[0] ? 1 : 0), nj = g.n[1] - (g.periodic[1] ? 1 : 0);
    if (cfg.jet_order < 6 && !cfg.invariants.empty())
        throw ConfigError("invariants need jet_order 6");
    if (cfg.jet_order < 4 && !cfg.points.empty()) throw ConfigError("ambient points need jet_order >= 4");
    std::vector<Record> rec(ni * nj);
    cg::parallel_for(ni * nj, [&](int k) {
        Record& r = rec[k];
        r.i = k / nj, r.j = k % nj;
        r.u1 = g.u(0, r.i), r.u2 = g.u(1, r.j);
        auto where = [&] {
            std::ostringstream s;
            s << " at grid point (" << r.i << ", " << r.j << "), u = (" << num(r.u1) << ", " << num(r.u2) << ")";
            return s.str();
        };
        auto cl = cg::classical_geometry(cfg.chart, r.u1, r.u2, std::max(cfg.jet_order, 2), cfg.jet_order);
        r.E = cl.E.value(), r.H = cl.H.value(), r.K = cl.K.value();
        double o11 = cl.o11.value(), o12 = cl.o12.value();
        r.normII2 = 2 * (o11 * o11 + o12 * o12) / (r.E * r.E);
        if (r.normII2 * r.E * r.E < cg::kUmbilicEps) throw cg::UmbilicPoint("umbilic point" + where());
        if (cfg.jet_order < 4) return;
        cg::FrameState f;
        try {
            f = cg::frame_state(cfg.chart, cfg.lambda, r.u1, r.u2, cfg.jet_order, cfg.jet_order);
        } catch (const cg::UmbilicPoint&) {
            throw cg::UmbilicPoint("umbilic point" + where());
        }
        r.conformal = true;
        r.m = f.m.value();
        r.willmore = cg::willmore_from_trace(f);
        r.a = cg::conformal_transform(f).a;
        auto id = cg::frame_identities(f);
        r.resid = {id.enveloping, id.mobius_metric, id.omega_is_II0, id.ydagger, id.ystar};
        if (!cfg.invariants.empty()) {
            for (auto& v : cg::invariant_suite(f, 1.0))
                if (std::binary_search(cfg.invariants.begin(), cfg.invariants.end(), v.name)) r.inv.push_back(v);
            std::sort(r.inv.begin(), r.inv.end(), [](auto& a, auto& b) { return a.name < b.name; });
        }
        for (auto& p : cfg.points) {
            try {
                auto af = cg::ambient_forms(f, p[0], p[1]);
                r.ambient.push_back({af.Htilde, af.detG});
            } catch (const cg::DegeneratePoint&) {
                throw cg::DegeneratePoint("degenerate ambient point alpha = " + num(p[0]) + ", rho = " + num(p[1]) +
                                          where());
            }
        }
    });

    std::array<double, 5> mx{}, mean{};
    int cnt = 0;
    for (auto& r : rec) {
        if (!r.conformal) continue;
        ++cnt;
        for (int k = 0; k < 5; ++k) mx[k] = std::max(mx[k], r.resid[k]), mean[k] += r.resid[k];
    }
    for (auto& v : mean) v = cnt ? v / cnt : 0.0;
    const std::string fp = cfg.fingerprint();

    std::ostringstream s;
    if (cfg.format == "json") {
        json j;
        j["fingerprint"] = fp;
        j["config"] = cfg.source;
        j["records"] = json::array();
        for (auto& r : rec) {
            json e = {{"fingerprint", fp}, {"i", r.i}, {"j", r.j}, {"u1", r.u1}, {"u2", r.u2},
                      {"classical", {{"E", r.E}, {"H", r.H}, {"K", r.K}, {"normII2", r.normII2}}}};
            if (r.conformal) {
                e["conformal"] = {{"a", r.a}, {"m", r.m}, {"willmore", r.willmore}};
                e["invariants"] = json::array();
                for (auto& v : r.inv) e["invariants"].push_back({{"name", v.name}, {"order", v.order}, {"value", v.value}});
                e["ambient"] = json::array();
                for (std::size_t k = 0; k < r.ambient.size(); ++k)
                    e["ambient"].push_back({{"alpha", cfg.points[k][0]},
                                            {"rho", cfg.points[k][1]},
                                            {"Htilde", r.ambient[k][0]},
                                            {"detG", r.ambient[k][1]}});
            }
            j["records"].push_back(e);
        }
        if (cnt)
            for (int k = 0; k < 5; ++k) j["residuals"][kResidNames[k]] = {{"max", mx[k]}, {"mean", mean[k]}};
        s << j.dump(1) << '\n';
    } else {
        s << "fingerprint,i,j,u1,u2,E,H,K,normII2";
        if (cfg.jet_order >= 4) s << ",a,m,willmore";
        for (auto& n : cfg.invariants) s << ",inv_" << n;
        for (std::size_t k = 0; k < cfg.points.size(); ++k) s << ",Htilde_" << k << ",detG_" << k;
        s << '\n';
        for (auto& r : rec) {
            s << fp << ',' << r.i << ',' << r.j << ',' << num(r.u1) << ',' << num(r.u2) << ',' << num(r.E) << ','
              << num(r.H) << ',' << num(r.K) << ',' << num(r.normII2);
            if (r.conformal) s << ',' << num(r.a) << ',' << num(r.m) << ',' << num(r.willmore);
            for (auto& v : r.inv) s << ',' << num(v.value);
            for (auto& a : r.ambient) s << ',' << num(a[0]) << ',' << num(a[1]);
            s << '\n';
        }
    }
    emit(cfg, s.str(), out);
    return kOk;
}

namespace {

cg::SuiteOptions suite_options(const RunConfig& cfg, const std::optional<cg::LorentzMap>& seed_transform) {
    cg::SuiteOptions o;
    o.chart = cfg.chart;
    o.lambda = cfg.lambda;
    o.nu = cfg.grid.nu;
    o.nv = cfg.grid.nv;
    o.samples = cfg.samples;
    o.seed = cfg.seed;
    o.tolerances = cfg.tolerances;
    if (!cfg.data_path.empty()) o.data = load_data(cfg.data_path);
    o.seed_transform = seed_transform;
    return o;
}

}  // namespace

int cmd_check(const RunConfig& cfg, const std::string& suite, const std::optional<cg::LorentzMap>& seed_transform,
              std::ostream& out, std::ostream&) {
    const auto& names = cg::suite_names();
    std::vector<std::string> run;
    if (suite == "all")
        run = names;
    else if (std::find(names.begin(), names.end(), suite) != names.end())
        run = {suite};
    else
        throw ConfigError("unknown suite: " + suite);
    cg::SuiteOptions opt = suite_options(cfg, seed_transform);

    std::vector<cg::SuiteReport> reps;
    for (auto& n : run) reps.push_back(cg::run_suite(n, opt));
    bool ok = std::all_of(reps.begin(), reps.end(), [](auto& r) { return r.pass(); });
    const std::string fp = cfg.fingerprint();

    std::ostringstream table;
    for (auto& r : reps) {
        table << r.suite << ": " << (r.pass() ? "PASS" : "FAIL") << '\n';
        for (auto& c : r.items) {
            table << "  " << std::left << std::setw(30) << c.name << ' ' << std::right << std::setw(11)
                  << std::scientific << std::setprecision(3) << c.value << (c.lower_bound ? " >= " : " <= ")
                  << std::setprecision(0) << c.tolerance << "  "
                  << (c.pass() ? "ok" : (c.informational ? "differs" : "FAIL")) << (c.informational ? " (info)" : "")
                  << "  " << c.statement << '\n';
        }
    }
    if (cfg.out_path.empty()) {
        out << table.str();
        return ok ? kOk : kCheckFailed;
    }
    out << table.str();
    std::ostringstream s;
    if (cfg.format == "json") {
        json j;
        j["fingerprint"] = fp;
        j["config"] = cfg.source;
        j["pass"] = ok;
        for (auto& r : reps) {
            json items = json::array();
            for (auto& c : r.items)
                items.push_back({{"name", c.name},
                                 {"statement", c.statement},
                                 {"value", std::isfinite(c.value) ? json(c.value) : json(nullptr)},
                                 {"tolerance", c.tolerance},
                                 {"bound", c.lower_bound ? "lower" : "upper"},
                                 {"informational", c.informational},
                                 {"pass", c.pass()}});
            j["suites"][r.suite] = {{"pass", r.pass()}, {"items", items}};
        }
        s << j.dump(1) << '\n';
    } else {
        s << "fingerprint,suite,name,value,tolerance,bound,informational,pass\n";
        for (auto& r : reps)
            for (auto& c : r.items)
                s << fp << ',' << r.suite << ',' << c.name << ',' << num(c.value) << ',' << num(c.tolerance) << ','
                  << (c.lower_bound ? "lower" : "upper") << ',' << c.informational << ',' << c.pass() << '\n';
    }
    emit(cfg, s.str(), out);
    return ok ? kOk : kCheckFailed;
}

int cmd_reconstruct(const RunConfig& cfg, const std::optional<cg::LorentzMap>& seed_transform, std::ostream& out,
                    std::ostream&) {
    const bool from_chart = cfg.data_path.empty();
    cg::ConformalData data =
        from_chart ? cg::ConformalData::from_chart(cfg.chart, cfg.lambda, cfg.make_grid()) : load_data(cfg.data_path);
    const cg::Grid& g = data.grid();
    cg::Mat5 seed = from_chart ? cg::exact_seed(cfg.chart, cfg.lambda, g.u0[0], g.u0[1]) : cg::standard_seed();
    if (seed_transform) seed = cg::transform_seed(*seed_transform, seed);

    cg::IntegrateOptions io;
    cg::FrameField rec = cg::integrate_structure_equations(data, seed, io);
    io.check_integrability = false;
    io.sweep = cg::Sweep::column_first;
    cg::FrameField col = cg::integrate_structure_equations(data, seed, io);
    cg::ExtractedSurface surf = cg::extract_surface(rec);

    cg::FrameInvariants ri = cg::frame_invariants(rec), di = cg::data_invariants(data);
    auto dev = [](const std::vector<double>& a, const std::vector<double>& b) {
        double r = 0;
        for (std::size_t k = 0; k < a.size(); ++k) r = std::max(r, std::abs(a[k] - b[k]));
        return r;
    };
    json report = {{"gram_drift", cg::gram_drift(rec)},
                   {"path_independence", cg::max_frame_difference(rec, col)},
                   {"data_m", dev(ri.m, di.m)},
                   {"data_normII2", dev(ri.normII2, di.normII2)},
                   {"data_willmore", dev(ri.willmore, di.willmore)}};
    if (from_chart) {
        auto cmp = cg::compare_modulo_mobius(rec, cg::exact_frame_field(cfg.chart, cfg.lambda, g));
        report["source"] = {{"m", cmp.m},
                            {"normII2", cmp.normII2},
                            {"willmore", cmp.willmore},
                            {"normII2_round", cmp.normII2_round},
                            {"willmore_round", cmp.willmore_round}};
    }
    const std::string fp = cfg.fingerprint();
    std::ostringstream s;
    if (cfg.format == "json") {
        json j;
        j["fingerprint"] = fp;
        j["config"] = cfg.source;
        j["report"] = report;
        j["grid"] = data_to_json(data)["grid"];
        json x = json::array();
        for (auto& p : surf.x) x.push_back({p[0], p[1], p[2], p[3]});
        j["fields"] = {{"x", x}, {"lambda", surf.lam}};
        s << j.dump(1) << '\n';
    } else {
        s << "fingerprint,i,j,u1,u2,x1,x2,x3,x4,lambda\n";
        for (int i = 0; i < g.n[0]; ++i)
            for (int k = 0; k < g.n[1]; ++k) {
                int idx = g.index(i, k);
                auto& p = surf.x[idx];
                s << fp << ',' << i << ',' << k << ',' << num(g.u(0, i)) << ',' << num(g.u(1, k)) << ',' << num(p[0])
                  << ',' << num(p[1]) << ',' << num(p[2]) << ',' << num(p[3]) << ',' << num(surf.lam[idx]) << '\n';
            }
    }
    emit(cfg, s.str(), out);
    return kOk;
}

int cmd_catalog(const std::string& format, std::ostream& out) {
    struct Entry {
        std::string name, params;
    };
    const std::vector<Entry> surfaces = {{"clifford", ""},
                                         {"flat_torus", "r in (0, 1)"},
                                         {"mobius_image", "base surface, transform boost:... | rotation:..."}};
    const std::vector<Entry> factors = {{"affine", "a, b1, b2, b3, b4 with a > |b|"}, {"constant", "c > 0"}};
    const auto& inv = cg::invariant_catalog();
    if (format == "json") {
        json j;
        for (auto& e : surfaces) j["surfaces"].push_back({{"name", e.name}, {"params", e.params}});
        for (auto& e : factors) j["lambda"].push_back({{"name", e.name}, {"params", e.params}});
        for (auto& i : inv) j["invariants"].push_back({{"name", i.name}, {"order", i.order}, {"description", i.description}});
        j["suites"] = cg::suite_names();
        out << j.dump(1) << '\n';
        return kOk;
    }
    out << "surfaces:\n";
    for (auto& e : surfaces) out << "  " << e.name << (e.params.empty() ? "" : " (" + e.params + ")") << '\n';
    out << "lambda:\n";
    for (auto& e : factors) out << "  " << e.name << " (" << e.params << ")\n";
    out << "invariants:\n";
    for (auto& i : inv) out << "  " << i.name << ": order " << i.order << "  " << i.description << '\n';
    out << "suites:\n";
    for (auto& n : cg::suite_names()) out << "  " << n << '\n';
    return kOk;
}

int guarded(const std::function<int()>& fn, std::ostream& err) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const nlohmann::json::exception& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const cg::UmbilicPoint& e) {
        err << e.what() << '\n';
        return kUmbilic;
    } catch (const cg::DegeneratePoint& e) {
        err << e.what() << '\n';
        return kDegenerate;
    } catch (const cg::IntegrabilityFailure& e) {
        err << "integrability failure: " << e.what() << '\n';
        return kIntegrability;
    } catch (const cg::GramDriftError& e) {
        err << "Gram drift: " << e.what() << '\n';
        return kGramDrift;
    } catch (const std::invalid_argument& e) {
        err << "invalid input: " << e.what() << '\n';
        return kConfigError;
    }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"conformal surface geometry in Minkowski 5-space"};
    app.require_subcommand(1);
    std::string config, out_path, format, suite, seed_spec, data_path, emit_data;
    int jobs = 0;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", config, "run configuration (JSON)");
        sub->add_option("--out", out_path, "output path");
        sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--jobs", jobs, "worker threads, 0 = available parallelism")->check(CLI::NonNegativeNumber);
    };
    auto* compute = app.add_subcommand("compute", "evaluate scalars and invariants over the grid");
    common(compute);
    compute->add_option("--emit-data", emit_data, "also write the conformal data of the grid");
    auto* check = app.add_subcommand("check", "run an identity suite");
    common(check);
    check->add_option("--suite", suite, "suite name or all")->required();
    check->add_option("--data", data_path, "tabulated conformal data");
    check->add_option("--seed-transform", seed_spec, "boost:axis,rapidity | rotation:i,j,angle");
    auto* recon = app.add_subcommand("reconstruct", "integrate the structure equations");
    common(recon);
    recon->add_option("--data", data_path, "tabulated conformal data");
    recon->add_option("--seed-transform", seed_spec, "boost:axis,rapidity | rotation:i,j,angle");
    auto* catalog = app.add_subcommand("catalog", "list surfaces, factors, invariants and suites");
    catalog->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e, out, err);
        return rc == 0 ? kOk : kConfigError;
    }
    if (jobs > 0) cg::set_default_jobs(jobs);

    return guarded(
        [&]() -> int {
            if (catalog->parsed()) return cmd_catalog(format.empty() ? "text" : format, out);
            RunConfig cfg = load_config(config);
            // flags override the file; the fingerprint covers the effective configuration
            if (!out_path.empty()) cfg.out_path = cfg.source["output"]["path"] = out_path;
            if (!format.empty()) cfg.format = cfg.source["output"]["format"] = format;
            if (!data_path.empty()) cfg.data_path = cfg.source["data"] = data_path;
            std::optional<cg::LorentzMap> seed;
            if (!seed_spec.empty()) seed = parse_transform(seed_spec);
            if (compute->parsed()) {
                if (!emit_data.empty())
                    save_data(cg::ConformalData::from_chart(cfg.chart, cfg.lambda, cfg.make_grid()).tabulate(), emit_data);
                return cmd_compute(cfg, out, err);
            }
            if (check->parsed()) return cmd_check(cfg, suite, seed, out, err);
            return cmd_reconstruct(cfg, seed, out, err);
        },
        err);
}

}  // namespace cgcli
