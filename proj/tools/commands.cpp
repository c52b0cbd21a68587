#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "nlsv/cascade.hpp"
#include "nlsv/lambda.hpp"
#include "nlsv/normal_form.hpp"
#include "nlsv/resonance.hpp"
#include "nlsv/toy_model.hpp"

namespace lab {

using nlsv::json;

namespace {

void keys(const json& j, std::initializer_list<const char*> allowed, const char* what) {
    if (!j.is_object()) throw ConfigError(std::string(what) + " must be an object");
    try {
        nlsv::only_keys(j, allowed, what);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

template <class T>
T get(const json& j, const char* key, T def) {
    if (!j.contains(key)) return def;
    const json& v = j.at(key);
    if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw ConfigError(std::string(key) + ": expected a boolean");
    } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw ConfigError(std::string(key) + ": expected an integer");
        if constexpr (std::is_unsigned_v<T>)
            if (v.get<std::int64_t>() < 0) throw ConfigError(std::string(key) + ": must be >= 0");
    } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) throw ConfigError(std::string(key) + ": expected a number");
    } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw ConfigError(std::string(key) + ": expected a string");
    }
    return v.get<T>();
}

void require(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
}

nlsv::ConvPotential potential(const json& j, const char* def) {
    try {
        return nlsv::potential_from_spec(j.contains("potential") ? j.at("potential") : json(def));
    } catch (const std::exception& e) {
        throw ConfigError(std::string("potential: ") + e.what());
    }
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

nlsv::GenerationSet load_set(const json& j) {
    try {
        return nlsv::generation_set_from_json(j.is_string() ? read_json_file(j.get<std::string>()) : j);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("set: ") + e.what());
    }
}

nlsv::ResonanceParams resonance_params(const json& j, const nlsv::ConvPotential& V) {
    nlsv::ResonanceParams p;
    p.eta = get(j, "eta", 0.3);
    try {
        nlsv::validate_eta(p.eta);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    p.kappa0 = j.contains("kappa0") ? get<std::int64_t>(j, "kappa0", 0) : nlsv::kappa0(V);
    require(p.kappa0 >= 0, "kappa0 must be >= 0");
    return p;
}

nlsv::ModeIndex box_of(const json& j, std::int64_t def_radius) {
    const auto r = get<std::int64_t>(j, "radius", def_radius);
    require(r >= 0 && r <= 64, "radius must be in [0, 64]");
    const std::string shape = get<std::string>(j, "shape", "square");
    require(shape == "square" || shape == "disc", "shape must be \"square\" or \"disc\"");
    return shape == "square" ? nlsv::ModeIndex::square(r) : nlsv::ModeIndex::disc(r);
}

void write(const Context& c, const std::string& name, const std::string& content) {
    std::filesystem::create_directories(c.out);
    std::ofstream f(std::filesystem::path(c.out) / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + name);
    f << content;
}

void write(const Context& c, const std::string& name, const json& j) { write(c, name, j.dump(2) + "\n"); }

void say(const Context& c, const std::string& s) {
    if (!c.quiet) std::cout << s << (s.empty() || s.back() != '\n' ? "\n" : "");
}

json wall_clock(std::chrono::steady_clock::time_point t0) {
    const std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return {{"finished", buf},
            {"seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()}};
}

const char* verdict(bool ok) { return ok ? "PASS" : "FAIL"; }

}  // namespace

// ---------------------------------------------------------------- resonance-scan

int resonance_scan(const Context& c) {
    const json& j = c.config;
    keys(j, {"radius", "shape", "potential", "eta", "kappa0", "emit_tuples"}, "resonance-scan config");
    const nlsv::ModeIndex box = box_of(j, 4);
    const nlsv::ConvPotential V = potential(j, "zero");
    const nlsv::ResonanceParams p = resonance_params(j, V);
    const bool emit = get(j, "emit_tuples", box.size() <= 200);

    std::ostringstream lines;
    std::size_t rect_rho_nonzero = 0;
    const nlsv::ScanSummary s = nlsv::scan_box(box, V, p, [&](const nlsv::Tuple4& t) {
        if (t.alt_sq == 0 && t.n1 != t.n4 && t.n3 != t.n4 && V.is_zero() && t.rho != 0) ++rect_rho_nonzero;
        if (!emit) return;
        json l = {{"n", {nlsv::freq_to_json(t.n1), nlsv::freq_to_json(t.n2), nlsv::freq_to_json(t.n3),
                         nlsv::freq_to_json(t.n4)}},
                  {"class", nlsv::to_string(t.cls)},
                  {"alt", t.alt_sq},
                  {"rho", t.rho}};
        lines << l.dump() << "\n";
    });
    json counts = json::object();
    for (const auto& [cls, k] : s.counts) counts[nlsv::to_string(cls)] = k;
    const bool f_ok = s.max_abs_F <= 4.0;
    const bool rho_ok = !(s.min_abs_rho_case_ii < 0.5);
    const bool ok = f_ok && rho_ok && rect_rho_nonzero == 0;
    json summary = {{"modes", box.size()},
                    {"kappa0", p.kappa0},
                    {"eta", p.eta},
                    {"counts", counts},
                    {"iprime", s.iprime},
                    {"max_abs_F", s.max_abs_F},
                    {"min_abs_rho_case_ii", std::isfinite(s.min_abs_rho_case_ii) ? json(s.min_abs_rho_case_ii) : json(nullptr)},
                    {"rectangles_with_nonzero_rho", rect_rho_nonzero},
                    {"passed", ok}};
    if (emit) write(c, "tuples.jsonl", lines.str());
    write(c, "summary.json", summary);
    say(c, std::string(verdict(ok)) + " resonance scan: " + std::to_string(box.size()) + " modes, max |F| = " +
               nlsv::num(s.max_abs_F));
    return ok ? 0 : 1;
}

// ---------------------------------------------------------------- nf-check

int nf_check(const Context& c) {
    const json& j = c.config;
    keys(j, {"radius", "shape", "potential", "eta", "kappa0", "inject_fault"}, "nf-check config");
    const nlsv::ModeIndex box = box_of(j, 6);
    const nlsv::ConvPotential V = potential(j, "zero");
    const nlsv::ResonanceParams p = resonance_params(j, V);
    const bool fault = get(j, "inject_fault", false);

    const nlsv::CancellationReport r = nlsv::cancellation_check(box, V, p, fault);
    const nlsv::ScanSummary s = nlsv::scan_box(box, V, p);
    json counts = json::object();
    for (const auto& [cls, k] : r.counts) counts[nlsv::to_string(cls)] = k;
    const bool ok = r.passed && s.max_abs_F <= 4.0;
    json rep = {{"modes", box.size()},
                {"monomials_checked", r.monomials_checked},
                {"counts", counts},
                {"max_iprime_residual", r.max_iprime_residual},
                {"max_mismatch", r.max_mismatch},
                {"self_terms_ok", r.self_terms_ok},
                {"first_offender", r.first_offender},
                {"max_abs_F", s.max_abs_F},
                {"inject_fault", fault},
                {"passed", ok}};
    write(c, "nf_report.json", rep);
    say(c, r.text());
    return ok ? 0 : 1;
}

// ---------------------------------------------------------------- lambda

namespace {

nlsv::ConstructOptions construct_options(const json& j, std::uint64_t seed) {
    nlsv::ConstructOptions o;
    o.seed = seed;
    o.budget = get<std::size_t>(j, "budget", o.budget);
    o.coeff_radius = get<std::int64_t>(j, "coeff_radius", 0);
    o.growth_s = get(j, "growth_s", 2.0);
    require(o.budget > 0, "budget must be > 0");
    require(o.coeff_radius >= 0 && o.coeff_radius <= 200, "coeff_radius must be in [0, 200]");
    require(o.growth_s > 0, "growth_s must be > 0");
    return o;
}

int get_N(const json& j) {
    const int N = get(j, "N", 3);
    require(N >= 2 && N <= 7, "N must be in [2, 7]");
    return N;
}

int threshold(const json& j) {
    const int t = get(j, "cond6_threshold", 2);
    require(t >= 1, "cond6_threshold must be >= 1");
    return t;
}

}  // namespace

int lambda_build(const Context& c) {
    const json& j = c.config;
    keys(j, {"N", "budget", "coeff_radius", "growth_s", "cond6_threshold"}, "lambda build config");
    const int N = get_N(j);
    const nlsv::ConstructOptions o = construct_options(j, c.seed);
    nlsv::VerifyOptions vo;
    vo.mode = nlsv::VerifyMode::Base;
    vo.cond6_threshold = threshold(j);

    const nlsv::GenerationSet S = nlsv::construct_base(N, o);
    nlsv::ConditionReport rep = nlsv::verify(S, nlsv::ConvPotential::zero(), vo);
    rep.growth = nlsv::growth_stats(S, o.growth_s);
    write(c, "base_set.json", nlsv::to_json(S));
    write(c, "report.json", nlsv::to_json(rep));
    say(c, rep.text());
    return rep.all_passed() ? 0 : 1;
}

int lambda_verify(const Context& c) {
    const json& j = c.config;
    keys(j, {"set", "mode", "potential", "cond6_threshold", "auxiliary", "growth_s"}, "lambda verify config");
    require(j.contains("set"), "set is required (path or object)");
    const nlsv::GenerationSet S = load_set(j.at("set"));
    const std::string mode = get<std::string>(j, "mode", "full");
    require(mode == "full" || mode == "base", "mode must be \"full\" or \"base\"");
    nlsv::VerifyOptions vo;
    vo.mode = mode == "full" ? nlsv::VerifyMode::Full : nlsv::VerifyMode::Base;
    vo.cond6_threshold = threshold(j);
    vo.auxiliary = get(j, "auxiliary", true);
    const double gs = get(j, "growth_s", 2.0);
    require(gs > 0, "growth_s must be > 0");
    const nlsv::ConvPotential V = potential(j, mode == "full" ? "sample" : "zero");

    nlsv::ConditionReport rep = nlsv::verify(S, V, vo);
    if (S.N() >= 1) rep.growth = nlsv::growth_stats(S, gs);
    write(c, "report.json", nlsv::to_json(rep));
    say(c, rep.text());
    return rep.all_passed() ? 0 : 1;
}

int lambda_certify(const Context& c) {
    const json& j = c.config;
    keys(j, {"base", "N", "budget", "coeff_radius", "growth_s", "potential", "eta", "cond6_threshold"},
         "lambda certify config");
    const nlsv::ConvPotential V = potential(j, "sample");
    nlsv::CertifyOptions co;
    co.eta = get(j, "eta", 0.3);
    try {
        nlsv::validate_eta(co.eta);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    co.cond6_threshold = threshold(j);
    nlsv::GenerationSet base;
    if (j.contains("base")) {
        base = load_set(j.at("base"));
    } else {
        const int N = get_N(j);
        base = nlsv::construct_base(N, construct_options(j, c.seed));
    }
    const nlsv::CertifyResult r = nlsv::certify_full(base, V, co);
    json rep = nlsv::to_json(r.report);
    rep["kappa0"] = r.kappa0;
    rep["C1"] = r.C1;
    rep["C2"] = r.C2;
    write(c, "base_set.json", nlsv::to_json(base));
    write(c, "certified_set.json", nlsv::to_json(r.set));
    write(c, "report.json", rep);
    say(c, "kappa0 = " + std::to_string(r.kappa0) + ", C1 = " + std::to_string(r.C1) + ", C2 = " + std::to_string(r.C2));
    say(c, r.report.text());
    return r.report.all_passed() ? 0 : 1;
}

// ---------------------------------------------------------------- toy

namespace {

nlsv::ToyState toy_state(const json& j) {
    require(j.is_array() && j.size() >= 2, "b0 must be an array of at least two [re, im] pairs");
    nlsv::ToyState b;
    for (const auto& e : j) {
        require(e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number(), "b0 entries must be [re, im]");
        b.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return b;
}

nlsv::SliderOptions slider_options(const json& j) {
    nlsv::SliderOptions o;
    keys(j, {"delta_seed", "eps_prime", "horizon", "phase_grid", "golden_iters", "budget", "rtol"}, "slider options");
    o.delta_seed = get(j, "delta_seed", o.delta_seed);
    o.eps_prime = get(j, "eps_prime", o.eps_prime);
    o.horizon = get(j, "horizon", o.horizon);
    o.phase_grid = get(j, "phase_grid", o.phase_grid);
    o.golden_iters = get(j, "golden_iters", o.golden_iters);
    o.budget = get<std::size_t>(j, "budget", o.budget);
    o.rtol = get(j, "rtol", o.rtol);
    require(o.delta_seed > 0 && o.delta_seed < 1, "delta_seed must be in (0, 1)");
    require(o.eps_prime > 0 && o.eps_prime < 1, "eps_prime must be in (0, 1)");
    require(o.horizon > 0, "horizon must be > 0");
    require(o.phase_grid >= 2, "phase_grid must be >= 2");
    require(o.golden_iters >= 0, "golden_iters must be >= 0");
    require(o.budget > 0, "budget must be > 0");
    require(o.rtol > 0 && o.rtol < 1e-3, "rtol must be in (0, 1e-3)");
    return o;
}

json to_json(const nlsv::ToyState& b) {
    json a = json::array();
    for (const auto& v : b) a.push_back({v.real(), v.imag()});
    return a;
}

json to_json(const nlsv::SliderResult& r) {
    json st = json::array();
    for (const auto& s : r.stages)
        st.push_back({{"from", s.from}, {"to", s.to}, {"phase", s.phase}, {"peak_fraction", s.peak_fraction}});
    return {{"b0", to_json(r.b0)},
            {"T0", r.T0},
            {"t_peak", r.t_peak},
            {"achieved_eps_prime", r.achieved},
            {"start_fraction", r.start_fraction},
            {"success", r.success},
            {"evaluations", r.evaluations},
            {"stages", st}};
}

}  // namespace

int toy_run(const Context& c) {
    const json& j = c.config;
    keys(j, {"b0", "t_end", "samples", "rtol", "atol", "rescale", "mass_tol", "residual_tol"}, "toy run config");
    require(j.contains("b0"), "b0 is required");
    const nlsv::ToyState b0 = toy_state(j.at("b0"));
    const double T = get(j, "t_end", 10.0);
    const auto n = get<std::size_t>(j, "samples", 101);
    nlsv::OdeOptions o;
    o.rtol = get(j, "rtol", 1e-12);
    o.atol = get(j, "atol", 1e-15);
    const double mass_tol = get(j, "mass_tol", 1e-10), res_tol = get(j, "residual_tol", 1e-8);
    std::vector<double> lambdas;
    if (j.contains("rescale")) {
        require(j.at("rescale").is_array(), "rescale must be an array of lambdas");
        for (const auto& v : j.at("rescale")) {
            require(v.is_number() && v.get<double>() > 0, "rescale entries must be > 0");
            lambdas.push_back(v.get<double>());
        }
    }
    require(T > 0, "t_end must be > 0");
    require(n >= 2, "samples must be >= 2");
    require(o.rtol > 0 && o.atol > 0, "tolerances must be > 0");

    const auto tr = nlsv::toy_integrate(b0, nlsv::linspace(0, T, n), o);
    const double m0 = nlsv::toy_mass(b0);
    double drift = 0;
    for (const auto& s : tr.states) drift = std::max(drift, std::abs(nlsv::toy_mass(s) - m0) / std::max(m0, 1e-300));
    bool ok = m0 == 0 || drift <= mass_tol;
    json res = json::array();
    for (double l : lambdas) {
        const double r = nlsv::rescale_residual(b0, T, l);
        ok = ok && r <= res_tol;
        res.push_back({{"lambda", l}, {"residual", r}});
    }
    write(c, "trajectory.csv", nlsv::toy_csv(tr));
    write(c, "summary.json", json{{"mass", m0},
                                  {"relative_mass_drift", drift},
                                  {"steps", tr.meta.steps},
                                  {"rejected", tr.meta.rejected},
                                  {"rescale", res},
                                  {"passed", ok}});
    say(c, std::string(verdict(ok)) + " toy run: mass drift " + nlsv::num(drift));
    return ok ? 0 : 1;
}

int toy_slider(const Context& c) {
    const json& j = c.config;
    keys(j, {"N", "start", "end", "eps", "samples", "slider"}, "toy slider config");
    const int N = get(j, "N", 5);
    require(N >= 2 && N <= 64, "N must be in [2, 64]");
    const int a = get(j, "start", std::max(1, N - 2)), b = get(j, "end", std::max(2, N - 1));
    require(a >= 1 && a <= b && b <= N, "need 1 <= start <= end <= N");
    const double eps = get(j, "eps", 0.05);
    require(eps > 0 && eps < 1, "eps must be in (0, 1)");
    const auto n = get<std::size_t>(j, "samples", 513);
    require(n >= 2, "samples must be >= 2");
    const nlsv::SliderOptions o = slider_options(j.contains("slider") ? j.at("slider") : json::object());

    const nlsv::SliderResult r = nlsv::slider_search(N, a, b, eps, o);
    const double T = std::max(1.0, 1.25 * std::max(r.T0, r.t_peak));
    nlsv::OdeOptions oo;
    oo.rtol = o.rtol;
    oo.atol = o.rtol * 1e-3;
    const auto tr = nlsv::toy_integrate(r.b0, nlsv::linspace(0, T, n), oo);
    write(c, "slider.json", to_json(r));
    write(c, "trajectory.csv", nlsv::toy_csv(tr));
    say(c, std::string(verdict(r.success)) + " slider " + std::to_string(a) + " -> " + std::to_string(b) +
               ": T0 = " + nlsv::num(r.T0) + ", eps' = " + nlsv::num(r.achieved));
    return r.success ? 0 : 1;
}

// ---------------------------------------------------------------- cascade

namespace {

const std::initializer_list<const char*> kCascadeKeys = {
    "set", "N", "budget", "coeff_radius", "growth_s", "potential", "eta", "s", "lambda", "eps", "start", "end",
    "samples", "rtol", "atol", "with_J", "with_quintic", "bootstrap_C", "slider", "z_stride", "lambdas", "slope_range"};

struct CascadeSetup {
    nlsv::ExperimentConfig cfg;
    std::size_t z_stride = 8;
};

CascadeSetup cascade_setup(const Context& c, bool sweep) {
    const json& j = c.config;
    keys(j, kCascadeKeys, sweep ? "cascade sweep config" : "cascade run config");
    if (!sweep) require(!j.contains("lambdas") && !j.contains("slope_range"), "lambdas/slope_range belong to cascade sweep");
    CascadeSetup s;
    nlsv::ExperimentConfig& cfg = s.cfg;
    cfg.V = potential(j, "sample");
    cfg.s = get(j, "s", 2.0);
    cfg.lambda = get(j, "lambda", 16.0);
    cfg.eps = get(j, "eps", 0.05);
    cfg.start = get(j, "start", 0);
    cfg.end = get(j, "end", 0);
    cfg.samples = get<std::size_t>(j, "samples", 512);
    cfg.rtol = get(j, "rtol", 1e-12);
    cfg.atol = get(j, "atol", 1e-22);
    cfg.dynamics.with_J = get(j, "with_J", true);
    cfg.dynamics.with_quintic = get(j, "with_quintic", true);
    cfg.bootstrap_C = get(j, "bootstrap_C", 1.0);
    cfg.slider = slider_options(j.contains("slider") ? j.at("slider") : json::object());
    s.z_stride = get<std::size_t>(j, "z_stride", 8);
    require(s.z_stride >= 1, "z_stride must be >= 1");
    const double eta = get(j, "eta", 0.3);
    try {
        nlsv::validate_eta(eta);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    // cheap precondition checks on a placeholder before any construction work
    if (j.contains("set")) {
        require(!j.contains("N"), "give either set or N, not both");
        cfg.set = load_set(j.at("set"));
    } else {
        const int N = get_N(j);
        nlsv::GenerationSet probe;
        probe.generations.assign(N, {});
        probe.eta = eta;
        nlsv::ExperimentConfig tmp = cfg;
        tmp.set = probe;
        try {
            nlsv::validate(tmp);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        const nlsv::GenerationSet base = nlsv::construct_base(N, construct_options(j, c.seed));
        nlsv::CertifyOptions co;
        co.eta = eta;
        cfg.set = nlsv::certify_full(base, cfg.V, co).set;
    }
    try {
        nlsv::validate(cfg);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return s;
}

json chain_json(const nlsv::SobolevReport& rep) {
    json a = json::array();
    for (const auto& ch : rep.chain) a.push_back({{"check", ch.name}, {"lhs", ch.lhs}, {"rhs", ch.rhs}, {"ok", ch.ok}});
    return a;
}

struct Outcome {
    json summary;
    bool ok = false;
    double peak = 0, bound = 0;
};

Outcome run_one(const Context& c, const CascadeSetup& s, const std::string& subdir) {
    Context cc = c;
    if (!subdir.empty()) cc.out = (std::filesystem::path(c.out) / subdir).string();
    const nlsv::ExperimentConfig& cfg = s.cfg;
    const auto t0 = std::chrono::steady_clock::now();
    const nlsv::ExperimentRun run = nlsv::approximation_experiment(cfg);
    const nlsv::SobolevReport rep = nlsv::sobolev_growth_report(cfg, run);
    const nlsv::ZProbe z = nlsv::z_decomposition_probe(cfg, run, s.z_stride);
    Outcome o;
    o.ok = rep.all_ok;
    o.peak = run.deviation.peak;
    o.bound = run.deviation.bound;
    json S = json::array();
    for (long double v : rep.S) S.push_back(static_cast<double>(v));
    o.summary = {{"lambda", cfg.lambda},
                 {"N", cfg.set.N()},
                 {"s", cfg.s},
                 {"slider", to_json(run.slider)},
                 {"T", run.T},
                 {"box_size", run.box_size},
                 {"cubic_terms", run.cubic_terms},
                 {"quintic_terms", run.quintic_terms},
                 {"max_abs_rho", run.max_abs_rho},
                 {"integrator", {{"steps", run.stats.steps}, {"rejected", run.stats.rejected}, {"rtol", cfg.rtol}, {"atol", cfg.atol}}},
                 {"flagged", run.flagged},
                 {"message", run.message},
                 {"deviation_peak", run.deviation.peak},
                 {"deviation_bound", run.deviation.bound},
                 {"sobolev",
                  {{"initial", rep.initial},
                   {"final", rep.final_value},
                   {"ratio", rep.ratio},
                   {"sqrt_growth", rep.sqrt_growth},
                   {"S", S},
                   {"gamma_minus_id", rep.gamma_minus_id},
                   {"chain", chain_json(rep)},
                   {"all_ok", rep.all_ok}}},
                 {"z_probe",
                  {{"z0_peak", z.z0_peak},
                   {"z1_peak", z.z1_peak},
                   {"z2_peak", z.z2_peak},
                   {"bootstrap_bound", z.bootstrap_bound},
                   {"bootstrap_ok", z.bootstrap_ok}}}};
    write(cc, "deviation.csv", nlsv::deviation_csv(run.deviation));
    write(cc, "sobolev.csv", nlsv::sobolev_csv(rep));
    write(cc, "generations.csv", nlsv::generations_csv(rep));
    json runj = {{"config", c.config}, {"seed", c.seed}, {"summary", o.summary}, {"wall_clock", wall_clock(t0)}};
    write(cc, "run.json", runj);
    return o;
}

}  // namespace

int cascade_run(const Context& c) {
    const CascadeSetup s = cascade_setup(c, false);
    const Outcome o = run_one(c, s, "");
    say(c, std::string(verdict(o.ok)) + " cascade: lambda = " + nlsv::num(s.cfg.lambda) + ", peak deviation " +
               nlsv::num(o.peak) + " (bound " + nlsv::num(o.bound) + ")");
    return o.ok ? 0 : 1;
}

int cascade_sweep(const Context& c) {
    const auto t0 = std::chrono::steady_clock::now();
    CascadeSetup s = cascade_setup(c, true);
    const json& j = c.config;
    std::vector<double> lambdas{8, 16, 32};
    if (j.contains("lambdas")) {
        lambdas.clear();
        require(j.at("lambdas").is_array() && j.at("lambdas").size() >= 2, "lambdas must be an array of >= 2 values");
        for (const auto& v : j.at("lambdas")) {
            require(v.is_number() && v.get<double>() > 0, "lambdas must be > 0");
            lambdas.push_back(v.get<double>());
        }
    }
    double lo = -3.5, hi = -2.5;
    if (j.contains("slope_range")) {
        const json& r = j.at("slope_range");
        require(r.is_array() && r.size() == 2 && r[0].is_number() && r[1].is_number(), "slope_range must be [lo, hi]");
        lo = r[0].get<double>(), hi = r[1].get<double>();
        require(lo < hi, "slope_range must have lo < hi");
    }
    std::vector<double> peaks;
    std::ostringstream csv;
    csv << "lambda,T,peak_deviation,bound\n";
    json runs = json::array();
    bool last_ok = false;
    for (double l : lambdas) {
        s.cfg.lambda = l;
        std::ostringstream name;
        name << "lambda_" << nlsv::num(l);
        const Outcome o = run_one(c, s, name.str());
        peaks.push_back(o.peak);
        csv << nlsv::num(l) << "," << nlsv::num(o.summary["T"].get<double>()) << "," << nlsv::num(o.peak) << ","
            << nlsv::num(o.bound) << "\n";
        runs.push_back(o.summary);
        last_ok = o.peak <= o.bound;
        say(c, "lambda = " + nlsv::num(l) + ": peak deviation " + nlsv::num(o.peak));
    }
    const double slope = nlsv::loglog_slope(lambdas, peaks);
    const bool ok = slope >= lo && slope <= hi && last_ok;
    write(c, "sweep.csv", csv.str());
    write(c, "run.json", json{{"config", c.config},
                              {"seed", c.seed},
                              {"summary", {{"slope", slope}, {"slope_range", {lo, hi}}, {"largest_lambda_within_bound", last_ok}, {"passed", ok}, {"runs", runs}}},
                              {"wall_clock", wall_clock(t0)}});
    say(c, std::string(verdict(ok)) + " sweep: deviation exponent " + nlsv::num(slope));
    return ok ? 0 : 1;
}

}  // namespace lab
