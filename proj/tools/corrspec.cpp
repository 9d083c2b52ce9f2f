// corrspec: exact cross-correlation spectra for p-ary m-sequences decimated
// by d = (p^m+1)^2 / (2(p^e+1)), p = 1 (mod 4), with a verification battery
// for the six-valued distribution.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "corrspec/report_io.hpp"
#include "corrspec/spectrum.hpp"

namespace cs = corrspec;

namespace {

struct CliOptions {
    std::uint64_t p = 5;
    unsigned m = 1;
    unsigned e = 1;
    unsigned n = 0; // field-info only; 0 means "use 2m"
    std::string method = "all";
    std::string format = "text";
    std::string output;
    std::string cache_dir;
    unsigned threads = 0;
    unsigned precision_bits = 53;
    std::uint64_t cap = std::uint64_t{1} << 24;
    std::string config_file;
    bool decimated = false;
};

struct SubHandles {
    CLI::App* sub = nullptr;
    CliOptions vals;
    std::map<std::string, CLI::Option*> opts; // keyed by config-file key
};

SubHandles* add_common(CLI::App& app, std::vector<std::unique_ptr<SubHandles>>& store,
                       const std::string& name, const std::string& desc) {
    auto handles = std::make_unique<SubHandles>();
    SubHandles* h = handles.get();
    h->sub = app.add_subcommand(name, desc);
    h->opts["p"] = h->sub->add_option("-p,--prime", h->vals.p, "odd prime, p = 1 (mod 4)");
    h->opts["m"] = h->sub->add_option("-m", h->vals.m, "odd exponent m (n = 2m)");
    h->opts["e"] = h->sub->add_option("-e", h->vals.e, "divisor e of m");
    h->opts["method"] = h->sub->add_option("--method", h->vals.method,
                                           "direct|sums|rank_fast|all");
    h->opts["format"] = h->sub->add_option("--format", h->vals.format, "json|csv|text");
    h->opts["output"] = h->sub->add_option("--output", h->vals.output, "write to file");
    h->opts["cache-dir"] = h->sub->add_option("--cache-dir", h->vals.cache_dir,
                                              "dlog table cache directory");
    h->opts["threads"] = h->sub->add_option("--threads", h->vals.threads,
                                            "worker threads (0 = auto)");
    h->opts["precision-bits"] = h->sub->add_option("--precision-bits", h->vals.precision_bits,
                                                   "float cross-check precision");
    h->opts["cap"] = h->sub->add_option("--cap", h->vals.cap, "maximum p^n for tables");
    h->sub->add_option("--config", h->vals.config_file, "key = value config file");
    store.push_back(std::move(handles));
    return h;
}

std::map<std::string, std::string> load_config_file(const std::string& path) {
    std::map<std::string, std::string> out;
    if (path.empty()) return out;
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::string line;
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        const auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return out;
}

void apply_layer(const SubHandles& h, CliOptions& v,
                 const std::map<std::string, std::string>& cfg) {
    // precedence: flags > environment > config file > defaults
    auto given = [&](const char* key) { return h.opts.at(key)->count() > 0; };
    auto from_cfg = [&](const char* key) -> const std::string* {
        auto it = cfg.find(key);
        return it == cfg.end() ? nullptr : &it->second;
    };
    auto set_u64 = [&](const char* key, auto& field, const char* env) {
        if (given(key)) return;
        if (env)
            if (const char* ev = std::getenv(env)) {
                field = static_cast<std::decay_t<decltype(field)>>(std::stoull(ev));
                return;
            }
        if (const std::string* cv = from_cfg(key))
            field = static_cast<std::decay_t<decltype(field)>>(std::stoull(*cv));
    };
    auto set_str = [&](const char* key, std::string& field, const char* env) {
        if (given(key)) return;
        if (env)
            if (const char* ev = std::getenv(env)) {
                field = ev;
                return;
            }
        if (const std::string* cv = from_cfg(key)) field = *cv;
    };
    set_u64("p", v.p, nullptr);
    set_u64("m", v.m, nullptr);
    set_u64("e", v.e, nullptr);
    set_str("method", v.method, nullptr);
    set_str("format", v.format, nullptr);
    set_str("output", v.output, nullptr);
    set_str("cache-dir", v.cache_dir, "CORRSPEC_CACHE_DIR");
    set_u64("threads", v.threads, "CORRSPEC_THREADS");
    set_u64("precision-bits", v.precision_bits, nullptr);
    set_u64("cap", v.cap, nullptr);
}

void emit(const CliOptions& v, const std::string& text) {
    if (v.output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(v.output, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write output file: " + v.output);
    out << text;
}

cs::Field build_field_for(const CliOptions& v, unsigned n) {
    cs::FieldBuildOptions fo;
    fo.cap = v.cap;
    if (!v.cache_dir.empty()) fo.cache_dir = v.cache_dir;
    return cs::Field::build(v.p, n, fo);
}

std::string format_report(const CliOptions& v, const cs::SpectrumReport& rep) {
    if (v.format == "json") return cs::report_to_json(rep);
    if (v.format == "csv") return cs::report_to_csv(rep);
    if (v.format == "text") return cs::report_to_text(rep);
    throw std::runtime_error("unknown format: " + v.format);
}

// ---------------------------------------------------------------------------

int cmd_spectrum(const CliOptions& v) {
    const cs::SeqParams params = cs::validate_params(v.p, v.m, v.e);
    const cs::Field field = build_field_for(v, params.n);
    const cs::WorkerPool pool(v.threads);
    const cs::SpectrumEngine engine(field, params, pool);

    cs::SpectrumReport rep;
    if (v.method == "all") {
        const cs::SpectrumReport direct = engine.full_spectrum(cs::Method::direct);
        const cs::SpectrumReport sums = engine.full_spectrum(cs::Method::sums);
        const cs::SpectrumReport fast = engine.full_spectrum(cs::Method::rank_fast);
        const cs::SpectrumReport closed = cs::theorem1_table(params);
        rep.params = params;
        rep.method = "all";
        rep.counts = direct.counts;
        const bool agree = direct.counts == sums.counts && sums.counts == fast.counts;
        const bool closed_match = direct.counts == closed.counts;
        for (const auto* part : {&direct, &sums, &fast})
            for (const auto& a : part->audits)
                rep.audits.push_back({part->method + "." + a.name, a.pass, a.observed, a.expected});
        rep.audits.push_back({"methods_agree", agree,
                              agree ? "direct = sums = rank_fast" : "method counts differ",
                              "identical counts from all three methods"});
        rep.audits.push_back({"theorem1_match", closed_match,
                              closed_match ? "counts equal the closed forms" : "counts differ",
                              "closed-form distribution"});
    } else {
        const auto method = cs::method_from_string(v.method);
        if (!method) throw std::runtime_error("unknown method: " + v.method);
        rep = engine.full_spectrum(*method);
        const cs::SpectrumReport closed = cs::theorem1_table(params);
        const bool closed_match = rep.counts == closed.counts;
        rep.audits.push_back({"theorem1_match", closed_match,
                              closed_match ? "counts equal the closed forms" : "counts differ",
                              "closed-form distribution"});
    }
    emit(v, format_report(v, rep));
    return rep.all_audits_pass() ? 0 : 1;
}

struct VerifyRun {
    cs::SeqParams params;
    std::vector<cs::AuditCheck> audits;
};

VerifyRun verify_one(const CliOptions& v, std::uint64_t p, unsigned m, unsigned e) {
    VerifyRun run;
    run.params = cs::validate_params(p, m, e);
    CliOptions local = v;
    local.p = p;
    const cs::Field field = build_field_for(local, run.params.n);
    const cs::WorkerPool pool(v.threads);
    const cs::SpectrumEngine engine(field, run.params, pool);

    auto absorb = [&run](const std::string& prefix, std::vector<cs::AuditCheck> list) {
        for (auto& a : list) run.audits.push_back({prefix + a.name, a.pass, a.observed, a.expected});
    };

    const cs::SpectrumReport direct = engine.full_spectrum(cs::Method::direct);
    const cs::SpectrumReport sums = engine.full_spectrum(cs::Method::sums);
    const cs::SpectrumReport fast = engine.full_spectrum(cs::Method::rank_fast);
    const cs::SpectrumReport closed = cs::theorem1_table(run.params);
    absorb("spectrum.", direct.audits);
    const bool agree = direct.counts == sums.counts && sums.counts == fast.counts;
    run.audits.push_back({"methods_agree", agree,
                          agree ? "direct = sums = rank_fast" : "method counts differ",
                          "identical counts from all three methods"});
    run.audits.push_back({"theorem1_match", direct.counts == closed.counts,
                          direct.counts == closed.counts ? "counts equal the closed forms"
                                                         : "counts differ",
                          "closed-form distribution"});
    absorb("", engine.qform().gauss_sum_audit());
    absorb("", engine.moment_audit());
    absorb("", engine.rank_census());
    absorb("", engine.lemma7_audit());
    absorb("", engine.upsilon_audit());

    // float route against the exact route
    {
        double worst = 0.0;
        for (std::uint64_t tau = 0; tau < run.params.period; ++tau) {
            const cs::CycInt exact = engine.correlator().direct(tau);
            const auto ex = exact.to_complex(v.precision_bits);
            const auto fl = engine.correlator().direct_float(tau);
            const double mag = std::max(1.0, std::abs(ex));
            worst = std::max(worst, std::abs(fl - ex) / mag);
        }
        std::ostringstream os;
        os.precision(3);
        os << std::scientific << worst;
        run.audits.push_back({"float_path_agreement", worst <= 1e-6,
                              "max relative deviation " + os.str(), "<= 1e-6"});
    }
    return run;
}

int cmd_verify(const CliOptions& v, bool params_given) {
    std::vector<std::array<std::uint64_t, 3>> sets;
    if (params_given)
        sets.push_back({v.p, v.m, v.e});
    else
        sets = {{5, 1, 1}, {13, 1, 1}, {5, 3, 1}, {5, 3, 3}};

    std::vector<VerifyRun> runs;
    for (const auto& s : sets)
        runs.push_back(verify_one(v, s[0], static_cast<unsigned>(s[1]),
                                  static_cast<unsigned>(s[2])));

    bool all_ok = true;
    std::ostringstream text;
    for (const auto& run : runs) {
        text << "verify p=" << run.params.p << " m=" << run.params.m << " e=" << run.params.e
             << "\n";
        for (const auto& a : run.audits) {
            if (!a.pass) all_ok = false;
            text << "  [" << (a.pass ? "PASS" : "FAIL") << "] " << a.name << ": observed "
                 << a.observed << ", expected " << a.expected << "\n";
        }
    }
    text << (all_ok ? "all audits passed\n" : "AUDIT FAILURES PRESENT\n");

    if (v.format == "json") {
        nlohmann::ordered_json j;
        j["runs"] = nlohmann::ordered_json::array();
        for (const auto& run : runs) {
            nlohmann::ordered_json r;
            r["p"] = run.params.p;
            r["m"] = run.params.m;
            r["e"] = run.params.e;
            r["audits"] = nlohmann::ordered_json::array();
            for (const auto& a : run.audits)
                r["audits"].push_back({{"name", a.name},
                                       {"pass", a.pass},
                                       {"observed", a.observed},
                                       {"expected", a.expected}});
            r["all_pass"] = cs::all_pass(run.audits);
            j["runs"].push_back(std::move(r));
        }
        j["all_pass"] = all_ok;
        emit(v, j.dump(2) + "\n");
    } else {
        emit(v, text.str());
    }
    return all_ok ? 0 : 1;
}

int cmd_field_info(const CliOptions& v) {
    const unsigned n = v.n ? v.n : 2 * v.m;
    const cs::Field field = build_field_for(v, n);
    std::ostringstream os;
    os << "p: " << field.p() << "\n";
    os << "n: " << field.n() << "\n";
    os << "modulus: " << field.modulus_string() << "\n";
    os << "order: " << field.order() << "\n";
    // explicit generator order check: alpha^N = 1 and alpha^{N/q} != 1
    bool order_ok = field.generator().pow(field.order()) == field.one();
    std::uint64_t rem = field.order();
    for (std::uint64_t q = 2; q * q <= rem && order_ok; ++q) {
        if (rem % q) continue;
        if (field.generator().pow(field.order() / q) == field.one()) order_ok = false;
        while (rem % q == 0) rem /= q;
    }
    if (order_ok && rem > 1 && field.generator().pow(field.order() / rem) == field.one())
        order_ok = false;
    os << "generator: alpha (order check " << (order_ok ? "ok" : "FAILED") << ")\n";
    const char* cache = "disabled";
    if (field.cache_status() == cs::CacheStatus::hit) cache = "hit";
    if (field.cache_status() == cs::CacheStatus::miss) cache = "miss (built and cached)";
    os << "dlog cache: " << cache << "\n";
    os << "dlog table: " << (field.has_dlog() ? "present" : "absent") << "\n";
    emit(v, os.str());
    return 0;
}

int cmd_bench(const CliOptions& v) {
    const cs::SeqParams params = cs::validate_params(v.p, v.m, v.e);
    const cs::Field field = build_field_for(v, params.n);
    const cs::WorkerPool pool(v.threads);
    const cs::SpectrumEngine engine(field, params, pool);

    struct Row {
        const char* name;
        double seconds;
        std::array<std::uint64_t, 6> counts;
    };
    std::vector<Row> rows;
    for (cs::Method m : {cs::Method::direct, cs::Method::sums, cs::Method::rank_fast}) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto rep = engine.full_spectrum(m);
        const auto t1 = std::chrono::steady_clock::now();
        rows.push_back({cs::to_string(m), std::chrono::duration<double>(t1 - t0).count(),
                        rep.counts});
    }
    const bool agree = rows[0].counts == rows[1].counts && rows[1].counts == rows[2].counts;
    std::ostringstream os;
    os << "bench p=" << params.p << " m=" << params.m << " e=" << params.e
       << " period=" << params.period << " threads=" << pool.thread_count() << "\n";
    for (const auto& r : rows) {
        os << "  " << r.name << ": " << std::fixed << r.seconds << " s\n";
    }
    os << "  identical results: " << (agree ? "yes" : "NO") << "\n";
    if (agree && rows[2].seconds > 0)
        os << "  speedup rank_fast vs direct: " << std::fixed
           << rows[0].seconds / rows[2].seconds << "x\n";
    emit(v, os.str());
    return agree ? 0 : 1;
}

int cmd_export(const CliOptions& v) {
    const cs::SeqParams params = cs::validate_params(v.p, v.m, v.e);
    const cs::Field field = build_field_for(v, params.n);
    const cs::MSeq seq = cs::m_sequence(params, field);
    if (v.decimated) {
        const auto dec = cs::decimated_sequence(seq, params.d);
        emit(v, cs::sequence_export_text(params, dec));
    } else {
        emit(v, cs::sequence_export_text(params, seq.values));
    }
    return 0;
}

int cmd_analyze(const CliOptions& v) {
    const cs::SeqParams params = cs::validate_params(v.p, v.m, v.e);
    const cs::Field field = build_field_for(v, params.n);
    const cs::WorkerPool pool(v.threads);
    const cs::SpectrumEngine engine(field, params, pool);
    emit(v, engine.analyze_dump());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact cross-correlation spectra of p-ary m-sequence decimations"};
    app.require_subcommand(1);
    std::vector<std::unique_ptr<SubHandles>> store;

    SubHandles* spectrum = add_common(app, store, "spectrum",
                                      "compute the correlation spectrum and classify it");
    SubHandles* verify = add_common(app, store, "verify", "run the full verification battery");
    SubHandles* field_info = add_common(app, store, "field-info", "describe a field GF(p^n)");
    field_info->opts["n"] = field_info->sub->add_option("-n", field_info->vals.n,
                                                        "extension degree (default 2m)");
    SubHandles* bench = add_common(app, store, "bench", "time the three spectrum methods");
    SubHandles* exp = add_common(app, store, "export", "write one period of the sequence");
    exp->sub->add_flag("--decimated", exp->vals.decimated, "export s_{dt} instead of s_t");
    SubHandles* analyze = add_common(app, store, "analyze",
                                     "per-c kernel/rank/sign/E(-1,c) dump (TSV)");

    CLI11_PARSE(app, argc, argv);

    SubHandles* active = nullptr;
    for (auto& h : store)
        if (h->sub->parsed()) active = h.get();
    if (!active) {
        std::cerr << "no subcommand selected\n";
        return 1;
    }

    try {
        const auto cfg = load_config_file(active->vals.config_file);
        apply_layer(*active, active->vals, cfg);
        const CliOptions& v = active->vals;
        if (active == spectrum) return cmd_spectrum(v);
        if (active == verify) {
            const bool params_given = active->opts.at("p")->count() > 0 ||
                                      active->opts.at("m")->count() > 0 ||
                                      active->opts.at("e")->count() > 0 ||
                                      cfg.count("p") || cfg.count("m") || cfg.count("e");
            return cmd_verify(v, params_given);
        }
        if (active == field_info) return cmd_field_info(v);
        if (active == bench) return cmd_bench(v);
        if (active == exp) return cmd_export(v);
        if (active == analyze) return cmd_analyze(v);
        return 1;
    } catch (const cs::ParamError& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return 2;
    } catch (const cs::CapError& e) {
        std::cerr << "cap exceeded: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
