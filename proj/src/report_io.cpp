#include "corrspec/report_io.hpp"

#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

namespace corrspec {

using ordered_json = nlohmann::ordered_json;

namespace {

SeqParams params_from_fields(std::uint64_t p, unsigned m, unsigned e) {
    return validate_params(p, m, e);
}

std::string escape_field(const std::string& s) {
    std::string out;
    for (char c : s) out += (c == '|' || c == '\n') ? ' ' : c;
    return out;
}

} // namespace

std::string report_to_json(const SpectrumReport& report) {
    ordered_json j;
    j["params"] = {{"p", report.params.p},     {"m", report.params.m},
                   {"e", report.params.e},     {"n", report.params.n},
                   {"d", report.params.d},     {"period", report.params.period},
                   {"gcd_dn", report.params.gcd_dn}};
    j["method"] = report.method;
    ordered_json counts = ordered_json::object();
    for (CorrClass c : kAllCorrClasses) {
        const QuadValue v = class_value(c, report.params);
        counts[to_string(c)] = {{"u", rational_to_string(v.u)},
                                {"v", rational_to_string(v.v)},
                                {"count", report.counts[static_cast<unsigned>(c)]}};
    }
    j["counts"] = std::move(counts);
    ordered_json audits = ordered_json::array();
    for (const auto& a : report.audits)
        audits.push_back({{"name", a.name},
                          {"pass", a.pass},
                          {"observed", a.observed},
                          {"expected", a.expected}});
    j["audits"] = std::move(audits);
    return j.dump(2) + "\n";
}

SpectrumReport report_from_json(const std::string& text) {
    const auto j = ordered_json::parse(text);
    SpectrumReport rep;
    rep.params = params_from_fields(j.at("params").at("p").get<std::uint64_t>(),
                                    j.at("params").at("m").get<unsigned>(),
                                    j.at("params").at("e").get<unsigned>());
    rep.method = j.at("method").get<std::string>();
    for (const auto& [tag, entry] : j.at("counts").items()) {
        const auto cls = corr_class_from_string(tag);
        if (!cls) throw std::runtime_error("unknown class tag in JSON report: " + tag);
        rep.counts[static_cast<unsigned>(*cls)] = entry.at("count").get<std::uint64_t>();
        // value fields are derived from params; verify they round-trip
        const QuadValue want = class_value(*cls, rep.params);
        if (rational_from_string(entry.at("u").get<std::string>()) != want.u ||
            rational_from_string(entry.at("v").get<std::string>()) != want.v)
            throw std::runtime_error("class value mismatch in JSON report for " + tag);
    }
    for (const auto& a : j.at("audits"))
        rep.audits.push_back({a.at("name").get<std::string>(), a.at("pass").get<bool>(),
                              a.at("observed").get<std::string>(),
                              a.at("expected").get<std::string>()});
    return rep;
}

std::string report_to_csv(const SpectrumReport& report) {
    std::ostringstream os;
    os << "# corrspec-report v1\n";
    os << "# p=" << report.params.p << "\n";
    os << "# m=" << report.params.m << "\n";
    os << "# e=" << report.params.e << "\n";
    os << "# method=" << report.method << "\n";
    for (const auto& a : report.audits)
        os << "# audit|" << escape_field(a.name) << "|" << (a.pass ? 1 : 0) << "|"
           << escape_field(a.observed) << "|" << escape_field(a.expected) << "\n";
    os << "class,u,v,count\n";
    for (CorrClass c : kAllCorrClasses) {
        const QuadValue v = class_value(c, report.params);
        os << to_string(c) << "," << rational_to_string(v.u) << "," << rational_to_string(v.v)
           << "," << report.counts[static_cast<unsigned>(c)] << "\n";
    }
    return os.str();
}

SpectrumReport report_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::uint64_t p = 0;
    unsigned m = 0, e = 0;
    std::string method;
    std::vector<AuditCheck> audits;
    std::array<std::uint64_t, 6> counts{};
    bool saw_header = false;

    auto split = [](const std::string& s, char sep) {
        std::vector<std::string> out;
        std::size_t pos = 0;
        while (true) {
            const auto next = s.find(sep, pos);
            out.push_back(s.substr(pos, next - pos));
            if (next == std::string::npos) break;
            pos = next + 1;
        }
        return out;
    };

    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const std::string body = line.size() > 2 ? line.substr(2) : "";
            if (body.rfind("audit|", 0) == 0) {
                const auto f = split(body, '|');
                if (f.size() != 5) throw std::runtime_error("malformed audit line in CSV");
                audits.push_back({f[1], f[2] == "1", f[3], f[4]});
            } else if (body.rfind("p=", 0) == 0)
                p = std::stoull(body.substr(2));
            else if (body.rfind("m=", 0) == 0)
                m = static_cast<unsigned>(std::stoul(body.substr(2)));
            else if (body.rfind("e=", 0) == 0)
                e = static_cast<unsigned>(std::stoul(body.substr(2)));
            else if (body.rfind("method=", 0) == 0)
                method = body.substr(7);
            continue;
        }
        if (!saw_header) {
            if (line != "class,u,v,count") throw std::runtime_error("missing CSV header row");
            saw_header = true;
            continue;
        }
        const auto f = split(line, ',');
        if (f.size() != 4) throw std::runtime_error("malformed CSV class row: " + line);
        const auto cls = corr_class_from_string(f[0]);
        if (!cls) throw std::runtime_error("unknown class tag in CSV: " + f[0]);
        counts[static_cast<unsigned>(*cls)] = std::stoull(f[3]);
    }
    if (!saw_header) throw std::runtime_error("CSV report has no class table");

    SpectrumReport rep;
    rep.params = params_from_fields(p, m, e);
    rep.method = method;
    rep.counts = counts;
    rep.audits = std::move(audits);
    return rep;
}

std::string report_to_text(const SpectrumReport& report) {
    std::ostringstream os;
    os << "cross-correlation spectrum, p=" << report.params.p << " m=" << report.params.m
       << " e=" << report.params.e << " (n=" << report.params.n << ", d=" << report.params.d
       << ", period=" << report.params.period << ")\n";
    os << "method: " << report.method << "\n\n";
    os << std::left << std::setw(12) << "class" << std::setw(24) << "value (u + v sqrt p)"
       << std::setw(12) << "count" << "\n";
    for (CorrClass c : kAllCorrClasses) {
        const QuadValue v = class_value(c, report.params);
        std::string val = rational_to_string(v.u);
        if (v.v != 0) val += " + " + rational_to_string(v.v) + "*sqrt(" +
                             std::to_string(report.params.p) + ")";
        os << std::left << std::setw(12) << to_string(c) << std::setw(24) << val << std::setw(12)
           << report.counts[static_cast<unsigned>(c)] << "\n";
    }
    os << "\naudits:\n";
    for (const auto& a : report.audits)
        os << "  [" << (a.pass ? "PASS" : "FAIL") << "] " << a.name << ": observed " << a.observed
           << ", expected " << a.expected << "\n";
    return os.str();
}

} // namespace corrspec
