#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "corrspec/report_io.hpp"

using namespace corrspec;

namespace {

SpectrumReport sample_report() {
    const SeqParams params = validate_params(5, 1, 1);
    const Field field = Field::build(5, 2);
    const WorkerPool pool(1);
    const SpectrumEngine engine(field, params, pool);
    return engine.full_spectrum(Method::direct);
}

} // namespace

TEST_CASE("JSON round-trip") {
    const SpectrumReport rep = sample_report();
    const std::string text = report_to_json(rep);
    const SpectrumReport back = report_from_json(text);
    CHECK(back == rep);
}

TEST_CASE("CSV round-trip") {
    const SpectrumReport rep = sample_report();
    const std::string text = report_to_csv(rep);
    const SpectrumReport back = report_from_csv(text);
    CHECK(back == rep);
}

TEST_CASE("CSV and JSON round-trip to the same report") {
    const SpectrumReport rep = sample_report();
    CHECK(report_from_csv(report_to_csv(rep)) == report_from_json(report_to_json(rep)));
}

TEST_CASE("serialization is deterministic") {
    const SpectrumReport rep = sample_report();
    CHECK(report_to_json(rep) == report_to_json(sample_report()));
    CHECK(report_to_csv(rep) == report_to_csv(sample_report()));
}

TEST_CASE("CSV body has one row per class") {
    const std::string text = report_to_csv(sample_report());
    std::istringstream in(text);
    std::string line;
    std::size_t class_rows = 0;
    bool in_table = false;
    while (std::getline(in, line)) {
        if (line == "class,u,v,count") {
            in_table = true;
            continue;
        }
        if (in_table && !line.empty() && line[0] != '#') ++class_rows;
    }
    CHECK(class_rows == 6);
}

TEST_CASE("text rendering names all classes and audits") {
    const SpectrumReport rep = sample_report();
    const std::string text = report_to_text(rep);
    for (CorrClass c : kAllCorrClasses) CHECK(text.find(to_string(c)) != std::string::npos);
    CHECK(text.find("remark1_bound") != std::string::npos);
    CHECK(text.find("[PASS]") != std::string::npos);
}

TEST_CASE("malformed inputs are rejected") {
    CHECK_THROWS(report_from_csv("not a report"));
    CHECK_THROWS(report_from_json("{}"));
    CHECK_THROWS(report_from_csv("# p=5\n# m=1\n# e=1\nclass,u,v,count\nBOGUS,0,0,1\n"));
}
