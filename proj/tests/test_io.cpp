#include <doctest.h>

#include <sstream>

#include "hawkes/config.hpp"
#include "hawkes/io.hpp"
#include "support/generators.hpp"

using namespace hawkes;
using namespace hawkes::testing;

TEST_CASE("trace serialization round-trips byte-exactly") {
    Rng rng(14);
    const ItemCatalog catalog = random_catalog(12, 3, rng);
    const EpochTrace trace = random_epoch(25, catalog, rng);

    std::ostringstream first;
    write_trace(first, trace, 3, 12345);

    std::istringstream in(first.str());
    int epoch = -1;
    std::uint64_t seed = 0;
    const EpochTrace parsed = read_trace(in, &epoch, &seed);
    CHECK(epoch == 3);
    CHECK(seed == 12345);
    CHECK(parsed.horizon == trace.horizon);
    REQUIRE(parsed.sessions.size() == trace.sessions.size());
    for (std::size_t i = 0; i < trace.sessions.size(); ++i) {
        CHECK(parsed.sessions[i].t == trace.sessions[i].t);
        CHECK(parsed.sessions[i].items == trace.sessions[i].items);
    }

    std::ostringstream second;
    write_trace(second, parsed, epoch, seed);
    CHECK(first.str() == second.str());
}

TEST_CASE("trace parse errors name the offending line") {
    std::istringstream missing_header("");
    CHECK_THROWS_AS(read_trace(missing_header), std::runtime_error);
    std::istringstream bad_record("{\"horizon\": 1.0, \"epoch\": 0, \"seed\": 1}\nnot json\n");
    CHECK_THROWS_WITH_AS(read_trace(bad_record), doctest::Contains("line 2"),
                         std::runtime_error);
    std::istringstream missing_field(
        "{\"horizon\": 1.0, \"epoch\": 0, \"seed\": 1}\n{\"t\": 0.5}\n");
    CHECK_THROWS_AS(read_trace(missing_field), std::runtime_error);
}

TEST_CASE("catalog serialization round-trips byte-exactly") {
    Rng rng(20);
    const ItemCatalog catalog = random_catalog(9, 4, rng);
    std::ostringstream first;
    write_catalog(first, catalog);

    std::istringstream in(first.str());
    const ItemCatalog parsed = read_catalog(in);
    CHECK(parsed.count() == 9);
    CHECK(parsed.dim() == 4);
    CHECK((parsed.vectors() - catalog.vectors()).cwiseAbs().maxCoeff() == 0.0);

    std::ostringstream second;
    write_catalog(second, parsed);
    CHECK(first.str() == second.str());

    std::istringstream bad("not a header");
    CHECK_THROWS_AS(read_catalog(bad), std::runtime_error);
    std::istringstream truncated("3 2\n1 0 0\n");
    CHECK_THROWS_AS(read_catalog(truncated), std::runtime_error);
}

TEST_CASE("params JSON round-trips byte-exactly") {
    Rng rng(31);
    const ModelParams p = random_params(5, rng);
    const std::string text = params_to_json(p);
    const ModelParams parsed = params_from_json(text);
    CHECK(parsed.mu == p.mu);
    CHECK(parsed.beta1 == p.beta1);
    CHECK((parsed.u1 - p.u1).norm() == 0.0);
    CHECK((parsed.u2 - p.u2).norm() == 0.0);
    CHECK(params_to_json(parsed) == text);
    CHECK_THROWS_AS(params_from_json("{\"mu\": 1}"), std::runtime_error);
    CHECK_THROWS_AS(params_from_json("garbage"), std::runtime_error);
}

TEST_CASE("fit report serialization carries flags and errors") {
    Rng rng(2);
    FitReport report;
    report.params = random_params(3, rng);
    report.trajectory = {-10.0, -9.5, -9.4};
    report.steps_taken = 3;
    report.converged = true;
    report.errors = ParamErrors{0.1, 0.2, 0.3, 0.4, 0.5};
    std::ostringstream out;
    write_fit_report(out, report);
    const std::string text = out.str();
    CHECK(text.find("\"converged\": true") != std::string::npos);
    CHECK(text.find("\"errors\"") != std::string::npos);
    CHECK(text.find("\"steps_taken\": 3") != std::string::npos);
}

TEST_CASE("config parser handles sections, comments, and errors") {
    std::istringstream in(
        "# top comment\n"
        "plain = 1\n"
        "[model]\n"
        "mu = 0.3   # trailing comment\n"
        "beta1 = 4\n"
        "[experiment]\n"
        "grid = 1, 2, 3\n"
        "enabled = true\n"
        "name = error-vs-samples\n");
    const ConfigMap cfg = parse_config(in);
    CHECK(config_int(cfg, "plain", 0) == 1);
    CHECK(config_double(cfg, "model.mu", 0.0) == doctest::Approx(0.3));
    CHECK(config_double(cfg, "model.missing", 7.5) == 7.5);
    CHECK(config_bool(cfg, "experiment.enabled", false));
    CHECK(config_string(cfg, "experiment.name", "") == "error-vs-samples");
    const std::vector<double> grid = config_list(cfg, "experiment.grid", {});
    CHECK(grid == std::vector<double>{1.0, 2.0, 3.0});

    std::istringstream bad("key value without equals\n");
    CHECK_THROWS_AS(parse_config(bad), std::runtime_error);
    std::istringstream bad_number("[model]\nmu = abc\n");
    const ConfigMap cfg2 = parse_config(bad_number);
    CHECK_THROWS_AS(config_double(cfg2, "model.mu", 0.0), std::runtime_error);
}
