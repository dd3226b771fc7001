#include <doctest.h>

#include <relbound/corpus.hpp>
#include <relbound/driver.hpp>
#include <relbound/report.hpp>
#include <relbound/smt.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>

using namespace relbound;

namespace
{

RunConfig config(Approach a, bool subdivide = false)
{
    RunConfig c;
    c.approach = a;
    c.subdivide = subdivide;
    return c;
}

ProcessResult cli(std::vector<std::string> args)
{
    args.insert(args.begin(), RELBOUND_CLI_PATH);
    return run_process(args, "", std::chrono::milliseconds(120000));
}

bool contains(const std::string &hay, const std::string &needle)
{
    return hay.find(needle) != std::string::npos;
}

} // namespace

TEST_CASE("text report of the subdivided bspline3 run")
{
    const RunReport r = execute({corpus_spec("bspline3")}, config(Approach::TaylorRel, true));
    const std::string text = render(r, OutputFormat::Text);
    CHECK(contains(text, "relError: 6."));
    CHECK(contains(text, "On several sub-intervals relative error cannot be computed.\n"
                         "Computing absolute error on these sub-intervals.\n"
                         "For intervals (u -> [0.0,0.125]), absError: "));
    CHECK(exit_status(r) == 0);
}

TEST_CASE("zero-range failure is reported, not thrown")
{
    const RunReport r = execute({corpus_spec("bspline3")}, config(Approach::RelViaAbs));
    REQUIRE(r.functions.size() == 1);
    CHECK(!r.functions[0].ok());
    CHECK(r.functions[0].error_kind == ErrorKind::ZeroRangeFailure);
    CHECK(contains(render(r, OutputFormat::Text), "zero"));
    CHECK(exit_status(r) == 2);
}

TEST_CASE("json round trip")
{
    RunConfig c = config(Approach::TaylorRel, true);
    c.samples = 2000;
    std::vector<FunctionSpec> specs;
    for (const auto &b : bundled_corpus()) {
        specs.push_back(corpus_spec(b.name));
    }
    const RunReport r = execute(specs, c);
    const std::string text = to_json_text(r);
    CHECK(contains(text, "\"schemaVersion\": 1"));
    const RunReport back = run_report_from_json(text);
    CHECK(to_json_text(back) == text);
    REQUIRE(back.functions.size() == 4);
    CHECK(back.functions[3].subdivision->failed.size() == 1);
    CHECK(back.functions[3].bound == r.functions[3].bound);

    CHECK_THROWS_AS(run_report_from_json("{\"schemaVersion\": 99}"), Error);
    CHECK_THROWS_AS(run_report_from_json("not json"), Error);
}

TEST_CASE("forward trace and csv")
{
    RunConfig c = config(Approach::Forward);
    c.verbose = true;
    const RunReport r = execute({corpus_spec("bspline1")}, c);
    REQUIRE(r.functions[0].ok());
    CHECK(!r.functions[0].relative);
    CHECK(!r.functions[0].trace.empty());
    CHECK(contains(render(r, OutputFormat::Text), "absError: "));

    const RunReport s = execute({corpus_spec("bspline3")}, config(Approach::TaylorRel, true));
    const std::string csv = render(s, OutputFormat::Csv);
    CHECK(csv.rfind("function,row,approach,precision,box,bound_kind,bound,bound_exact,status,detail\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 1 + 8);
    CHECK(contains(csv, ",subdomain,taylor-rel,float64,\"(u -> [0.0,0.125])\",absolute,"));
}

TEST_CASE("identical configuration gives byte-identical output")
{
    for (Approach a : {Approach::Forward, Approach::TaylorAbs, Approach::TaylorRel}) {
        RunConfig c = config(a);
        c.samples = 1000;
        const auto specs = std::vector<FunctionSpec>{corpus_spec("bspline1"), corpus_spec("bspline2")};
        for (OutputFormat f : {OutputFormat::Text, OutputFormat::Csv, OutputFormat::Json}) {
            CHECK(render(execute(specs, c), f) == render(execute(specs, c), f));
        }
    }
}

TEST_CASE("flag validation")
{
    CHECK_THROWS_AS(config(Approach::Naive, true).validate(), Error);
    CHECK_THROWS_AS(config(Approach::Forward, true).validate(), Error);
    RunConfig c = config(Approach::TaylorRel);
    c.m = 4;
    CHECK_THROWS_AS(c.validate(), Error);
    c.subdivide = true;
    c.validate();
    c.precision = "float16";
    CHECK_THROWS_AS(c.validate(), Error);
    CHECK_THROWS_AS(approach_from_string("magic"), Error);
    CHECK(default_m(1) == 8);
    CHECK(default_budget(1) == 50);
    CHECK(default_m(3) == 4);
    CHECK(default_budget(3) == 100);
}

TEST_CASE("bench table marks zero-range cells and respects the floor")
{
    BenchConfig bc;
    bc.samples = 3000;
    const BenchReport r = run_bench({corpus_spec("bspline3"), corpus_spec("bspline2")}, bc);
    REQUIRE(r.rows.size() == 2);
    CHECK(!r.violation());
    const BenchRow &b3 = r.rows[0];
    CHECK(!b3.cells[0].value);
    CHECK(b3.cells[0].note == "zero-range");
    REQUIRE(b3.cells[3].value);
    CHECK(*b3.cells[3].value <= 2 * Rational::parse_decimal("6.66e-16"));
    CHECK(b3.cells[3].failures == 1);
    const std::string text = render(r, OutputFormat::Text);
    CHECK(contains(text, "bspline3"));
    CHECK(contains(text, " (2."));
    for (const auto &c : r.rows[1].cells) {
        REQUIRE(c.value);
        REQUIRE(r.rows[1].underapprox);
        CHECK(*r.rows[1].underapprox <= *c.value);
    }
}

TEST_CASE("command line exit statuses")
{
    auto ok = cli({"run", "bspline3", "--approach", "taylor-rel", "--subdivide", "--m", "8", "--budget", "50"});
    CHECK(ok.exit_code == 0);
    CHECK(contains(ok.output, "relError: "));
    CHECK(contains(ok.output, "For intervals (u -> [0.0,0.125]), absError: "));

    CHECK(cli({"run", "bspline3", "--approach", "rel-via-abs"}).exit_code == 2);
    CHECK(cli({"run", "bspline3", "--approach", "bogus"}).exit_code == 1);
    CHECK(cli({"run", "no-such-benchmark"}).exit_code == 1);
    CHECK(cli({"run", "bspline3", "--approach", "naive", "--subdivide"}).exit_code == 1);

    const auto dir = std::filesystem::temp_directory_path();
    const auto bad = dir / "relbound_cli_bad.txt";
    std::ofstream(bad) << "def f(x: Real): Real = { require(0.0 <= x && x <= 1.0) x + }\n";
    CHECK(cli({"run", bad.string()}).exit_code == 1);
    const auto good = dir / "relbound_cli_good.txt";
    std::ofstream(good) << "def f(x: Real): Real = { require(1.0 <= x && x <= 2.0) x * x }\n"
                           "def g(x: Real, y: Real): Real = { require(1.0 <= x && x <= 2.0 && 1.0 <= y && y <= 3.0) "
                           "x / y }\n";
    auto both = cli({"run", good.string(), "--approach", "forward", "--output", "json"});
    CHECK(both.exit_code == 0);
    const RunReport parsed = run_report_from_json(both.output);
    CHECK(parsed.functions.size() == 2);
    auto one = cli({"run", good.string(), "--function", "g", "--output", "csv"});
    CHECK(one.exit_code == 0);
    CHECK(contains(one.output, "\ng,summary,taylor-rel,"));
    std::filesystem::remove(bad);
    std::filesystem::remove(good);
}
