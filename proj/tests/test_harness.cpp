#include <doctest.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "axiswalk/experiment.hpp"
#include "axiswalk/trajectory.hpp"
#include "axiswalk/verify.hpp"

using namespace axiswalk;
namespace fs = std::filesystem;

namespace {

struct TempDir
{
    fs::path path;
    explicit TempDir(const std::string& tag)
    {
        path = fs::temp_directory_path()
               / ("axiswalk-test-" + tag + "-" + std::to_string(std::random_device{}()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir()
    {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ExperimentConfig small_config(const fs::path& out)
{
    ExperimentConfig c;
    c.model = make_model(ModelKind::QuarterPlane, 0.25);
    c.n = 20000;
    c.replicas = 12;
    c.seed = 314;
    c.out = out.string();
    c.threads = 1;
    return c;
}

} // namespace

TEST_CASE("config: json round trip and errors")
{
    const auto c = config_from_json(
        R"({"model":"full-plane","alpha":0.2,"n":1000,"replicas":5,"seed":9,"start":[2,3],
            "thinning":{"dense_until":10,"ratio":1.5},"engine":"step","stride":7})");
    CHECK(c.model.kind == ModelKind::FullPlane);
    CHECK(c.model.alpha == 0.2);
    CHECK(c.start == LatticeState{2, 3});
    CHECK(c.thinning.dense_until == 10);
    CHECK(c.engine == Engine::Step);
    const auto again = config_from_json(config_to_json(c));
    CHECK(config_to_json(again) == config_to_json(c));
    CHECK(config_hash(again) == config_hash(c));

    ExperimentConfig other = c;
    other.seed = 10;
    CHECK(config_hash(other) != config_hash(c));
    other = c;
    other.threads = 8;
    other.out = "elsewhere";
    CHECK(config_hash(other) == config_hash(c));

    CHECK_THROWS_AS(config_from_json("{not json"), UsageError);
    CHECK_THROWS_AS(config_from_json("[1,2]"), UsageError);
    CHECK_THROWS_AS(config_from_json(R"({"colour":"red"})"), UsageError);
    CHECK_THROWS_AS(config_from_json(R"({"replicas":0})"), UsageError);
    CHECK_THROWS_AS(config_from_json(R"({"replicas":"many"})"), UsageError);
    CHECK_THROWS_AS(config_from_json(R"({"alpha":0})"), UsageError);
    CHECK_THROWS_AS(config_from_json(R"({"model":"hexagonal"})"), UsageError);
    CHECK_THROWS_AS(config_from_json(R"({"start":[1]})"), UsageError);
    CHECK_THROWS_AS(config_from_json(R"({"start":[1,0],"n":10})"), UsageError);
    CHECK_THROWS_AS(config_from_json(R"({"start":[-1,1]})"), UsageError);
    CHECK_THROWS_AS(config_from_json(R"({"target":"no-such-target"})"), UsageError);
    CHECK_THROWS_AS(config_from_json(R"({"engine":"warp"})"), UsageError);
    CHECK_NOTHROW(config_from_json(R"({"target":"lln"})"));
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), UsageError);
}

TEST_CASE("config: thread resolution")
{
    ::unsetenv("AXISWALK_THREADS");
    CHECK(resolve_threads(3) == 3);
    CHECK(resolve_threads(0) >= 1);
    ::setenv("AXISWALK_THREADS", "2", 1);
    CHECK(resolve_threads(5) == 2);
    ::setenv("AXISWALK_THREADS", "two", 1);
    CHECK_THROWS_AS(resolve_threads(5), UsageError);
    ::unsetenv("AXISWALK_THREADS");
}

TEST_CASE("replica rows")
{
    ExperimentConfig c;
    c.n = 0;
    c.start = {4, 7};
    const auto rows = run_replica(c, 0);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == ResultRow{0, "terminal_x", 0, 4.0});
    CHECK(rows[1] == ResultRow{0, "terminal_y", 0, 7.0});

    c.n = 5000;
    c.start = {1, 1};
    const auto summary = run_replica(c, 3);
    CHECK(summary.size() == 11);
    CHECK(summary == run_replica(c, 3));

    c.n = 0;
    c.excursions = 1500;
    std::set<std::tuple<std::int64_t, std::string, std::int64_t>> keys;
    for (const auto& r : run_replica(c, 1))
        CHECK(keys.insert({r.replica, r.observable, r.index}).second);
    CHECK(format_row({2, "z_bar", 10, 0.1}) == "2,z_bar,10,0.1\n");
    CHECK(csv_header() == "replica,observable,index,value\n");
}

TEST_CASE("run_batch: n = 0 writes the start state")
{
    TempDir tmp("zero");
    ExperimentConfig c;
    c.n = 0;
    c.replicas = 1;
    c.out = tmp.path.string();
    const auto r = run_batch(c);
    CHECK(r.complete);
    CHECK(r.rows == 2);
    CHECK(slurp(tmp.path / "results.csv")
          == "replica,observable,index,value\n0,terminal_x,0,1\n0,terminal_y,0,1\n");
    std::ifstream man(tmp.path / "manifest.jsonl");
    std::string line;
    std::vector<nlohmann::json> events;
    while (std::getline(man, line))
        events.push_back(nlohmann::json::parse(line));
    REQUIRE(events.size() == 3);
    CHECK(events[0]["event"] == "start");
    CHECK(events[0]["config_hash"] == config_hash(c));
    CHECK(events[0]["prng"] == std::string(RngStream::algorithm_id));
    CHECK(events[0]["version"] == std::string(library_version()));
    CHECK(events[0].contains("started"));
    CHECK(events[2]["event"] == "complete");
    CHECK(events[2]["rows"] == 2);
}

TEST_CASE("run_batch: output does not depend on the thread count")
{
    TempDir a("t1"), b("t3");
    ExperimentConfig c1 = small_config(a.path);
    ExperimentConfig c3 = small_config(b.path);
    c3.threads = 3;
    run_batch(c1);
    run_batch(c3);
    const std::string ra = slurp(a.path / "results.csv");
    CHECK(ra == slurp(b.path / "results.csv"));
    CHECK(ra.size() > 100);

    // rerunning a complete batch leaves the bytes alone
    const auto again = run_batch(c1);
    CHECK(again.complete);
    CHECK(slurp(a.path / "results.csv") == ra);
}

TEST_CASE("run_batch: crash and resume give the same bytes")
{
    TempDir full("full"), part("part");
    run_batch(small_config(full.path));
    const std::string expected = slurp(full.path / "results.csv");

    const ExperimentConfig c = small_config(part.path);
    BatchOptions stop;
    stop.stop_after_replicas = 5;
    const auto first = run_batch(c, stop);
    CHECK_FALSE(first.complete);
    CHECK(first.replicas_done == 5);
    {
        // a torn write after the last committed replica
        std::ofstream junk(part.path / "results.csv", std::ios::app);
        junk << "5,z_bar,20000,12";
    }
    std::vector<std::int64_t> committed;
    BatchOptions watch;
    watch.on_commit = [&](std::int64_t r) { committed.push_back(r); };
    const auto second = run_batch(c, watch);
    CHECK(second.complete);
    CHECK(second.replicas_resumed == 5);
    REQUIRE(committed.size() == 7);
    CHECK(committed.front() == 5);
    CHECK(slurp(part.path / "results.csv") == expected);

    ExperimentConfig changed = c;
    changed.seed = 1;
    CHECK_THROWS_AS(run_batch(changed), UsageError);
}

TEST_CASE("run_batch: unwritable output fails before simulating")
{
    TempDir tmp("io");
    {
        std::ofstream f(tmp.path / "plain-file");
        f << "x";
    }
    ExperimentConfig c = small_config(tmp.path / "plain-file" / "sub");
    std::atomic<int> calls{0};
    BatchOptions o;
    o.on_commit = [&](std::int64_t) { ++calls; };
    CHECK_THROWS_AS(run_batch(c, o), IoError);
    CHECK(calls == 0);
    c.out.clear();
    CHECK_THROWS_AS(run_batch(c), UsageError);
}

TEST_CASE("parallel replicas keep order and rethrow")
{
    const auto v = parallel_replicas(100, 4, [](std::int64_t r) { return r * r; });
    REQUIRE(v.size() == 100);
    for (std::int64_t r = 0; r < 100; ++r)
        CHECK(v[static_cast<std::size_t>(r)] == r * r);
    CHECK_THROWS_AS(parallel_replicas(10, 3,
                                      [](std::int64_t r) -> int {
                                          if (r == 7)
                                              throw std::runtime_error("boom");
                                          return 0;
                                      }),
                    std::runtime_error);
}

TEST_CASE("trajectory rows")
{
    const ModelSpec q = make_model(ModelKind::QuarterPlane, 0.25);
    RngStream r1(1, 0);
    const auto rows = trajectory_dump(q, {1, 1}, 3, 1, r1);
    REQUIRE(rows.size() == 4);
    for (std::size_t j = 0; j < rows.size(); ++j)
        CHECK(rows[j].t == static_cast<std::int64_t>(j));
    CHECK(rows[0].state == LatticeState{1, 1});

    RngStream r2(1, 0);
    const auto two = trajectory_dump(q, {1, 1}, 10, 50, r2);
    REQUIRE(two.size() == 2);
    CHECK(two[0].t == 0);
    CHECK(two[1].t == 10);

    RngStream r3(1, 0);
    const auto fp = trajectory_dump(make_model(ModelKind::FullPlane, 0.2), {1, 1}, 1'000'000, 1000, r3);
    CHECK(fp.size() == 1001);
    CHECK(fp.back().t == 1'000'000);

    // step and leap engines sample the same grid of times
    RngStream r4(2, 0), r5(2, 0);
    const auto s = trajectory_dump(q, {1, 1}, 12345, 100, r4, Engine::Step);
    const auto l = trajectory_dump(q, {1, 1}, 12345, 100, r5, Engine::Leap);
    REQUIRE(s.size() == l.size());
    for (std::size_t j = 0; j < s.size(); ++j)
        CHECK(s[j].t == l[j].t);

    std::ostringstream out;
    write_trajectory_csv(out, rows);
    CHECK(out.str().rfind("t,x,y\n0,1,1\n", 0) == 0);
    RngStream r6(1, 0);
    CHECK_THROWS_AS(trajectory_dump(q, {1, 1}, 3, 0, r6), std::invalid_argument);
}

TEST_CASE("verify: registry and refusals")
{
    const std::set<std::string> expected{
        "lln",         "mean-asymptotic",   "recurrence-sandwich",   "nn-left-tail",
        "theorem-left-tail", "theorem-right-tail", "arcsine",       "commitment",
        "coupling-ks", "variance-scaling",  "ballistic",             "quadrant-commit",
        "subordinator-marginal", "submartingale", "eta-moment"};
    std::set<std::string> got;
    for (const auto& t : target_registry())
    {
        got.insert(t.id);
        CHECK_FALSE(t.anchor.empty());
        CHECK(t.replica_floor >= 1);
    }
    CHECK(got == expected);

    CHECK_THROWS_AS(verify("no-such-target"), UsageError);
    VerifyOverrides few;
    few.replicas = 3;
    try
    {
        verify("lln", few);
        FAIL("under-powered run was accepted");
    }
    catch (const UnderpoweredError& e)
    {
        CHECK(e.required() == find_target("lln").replica_floor);
    }
}

TEST_CASE("verify: mean-asymptotic report")
{
    VerifyOverrides o;
    o.alpha = 0.3;
    const VerdictReport rep = verify("mean-asymptotic", o);
    CHECK(rep.target == "mean-asymptotic");
    CHECK_FALSE(rep.anchor.empty());
    REQUIRE(rep.criteria.size() == 4);
    for (const auto& c : rep.criteria)
    {
        CHECK_FALSE(c.expected_source.empty());
        CHECK(c.tolerance > 0.0);
    }
    const auto j = nlohmann::json::parse(rep.to_json());
    CHECK(j["target"] == "mean-asymptotic");
    CHECK(j["criteria"].size() == 4);
    CHECK(rep.to_text().find("verdict:") != std::string::npos);
    // same inputs, same report
    const VerdictReport again = verify("mean-asymptotic", o);
    CHECK(again.to_json().size() > 0);
    for (std::size_t k = 0; k < rep.criteria.size(); ++k)
        CHECK(again.criteria[k].measured == rep.criteria[k].measured);
}

TEST_CASE("verify: small simulated targets are reproducible")
{
    VerifyOverrides o;
    o.replicas = 1000;
    o.n = 20000;
    const VerdictReport a = verify("arcsine", o);
    o.threads = 3;
    const VerdictReport b = verify("arcsine", o);
    REQUIRE(a.criteria.size() == b.criteria.size());
    CHECK(a.criteria[0].measured == b.criteria[0].measured);
}
