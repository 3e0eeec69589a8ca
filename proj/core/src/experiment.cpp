#include "axiswalk/experiment.hpp"
#include "axiswalk/verify.hpp"

#include <charconv>
#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#ifndef AXISWALK_VERSION
#define AXISWALK_VERSION "0.0.0"
#endif

namespace axiswalk {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view library_version()
{
    return AXISWALK_VERSION;
}

namespace {

std::string engine_name(Engine e)
{
    return e == Engine::Step ? "step" : "leap";
}

template<class T>
T get_as(const json& j, const char* key)
{
    try
    {
        return j.at(key).get<T>();
    }
    catch (const json::exception& e)
    {
        throw UsageError(std::string("config field '") + key + "': " + e.what());
    }
}

json hashed_fields(const ExperimentConfig& c)
{
    return json{
        {"model", std::string(to_string(c.model.kind))},
        {"alpha", c.model.alpha},
        {"start", {c.start.x, c.start.y}},
        {"n", c.n},
        {"excursions", c.excursions},
        {"replicas", c.replicas},
        {"seed", c.seed},
        {"thinning", {{"dense_until", c.thinning.dense_until}, {"ratio", c.thinning.ratio}}},
        {"engine", engine_name(c.engine)},
    };
}

void validate_config(const ExperimentConfig& c)
{
    try
    {
        validate(c.model);
    }
    catch (const std::domain_error& e)
    {
        throw UsageError(e.what());
    }
    if (c.n < 0)
        throw UsageError("n must be >= 0");
    if (c.excursions < 0)
        throw UsageError("excursions must be >= 0");
    if (c.replicas < 1)
        throw UsageError("replicas must be >= 1");
    if (c.stride < 1)
        throw UsageError("stride must be >= 1");
    if (!in_state_space(c.model.kind, c.start))
        throw UsageError("start state is outside the state space");
    if ((c.n > 0 || c.excursions > 0) && on_axis(c.model.kind, c.start))
        throw UsageError("start state must be off the axes");
    if (!c.target.empty())
        find_target(c.target);
}

std::string utc_now()
{
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string format_double(double v)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{})
        return "nan";
    return std::string(buf, ptr);
}

struct ManifestState
{
    bool exists = false;
    std::string hash;
    std::string started;
    std::int64_t committed = 0; // replicas 0..committed-1 are on disk
    std::int64_t bytes = 0;
    std::int64_t rows = 0;
    bool complete = false;
};

ManifestState read_manifest(const fs::path& path)
{
    ManifestState m;
    std::ifstream in(path);
    if (!in)
        return m;
    std::string line;
    while (std::getline(in, line))
    {
        if (line.empty())
            continue;
        json j;
        try
        {
            j = json::parse(line);
        }
        catch (const json::exception&)
        {
            break; // torn final line from a crash
        }
        const std::string ev = j.value("event", "");
        if (ev == "start")
        {
            m.exists = true;
            m.hash = j.value("config_hash", "");
            m.started = j.value("started", "");
        }
        else if (ev == "replica")
        {
            const auto r = j.at("replica").get<std::int64_t>();
            if (r != m.committed)
                break;
            m.committed = r + 1;
            m.bytes = j.at("bytes").get<std::int64_t>();
            m.rows += j.at("rows").get<std::int64_t>();
        }
        else if (ev == "complete")
            m.complete = true;
    }
    return m;
}

} // namespace

ExperimentConfig config_from_json(const std::string& text)
{
    json j;
    try
    {
        j = json::parse(text);
    }
    catch (const json::exception& e)
    {
        throw UsageError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object())
        throw UsageError("config must be a JSON object");
    static const std::vector<std::string> known{"model",   "alpha",  "start",    "n",
                                                "excursions", "replicas", "seed", "thinning",
                                                "engine",  "out",    "target",   "stride",
                                                "threads"};
    for (auto const& [key, value] : j.items())
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw UsageError("unknown config field '" + key + "'");

    ExperimentConfig c;
    if (j.contains("model"))
    {
        try
        {
            c.model.kind = parse_model_kind(get_as<std::string>(j, "model"));
        }
        catch (const std::invalid_argument& e)
        {
            throw UsageError(e.what());
        }
    }
    if (j.contains("alpha"))
        c.model.alpha = get_as<double>(j, "alpha");
    if (j.contains("start"))
    {
        const auto s = get_as<std::vector<std::int64_t>>(j, "start");
        if (s.size() != 2)
            throw UsageError("start must be [x, y]");
        c.start = {s[0], s[1]};
    }
    if (j.contains("n"))
        c.n = get_as<std::int64_t>(j, "n");
    if (j.contains("excursions"))
        c.excursions = get_as<std::int64_t>(j, "excursions");
    if (j.contains("replicas"))
        c.replicas = get_as<std::int64_t>(j, "replicas");
    if (j.contains("seed"))
        c.seed = get_as<std::uint64_t>(j, "seed");
    if (j.contains("thinning"))
    {
        const json& t = j.at("thinning");
        if (t.contains("dense_until"))
            c.thinning.dense_until = get_as<std::int64_t>(t, "dense_until");
        if (t.contains("ratio"))
            c.thinning.ratio = get_as<double>(t, "ratio");
    }
    if (j.contains("engine"))
    {
        const auto e = get_as<std::string>(j, "engine");
        if (e == "leap")
            c.engine = Engine::Leap;
        else if (e == "step")
            c.engine = Engine::Step;
        else
            throw UsageError("engine must be 'leap' or 'step'");
    }
    if (j.contains("out"))
        c.out = get_as<std::string>(j, "out");
    if (j.contains("target"))
        c.target = get_as<std::string>(j, "target");
    if (j.contains("stride"))
        c.stride = get_as<std::int64_t>(j, "stride");
    if (j.contains("threads"))
        c.threads = get_as<unsigned>(j, "threads");
    validate_config(c);
    return c;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return config_from_json(ss.str());
}

std::string config_to_json(const ExperimentConfig& config)
{
    json j = hashed_fields(config);
    j["out"] = config.out;
    j["target"] = config.target;
    j["stride"] = config.stride;
    j["threads"] = config.threads;
    return j.dump();
}

std::string config_hash(const ExperimentConfig& config)
{
    const std::string text = hashed_fields(config).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text)
    {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

unsigned resolve_threads(unsigned requested)
{
    if (const char* env = std::getenv("AXISWALK_THREADS"); env && *env)
    {
        unsigned v = 0;
        const std::string_view s(env);
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size() || v == 0)
            throw UsageError("AXISWALK_THREADS must be a positive integer");
        return v;
    }
    if (requested > 0)
        return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

std::vector<ResultRow> run_replica(const ExperimentConfig& config, std::int64_t replica)
{
    validate_config(config);
    RngStream rng(config.seed, static_cast<std::uint64_t>(replica));
    std::vector<ResultRow> rows;
    auto add = [&](std::string name, std::int64_t index, double value) {
        rows.push_back({replica, std::move(name), index, value});
    };

    if (config.excursions > 0)
    {
        TrackerOptions opt;
        opt.thinning = config.thinning;
        const auto records =
            run_excursions(config.model, config.start, config.excursions, rng, config.engine, opt);
        for (const auto& r : records)
        {
            add("z_at_eta", r.index, static_cast<double>(r.z_at_eta));
            add("z_at_rho", r.index, static_cast<double>(r.z_at_rho));
            add("rho", r.index, static_cast<double>(r.rho));
        }
        return rows;
    }

    if (config.n == 0)
    {
        add("terminal_x", 0, static_cast<double>(config.start.x));
        add("terminal_y", 0, static_cast<double>(config.start.y));
        return rows;
    }

    const auto run = summarize_walk(config.model, config.start, config.n, rng, config.engine);
    const WalkSummary& w = run.summary;
    const std::int64_t n = config.n;
    add("z_bar", n, static_cast<double>(w.z_bar_n));
    add("z_min", n, static_cast<double>(w.z_min_n));
    add("count", n, static_cast<double>(w.count_n));
    add("axis_local_time", n, static_cast<double>(w.axis_local_time));
    add("renewal_age", n, static_cast<double>(w.renewal_age));
    add("commitment_time", n, static_cast<double>(w.commitment_time));
    add("uncommitted", n, w.uncommitted ? 1.0 : 0.0);
    add("quadrant_changes", n, static_cast<double>(w.quadrant_changes));
    add("quadrant_changes_late", n, static_cast<double>(w.quadrant_changes_late));
    add("terminal_x", n, static_cast<double>(w.terminal.x));
    add("terminal_y", n, static_cast<double>(w.terminal.y));
    return rows;
}

std::string csv_header()
{
    return "replica,observable,index,value\n";
}

std::string format_row(const ResultRow& row)
{
    std::string s;
    s.reserve(48);
    s += std::to_string(row.replica);
    s += ',';
    s += row.observable;
    s += ',';
    s += std::to_string(row.index);
    s += ',';
    s += format_double(row.value);
    s += '\n';
    return s;
}

BatchResult run_batch(const ExperimentConfig& config, const BatchOptions& options)
{
    validate_config(config);
    if (config.out.empty())
        throw UsageError("run_batch needs an output directory");

    const fs::path dir(config.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
        throw IoError("cannot create output directory '" + config.out + "'");

    BatchResult result;
    result.results_path = (dir / "results.csv").string();
    result.manifest_path = (dir / "manifest.jsonl").string();
    const std::string hash = config_hash(config);

    ManifestState prior = read_manifest(result.manifest_path);
    if (prior.exists && prior.hash != hash)
        throw UsageError("output directory holds a run with a different configuration (hash "
                         + prior.hash + ")");

    std::int64_t first = 0;
    std::string started = utc_now();
    std::ofstream csv;
    std::ofstream manifest;
    std::int64_t bytes = 0;

    if (prior.exists)
    {
        first = prior.committed;
        started = prior.started;
        result.replicas_resumed = prior.committed;
        result.rows = prior.rows;
        bytes = prior.bytes;
        if (prior.complete)
        {
            result.replicas_done = config.replicas;
            result.complete = true;
            return result;
        }
        // Drop anything written after the last committed replica.
        fs::resize_file(result.results_path, static_cast<std::uintmax_t>(bytes), ec);
        if (ec)
            throw IoError("cannot truncate '" + result.results_path + "' for resume");
        csv.open(result.results_path, std::ios::binary | std::ios::app);
        manifest.open(result.manifest_path, std::ios::binary | std::ios::app);
    }
    else
    {
        csv.open(result.results_path, std::ios::binary | std::ios::trunc);
        manifest.open(result.manifest_path, std::ios::binary | std::ios::trunc);
        if (csv && manifest)
        {
            const std::string head = csv_header();
            csv << head;
            bytes = static_cast<std::int64_t>(head.size());
            json start{{"event", "start"},
                       {"config_hash", hash},
                       {"prng", std::string(RngStream::algorithm_id)},
                       {"version", std::string(library_version())},
                       {"started", started},
                       {"config", json::parse(config_to_json(config))}};
            manifest << start.dump() << '\n';
            manifest.flush();
            csv.flush();
        }
    }
    if (!csv || !manifest)
        throw IoError("cannot write to output directory '" + config.out + "'");

    const unsigned nt = resolve_threads(config.threads);
    std::mutex mu;
    std::condition_variable cv;
    std::map<std::int64_t, std::pair<std::vector<ResultRow>, std::string>> ready;
    std::int64_t next_task = first;
    bool stop = false;

    auto worker = [&] {
        for (;;)
        {
            std::int64_t r;
            {
                std::unique_lock lock(mu);
                // Bound the reorder buffer so a slow replica cannot pin memory.
                cv.wait(lock, [&] { return stop || ready.size() < 4 * nt + 4; });
                if (stop || next_task >= config.replicas)
                    return;
                r = next_task++;
            }
            std::vector<ResultRow> rows;
            std::string error;
            try
            {
                rows = run_replica(config, r);
            }
            catch (const std::exception& e)
            {
                rows = {{r, "failed", 0, 1.0}};
                error = e.what();
            }
            {
                std::lock_guard lock(mu);
                ready.emplace(r, std::make_pair(std::move(rows), std::move(error)));
            }
            cv.notify_all();
        }
    };

    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nt; ++t)
        pool.emplace_back(worker);

    std::int64_t committed_now = 0;
    for (std::int64_t r = first; r < config.replicas; ++r)
    {
        if (options.stop_after_replicas >= 0 && committed_now >= options.stop_after_replicas)
            break;
        std::pair<std::vector<ResultRow>, std::string> item;
        {
            std::unique_lock lock(mu);
            cv.wait(lock, [&] { return ready.count(r) > 0; });
            item = std::move(ready.at(r));
            ready.erase(r);
        }
        cv.notify_all();
        std::string chunk;
        for (const auto& row : item.first)
            chunk += format_row(row);
        csv << chunk;
        csv.flush();
        if (!csv)
        {
            {
                std::lock_guard lock(mu);
                stop = true;
            }
            cv.notify_all();
            for (auto& th : pool)
                th.join();
            throw IoError("write to '" + result.results_path + "' failed");
        }
        bytes += static_cast<std::int64_t>(chunk.size());
        result.rows += static_cast<std::int64_t>(item.first.size());
        json line{{"event", "replica"},
                  {"replica", r},
                  {"rows", item.first.size()},
                  {"bytes", bytes}};
        if (!item.second.empty())
        {
            line["error"] = item.second;
            ++result.failed_replicas;
        }
        manifest << line.dump() << '\n';
        manifest.flush();
        ++committed_now;
        if (options.on_commit)
            options.on_commit(r);
    }

    {
        std::lock_guard lock(mu);
        stop = true;
    }
    cv.notify_all();
    for (auto& th : pool)
        th.join();

    result.replicas_done = first + committed_now;
    result.complete = result.replicas_done == config.replicas;
    if (result.complete)
    {
        json done{{"event", "complete"},
                  {"config_hash", hash},
                  {"prng", std::string(RngStream::algorithm_id)},
                  {"version", std::string(library_version())},
                  {"started", started},
                  {"rows", result.rows}};
        manifest << done.dump() << '\n';
        manifest.flush();
    }
    return result;
}

} // namespace axiswalk
