// axiswalk: simulate, verify and inspect axis-reinforced lattice walks.
//
// Exit codes: 0 success / verdict pass, 1 verdict fail or runtime error,
// 2 usage error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "axiswalk/analytics.hpp"
#include "axiswalk/experiment.hpp"
#include "axiswalk/trajectory.hpp"
#include "axiswalk/verify.hpp"

namespace {

constexpr int exit_pass = 0;
constexpr int exit_fail = 1;
constexpr int exit_usage = 2;

struct CommonFlags
{
    std::optional<std::string> model;
    std::optional<double> alpha;
    std::optional<std::int64_t> n;
    std::optional<std::int64_t> excursions;
    std::optional<std::int64_t> replicas;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> engine;
    unsigned threads = 0;
};

void add_common(CLI::App* cmd, CommonFlags& f)
{
    cmd->add_option("--model", f.model,
                    "quarter-plane | coupled-half-plane | full-plane | backstep-quarter | "
                    "reflected-srw");
    cmd->add_option("--alpha", f.alpha, "reinforcement exponent in (0, 4]");
    cmd->add_option("--n", f.n, "horizon in steps");
    cmd->add_option("--excursions", f.excursions, "stop each replica after this many exits");
    cmd->add_option("--replicas", f.replicas, "independent replicas");
    cmd->add_option("--seed", f.seed, "master seed");
    cmd->add_option("--engine", f.engine, "leap (default) or step");
    cmd->add_option("--threads", f.threads, "worker threads (AXISWALK_THREADS overrides)");
}

axiswalk::Engine parse_engine(const std::string& s)
{
    if (s == "leap")
        return axiswalk::Engine::Leap;
    if (s == "step")
        return axiswalk::Engine::Step;
    throw axiswalk::UsageError("engine must be 'leap' or 'step'");
}

void apply(axiswalk::ExperimentConfig& c, const CommonFlags& f)
{
    if (f.model)
        c.model.kind = axiswalk::parse_model_kind(*f.model);
    if (f.alpha)
        c.model.alpha = *f.alpha;
    if (f.n)
        c.n = *f.n;
    if (f.excursions)
        c.excursions = *f.excursions;
    if (f.replicas)
        c.replicas = *f.replicas;
    if (f.seed)
        c.seed = *f.seed;
    if (f.engine)
        c.engine = parse_engine(*f.engine);
    if (f.threads)
        c.threads = f.threads;
}

int cmd_simulate(const std::optional<std::string>& config_path, const CommonFlags& f,
                 const std::optional<std::string>& out)
{
    axiswalk::ExperimentConfig c;
    if (config_path)
        c = axiswalk::load_config(*config_path);
    apply(c, f);
    if (out)
        c.out = *out;
    if (c.out.empty())
        c.out = "axiswalk-out";
    // Re-validate after flag overrides.
    c = axiswalk::config_from_json(axiswalk::config_to_json(c));
    const auto r = axiswalk::run_batch(c);
    std::cout << "rows " << r.rows << ", replicas " << r.replicas_done << " (resumed "
              << r.replicas_resumed << ", failed " << r.failed_replicas << ")\n"
              << "results  " << r.results_path << "\nmanifest " << r.manifest_path << '\n';
    return r.failed_replicas == 0 ? exit_pass : exit_fail;
}

int cmd_verify(const std::string& target, const CommonFlags& f, bool as_json)
{
    axiswalk::VerifyOverrides o;
    if (f.model)
        o.model = axiswalk::parse_model_kind(*f.model);
    o.alpha = f.alpha;
    o.n = f.n;
    o.excursions = f.excursions;
    o.replicas = f.replicas;
    o.seed = f.seed;
    if (f.engine)
        o.engine = parse_engine(*f.engine);
    o.threads = f.threads;
    const auto report = axiswalk::verify(target, o);
    std::cout << (as_json ? report.to_json() + "\n" : report.to_text());
    return report.pass() ? exit_pass : exit_fail;
}

int cmd_dump(const CommonFlags& f, std::int64_t stride, const std::vector<std::int64_t>& start,
             const std::optional<std::string>& out)
{
    axiswalk::ExperimentConfig c;
    c.n = 1000;
    apply(c, f);
    if (start.size() != 2)
        throw axiswalk::UsageError("--start takes two integers");
    c.start = {start[0], start[1]};
    c.stride = stride;
    axiswalk::validate(c.model);
    axiswalk::RngStream rng(c.seed, 0);
    const auto rows = axiswalk::trajectory_dump(c.model, c.start, c.n, c.stride, rng, c.engine);
    if (out)
    {
        std::ofstream file(*out);
        if (!file)
            throw axiswalk::IoError("cannot write '" + *out + "'");
        axiswalk::write_trajectory_csv(file, rows);
    }
    else
        axiswalk::write_trajectory_csv(std::cout, rows);
    return exit_pass;
}

int cmd_list()
{
    for (const auto& t : axiswalk::target_registry())
    {
        std::printf("%-22s replicas >= %-6lld %s\n", t.id.c_str(),
                    static_cast<long long>(t.replica_floor), t.description.c_str());
    }
    return exit_pass;
}

int cmd_constants(double alpha, std::optional<double> c_est)
{
    const auto k = axiswalk::constants(alpha, c_est);
    std::printf("alpha              %.17g\n", k.alpha);
    std::printf("c1                 %.17g\n", k.c1);
    std::printf("c2                 %.17g\n", k.c2);
    std::printf("lln exponent       %.17g\n", k.lln_exponent);
    std::printf("scaling exponent   %.17g\n", k.scaling_exponent);
    std::printf("left-tail exponent %.17g\n", k.left_tail_exponent);
    if (k.g_alpha)
        std::printf("g_alpha            %.17g\n", *k.g_alpha);
    std::printf("theorem range      %s\n", k.in_theorem_range ? "yes" : "no (0 < alpha < 1/2 required)");
    return exit_pass;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Simulation and verification of axis-reinforced random walks"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(axiswalk::library_version()));

    CommonFlags sim_flags;
    std::optional<std::string> sim_config, sim_out;
    auto* sim = app.add_subcommand("simulate", "run replicas and write results.csv + manifest");
    sim->add_option("--config", sim_config, "JSON config file");
    sim->add_option("--out", sim_out, "output directory");
    add_common(sim, sim_flags);

    CommonFlags ver_flags;
    std::string ver_target;
    std::optional<std::string> ver_target_flag;
    bool ver_json = false;
    auto* ver = app.add_subcommand("verify", "run a verification target and print the verdict");
    ver->add_option("id", ver_target, "target id (see list-targets)");
    ver->add_option("--target", ver_target_flag, "target id");
    ver->add_flag("--json", ver_json, "print the report as JSON");
    add_common(ver, ver_flags);

    CommonFlags dump_flags;
    std::int64_t dump_stride = 1;
    std::vector<std::int64_t> dump_start{1, 1};
    std::optional<std::string> dump_out;
    auto* dump = app.add_subcommand("dump-trajectory", "write t,x,y rows of one walk");
    dump->add_option("--stride", dump_stride, "keep every stride-th state");
    dump->add_option("--start", dump_start, "start state x y")->expected(2);
    dump->add_option("--out", dump_out, "output CSV (stdout if omitted)");
    add_common(dump, dump_flags);

    app.add_subcommand("list-targets", "list verification targets");

    double const_alpha = 0.0;
    std::optional<double> const_c;
    auto* cons = app.add_subcommand("constants", "print the model constants for alpha");
    cons->add_option("--alpha", const_alpha, "reinforcement exponent")->required();
    cons->add_option("--c", const_c, "estimated recursion constant, for g_alpha");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp& e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForVersion& e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError& e)
    {
        app.exit(e);
        return exit_usage;
    }

    try
    {
        if (*sim)
            return cmd_simulate(sim_config, sim_flags, sim_out);
        if (*ver)
        {
            const std::string id = ver_target_flag ? *ver_target_flag : ver_target;
            if (id.empty())
                throw axiswalk::UsageError("verify needs a target id");
            return cmd_verify(id, ver_flags, ver_json);
        }
        if (*dump)
            return cmd_dump(dump_flags, dump_stride, dump_start, dump_out);
        if (*cons)
            return cmd_constants(const_alpha, const_c);
        return cmd_list();
    }
    catch (const axiswalk::UnderpoweredError& e)
    {
        std::cerr << "error: " << e.what() << " (required minimum " << e.required() << ")\n";
        return exit_usage;
    }
    catch (const axiswalk::UsageError& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }
    catch (const std::invalid_argument& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }
    catch (const std::domain_error& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return exit_fail;
    }
}
