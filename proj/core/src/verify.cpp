#include "axiswalk/verify.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include <json.hpp>

namespace axiswalk {

using nlohmann::json;

UnderpoweredError::UnderpoweredError(const std::string& target, std::int64_t requested,
                                     std::int64_t required)
    : UsageError("target '" + target + "' needs at least " + std::to_string(required)
                 + " replicas, got " + std::to_string(requested)),
      required_(required)
{
}

bool VerdictReport::pass() const
{
    bool any = false;
    for (const auto& c : criteria)
    {
        if (!c.gating)
            continue;
        any = true;
        if (!c.pass)
            return false;
    }
    return any;
}

namespace {

std::string num(double v)
{
    std::ostringstream ss;
    ss.precision(6);
    ss << v;
    return ss.str();
}

json json_number(double v)
{
    if (std::isfinite(v))
        return v;
    return std::isnan(v) ? json("nan") : json(v > 0 ? "inf" : "-inf");
}

} // namespace

std::string VerdictReport::to_text() const
{
    std::ostringstream out;
    out << "target:  " << target << '\n';
    out << "anchor:  " << anchor << '\n';
    out << "config:  " << config_json << '\n';
    for (const auto& c : criteria)
    {
        out << (c.pass ? "  [pass] " : "  [FAIL] ") << (c.gating ? "" : "(diagnostic) ")
            << c.name << ": measured " << num(c.measured) << ' ' << c.relation << ' '
            << num(c.expected);
        if (c.tolerance != 0.0)
            out << " (tol " << num(c.tolerance) << ')';
        out << " [" << c.expected_source << ']';
        if (!c.detail.empty())
            out << " -- " << c.detail;
        out << '\n';
    }
    for (const auto& n : notes)
        out << "  note: " << n << '\n';
    out << "verdict: " << (pass() ? "PASS" : "FAIL") << " (" << num(seconds) << " s)\n";
    return out.str();
}

std::string VerdictReport::to_json() const
{
    json j;
    j["target"] = target;
    j["anchor"] = anchor;
    j["config"] = json::parse(config_json.empty() ? "{}" : config_json);
    j["pass"] = pass();
    j["seconds"] = seconds;
    j["criteria"] = json::array();
    for (const auto& c : criteria)
    {
        j["criteria"].push_back({{"name", c.name},
                                 {"measured", json_number(c.measured)},
                                 {"relation", c.relation},
                                 {"expected", json_number(c.expected)},
                                 {"expected_source", c.expected_source},
                                 {"tolerance", json_number(c.tolerance)},
                                 {"pass", c.pass},
                                 {"gating", c.gating},
                                 {"detail", c.detail}});
    }
    j["notes"] = notes;
    return j.dump(2);
}

const TargetInfo& find_target(std::string_view id)
{
    for (const auto& t : target_registry())
        if (t.id == id)
            return t;
    throw UsageError("unknown target '" + std::string(id) + "'");
}

ExperimentConfig effective_config(const TargetInfo& target, const VerifyOverrides& o)
{
    ExperimentConfig c = target.defaults;
    if (o.model)
        c.model.kind = *o.model;
    if (o.alpha)
        c.model.alpha = *o.alpha;
    if (o.n)
        c.n = *o.n;
    if (o.excursions)
        c.excursions = *o.excursions;
    if (o.replicas)
        c.replicas = *o.replicas;
    if (o.seed)
        c.seed = *o.seed;
    if (o.engine)
        c.engine = *o.engine;
    c.threads = resolve_threads(o.threads);
    c.target = target.id;
    try
    {
        validate(c.model);
    }
    catch (const std::domain_error& e)
    {
        throw UsageError(e.what());
    }
    return c;
}

VerdictReport verify(std::string_view id, const VerifyOverrides& overrides)
{
    const TargetInfo& t = find_target(id);
    const ExperimentConfig c = effective_config(t, overrides);
    if (c.replicas < t.replica_floor)
        throw UnderpoweredError(t.id, c.replicas, t.replica_floor);
    const auto t0 = std::chrono::steady_clock::now();
    VerdictReport r = t.run(c, overrides);
    r.target = t.id;
    r.anchor = t.anchor;
    if (r.config_json.empty())
        r.config_json = config_to_json(c);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

} // namespace axiswalk
