#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "axiswalk/experiment.hpp"

namespace axiswalk {

//! A check inside a verdict. Only gating checks decide the verdict.
struct Criterion
{
    std::string name;
    double measured = 0.0;
    std::string relation; //!< "<=", ">=", "within", "abs<=" ...
    double expected = 0.0;
    std::string expected_source; //!< closed-form, exact-series, renewal-oracle, ...
    double tolerance = 0.0;
    bool pass = false;
    bool gating = true;
    std::string detail;
};

struct VerdictReport
{
    std::string target;
    std::string anchor; //!< the statement being checked
    std::string config_json;
    std::vector<Criterion> criteria;
    std::vector<std::string> notes;
    double seconds = 0.0;

    bool pass() const;
    std::string to_text() const;
    std::string to_json() const;
};

struct VerifyOverrides
{
    std::optional<ModelKind> model;
    std::optional<double> alpha;
    std::optional<std::int64_t> n;
    std::optional<std::int64_t> excursions;
    std::optional<std::int64_t> replicas;
    std::optional<std::uint64_t> seed;
    std::optional<Engine> engine;
    unsigned threads = 0;
};

//! Refused run: too few replicas for the target's tolerance.
class UnderpoweredError : public UsageError
{
  public:
    UnderpoweredError(const std::string& target, std::int64_t requested, std::int64_t required);
    std::int64_t required() const noexcept { return required_; }

  private:
    std::int64_t required_;
};

struct TargetInfo
{
    std::string id;
    std::string anchor;
    std::string description;
    ExperimentConfig defaults;
    std::int64_t replica_floor = 1;
    std::function<VerdictReport(const ExperimentConfig&, const VerifyOverrides&)> run;
};

const std::vector<TargetInfo>& target_registry();

//! Throws UsageError for an unknown id.
const TargetInfo& find_target(std::string_view id);

//! Defaults of the target with the overrides applied.
ExperimentConfig effective_config(const TargetInfo& target, const VerifyOverrides& overrides);

/*!
 * Runs a target. Throws UnderpoweredError when the replica count is below
 * the target's floor.
 */
VerdictReport verify(std::string_view id, const VerifyOverrides& overrides = {});

} // namespace axiswalk
