#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "axiswalk/excursion.hpp"
#include "axiswalk/model.hpp"
#include "axiswalk/simulate.hpp"

namespace axiswalk {

//! Bad configuration or command line.
class UsageError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

//! Output files could not be created or written.
class IoError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

std::string_view library_version();

struct ExperimentConfig
{
    ModelSpec model{ModelKind::QuarterPlane, 0.25};
    LatticeState start{1, 1};
    std::int64_t n = 0;          //!< horizon in steps (used when excursions == 0)
    std::int64_t excursions = 0; //!< stop each replica after this many exits
    std::int64_t replicas = 1;
    std::uint64_t seed = 1;
    ThinningSchedule thinning{};
    Engine engine = Engine::Leap;
    std::string out;    //!< output directory for run_batch
    std::string target; //!< verification target, if any
    std::int64_t stride = 1;
    unsigned threads = 0; //!< 0: hardware concurrency
};

//! Parses a JSON object; unknown keys and bad values raise UsageError.
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string config_to_json(const ExperimentConfig& config);

/*!
 * Hex digest of the fields that determine results. Output path, target
 * and thread count are excluded.
 */
std::string config_hash(const ExperimentConfig& config);

//! AXISWALK_THREADS, else requested, else hardware concurrency; at least 1.
unsigned resolve_threads(unsigned requested);

struct ResultRow
{
    std::int64_t replica = 0;
    std::string observable;
    std::int64_t index = 0;
    double value = 0.0;

    friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

//! Rows for one replica; deterministic in (config, replica).
std::vector<ResultRow> run_replica(const ExperimentConfig& config, std::int64_t replica);

std::string csv_header();
std::string format_row(const ResultRow& row);

struct BatchOptions
{
    //! Stop after committing this many replicas in this call (testing aid).
    std::int64_t stop_after_replicas = -1;
    //! Called once per committed replica.
    std::function<void(std::int64_t replica)> on_commit;
};

struct BatchResult
{
    std::string results_path;
    std::string manifest_path;
    std::int64_t rows = 0;
    std::int64_t replicas_done = 0;
    std::int64_t replicas_resumed = 0;
    std::int64_t failed_replicas = 0;
    bool complete = false;
};

/*!
 * Runs all replicas on a worker pool and writes results.csv and
 * manifest.jsonl under config.out. Rows are committed in replica order,
 * so the CSV bytes do not depend on the thread count. If a manifest for
 * the same config hash exists, committed replicas are kept and the run
 * resumes after them.
 */
BatchResult run_batch(const ExperimentConfig& config, const BatchOptions& options = {});

/*!
 * Calls fn(replica) for replica in [0, count) on `threads` workers and
 * returns the results in replica order.
 */
template<class Fn>
auto parallel_replicas(std::int64_t count, unsigned threads, Fn fn)
    -> std::vector<decltype(fn(std::int64_t{}))>;

} // namespace axiswalk

#include "axiswalk/detail/parallel.hpp"
