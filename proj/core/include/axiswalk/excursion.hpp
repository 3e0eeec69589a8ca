#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "axiswalk/model.hpp"
#include "axiswalk/simulate.hpp"

namespace axiswalk {

enum class Axis
{
    Horizontal,    //!< y == 0, x > 0
    Vertical,      //!< x == 0, y > 0
    NegHorizontal, //!< y == 0, x < 0
    NegVertical,   //!< x == 0, y < 0
};

std::string_view to_string(Axis axis);

/*!
 * One completed excursion: the walk entered the excursion set at eta and
 * first left it at rho. Z values are max(|x|, |y|) at those times.
 */
struct ExcursionRecord
{
    std::int64_t index = 0;
    std::int64_t eta = 0;
    std::int64_t rho = 0;
    std::int64_t z_at_eta = 0;
    std::int64_t z_at_rho = 0;
    Axis axis = Axis::Horizontal;

    friend bool operator==(const ExcursionRecord&, const ExcursionRecord&) = default;
};

struct WalkSummary
{
    std::int64_t n = 0;
    std::int64_t z_bar_n = 0;
    std::int64_t z_min_n = 0;
    LatticeState terminal;
    std::int64_t count_n = 0;         //!< completed excursions by time n
    std::int64_t axis_local_time = 0; //!< moves with both ends in the excursion set
    std::int64_t renewal_age = 0;     //!< n minus the last exit time (0 if none)
    std::int64_t commitment_time = 0; //!< last visit to an axis other than the final one
    bool uncommitted = false;         //!< final and another axis both visited in the last window
    std::int64_t quadrant_changes = 0;
    std::int64_t quadrant_changes_late = 0; //!< changes at exit times after n / 2
};

//! Keeps every index up to dense_until, then a geometric subsequence.
struct ThinningSchedule
{
    std::int64_t dense_until = 1000;
    double ratio = 1.05;

    bool keep(std::int64_t index) const noexcept;
};

struct TrackerOptions
{
    //! Horizon n; needed for the windowed commitment and quadrant statistics.
    std::int64_t horizon = 0;
    //! Ask the driver to stop after this many completed excursions (0: never).
    std::int64_t stop_after = 0;
    //! Fraction of the horizon forming the final commitment window.
    double commit_window = 0.1;
    bool store_records = false;
    ThinningSchedule thinning{};
    //! Called for every completed excursion, thinned or not.
    std::function<void(const ExcursionRecord&)> on_record;
};

/*!
 * Online excursion detector.
 *
 * Feed it the (t, state) stream of a walk that starts off the excursion
 * set. Times must increase; when they jump by more than one, the skipped
 * states must be off the excursion set, which holds for simulate_leaping.
 */
class ExcursionTracker
{
  public:
    ExcursionTracker(ModelKind kind, LatticeState start, TrackerOptions options = {});

    //! Returns false once stop_after excursions have completed.
    bool observe(std::int64_t t, LatticeState s);
    bool operator()(std::int64_t t, LatticeState s) { return observe(t, s); }

    //! Summary at the last observed time, which must equal the horizon n.
    WalkSummary summary(std::int64_t n) const;

    std::int64_t completed() const noexcept { return count_; }
    std::int64_t last_time() const noexcept { return prev_t_; }
    LatticeState last_state() const noexcept { return prev_s_; }
    //! Running sums of z_at_rho - z_at_eta and z_at_eta - previous z_at_rho.
    std::int64_t axis_gain_sum() const noexcept { return axis_gain_; }
    std::int64_t interior_gain_sum() const noexcept { return interior_gain_; }
    const std::vector<ExcursionRecord>& records() const noexcept { return records_; }

  private:
    void visit(std::int64_t t, LatticeState s);
    static int signed_dominant(LatticeState s) noexcept;

    ModelKind kind_;
    TrackerOptions opt_;
    std::int64_t prev_t_ = 0;
    LatticeState prev_s_;
    bool prev_on_ = false;
    std::int64_t count_ = 0;
    std::int64_t eta_ = 0;
    std::int64_t z_eta_ = 0;
    Axis cur_axis_ = Axis::Horizontal;
    Axis final_axis_ = Axis::Horizontal;
    bool any_visit_ = false;
    std::int64_t last_visit_[4] = {-1, -1, -1, -1};
    std::int64_t last_rho_ = 0;
    std::int64_t last_z_rho_ = 0;
    int last_dominant_ = 0;
    std::int64_t local_time_ = 0;
    std::int64_t axis_gain_ = 0;
    std::int64_t interior_gain_ = 0;
    std::int64_t quadrant_changes_ = 0;
    std::int64_t quadrant_changes_late_ = 0;
    std::vector<ExcursionRecord> records_;
};

//! All excursions of an explicit path (index 0 is time 0).
std::vector<ExcursionRecord> track_excursions(ModelKind kind,
                                              std::span<const LatticeState> path);

//! Summary of an explicit path at horizon path.size() - 1.
WalkSummary summarize(ModelKind kind, std::span<const LatticeState> path);

struct SummaryRun
{
    WalkSummary summary;
    std::vector<ExcursionRecord> records;
};

//! Simulates n steps and summarizes them; records follow the thinning schedule.
SummaryRun summarize_walk(const ModelSpec& model, LatticeState start, std::int64_t n,
                          RngStream& rng, Engine engine = Engine::Leap,
                          TrackerOptions options = {});

//! Simulates until the i-th exit and returns every record (thinned if asked).
std::vector<ExcursionRecord> run_excursions(const ModelSpec& model, LatticeState start,
                                            std::int64_t i, RngStream& rng,
                                            Engine engine = Engine::Leap,
                                            TrackerOptions options = {});

struct LlnStatistic
{
    double value = 0.0;
    bool outside_theorem_range = false; //!< alpha outside (0, 1/2)
};

//! z_at_rho / index^(1 / (1 - alpha)).
LlnStatistic lln_statistic(const ExcursionRecord& record, double alpha);

struct GainSums
{
    std::int64_t axis = 0;     //!< sum of z_at_rho - z_at_eta
    std::int64_t interior = 0; //!< sum of z_at_eta - previous z_at_rho
};

/*!
 * Gain sums over the first i records, which must be the complete,
 * consecutive records 1..i. z_start is Z at time 0.
 */
GainSums excursion_gain_sums(std::span<const ExcursionRecord> records, std::int64_t i,
                             std::int64_t z_start = 1);

} // namespace axiswalk
