#include "axiswalk/excursion.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace axiswalk {

std::string_view to_string(Axis axis)
{
    switch (axis)
    {
    case Axis::Horizontal:
        return "horizontal";
    case Axis::Vertical:
        return "vertical";
    case Axis::NegHorizontal:
        return "neg-horizontal";
    case Axis::NegVertical:
        return "neg-vertical";
    }
    return "unknown";
}

bool ThinningSchedule::keep(std::int64_t index) const noexcept
{
    if (index <= dense_until)
        return true;
    if (!(ratio > 1.0))
        return true;
    // First index of every geometric bucket [ratio^k, ratio^(k+1)).
    const double lr = std::log(ratio);
    const auto bucket = [&](std::int64_t i) {
        return static_cast<std::int64_t>(std::floor(std::log(static_cast<double>(i)) / lr));
    };
    return bucket(index) != bucket(index - 1);
}

ExcursionTracker::ExcursionTracker(ModelKind kind, LatticeState start, TrackerOptions options)
    : kind_(kind), opt_(std::move(options)), prev_s_(start)
{
    if (on_axis(kind, start))
        throw std::invalid_argument("excursion tracking needs a start state off the axes");
    if (!in_state_space(kind, start))
        throw std::domain_error("start state is outside the state space");
    last_z_rho_ = z_bar(start);
    last_dominant_ = signed_dominant(start);
}

int ExcursionTracker::signed_dominant(LatticeState s) noexcept
{
    const std::int64_t ax = std::llabs(s.x);
    const std::int64_t ay = std::llabs(s.y);
    const std::int64_t v = ax >= ay ? s.x : s.y;
    return (v > 0) - (v < 0);
}

void ExcursionTracker::visit(std::int64_t t, LatticeState s)
{
    any_visit_ = true;
    if (s.x == 0 && s.y == 0)
    {
        for (auto& v : last_visit_)
            v = t;
        return;
    }
    Axis a;
    if (s.y == 0)
        a = s.x > 0 ? Axis::Horizontal : Axis::NegHorizontal;
    else
        a = s.y > 0 ? Axis::Vertical : Axis::NegVertical;
    last_visit_[static_cast<int>(a)] = t;
}

bool ExcursionTracker::observe(std::int64_t t, LatticeState s)
{
    if (t == 0)
    {
        prev_t_ = 0;
        prev_s_ = s;
        return true;
    }
    const bool on = on_axis(kind_, s);
    if (on)
    {
        // Axis visits come from single steps only.
        visit(t, s);
        if (prev_on_)
            local_time_ += t - prev_t_;
        else
        {
            eta_ = t;
            z_eta_ = z_bar(s);
            if (s.y == 0)
                cur_axis_ = s.x > 0 ? Axis::Horizontal : Axis::NegHorizontal;
            else
                cur_axis_ = s.y > 0 ? Axis::Vertical : Axis::NegVertical;
            final_axis_ = cur_axis_;
        }
    }
    else if (prev_on_)
    {
        ++count_;
        ExcursionRecord rec{count_, eta_, t, z_eta_, z_bar(s), cur_axis_};
        axis_gain_ += rec.z_at_rho - rec.z_at_eta;
        interior_gain_ += rec.z_at_eta - last_z_rho_;
        last_z_rho_ = rec.z_at_rho;
        last_rho_ = t;

        const int dom = signed_dominant(s);
        if (dom * last_dominant_ < 0)
        {
            ++quadrant_changes_;
            if (opt_.horizon > 0 && 2 * t > opt_.horizon)
                ++quadrant_changes_late_;
        }
        last_dominant_ = dom;

        if (opt_.on_record)
            opt_.on_record(rec);
        if (opt_.store_records && opt_.thinning.keep(rec.index))
            records_.push_back(rec);
        prev_on_ = false;
        prev_t_ = t;
        prev_s_ = s;
        return !(opt_.stop_after > 0 && count_ >= opt_.stop_after);
    }
    prev_on_ = on;
    prev_t_ = t;
    prev_s_ = s;
    return true;
}

WalkSummary ExcursionTracker::summary(std::int64_t n) const
{
    if (n != prev_t_)
        throw std::logic_error("summary requested at a time the tracker has not reached");
    WalkSummary w;
    w.n = n;
    w.terminal = prev_s_;
    w.z_bar_n = z_bar(prev_s_);
    w.z_min_n = z_min(prev_s_);
    w.count_n = count_;
    // An excursion still in progress at n contributes its on-axis moves too.
    w.axis_local_time = local_time_;
    w.renewal_age = n - last_rho_;
    w.quadrant_changes = quadrant_changes_;
    w.quadrant_changes_late = quadrant_changes_late_;

    if (any_visit_)
    {
        const int fin = static_cast<int>(final_axis_);
        std::int64_t other = -1;
        for (int a = 0; a < 4; ++a)
            if (a != fin && last_visit_[a] > other)
                other = last_visit_[a];
        w.commitment_time = other < 0 ? 0 : other;
        const double window_start = static_cast<double>(n) * (1.0 - opt_.commit_window);
        w.uncommitted = other >= 0 && static_cast<double>(other) >= window_start
                        && static_cast<double>(last_visit_[fin]) >= window_start;
    }
    return w;
}

std::vector<ExcursionRecord> track_excursions(ModelKind kind, std::span<const LatticeState> path)
{
    if (path.empty())
        throw std::invalid_argument("empty path");
    TrackerOptions opt;
    opt.store_records = true;
    opt.thinning.dense_until = std::numeric_limits<std::int64_t>::max();
    ExcursionTracker tracker(kind, path[0], opt);
    for (std::size_t t = 0; t < path.size(); ++t)
        tracker.observe(static_cast<std::int64_t>(t), path[t]);
    return tracker.records();
}

WalkSummary summarize(ModelKind kind, std::span<const LatticeState> path)
{
    if (path.size() < 2)
        throw std::invalid_argument("summary needs at least one step");
    const auto n = static_cast<std::int64_t>(path.size() - 1);
    TrackerOptions opt;
    opt.horizon = n;
    ExcursionTracker tracker(kind, path[0], opt);
    for (std::int64_t t = 0; t <= n; ++t)
        tracker.observe(t, path[static_cast<std::size_t>(t)]);
    return tracker.summary(n);
}

SummaryRun summarize_walk(const ModelSpec& model, LatticeState start, std::int64_t n,
                          RngStream& rng, Engine engine, TrackerOptions options)
{
    if (n < 1)
        throw std::invalid_argument("summary needs a horizon n >= 1");
    options.horizon = n;
    options.stop_after = 0;
    ExcursionTracker tracker(model.kind, start, std::move(options));
    simulate(engine, model, start, n, rng, tracker);
    SummaryRun out{tracker.summary(n), tracker.records()};
    return out;
}

std::vector<ExcursionRecord> run_excursions(const ModelSpec& model, LatticeState start,
                                            std::int64_t i, RngStream& rng, Engine engine,
                                            TrackerOptions options)
{
    if (i < 1)
        throw std::invalid_argument("excursion count must be >= 1");
    options.stop_after = i;
    options.store_records = true;
    ExcursionTracker tracker(model.kind, start, std::move(options));
    simulate(engine, model, start, unbounded_horizon, rng, tracker);
    return tracker.records();
}

LlnStatistic lln_statistic(const ExcursionRecord& record, double alpha)
{
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("lln statistic needs alpha in (0, 1)");
    if (record.index < 1)
        throw std::invalid_argument("record index must be >= 1");
    LlnStatistic s;
    s.value = static_cast<double>(record.z_at_rho)
              / std::pow(static_cast<double>(record.index), 1.0 / (1.0 - alpha));
    s.outside_theorem_range = !(alpha < 0.5);
    return s;
}

GainSums excursion_gain_sums(std::span<const ExcursionRecord> records, std::int64_t i,
                             std::int64_t z_start)
{
    if (i < 0 || static_cast<std::size_t>(i) > records.size())
        throw std::out_of_range("gain sums need records 1..i");
    GainSums g;
    std::int64_t prev = z_start;
    for (std::int64_t j = 0; j < i; ++j)
    {
        const auto& r = records[static_cast<std::size_t>(j)];
        if (r.index != j + 1)
            throw std::invalid_argument("gain sums need consecutive records starting at 1");
        g.axis += r.z_at_rho - r.z_at_eta;
        g.interior += r.z_at_eta - prev;
        prev = r.z_at_rho;
    }
    return g;
}

} // namespace axiswalk
