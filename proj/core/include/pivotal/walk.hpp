#pragma once

#include <cassert>
#include <utility>
#include <vector>

#include "pivotal/population.hpp"

namespace pivotal {

/// Stage decomposition of a population for ordered pivotal sampling.
///
/// Stage i (1..n-1) owns the non-cross-border units strictly between
/// borders i-1 and i, plus the duel against the i-th cross-border unit;
/// stage n owns the remaining units, from which the last selection is made.
template <class T>
struct StageLayout {
    explicit StageLayout(const BasicPopulation<T>& p)
        : pop(&p), cb(cross_border(p)) {}

    const BasicPopulation<T>* pop;
    CrossBorderInfo<T> cb;

    long long stages() const { return pop->sample_size(); }

    /// Inclusive unit range [lo, hi] of the stage's segment (lo > hi if empty).
    std::pair<int, int> segment(long long stage) const {
        const int lo = stage == 1 ? 1 : cb.borders[stage - 2].unit + 1;
        const int hi = stage == stages() ? pop->size() : cb.borders[stage - 1].unit - 1;
        return {lo, hi};
    }

    const CrossBorder<T>& border(long long stage) const {
        return cb.borders[stage - 1];
    }

    /// P(the cross-border unit wins the stage's duel) = a_i / (1 - b_i).
    T border_win_probability(long long stage) const {
        const auto& b = border(stage);
        const T denom = scalar_traits<T>::from_int(1) - b.beyond;
        assert(denom > scalar_traits<T>::from_int(0));
        return b.before / denom;
    }
};

/// Candidate for the stage's survivor pick: a segment unit with its
/// inclusion probability, or the leftover of the previous duel with its
/// residual probability.
template <class T>
struct Candidate {
    int unit;
    T weight;
};

/// Step-by-step state of one ordered pivotal selection.
///
/// At each stage below the last, the caller picks a survivor H among
/// `candidates()` (proportional to their weights), then resolves the duel
/// against the stage's cross-border unit: the border unit wins with
/// probability `border_win_probability()`, and the loser carries the
/// residual `beyond` into the next stage (dropped immediately when the
/// residual is zero). At the last stage the caller picks the final unit.
template <class T>
class PivotalWalk {
public:
    explicit PivotalWalk(const StageLayout<T>& layout) : layout_(&layout) {
        selected_.reserve(static_cast<std::size_t>(layout.stages()));
    }

    bool finished() const {
        return static_cast<long long>(selected_.size()) == layout_->stages();
    }
    bool at_final_stage() const { return stage_ == layout_->stages(); }
    long long stage() const { return stage_; }

    std::vector<Candidate<T>> candidates() const {
        std::vector<Candidate<T>> out;
        visit_candidates([&](int unit, const T& w) { out.push_back({unit, w}); });
        return out;
    }

    /// Sum of candidate weights: 1 - a_i at a duel stage, exactly 1 at the
    /// final stage.
    T candidate_total() const {
        T total = scalar_traits<T>::from_int(0);
        visit_candidates([&](int, const T& w) { total += w; });
        return total;
    }

    template <class F>
    void visit_candidates(F&& f) const {
        if (leftover_unit_ != 0) f(leftover_unit_, leftover_prob_);
        auto [lo, hi] = layout_->segment(stage_);
        for (int u = lo; u <= hi; ++u) f(u, layout_->pop->prob(u));
    }

    int border_unit() const { return layout_->border(stage_).unit; }
    T border_win_probability() const { return layout_->border_win_probability(stage_); }

    /// Resolves the duel at a non-final stage. `survivor` is the chosen H
    /// (0 when there were no candidates, which forces a border win).
    void resolve_duel(int survivor, bool border_wins) {
        assert(!at_final_stage() && !finished());
        assert(border_wins || survivor != 0);
        const auto& border = layout_->border(stage_);
        const int loser = border_wins ? survivor : border.unit;
        selected_.push_back(border_wins ? border.unit : survivor);
        if (loser != 0 && border.beyond > scalar_traits<T>::from_int(0)) {
            leftover_unit_ = loser;
            leftover_prob_ = border.beyond;
        } else {
            leftover_unit_ = 0;
        }
        ++stage_;
    }

    void choose_final(int unit) {
        assert(at_final_stage() && !finished());
        selected_.push_back(unit);
    }

    const std::vector<int>& selection() const { return selected_; }

private:
    const StageLayout<T>* layout_;
    long long stage_ = 1;
    int leftover_unit_ = 0;  // 0 = none
    T leftover_prob_ = scalar_traits<T>::from_int(0);
    std::vector<int> selected_;
};

}  // namespace pivotal
