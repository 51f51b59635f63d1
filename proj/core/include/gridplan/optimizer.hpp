#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "gridplan/constraints.hpp"
#include "gridplan/measures.hpp"
#include "gridplan/rng.hpp"

namespace gridplan {

struct NeighborhoodMode {
    bool allow_add = true;
    bool allow_remove = true;
    bool allow_exchange = false;
};

struct SearchConfig {
    NeighborhoodMode mode;
    std::uint64_t evaluation_budget = 5000;
    std::uint64_t stop_after_no_improvement = 0; // 0: run until the budget is spent
    int perturbation_strength = 4;
    std::size_t lahc_history_length = 50;
    std::uint64_t rng_seed = 0;
};

enum class TraceEvent { step, perturbation, restart };

const char* to_string(TraceEvent event);

struct TraceRecord {
    std::uint64_t eval = 0; // 1-based evaluation index
    CostTuple cost;         // cost of the current solution after this evaluation
    TraceEvent event = TraceEvent::step;
};

struct SearchTrace {
    std::vector<TraceRecord> records;
    Solution best;
    CostTuple best_cost;
    std::uint64_t evaluations = 0;
};

/// One-off evaluation: apply the solution, evaluate all constraints and fold
/// them into the extended cost with the solution's monetary cost.
CostTuple evaluate_solution(const Network& base, const Solution& solution,
                            const MeasureCatalog& catalog, const std::vector<LoadCase>& cases);

/// Shared state of one search run: evaluation budget and counter, the
/// cost cache keyed by canonical solution identity (cache hits are free and
/// do not consume budget), the trace, and the seeded random stream.
class SearchContext {
public:
    SearchContext(const Network& base, const MeasureCatalog& catalog,
                  std::vector<LoadCase> cases, const SearchConfig& config);

    /// Cost of the solution, from cache or by a fresh evaluation. Returns
    /// nullopt iff the solution is uncached and the budget is exhausted.
    /// `counted` reports whether a budgeted evaluation happened.
    std::optional<CostTuple> evaluate(const Solution& solution, bool* counted = nullptr);

    /// Appends a trace record for the most recent counted evaluation,
    /// carrying the cost of the current solution after the acceptance
    /// decision and any pending event mark.
    void record(const CostTuple& current_cost);

    /// Tags the next recorded evaluation (perturbation jump, restart).
    void mark(TraceEvent event) { pending_event_ = event; }

    bool budget_exhausted() const { return evaluations_ >= config_.evaluation_budget; }
    std::uint64_t evaluations() const { return evaluations_; }

    const MeasureCatalog& catalog() const { return catalog_; }
    const SearchConfig& config() const { return config_; }
    Rng& rng() { return rng_; }

    SearchTrace take_trace();
    const Solution& best_solution() const { return best_; }
    const CostTuple& best_cost() const { return best_cost_; }
    bool has_best() const { return has_best_; }

private:
    const Network& base_;
    const MeasureCatalog& catalog_;
    std::vector<LoadCase> cases_;
    SearchConfig config_;
    Rng rng_;
    std::uint64_t evaluations_ = 0;
    std::unordered_map<std::string, CostTuple> cache_;
    std::vector<TraceRecord> records_;
    TraceEvent pending_event_ = TraceEvent::step;
    Solution best_;
    CostTuple best_cost_;
    bool has_best_ = false;
};

/// All dependency-satisfying one-edit variants of the solution under the
/// mode: single removals, single additions and, when enabled, exchanges.
/// Never contains the input itself. Deterministic order.
std::vector<Solution> neighbourhood(const Solution& solution, const MeasureCatalog& catalog,
                                    const NeighborhoodMode& mode);

/// `strength` uniformly random neighbourhood moves in sequence, each landing
/// on a dependency-satisfying solution. Performs no cost evaluations.
Solution perturbate(const Solution& solution, int strength, SearchContext& ctx);

struct SearchOutcome {
    Solution solution;
    CostTuple cost;
};

/// Randomized first-improvement descent; terminates at a solution whose full
/// neighbourhood holds no strict improvement, or when the budget runs out.
SearchOutcome hill_climbing(const Solution& start, SearchContext& ctx);

/// Perturbation cycles around hill climbing; better-only acceptance of the
/// resulting local optima.
SearchOutcome iterated_local_search(const Solution& start, SearchContext& ctx);

/// Late acceptance hill climbing with a circular cost history of length L and
/// restarts from the start solution after 2*L candidates without improvement.
SearchOutcome late_acceptance_hc(const Solution& start, SearchContext& ctx);

inline constexpr std::size_t kExhaustiveCatalogLimit = 24;

/// Global optimum over all dependency-satisfying subsets, by enumeration.
/// Ties break towards fewer measures, then lexicographically smaller ids.
/// Throws ConfigError for catalogs above kExhaustiveCatalogLimit.
SearchOutcome exhaustive_search(SearchContext& ctx);

enum class Algorithm { hc, ils, ils_ae, lahc, exhaustive };

Algorithm algorithm_from_string(const std::string& name);
const char* to_string(Algorithm algorithm);

struct SearchRun {
    Solution best;
    CostTuple best_cost;
    SearchTrace trace;
};

/// Runs one seeded search from the catalog's initial solution.
SearchRun run_search(Algorithm algorithm, const Network& base, const MeasureCatalog& catalog,
                     const std::vector<LoadCase>& cases, const SearchConfig& config);

/// Preset search configurations: ILS_4_HC, ILS_4_HC_AE, LAHC_50.
struct NamedSearch {
    std::string name;
    Algorithm algorithm;
    SearchConfig config;
};

NamedSearch named_search(const std::string& name);

}
