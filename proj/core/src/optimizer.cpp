#include "gridplan/optimizer.hpp"

#include <algorithm>
#include <limits>

#include "gridplan/error.hpp"

namespace gridplan {

namespace {

// Sentinel cost: worse than anything a real evaluation can produce; used when
// the budget runs out before the start solution could be evaluated.
const CostTuple kUnknownCost{std::numeric_limits<int>::max(),
                             std::numeric_limits<double>::infinity()};

std::string cache_key(const Solution& s) {
    std::string key;
    for (const auto& id : s.measure_ids) {
        key += id;
        key += '\x1f';
    }
    return key;
}

void check_config(const SearchConfig& c) {
    if (c.evaluation_budget == 0) {
        throw ConfigError("evaluation_budget must be > 0");
    }
    if (c.perturbation_strength < 0) {
        throw ConfigError("perturbation_strength must be >= 0");
    }
    if (c.lahc_history_length < 1) {
        throw ConfigError("lahc_history_length must be >= 1");
    }
    if (!c.mode.allow_add && !c.mode.allow_remove && !c.mode.allow_exchange) {
        throw ConfigError("neighbourhood mode must allow at least one move type");
    }
}

}

const char* to_string(TraceEvent event) {
    switch (event) {
        case TraceEvent::step: return "step";
        case TraceEvent::perturbation: return "perturbation";
        case TraceEvent::restart: return "restart";
    }
    return "?";
}

CostTuple evaluate_solution(const Network& base, const Solution& solution,
                            const MeasureCatalog& catalog, const std::vector<LoadCase>& cases) {
    const Network modified = apply(base, solution, catalog);
    const ConstraintReport report = evaluate(modified, cases);
    return extended_cost(report, solution_cost(solution, catalog));
}

SearchContext::SearchContext(const Network& base, const MeasureCatalog& catalog,
                             std::vector<LoadCase> cases, const SearchConfig& config)
    : base_(base), catalog_(catalog), cases_(std::move(cases)), config_(config),
      rng_(config.rng_seed) {
    check_config(config_);
}

std::optional<CostTuple> SearchContext::evaluate(const Solution& solution, bool* counted) {
    if (counted != nullptr) {
        *counted = false;
    }
    const std::string key = cache_key(solution);
    const auto it = cache_.find(key);
    if (it != cache_.end()) {
        return it->second;
    }
    if (budget_exhausted()) {
        return std::nullopt;
    }
    const CostTuple cost = evaluate_solution(base_, solution, catalog_, cases_);
    ++evaluations_;
    cache_.emplace(key, cost);
    if (counted != nullptr) {
        *counted = true;
    }
    if (!has_best_ || compare(cost, best_cost_) == Ordering::less) {
        has_best_ = true;
        best_cost_ = cost;
        best_ = solution;
    }
    return cost;
}

void SearchContext::record(const CostTuple& current_cost) {
    records_.push_back({evaluations_, current_cost, pending_event_});
    pending_event_ = TraceEvent::step;
}

SearchTrace SearchContext::take_trace() {
    SearchTrace trace;
    trace.records = std::move(records_);
    trace.best = best_;
    trace.best_cost = best_cost_;
    trace.evaluations = evaluations_;
    return trace;
}

std::vector<Solution> neighbourhood(const Solution& s, const MeasureCatalog& catalog,
                                    const NeighborhoodMode& mode) {
    std::vector<Solution> out;
    auto push_if_valid = [&](Solution candidate) {
        if (satisfies_dependencies(candidate, catalog)) {
            out.push_back(std::move(candidate));
        }
    };
    if (mode.allow_remove) {
        for (const auto& m : catalog.measures) {
            if (s.contains(m.id)) {
                push_if_valid(s.without(m.id));
            }
        }
    }
    if (mode.allow_add) {
        for (const auto& m : catalog.measures) {
            if (!s.contains(m.id)) {
                push_if_valid(s.with(m.id));
            }
        }
    }
    if (mode.allow_exchange) {
        for (const auto& m_out : catalog.measures) {
            if (!s.contains(m_out.id)) {
                continue;
            }
            const Solution removed = s.without(m_out.id);
            for (const auto& m_in : catalog.measures) {
                if (!s.contains(m_in.id)) {
                    push_if_valid(removed.with(m_in.id));
                }
            }
        }
    }
    return out;
}

Solution perturbate(const Solution& s, int strength, SearchContext& ctx) {
    Solution current = s;
    for (int step = 0; step < strength; ++step) {
        auto neighbors = neighbourhood(current, ctx.catalog(), ctx.config().mode);
        if (neighbors.empty()) {
            break;
        }
        current = std::move(neighbors[ctx.rng().uniform_index(neighbors.size())]);
    }
    return current;
}

namespace {

template <typename T>
void shuffle(std::vector<T>& items, Rng& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        std::swap(items[i - 1], items[rng.uniform_index(i)]);
    }
}

}

SearchOutcome hill_climbing(const Solution& start, SearchContext& ctx) {
    bool counted = false;
    const auto c0 = ctx.evaluate(start, &counted);
    if (!c0.has_value()) {
        return {start, kUnknownCost};
    }
    if (counted) {
        ctx.record(*c0);
    }

    Solution current = start;
    CostTuple current_cost = *c0;
    bool improved = true;
    while (improved) {
        improved = false;
        auto neighbors = neighbourhood(current, ctx.catalog(), ctx.config().mode);
        if (neighbors.empty()) {
            break;
        }
        shuffle(neighbors, ctx.rng());
        for (auto& candidate : neighbors) {
            const auto cost = ctx.evaluate(candidate, &counted);
            if (!cost.has_value()) {
                return {current, current_cost}; // budget exhausted mid-sweep
            }
            if (compare(*cost, current_cost) == Ordering::less) {
                current = std::move(candidate);
                current_cost = *cost;
                improved = true;
            }
            if (counted) {
                ctx.record(current_cost);
            }
            if (improved) {
                break; // re-enumerate around the new solution
            }
        }
    }
    return {current, current_cost};
}

SearchOutcome iterated_local_search(const Solution& start, SearchContext& ctx) {
    SearchOutcome incumbent = hill_climbing(start, ctx);
    const auto& cfg = ctx.config();
    std::uint64_t without_improvement = 0;
    // Cycles that hit only cached solutions cannot consume budget; give up
    // once a long streak of them shows the reachable region is exhausted.
    std::uint64_t fruitless_cycles = 0;
    while (!ctx.budget_exhausted() && fruitless_cycles < 500) {
        if (cfg.stop_after_no_improvement > 0 &&
            without_improvement >= cfg.stop_after_no_improvement) {
            break;
        }
        const std::uint64_t evals_before = ctx.evaluations();
        const Solution shaken = perturbate(incumbent.solution, cfg.perturbation_strength, ctx);
        ctx.mark(TraceEvent::perturbation);
        const SearchOutcome candidate = hill_climbing(shaken, ctx);
        if (compare(candidate.cost, incumbent.cost) == Ordering::less) {
            incumbent = candidate;
            without_improvement = 0;
        } else {
            ++without_improvement;
        }
        fruitless_cycles = ctx.evaluations() == evals_before ? fruitless_cycles + 1 : 0;
    }
    return incumbent;
}

SearchOutcome late_acceptance_hc(const Solution& start, SearchContext& ctx) {
    const auto& cfg = ctx.config();
    const std::size_t history_length = cfg.lahc_history_length;
    const std::uint64_t max_total_iterations = 50 * cfg.evaluation_budget + 1000;
    std::uint64_t total_iterations = 0;
    bool first_restart = true;
    while (!ctx.budget_exhausted() && total_iterations < max_total_iterations) {
        if (!first_restart) {
            ctx.mark(TraceEvent::restart);
        }
        first_restart = false;

        bool counted = false;
        const auto c0 = ctx.evaluate(start, &counted);
        if (!c0.has_value()) {
            break;
        }
        if (counted) {
            ctx.record(*c0);
        }
        Solution current = start;
        CostTuple current_cost = *c0;
        CostTuple restart_best = current_cost;
        std::vector<CostTuple> history(history_length, current_cost);
        std::uint64_t stagnation = 0;

        for (std::size_t k = 0; total_iterations < max_total_iterations; ++k, ++total_iterations) {
            auto neighbors = neighbourhood(current, ctx.catalog(), ctx.config().mode);
            if (neighbors.empty()) {
                break;
            }
            const auto& candidate = neighbors[ctx.rng().uniform_index(neighbors.size())];
            const auto cost = ctx.evaluate(candidate, &counted);
            if (!cost.has_value()) {
                break; // budget exhausted
            }
            const std::size_t slot = k % history_length;
            const bool accept = compare(*cost, history[slot]) == Ordering::less ||
                                compare(*cost, current_cost) == Ordering::less;
            if (accept) {
                current = candidate;
                current_cost = *cost;
                history[slot] = *cost;
            }
            if (counted) {
                ctx.record(current_cost);
            }
            if (compare(current_cost, restart_best) == Ordering::less) {
                restart_best = current_cost;
                stagnation = 0;
            } else {
                ++stagnation;
            }
            if (stagnation >= 2 * history_length) {
                break; // local-optimum stagnation: restart from s0
            }
        }
    }
    // The best visited solution across all restarts is tracked by the context.
    if (ctx.has_best()) {
        return {ctx.best_solution(), ctx.best_cost()};
    }
    return {start, kUnknownCost};
}

SearchOutcome exhaustive_search(SearchContext& ctx) {
    const auto& measures = ctx.catalog().measures;
    const std::size_t n = measures.size();
    if (n > kExhaustiveCatalogLimit) {
        throw ConfigError("exhaustive search limited to " +
                          std::to_string(kExhaustiveCatalogLimit) + " measures, catalog has " +
                          std::to_string(n));
    }

    SearchOutcome best{Solution{}, kUnknownCost};
    bool have_best = false;
    const std::uint64_t combinations = 1ULL << n;
    for (std::uint64_t mask = 0; mask < combinations; ++mask) {
        std::vector<std::string> ids;
        for (std::size_t bit = 0; bit < n; ++bit) {
            if (mask & (1ULL << bit)) {
                ids.push_back(measures[bit].id);
            }
        }
        Solution candidate = Solution::of(std::move(ids));
        if (!satisfies_dependencies(candidate, ctx.catalog())) {
            continue;
        }
        bool counted = false;
        const auto cost = ctx.evaluate(candidate, &counted);
        if (!cost.has_value()) {
            throw ConfigError("exhaustive search ran out of evaluation budget");
        }
        if (counted) {
            ctx.record(*cost);
        }
        const auto ordering = have_best ? compare(*cost, best.cost) : Ordering::less;
        bool take = ordering == Ordering::less;
        if (!take && ordering == Ordering::equal) {
            take = candidate.size() < best.solution.size() ||
                   (candidate.size() == best.solution.size() &&
                    candidate.measure_ids < best.solution.measure_ids);
        }
        if (take) {
            best = {std::move(candidate), *cost};
            have_best = true;
        }
    }
    return best;
}

Algorithm algorithm_from_string(const std::string& name) {
    if (name == "hc") return Algorithm::hc;
    if (name == "ils") return Algorithm::ils;
    if (name == "ils_ae") return Algorithm::ils_ae;
    if (name == "lahc") return Algorithm::lahc;
    if (name == "exhaustive") return Algorithm::exhaustive;
    throw ConfigError("unknown algorithm '" + name + "' (hc|ils|ils_ae|lahc|exhaustive)");
}

const char* to_string(Algorithm a) {
    switch (a) {
        case Algorithm::hc: return "hc";
        case Algorithm::ils: return "ils";
        case Algorithm::ils_ae: return "ils_ae";
        case Algorithm::lahc: return "lahc";
        case Algorithm::exhaustive: return "exhaustive";
    }
    return "?";
}

SearchRun run_search(Algorithm algorithm, const Network& base, const MeasureCatalog& catalog,
                     const std::vector<LoadCase>& cases, const SearchConfig& config) {
    SearchConfig effective = config;
    if (algorithm == Algorithm::ils_ae) {
        effective.mode.allow_exchange = true;
    }
    if (algorithm == Algorithm::exhaustive) {
        effective.evaluation_budget = std::numeric_limits<std::uint64_t>::max();
    }
    SearchContext ctx(base, catalog, cases, effective);
    const Solution s0 = initial_solution(catalog);

    SearchOutcome outcome;
    switch (algorithm) {
        case Algorithm::hc:
            outcome = hill_climbing(s0, ctx);
            break;
        case Algorithm::ils:
        case Algorithm::ils_ae:
            outcome = iterated_local_search(s0, ctx);
            break;
        case Algorithm::lahc:
            outcome = late_acceptance_hc(s0, ctx);
            break;
        case Algorithm::exhaustive:
            outcome = exhaustive_search(ctx);
            break;
    }

    SearchRun run;
    run.best = outcome.solution;
    run.best_cost = outcome.cost;
    run.trace = ctx.take_trace();
    return run;
}

NamedSearch named_search(const std::string& name) {
    NamedSearch preset;
    preset.name = name;
    if (name == "ILS_4_HC") {
        preset.algorithm = Algorithm::ils;
        preset.config.mode = {true, true, false};
        preset.config.perturbation_strength = 4;
        return preset;
    }
    if (name == "ILS_4_HC_AE") {
        preset.algorithm = Algorithm::ils_ae;
        preset.config.mode = {true, true, true};
        preset.config.perturbation_strength = 4;
        return preset;
    }
    if (name == "LAHC_50") {
        preset.algorithm = Algorithm::lahc;
        preset.config.mode = {true, true, false};
        preset.config.lahc_history_length = 50;
        return preset;
    }
    throw ConfigError("unknown search preset '" + name +
                      "' (ILS_4_HC|ILS_4_HC_AE|LAHC_50)");
}

}
