#include "gridplan/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numeric>
#include <thread>

#include "gridplan/error.hpp"
#include "gridplan/rng.hpp"

namespace gridplan {

Network sample_res(const Network& base, const ResScenario& scenario, std::uint64_t seed) {
    if (scenario.total_capacity_mw < 0.0) {
        throw ConfigError("scenario total_capacity must be >= 0");
    }
    if (scenario.unit_min_mw <= 0.0 || scenario.unit_max_mw < scenario.unit_min_mw) {
        throw ConfigError("scenario unit size range is invalid");
    }

    Network net = base;
    if (scenario.load_scale != 1.0) {
        for (auto& load : net.loads) {
            load.active_power *= scenario.load_scale;
            load.reactive_power *= scenario.load_scale;
        }
    }
    if (scenario.total_capacity_mw == 0.0) {
        return net;
    }

    std::vector<std::string> sites;
    std::vector<double> weights;
    if (scenario.placement == PlacementRule::uniform_over_load_points) {
        sites = load_point_buses(net);
        weights.assign(sites.size(), 1.0);
    } else {
        for (const auto& [bus, potential] : scenario.bus_potential_mw) {
            if (potential > 0.0) {
                sites.push_back(bus);
                weights.push_back(potential);
            }
        }
    }
    if (sites.empty()) {
        throw ConfigError("scenario '" + scenario.name + "': no buses to place capacity on");
    }

    const double q_factor =
        scenario.power_factor >= 1.0
            ? 0.0
            : std::tan(std::acos(std::clamp(scenario.power_factor, 0.0, 1.0)));

    Rng rng(seed);
    const double total_weight = std::accumulate(weights.begin(), weights.end(), 0.0);
    double remaining = scenario.total_capacity_mw;
    int unit_no = 0;
    while (remaining > 1e-12) {
        std::size_t site = 0;
        if (scenario.placement == PlacementRule::uniform_over_load_points) {
            site = rng.uniform_index(sites.size());
        } else {
            double pick = rng.uniform01() * total_weight;
            for (; site + 1 < sites.size(); ++site) {
                pick -= weights[site];
                if (pick <= 0.0) {
                    break;
                }
            }
        }
        double size = rng.uniform(scenario.unit_min_mw, scenario.unit_max_mw);
        size = std::min(size, remaining);
        Generator g;
        g.id = "PV_" + scenario.name + "_" + std::to_string(unit_no++);
        g.bus = sites[site];
        g.active_power = size;
        g.reactive_power = size * q_factor;
        g.kind = InjectionKind::pv;
        net.generators.push_back(std::move(g));
        remaining -= size;
    }
    return net;
}

namespace {

SampleRecord run_sample(const Network& base, const ResScenario& scenario,
                        const PlanningRules& rules, const std::vector<LoadCase>& cases,
                        const StudyConfig& config, std::uint64_t index) {
    SampleRecord record;
    record.sample_index = index;
    record.seed = derive_seed(config.master_seed, index);
    const auto t0 = std::chrono::steady_clock::now();
    try {
        const Network sampled = sample_res(base, scenario, record.seed);
        const ConstraintReport report = evaluate(sampled, cases);
        if (report.feasible()) {
            record.base_feasible = true;
            record.feasible = true;
            record.final_cost = {0, 0.0};
        } else {
            const MeasureCatalog catalog = discover_measures(sampled, report, rules);
            SearchConfig search = config.search;
            search.rng_seed = record.seed;
            const SearchRun run = run_search(config.algorithm, sampled, catalog, cases, search);
            record.final_cost = run.best_cost;
            record.solution = run.best;
            record.evaluations = run.trace.evaluations;
            record.feasible = run.best_cost.level == 0;
        }
    } catch (const std::exception& e) {
        record.error = e.what();
        record.feasible = false;
    }
    const auto t1 = std::chrono::steady_clock::now();
    record.wall_time_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return record;
}

}

StudySummary summarize(std::vector<double> feasible_costs, std::size_t n_total,
                       std::size_t n_feasible, std::size_t n_reinforced) {
    StudySummary s;
    s.n = n_total;
    s.feasibility_rate = n_total == 0 ? 0.0 : static_cast<double>(n_feasible) / n_total;
    s.reinforcement_rate = n_total == 0 ? 0.0 : static_cast<double>(n_reinforced) / n_total;
    if (feasible_costs.empty()) {
        return s;
    }
    std::sort(feasible_costs.begin(), feasible_costs.end());
    const auto quantile = [&](double q) {
        // Linear interpolation between closest ranks.
        const double pos = q * static_cast<double>(feasible_costs.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(pos);
        const std::size_t hi = std::min(lo + 1, feasible_costs.size() - 1);
        const double frac = pos - static_cast<double>(lo);
        return feasible_costs[lo] * (1.0 - frac) + feasible_costs[hi] * frac;
    };
    s.min = feasible_costs.front();
    s.q25 = quantile(0.25);
    s.median = quantile(0.5);
    s.q75 = quantile(0.75);
    s.max = feasible_costs.back();
    s.mean = std::accumulate(feasible_costs.begin(), feasible_costs.end(), 0.0) /
             static_cast<double>(feasible_costs.size());
    return s;
}

StudyResult run_study(const Network& base, const ResScenario& scenario,
                      const PlanningRules& rules, const std::vector<LoadCase>& cases,
                      const StudyConfig& config) {
    StudyResult result;
    result.study_name = scenario.name;
    result.records.resize(config.n_samples);

    const std::size_t workers =
        std::max<std::size_t>(1, std::min(config.workers, config.n_samples));
    if (workers == 1) {
        for (std::size_t i = 0; i < config.n_samples; ++i) {
            result.records[i] = run_sample(base, scenario, rules, cases, config, i);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                while (true) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= config.n_samples) {
                        return;
                    }
                    result.records[i] = run_sample(base, scenario, rules, cases, config, i);
                }
            });
        }
        for (auto& t : pool) {
            t.join();
        }
    }

    std::vector<double> feasible_costs;
    std::size_t n_feasible = 0;
    std::size_t n_reinforced = 0;
    for (const auto& r : result.records) {
        if (r.feasible) {
            ++n_feasible;
            feasible_costs.push_back(r.final_cost.magnitude);
        }
        if (!r.base_feasible && r.error.empty()) {
            ++n_reinforced;
        }
    }
    result.summary = summarize(std::move(feasible_costs), config.n_samples, n_feasible,
                               n_reinforced);
    return result;
}

std::vector<ComparisonRow> aggregate(const std::vector<StudyResult>& results) {
    if (results.empty()) {
        throw ConfigError("aggregate needs at least one study result");
    }
    std::vector<ComparisonRow> rows;
    rows.reserve(results.size());
    for (const auto& r : results) {
        rows.push_back({r.study_name, r.summary});
    }
    return rows;
}

}
