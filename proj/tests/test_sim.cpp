#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <vector>

#include "bnn/rng.hpp"
#include "bnn/sim/engine.hpp"
#include "bnn/sim/sweep.hpp"
#include "bnn/stats.hpp"
#include "test_util.hpp"

using namespace bnn;
using namespace bnn::sim;

namespace {

ScenarioConfig base_config() {
    ScenarioConfig c;
    c.rng_seed = 7;
    return c;
}

void rng_basics() {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    Rng c(42);
    for (int i = 0; i < 1000; ++i) {
        const double u = c.uniform();
        CHECK(u >= 0.0 && u < 1.0);
        CHECK(c.truncated_normal(5.0, 10.0, 1e-3) >= 1e-3);
    }
}

void config_validation() {
    auto bad = [](auto mutate) {
        ScenarioConfig c;
        mutate(c);
        CHECK_THROWS(std::invalid_argument, simulate(c));
    };
    bad([](ScenarioConfig& c) { c.n_legit = -1; });
    bad([](ScenarioConfig& c) { c.n_malicious = -3; });
    bad([](ScenarioConfig& c) { c.cluster_size = 0; });
    bad([](ScenarioConfig& c) { c.n_fragments = 51; });
    bad([](ScenarioConfig& c) { c.n_fragments = 0; });
    bad([](ScenarioConfig& c) { c.sim_limit = 0; });
    bad([](ScenarioConfig& c) { c.sampling_period = -10; });
    bad([](ScenarioConfig& c) { c.sampling_period = 7.0; }); // 7200 % 7 != 0
    bad([](ScenarioConfig& c) { c.conj_success_p = 0.0; });
    bad([](ScenarioConfig& c) { c.conj_success_p = 1.5; });
    bad([](ScenarioConfig& c) { c.travel_mean = 0; });
    bad([](ScenarioConfig& c) { c.conj_duration_mean = -1; });
    bad([](ScenarioConfig& c) { c.travel_sd = -1; });
}

void no_agents() {
    ScenarioConfig c = base_config();
    const SimResult r = simulate(c);
    CHECK(r.trace.bins.size() == 720);
    CHECK(std::all_of(r.trace.bins.begin(), r.trace.bins.end(), [](int b) { return b == 0; }));
    CHECK(r.summary.retrieved_fraction == 0.0);
    CHECK(r.summary.retrieval_time == c.sim_limit);
    CHECK(r.summary.delivered_total == 0);
    CHECK(r.summary.malicious_conjugations == 0);
}

void determinism() {
    ScenarioConfig c = base_config();
    c.n_legit = 60;
    c.n_malicious = 300;
    const SimResult a = simulate(c);
    const SimResult b = simulate(c);
    CHECK(a.trace.bins == b.trace.bins);
    CHECK(a.summary.retrieval_time == b.summary.retrieval_time);
    CHECK(a.summary.retrieved_fraction == b.summary.retrieved_fraction);
    CHECK(a.summary.delivered_total == b.summary.delivered_total);
    CHECK(a.summary.malicious_conjugations == b.summary.malicious_conjugations);

    ScenarioConfig other = c;
    other.rng_seed = 8;
    CHECK(simulate(other).trace.bins != a.trace.bins);
}

void trace_invariants() {
    for (std::uint64_t seed : {1, 2, 3}) {
        ScenarioConfig c = base_config();
        c.n_legit = 40;
        c.n_malicious = 150;
        c.rng_seed = seed;
        const SimResult r = simulate(c);
        const long total = std::accumulate(r.trace.bins.begin(), r.trace.bins.end(), 0L);
        CHECK(total <= c.n_legit);
        CHECK(total == r.summary.delivered_total);
        CHECK(r.trace.bins.size() ==
              static_cast<std::size_t>(c.sim_limit / c.sampling_period));
        // completion flag and clock agree
        if (r.summary.retrieval_time < c.sim_limit)
            CHECK(r.summary.retrieved_fraction == 1.0);
        if (r.summary.retrieved_fraction < 1.0)
            CHECK(r.summary.retrieval_time == c.sim_limit);
    }
}

void event_log_audit() {
    ScenarioConfig c = base_config();
    c.n_legit = 55;
    c.n_malicious = 400;
    c.conj_success_p = 0.8;
    const auto [r, log] = simulate_logged(c);

    // slot exclusivity: replay start/end per slot
    std::map<int, bool> busy;
    bool exclusive = true, balanced = true;
    for (const auto& ev : log) {
        if (ev.kind == EventKind::conj_start) {
            if (busy[ev.slot]) exclusive = false;
            busy[ev.slot] = true;
        } else if (ev.kind == EventKind::conj_success || ev.kind == EventKind::conj_failure) {
            if (!busy[ev.slot]) balanced = false;
            busy[ev.slot] = false;
        }
    }
    CHECK(exclusive);
    CHECK(balanced);

    // conservation: every legitimate bacterium either delivered once or is
    // still pending at the cutoff
    std::set<int> delivered_agents;
    long deliveries = 0;
    for (const auto& ev : log)
        if (ev.kind == EventKind::delivery) {
            ++deliveries;
            CHECK(ev.agent < c.n_legit);
            delivered_agents.insert(ev.agent);
        }
    CHECK(deliveries == r.summary.delivered_total);
    CHECK(static_cast<long>(delivered_agents.size()) == deliveries); // at most one each
    CHECK(deliveries + (c.n_legit - deliveries) == c.n_legit);
    CHECK(deliveries <= c.n_legit);

    // timestamps are non-decreasing in processing order
    bool ordered = true;
    for (std::size_t i = 1; i < log.size(); ++i)
        if (log[i].time < log[i - 1].time) ordered = false;
    CHECK(ordered);
}

void fragment_bound() {
    for (int nl : {10, 30, 80}) {
        ScenarioConfig c = base_config();
        c.n_legit = nl;
        c.n_malicious = 100;
        const SimResult r = simulate(c);
        const double bound =
            std::min(1.0, static_cast<double>(r.summary.delivered_total) / c.n_fragments);
        CHECK(r.summary.retrieved_fraction <= bound + 1e-12);
        CHECK(r.summary.retrieved_fraction <=
              std::min(1.0, static_cast<double>(nl) / c.n_fragments));
    }
    // ten retrievers against a 50-slot cluster reach at most a fifth of the file
    ScenarioConfig c = base_config();
    c.n_legit = 10;
    const SimResult r = simulate(c);
    CHECK(r.summary.retrieved_fraction <= 10.0 / 50.0);
    CHECK(r.summary.retrieved_fraction == 10.0 / 50.0); // all ten deliver at defaults
}

void rebin_matches_direct_simulation() {
    ScenarioConfig c = base_config();
    c.n_legit = 70;
    c.n_malicious = 250;
    const SimResult fine = simulate(c);
    for (double period : {20.0, 30.0, 60.0, 120.0, 240.0}) {
        ScenarioConfig coarse_cfg = c;
        coarse_cfg.sampling_period = period;
        const SimResult coarse = simulate(coarse_cfg);
        const ArrivalTrace re = rebin(fine.trace, period);
        CHECK(re.bins == coarse.trace.bins);
        CHECK(re.sampling_period == period);
    }
    CHECK_THROWS(std::invalid_argument, rebin(fine.trace, 15.0));
    CHECK_THROWS(std::invalid_argument, rebin(fine.trace, -10.0));
}

void contention_is_monotone() {
    const std::vector<int> attackers = {0, 150, 400, 800};
    std::vector<double> means;
    for (int nm : attackers) {
        std::vector<double> times;
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            ScenarioConfig c = base_config();
            c.n_legit = 50;
            c.n_malicious = nm;
            c.rng_seed = seed;
            times.push_back(simulate(c).summary.retrieval_time);
        }
        means.push_back(mean(times));
    }
    std::vector<double> axis(attackers.begin(), attackers.end());
    CHECK(spearman(axis, means) >= 0.9);
}

void sweep_contract() {
    ScenarioConfig base = base_config();
    base.sim_limit = 600;
    base.sampling_period = 60;

    const auto tiny = sweep(base, Range{10, 30, 10}, Range{0, 0, 100}, {5});
    CHECK(tiny.size() == 3);

    const auto grid = sweep(base, Range{10, 150, 10}, Range{0, 1900, 100}, {5}, 2);
    CHECK(grid.size() == 300);
    bool sorted = true;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const auto& a = grid[i - 1].config;
        const auto& b = grid[i].config;
        if (std::tuple(a.n_legit, a.n_malicious, a.rng_seed) >
            std::tuple(b.n_legit, b.n_malicious, b.rng_seed))
            sorted = false;
    }
    CHECK(sorted);

    CHECK_THROWS(std::invalid_argument, sweep(base, Range{30, 10, 10}, Range{0, 0, 100}, {5}));
    CHECK_THROWS(std::invalid_argument, sweep(base, Range{10, 30, 10}, Range{0, 0, 100}, {}));
    CHECK_THROWS(std::invalid_argument, (Range{10, 30, 0}.values()));
}

} // namespace

int main() {
    rng_basics();
    config_validation();
    no_agents();
    determinism();
    trace_invariants();
    event_log_audit();
    fragment_bound();
    rebin_matches_direct_simulation();
    contention_is_monotone();
    sweep_contract();
    return testutil::summary("test_sim");
}
