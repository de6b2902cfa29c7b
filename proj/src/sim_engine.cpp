#include "bnn/sim/engine.hpp"

#include <cmath>
#include <deque>
#include <queue>
#include <stdexcept>
#include <string>

#include "bnn/rng.hpp"

namespace bnn::sim {

namespace {

constexpr double kTruncEps = 1e-3; // lower truncation of the duration normals

int bin_count(const ScenarioConfig& c) {
    return static_cast<int>(std::llround(c.sim_limit / c.sampling_period));
}

} // namespace

void ScenarioConfig::validate() const {
    if (n_legit < 0) throw std::invalid_argument("ScenarioConfig: n_legit must be >= 0");
    if (n_malicious < 0) throw std::invalid_argument("ScenarioConfig: n_malicious must be >= 0");
    if (cluster_size < 1) throw std::invalid_argument("ScenarioConfig: cluster_size must be >= 1");
    if (n_fragments < 1 || n_fragments > cluster_size)
        throw std::invalid_argument("ScenarioConfig: n_fragments must be in [1, cluster_size]");
    if (!(sim_limit > 0)) throw std::invalid_argument("ScenarioConfig: sim_limit must be > 0");
    if (!(sampling_period > 0))
        throw std::invalid_argument("ScenarioConfig: sampling_period must be > 0");
    const double k = std::round(sim_limit / sampling_period);
    if (k < 1 || std::abs(k * sampling_period - sim_limit) > 1e-9)
        throw std::invalid_argument(
            "ScenarioConfig: sim_limit must be divisible by sampling_period");
    if (!(conj_success_p > 0.0 && conj_success_p <= 1.0))
        throw std::invalid_argument("ScenarioConfig: conj_success_p must be in (0, 1]");
    if (!(travel_mean > 0)) throw std::invalid_argument("ScenarioConfig: travel_mean must be > 0");
    if (!(conj_duration_mean > 0))
        throw std::invalid_argument("ScenarioConfig: conj_duration_mean must be > 0");
    if (travel_sd < 0) throw std::invalid_argument("ScenarioConfig: travel_sd must be >= 0");
    if (conj_duration_sd < 0)
        throw std::invalid_argument("ScenarioConfig: conj_duration_sd must be >= 0");
}

ArrivalTrace rebin(const ArrivalTrace& trace, double new_period) {
    if (!(new_period > 0)) throw std::invalid_argument("rebin: new_period must be > 0");
    const double ratio = new_period / trace.sampling_period;
    const long k = std::lround(ratio);
    if (k < 1 || std::abs(ratio - static_cast<double>(k)) > 1e-9)
        throw std::invalid_argument("rebin: new_period must be a multiple of the trace period");
    if (trace.bins.size() % static_cast<std::size_t>(k) != 0)
        throw std::invalid_argument("rebin: new_period must divide the trace span");
    ArrivalTrace out;
    out.sampling_period = new_period;
    out.n_legit = trace.n_legit;
    out.bins.resize(trace.bins.size() / static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < trace.bins.size(); ++i)
        out.bins[i / static_cast<std::size_t>(k)] += trace.bins[i];
    return out;
}

namespace {

// The read path is a three-stage stochastic queueing system. Every motile
// bacterium is addressed to one cluster bacterium (round-robin over the
// cluster, mirroring the directed swim towards a specific library point);
// it travels there, waits in that slot's FIFO queue, conjugates for a
// sampled duration, and on success a legitimate one carries the slot's
// fragment to the target over a second sampled travel leg. Attackers hold
// slots the same way and depart after one successful conjugation.
struct Engine {
    enum class Ev { arrive, conj_end, deliver };

    struct Event {
        double time;
        int agent;
        Ev kind;
        bool operator>(const Event& o) const {
            if (time != o.time) return time > o.time;
            return agent > o.agent; // one pending event per agent: total order
        }
    };

    const ScenarioConfig& cfg;
    Rng rng;
    std::priority_queue<Event, std::vector<Event>, std::greater<Event>> events;

    std::vector<int> target;          // per agent: addressed slot
    std::vector<int> carried;         // per agent: fragment in transit, -1 if none
    std::vector<bool> slot_busy;
    std::vector<std::deque<int>> slot_queue;
    std::vector<bool> fragment_done;
    int distinct_delivered = 0;

    SimResult res;
    std::vector<EventRecord>* log = nullptr;

    explicit Engine(const ScenarioConfig& c) : cfg(c), rng(c.rng_seed) {}

    bool legit(int agent) const { return agent < cfg.n_legit; }

    double travel_draw() { return rng.truncated_normal(cfg.travel_mean, cfg.travel_sd, kTruncEps); }
    double conj_draw() {
        return rng.truncated_normal(cfg.conj_duration_mean, cfg.conj_duration_sd, kTruncEps);
    }

    void record(double t, EventKind k, int agent, int slot) {
        if (log) log->push_back({t, k, agent, slot});
    }

    void start_conjugation(double t, int agent) {
        const int slot = target[agent];
        slot_busy[slot] = true;
        record(t, EventKind::conj_start, agent, slot);
        events.push({t + conj_draw(), agent, Ev::conj_end});
    }

    void on_arrive(double t, int agent) {
        const int slot = target[agent];
        record(t, EventKind::arrive, agent, slot);
        if (slot_busy[slot])
            slot_queue[slot].push_back(agent);
        else
            start_conjugation(t, agent);
    }

    void on_conj_end(double t, int agent) {
        const int slot = target[agent];
        const bool ok = rng.bernoulli(cfg.conj_success_p);
        if (ok) {
            record(t, EventKind::conj_success, agent, slot);
            if (legit(agent)) {
                carried[agent] = slot % cfg.n_fragments;
                events.push({t + travel_draw(), agent, Ev::deliver});
            } else {
                ++res.summary.malicious_conjugations;
            }
        } else {
            record(t, EventKind::conj_failure, agent, slot);
            // re-approach after a fresh travel-distributed delay
            events.push({t + travel_draw(), agent, Ev::arrive});
        }
        if (!slot_queue[slot].empty()) {
            const int next = slot_queue[slot].front();
            slot_queue[slot].pop_front();
            start_conjugation(t, next);
        } else {
            slot_busy[slot] = false;
        }
    }

    void on_deliver(double t, int agent) {
        record(t, EventKind::delivery, agent, -1);
        const auto bin = static_cast<std::size_t>(t / cfg.sampling_period);
        ++res.trace.bins[bin];
        ++res.summary.delivered_total;
        const int frag = carried[agent];
        if (!fragment_done[frag]) {
            fragment_done[frag] = true;
            ++distinct_delivered;
        }
    }

    SimResult run() {
        cfg.validate();
        const int n_agents = cfg.n_legit + cfg.n_malicious;
        target.resize(n_agents);
        carried.assign(n_agents, -1);
        for (int i = 0; i < cfg.n_legit; ++i) target[i] = i % cfg.cluster_size;
        for (int j = 0; j < cfg.n_malicious; ++j) target[cfg.n_legit + j] = j % cfg.cluster_size;
        slot_busy.assign(cfg.cluster_size, false);
        slot_queue.assign(cfg.cluster_size, {});
        fragment_done.assign(cfg.n_fragments, false);

        res.trace.bins.assign(bin_count(cfg), 0);
        res.trace.sampling_period = cfg.sampling_period;
        res.trace.n_legit = cfg.n_legit;

        for (int a = 0; a < n_agents; ++a) events.push({travel_draw(), a, Ev::arrive});

        double completed_at = -1.0;
        while (!events.empty()) {
            const Event ev = events.top();
            if (ev.time >= cfg.sim_limit) break;
            events.pop();
            switch (ev.kind) {
                case Ev::arrive: on_arrive(ev.time, ev.agent); break;
                case Ev::conj_end: on_conj_end(ev.time, ev.agent); break;
                case Ev::deliver: on_deliver(ev.time, ev.agent); break;
            }
            if (distinct_delivered == cfg.n_fragments) {
                completed_at = ev.time;
                break;
            }
        }

        res.summary.retrieved_fraction =
            static_cast<double>(distinct_delivered) / static_cast<double>(cfg.n_fragments);
        res.summary.retrieval_time = completed_at >= 0.0 ? completed_at : cfg.sim_limit;
        return std::move(res);
    }
};

} // namespace

SimResult simulate(const ScenarioConfig& config) {
    Engine e(config);
    return e.run();
}

std::pair<SimResult, std::vector<EventRecord>> simulate_logged(const ScenarioConfig& config) {
    Engine e(config);
    std::vector<EventRecord> log;
    e.log = &log;
    SimResult r = e.run();
    return {std::move(r), std::move(log)};
}

} // namespace bnn::sim
