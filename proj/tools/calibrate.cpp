// Fixes the default travel and conjugation duration means.
//
// The two reference scenarios pin the time scale: 150 retrievers against no
// attackers should need about 40 minutes to pull the whole file, and against
// 1900 attackers about 100 minutes. Travel time dominates the first figure
// and per-slot queueing the second, so alternating one-dimensional binary
// searches on (travel_mean, conj_duration_mean) converge quickly. The result
// is frozen into ScenarioConfig's defaults.

#include <cstdio>
#include <cstdlib>
#include <vector>

#include "bnn/sim/engine.hpp"
#include "bnn/stats.hpp"

using namespace bnn;
using namespace bnn::sim;

namespace {

double g_travel_sd = ScenarioConfig{}.travel_sd;
double g_conj_sd = ScenarioConfig{}.conj_duration_sd;
double g_success_p = ScenarioConfig{}.conj_success_p;

double mean_retrieval_time(double travel_mean, double conj_mean, int n_malicious, int seeds) {
    std::vector<double> times;
    for (int s = 0; s < seeds; ++s) {
        ScenarioConfig c;
        c.n_legit = 150;
        c.n_malicious = n_malicious;
        c.travel_mean = travel_mean;
        c.conj_duration_mean = conj_mean;
        c.travel_sd = g_travel_sd;
        c.conj_duration_sd = g_conj_sd;
        c.conj_success_p = g_success_p;
        c.rng_seed = 1000 + static_cast<std::uint64_t>(s);
        times.push_back(simulate(c).summary.retrieval_time);
    }
    return mean(times);
}

} // namespace

// optional argv: travel_sd conj_duration_sd conj_success_p clean_min attacked_min
int main(int argc, char** argv) {
    if (argc > 1) g_travel_sd = std::atof(argv[1]);
    if (argc > 2) g_conj_sd = std::atof(argv[2]);
    if (argc > 3) g_success_p = std::atof(argv[3]);

    const double target_clean = (argc > 4 ? std::atof(argv[4]) : 40.0) * 60.0;
    const double target_attacked = (argc > 5 ? std::atof(argv[5]) : 100.0) * 60.0;
    const int seeds = 16;

    double travel = 1000.0;
    double conj = 100.0;

    for (int round = 0; round < 6; ++round) {
        double lo = 50.0, hi = 3000.0;
        for (int it = 0; it < 30; ++it) {
            travel = 0.5 * (lo + hi);
            (mean_retrieval_time(travel, conj, 0, seeds) < target_clean ? lo : hi) = travel;
        }
        lo = 5.0;
        hi = 400.0;
        for (int it = 0; it < 30; ++it) {
            conj = 0.5 * (lo + hi);
            (mean_retrieval_time(travel, conj, 1900, seeds) < target_attacked ? lo : hi) = conj;
        }
        std::printf("round %d: travel_mean=%.2f conj_duration_mean=%.2f\n", round, travel, conj);
    }

    const int verify_seeds = 30;
    std::printf("calibrated: travel_mean=%.2f conj_duration_mean=%.2f\n", travel, conj);
    std::printf("clean    mean retrieval: %.1f s (target %.1f)\n",
                mean_retrieval_time(travel, conj, 0, verify_seeds), target_clean);
    std::printf("attacked mean retrieval: %.1f s (target %.1f)\n",
                mean_retrieval_time(travel, conj, 1900, verify_seeds), target_attacked);
    return 0;
}
