#pragma once

#include "qmc/core.hpp"
#include "qmc/ergodic.hpp"
#include "qmc/statmodel.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace qmc {

// One outcome per entry; each outcome is a list of vectors w with effect sum w w^*.
struct BlockMeasurement {
    int b = 1;
    int k = 2;
    std::vector<std::vector<Vec>> outcomes;
};

BlockMeasurement standard_measurement(int k, int b = 1);
BlockMeasurement basis_measurement(const std::vector<Vec>& basis, int k, int b, double tol = 1e-10);
BlockMeasurement povm_measurement(const std::vector<Mat>& effects, int k, int b, double tol = 1e-10);

// Kraus operators per outcome: sum_i conj(w_i) K_i over b-step products.
using BlockKraus = std::vector<std::vector<Mat>>;
BlockKraus block_kraus(const Isometry& iso, const BlockMeasurement& meas, double tol = 1e-10);

struct TrajectoryRecord {
    std::uint64_t seed = 0;
    std::uint64_t trial = 0;
    int b = 1;
    std::vector<int> outcomes;
    Mat final_state;
    double max_prob_defect = 0.0;
};

// Per-trial stream from (seed, trial).
std::mt19937_64 trial_engine(std::uint64_t seed, std::uint64_t trial);

TrajectoryRecord sample(const Isometry& iso, const Mat& rho_in, int n_blocks, const BlockMeasurement& meas,
                        std::uint64_t seed, std::uint64_t trial = 0);
TrajectoryRecord sample_with(const BlockKraus& ops, const Mat& rho_in, int n_blocks, std::uint64_t seed,
                             std::uint64_t trial = 0);

// Counts outcome frequencies along one trajectory without storing the record.
std::vector<long> sample_counts(const BlockKraus& ops, const Mat& rho_in, int n_blocks, std::mt19937_64& rng);

int thread_count();
// Runs body(trial) for trial in [0, trials) on QMC_THREADS workers.
void parallel_trials(int trials, const std::function<void(int)>& body);

struct FluctuationStats {
    int n = 0;
    int n_blocks = 0;
    double target_mean = 0.0;
    std::vector<double> means;
    std::vector<double> fluctuations;
    double mean_of_means = 0.0;
    double var_fluct = 0.0;
    double var_fluct_se = 0.0;
};

// q diagonal in the standard block basis; non-overlapping blocks of q.b units.
FluctuationStats fluctuation_stats(const SpectralProfile& profile, const LocalObservable& q, int n, int trials,
                                   std::uint64_t seed, const Mat* rho_in = nullptr);

enum class EstimatorKind { m1_standard, m2_plus_minus, m3_single, m3_two_block };

struct EstimatorRun {
    EstimatorKind kind{};
    double theta = 0.0;
    int n = 0;
    std::vector<double> xbar;
    std::vector<double> estimates;
    double rmse = 0.0;
    double mean_fn = 0.0;    // m(theta)
    double dmean = 0.0;      // dm/dtheta
    double var_xbar = 0.0;   // empirical, across trials
    double snr_unit = 0.0;   // dm^2 / (n Var(xbar))

    double miss_rate(double radius) const;
};

EstimatorRun run_estimator(EstimatorKind kind, double theta, int n, int trials, std::uint64_t seed);
const char* estimator_name(EstimatorKind kind);

}  // namespace qmc
