#include "qmc/trajectories.hpp"

#include "qmc/qubit_example.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <thread>

namespace qmc {

BlockMeasurement standard_measurement(int k, int b) {
    BlockMeasurement m;
    m.b = b;
    m.k = k;
    const long dim = ipow(k, b);
    for (long i = 0; i < dim; ++i) m.outcomes.push_back({Vec::Unit(dim, i)});
    return m;
}

BlockMeasurement basis_measurement(const std::vector<Vec>& basis, int k, int b, double tol) {
    const long dim = ipow(k, b);
    if (static_cast<long>(basis.size()) != dim)
        throw Error(ErrorKind::IncompleteMeasurement, "basis must have k^b vectors");
    Mat g(dim, dim);
    for (long i = 0; i < dim; ++i) {
        if (basis[i].size() != dim) throw Error(ErrorKind::DimensionMismatch, "basis vector length");
        for (long j = 0; j < dim; ++j) g(i, j) = basis[i].dot(basis[j]);
    }
    if (max_abs(g - Mat::Identity(dim, dim)) > tol)
        throw Error(ErrorKind::IncompleteMeasurement, "basis not orthonormal");
    BlockMeasurement m;
    m.b = b;
    m.k = k;
    for (const auto& v : basis) m.outcomes.push_back({v});
    return m;
}

BlockMeasurement povm_measurement(const std::vector<Mat>& effects, int k, int b, double tol) {
    const long dim = ipow(k, b);
    Mat sum = Mat::Zero(dim, dim);
    BlockMeasurement m;
    m.b = b;
    m.k = k;
    for (const auto& e : effects) {
        if (e.rows() != dim || e.cols() != dim) throw Error(ErrorKind::DimensionMismatch, "effect dimension");
        sum += e;
        Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(e));
        if (es.eigenvalues().minCoeff() < -tol) throw Error(ErrorKind::IncompleteMeasurement, "effect not PSD");
        std::vector<Vec> vs;
        for (long i = 0; i < dim; ++i) {
            double lam = es.eigenvalues()(i);
            if (lam > 1e-14) vs.push_back(std::sqrt(lam) * es.eigenvectors().col(i));
        }
        m.outcomes.push_back(std::move(vs));
    }
    if (max_abs(sum - Mat::Identity(dim, dim)) > tol)
        throw Error(ErrorKind::IncompleteMeasurement, "effects do not sum to identity");
    return m;
}

BlockKraus block_kraus(const Isometry& iso, const BlockMeasurement& meas, double tol) {
    if (meas.k != iso.k) throw Error(ErrorKind::UnitDimMismatch, "measurement unit dimension");
    auto ks = multi_kraus(iso, meas.b);
    BlockKraus out;
    Mat comp = Mat::Zero(iso.d, iso.d);
    for (const auto& outcome : meas.outcomes) {
        std::vector<Mat> ops;
        for (const auto& w : outcome) {
            Mat kt = Mat::Zero(iso.d, iso.d);
            for (std::size_t i = 0; i < ks.size(); ++i) kt += std::conj(w(static_cast<Eigen::Index>(i))) * ks[i];
            comp += kt.adjoint() * kt;
            ops.push_back(std::move(kt));
        }
        out.push_back(std::move(ops));
    }
    double r = max_abs(comp - Mat::Identity(iso.d, iso.d));
    if (r > tol) {
        std::ostringstream os;
        os << "sum of block Kraus products deviates from identity by " << r;
        throw Error(ErrorKind::IncompleteMeasurement, os.str());
    }
    return out;
}

std::mt19937_64 trial_engine(std::uint64_t seed, std::uint64_t trial) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
    return std::mt19937_64(seq);
}

namespace {

struct Sampler {
    const BlockKraus& ops;
    std::vector<Mat> effects;
    Mat rho, tmp, next;
    double max_defect = 0.0;

    Sampler(const BlockKraus& o, const Mat& rho_in) : ops(o), rho(rho_in) {
        for (const auto& outcome : ops) {
            Mat e = Mat::Zero(rho_in.rows(), rho_in.cols());
            for (const auto& kr : outcome) e.noalias() += kr.adjoint() * kr;
            effects.push_back(std::move(e));
        }
        tmp.resize(rho.rows(), rho.cols());
        next.resize(rho.rows(), rho.cols());
    }

    int step(std::mt19937_64& rng, std::vector<double>& probs) {
        double total = 0.0;
        for (std::size_t j = 0; j < effects.size(); ++j) {
            // Tr(rho E) with E Hermitian
            double pj = (rho.cwiseProduct(effects[j].transpose())).sum().real();
            probs[j] = std::max(0.0, pj);
            total += probs[j];
        }
        max_defect = std::max(max_defect, std::abs(total - 1.0));
        if (total < 1e-14) throw Error(ErrorKind::DegenerateState, "all outcome probabilities vanish");
        double u = std::uniform_real_distribution<double>(0.0, total)(rng);
        int pick = static_cast<int>(effects.size()) - 1;
        double acc = 0.0;
        for (std::size_t j = 0; j < effects.size(); ++j) {
            acc += probs[j];
            if (u < acc && probs[j] > 0.0) {
                pick = static_cast<int>(j);
                break;
            }
        }
        while (probs[pick] <= 0.0 && pick > 0) --pick;
        next.setZero();
        for (const auto& kr : ops[pick]) {
            tmp.noalias() = kr * rho;
            next.noalias() += tmp * kr.adjoint();
        }
        double tr = next.trace().real();
        rho = next / tr;
        return pick;
    }
};

}  // namespace

TrajectoryRecord sample_with(const BlockKraus& ops, const Mat& rho_in, int n_blocks, std::uint64_t seed,
                             std::uint64_t trial) {
    auto rng = trial_engine(seed, trial);
    Sampler s(ops, rho_in);
    std::vector<double> probs(ops.size());
    TrajectoryRecord rec;
    rec.seed = seed;
    rec.trial = trial;
    rec.outcomes.reserve(n_blocks);
    for (int t = 0; t < n_blocks; ++t) rec.outcomes.push_back(s.step(rng, probs));
    rec.final_state = s.rho;
    rec.max_prob_defect = s.max_defect;
    return rec;
}

TrajectoryRecord sample(const Isometry& iso, const Mat& rho_in, int n_blocks, const BlockMeasurement& meas,
                        std::uint64_t seed, std::uint64_t trial) {
    if (rho_in.rows() != iso.d || rho_in.cols() != iso.d)
        throw Error(ErrorKind::DimensionMismatch, "initial state dimension");
    auto rec = sample_with(block_kraus(iso, meas), rho_in, n_blocks, seed, trial);
    rec.b = meas.b;
    return rec;
}

std::vector<long> sample_counts(const BlockKraus& ops, const Mat& rho_in, int n_blocks, std::mt19937_64& rng) {
    Sampler s(ops, rho_in);
    std::vector<double> probs(ops.size());
    std::vector<long> counts(ops.size(), 0);
    for (int t = 0; t < n_blocks; ++t) ++counts[s.step(rng, probs)];
    return counts;
}

int thread_count() {
    if (const char* env = std::getenv("QMC_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_trials(int trials, const std::function<void(int)>& body) {
    const int workers = std::min(thread_count(), std::max(1, trials));
    if (workers <= 1) {
        for (int t = 0; t < trials; ++t) body(t);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (int t = w; t < trials; t += workers) body(t);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

FluctuationStats fluctuation_stats(const SpectralProfile& profile, const LocalObservable& q, int n, int trials,
                                   std::uint64_t seed, const Mat* rho_in) {
    require_irreducible(profile);
    Mat off = q.q;
    off.diagonal().setZero();
    if (max_abs(off) > 1e-12)
        throw Error(ErrorKind::InvalidInput, "observable must be diagonal in the measured block basis");
    const int nb = n / q.b;
    if (nb < 1 || trials < 2) throw Error(ErrorKind::InvalidInput, "need at least one block and two trials");
    BlockKraus ops = block_kraus(profile.iso, standard_measurement(profile.k, q.b));
    const Mat start = rho_in ? *rho_in : profile.rho_ss;

    FluctuationStats st;
    st.n = n;
    st.n_blocks = nb;
    st.target_mean = stationary_mean(profile, q);
    st.means.assign(trials, 0.0);
    st.fluctuations.assign(trials, 0.0);
    parallel_trials(trials, [&](int t) {
        auto rng = trial_engine(seed, static_cast<std::uint64_t>(t));
        auto counts = sample_counts(ops, start, nb, rng);
        double sum = 0.0;
        for (std::size_t j = 0; j < counts.size(); ++j)
            sum += static_cast<double>(counts[j]) * q.q(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)).real();
        st.means[t] = sum / nb;
        st.fluctuations[t] = std::sqrt(static_cast<double>(nb)) * (st.means[t] - st.target_mean);
    });
    const double tn = trials;
    st.mean_of_means = std::accumulate(st.means.begin(), st.means.end(), 0.0) / tn;
    double fbar = std::accumulate(st.fluctuations.begin(), st.fluctuations.end(), 0.0) / tn;
    double m2 = 0.0, m4 = 0.0;
    for (double f : st.fluctuations) {
        double c = f - fbar;
        m2 += c * c;
        m4 += c * c * c * c;
    }
    st.var_fluct = m2 / (tn - 1.0);
    double mu2 = m2 / tn, mu4 = m4 / tn;
    st.var_fluct_se = std::sqrt(std::max(0.0, mu4 - mu2 * mu2) / tn);
    return st;
}

double EstimatorRun::miss_rate(double radius) const {
    if (estimates.empty()) return 0.0;
    long miss = 0;
    for (double e : estimates)
        if (std::abs(e - theta) > radius) ++miss;
    return static_cast<double>(miss) / static_cast<double>(estimates.size());
}

const char* estimator_name(EstimatorKind kind) {
    switch (kind) {
    case EstimatorKind::m1_standard: return "m1";
    case EstimatorKind::m2_plus_minus: return "m2";
    case EstimatorKind::m3_single: return "m3-single";
    case EstimatorKind::m3_two_block: return "m3-block";
    }
    return "?";
}

namespace {

double two_block_mean(double theta) {
    QubitModel m3 = model(ModelId::m3);
    SpectralProfile prof = analyze(isometry_from_matrix(hk_to_block(model_matrix(m3, theta), 2, 2), 2, 2));
    Vec w = omega_vector();
    return stationary_mean(prof, LocalObservable{2, w * w.adjoint()});
}

double invert_two_block(double xbar) {
    double lo = 0.0, hi = 0.3;
    if (xbar <= two_block_mean(lo)) return lo;
    if (xbar >= two_block_mean(hi)) return hi;
    for (int it = 0; it < 50; ++it) {
        double mid = 0.5 * (lo + hi);
        (two_block_mean(mid) < xbar ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

EstimatorRun run_estimator(EstimatorKind kind, double theta, int n, int trials, std::uint64_t seed) {
    EstimatorRun run;
    run.kind = kind;
    run.theta = theta;
    run.n = n;
    QubitModel qm = model(kind == EstimatorKind::m1_standard     ? ModelId::m1
                          : kind == EstimatorKind::m2_plus_minus ? ModelId::m2
                                                                 : ModelId::m3);
    Isometry iso = isometry(qm, theta);
    SpectralProfile prof = analyze(iso);
    require_irreducible(prof);

    BlockMeasurement meas;
    int counted = 0;  // outcome whose frequency is xbar
    int blocks = n;
    switch (kind) {
    case EstimatorKind::m1_standard:
    case EstimatorKind::m3_single:
        meas = standard_measurement(2, 1);
        break;
    case EstimatorKind::m2_plus_minus: {
        Vec plus(2), minus(2);
        plus << 1.0, 1.0;
        minus << 1.0, -1.0;
        meas = basis_measurement({plus / std::sqrt(2.0), minus / std::sqrt(2.0)}, 2, 1);
        break;
    }
    case EstimatorKind::m3_two_block: {
        Vec w = omega_vector();
        Mat pw = w * w.adjoint();
        meas = povm_measurement({pw, Mat::Identity(4, 4) - pw}, 2, 2);
        blocks = n / 2;
        break;
    }
    }
    BlockKraus ops = block_kraus(iso, meas);

    const double h = 1e-5;
    switch (kind) {
    case EstimatorKind::m1_standard:
        run.mean_fn = closed_form_mean(qm, theta);
        run.dmean = -3.0 * theta;
        break;
    case EstimatorKind::m2_plus_minus: {
        double s = std::sqrt(1.0 - 3.0 * theta * theta);
        run.mean_fn = closed_form_mean(qm, theta);
        run.dmean = -(1.0 - 6.0 * theta * theta) / s;
        break;
    }
    case EstimatorKind::m3_single:
        run.mean_fn = closed_form_mean(qm, theta);
        run.dmean = std::sin(2.0 * theta) / 6.0;
        break;
    case EstimatorKind::m3_two_block:
        run.mean_fn = two_block_mean(theta);
        run.dmean = (two_block_mean(theta + h) - two_block_mean(std::max(0.0, theta - h))) /
                    (theta + h - std::max(0.0, theta - h));
        break;
    }

    run.xbar.assign(trials, 0.0);
    parallel_trials(trials, [&](int t) {
        auto rng = trial_engine(seed, static_cast<std::uint64_t>(t));
        auto counts = sample_counts(ops, prof.rho_ss, blocks, rng);
        run.xbar[t] = static_cast<double>(counts[counted]) / blocks;
    });

    run.estimates.resize(trials);
    for (int t = 0; t < trials; ++t) {
        double x = run.xbar[t];
        double est = 0.0;
        switch (kind) {
        case EstimatorKind::m1_standard:
            est = std::sqrt(std::max(1.0 / 3.0 - 2.0 / 3.0 * x, 0.0));
            break;
        case EstimatorKind::m2_plus_minus: {
            double u = 1.0 - 2.0 * x;
            double th2 = (1.0 - std::sqrt(std::max(1.0 - 3.0 * u * u, 0.0))) / 6.0;
            est = std::copysign(std::sqrt(std::max(th2, 0.0)), u);
            break;
        }
        case EstimatorKind::m3_single:
            est = std::acos(std::sqrt(std::clamp(3.5 - 6.0 * x, 0.0, 1.0)));
            break;
        case EstimatorKind::m3_two_block:
            est = invert_two_block(x);
            break;
        }
        run.estimates[t] = est;
    }
    double se = 0.0;
    for (double e : run.estimates) se += (e - theta) * (e - theta);
    run.rmse = std::sqrt(se / trials);
    double mx = std::accumulate(run.xbar.begin(), run.xbar.end(), 0.0) / trials;
    double v = 0.0;
    for (double x : run.xbar) v += (x - mx) * (x - mx);
    run.var_xbar = trials > 1 ? v / (trials - 1) : 0.0;
    run.snr_unit = run.var_xbar > 0.0 ? run.dmean * run.dmean / (n * run.var_xbar) : 0.0;
    return run;
}

}  // namespace qmc
