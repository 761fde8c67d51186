#include "io.hpp"

#include "qmc/ergodic.hpp"
#include "qmc/gauge.hpp"
#include "qmc/gaussian.hpp"
#include "qmc/qubit_example.hpp"
#include "qmc/statmodel.hpp"
#include "qmc/trajectories.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace qmc;
using io::json;

namespace {

struct Common {
    ErgodicTol tol;
    long cap = 4096;
    std::string out = "-";
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--tol-peripheral", c.tol.peripheral_band, "1 - |lambda| band for peripheral eigenvalues")
        ->check(CLI::PositiveNumber);
    sub->add_option("--tol-faithful", c.tol.faithfulness_floor, "minimum eigenvalue of a faithful fixed point")
        ->check(CLI::PositiveNumber);
    sub->add_option("--tol-simplicity", c.tol.simplicity_gap, "gap for a simple eigenvalue 1")
        ->check(CLI::PositiveNumber);
    sub->add_option("--cap-tensor", c.cap, "largest k^n handled densely")->check(CLI::PositiveNumber);
    sub->add_option("-o,--out", c.out, "output file, - for stdout");
}

json settings_json(const Common& c) {
    return {{"tol_peripheral", c.tol.peripheral_band},
            {"tol_faithful", c.tol.faithfulness_floor},
            {"tol_simplicity", c.tol.simplicity_gap},
            {"cap_tensor", c.cap}};
}

std::string dump(const json& j) {
    return j.dump(2) + "\n";
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// Isometry from a file or from a qubit model at theta.
struct Source {
    std::string path;
    std::string model;
    double theta = 0.3;
    double w_re = 0.0, w_im = 0.0, z_re = 1.0, z_im = 0.0;
};

void add_source(CLI::App* sub, Source& s, bool positional) {
    if (positional)
        sub->add_option("isometry", s.path, "isometry JSON file");
    else
        sub->add_option("--isometry", s.path, "isometry JSON file");
    sub->add_option("--model", s.model, "m1, m2, m3 or periodic");
    sub->add_option("--theta", s.theta, "model parameter");
    sub->add_option("--w-re", s.w_re, "periodic point w (real part)");
    sub->add_option("--w-im", s.w_im, "periodic point w (imaginary part)");
    sub->add_option("--z-re", s.z_re, "periodic point z (real part)");
    sub->add_option("--z-im", s.z_im, "periodic point z (imaginary part)");
}

QubitModel source_model(const Source& s) {
    ModelId id = parse_model(s.model);
    return id == ModelId::periodic_point ? periodic_point({s.w_re, s.w_im}, {s.z_re, s.z_im}) : model(id);
}

Isometry load(const Source& s) {
    if (!s.path.empty()) return io::isometry_from_json(io::read_json_file(s.path));
    if (s.model.empty()) throw Error(ErrorKind::InvalidInput, "give an isometry file or --model");
    return isometry(source_model(s), s.theta);
}

// -i dV/dtheta for a model source, or the tangent file as given.
Mat model_tangent(const Source& s) {
    return -I_UNIT * numeric_derivative(source_model(s), s.theta);
}

std::vector<int> n_grid(const std::vector<int>& explicit_n, int n_max, int step) {
    if (!explicit_n.empty()) return explicit_n;
    std::vector<int> out;
    for (int n = step; n <= n_max; n += step) out.push_back(n);
    return out;
}

json eigen_list(const std::vector<cplx>& ev) {
    json out = json::array();
    for (auto z : ev) out.push_back(io::complex_to_json(z));
    return out;
}

json profile_json(const SpectralProfile& p) {
    json res = json::object();
    for (const auto& r : p.residuals) res[r.first] = r.second;
    json proj = json::array();
    for (const auto& pa : p.projections) proj.push_back(io::matrix_to_json(pa));
    json j = {{"d", p.d},
              {"k", p.k},
              {"irreducible", p.is_irreducible},
              {"failing_check", p.verdict.failing_check},
              {"fixed_multiplicity", p.verdict.fixed_multiplicity},
              {"rho_min_eig", p.verdict.rho_min_eig},
              {"eigenvalues", eigen_list(p.eigenvalues)}};
    if (p.is_irreducible) {
        j["period"] = p.period;
        j["gamma"] = io::complex_to_json(p.gamma);
        j["block_dims"] = p.block_dims;
        j["rho_ss"] = io::matrix_to_json(p.rho_ss);
        j["z"] = io::matrix_to_json(p.z);
        j["projections"] = proj;
        j["residuals"] = res;
        j["resolvent_cond"] = p.resolvent_cond;
    }
    return j;
}

void emit_error(const std::string& kind, const std::string& detail) {
    json e = {{"kind", kind}, {"detail", detail}};
    std::cerr << e.dump() << "\n";
}

// ---------------------------------------------------------------------------

int cmd_analyze(const Source& src, const Common& c) {
    SpectralProfile p = analyze(load(src), c.tol);
    json j = profile_json(p);
    j["settings"] = settings_json(c);
    io::write_text(c.out, dump(j));
    if (!p.is_irreducible) {
        emit_error(kind_name(ErrorKind::NotIrreducible), p.verdict.failing_check);
        return 2;
    }
    return 0;
}

int cmd_equiv(const std::string& a, const std::string& b, double tol, const Common& c) {
    Isometry v1 = io::isometry_from_json(io::read_json_file(a));
    Isometry v2 = io::isometry_from_json(io::read_json_file(b));
    auto w = equivalence_witness(v1, v2, tol);
    json j = {{"equivalent", w.has_value()}, {"settings", settings_json(c)}};
    j["settings"]["tol_witness"] = tol;
    if (w) j["witness"] = {{"c", io::complex_to_json(w->c)}, {"w", io::matrix_to_json(w->w)}};
    io::write_text(c.out, dump(j));
    return 0;
}

int cmd_tangent(const Source& src, const std::string& tangent_path, const Common& c) {
    Isometry v = load(src);
    SpectralProfile p = analyze(v, c.tol);
    require_irreducible(p);
    Mat a = tangent_path.empty() ? model_tangent(src) : io::matrix_from_json(io::read_json_file(tangent_path));
    TangentSplit s = split(p, make_tangent(v, a));
    auto modes = mode_decompose(p, s.a_id);
    json jm = json::array();
    Mat gram(static_cast<Eigen::Index>(modes.size()), static_cast<Eigen::Index>(modes.size()));
    for (std::size_t i = 0; i < modes.size(); ++i) {
        jm.push_back(io::matrix_to_json(modes[i]));
        for (std::size_t k = 0; k < modes.size(); ++k)
            gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = tangent_inner(p, modes[i], modes[k]);
    }
    json j = {{"theta", s.theta},   {"kgen", io::matrix_to_json(s.kgen)},   {"a_id", io::matrix_to_json(s.a_id)},
              {"residual", s.residual}, {"modes", jm}, {"mode_gram", io::matrix_to_json(gram)},
              {"settings", settings_json(c)}};
    io::write_text(c.out, dump(j));
    return 0;
}

int cmd_qfi(const Source& src, const std::string& tangent_path, const std::vector<int>& ns, const Common& c) {
    Isometry v = load(src);
    SpectralProfile p = analyze(v, c.tol);
    require_irreducible(p);
    Mat a = tangent_path.empty() ? model_tangent(src) : io::matrix_from_json(io::read_json_file(tangent_path));
    TangentVector tv = make_tangent(v, a);
    QfiReport r = qfi_report(p, tv, Vec::Unit(v.d, 0), ns);
    std::ostringstream os;
    os << "n,f_n,f_n_over_n,rate\n";
    for (std::size_t i = 0; i < r.n_values.size(); ++i)
        os << r.n_values[i] << "," << fmt(r.f_n[i]) << "," << fmt(r.f_n[i] / r.n_values[i]) << "," << fmt(r.rate)
           << "\n";
    io::write_text(c.out, os.str());
    return 0;
}

int cmd_variance(const Source& src, const std::string& q_path, int b, int n_max, const Common& c) {
    Isometry v = load(src);
    SpectralProfile p = analyze(v, c.tol);
    require_irreducible(p);
    Mat qm;
    if (!q_path.empty())
        qm = io::matrix_from_json(io::read_json_file(q_path));
    else if (!src.model.empty())
        qm = mean_observable(source_model(src));
    else
        throw Error(ErrorKind::InvalidInput, "give --q or --model");
    LocalObservable q = make_observable(qm, v.k, std::max(b, 1));
    const double mean = stationary_mean(p, q, c.cap);
    const double sigma2 = asymptotic_variance(p, q, c.cap);

    std::ostringstream os;
    os << "n,fejer_sum,asymptotic\n";
    if (q.b == 1) {
        // c_s = Re Tr(rho E_q~(T^{s-1} E_q~(1))), Fejer weights (1 - s/n)
        Mat qt = q.q - mean * Mat::Identity(v.k, v.k);
        Mat first = observable_sandwich(v, qt, Mat::Identity(v.d, v.d));
        double c0 = (p.rho_ss * observable_sandwich(v, qt * qt, Mat::Identity(v.d, v.d))).trace().real();
        std::vector<double> cs{c0};
        Mat y = first;
        for (int s = 1; s < n_max; ++s) {
            cs.push_back((p.rho_ss * observable_sandwich(v, qt, y)).trace().real());
            y = heisenberg_apply(v, y);
        }
        for (int n = 1; n <= n_max; n = n < 16 ? n + 1 : n * 2) {
            double f = cs[0];
            for (int s = 1; s < n; ++s) f += 2.0 * (1.0 - static_cast<double>(s) / n) * cs[s];
            os << n << "," << fmt(f) << "," << fmt(sigma2) << "\n";
        }
    } else {
        os << "inf,," << fmt(sigma2) << "\n";
    }
    io::write_text(c.out, os.str());
    return 0;
}

Mat identifiable_point(const SpectralProfile& p, const std::string& path, std::mt19937_64& rng, double norm) {
    Mat a = path.empty() ? random_matrix(p.d * p.k, p.d, rng) : io::matrix_from_json(io::read_json_file(path));
    Mat id = identifiable_projection(p, a);
    if (!path.empty()) return id;
    return id * (norm / tangent_norm(p, id));
}

int cmd_converge(const Source& src, const std::string& xp, const std::string& yp, double norm, std::uint64_t seed,
                 int e_min, int e_max, const Common& c) {
    Isometry v = load(src);
    SpectralProfile p = analyze(v, c.tol);
    require_irreducible(p);
    std::mt19937_64 rng(seed);
    Mat x;
    if (xp.empty() && !src.model.empty() && src.path.empty()) {
        Mat a = I_UNIT * identifiable_projection(p, model_tangent(src));
        x = a * (norm / tangent_norm(p, a));
    } else {
        x = identifiable_point(p, xp, rng, norm);
    }
    Mat y = identifiable_point(p, yp, rng, norm);
    std::ostringstream os;
    os << "n,overlap_re,overlap_im,prediction_re,prediction_im,error\n";
    Vec phi = Vec::Unit(v.d, 0);
    for (int e = e_min; e <= e_max; ++e) {
        int n = 1 << e;
        QlanPoint q = weak_qlan(p, x, y, phi, n);
        os << n << "," << fmt(q.overlap.real()) << "," << fmt(q.overlap.imag()) << "," << fmt(q.prediction.real())
           << "," << fmt(q.prediction.imag()) << "," << fmt(q.error) << "\n";
    }
    io::write_text(c.out, os.str());
    return 0;
}

int cmd_limit_model(const Source& src, const std::string& xp, const std::string& yp, std::uint64_t seed,
                    const std::vector<double>& scales, const std::string& format, const Common& c) {
    Isometry v = load(src);
    SpectralProfile p = analyze(v, c.tol);
    require_irreducible(p);
    std::mt19937_64 rng(seed);
    Mat x = identifiable_point(p, xp, rng, 1.0);
    Mat y = identifiable_point(p, yp, rng, 1.0);
    ModePoint px = make_mode_point(p, x);

    struct Row {
        double scale;
        std::vector<cplx> lambda, zeta;
        double d_scaled, d_orbit;
    };
    std::vector<Row> rows;
    for (double s : scales) {
        ModePoint py = make_mode_point(p, s * y);
        ModePoint sx = make_mode_point(p, s * x);
        double orbit = 0.0;
        for (int m = 1; m < p.period; ++m)
            orbit = std::max(orbit, mixture_trace_distance(p, sx, stabiliser_image(p, sx, m)));
        rows.push_back({s, lambda_k(p, px, py), zeta_gram(p, sx, sx), mixture_trace_distance(p, px, sx), orbit});
    }
    std::ostringstream os;
    if (format == "csv") {
        os << "scale";
        for (int k = 0; k < p.period; ++k) os << ",lambda" << k << "_re,lambda" << k << "_im";
        for (int m = 0; m < p.period; ++m) os << ",zeta" << m;
        os << ",distance_x_sx,distance_sx_orbit\n";
        for (const auto& r : rows) {
            os << fmt(r.scale);
            for (auto l : r.lambda) os << "," << fmt(l.real()) << "," << fmt(l.imag());
            for (auto z : r.zeta) os << "," << fmt(z.real());
            os << "," << fmt(r.d_scaled) << "," << fmt(r.d_orbit) << "\n";
        }
    } else {
        json arr = json::array();
        for (const auto& r : rows)
            arr.push_back({{"scale", r.scale},
                           {"lambda_k", eigen_list(r.lambda)},
                           {"zeta_gram", eigen_list(r.zeta)},
                           {"distance_x_scaled", r.d_scaled},
                           {"distance_scaled_orbit", r.d_orbit}});
        json j = {{"period", p.period},
                  {"model", p.period == 1 ? "coherent" : "mixed-gaussian"},
                  {"x", io::matrix_to_json(x)},
                  {"y", io::matrix_to_json(y)},
                  {"rows", arr},
                  {"settings", settings_json(c)}};
        os << dump(j);
    }
    io::write_text(c.out, os.str());
    return 0;
}

EstimatorKind estimator_for(const std::string& m, int block) {
    ModelId id = parse_model(m);
    switch (id) {
    case ModelId::m1: return EstimatorKind::m1_standard;
    case ModelId::m2: return EstimatorKind::m2_plus_minus;
    case ModelId::m3: return block == 2 ? EstimatorKind::m3_two_block : EstimatorKind::m3_single;
    case ModelId::periodic_point: break;
    }
    throw Error(ErrorKind::InvalidInput, "simulate supports m1, m2, m3");
}

int cmd_simulate(const std::string& m, double theta, int n, int trials, std::uint64_t seed, int block,
                 const std::string& json_path, const Common& c) {
    if (block != 1 && block != 2) throw Error(ErrorKind::InvalidInput, "--block must be 1 or 2");
    if (block == 2 && parse_model(m) != ModelId::m3)
        throw Error(ErrorKind::InvalidInput, "two-block measurement is defined for m3");
    EstimatorRun run = run_estimator(estimator_for(m, block), theta, n, trials, seed);
    std::ostringstream os;
    os << "trial,xbar,estimate\n";
    for (int t = 0; t < trials; ++t) os << t << "," << fmt(run.xbar[t]) << "," << fmt(run.estimates[t]) << "\n";
    io::write_text(c.out, os.str());
    if (!json_path.empty()) {
        json j = {{"estimator", estimator_name(run.kind)},
                  {"theta", theta},
                  {"n", n},
                  {"trials", trials},
                  {"seed", seed},
                  {"block", block},
                  {"mean", run.mean_fn},
                  {"dmean", run.dmean},
                  {"var_xbar", run.var_xbar},
                  {"snr_per_unit", run.snr_unit},
                  {"rmse", run.rmse},
                  {"miss_rate_n^-0.4", run.miss_rate(std::pow(static_cast<double>(n), -0.4))},
                  {"threads", thread_count()}};
        io::write_text(json_path, dump(j));
    }
    return 0;
}

int cmd_example(const Source& src, const std::string& report, const Common& c) {
    if (src.model.empty()) throw Error(ErrorKind::InvalidInput, "--model is required");
    QubitModel m = source_model(src);
    Isometry v = isometry(m, src.theta);
    SpectralProfile p = analyze(v, c.tol);
    require_irreducible(p);
    Mat a = model_tangent(src);
    TangentVector tv = make_tangent(v, a);
    TangentSplit s = split(p, tv);
    auto modes = mode_decompose(p, s.a_id);
    bool only_zero = true;
    for (std::size_t i = 1; i < modes.size(); ++i) only_zero = only_zero && max_abs(modes[i]) <= 1e-9;
    // report dV/dtheta units: multiply back by i
    json jm = json::array();
    for (const auto& md : modes) jm.push_back(io::matrix_to_json(I_UNIT * md));
    json j = {{"model", m.name()},
              {"theta", src.theta},
              {"irreducible", p.is_irreducible},
              {"period", p.period},
              {"rho_ss", io::matrix_to_json(p.rho_ss)},
              {"tangent", {{"dv", io::matrix_to_json(I_UNIT * a)},
                           {"theta", s.theta},
                           {"kgen", io::matrix_to_json(s.kgen)},
                           {"a_id", io::matrix_to_json(I_UNIT * s.a_id)},
                           {"modes", jm}}},
              {"qfi_rate", qfi_rate(p, tv, tv)},
              {"limit_model", p.period == 1 || only_zero ? "coherent" : "mixed-gaussian"}};
    if (report == "full") {
        j["profile"] = profile_json(p);
        LocalObservable q{1, mean_observable(m)};
        j["mean_observable"] = io::matrix_to_json(q.q);
        j["stationary_mean"] = stationary_mean(p, q, c.cap);
        if (m.id != ModelId::periodic_point) j["closed_form_mean"] = closed_form_mean(m, src.theta);
        j["asymptotic_variance"] = asymptotic_variance(p, q, c.cap);
        if (m.id == ModelId::m2 || m.id == ModelId::m3) {
            ThetaBarReport tb = verify_theta_bar(m.id, 0.3);
            j["theta_bar"] = {{"value", tb.theta_bar},
                              {"irreducible_on_grid", tb.irreducible_on_grid},
                              {"mean_injective", tb.mean_injective},
                              {"grid_points", tb.grid_points},
                              {"status", "computed"}};
        }
        if (m.id == ModelId::m3 && src.theta > 0.0) {
            SnrSpectral sd = snr_spectral_data(src.theta);
            j["snr_spectral"] = {{"radius", sd.radius},
                                 {"formula", sd.formula},
                                 {"matches_formula", sd.matches_formula},
                                 {"tz_residual", sd.tz_residual},
                                 {"formula_threshold", snr_formula_threshold()}};
        }
    }
    j["settings"] = settings_json(c);
    io::write_text(c.out, dump(j));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum Markov chain analysis"};
    app.require_subcommand(1);
    Common common;
    int code = 0;

    Source s_an;
    auto* an = app.add_subcommand("analyze", "Ergodic profile of an isometry");
    add_source(an, s_an, true);
    add_common(an, common);
    an->callback([&] { code = cmd_analyze(s_an, common); });

    std::string eq_a, eq_b;
    double eq_tol = 1e-8;
    auto* eq = app.add_subcommand("equiv", "Output equivalence and gauge witness");
    eq->add_option("a", eq_a, "first isometry JSON")->required();
    eq->add_option("b", eq_b, "second isometry JSON")->required();
    eq->add_option("--tol-witness", eq_tol, "witness verification tolerance")->check(CLI::PositiveNumber);
    add_common(eq, common);
    eq->callback([&] { code = cmd_equiv(eq_a, eq_b, eq_tol, common); });

    Source s_tg;
    std::string tg_a;
    auto* tg = app.add_subcommand("tangent", "Split a tangent into identifiable and gauge parts");
    add_source(tg, s_tg, true);
    tg->add_option("tangent", tg_a, "tangent matrix JSON");
    add_common(tg, common);
    tg->callback([&] { code = cmd_tangent(s_tg, tg_a, common); });

    Source s_qf;
    std::string qf_a;
    std::vector<int> qf_n;
    int qf_max = 400, qf_step = 50;
    auto* qf = app.add_subcommand("qfi", "Finite-n QFI series (CSV)");
    add_source(qf, s_qf, false);
    qf->add_option("--tangent", qf_a, "tangent matrix JSON (default: model derivative)");
    qf->add_option("--n", qf_n, "explicit n values");
    qf->add_option("--n-max", qf_max, "largest n")->check(CLI::PositiveNumber);
    qf->add_option("--n-step", qf_step, "n spacing")->check(CLI::PositiveNumber);
    add_common(qf, common);
    qf->callback([&] { code = cmd_qfi(s_qf, qf_a, n_grid(qf_n, qf_max, qf_step), common); });

    Source s_va;
    std::string va_q;
    int va_b = 1, va_n = 1024;
    auto* va = app.add_subcommand("variance", "Asymptotic variance with Fejer partial sums (CSV)");
    add_source(va, s_va, false);
    va->add_option("--q", va_q, "observable matrix JSON on k^b");
    va->add_option("--b", va_b, "observable block length")->check(CLI::Range(1, 3));
    va->add_option("--n-max", va_n, "largest n")->check(CLI::PositiveNumber);
    add_common(va, common);
    va->callback([&] { code = cmd_variance(s_va, va_q, va_b, va_n, common); });

    Source s_cv;
    std::string cv_x, cv_y;
    double cv_norm = 0.5;
    std::uint64_t cv_seed = 7;
    int cv_lo = 6, cv_hi = 12;
    auto* cv = app.add_subcommand("converge", "Weak QLAN error series (CSV)");
    add_source(cv, s_cv, false);
    cv->add_option("--x", cv_x, "X matrix JSON (default: model direction)");
    cv->add_option("--y", cv_y, "Y matrix JSON (default: seeded random identifiable)");
    cv->add_option("--norm", cv_norm, "norm of generated points")->check(CLI::PositiveNumber);
    cv->add_option("--seed", cv_seed, "seed for generated points");
    cv->add_option("--log2-min", cv_lo, "smallest log2 n")->check(CLI::Range(0, 20));
    cv->add_option("--log2-max", cv_hi, "largest log2 n")->check(CLI::Range(0, 20));
    add_common(cv, common);
    cv->callback([&] { code = cmd_converge(s_cv, cv_x, cv_y, cv_norm, cv_seed, cv_lo, cv_hi, common); });

    Source s_lm;
    std::string lm_x, lm_y, lm_format = "json";
    std::uint64_t lm_seed = 7;
    std::vector<double> lm_scales{0.25, 0.5, 1.0, 1.3, 2.0};
    auto* lm = app.add_subcommand("limit-model", "Limit-model tables: lambda_k, zeta Gram, trace distances");
    add_source(lm, s_lm, false);
    lm->add_option("--x", lm_x, "x matrix JSON (default: seeded random identifiable, unit norm)");
    lm->add_option("--y", lm_y, "y matrix JSON (default: seeded random identifiable, unit norm)");
    lm->add_option("--seed", lm_seed, "seed for generated points");
    lm->add_option("--scales", lm_scales, "scale grid");
    lm->add_option("--format", lm_format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    add_common(lm, common);
    lm->callback([&] { code = cmd_limit_model(s_lm, lm_x, lm_y, lm_seed, lm_scales, lm_format, common); });

    std::string sm_model = "m1", sm_json;
    double sm_theta = 0.35;
    int sm_n = 2000, sm_trials = 100, sm_block = 1;
    std::uint64_t sm_seed = 1;
    auto* sm = app.add_subcommand("simulate", "Trajectory estimator runs (per-trial CSV)");
    sm->add_option("--model", sm_model, "m1, m2 or m3");
    sm->add_option("--theta", sm_theta, "true parameter");
    sm->add_option("--n", sm_n, "units per trajectory")->check(CLI::PositiveNumber);
    sm->add_option("--trials", sm_trials, "number of trajectories")->check(CLI::Range(2, 100000000));
    sm->add_option("--seed", sm_seed, "64-bit seed");
    sm->add_option("--block", sm_block, "measurement block length (1, or 2 for m3)");
    sm->add_option("--json", sm_json, "summary JSON file, - for stdout");
    add_common(sm, common);
    sm->callback([&] { code = cmd_simulate(sm_model, sm_theta, sm_n, sm_trials, sm_seed, sm_block, sm_json, common); });

    Source s_ex;
    std::string ex_report = "summary";
    auto* ex = app.add_subcommand("example", "Qubit model analysis bundle");
    add_source(ex, s_ex, false);
    ex->add_option("--report", ex_report, "summary or full")->check(CLI::IsMember({"summary", "full"}));
    add_common(ex, common);
    ex->callback([&] { code = cmd_example(s_ex, ex_report, common); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        emit_error("InvalidInput", e.what());
        return 1;
    } catch (const Error& e) {
        emit_error(kind_name(e.kind()), e.detail());
        return e.kind() == ErrorKind::NotIrreducible ? 2 : 1;
    } catch (const json::exception& e) {
        emit_error("InvalidInput", e.what());
        return 1;
    } catch (const std::exception& e) {
        emit_error("IOError", e.what());
        return 1;
    }
    return code;
}
