#include "sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "cache.hpp"
#include "errors.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"

namespace twistlab {

using ordered_json = nlohmann::ordered_json;

// ----------------------------------------------------------------------
// Aggregate statistics
// ----------------------------------------------------------------------

double gaussian_mass(double alpha, double beta) {
    if (!(alpha < beta)) throw input_error("gaussian_mass: alpha < beta required");
    const double inv_sqrt_2pi = 0.3989422804014326779;
    auto f = [&](double t) { return inv_sqrt_2pi * std::exp(-0.5 * t * t); };
    return integrate_gk(f, alpha, beta, 1e-12, 1e-12).value;
}

double normal_cdf(double t) { return 0.5 * std::erfc(-t / std::sqrt(2.0)); }

namespace {

bool in_hard_window(const TwistRow& row, double X) {
    const double ad = std::abs(double(row.d));
    return ad > X && ad <= 2.0 * X;
}

} // namespace

DistributionReport distribution_report(const std::vector<TwistRow>& rows, double X,
                                       double alpha, double beta) {
    DistributionReport rep;
    rep.alpha = alpha;
    rep.beta = beta;
    rep.gaussian_mass = gaussian_mass(alpha, beta);
    std::vector<double> stats;
    for (const TwistRow& r : rows) {
        if (!in_hard_window(r, X)) continue;
        ++rep.family_size;
        if (!r.vanished) stats.push_back(r.statistic);
        if (r.statistic > alpha && r.statistic < beta) ++rep.counts;
    }
    rep.quarter_bound = 0.25 * rep.gaussian_mass * double(rep.family_size);
    rep.nonvanishing_fraction =
        rep.family_size > 0 ? double(stats.size()) / double(rep.family_size) : 0.0;
    // one-sample Kolmogorov-Smirnov against N(0,1)
    if (!stats.empty()) {
        std::sort(stats.begin(), stats.end());
        const double n = double(stats.size());
        double d = 0.0;
        for (size_t i = 0; i < stats.size(); ++i) {
            const double cdf = normal_cdf(stats[i]);
            d = std::max(d, std::abs(double(i + 1) / n - cdf));
            d = std::max(d, std::abs(cdf - double(i) / n));
        }
        rep.ks_distance = d;
    }
    return rep;
}

TheoremCheck theorem_check(const DistributionReport& report) {
    TheoremCheck t;
    t.pass = double(report.counts) >= report.quarter_bound;
    if (report.quarter_bound > 0.0)
        t.margin = double(report.counts) / report.quarter_bound;
    else
        t.margin = report.counts > 0 ? std::numeric_limits<double>::infinity() : 1.0;
    return t;
}

Histogram statistic_histogram(const std::vector<TwistRow>& rows, double X) {
    Histogram h;
    const int nbins = int(std::lround((h.hi - h.lo) / h.width));
    h.counts.assign(size_t(nbins), 0);
    for (const TwistRow& r : rows) {
        if (!in_hard_window(r, X)) continue;
        if (!(r.statistic >= h.lo)) {
            ++h.underflow; // includes -inf (vanished)
        } else if (r.statistic >= h.hi) {
            ++h.overflow;
        } else {
            ++h.counts[size_t((r.statistic - h.lo) / h.width)];
        }
    }
    return h;
}

// ----------------------------------------------------------------------
// Shared per-family computation
// ----------------------------------------------------------------------

namespace {

std::string strip_ext(const std::string& p) {
    const size_t dot = p.find_last_of('.');
    const size_t slash = p.find_last_of("/\\");
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return p;
    return p.substr(0, dot);
}

struct Coverage {
    i64 p_req = 3;
    i64 n_req = 1;
};

Coverage plan_coverage(const ExperimentConfig& cfg, const CurveSpec& curve,
                       bool with_central_values, bool with_prime_sums) {
    const TestFunction h = TestFunction::fejer_kernel();
    const double Ls = cfg.resolve_L() * h.hat_support;
    if (Ls >= 60.0)
        throw coverage_error("sweep: e^{L * support} exceeds any feasible table", i64(1) << 62, 0);
    Coverage cov;
    cov.p_req = std::max<i64>(cov.p_req, i64(std::ceil(std::exp(Ls))));
    if (with_prime_sums) cov.p_req = std::max<i64>(cov.p_req, i64(std::ceil(cfg.resolve_x())));
    if (with_central_values) {
        const i64 max_d = i64(std::floor(2.5 * cfg.X));
        cov.n_req = afe_terms_needed(curve, max_d, cfg.tail_eps);
    }
    cov.p_req = std::max(cov.p_req, cfg.p_max);
    cov.n_req = std::max(cov.n_req, cfg.n_max);
    return cov;
}

BuildOptions build_options(const ExperimentConfig& cfg) {
    BuildOptions opts;
    opts.threads = cfg.threads;
    opts.point_count.bsgs_threshold = cfg.bsgs_threshold;
    return opts;
}

struct WeightedFamily {
    std::vector<DiscriminantRecord> recs;
    std::vector<WeightedTwist> twists;
    double x = 0.0, L = 0.0, loglogX = 0.0;
    int num_admissible_classes = 0;
};

WeightedFamily build_weighted_family(const ExperimentConfig& cfg, const CurveSpec& curve,
                                     bool with_prime_sums, std::ostream* log) {
    cfg.validate();
    WeightedFamily fam;
    fam.x = cfg.resolve_x();
    fam.L = cfg.resolve_L();
    fam.loglogX = std::log(std::log(cfg.X));
    for (const FamilyClass& fc : family_classes(curve))
        if (fc.admissible) ++fam.num_admissible_classes;
    fam.recs = enumerate_admissible(curve, cfg.X);
    if (fam.recs.empty()) return fam;

    const Coverage cov = plan_coverage(cfg, curve, false, with_prime_sums);
    const CoefficientTable table =
        load_or_build(curve, cov.p_req, cov.n_req, cfg.cache_path, build_options(cfg), log);

    const TestFunction h = TestFunction::fejer_kernel();
    const SmoothWindow window{cfg.window_indicator};
    const double digamma_part = archimedean_digamma_part(fam.L, h);

    fam.twists.resize(fam.recs.size());
    parallel_for(fam.recs.size(), cfg.threads, [&](std::size_t i) {
        const DiscriminantRecord& rec = fam.recs[i];
        WeightedTwist t;
        t.d = rec.d;
        const double arch = archimedean_log_term(curve, rec.d, fam.L, h) + digamma_part;
        t.zero_weight = arch - prime_side(curve, table, rec.d, fam.L, h, cfg.bad_prime_mode);
        t.phi = window(std::abs(double(rec.d)) / cfg.X);
        t.prime_sum = with_prime_sums
                          ? prime_sum_P(curve, table, rec.d, fam.x, fam.loglogX).value
                          : std::numeric_limits<double>::quiet_NaN();
        fam.twists[i] = t;
    });
    return fam;
}

void compute_aggregates(SweepResult& res, const ExperimentConfig& cfg) {
    const double loglogx = std::log(std::log(res.x_used));
    res.distribution = distribution_report(res.rows, res.X, cfg.alpha, cfg.beta);
    res.theorem = theorem_check(res.distribution);
    res.histogram = statistic_histogram(res.rows, res.X);

    if (res.rows.empty()) return;

    const SmoothWindow window{cfg.window_indicator};
    std::vector<double> prime_sums, phis, weights;
    prime_sums.reserve(res.rows.size());
    for (const TwistRow& r : res.rows) {
        prime_sums.push_back(r.P_dx);
        phis.push_back(window(std::abs(double(r.d)) / res.X));
        weights.push_back(r.zero_weight);
    }
    res.moments_plain = empirical_moments(prime_sums, phis, res.X, res.x_used, cfg.k_max);
    res.moments_weighted =
        weighted_moments(prime_sums, weights, phis, res.X, res.x_used, cfg.k_max);

    std::vector<double> residuals, log_ls, ps;
    double smallest = std::numeric_limits<double>::infinity();
    for (const TwistRow& r : res.rows) {
        if (r.L_half < -1e-8) ++res.waldspurger_violations;
        if (r.vanished) {
            if (r.zero_weight >= 0.5 && r.zero_weight < 1.8) res.review_flags.push_back(r.d);
            continue;
        }
        smallest = std::min(smallest, std::abs(r.L_half));
        if (r.L_half > 0.0) {
            const double logL = std::log(r.L_half);
            residuals.push_back(logL - (r.P_dx - 0.5 * loglogx));
            log_ls.push_back(logL);
            ps.push_back(r.P_dx);
        }
    }
    if (std::isfinite(smallest)) res.smallest_nonzero_L = smallest;
    if (!residuals.empty()) res.residuals = summarize_residuals(residuals);
    if (log_ls.size() >= 2) res.correlation_logL_P = pearson_correlation(log_ls, ps);
}

} // namespace

// ----------------------------------------------------------------------
// Sweep driver
// ----------------------------------------------------------------------

SweepResult run_sweep(const ExperimentConfig& cfg, std::ostream* log) {
    cfg.validate();
    const CurveSpec curve = cfg.curve();

    SweepResult res;
    res.X = cfg.X;
    res.x_used = cfg.resolve_x();
    res.L_used = cfg.resolve_L();
    res.csv_path = cfg.output_path;
    res.jsonl_path = strip_ext(cfg.output_path) + ".reports.jsonl";
    res.text_path = strip_ext(cfg.output_path) + ".report.txt";

    for (const FamilyClass& fc : family_classes(curve))
        if (fc.admissible) ++res.num_admissible_classes;
    const std::vector<DiscriminantRecord> recs = enumerate_admissible(curve, cfg.X);
    res.family_size_window = i64(recs.size());

    if (recs.empty()) {
        if (log) *log << "# warning: empty admissible family in window [X/2, 5X/2]\n";
        write_sweep_csv(cfg.output_path, {});
        compute_aggregates(res, cfg);
        write_reports(res, res.jsonl_path, res.text_path);
        return res;
    }

    // Coverage is planned (and the table built) before any per-d work, so a
    // short table is an actionable error up front.
    const Coverage cov = plan_coverage(cfg, curve, true, true);
    const CoefficientTable table =
        load_or_build(curve, cov.p_req, cov.n_req, cfg.cache_path, build_options(cfg), log);

    const AfeEvaluator afe(curve, table, cfg.tail_eps, cfg.vanish_threshold,
                           cfg.normalization, cfg.X);
    const TestFunction h = TestFunction::fejer_kernel();
    const double digamma_part = archimedean_digamma_part(res.L_used, h);
    const double loglogX = std::log(std::log(cfg.X));

    res.rows.resize(recs.size());
    parallel_for(recs.size(), cfg.threads, [&](std::size_t i) {
        const DiscriminantRecord& rec = recs[i];
        TwistRow row;
        row.d = rec.d;
        row.kappa = rec.kappa;
        row.a_class = rec.residue_a;
        row.eps_d = rec.eps_d;
        const TwistCentralValue cv = afe.evaluate(rec.d);
        row.L_half = cv.L_half;
        row.vanished = cv.vanished;
        row.statistic = cv.statistic;
        row.P_dx = prime_sum_P(curve, table, rec.d, res.x_used, loglogX).value;
        const double arch = archimedean_log_term(curve, rec.d, res.L_used, h) + digamma_part;
        row.zero_weight =
            arch - prime_side(curve, table, rec.d, res.L_used, h, cfg.bad_prime_mode);
        res.rows[i] = row;
    });

    compute_aggregates(res, cfg);
    if (log && res.family_size_window > 0 &&
        double(res.waldspurger_violations) > 0.01 * double(res.family_size_window))
        *log << "# warning: >1% of twists have L(1/2) < -1e-8; eps_e is likely wrong\n";

    write_sweep_csv(cfg.output_path, res.rows);
    write_reports(res, res.jsonl_path, res.text_path);
    return res;
}

SweepResult recompute_from_csv(const ExperimentConfig& cfg, const std::string& csv_path) {
    cfg.validate();
    SweepResult res;
    res.X = cfg.X;
    res.x_used = cfg.resolve_x();
    res.L_used = cfg.resolve_L();
    res.csv_path = csv_path;
    res.jsonl_path = strip_ext(csv_path) + ".recomputed.reports.jsonl";
    res.text_path = strip_ext(csv_path) + ".recomputed.report.txt";
    res.rows = read_sweep_csv(csv_path);
    res.family_size_window = i64(res.rows.size());
    const CurveSpec curve = cfg.curve();
    for (const FamilyClass& fc : family_classes(curve))
        if (fc.admissible) ++res.num_admissible_classes;
    compute_aggregates(res, cfg);
    return res;
}

DensityResult run_density(const ExperimentConfig& cfg, std::ostream* log) {
    const CurveSpec curve = cfg.curve();
    const WeightedFamily fam = build_weighted_family(cfg, curve, false, log);
    DensityResult out;
    out.X = cfg.X;
    out.L_used = fam.L;
    out.sample_size = i64(fam.twists.size());
    out.num_admissible_classes = fam.num_admissible_classes;
    if (fam.twists.empty()) throw input_error("run_density: empty admissible family");
    const TestFunction h = TestFunction::fejer_kernel();
    const SmoothWindow window{cfg.window_indicator};
    for (i64 ell : cfg.ell_list) {
        const double avg = density_average(fam.twists, curve, ell);
        out.ells.push_back(ell);
        out.empirical.push_back(avg);
        const i64 root = i64(std::llround(std::sqrt(double(ell))));
        if (root * root == ell) {
            // (2.12) is a per-class main term; the pooled family scales it by
            // the number of admissible classes.
            const double pred = double(fam.num_admissible_classes) *
                                predicted_density_main_term(curve, cfg.X, fam.L, h, window, ell);
            out.predicted.push_back(pred);
            out.ratio.push_back(avg / pred);
        } else {
            out.predicted.push_back(std::numeric_limits<double>::quiet_NaN());
            out.ratio.push_back(std::numeric_limits<double>::quiet_NaN());
        }
    }
    return out;
}

MomentsResult run_moments(const ExperimentConfig& cfg, std::ostream* log) {
    const CurveSpec curve = cfg.curve();
    const WeightedFamily fam = build_weighted_family(cfg, curve, true, log);
    if (fam.twists.empty()) throw input_error("run_moments: empty admissible family");

    MomentsResult out;
    std::vector<double> ps, phis, ws;
    for (const WeightedTwist& t : fam.twists) {
        ps.push_back(t.prime_sum);
        phis.push_back(t.phi);
        ws.push_back(t.zero_weight);
    }
    out.pooled_plain = empirical_moments(ps, phis, cfg.X, fam.x, cfg.k_max);
    out.pooled_weighted = weighted_moments(ps, ws, phis, cfg.X, fam.x, cfg.k_max);

    for (const FamilyClass& fc : family_classes(curve)) {
        if (!fc.admissible) continue;
        std::vector<double> cps, cphis;
        for (size_t i = 0; i < fam.recs.size(); ++i) {
            if (fam.recs[i].kappa == fc.kappa && fam.recs[i].residue_a == fc.a_mod_n0) {
                cps.push_back(fam.twists[i].prime_sum);
                cphis.push_back(fam.twists[i].phi);
            }
        }
        if (cps.empty()) continue;
        out.per_class_plain.emplace_back(fc,
                                         empirical_moments(cps, cphis, cfg.X, fam.x, cfg.k_max));
    }
    return out;
}

FamilyRunResult run_family(const ExperimentConfig& cfg) {
    cfg.validate();
    const CurveSpec curve = cfg.curve();
    FamilyRunResult out;
    out.classes = family_classes(curve);
    out.records = enumerate_admissible(curve, cfg.X);
    out.csv_path = cfg.output_path;
    std::ofstream csv(cfg.output_path, std::ios::binary | std::ios::trunc);
    if (!csv) throw io_error("run_family: cannot open " + cfg.output_path);
    csv << "d,kappa,a_class,eps_d\n";
    for (const DiscriminantRecord& r : out.records)
        csv << r.d << "," << r.kappa << "," << r.residue_a << "," << r.eps_d << "\n";
    return out;
}

CoeffsRunResult run_coeffs(const ExperimentConfig& cfg, std::ostream* log) {
    cfg.validate();
    const CurveSpec curve = cfg.curve();
    const Coverage cov = plan_coverage(cfg, curve, true, true);
    const CoefficientTable table =
        load_or_build(curve, cov.p_req, cov.n_req, cfg.cache_path, build_options(cfg), log);
    CoeffsRunResult out;
    out.p_max = table.p_max();
    out.n_max = table.n_max();
    out.prime_count = i64(table.primes().size());
    out.cache_path = cfg.cache_path;
    return out;
}

// ----------------------------------------------------------------------
// CSV
// ----------------------------------------------------------------------

static const char* kCsvHeader = "d,kappa,a_class,eps_d,L_half,vanished,statistic,P_dx,zero_weight";

void write_sweep_csv(const std::string& path, const std::vector<TwistRow>& rows) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("write_sweep_csv: cannot open " + path);
    out << kCsvHeader << "\n";
    char buf[512];
    for (const TwistRow& r : rows) {
        std::snprintf(buf, sizeof buf, "%lld,%d,%lld,%d,%.17g,%d,%.17g,%.17g,%.17g\n",
                      (long long)r.d, r.kappa, (long long)r.a_class, r.eps_d, r.L_half,
                      r.vanished ? 1 : 0, r.statistic, r.P_dx, r.zero_weight);
        out << buf;
    }
    if (!out) throw io_error("write_sweep_csv: short write to " + path);
}

std::vector<TwistRow> read_sweep_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("read_sweep_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw format_error("read_sweep_csv: empty file");
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    if (line != kCsvHeader) throw format_error("read_sweep_csv: unexpected header");
    std::vector<TwistRow> rows;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 9) throw format_error("read_sweep_csv: bad field count");
        TwistRow r;
        r.d = std::stoll(fields[0]);
        r.kappa = std::stoi(fields[1]);
        r.a_class = std::stoll(fields[2]);
        r.eps_d = std::stoi(fields[3]);
        r.L_half = std::stod(fields[4]);
        r.vanished = fields[5] == "1";
        r.statistic = std::stod(fields[6]);
        r.P_dx = std::stod(fields[7]);
        r.zero_weight = std::stod(fields[8]);
        rows.push_back(r);
    }
    return rows;
}

// ----------------------------------------------------------------------
// Reports (JSON-lines + text)
// ----------------------------------------------------------------------

namespace {

// JSON has no inf/nan literals; non-finite values are encoded as null
ordered_json num_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

} // namespace

void write_reports(const SweepResult& res, const std::string& jsonl_path,
                   const std::string& text_path) {
    std::ofstream js(jsonl_path, std::ios::binary | std::ios::trunc);
    if (!js) throw io_error("write_reports: cannot open " + jsonl_path);

    ordered_json params = {
        {"report", "sweep_params"},
        {"X", res.X},
        {"x", res.x_used},
        {"loglog_x", std::log(std::log(res.x_used))},
        {"L", res.L_used},
        {"e_L_support", std::exp(res.L_used)},
        {"family_size_window", res.family_size_window},
        {"admissible_classes", res.num_admissible_classes},
    };
    js << params.dump() << "\n";

    const DistributionReport& dr = res.distribution;
    ordered_json dist = {
        {"report", "distribution"},
        {"alpha", dr.alpha},
        {"beta", dr.beta},
        {"counts", dr.counts},
        {"family_size", dr.family_size},
        {"gaussian_mass", dr.gaussian_mass},
        {"quarter_bound", dr.quarter_bound},
        {"nonvanishing_fraction", dr.nonvanishing_fraction},
        {"ks_distance", dr.ks_distance},
    };
    js << dist.dump() << "\n";

    ordered_json thm = {
        {"report", "theorem_check"},
        {"pass", res.theorem.pass},
        {"margin", num_or_null(res.theorem.margin)},
    };
    js << thm.dump() << "\n";

    ordered_json hist = {
        {"report", "histogram"},
        {"lo", res.histogram.lo},
        {"hi", res.histogram.hi},
        {"width", res.histogram.width},
        {"underflow", res.histogram.underflow},
        {"overflow", res.histogram.overflow},
        {"counts", res.histogram.counts},
    };
    js << hist.dump() << "\n";

    auto moments_json = [](const char* kind, const MomentReport& m) {
        ordered_json o = {
            {"report", "moments"}, {"kind", kind},     {"X", m.X},
            {"x", m.x},            {"k_max", m.k_max}, {"sample_size", m.sample_size},
        };
        o["empirical"] = m.empirical;
        o["gaussian"] = m.gaussian;
        return o;
    };
    js << moments_json("plain", res.moments_plain).dump() << "\n";
    js << moments_json("weighted", res.moments_weighted).dump() << "\n";

    ordered_json resid = {
        {"report", "residuals"},
        {"count", res.residuals.count},
        {"mean", num_or_null(res.residuals.mean)},
        {"median", num_or_null(res.residuals.median)},
        {"q25", num_or_null(res.residuals.q25)},
        {"q75", num_or_null(res.residuals.q75)},
        {"min", num_or_null(res.residuals.min)},
        {"max", num_or_null(res.residuals.max)},
        {"correlation_logL_P", num_or_null(res.correlation_logL_P)},
    };
    js << resid.dump() << "\n";

    ordered_json quality = {
        {"report", "quality"},
        {"smallest_nonzero_L_half", num_or_null(res.smallest_nonzero_L)},
        {"waldspurger_violations", res.waldspurger_violations},
        {"review_flags", res.review_flags},
    };
    js << quality.dump() << "\n";

    std::ofstream txt(text_path, std::ios::binary | std::ios::trunc);
    if (!txt) throw io_error("write_reports: cannot open " + text_path);
    txt << "sweep: X=" << res.X << "  x=" << res.x_used << "  L=" << res.L_used
        << "  e^L=" << std::exp(res.L_used) << "\n";
    txt << "family: " << res.family_size_window << " admissible twists in [X/2, 5X/2], "
        << res.num_admissible_classes << " classes\n";
    txt << "distribution: N(X;" << dr.alpha << "," << dr.beta << ") = " << dr.counts << " of "
        << dr.family_size << " (hard window X < |d| <= 2X)\n";
    txt << "  gaussian mass = " << dr.gaussian_mass << ", quarter bound = " << dr.quarter_bound
        << "\n";
    txt << "  nonvanishing fraction = " << dr.nonvanishing_fraction
        << ", KS distance = " << dr.ks_distance << "\n";
    txt << "theorem check: " << (res.theorem.pass ? "PASS" : "FAIL")
        << " (margin = " << res.theorem.margin << ")\n";
    txt << "moments (plain, k=0.." << res.moments_plain.k_max << "):";
    for (double m : res.moments_plain.empirical) txt << " " << m;
    txt << "\nmoments (weighted):";
    for (double m : res.moments_weighted.empirical) txt << " " << m;
    txt << "\nresiduals: count=" << res.residuals.count << " mean=" << res.residuals.mean
        << " median=" << res.residuals.median << " [q25=" << res.residuals.q25
        << ", q75=" << res.residuals.q75 << "]\n";
    txt << "correlation(log L, P) = " << res.correlation_logL_P << "\n";
    txt << "smallest nonzero |L(1/2)| = " << res.smallest_nonzero_L << "\n";
    txt << "waldspurger violations (L < -1e-8): " << res.waldspurger_violations << "\n";
    if (!res.review_flags.empty()) {
        txt << "review (vanished with weight in [0.5, 1.8)):";
        for (i64 d : res.review_flags) txt << " " << d;
        txt << "\n";
    }
    txt << "histogram [-4, 4] step 0.25 (underflow includes vanished): under="
        << res.histogram.underflow << " over=" << res.histogram.overflow << "\n ";
    for (i64 c : res.histogram.counts) txt << " " << c;
    txt << "\n";
}

} // namespace twistlab
