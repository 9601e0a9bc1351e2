#pragma once

// Command dispatch for the embezzlement laboratory: protocol simulation,
// bound evaluation, parameter sweeps, verification suites, and permutation
// compilation. Reports are deterministic CSV or structured text.

#include "embz/bounds.hpp"
#include "embz/circuit.hpp"
#include "embz/embezzle.hpp"
#include "embz/qcore.hpp"
#include "embz/schedule_io.hpp"
#include "embz/verify.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace embz::cli {

enum class Format { csv, structured_text };

struct RunConfig {
    std::string command;  // simulate | bounds | sweep | verify | compile
    std::string family = "vdh";
    std::string formula = "finite_n";
    std::string suite = "all";
    std::vector<int> N{};
    int d = 2;
    int d_e = 0;  // 0 = default to d
    std::vector<double> epsilon{};
    std::vector<double> delta_S{};
    double c = 22.0;
    int k = 2;
    int m = 1;
    int n = 16;
    int M = 0;
    double lambda1 = 0.5;
    double lambda2 = 0.25;
    int trials = 100;
    std::uint64_t seed = 1;
    int substeps = 64;
    double log_base = std::exp(1.0);
    std::string out_path;  // empty = stdout
    Format format = Format::csv;
};

struct Report {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}
inline std::string fmt(int v) { return std::to_string(v); }
inline std::string fmt(std::uint64_t v) { return std::to_string(v); }

inline void write_report(const Report& rep, const RunConfig& cfg, std::ostream& os) {
    if (cfg.format == Format::csv) {
        for (std::size_t i = 0; i < rep.columns.size(); ++i)
            os << (i ? "," : "") << rep.columns[i];
        os << "\n";
        for (const auto& row : rep.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
            os << "\n";
        }
    } else {
        for (std::size_t r = 0; r < rep.rows.size(); ++r) {
            os << "record " << r << "\n";
            for (std::size_t i = 0; i < rep.columns.size(); ++i)
                os << "  " << rep.columns[i] << ": " << rep.rows[r][i] << "\n";
        }
    }
}

inline void emit(const Report& rep, const RunConfig& cfg) {
    if (cfg.out_path.empty()) {
        write_report(rep, cfg, std::cout);
    } else {
        std::ofstream os(cfg.out_path);
        if (!os) throw std::runtime_error("cannot open output path " + cfg.out_path);
        write_report(rep, cfg, os);
    }
}

struct VdhProtocolResult {
    double overlap = 0.0;
    double infidelity = 0.0;
    double precision_bound = 0.0;  // log d / log N
    double deviation = 0.0;        // one-sided trace-norm deviation
    double delta_S = 0.0;
};

// Sorted-spectra evaluation of the van Dam-Hayden protocol; spectra only, so
// it scales to N in the thousands.
inline VdhProtocolResult vdh_protocol(int N, int d, int d_e, double log_base) {
    auto task = epr_task(d, d_e);
    auto catalyst = vdh_schmidt_vector(N);
    auto p = embezzle_permutation(catalyst, task);

    const auto spec_phi = one_sided_spectrum(task.phi, d_e);
    const auto spec_psi = one_sided_spectrum(task.psi, d_e);
    std::vector<double> a, b;
    for (int e = 0; e < d_e; ++e)
        for (int cdx = 0; cdx < N; ++cdx) {
            a.push_back(catalyst[cdx] * spec_phi[e]);
            b.push_back(catalyst[cdx] * spec_psi[e]);
        }
    std::sort(a.begin(), a.end(), std::greater<>());
    std::sort(b.begin(), b.end(), std::greater<>());

    VdhProtocolResult r;
    r.overlap = p.achieved_overlap;
    r.infidelity = 1.0 - p.achieved_overlap;
    r.precision_bound = std::log(d) / std::log(N);
    for (std::size_t i = 0; i < a.size(); ++i) r.deviation += std::abs(a[i] - b[i]);
    r.delta_S = entanglement_delta(epr_task(d, d_e), log_base);
    return r;
}

inline Report simulate_report(const RunConfig& cfg) {
    Report rep;
    if (cfg.family == "vdh") {
        rep.columns = {"family", "N",       "d",          "d_e",
                       "log_base", "overlap", "infidelity", "precision_bound",
                       "one_sided_deviation", "delta_S"};
        for (int N : cfg.N.empty() ? std::vector<int>{1024} : cfg.N) {
            const int d_e = cfg.d_e ? cfg.d_e : cfg.d;
            auto r = vdh_protocol(N, cfg.d, d_e, cfg.log_base);
            rep.rows.push_back({"vdh", fmt(N), fmt(cfg.d), fmt(d_e), fmt(cfg.log_base),
                                fmt(r.overlap), fmt(r.infidelity), fmt(r.precision_bound),
                                fmt(r.deviation), fmt(r.delta_S)});
        }
    } else if (cfg.family == "itp") {
        rep.columns = {"family", "lambda1", "lambda2", "i", "p", "norm_closed_form",
                       "norm_delta", "A_constant"};
        const double a = itp_A_constant(cfg.lambda1, cfg.lambda2);
        for (int i = 1; i <= cfg.n; ++i) {
            const double p = 1.0 + 1.0 / i;
            rep.rows.push_back({"itp", fmt(cfg.lambda1), fmt(cfg.lambda2), fmt(i), fmt(p),
                                fmt(itp_norm(cfg.lambda1, cfg.lambda2, i, p)),
                                fmt(itp_norm_delta(cfg.lambda1, cfg.lambda2, i)), fmt(a)});
        }
    } else {
        throw std::invalid_argument("simulate: unknown family " + cfg.family);
    }
    return rep;
}

inline BoundParams bound_params(const RunConfig& cfg, double epsilon, double delta_S) {
    BoundParams p;
    p.delta_S = delta_S;
    p.epsilon = epsilon;
    p.d = cfg.d;
    p.d_e = cfg.d_e ? cfg.d_e : cfg.d;
    p.c = cfg.c;
    p.k = cfg.k;
    p.m = cfg.m;
    p.log_base = cfg.log_base;
    return p;
}

inline std::vector<std::string> params_row(const BoundParams& p) {
    return {fmt(p.delta_S), fmt(p.epsilon), fmt(p.d), fmt(p.d_e),
            fmt(p.c),       fmt(p.k),       fmt(p.m), fmt(p.log_base)};
}

inline const std::vector<std::string> kParamColumns = {"delta_S", "epsilon", "d", "d_e",
                                                       "c",       "k",       "m", "log_base"};

inline void push_bound_report(Report& rep, const BoundReport& br) {
    for (std::size_t i = 0; i < br.per_cut_terms.size(); ++i) {
        auto row = std::vector<std::string>{br.formula};
        auto pr = params_row(br.params);
        row.insert(row.end(), pr.begin(), pr.end());
        row.push_back(fmt(static_cast<int>(i)));
        row.push_back(fmt(br.per_cut_terms[i]));
        row.push_back(fmt(br.total));
        rep.rows.push_back(std::move(row));
    }
}

inline Report bounds_report(const RunConfig& cfg) {
    const double eps = cfg.epsilon.empty() ? 0.01 : cfg.epsilon.front();
    const double ds = cfg.delta_S.empty() ? std::log(2.0) / std::log(cfg.log_base)
                                          : cfg.delta_S.front();
    BoundParams p = bound_params(cfg, eps, ds);

    Report rep;
    if (cfg.formula == "finite_n" || cfg.formula == "klocal" || cfg.formula == "coarse_grained") {
        rep.columns = {"formula"};
        rep.columns.insert(rep.columns.end(), kParamColumns.begin(), kParamColumns.end());
        rep.columns.push_back("cut_index");
        rep.columns.push_back("term");
        rep.columns.push_back("total");
        if (cfg.formula == "finite_n") {
            push_bound_report(rep, finite_n_bound(p, cfg.n));
        } else if (cfg.formula == "coarse_grained") {
            push_bound_report(rep, coarse_grained_bound(p, cfg.m));
        } else {
            push_bound_report(rep, klocal_adjusted_bound(p, cfg.n, KLocalRemedy::overall_factor));
            push_bound_report(rep, klocal_adjusted_bound(p, cfg.n, KLocalRemedy::strided_sum));
        }
    } else if (cfg.formula == "fannes") {
        rep.columns = {"formula", "epsilon", "dim", "log_base", "bound"};
        rep.rows.push_back({"fannes", fmt(eps), fmt(cfg.d), fmt(cfg.log_base),
                            fmt(fannes_bound(eps, cfg.d, cfg.log_base))});
    } else if (cfg.formula == "asymptotic") {
        rep.columns = {"formula"};
        rep.columns.insert(rep.columns.end(), kParamColumns.begin(), kParamColumns.end());
        rep.columns.insert(rep.columns.end(),
                           {"M", "epsilon_M", "exact_M_sum", "clipped_sum", "leading_term"});
        AsymptoticBound ab = cfg.M >= 1 ? asymptotic_bound_at_M(p, cfg.M) : asymptotic_bound(p);
        auto row = std::vector<std::string>{"asymptotic"};
        auto pr = params_row(p);
        row.insert(row.end(), pr.begin(), pr.end());
        row.insert(row.end(), {fmt(ab.M), fmt(ab.epsilon_M), fmt(ab.exact_M_sum),
                               fmt(ab.clipped_sum), fmt(ab.leading_term)});
        rep.rows.push_back(std::move(row));
    } else if (cfg.formula == "itp_asymptotic") {
        rep.columns = {"formula", "lambda1", "lambda2", "epsilon",
                       "direct_sum", "divergent_part", "asymptote", "A_constant"};
        auto ib = itp_asymptotic_bound(cfg.lambda1, cfg.lambda2, eps);
        rep.rows.push_back({"itp_asymptotic", fmt(cfg.lambda1), fmt(cfg.lambda2), fmt(eps),
                            fmt(ib.direct_sum), fmt(ib.divergent_part), fmt(ib.asymptote),
                            fmt(itp_A_constant(cfg.lambda1, cfg.lambda2))});
    } else {
        throw std::invalid_argument("bounds: unknown formula " + cfg.formula);
    }
    return rep;
}

// Grid over epsilon and/or delta_S and/or N; rows ordered by grid index.
// Returns the report plus a flag for the post-hoc monotonicity audit.
struct SweepResult {
    Report report;
    bool monotone_ok = true;
};

inline SweepResult sweep_report(const RunConfig& cfg) {
    SweepResult out;
    Report& rep = out.report;

    if (cfg.family == "vdh" && !cfg.N.empty()) {
        rep.columns = {"grid_index", "family", "N", "d", "d_e", "log_base",
                       "overlap", "infidelity", "precision_bound"};
        double prev_overlap = -1.0;
        int idx = 0;
        for (int N : cfg.N) {
            const int d_e = cfg.d_e ? cfg.d_e : cfg.d;
            auto r = vdh_protocol(N, cfg.d, d_e, cfg.log_base);
            if (r.infidelity > r.precision_bound || r.overlap < prev_overlap)
                out.monotone_ok = false;
            prev_overlap = r.overlap;
            rep.rows.push_back({fmt(idx++), "vdh", fmt(N), fmt(cfg.d), fmt(d_e), fmt(cfg.log_base),
                                fmt(r.overlap), fmt(r.infidelity), fmt(r.precision_bound)});
        }
        return out;
    }

    const std::vector<double> eps_grid = cfg.epsilon.empty() ? std::vector<double>{0.01} : cfg.epsilon;
    const std::vector<double> ds_grid =
        cfg.delta_S.empty() ? std::vector<double>{std::log(2.0) / std::log(cfg.log_base)}
                            : cfg.delta_S;
    if (eps_grid.empty() || ds_grid.empty()) throw std::invalid_argument("sweep: empty grid");

    if (cfg.formula == "itp_asymptotic") {
        rep.columns = {"grid_index", "formula", "lambda1", "lambda2", "epsilon",
                       "direct_sum", "divergent_part", "asymptote", "ratio"};
        int idx = 0;
        for (double eps : eps_grid) {
            auto ib = itp_asymptotic_bound(cfg.lambda1, cfg.lambda2, eps);
            rep.rows.push_back({fmt(idx++), "itp_asymptotic", fmt(cfg.lambda1), fmt(cfg.lambda2),
                                fmt(eps), fmt(ib.direct_sum), fmt(ib.divergent_part),
                                fmt(ib.asymptote), fmt(ib.divergent_part / ib.asymptote)});
        }
        return out;
    }

    rep.columns = {"grid_index", "formula"};
    rep.columns.insert(rep.columns.end(), kParamColumns.begin(), kParamColumns.end());
    rep.columns.push_back("n");
    rep.columns.push_back("total");
    if (cfg.formula == "asymptotic") rep.columns.push_back("leading_term");

    int idx = 0;
    std::vector<std::vector<double>> totals(ds_grid.size());
    for (std::size_t si = 0; si < ds_grid.size(); ++si) {
        for (double eps : eps_grid) {
            BoundParams p = bound_params(cfg, eps, ds_grid[si]);
            double total = 0.0, leading = 0.0;
            if (cfg.formula == "finite_n") {
                total = finite_n_bound(p, cfg.n).total;
            } else if (cfg.formula == "coarse_grained") {
                total = coarse_grained_bound(p, cfg.m).total;
            } else if (cfg.formula == "asymptotic") {
                auto ab = asymptotic_bound(p);
                total = ab.exact_M_sum;
                leading = ab.leading_term;
            } else {
                throw std::invalid_argument("sweep: unknown formula " + cfg.formula);
            }
            totals[si].push_back(total);
            auto row = std::vector<std::string>{fmt(idx++), cfg.formula};
            auto pr = params_row(p);
            row.insert(row.end(), pr.begin(), pr.end());
            row.push_back(fmt(cfg.n));
            row.push_back(fmt(total));
            if (cfg.formula == "asymptotic") row.push_back(fmt(leading));
            rep.rows.push_back(std::move(row));
        }
    }
    // post-hoc audit: totals nonincreasing in epsilon (descending grids give
    // nondecreasing columns), nondecreasing in delta_S
    for (std::size_t si = 0; si < totals.size(); ++si)
        for (std::size_t ei = 1; ei < totals[si].size(); ++ei) {
            const bool eps_descending = eps_grid[ei] < eps_grid[ei - 1];
            const bool grew = totals[si][ei] >= totals[si][ei - 1] - 1e-12;
            if (eps_descending != grew && std::abs(totals[si][ei] - totals[si][ei - 1]) > 1e-12)
                out.monotone_ok = false;
        }
    for (std::size_t si = 1; si < totals.size(); ++si)
        for (std::size_t ei = 0; ei < totals[si].size(); ++ei) {
            const bool ds_grew = ds_grid[si] > ds_grid[si - 1];
            if (ds_grew && totals[si][ei] < totals[si - 1][ei] - 1e-12) out.monotone_ok = false;
            if (!ds_grew && totals[si][ei] > totals[si - 1][ei] + 1e-12) out.monotone_ok = false;
        }
    return out;
}

inline Report verify_report(const RunConfig& cfg, int& violations) {
    Report rep;
    rep.columns = {"check_name", "trials", "violations", "worst_margin", "seed"};
    std::vector<VerificationRecord> records;
    const bool all = cfg.suite == "all";
    if (all || cfg.suite == "sie")
        records.push_back(check_sie(cfg.trials, ChainSpec(3, 2, 2), cfg.seed));
    if (all || cfg.suite == "fannes") records.push_back(check_fannes(cfg.trials, 16, cfg.seed));
    if (all || cfg.suite == "norms")
        records.push_back(
            check_norm_monotonicity(cfg.trials, HilbertFactorization({2, 2, 2, 2}), cfg.seed));
    if (all || cfg.suite == "chain")
        records.push_back(check_cost_entropy_chain(cfg.trials, ChainSpec(4, 2, 2), cfg.seed));
    if (records.empty()) throw std::invalid_argument("verify: unknown suite " + cfg.suite);
    violations = 0;
    for (const auto& r : records) {
        violations += r.violations;
        rep.rows.push_back({r.check_name, fmt(r.trials), fmt(r.violations), fmt(r.worst_margin),
                            fmt(r.seed)});
    }
    return rep;
}

inline Report compile_report(const RunConfig& cfg) {
    const int N = cfg.N.empty() ? 4 : cfg.N.front();
    const int d_e = cfg.d_e ? cfg.d_e : cfg.d;
    int n = 0;
    for (std::int64_t x = 1; x < N; x *= cfg.d) ++n;
    if (static_cast<std::int64_t>(std::pow(cfg.d, n)) != N)
        throw std::invalid_argument("compile: N must be a power of d");

    ChainSpec spec(n, cfg.d, d_e);
    auto task = epr_task(cfg.d, d_e);
    auto catalyst = vdh_schmidt_vector(N);
    auto p = embezzle_permutation(catalyst, task);
    Schedule sched = compile_permutation(p.perm, spec);

    DensityMatrix omega = diagonal_state(HilbertFactorization({N}), catalyst);
    Matrix raw = permutation_matrix(p.perm);
    const double raw_dev = one_sided_deviation(omega, task, raw);
    Matrix compiled = schedule_unitary(sched, spec.factorization());
    const double compiled_dev = one_sided_deviation(omega, task, compiled);

    if (!cfg.out_path.empty()) {
        std::ofstream os(cfg.out_path);
        os << schedule_to_json(sched).dump(2) << "\n";
    }

    Report rep;
    rep.columns = {"family", "N", "d", "d_e", "slices", "cost",
                   "raw_deviation", "compiled_deviation", "overlap"};
    rep.rows.push_back({"vdh", fmt(N), fmt(cfg.d), fmt(d_e),
                        fmt(static_cast<int>(sched.slices.size())), fmt(schedule_cost(sched)),
                        fmt(raw_dev), fmt(compiled_dev), fmt(p.achieved_overlap)});
    return rep;
}

// Exit status: 0 success, 1 validation error, 2 verification violation.
inline int run(const RunConfig& cfg) {
    try {
        if (cfg.command == "simulate") {
            emit(simulate_report(cfg), cfg);
        } else if (cfg.command == "bounds") {
            emit(bounds_report(cfg), cfg);
        } else if (cfg.command == "sweep") {
            auto res = sweep_report(cfg);
            emit(res.report, cfg);
            if (!res.monotone_ok) {
                std::cerr << "sweep: post-hoc monotonicity audit failed\n";
                return 2;
            }
        } else if (cfg.command == "verify") {
            int violations = 0;
            auto rep = verify_report(cfg, violations);
            emit(rep, cfg);
            if (violations > 0) return 2;
        } else if (cfg.command == "compile") {
            emit(compile_report(cfg), cfg);
        } else {
            throw std::invalid_argument("unknown command " + cfg.command);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace embz::cli
