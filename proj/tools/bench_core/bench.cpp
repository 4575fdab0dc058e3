#include "bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include <arh/errors.hpp>
#include <arh/grid_basis.hpp>
#include <arh/rng.hpp>
#include <arh/simulate.hpp>

namespace arh::bench {

namespace {

constexpr const char* kCsvHeader =
    "scenario,method,n,k_n,f_num,f_den,mean_err,median_err,mean_ub,failures,wall_ms";

double nan_value() { return std::numeric_limits<double>::quiet_NaN(); }

/// Round-trip-exact decimal rendering; NaN prints as "nan".
std::string fmt_g17(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Compact rendering for human-facing listings and chart labels.
std::string fmt_short(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string::size_type start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

bool nan_or_equal(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

}  // namespace

const char* kind_name(MethodKind kind) {
    switch (kind) {
        case MethodKind::Diag: return "diag";
        case MethodKind::Bosq: return "bosq";
        case MethodKind::Guillas: return "guillas";
        case MethodKind::Wavelet: return "wavelet";
        case MethodKind::Besse: return "besse";
        case MethodKind::Kernel: return "kernel";
    }
    return "unknown";
}

namespace {

/// Kind for a method label: an exact kind name, or the prefix before the
/// first '_' or '-' so that labels like "kernel_a" resolve on their own.
std::optional<MethodKind> resolve_kind(const std::string& label) {
    static const std::map<std::string, MethodKind> names = {
        {"diag", MethodKind::Diag},       {"bosq", MethodKind::Bosq},
        {"guillas", MethodKind::Guillas}, {"wavelet", MethodKind::Wavelet},
        {"besse", MethodKind::Besse},     {"kernel", MethodKind::Kernel},
    };
    const auto exact = names.find(label);
    if (exact != names.end()) return exact->second;
    const auto cut = label.find_first_of("_-");
    if (cut != std::string::npos) {
        const auto pre = names.find(label.substr(0, cut));
        if (pre != names.end()) return pre->second;
    }
    return std::nullopt;
}

/// Truncation level as tabulated in the reference study, which rounds the
/// rules down; the in-library rule keeps the ceiling form, so full-scale
/// configs pin these values instead.
int published_level(const TruncationRule& rule, int n, double delta1) {
    double raw = 0.0;
    switch (rule.kind) {
        case TruncationKind::LogCeil:
            raw = std::log(double(n));
            break;
        case TruncationKind::PowerRate:
            raw = rule.e_prime * std::pow(double(n), 1.0 / (8.0 * delta1 + 2.0));
            break;
        case TruncationKind::RootAlpha:
            raw = std::pow(double(n), 1.0 / rule.alpha);
            break;
    }
    const int k = int(std::floor(raw)) + rule.offset;
    return std::max(1, std::min(k, n - 1));
}

}  // namespace

const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> entries = [] {
        std::vector<int> large, small;
        for (int t = 1; t <= 10; ++t) large.push_back(35000 + 40000 * (t - 1));
        for (int t = 1; t <= 13; ++t) small.push_back(750 + 500 * (t - 1));
        const std::vector<int> desk_large = {2000, 8000};
        const std::vector<int> desk_small = {750, 1250, 2250};

        const ThresholdCurve th_diag{0.65, RateKind::Half};
        const ThresholdCurve th_pseudo{0.3, RateKind::Third};
        const ThresholdCurve th_non{1.25, RateKind::Third};
        const TruncationRule log_rule{TruncationKind::LogCeil, 1.7, 0.0, 0};
        const TruncationRule pow_rule{TruncationKind::PowerRate, 1.7, 0.0, 0};
        const TruncationRule root65{TruncationKind::RootAlpha, 1.7, 6.5, 0};
        const TruncationRule root10{TruncationKind::RootAlpha, 1.7, 10.0, 0};

        using MK = MethodKind;
        const std::vector<MK> comp3 = {MK::Diag, MK::Bosq, MK::Guillas};
        const std::vector<MK> comp2 = {MK::Bosq, MK::Guillas};
        const std::vector<MK> full_d = {MK::Diag, MK::Bosq,  MK::Guillas, MK::Wavelet,
                                        MK::Besse, MK::Kernel, MK::Kernel};
        const std::vector<MK> full_nd = {MK::Bosq,  MK::Guillas, MK::Wavelet,
                                         MK::Besse, MK::Kernel,  MK::Kernel};
        const std::vector<MK> four_d = {MK::Diag, MK::Bosq, MK::Guillas, MK::Wavelet};
        const std::vector<MK> three_nd = {MK::Bosq, MK::Guillas, MK::Wavelet};

        // Correlated regimes rescale c1 so the innovation covariance stays
        // positive semidefinite at M = 50: 5 for delta1 = 3/2, 150 for 24/10.
        std::vector<CatalogEntry> list = {
            {1, Regime::Diagonal, 1.5, 1.0, log_rule, th_diag, comp3, {}, large, desk_large},
            {2, Regime::Diagonal, 2.4, 1.0, log_rule, th_diag, comp3, {}, large, desk_large},
            {3, Regime::Diagonal, 1.5, 1.0, pow_rule, th_diag, comp3, {}, large, desk_large},
            {4, Regime::Diagonal, 2.4, 1.0, pow_rule, th_diag, comp3, {}, large, desk_large},
            {5, Regime::PseudoDiagonal, 1.5, 5.0, log_rule, th_pseudo, comp2, {}, large,
             desk_large},
            {6, Regime::PseudoDiagonal, 2.4, 150.0, log_rule, th_pseudo, comp2, {}, large,
             desk_large},
            {7, Regime::PseudoDiagonal, 1.5, 5.0, pow_rule, th_pseudo, comp2, {}, large,
             desk_large},
            {8, Regime::PseudoDiagonal, 2.4, 150.0, pow_rule, th_pseudo, comp2, {}, large,
             desk_large},
            {9, Regime::NonDiagonal, 1.5, 5.0, log_rule, th_non, comp2, {}, large, desk_large},
            {10, Regime::NonDiagonal, 2.4, 150.0, log_rule, th_non, comp2, {}, large, desk_large},
            {11, Regime::NonDiagonal, 1.5, 5.0, pow_rule, th_non, comp2, {}, large, desk_large},
            {12, Regime::NonDiagonal, 2.4, 150.0, pow_rule, th_non, comp2, {}, large, desk_large},
            {13, Regime::Diagonal, 1.5, 1.0, log_rule, th_diag, full_d, {0.15, 0.25}, small,
             desk_small},
            {14, Regime::Diagonal, 2.4, 1.0, log_rule, th_diag, full_d, {0.15, 0.25}, small,
             desk_small},
            {15, Regime::Diagonal, 1.5, 1.0, root65, th_diag, four_d, {}, small, desk_small},
            {16, Regime::Diagonal, 2.4, 1.0, root10, th_diag, four_d, {}, small, desk_small},
            {17, Regime::PseudoDiagonal, 1.5, 5.0, log_rule, th_pseudo, full_nd, {1.2, 1.7},
             small, desk_small},
            {18, Regime::PseudoDiagonal, 2.4, 150.0, log_rule, th_pseudo, full_nd, {1.2, 1.7},
             small, desk_small},
            {19, Regime::PseudoDiagonal, 1.5, 5.0, root65, th_pseudo, three_nd, {}, small,
             desk_small},
            {20, Regime::PseudoDiagonal, 2.4, 150.0, root10, th_pseudo, three_nd, {}, small,
             desk_small},
            {21, Regime::NonDiagonal, 1.5, 5.0, log_rule, th_non, full_nd, {1.2, 1.7}, small,
             desk_small},
            {22, Regime::NonDiagonal, 2.4, 150.0, log_rule, th_non, full_nd, {1.2, 1.7}, small,
             desk_small},
            {23, Regime::NonDiagonal, 1.5, 5.0, root65, th_non, three_nd, {}, small, desk_small},
            {24, Regime::NonDiagonal, 2.4, 150.0, root10, th_non, three_nd, {}, small,
             desk_small},
        };
        return list;
    }();
    return entries;
}

BenchConfig scenario_config(int id, bool desk) {
    const CatalogEntry* entry = nullptr;
    for (const auto& e : catalog())
        if (e.id == id) entry = &e;
    if (!entry)
        throw invalid_argument_error("scenario_config: unknown scenario id " + std::to_string(id));

    BenchConfig cfg;
    cfg.label = "scenario" + std::to_string(id) + (desk ? "-desk" : "-full");
    cfg.scenario.regime = entry->regime;
    cfg.scenario.delta1 = entry->delta1;
    cfg.scenario.c1 = entry->c1;
    cfg.rule = entry->rule;
    cfg.threshold = entry->threshold;
    cfg.sample_sizes = desk ? entry->desk_sizes : entry->full_sizes;
    cfg.replications = desk ? 100 : 500;
    cfg.seed_base = 20260800 + std::uint64_t(id);
    cfg.workers = 4;
    cfg.out_dir = "out/" + cfg.label;
    if (!desk) {
        cfg.use_pins = true;
        for (int n : cfg.sample_sizes)
            cfg.pins[n] = published_level(entry->rule, n, entry->delta1);
    }
    std::size_t kernel_seen = 0;
    for (MethodKind kind : entry->methods) {
        MethodSpec m;
        m.kind = kind;
        m.label = kind_name(kind);
        if (kind == MethodKind::Kernel) {
            m.h = entry->kernel_h.at(kernel_seen);
            if (entry->kernel_h.size() > 1) m.label = kernel_seen == 0 ? "kernel_a" : "kernel_b";
            ++kernel_seen;
        }
        cfg.methods.push_back(std::move(m));
    }
    return cfg;
}

namespace {

std::string rule_text(const TruncationRule& rule, double delta1) {
    switch (rule.kind) {
        case TruncationKind::LogCeil: return "ceil(ln n)";
        case TruncationKind::PowerRate:
            return "ceil(" + std::string(fmt_short(rule.e_prime)) + " n^(1/" +
                   fmt_short(8.0 * delta1 + 2.0) + "))";
        case TruncationKind::RootAlpha:
            return "ceil(n^(1/" + fmt_short(rule.alpha) + "))";
    }
    return "?";
}

std::string pad(std::string s, std::size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
}

}  // namespace

std::string list_scenarios() {
    std::ostringstream out;
    out << "catalog: 24 scenarios; desk variants keep the derived truncation rule,\n"
        << "full variants pin the tabulated levels (see scenario_config).\n\n";
    out << pad("id", 4) << pad("regime", 17) << pad("delta1", 8) << pad("truncation", 22)
        << pad("threshold", 16) << pad("sizes", 38) << "methods\n";
    for (const auto& e : catalog()) {
        std::string threshold = std::string("beta ") + fmt_short(e.threshold.beta) +
                                (e.threshold.rate == RateKind::Half ? " /sqrt" : " /cbrt");
        std::string sizes = "full " + std::to_string(e.full_sizes.front()) + ".." +
                            std::to_string(e.full_sizes.back()) + ", desk";
        for (std::size_t i = 0; i < e.desk_sizes.size(); ++i)
            sizes += (i == 0 ? " " : ",") + std::to_string(e.desk_sizes[i]);
        std::string methods;
        std::size_t kernel_seen = 0;
        for (std::size_t i = 0; i < e.methods.size(); ++i) {
            if (i > 0) methods += ",";
            methods += kind_name(e.methods[i]);
            if (e.methods[i] == MethodKind::Kernel)
                methods += std::string("(h=") + fmt_short(e.kernel_h.at(kernel_seen++)) + ")";
        }
        out << pad(std::to_string(e.id), 4) << pad(regime_name(e.regime), 17)
            << pad(fmt_short(e.delta1), 8) << pad(rule_text(e.rule, e.delta1), 22)
            << pad(threshold, 16) << pad(sizes, 38) << methods << "\n";
    }
    return out.str();
}

int level_for(const BenchConfig& config, int n) {
    if (config.use_pins) {
        const auto it = config.pins.find(n);
        if (it == config.pins.end())
            throw invalid_argument_error("level_for: no pinned level for n = " +
                                         std::to_string(n));
        if (it->second < 1 || it->second > n - 1)
            throw invalid_argument_error("level_for: pinned level " +
                                         std::to_string(it->second) + " out of [1, n - 1]");
        return it->second;
    }
    return k_of(config.rule, n, double(config.scenario.delta1));
}

void check_config(const BenchConfig& config) {
    auto fail = [](const std::string& msg) {
        throw invalid_argument_error("check_config: " + msg);
    };
    if (config.label.empty()) fail("label must be nonempty");
    if (config.label.find_first_of(",\"\n") != std::string::npos)
        fail("label must not contain commas, quotes, or newlines");
    if (config.replications < 1) fail("replications must be >= 1");
    if (config.workers < 1) fail("workers must be >= 1");
    if (config.sample_sizes.empty()) fail("sample_sizes must be nonempty");
    for (int n : config.sample_sizes)
        if (n < 3) fail("sample sizes must be >= 3");
    if (!(config.threshold.beta > 0.0)) fail("threshold beta must be > 0");
    if (config.methods.empty()) fail("methods must be nonempty");

    std::set<std::string> labels;
    for (const auto& m : config.methods) {
        if (m.label.empty()) fail("method labels must be nonempty");
        if (m.label.find_first_of(",\"\n ") != std::string::npos)
            fail("method label '" + m.label + "' contains a comma, quote, space, or newline");
        if (!labels.insert(m.label).second) fail("duplicate method label '" + m.label + "'");
        switch (m.kind) {
            case MethodKind::Diag:
                if (config.scenario.regime != Regime::Diagonal)
                    fail("method '" + m.label + "' requires the diagonal regime");
                break;
            case MethodKind::Guillas:
                if (!(m.beta_u > 0.0 && m.beta_u < 1.0))
                    fail("method '" + m.label + "': beta_u must lie in (0, 1)");
                break;
            case MethodKind::Kernel:
                if (!(m.h > 0.0)) fail("method '" + m.label + "': bandwidth h must be > 0");
                if (!(m.smooth_penalty >= 0.0))
                    fail("method '" + m.label + "': smooth_penalty must be >= 0");
                break;
            case MethodKind::Besse:
                if (!(m.ell >= 0.0)) fail("method '" + m.label + "': ell must be >= 0");
                if (m.q < 1) fail("method '" + m.label + "': q must be >= 1");
                break;
            case MethodKind::Wavelet:
                if (m.wavelet.j0 < 0 || m.wavelet.j0 > m.wavelet.J || m.wavelet.J > 24)
                    fail("method '" + m.label + "': need 0 <= j0 <= J <= 24");
                if (m.wavelet.M_spec < 1) fail("method '" + m.label + "': m_spec must be >= 1");
                break;
            case MethodKind::Bosq:
                break;
        }
    }

    validate(config.scenario);
    const auto grid = make_grid(config.grid_a, config.grid_b, config.grid_step);
    sine_basis(grid, config.scenario.M);

    const int min_n = *std::min_element(config.sample_sizes.begin(), config.sample_sizes.end());
    for (const auto& m : config.methods) {
        if (m.kind == MethodKind::Besse && m.q > std::min<Eigen::Index>(min_n, grid.size()))
            fail("method '" + m.label + "': q exceeds the smallest sample size or the grid");
    }
    for (int n : config.sample_sizes) {
        const int k = level_for(config, n);
        if (k > config.scenario.M)
            fail("truncation level " + std::to_string(k) + " at n = " + std::to_string(n) +
                 " exceeds the scenario dimension");
    }
}

namespace {

/// All per-replication outputs, written into a preassigned slot so that
/// aggregation order never depends on thread scheduling.
struct RepResult {
    std::vector<double> err;  // per method; NaN on failure
    std::vector<char> ok;
    std::vector<double> ub;  // per method; NaN unless the diagonal fit succeeded
    std::vector<double> ms;
};

double mean_of(const std::vector<double>& values) {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / double(values.size());
}

double median_of(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

}  // namespace

ResultTable run(const BenchConfig& config, RunMeta* meta) {
    check_config(config);
    const auto ops = validate(config.scenario);
    const auto grid = make_grid(config.grid_a, config.grid_b, config.grid_step);
    const auto basis = sine_basis(grid, config.scenario.M);
    const VecX<double> rho_diag = ops.rho.diagonal();
    const KernelErrorMode mode = config.scenario.regime == Regime::Diagonal
                                     ? KernelErrorMode::Applied
                                     : KernelErrorMode::Literal;
    bool needs_curves = false;
    for (const auto& m : config.methods)
        needs_curves = needs_curves || m.kind == MethodKind::Wavelet ||
                       m.kind == MethodKind::Besse || m.kind == MethodKind::Kernel;

    ResultTable table;
    if (meta) *meta = RunMeta{};

    for (int n : config.sample_sizes) {
        const int k_n = level_for(config, n);
        const int N = config.replications;
        const std::size_t m_count = config.methods.size();
        std::vector<RepResult> slots(static_cast<std::size_t>(N));

        auto run_one = [&](int l) {
            RepResult& slot = slots[std::size_t(l)];
            slot.err.assign(m_count, nan_value());
            slot.ok.assign(m_count, 0);
            slot.ub.assign(m_count, nan_value());
            slot.ms.assign(m_count, 0.0);
            CoeffSeries<double> series;
            try {
                series = simulate(
                    ops, n, derive_seed(config.seed_base, std::uint64_t(n), std::uint64_t(l)));
            } catch (const error&) {
                return;  // the whole replication counts as failed for every method
            }
            const VecX<double> last = series.data.row(n - 1).transpose();
            std::vector<Curve<double>> curves;
            Curve<double> query;
            if (needs_curves) {
                curves = curves_of(series, basis);
                query = curves.back();
            }
            for (std::size_t m = 0; m < m_count; ++m) {
                const MethodSpec& method = config.methods[m];
                const auto t0 = std::chrono::steady_clock::now();
                try {
                    switch (method.kind) {
                        case MethodKind::Diag: {
                            const auto model = diag_unknown(series, k_n);
                            slot.err[m] = diag_truncated_error(rho_diag, last, model, basis);
                            slot.ub[m] = ub_bound(series, config.scenario, k_n).total;
                            break;
                        }
                        case MethodKind::Bosq: {
                            const auto model = bosq(series, k_n);
                            slot.err[m] =
                                kernel_truncated_error(ops.rho, model, basis, k_n, last, mode);
                            break;
                        }
                        case MethodKind::Guillas: {
                            const auto model =
                                guillas(series, k_n, method.beta_u,
                                        std::optional<double>(ops.C_eigs(k_n - 1)));
                            slot.err[m] =
                                kernel_truncated_error(ops.rho, model, basis, k_n, last, mode);
                            break;
                        }
                        case MethodKind::Wavelet: {
                            const auto model = wavelet_predictor(curves, k_n, method.wavelet);
                            slot.err[m] =
                                full_error(ops.rho, predict(model, query), basis, last);
                            break;
                        }
                        case MethodKind::Besse: {
                            const auto model = besse_penalized_predictor(
                                curves, SmootherConfig{method.ell, method.q});
                            slot.err[m] =
                                full_error(ops.rho, predict(model, query), basis, last);
                            break;
                        }
                        case MethodKind::Kernel: {
                            const auto result = kernel_predictor(
                                curves, KernelConfig{method.h, method.smooth_penalty}, query);
                            slot.err[m] = full_error(ops.rho, result.value, basis, last);
                            break;
                        }
                    }
                    slot.ok[m] = 1;
                } catch (const error&) {
                    // stays marked failed; aggregation applies the abort policy
                }
                slot.ms[m] = std::chrono::duration<double, std::milli>(
                                 std::chrono::steady_clock::now() - t0)
                                 .count();
            }
        };

        const int W = std::max(1, std::min(config.workers, N));
        if (W == 1) {
            for (int l = 0; l < N; ++l) run_one(l);
        } else {
            std::vector<std::thread> pool;
            std::exception_ptr first_failure;
            std::mutex failure_mutex;
            pool.reserve(std::size_t(W));
            for (int t = 0; t < W; ++t) {
                pool.emplace_back([&, t] {
                    try {
                        for (int l = t; l < N; l += W) run_one(l);
                    } catch (...) {
                        const std::lock_guard<std::mutex> hold(failure_mutex);
                        if (!first_failure) first_failure = std::current_exception();
                    }
                });
            }
            for (auto& worker : pool) worker.join();
            if (first_failure) std::rethrow_exception(first_failure);
        }

        const double threshold_at_n = xi(config.threshold, double(n));
        for (std::size_t m = 0; m < m_count; ++m) {
            std::vector<double> errs, ubs;
            std::int64_t failures = 0;
            double wall_ms = 0.0;
            for (int l = 0; l < N; ++l) {
                const RepResult& slot = slots[std::size_t(l)];
                wall_ms += slot.ms[m];
                if (!slot.ok[m]) {
                    ++failures;
                    continue;
                }
                errs.push_back(slot.err[m]);
                if (!std::isnan(slot.ub[m])) ubs.push_back(slot.ub[m]);
            }

            ResultRow row;
            row.scenario = config.label;
            row.method = config.methods[m].label;
            row.n = n;
            row.k_n = k_n;
            row.f_den = N;
            row.failures = failures;
            row.aborted = 2 * failures > N;
            if (!row.aborted) {
                std::int64_t exceed = 0;
                for (double e : errs)
                    if (e > threshold_at_n) ++exceed;
                row.f_num = exceed;
                row.mean_err = mean_of(errs);
                row.median_err = median_of(errs);
                if (!ubs.empty()) row.mean_ub = mean_of(ubs);
            }
            table.rows.push_back(row);

            if (meta) {
                CellMeta cell;
                cell.method = config.methods[m].label;
                cell.n = n;
                cell.k_n = k_n;
                cell.wall_ms = wall_ms;
                cell.failures = failures;
                if (config.methods[m].kind == MethodKind::Diag && !row.aborted) {
                    std::int64_t e_num = 0;
                    for (double u : ubs)
                        if (u > threshold_at_n) ++e_num;
                    cell.e_num = e_num;
                }
                meta->cells.push_back(std::move(cell));
            }
        }

        if (meta) {
            RunMeta::LevelInfo info;
            info.n = n;
            info.k_n = k_n;
            info.n_c_kn_pow4 = double(n) * std::pow(double(ops.C_eigs(k_n - 1)), 4.0);
            if (k_n < config.scenario.M) {
                info.diagnostics =
                    truncation_diagnostics(ops.C_eigs, k_n, n, config.threshold.beta);
                info.has_diagnostics = true;
            }
            meta->levels.push_back(info);
        }
    }
    return table;
}

bool same_table(const ResultTable& a, const ResultTable& b) {
    if (a.rows.size() != b.rows.size()) return false;
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        const ResultRow& x = a.rows[i];
        const ResultRow& y = b.rows[i];
        if (x.scenario != y.scenario || x.method != y.method || x.n != y.n || x.k_n != y.k_n ||
            x.f_den != y.f_den || x.failures != y.failures || x.aborted != y.aborted)
            return false;
        if (x.aborted) continue;
        if (x.f_num != y.f_num || !nan_or_equal(x.mean_err, y.mean_err) ||
            !nan_or_equal(x.median_err, y.median_err) || !nan_or_equal(x.mean_ub, y.mean_ub))
            return false;
    }
    return true;
}

void emit_csv(const ResultTable& table, std::ostream& out) {
    out << kCsvHeader << "\n";
    for (const ResultRow& r : table.rows) {
        out << r.scenario << ',' << r.method << ',' << r.n << ',' << r.k_n << ',';
        if (r.aborted)
            out << "nan";
        else
            out << r.f_num;
        out << ',' << r.f_den << ',' << fmt_g17(r.aborted ? nan_value() : r.mean_err) << ','
            << fmt_g17(r.aborted ? nan_value() : r.median_err) << ','
            << fmt_g17(r.aborted ? nan_value() : r.mean_ub) << ',' << r.failures << ",0\n";
    }
}

void emit_csv(const ResultTable& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("emit_csv: cannot open '" + path + "' for writing");
    emit_csv(table, out);
    out.flush();
    if (!out) throw io_error("emit_csv: write to '" + path + "' failed");
}

namespace {

std::int64_t csv_int(const std::string& field, int line) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(field, &pos);
        if (pos != field.size()) throw std::invalid_argument(field);
        return v;
    } catch (const std::exception&) {
        throw io_error("read_csv: bad integer '" + field + "' on line " + std::to_string(line));
    }
}

double csv_double(const std::string& field, int line) {
    if (field == "nan") return nan_value();
    try {
        std::size_t pos = 0;
        const double v = std::stod(field, &pos);
        if (pos != field.size()) throw std::invalid_argument(field);
        return v;
    } catch (const std::exception&) {
        throw io_error("read_csv: bad number '" + field + "' on line " + std::to_string(line));
    }
}

}  // namespace

ResultTable read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw io_error("read_csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCsvHeader) throw io_error("read_csv: unexpected header '" + line + "'");
    ResultTable table;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split(line, ',');
        if (fields.size() != 11)
            throw io_error("read_csv: line " + std::to_string(lineno) + " has " +
                           std::to_string(fields.size()) + " fields, expected 11");
        ResultRow r;
        r.scenario = fields[0];
        r.method = fields[1];
        r.n = int(csv_int(fields[2], lineno));
        r.k_n = int(csv_int(fields[3], lineno));
        r.aborted = fields[4] == "nan";
        r.f_num = r.aborted ? 0 : csv_int(fields[4], lineno);
        r.f_den = csv_int(fields[5], lineno);
        r.mean_err = csv_double(fields[6], lineno);
        r.median_err = csv_double(fields[7], lineno);
        r.mean_ub = csv_double(fields[8], lineno);
        r.failures = csv_int(fields[9], lineno);
        csv_double(fields[10], lineno);  // wall time column is pinned to zero
        r.wall_ms = 0.0;
        table.rows.push_back(std::move(r));
    }
    return table;
}

ResultTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("read_csv: cannot open '" + path + "'");
    return read_csv(in);
}

namespace {

std::string fmt_coord(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

}  // namespace

void emit_svg(const ResultTable& table, const ThresholdCurve& threshold, std::ostream& out) {
    std::vector<std::string> methods;
    std::vector<int> sizes;
    for (const ResultRow& r : table.rows) {
        if (std::find(methods.begin(), methods.end(), r.method) == methods.end())
            methods.push_back(r.method);
        if (std::find(sizes.begin(), sizes.end(), r.n) == sizes.end()) sizes.push_back(r.n);
    }
    std::sort(sizes.begin(), sizes.end());

    const double width = 760.0, height = 480.0;
    const double x0 = 70.0, x1 = 560.0, y0 = 46.0, y1 = height - 56.0;

    const double n_lo = sizes.empty() ? 0.0 : double(sizes.front());
    const double n_hi = sizes.empty() ? 1.0 : double(sizes.back());
    auto x_of = [&](double n) {
        if (n_hi == n_lo) return (x0 + x1) / 2.0;
        return x0 + (n - n_lo) / (n_hi - n_lo) * (x1 - x0);
    };

    double y_max = 1e-3;
    for (const ResultRow& r : table.rows)
        if (!r.aborted && r.f_den > 0)
            y_max = std::max(y_max, double(r.f_num) / double(r.f_den));
    std::vector<double> xi_vals;
    for (int n : sizes) {
        xi_vals.push_back(xi(threshold, double(n)));
        y_max = std::max(y_max, xi_vals.back());
    }
    y_max *= 1.08;
    auto y_of = [&](double v) { return y1 - v / y_max * (y1 - y0); };

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
        << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"#ffffff\"/>\n";

    const std::string title = table.rows.empty() ? "benchmark" : table.rows.front().scenario;
    out << "<text x=\"" << fmt_coord((x0 + x1) / 2.0)
        << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">"
        << title << ": exceedance fraction vs n</text>\n";

    // axes
    out << "<line x1=\"" << fmt_coord(x0) << "\" y1=\"" << fmt_coord(y1) << "\" x2=\""
        << fmt_coord(x1) << "\" y2=\"" << fmt_coord(y1)
        << "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
    out << "<line x1=\"" << fmt_coord(x0) << "\" y1=\"" << fmt_coord(y0) << "\" x2=\""
        << fmt_coord(x0) << "\" y2=\"" << fmt_coord(y1)
        << "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
    for (int n : sizes) {
        const double x = x_of(double(n));
        out << "<line x1=\"" << fmt_coord(x) << "\" y1=\"" << fmt_coord(y1) << "\" x2=\""
            << fmt_coord(x) << "\" y2=\"" << fmt_coord(y1 + 5.0)
            << "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
        out << "<text x=\"" << fmt_coord(x) << "\" y=\"" << fmt_coord(y1 + 20.0)
            << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" << n
            << "</text>\n";
    }
    for (int tick = 0; tick <= 4; ++tick) {
        const double v = y_max * double(tick) / 4.0;
        const double y = y_of(v);
        out << "<line x1=\"" << fmt_coord(x0 - 5.0) << "\" y1=\"" << fmt_coord(y) << "\" x2=\""
            << fmt_coord(x0) << "\" y2=\"" << fmt_coord(y)
            << "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
        out << "<text x=\"" << fmt_coord(x0 - 9.0) << "\" y=\"" << fmt_coord(y + 4.0)
            << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">"
            << fmt_short(v) << "</text>\n";
    }
    out << "<text x=\"" << fmt_coord((x0 + x1) / 2.0) << "\" y=\"" << fmt_coord(height - 16.0)
        << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">n</text>\n";
    out << "<text x=\"20\" y=\"" << fmt_coord((y0 + y1) / 2.0)
        << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" "
           "transform=\"rotate(-90 20 "
        << fmt_coord((y0 + y1) / 2.0) << ")\">exceedance fraction</text>\n";

    // threshold curve
    if (!sizes.empty()) {
        std::string pts;
        for (std::size_t i = 0; i < sizes.size(); ++i) {
            if (!pts.empty()) pts += " ";
            pts += fmt_coord(x_of(double(sizes[i]))) + "," + fmt_coord(y_of(xi_vals[i]));
        }
        out << "<polyline fill=\"none\" stroke=\"#555555\" stroke-width=\"1.5\" "
               "stroke-dasharray=\"6 4\" points=\""
            << pts << "\"/>\n";
    }

    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        const char* color = kPalette[mi % kPaletteSize];
        std::string pts;
        std::string dots;
        for (int n : sizes) {
            for (const ResultRow& r : table.rows) {
                if (r.method != methods[mi] || r.n != n || r.aborted || r.f_den <= 0) continue;
                const double x = x_of(double(n));
                const double y = y_of(double(r.f_num) / double(r.f_den));
                if (!pts.empty()) pts += " ";
                pts += fmt_coord(x) + "," + fmt_coord(y);
                dots += "<circle cx=\"" + fmt_coord(x) + "\" cy=\"" + fmt_coord(y) +
                        "\" r=\"3\" fill=\"" + color + "\"/>\n";
            }
        }
        if (!pts.empty())
            out << "<polyline fill=\"none\" stroke=\"" << color
                << "\" stroke-width=\"2\" points=\"" << pts << "\"/>\n";
        out << dots;
    }

    // legend
    double ly = y0 + 8.0;
    const double lx = x1 + 24.0;
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        const char* color = kPalette[mi % kPaletteSize];
        out << "<line x1=\"" << fmt_coord(lx) << "\" y1=\"" << fmt_coord(ly) << "\" x2=\""
            << fmt_coord(lx + 26.0) << "\" y2=\"" << fmt_coord(ly) << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << fmt_coord(lx + 32.0) << "\" y=\"" << fmt_coord(ly + 4.0)
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << methods[mi] << "</text>\n";
        ly += 20.0;
    }
    out << "<line x1=\"" << fmt_coord(lx) << "\" y1=\"" << fmt_coord(ly) << "\" x2=\""
        << fmt_coord(lx + 26.0) << "\" y2=\"" << fmt_coord(ly)
        << "\" stroke=\"#555555\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\"/>\n";
    out << "<text x=\"" << fmt_coord(lx + 32.0) << "\" y=\"" << fmt_coord(ly + 4.0)
        << "\" font-family=\"sans-serif\" font-size=\"12\">threshold (ln n)^" << "beta"
        << "/rate</text>\n";
    out << "</svg>\n";
}

void emit_svg(const ResultTable& table, const ThresholdCurve& threshold,
              const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("emit_svg: cannot open '" + path + "' for writing");
    emit_svg(table, threshold, out);
    out.flush();
    if (!out) throw io_error("emit_svg: write to '" + path + "' failed");
}

namespace {

nlohmann::ordered_json config_json(const BenchConfig& config) {
    nlohmann::ordered_json j;
    j["label"] = config.label;
    nlohmann::ordered_json sc;
    sc["regime"] = regime_name(config.scenario.regime);
    sc["delta1"] = config.scenario.delta1;
    sc["delta2"] = config.scenario.delta2;
    sc["c1"] = config.scenario.c1;
    sc["c2"] = config.scenario.c2;
    sc["W"] = config.scenario.W;
    sc["invK"] = config.scenario.invK;
    sc["M"] = config.scenario.M;
    sc["burn_in"] = config.scenario.burn_in;
    j["scenario"] = sc;
    nlohmann::ordered_json tr;
    if (config.use_pins) {
        tr["rule"] = "pinned";
        nlohmann::ordered_json pins;
        for (const auto& [n, k] : config.pins) pins[std::to_string(n)] = k;
        tr["pins"] = pins;
    } else {
        switch (config.rule.kind) {
            case TruncationKind::LogCeil: tr["rule"] = "log_ceil"; break;
            case TruncationKind::PowerRate: tr["rule"] = "power_rate"; break;
            case TruncationKind::RootAlpha: tr["rule"] = "root_alpha"; break;
        }
    }
    tr["e_prime"] = config.rule.e_prime;
    tr["alpha"] = config.rule.alpha;
    tr["offset"] = config.rule.offset;
    j["truncation"] = tr;
    j["threshold"] = {{"beta", config.threshold.beta},
                      {"rate", config.threshold.rate == RateKind::Half ? "half" : "third"}};
    j["grid"] = {{"a", config.grid_a}, {"b", config.grid_b}, {"step", config.grid_step}};
    nlohmann::ordered_json methods = nlohmann::ordered_json::array();
    for (const auto& m : config.methods) {
        nlohmann::ordered_json mj;
        mj["label"] = m.label;
        mj["kind"] = kind_name(m.kind);
        switch (m.kind) {
            case MethodKind::Guillas:
                mj["beta_u"] = m.beta_u;
                break;
            case MethodKind::Kernel:
                mj["h"] = m.h;
                mj["smooth_penalty"] = m.smooth_penalty;
                break;
            case MethodKind::Besse:
                mj["ell"] = m.ell;
                mj["q"] = m.q;
                break;
            case MethodKind::Wavelet:
                mj["family"] =
                    m.wavelet.family == WaveletFamily::Haar ? "haar" : "daubechies4";
                mj["j0"] = m.wavelet.j0;
                mj["j_max"] = m.wavelet.J;
                mj["lambda"] = m.wavelet.lambda;
                mj["m_spec"] = m.wavelet.M_spec;
                break;
            default:
                break;
        }
        methods.push_back(mj);
    }
    j["methods"] = methods;
    j["sample_sizes"] = config.sample_sizes;
    j["replications"] = config.replications;
    j["seed_base"] = config.seed_base;
    j["workers"] = config.workers;
    j["out_dir"] = config.out_dir;
    return j;
}

}  // namespace

void emit_metadata(const BenchConfig& config, const RunMeta& meta, std::ostream& out) {
    nlohmann::ordered_json j;
    j["tool"] = {{"name", "bench"}, {"version", "1.0.0"}};
    j["rng"] = {{"engine", "splitmix64 + std::normal_distribution"},
                {"seed_formula", kSeedFormula},
                {"seed_base", config.seed_base}};
    j["versions"] = {{"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                   std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                   std::to_string(EIGEN_MINOR_VERSION)},
                     {"cpp_standard", long(__cplusplus)}};
    j["config"] = config_json(config);
    nlohmann::ordered_json levels = nlohmann::ordered_json::array();
    for (const auto& level : meta.levels) {
        nlohmann::ordered_json lj;
        lj["n"] = level.n;
        lj["k_n"] = level.k_n;
        lj["n_c_kn_pow4"] = level.n_c_kn_pow4;
        if (level.has_diagnostics) {
            lj["sup_inv_gap"] = level.diagnostics.sup_inv_gap;
            lj["kn_c_kn"] = level.diagnostics.kn_c_kn;
            lj["a_sum"] = level.diagnostics.a_sum;
            lj["sup_inv_gap_scaled"] = level.diagnostics.sup_inv_gap_scaled;
            lj["a_sum_scaled"] = level.diagnostics.a_sum_scaled;
        }
        levels.push_back(lj);
    }
    j["levels"] = levels;
    nlohmann::ordered_json cells = nlohmann::ordered_json::array();
    for (const auto& cell : meta.cells) {
        nlohmann::ordered_json cj;
        cj["method"] = cell.method;
        cj["n"] = cell.n;
        cj["k_n"] = cell.k_n;
        cj["wall_ms"] = cell.wall_ms;
        cj["failures"] = cell.failures;
        if (cell.e_num >= 0) cj["bound_exceedances"] = cell.e_num;
        cells.push_back(cj);
    }
    j["cells"] = cells;
    out << j.dump(2) << "\n";
}

void emit_metadata(const BenchConfig& config, const RunMeta& meta, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("emit_metadata: cannot open '" + path + "' for writing");
    emit_metadata(config, meta, out);
    out.flush();
    if (!out) throw io_error("emit_metadata: write to '" + path + "' failed");
}

namespace {

struct IniEntry {
    std::string section, key, value;
    int line = 0;
};

std::vector<IniEntry> read_ini(std::istream& in) {
    std::vector<IniEntry> entries;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string text = trim(line);
        if (text.empty() || text[0] == '#' || text[0] == ';') continue;
        if (text.front() == '[') {
            if (text.back() != ']')
                throw invalid_argument_error("config line " + std::to_string(lineno) +
                                             ": unterminated section header");
            section = trim(text.substr(1, text.size() - 2));
            if (section.empty())
                throw invalid_argument_error("config line " + std::to_string(lineno) +
                                             ": empty section name");
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            throw invalid_argument_error("config line " + std::to_string(lineno) +
                                         ": expected key = value");
        if (section.empty())
            throw invalid_argument_error("config line " + std::to_string(lineno) +
                                         ": key outside any [section]");
        IniEntry e;
        e.section = section;
        e.key = trim(text.substr(0, eq));
        e.value = trim(text.substr(eq + 1));
        e.line = lineno;
        if (e.key.empty())
            throw invalid_argument_error("config line " + std::to_string(lineno) +
                                         ": empty key");
        entries.push_back(std::move(e));
    }
    return entries;
}

[[noreturn]] void bad_entry(const IniEntry& e, const std::string& why) {
    throw invalid_argument_error("config line " + std::to_string(e.line) + " ([" + e.section +
                                 "] " + e.key + "): " + why);
}

double entry_double(const IniEntry& e) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument(e.value);
        return v;
    } catch (const std::exception&) {
        bad_entry(e, "bad number '" + e.value + "'");
    }
}

std::int64_t entry_int(const IniEntry& e) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument(e.value);
        return v;
    } catch (const std::exception&) {
        bad_entry(e, "bad integer '" + e.value + "'");
    }
}

std::uint64_t entry_u64(const IniEntry& e) {
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument(e.value);
        return v;
    } catch (const std::exception&) {
        bad_entry(e, "bad unsigned integer '" + e.value + "'");
    }
}

std::vector<std::string> entry_list(const IniEntry& e) {
    std::vector<std::string> items;
    for (const std::string& piece : split(e.value, ',')) {
        const std::string item = trim(piece);
        if (item.empty()) bad_entry(e, "empty list item");
        items.push_back(item);
    }
    return items;
}

MethodSpec* find_method(std::vector<MethodSpec>& methods, const std::string& label) {
    for (auto& m : methods)
        if (m.label == label) return &m;
    return nullptr;
}

}  // namespace

BenchConfig parse_config(std::istream& in) {
    const std::vector<IniEntry> entries = read_ini(in);

    // catalog prefill comes first so every later key can override it
    BenchConfig cfg;
    bool desk = true;
    const IniEntry* id_entry = nullptr;
    for (const auto& e : entries) {
        if (e.section == "scenario" && e.key == "scale") {
            if (e.value == "desk")
                desk = true;
            else if (e.value == "full")
                desk = false;
            else
                bad_entry(e, "expected desk or full");
        }
        if (e.section == "scenario" && e.key == "id") id_entry = &e;
    }
    if (id_entry) cfg = scenario_config(int(entry_int(*id_entry)), desk);

    // an explicit method list replaces the prefilled one wholesale
    std::map<std::string, bool> kind_known;
    for (const auto& m : cfg.methods) kind_known[m.label] = true;
    for (const auto& e : entries) {
        if (e.section != "methods") continue;
        if (e.key != "list") bad_entry(e, "unknown key (only 'list' is accepted)");
        cfg.methods.clear();
        kind_known.clear();
        for (const std::string& label : entry_list(e)) {
            MethodSpec m;
            m.label = label;
            const auto kind = resolve_kind(label);
            if (kind) m.kind = *kind;
            kind_known[label] = kind.has_value();
            cfg.methods.push_back(std::move(m));
        }
    }

    for (const auto& e : entries) {
        if (e.section == "bench") {
            if (e.key == "label")
                cfg.label = e.value;
            else if (e.key == "sample_sizes") {
                cfg.sample_sizes.clear();
                for (const auto& item : entry_list(e))
                    cfg.sample_sizes.push_back(int(entry_int({e.section, e.key, item, e.line})));
            } else if (e.key == "replications")
                cfg.replications = int(entry_int(e));
            else if (e.key == "seed_base")
                cfg.seed_base = entry_u64(e);
            else if (e.key == "workers")
                cfg.workers = int(entry_int(e));
            else if (e.key == "out_dir")
                cfg.out_dir = e.value;
            else
                bad_entry(e, "unknown key");
        } else if (e.section == "scenario") {
            if (e.key == "id" || e.key == "scale") continue;  // consumed by the prefill
            if (e.key == "regime") {
                if (e.value == "diagonal")
                    cfg.scenario.regime = Regime::Diagonal;
                else if (e.value == "pseudo_diagonal")
                    cfg.scenario.regime = Regime::PseudoDiagonal;
                else if (e.value == "non_diagonal")
                    cfg.scenario.regime = Regime::NonDiagonal;
                else
                    bad_entry(e, "expected diagonal, pseudo_diagonal, or non_diagonal");
            } else if (e.key == "delta1")
                cfg.scenario.delta1 = entry_double(e);
            else if (e.key == "delta2")
                cfg.scenario.delta2 = entry_double(e);
            else if (e.key == "c1")
                cfg.scenario.c1 = entry_double(e);
            else if (e.key == "c2")
                cfg.scenario.c2 = entry_double(e);
            else if (e.key == "W")
                cfg.scenario.W = entry_double(e);
            else if (e.key == "invK")
                cfg.scenario.invK = entry_double(e);
            else if (e.key == "M")
                cfg.scenario.M = int(entry_int(e));
            else if (e.key == "burn_in")
                cfg.scenario.burn_in = int(entry_int(e));
            else
                bad_entry(e, "unknown key");
        } else if (e.section == "truncation") {
            if (e.key == "rule") {
                if (e.value == "log_ceil") {
                    cfg.rule.kind = TruncationKind::LogCeil;
                    cfg.use_pins = false;
                } else if (e.value == "power_rate") {
                    cfg.rule.kind = TruncationKind::PowerRate;
                    cfg.use_pins = false;
                } else if (e.value == "root_alpha") {
                    cfg.rule.kind = TruncationKind::RootAlpha;
                    cfg.use_pins = false;
                } else if (e.value == "pinned") {
                    cfg.use_pins = true;
                } else
                    bad_entry(e, "expected log_ceil, power_rate, root_alpha, or pinned");
            } else if (e.key == "e_prime")
                cfg.rule.e_prime = entry_double(e);
            else if (e.key == "alpha")
                cfg.rule.alpha = entry_double(e);
            else if (e.key == "offset")
                cfg.rule.offset = int(entry_int(e));
            else if (e.key == "pins") {
                cfg.pins.clear();
                cfg.use_pins = true;
                for (const std::string& item : entry_list(e)) {
                    const auto colon = item.find(':');
                    if (colon == std::string::npos) bad_entry(e, "pins need the form n:k");
                    const IniEntry n_part{e.section, e.key, trim(item.substr(0, colon)), e.line};
                    const IniEntry k_part{e.section, e.key, trim(item.substr(colon + 1)), e.line};
                    cfg.pins[int(entry_int(n_part))] = int(entry_int(k_part));
                }
            } else
                bad_entry(e, "unknown key");
        } else if (e.section == "threshold") {
            if (e.key == "beta")
                cfg.threshold.beta = entry_double(e);
            else if (e.key == "rate") {
                if (e.value == "half")
                    cfg.threshold.rate = RateKind::Half;
                else if (e.value == "third")
                    cfg.threshold.rate = RateKind::Third;
                else
                    bad_entry(e, "expected half or third");
            } else
                bad_entry(e, "unknown key");
        } else if (e.section == "grid") {
            if (e.key == "a")
                cfg.grid_a = entry_double(e);
            else if (e.key == "b")
                cfg.grid_b = entry_double(e);
            else if (e.key == "step")
                cfg.grid_step = entry_double(e);
            else
                bad_entry(e, "unknown key");
        } else if (e.section == "methods") {
            continue;  // handled above
        } else if (e.section.rfind("method.", 0) == 0) {
            const std::string label = e.section.substr(7);
            MethodSpec* m = find_method(cfg.methods, label);
            if (!m) bad_entry(e, "method '" + label + "' is not in the methods list");
            if (e.key == "kind") {
                const auto kind = resolve_kind(e.value);
                if (!kind) bad_entry(e, "unknown method kind '" + e.value + "'");
                m->kind = *kind;
                kind_known[label] = true;
            } else if (e.key == "beta_u")
                m->beta_u = entry_double(e);
            else if (e.key == "h")
                m->h = entry_double(e);
            else if (e.key == "smooth_penalty")
                m->smooth_penalty = entry_double(e);
            else if (e.key == "ell")
                m->ell = entry_double(e);
            else if (e.key == "q")
                m->q = int(entry_int(e));
            else if (e.key == "family") {
                if (e.value == "haar")
                    m->wavelet.family = WaveletFamily::Haar;
                else if (e.value == "d4" || e.value == "daubechies4")
                    m->wavelet.family = WaveletFamily::Daubechies4;
                else
                    bad_entry(e, "expected haar or daubechies4");
            } else if (e.key == "j0")
                m->wavelet.j0 = int(entry_int(e));
            else if (e.key == "j_max")
                m->wavelet.J = int(entry_int(e));
            else if (e.key == "lambda")
                m->wavelet.lambda = entry_double(e);
            else if (e.key == "m_spec")
                m->wavelet.M_spec = int(entry_int(e));
            else
                bad_entry(e, "unknown key");
        } else {
            bad_entry(e, "unknown section");
        }
    }

    for (const auto& m : cfg.methods) {
        const auto known = kind_known.find(m.label);
        if (known == kind_known.end() || !known->second)
            throw invalid_argument_error("config: method '" + m.label +
                                         "' needs an explicit kind");
    }
    return cfg;
}

BenchConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("parse_config_file: cannot open '" + path + "'");
    return parse_config(in);
}

}  // namespace arh::bench
