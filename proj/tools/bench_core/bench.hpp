// Benchmark orchestration: the published scenario catalog, config parsing,
// deterministic seeded parallel sweeps, and CSV / SVG / JSON emission.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <arh/componentwise.hpp>
#include <arh/metrics.hpp>
#include <arh/scenario.hpp>
#include <arh/smoothing.hpp>

namespace arh::bench {

/// Estimator/predictor families the harness can run.
enum class MethodKind { Diag, Bosq, Guillas, Wavelet, Besse, Kernel };

/// Lowercase identifier of a method kind ("diag", "bosq", ...).
const char* kind_name(MethodKind kind);

/// One configured method: a kind, a unique display label, and parameters.
/// Fields irrelevant to the kind are ignored.
struct MethodSpec {
    MethodKind kind = MethodKind::Bosq;
    std::string label = "bosq";
    double beta_u = 0.9;           ///< guillas: regularizer scale in (0, 1)
    double h = 0.15;               ///< kernel: bandwidth, > 0
    double smooth_penalty = 1e-3;  ///< kernel: pre-smoothing penalty, >= 0
    double ell = 1e-3;             ///< besse: roughness penalty, >= 0
    int q = 10;                    ///< besse: basis dimension, >= 1
    WaveletConfig wavelet;         ///< wavelet: transform and shrinkage settings
};

/// Full description of one benchmark sweep.
struct BenchConfig {
    std::string label = "custom";
    ScenarioSpec<double> scenario;
    TruncationRule rule;
    bool use_pins = false;         ///< take k_n from `pins` instead of `rule`
    std::map<int, int> pins;       ///< sample size -> pinned truncation level
    ThresholdCurve threshold;
    std::vector<MethodSpec> methods;
    std::vector<int> sample_sizes;
    int replications = 100;
    std::uint64_t seed_base = 2026;
    int workers = 1;
    std::string out_dir = "bench-out";
    double grid_a = 0.0;
    double grid_b = 4.0;
    double grid_step = 0.01;
};

/// Validates the cross-field invariants of a config, including that the
/// scenario itself builds valid operators.
///
/// @throws invalid_argument_error (or a scenario construction error) with a
///         message naming the offending field.
void check_config(const BenchConfig& config);

/// Truncation level used at sample size n: the pinned value when pins are
/// active, the evaluated rule otherwise. Clamped to [1, n - 1].
int level_for(const BenchConfig& config, int n);

/// One aggregated cell of the sweep: a (sample size, method) pair.
///
/// An aborted cell (more than half of the replications failed) keeps its
/// failure count and denominator but carries NaN error statistics.
struct ResultRow {
    std::string scenario;
    std::string method;
    int n = 0;
    int k_n = 0;
    std::int64_t f_num = 0;  ///< successful replications whose error exceeded the threshold
    std::int64_t f_den = 0;  ///< total replications
    double mean_err = std::numeric_limits<double>::quiet_NaN();
    double median_err = std::numeric_limits<double>::quiet_NaN();
    double mean_ub = std::numeric_limits<double>::quiet_NaN();  ///< diagonal method only
    std::int64_t failures = 0;
    double wall_ms = 0.0;  ///< pinned to zero in CSV; real timings live in metadata
    bool aborted = false;
};

struct ResultTable {
    std::vector<ResultRow> rows;
};

/// Per-cell companion data that is either non-deterministic (timings) or
/// supplementary (consistency-bound exceedances).
struct CellMeta {
    std::string method;
    int n = 0;
    int k_n = 0;
    double wall_ms = 0.0;
    std::int64_t failures = 0;
    std::int64_t e_num = -1;  ///< bound exceedances; -1 when not applicable
};

/// Run-level companion data emitted to the metadata file.
struct RunMeta {
    /// Spectral diagnostics of the truncation level at one sample size.
    struct LevelInfo {
        int n = 0;
        int k_n = 0;
        double n_c_kn_pow4 = 0.0;  ///< n times the k_n-th true eigenvalue to the 4th power
        TruncationDiagnostics diagnostics;
        bool has_diagnostics = false;
    };
    std::vector<LevelInfo> levels;
    std::vector<CellMeta> cells;
};

/// Runs the sweep: for every sample size and replication, simulates one
/// path with a seed derived from (seed_base, n, replication), fits every
/// configured method, and aggregates error statistics per cell.
///
/// Output is deterministic for a fixed config regardless of worker count.
/// A replication that fails with a library error counts into `failures`;
/// a cell with more than 50% failures is aborted (NaN statistics).
ResultTable run(const BenchConfig& config, RunMeta* meta = nullptr);

/// NaN-aware equality of tables; wall time is ignored, as in the CSV.
bool same_table(const ResultTable& a, const ResultTable& b);

/// Writes the table as CSV with the fixed header
/// scenario,method,n,k_n,f_num,f_den,mean_err,median_err,mean_ub,failures,wall_ms
/// using round-trip-exact floating-point formatting, LF line endings, and a
/// wall_ms column pinned to 0. Aborted cells print nan statistics.
void emit_csv(const ResultTable& table, std::ostream& out);

/// @throws io_error when the file cannot be created.
void emit_csv(const ResultTable& table, const std::string& path);

/// Reads a table written by emit_csv; the round trip is exact.
///
/// @throws io_error on a malformed header or row.
ResultTable read_csv(std::istream& in);

/// @throws io_error when the file cannot be opened.
ResultTable read_csv(const std::string& path);

/// Writes a static SVG line chart of the exceedance fraction versus sample
/// size, one polyline per method, plus the threshold curve.
void emit_svg(const ResultTable& table, const ThresholdCurve& threshold, std::ostream& out);
void emit_svg(const ResultTable& table, const ThresholdCurve& threshold, const std::string& path);

/// Writes run metadata as JSON: RNG engine and seed derivation, library
/// versions, the resolved config, per-level spectral diagnostics, and
/// per-cell timings / failure counts / bound exceedances.
void emit_metadata(const BenchConfig& config, const RunMeta& meta, std::ostream& out);
void emit_metadata(const BenchConfig& config, const RunMeta& meta, const std::string& path);

/// One published scenario with its pinned parameters.
struct CatalogEntry {
    int id = 0;
    Regime regime = Regime::Diagonal;
    double delta1 = 1.5;
    double c1 = 1.0;
    TruncationRule rule;
    ThresholdCurve threshold;
    std::vector<MethodKind> methods;  ///< Kernel listed once per bandwidth
    std::vector<double> kernel_h;     ///< bandwidths, consumed in order
    std::vector<int> full_sizes;
    std::vector<int> desk_sizes;
};

/// The 24 published scenarios.
const std::vector<CatalogEntry>& catalog();

/// Materializes catalog entry `id` as a runnable config. Desk scale keeps
/// the derived truncation rule and reduced sizes/replications; full scale
/// uses the published sample sizes and pins the published levels.
///
/// @throws invalid_argument_error for an unknown id.
BenchConfig scenario_config(int id, bool desk = true);

/// Human-readable catalog listing, one line per scenario.
std::string list_scenarios();

/// Parses the INI-style config format (see README): `[section]` headers,
/// `key = value` pairs, full-line `#` comments, comma-separated lists.
/// `[scenario] id = N` prefills from the catalog (`scale = full|desk`);
/// any explicit key overrides the prefill. Unknown keys are rejected.
///
/// @throws invalid_argument_error on any syntax or schema violation.
BenchConfig parse_config(std::istream& in);

/// @throws io_error when the file cannot be opened.
BenchConfig parse_config_file(const std::string& path);

}  // namespace arh::bench
