#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "dzo/stats.hpp"

namespace dzo {

/// One recorded time step. Values refer to the state after step t.
struct TraceRow {
  std::uint64_t t = 0;
  double eta = 0.0;
  double h = 0.0;
  double f_mean_err = 0.0;   // f(x_bar(t)) - f*
  double f_avg_err = 0.0;    // f(x_hat(t)) - f*
  double cum_regret = 0.0;   // sum_{s <= t} f(x_bar(s)) - f*
  double consensus_e = 0.0;  // sum_i ||x^i(t) - x_bar(t)||^2

  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

struct Trace {
  std::vector<TraceRow> rows;
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
};

enum class TraceColumn { T, Eta, H, FMeanErr, FAvgErr, CumRegret, ConsensusE };

inline constexpr std::array<std::string_view, 7> kTraceColumns = {
    "t", "eta", "h", "f_mean_err", "f_avg_err", "cum_regret", "consensus_e"};

TraceColumn parse_trace_column(std::string_view name);
double column_value(const TraceRow& row, TraceColumn column) noexcept;

/// States are stored one agent per column (d x n).
Eigen::VectorXd mean_iterate(const Eigen::MatrixXd& states);
double consensus_error(const Eigen::MatrixXd& states);

inline double update_regret(double acc, double f_mean_err) noexcept { return acc + f_mean_err; }

/// x_hat <- x_hat + (x_bar - x_hat) / t.
void update_average(Eigen::VectorXd& x_hat, const Eigen::VectorXd& x_bar, std::uint64_t t);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::uint64_t t_first = 0;  // fitted window
  std::uint64_t t_last = 0;
  std::size_t points = 0;
};

/// Log-log fit of value against t over the last ceil(tail_fraction * N)
/// records. Nonpositive values are dropped; fewer than five left is a Fit error.
RateFit fit_rate(std::span<const double> t, std::span<const double> values, double tail_fraction);
RateFit fit_rate(const Trace& trace, TraceColumn column, double tail_fraction);

/// Shortest round-trip decimal for a double.
std::string format_double(double v);

void write_trace_csv(std::ostream& out, const Trace& trace);
std::string trace_to_csv(const Trace& trace);
/// Expects exactly the trace header; throws Input on malformed content.
Trace parse_trace_csv(std::istream& in);

/// Any numeric CSV with a header row.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Index of a header column; throws Input when absent.
  std::size_t column(std::string_view name) const;
  std::vector<double> values(std::string_view name) const;
};

CsvTable read_csv_table(std::istream& in);

/// Per-t mean and standard error (sample SD / sqrt k) over k >= 2 traces that
/// share one t grid.
struct AggregateRow {
  std::uint64_t t = 0;
  std::array<double, 6> mean{};    // eta .. consensus_e
  std::array<double, 6> stderr_{};
};

struct AggregateTrace {
  std::vector<AggregateRow> rows;
  std::size_t runs = 0;

  /// The mean curve as a Trace, for rate fits.
  Trace mean_trace() const;
};

AggregateTrace aggregate_traces(std::span<const Trace> traces);
void write_aggregate_csv(std::ostream& out, const AggregateTrace& agg);

}  // namespace dzo
