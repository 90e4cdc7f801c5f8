#include "dzo/metrics.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "dzo/error.hpp"

namespace dzo {

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view s, std::size_t line_no) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorKind::Input,
                "line " + std::to_string(line_no) + ": bad number '" + std::string(s) + "'");
  }
  return v;
}

std::uint64_t parse_time(std::string_view s, std::size_t line_no) {
  s = trim(s);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorKind::Input,
                "line " + std::to_string(line_no) + ": bad time index '" + std::string(s) + "'");
  }
  return v;
}

std::string header_line() {
  std::string h;
  for (std::size_t i = 0; i < kTraceColumns.size(); ++i) {
    if (i) h += ',';
    h += kTraceColumns[i];
  }
  return h;
}

}  // namespace

TraceColumn parse_trace_column(std::string_view name) {
  for (std::size_t i = 0; i < kTraceColumns.size(); ++i) {
    if (kTraceColumns[i] == name) return static_cast<TraceColumn>(i);
  }
  throw Error(ErrorKind::Input, "unknown trace column '" + std::string(name) + "'");
}

double column_value(const TraceRow& row, TraceColumn column) noexcept {
  switch (column) {
    case TraceColumn::T: return static_cast<double>(row.t);
    case TraceColumn::Eta: return row.eta;
    case TraceColumn::H: return row.h;
    case TraceColumn::FMeanErr: return row.f_mean_err;
    case TraceColumn::FAvgErr: return row.f_avg_err;
    case TraceColumn::CumRegret: return row.cum_regret;
    case TraceColumn::ConsensusE: return row.consensus_e;
  }
  return 0.0;
}

Eigen::VectorXd mean_iterate(const Eigen::MatrixXd& states) {
  if (states.cols() < 1) throw Error(ErrorKind::Shape, "need at least one agent");
  // Averaging offsets from the first agent keeps identical agents exact.
  const Eigen::VectorXd ref = states.col(0);
  return ref + (states.colwise() - ref).rowwise().mean();
}

double consensus_error(const Eigen::MatrixXd& states) {
  const Eigen::VectorXd bar = mean_iterate(states);
  return (states.colwise() - bar).squaredNorm();
}

void update_average(Eigen::VectorXd& x_hat, const Eigen::VectorXd& x_bar, std::uint64_t t) {
  if (t < 1) throw Error(ErrorKind::Parameter, "running average starts at t = 1");
  if (t == 1) {
    x_hat = x_bar;
    return;
  }
  x_hat += (x_bar - x_hat) / static_cast<double>(t);
}

RateFit fit_rate(std::span<const double> t, std::span<const double> values, double tail_fraction) {
  if (t.size() != values.size()) throw Error(ErrorKind::Shape, "t and values differ in length");
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) {
    throw Error(ErrorKind::Parameter, "tail fraction must lie in (0, 1]");
  }
  const std::size_t n = t.size();
  const auto window = static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(n)));
  std::vector<double> xs, ys;
  for (std::size_t i = n - std::min(window, n); i < n; ++i) {
    if (values[i] > 0.0 && t[i] > 0.0 && std::isfinite(values[i])) {
      xs.push_back(t[i]);
      ys.push_back(values[i]);
    }
  }
  if (xs.size() < 5) {
    throw Error(ErrorKind::Fit, "rate fit needs at least 5 positive values in the tail window, got " +
                                    std::to_string(xs.size()));
  }
  const LineFit line = fit_loglog(xs, ys);
  RateFit fit;
  fit.slope = line.slope;
  fit.intercept = line.intercept;
  fit.r_squared = line.r_squared;
  fit.points = line.points;
  fit.t_first = static_cast<std::uint64_t>(xs.front());
  fit.t_last = static_cast<std::uint64_t>(xs.back());
  return fit;
}

RateFit fit_rate(const Trace& trace, TraceColumn column, double tail_fraction) {
  std::vector<double> t, v;
  t.reserve(trace.rows.size());
  v.reserve(trace.rows.size());
  for (const TraceRow& row : trace.rows) {
    t.push_back(static_cast<double>(row.t));
    v.push_back(column_value(row, column));
  }
  return fit_rate(t, v, tail_fraction);
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
  out << header_line() << '\n';
  for (const TraceRow& r : trace.rows) {
    out << r.t << ',' << format_double(r.eta) << ',' << format_double(r.h) << ','
        << format_double(r.f_mean_err) << ',' << format_double(r.f_avg_err) << ','
        << format_double(r.cum_regret) << ',' << format_double(r.consensus_e) << '\n';
  }
}

std::string trace_to_csv(const Trace& trace) {
  std::ostringstream s;
  write_trace_csv(s, trace);
  return s.str();
}

Trace parse_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != header_line()) {
    throw Error(ErrorKind::Input, "trace CSV must start with header '" + header_line() + "'");
  }
  Trace trace;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_commas(line);
    if (cells.size() != kTraceColumns.size()) {
      throw Error(ErrorKind::Input, "line " + std::to_string(line_no) + ": expected 7 fields");
    }
    TraceRow r;
    r.t = parse_time(cells[0], line_no);
    r.eta = parse_double(cells[1], line_no);
    r.h = parse_double(cells[2], line_no);
    r.f_mean_err = parse_double(cells[3], line_no);
    r.f_avg_err = parse_double(cells[4], line_no);
    r.cum_regret = parse_double(cells[5], line_no);
    r.consensus_e = parse_double(cells[6], line_no);
    trace.rows.push_back(r);
  }
  return trace;
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw Error(ErrorKind::Input, "no column '" + std::string(name) + "' in CSV");
}

std::vector<double> CsvTable::values(std::string_view name) const {
  const std::size_t c = column(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[c]);
  return out;
}

CsvTable read_csv_table(std::istream& in) {
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::Input, "empty CSV");
  for (std::string_view cell : split_commas(line)) table.header.emplace_back(trim(cell));
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_commas(line);
    if (cells.size() != table.header.size()) {
      throw Error(ErrorKind::Input, "line " + std::to_string(line_no) + ": expected " +
                                        std::to_string(table.header.size()) + " fields");
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (std::string_view c : cells) row.push_back(parse_double(c, line_no));
    table.rows.push_back(std::move(row));
  }
  return table;
}

AggregateTrace aggregate_traces(std::span<const Trace> traces) {
  if (traces.size() < 2) throw Error(ErrorKind::Parameter, "aggregation needs k >= 2 traces");
  const std::size_t rows = traces.front().rows.size();
  for (const Trace& tr : traces) {
    if (tr.rows.size() != rows) throw Error(ErrorKind::Shape, "traces have different t grids");
    for (std::size_t i = 0; i < rows; ++i) {
      if (tr.rows[i].t != traces.front().rows[i].t) {
        throw Error(ErrorKind::Shape, "traces have different t grids");
      }
    }
  }
  const double k = static_cast<double>(traces.size());
  AggregateTrace agg;
  agg.runs = traces.size();
  agg.rows.resize(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    AggregateRow& out = agg.rows[i];
    out.t = traces.front().rows[i].t;
    for (std::size_t c = 0; c < 6; ++c) {
      const auto col = static_cast<TraceColumn>(c + 1);
      double sum = 0.0;
      for (const Trace& tr : traces) sum += column_value(tr.rows[i], col);
      const double mean = sum / k;
      double ss = 0.0;
      for (const Trace& tr : traces) {
        const double dev = column_value(tr.rows[i], col) - mean;
        ss += dev * dev;
      }
      out.mean[c] = mean;
      out.stderr_[c] = std::sqrt(ss / (k - 1.0)) / std::sqrt(k);
    }
  }
  return agg;
}

Trace AggregateTrace::mean_trace() const {
  Trace tr;
  tr.rows.reserve(rows.size());
  for (const AggregateRow& a : rows) {
    tr.rows.push_back({a.t, a.mean[0], a.mean[1], a.mean[2], a.mean[3], a.mean[4], a.mean[5]});
  }
  return tr;
}

void write_aggregate_csv(std::ostream& out, const AggregateTrace& agg) {
  out << "t";
  for (std::size_t c = 1; c < kTraceColumns.size(); ++c) {
    out << ',' << kTraceColumns[c] << "_mean," << kTraceColumns[c] << "_stderr";
  }
  out << '\n';
  for (const AggregateRow& a : agg.rows) {
    out << a.t;
    for (std::size_t c = 0; c < 6; ++c) {
      out << ',' << format_double(a.mean[c]) << ',' << format_double(a.stderr_[c]);
    }
    out << '\n';
  }
}

}  // namespace dzo
