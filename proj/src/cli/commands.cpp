#include "dzo/cli/commands.hpp"

#include <algorithm>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <boost/version.hpp>
#include <Eigen/Core>

#include "dzo/cli/config.hpp"
#include "dzo/metrics.hpp"
#include "dzo/optimizer.hpp"
#include "dzo/parallel.hpp"

namespace dzo::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string read_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({"cannot read config file '" + path + "'"});
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw Error(ErrorKind::Io, "cannot create output directory '" + dir + "'");
  }
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
  out << content;
  out.flush();
  if (!out) throw Error(ErrorKind::Io, "write to '" + path.string() + "' failed");
}

json versions() {
  return {{"dzo", kVersion},
          {"compiler", __VERSION__},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                        "." + std::to_string(EIGEN_MINOR_VERSION)},
          {"boost", BOOST_LIB_VERSION}};
}

std::string final_summary(const Trace& tr) {
  if (tr.rows.empty()) return "rows=0";
  const TraceRow& r = tr.rows.back();
  return "rows=" + std::to_string(tr.rows.size()) + " t=" + std::to_string(r.t) +
         " f_mean_err=" + format_double(r.f_mean_err) + " f_avg_err=" + format_double(r.f_avg_err) +
         " consensus_e=" + format_double(r.consensus_e);
}

}  // namespace

int cmd_run(const std::string& config_path, const std::string& out_dir, std::ostream& out) {
  const ExperimentConfig cfg = parse_config(read_config_file(config_path));
  const RunConfig rc = build_run_config(cfg, cfg.seed);
  const Trace trace = run(rc);
  ensure_dir(out_dir);
  write_file(fs::path(out_dir) / "trace.csv", trace_to_csv(trace));
  json manifest = {{"config_hash", hash_hex(rc.config_hash)},
                   {"seed", cfg.seed},
                   {"rows", trace.rows.size()},
                   {"trace", "trace.csv"},
                   {"versions", versions()},
                   {"config", cfg.canonical}};
  write_file(fs::path(out_dir) / "manifest.json", manifest.dump(2) + "\n");
  out << "run config_hash=" << hash_hex(rc.config_hash) << " seed=" << cfg.seed << ' '
      << final_summary(trace) << '\n';
  return kOk;
}

int cmd_sweep(const std::string& config_path, std::optional<int> k, const std::string& out_dir,
              std::ostream& out) {
  const ExperimentConfig cfg = parse_config(read_config_file(config_path));
  const std::vector<std::uint64_t> seeds = sweep_seeds(cfg, k);
  {
    std::vector<std::uint64_t> sorted = seeds;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw ConfigError({"seeds: seeds must differ"});
    }
  }
  // Instance construction can be expensive (PL estimation); do it once.
  const RunConfig base = build_run_config(cfg, seeds.front());
  std::vector<Trace> traces(seeds.size());
  std::vector<std::exception_ptr> errors(seeds.size());
  const long long count = static_cast<long long>(seeds.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(sweep_threads())
  for (long long i = 0; i < count; ++i) {
    try {
      RunConfig rc = base;
      rc.seed = seeds[static_cast<std::size_t>(i)];
      traces[static_cast<std::size_t>(i)] = run(rc, Exec::Serial);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  ensure_dir(out_dir);
  json files = json::array();
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const std::string name = "trace_seed" + std::to_string(seeds[i]) + ".csv";
    write_file(fs::path(out_dir) / name, trace_to_csv(traces[i]));
    files.push_back({{"seed", seeds[i]}, {"trace", name}});
  }
  const AggregateTrace agg = aggregate_traces(traces);
  std::ostringstream a;
  write_aggregate_csv(a, agg);
  write_file(fs::path(out_dir) / "aggregate.csv", a.str());
  json manifest = {{"config_hash", hash_hex(base.config_hash)},
                   {"seeds", seeds},
                   {"runs", files},
                   {"aggregate", "aggregate.csv"},
                   {"versions", versions()},
                   {"config", cfg.canonical}};
  write_file(fs::path(out_dir) / "manifest.json", manifest.dump(2) + "\n");
  out << "sweep config_hash=" << hash_hex(base.config_hash) << " seeds=" << seeds.size() << ' '
      << final_summary(agg.mean_trace()) << '\n';
  return kOk;
}

int cmd_validate(const std::string& suite, const ValidateOptions& opt, std::ostream& out) {
  if (suite == "kernel") return report_checks(suite, validate_kernel(opt), out);
  if (suite == "mixing") return report_checks(suite, validate_mixing(opt), out);
  if (suite == "estimator") return report_checks(suite, validate_estimator(opt), out);
  if (suite == "hard") return report_checks(suite, validate_hard(opt), out);
  throw ConfigError({"validate: unknown suite '" + suite + "' (expected kernel, mixing, estimator, hard)"});
}

int cmd_ratefit(const std::string& csv_path, const std::string& column, double tail, std::ostream& out) {
  if (!(tail > 0.0 && tail <= 1.0)) throw ConfigError({"--tail must lie in (0, 1]"});
  std::ifstream in(csv_path);
  if (!in) throw Error(ErrorKind::Io, "cannot read '" + csv_path + "'");
  const CsvTable table = read_csv_table(in);
  table.column("t");
  table.column(column);
  const RateFit fit = fit_rate(table.values("t"), table.values(column), tail);
  out << "ratefit column=" << column << " slope=" << format_double(fit.slope)
      << " intercept=" << format_double(fit.intercept) << " r_squared=" << format_double(fit.r_squared)
      << " t_first=" << fit.t_first << " t_last=" << fit.t_last << " points=" << fit.points << '\n';
  return kOk;
}

int cmd_hard_check(double beta, double alpha, double T, int d, std::ostream& out) {
  if (d < 1) throw ConfigError({"--d must be >= 1"});
  if (!(beta >= 2.0)) throw ConfigError({"--beta must be >= 2"});
  if (!(alpha > 0.0)) throw ConfigError({"--alpha must be positive"});
  if (!(T >= 1.0)) throw ConfigError({"--T must be >= 1"});
  const auto checks = hard_checks(beta, alpha, T, d, &out);
  return report_checks("hard", checks, out);
}

int guarded(const std::function<int()>& body, std::ostream& err) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error [" << to_string(e.kind()) << "]: " << e.what() << '\n';
    return e.kind() == ErrorKind::Config || e.kind() == ErrorKind::Input ? kUsage : kRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntime;
  }
}

}  // namespace dzo::cli
