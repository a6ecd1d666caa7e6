#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "oscillab/broadnorm.hpp"
#include "oscillab/partitioning.hpp"

namespace osc {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// One verdict. pass is derived from measured, relation and the reference bound(s) only.
struct ReportRow {
  std::string experiment;
  std::string metric;
  std::vector<std::pair<std::string, std::string>> parameters;
  double measured = kNaN;
  std::string relation;  // "<=", "<", ">=", ">", "==", "in" (closed interval)
  double reference = kNaN;
  double reference_upper = kNaN;  // only for "in"
  bool pass = false;

  bool operator==(const ReportRow&) const = default;
};

bool verdict(double measured, const std::string& relation, double reference,
             double reference_upper = kNaN);
ReportRow make_row(std::string experiment, std::string metric,
                   std::vector<std::pair<std::string, std::string>> parameters, double measured,
                   std::string relation, double reference, double reference_upper = kNaN);
std::string fmt_double(double v);  // %.10e

std::string to_csv(const std::vector<ReportRow>& rows);
std::string to_json(const std::vector<ReportRow>& rows);
std::vector<ReportRow> rows_from_json(const std::string& text);
void write_file(const std::string& path, const std::string& content);
void emit(const std::vector<ReportRow>& rows, const std::string& format, const std::string& path);
// Python script that reads the CSV and draws measured against reference per metric.
std::string plot_script(const std::string& csv_path);
void emit_plotscript(const std::string& csv_path, const std::string& script_path);

struct ExperimentConfig {
  std::string experiment;
  int n = 2;
  double lambda = 4096;
  double r = 256;
  double rho = 64;
  double K = 8;
  int k = 2;
  int A = 1;
  double p = 4;
  double alpha = kNaN;  // knapp: unset means critical - 0.2 and critical + 0.3
  double delta = 0.1;
  double c_n = 4;
  double epsilon = 0.01;
  int grid = 1024;
  int points = 100;
  int samples = 1000;
  int instances = 100;
  int d = 4;
  double v_radius = 0;  // 0: experiment default
  std::string variety = "hyperplane";
  std::uint64_t seed = 1;
  Vec scales;                                  // knapp cap widths
  std::vector<std::pair<double, double>> pairs;  // transequi (r, rho)
  std::vector<int> a_values;                   // broad-norm A family
  std::string out_csv, out_json, out_plot, out_data;

  void validate() const;
};

ExperimentConfig default_config(const std::string& experiment);
// TOML or JSON (by extension, else by first character); unknown keys are rejected.
void load_config_file(ExperimentConfig& cfg, const std::string& path);
void set_option(ExperimentConfig& cfg, const std::string& key, const std::string& value);
std::vector<std::string> config_keys();

// Random smooth input: bump on [0.05, 0.95]^{n-1} times a random trigonometric polynomial.
GridFunction random_smooth(int dim, int nodes, CounterRng rng, int modes = 4);

std::optional<double> knapp_ratio(const GridFunction& f, double alpha, double p, int subsamples);
GridFunction knapp_input(int n, int N, double L, double delta);

std::vector<ReportRow> run_knapp(const ExperimentConfig& cfg);
std::vector<ReportRow> run_wavepacket_suite(const ExperimentConfig& cfg);
std::vector<ReportRow> run_transverse_equidistribution(const ExperimentConfig& cfg);
std::vector<ReportRow> run_transverse_equidistribution(const ExperimentConfig& cfg,
                                                       const Variety& Z);
std::vector<ReportRow> run_parabolic_rescale(const ExperimentConfig& cfg);
std::vector<ReportRow> run_decoupling_scan(const ExperimentConfig& cfg);
std::vector<ReportRow> run_partition(const ExperimentConfig& cfg);
std::vector<ReportRow> run_exponents(const ExperimentConfig& cfg);

// Lemma-level property checks shared by the acceptance binary.
std::vector<ReportRow> check_gauss_map(const ExperimentConfig& cfg);
std::vector<ReportRow> check_hessian_det(const ExperimentConfig& cfg);
std::vector<ReportRow> check_phi_spectra(const ExperimentConfig& cfg);
std::vector<ReportRow> check_l2_proxy(const ExperimentConfig& cfg);
std::vector<ReportRow> check_broad_norm(const ExperimentConfig& cfg);

std::vector<ReportRow> run_experiment(const ExperimentConfig& cfg);

// Serialised artifacts.
std::string packets_json(const PacketSet& set, double delta);
std::string variety_json(const Variety& V);
Variety variety_from_json(const std::string& text);
std::string partition_json(const Partition& part);
std::string exponent_tables_json(int n_max);

}  // namespace osc
