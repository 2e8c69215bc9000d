#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "kcde/bandwidth.hpp"
#include "kcde/distributions.hpp"
#include "kcde/kernels.hpp"

#include "json.hpp"

namespace kcde {

struct NamedModel {
  std::string name;
  ParametricModel model;
};

/// The seven reference models: GAM1(1,30), GAM2(0.35,40), LGN(2,1.1),
/// GEV1(0.25,8,15), GEV2(0,18,45), GEV3(-0.25,30,100), WBL(15,0.7).
std::vector<NamedModel> default_models();

struct ExperimentConfig {
  std::vector<NamedModel> models = default_models();
  std::vector<std::size_t> sizes{50, 100, 200, 500, 1000};
  int replicates = 100;
  std::size_t test_points = 500;
  std::vector<Kernel> kernels{Kernel::bitriangular, Kernel::triweight,
                              Kernel::spherical,    Kernel::epanechnikov,
                              Kernel::uniform,      Kernel::gaussian};
  std::vector<BandwidthMethod> bandwidth_methods{
      BandwidthMethod::bgk, BandwidthMethod::normal_reference};
  std::uint64_t seed = 1;
  BgkConfig bgk{};

  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::ordered_json to_json() const;
};

/// One grid row: a (model, size, kernel, bandwidth method, replicate) cell
/// with the two mean square errors against the true CDF and their ratio.
/// mse_staircase depends only on (model, size, replicate).
struct ExperimentRow {
  std::string model;
  std::size_t n = 0;
  Kernel kernel = Kernel::bitriangular;
  BandwidthMethod bw_method = BandwidthMethod::bgk;
  int replicate = 0;
  double h = 0.0;
  double mse_kcde = 0.0;
  double mse_staircase = 0.0;
  double re = 0.0;
  bool bgk_fallback = false;
};

/// N_t uniform draws on [min(sample), max(sample)].
std::vector<double> generate_test_points(std::span<const double> sample,
                                         std::size_t n_t, std::uint64_t seed);

/// Mean of squared differences between two evaluable CDFs over the points.
double mse_between(const std::function<double(double)>& cdf_a,
                   const std::function<double(double)>& cdf_b,
                   std::span<const double> points);

/// Runs the full grid. Replicate work units are independent and seeded by
/// position, so the parallel and serial versions produce identical rows in
/// identical order.
std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config);
std::vector<ExperimentRow> run_experiment_serial(const ExperimentConfig& config);

std::string rows_to_csv(std::span<const ExperimentRow> rows);

/// Per-cell medians/quartiles over replicates, for boxplot-style summaries.
nlohmann::ordered_json summarize_experiment(std::span<const ExperimentRow> rows);

}  // namespace kcde
