#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "kcde/bandwidth.hpp"
#include "kcde/kernels.hpp"

#include "json.hpp"

namespace kcde {

/// How to resolve the bandwidth when fitting: the adaptive plug-in rule, the
/// normal reference rule, or a fixed user value.
struct BandwidthSpec {
  BandwidthMethod method = BandwidthMethod::bgk;
  double fixed_h = 0.0;
  BgkConfig bgk_config{};

  static BandwidthSpec bgk(const BgkConfig& cfg = {}) {
    return {BandwidthMethod::bgk, 0.0, cfg};
  }
  static BandwidthSpec normal_reference() {
    return {BandwidthMethod::normal_reference, 0.0, {}};
  }
  static BandwidthSpec fixed(double h);

  /// Accepts "bgk", "nrr", or a positive number.
  static BandwidthSpec parse(std::string_view text);
};

/// Kernel CDF estimate over a sorted sample: F(z) = (1/N) sum_i
/// step((z - z_i)/h), with an optional zero-boundary correction that clamps
/// the CDF to zero for negative arguments and leaves a probability jump at
/// zero.
class KcdeModel {
 public:
  static KcdeModel fit(std::span<const double> sample, Kernel kernel,
                       const BandwidthSpec& bw);

  double cdf(double z) const;
  double pdf(double z) const;

  /// Straight O(N) sum over all sample points; reference implementation for
  /// the windowed evaluation used by cdf().
  double cdf_naive(double z) const;

  /// Returns a copy with the zero-boundary correction applied. If the
  /// uncorrected CDF at zero is p > 0, the corrected model returns 0 below
  /// zero and jumps to p at zero; it is the identity when p = 0.
  KcdeModel boundary_corrected() const;

  bool is_boundary_corrected() const { return boundary_corrected_; }
  double p_at_zero() const { return p_at_zero_; }
  double h() const { return h_; }
  Kernel kernel() const { return kernel_; }
  const std::vector<double>& sample() const { return sample_; }
  const BandwidthResult& bandwidth() const { return bandwidth_; }

  nlohmann::ordered_json to_json() const;
  static KcdeModel from_json(const nlohmann::json& j);

 private:
  KcdeModel() = default;

  std::vector<double> sample_;  // nondecreasing
  Kernel kernel_ = Kernel::bitriangular;
  double h_ = 0.0;
  bool boundary_corrected_ = false;
  double p_at_zero_ = 0.0;
  BandwidthResult bandwidth_{};
};

/// Empirical (staircase) CDF: fraction of sample values <= z.
double staircase_cdf(std::span<const double> sample, double z);

/// Staircase CDF over a pre-sorted copy, O(log N) per query.
class StaircaseCdf {
 public:
  explicit StaircaseCdf(std::span<const double> sample);
  double operator()(double z) const;

 private:
  std::vector<double> sorted_;
};

/// Batch evaluation; the default versions split the points across OpenMP
/// threads, the _serial versions are the single-threaded references and
/// produce identical output.
std::vector<double> evaluate_cdf(const KcdeModel& model, std::span<const double> z);
std::vector<double> evaluate_cdf_serial(const KcdeModel& model, std::span<const double> z);
std::vector<double> evaluate_pdf(const KcdeModel& model, std::span<const double> z);
std::vector<double> evaluate_pdf_serial(const KcdeModel& model, std::span<const double> z);

}  // namespace kcde
