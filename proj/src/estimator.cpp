#include "kcde/estimator.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "kcde/errors.hpp"

namespace kcde {

BandwidthSpec BandwidthSpec::fixed(double h) {
  if (!(h > 0.0) || !std::isfinite(h))
    throw std::invalid_argument("fixed bandwidth must be positive and finite");
  return {BandwidthMethod::fixed, h, {}};
}

BandwidthSpec BandwidthSpec::parse(std::string_view text) {
  if (text == "bgk") return bgk();
  if (text == "nrr") return normal_reference();
  double h = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), h);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw std::invalid_argument("bandwidth must be 'bgk', 'nrr', or a positive number");
  return fixed(h);
}

KcdeModel KcdeModel::fit(std::span<const double> sample, Kernel kernel,
                         const BandwidthSpec& bw) {
  if (sample.empty()) throw InputError("empty sample");
  for (double v : sample)
    if (!std::isfinite(v)) throw InputError("sample contains non-finite values");

  KcdeModel model;
  model.sample_.assign(sample.begin(), sample.end());
  std::sort(model.sample_.begin(), model.sample_.end());
  model.kernel_ = kernel;

  switch (bw.method) {
    case BandwidthMethod::bgk:
      model.bandwidth_ = bgk_bandwidth(sample, bw.bgk_config);
      break;
    case BandwidthMethod::normal_reference:
      model.bandwidth_ = normal_reference_bandwidth(sample);
      break;
    case BandwidthMethod::fixed:
      if (!(bw.fixed_h > 0.0))
        throw std::invalid_argument("fixed bandwidth must be positive");
      model.bandwidth_ = {bw.fixed_h, BandwidthMethod::fixed, 0, true, 0.0};
      break;
  }
  model.h_ = model.bandwidth_.h;
  return model;
}

double KcdeModel::cdf(double z) const {
  if (!std::isfinite(z)) throw std::domain_error("cdf argument must be finite");
  if (boundary_corrected_ && z < 0.0) return 0.0;

  const double n = static_cast<double>(sample_.size());
  if (has_compact_support(kernel_)) {
    // Points more than one bandwidth below z contribute a full 1/N step,
    // points more than one bandwidth above contribute nothing; only the
    // window [z-h, z+h] needs kernel evaluations.
    const auto lo = std::lower_bound(sample_.begin(), sample_.end(), z - h_);
    const auto hi = std::upper_bound(lo, sample_.end(), z + h_);
    double sum = static_cast<double>(lo - sample_.begin());
    for (auto it = lo; it != hi; ++it)
      sum += kernel_step(kernel_, (z - *it) / h_);
    return sum / n;
  }
  double sum = 0.0;
  for (double zi : sample_) sum += kernel_step(kernel_, (z - zi) / h_);
  return sum / n;
}

double KcdeModel::cdf_naive(double z) const {
  if (!std::isfinite(z)) throw std::domain_error("cdf argument must be finite");
  if (boundary_corrected_ && z < 0.0) return 0.0;
  double sum = 0.0;
  for (double zi : sample_) sum += kernel_step(kernel_, (z - zi) / h_);
  return sum / static_cast<double>(sample_.size());
}

double KcdeModel::pdf(double z) const {
  if (!std::isfinite(z)) throw std::domain_error("pdf argument must be finite");
  const double n = static_cast<double>(sample_.size());
  double sum = 0.0;
  if (has_compact_support(kernel_)) {
    const auto lo = std::lower_bound(sample_.begin(), sample_.end(), z - h_);
    const auto hi = std::upper_bound(lo, sample_.end(), z + h_);
    for (auto it = lo; it != hi; ++it)
      sum += kernel_pdf(kernel_, (z - *it) / h_);
  } else {
    for (double zi : sample_) sum += kernel_pdf(kernel_, (z - zi) / h_);
  }
  return sum / (n * h_);
}

KcdeModel KcdeModel::boundary_corrected() const {
  KcdeModel corrected = *this;
  corrected.boundary_corrected_ = false;  // evaluate the raw CDF at zero
  corrected.p_at_zero_ = corrected.cdf(0.0);
  corrected.boundary_corrected_ = true;
  return corrected;
}

nlohmann::ordered_json KcdeModel::to_json() const {
  nlohmann::ordered_json j;
  j["kernel"] = kernel_name(kernel_);
  j["h"] = h_;
  j["pAtZero"] = p_at_zero_;
  j["boundaryCorrected"] = boundary_corrected_;
  j["sample"] = sample_;
  return j;
}

KcdeModel KcdeModel::from_json(const nlohmann::json& j) {
  try {
    KcdeModel model;
    model.kernel_ = kernel_from_name(j.at("kernel").get<std::string>());
    model.h_ = j.at("h").get<double>();
    model.p_at_zero_ = j.at("pAtZero").get<double>();
    model.boundary_corrected_ = j.at("boundaryCorrected").get<bool>();
    model.sample_ = j.at("sample").get<std::vector<double>>();
    if (model.sample_.empty()) throw InputError("model sample is empty");
    if (!(model.h_ > 0.0) || !std::isfinite(model.h_))
      throw InputError("model bandwidth must be positive");
    for (double v : model.sample_)
      if (!std::isfinite(v)) throw InputError("model sample has non-finite values");
    std::sort(model.sample_.begin(), model.sample_.end());
    model.bandwidth_ = {model.h_, BandwidthMethod::fixed, 0, true, 0.0};
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed model JSON: ") + e.what());
  }
}

double staircase_cdf(std::span<const double> sample, double z) {
  if (sample.empty()) throw InputError("empty sample");
  std::size_t count = 0;
  for (double v : sample)
    if (v <= z) ++count;
  return static_cast<double>(count) / static_cast<double>(sample.size());
}

StaircaseCdf::StaircaseCdf(std::span<const double> sample)
    : sorted_(sample.begin(), sample.end()) {
  if (sorted_.empty()) throw InputError("empty sample");
  std::sort(sorted_.begin(), sorted_.end());
}

double StaircaseCdf::operator()(double z) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), z);
  return static_cast<double>(it - sorted_.begin()) /
         static_cast<double>(sorted_.size());
}

std::vector<double> evaluate_cdf(const KcdeModel& model, std::span<const double> z) {
  std::vector<double> out(z.size());
  const std::int64_t n = static_cast<std::int64_t>(z.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) out[i] = model.cdf(z[i]);
  return out;
}

std::vector<double> evaluate_cdf_serial(const KcdeModel& model,
                                        std::span<const double> z) {
  std::vector<double> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = model.cdf(z[i]);
  return out;
}

std::vector<double> evaluate_pdf(const KcdeModel& model, std::span<const double> z) {
  std::vector<double> out(z.size());
  const std::int64_t n = static_cast<std::int64_t>(z.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) out[i] = model.pdf(z[i]);
  return out;
}

std::vector<double> evaluate_pdf_serial(const KcdeModel& model,
                                        std::span<const double> z) {
  std::vector<double> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = model.pdf(z[i]);
  return out;
}

}  // namespace kcde
