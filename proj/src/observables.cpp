// Copyright 2026 The Floquet Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "floquet/observables.hpp"

#include <cmath>
#include <complex>

#include <unsupported/Eigen/FFT>

#include "floquet/parallel.hpp"

namespace floquet {

double spin_glass_order(const RealMatrix& c) {
  if (c.rows() != c.cols() || c.rows() == 0) throw ConfigError("correlator matrix must be square");
  const Eigen::Index L = c.rows();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < L; ++i) {
    if (std::abs(c(i, i) - 1.0) > 1e-9) throw ConfigError("correlator diagonal must be 1");
    for (Eigen::Index j = i + 1; j < L; ++j) {
      if (std::abs(c(i, j) - c(j, i)) > 1e-9) throw ConfigError("correlator matrix not symmetric");
      if (std::abs(c(i, j)) > 1.0 + 1e-9) throw ConfigError("correlator entry outside [-1, 1]");
      sum += c(i, j) * c(i, j);
    }
  }
  return 1.0 + 2.0 * sum / static_cast<double>(L);
}

double Spectrum::total_power() const {
  if (magnitude.empty()) return 0.0;
  const std::size_t nyquist = padded_length / 2;
  double p = 0.0;
  for (std::size_t k = 0; k < magnitude.size(); ++k) {
    const double w = (k == 0 || k == nyquist) ? 1.0 : 2.0;
    p += w * magnitude[k] * magnitude[k];
  }
  return p / static_cast<double>(padded_length);
}

std::vector<std::size_t> Spectrum::local_maxima() const {
  std::vector<std::size_t> peaks;
  const std::size_t n = magnitude.size();
  for (std::size_t k = 0; k < n; ++k) {
    const bool left = k == 0 || magnitude[k] > magnitude[k - 1];
    const bool right = k + 1 == n || magnitude[k] >= magnitude[k + 1];
    if (left && right && n > 1) peaks.push_back(k);
  }
  return peaks;
}

Spectrum magnitude_spectrum(std::span<const double> series, bool half_period_sampling) {
  if (series.size() < kMinSpectrumLength) {
    throw ConfigError("spectrum needs at least " + std::to_string(kMinSpectrumLength) + " samples");
  }
  std::size_t padded = 1;
  while (padded < 4 * series.size()) padded <<= 1;
  std::vector<double> input(padded, 0.0);
  std::copy(series.begin(), series.end(), input.begin());

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> out;
  fft.fwd(out, input);

  Spectrum s;
  s.series_length = series.size();
  s.padded_length = padded;
  s.half_period_sampling = half_period_sampling;
  const std::size_t bins = padded / 2 + 1;
  s.frequency.resize(bins);
  s.magnitude.resize(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    s.frequency[k] = static_cast<double>(k) / static_cast<double>(padded);
    s.magnitude[k] = std::abs(out[k]);
  }
  return s;
}

Spectrum magnetization_spectrum(const TimeSeriesRecord& series, bool use_half_periods) {
  const std::vector<double> m =
      use_half_periods ? series.magnetization() : series.complete_period_magnetization();
  return magnitude_spectrum(m, use_half_periods);
}

std::size_t count_peaks(const Spectrum& spectrum, double relative_threshold, double f_low,
                        double f_high) {
  if (spectrum.magnitude.empty()) return 0;
  const double global = *std::max_element(spectrum.magnitude.begin(), spectrum.magnitude.end());
  std::size_t count = 0;
  for (std::size_t k : spectrum.local_maxima()) {
    const double f = spectrum.frequency[k];
    if (f >= f_low && f <= f_high && spectrum.magnitude[k] > relative_threshold * global) ++count;
  }
  return count;
}

void ensemble_moments(const std::vector<std::vector<double>>& series, std::vector<double>& mean,
                      std::vector<double>& stddev) {
  mean.clear();
  stddev.clear();
  if (series.empty()) return;
  const std::size_t length = series.front().size();
  const double n = static_cast<double>(series.size());
  mean.assign(length, 0.0);
  stddev.assign(length, 0.0);
  for (const auto& s : series) {
    if (s.size() != length) throw ConfigError("ensemble series lengths differ");
    for (std::size_t t = 0; t < length; ++t) mean[t] += s[t];
  }
  for (double& m : mean) m /= n;
  if (series.size() < 2) return;
  for (const auto& s : series) {
    for (std::size_t t = 0; t < length; ++t) stddev[t] += (s[t] - mean[t]) * (s[t] - mean[t]);
  }
  // Sample standard deviation across realizations.
  for (double& v : stddev) v = std::sqrt(v / (n - 1.0));
}

PhaseDiagram phase_diagram(const FloquetConfig& config_base, const std::vector<double>& epsilon_grid,
                           const std::vector<DisorderRealization>& realizations,
                           int n_half_periods, const StateVector& psi0, int workers) {
  if (epsilon_grid.empty()) throw ConfigError("epsilon grid is empty");
  if (realizations.empty()) throw ConfigError("no disorder realizations");
  config_base.validate();

  const std::size_t n_eps = epsilon_grid.size();
  const std::size_t n_real = realizations.size();

  // The interaction factor does not depend on epsilon; flips are built per epsilon.
  std::shared_ptr<const Propagator> interaction;
  if (config_base.interaction_kind != InteractionKind::kOff) {
    interaction = std::make_shared<const Propagator>(
        make_propagator(build_interaction(config_base), config_base.t3_int));
  }
  std::vector<FloquetConfig> configs(n_eps, config_base);
  std::vector<std::shared_ptr<const Propagator>> flips(n_eps);
  for (std::size_t e = 0; e < n_eps; ++e) configs[e].epsilon = epsilon_grid[e];
  parallel_for(n_eps, workers, [&](std::size_t e) {
    flips[e] = std::make_shared<const Propagator>(
        transverse_rotation(configs[e].chain_length, configs[e].rabi_angle()));
  });

  std::vector<std::vector<double>> m(n_eps * n_real);
  std::vector<std::vector<double>> chi(n_eps * n_real);
  parallel_for(n_eps * n_real, workers, [&](std::size_t item) {
    const std::size_t e = item / n_real;
    const std::size_t r = item % n_real;
    StagePropagators base;
    base.sites = configs[e].chain_length;
    base.flip = flips[e];
    base.interaction = interaction;
    const TimeSeriesRecord rec =
        run_stroboscopic(configs[e], base.with_disorder(realizations[r]), psi0, n_half_periods);
    m[item] = rec.magnetization();
    chi[item] = rec.chi_sg();
  });

  PhaseDiagram out;
  out.epsilon = epsilon_grid;
  for (const auto& r : realizations) out.realization_seeds.push_back(r.seed);
  for (std::size_t e = 0; e < n_eps; ++e) {
    std::vector<std::vector<double>> ms(m.begin() + e * n_real, m.begin() + (e + 1) * n_real);
    std::vector<std::vector<double>> cs(chi.begin() + e * n_real, chi.begin() + (e + 1) * n_real);
    std::vector<double> mean, sd;
    ensemble_moments(ms, mean, sd);
    out.mean.push_back(mean);
    out.stddev.push_back(sd);
    ensemble_moments(cs, mean, sd);
    out.mean_chi_sg.push_back(mean);
    out.stddev_chi_sg.push_back(sd);
    out.count.emplace_back(n_half_periods + 1, static_cast<int>(n_real));
  }
  return out;
}

std::size_t extract_lifetime(std::span<const double> series, const LifetimeOptions& options) {
  const std::size_t w = options.window;
  if (w == 0) throw ConfigError("lifetime window must be positive");
  if (series.size() < w) throw ConfigError("series shorter than one lifetime window");
  auto window_rms = [&](std::size_t start) {
    double sum = 0.0;
    for (std::size_t k = start; k < start + w; ++k) sum += series[k] * series[k];
    return std::sqrt(sum / static_cast<double>(w));
  };
  const double limit = options.threshold * window_rms(0);
  for (std::size_t n = 0; n + w <= series.size(); ++n) {
    if (window_rms(n) < limit) return n;
  }
  return series.size();
}

}  // namespace floquet
