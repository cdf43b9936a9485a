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

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "floquet/floquet_driver.hpp"
#include "floquet/record.hpp"

namespace floquet {

/// chi_SG = (1/L) sum_{i,j} C_ij^2 = 1 + (2/L) sum_{i<j} C_ij^2.
/// Throws ConfigError unless C is square, symmetric, unit-diagonal, entries in [-1, 1].
double spin_glass_order(const RealMatrix& correlators);

/// One-sided magnitude spectrum of a real sequence.
///
/// Frequencies are in cycles per sample; for a half-period sampled series the
/// perfect period-doubled response (-1)^n sits at 0.5.
struct Spectrum {
  std::vector<double> frequency;
  std::vector<double> magnitude;
  std::size_t series_length = 0;
  std::size_t padded_length = 0;
  bool half_period_sampling = true;

  /// (|X_0|^2 + 2 sum |X_k|^2 + |X_{N/2}|^2) / N over the padded transform.
  double total_power() const;
  /// Indices of local maxima (endpoints count if above their single neighbour).
  std::vector<std::size_t> local_maxima() const;
};

inline constexpr std::size_t kMinSpectrumLength = 8;

/// Rectangular window, zero-padded to the next power of two >= 4x length.
Spectrum magnitude_spectrum(std::span<const double> series, bool half_period_sampling = true);

/// Spectrum of M from a record. With use_half_periods=false only complete
/// periods (even indices) are used.
Spectrum magnetization_spectrum(const TimeSeriesRecord& series, bool use_half_periods = true);

/// Count of peaks above `relative_threshold` of the global peak with
/// frequency in [f_low, f_high].
std::size_t count_peaks(const Spectrum& spectrum, double relative_threshold, double f_low,
                        double f_high);

/// Disorder-averaged M over an epsilon grid: mean/std [eps][n].
struct PhaseDiagram {
  std::vector<double> epsilon;
  std::vector<std::vector<double>> mean;
  std::vector<std::vector<double>> stddev;
  std::vector<std::vector<double>> mean_chi_sg;
  std::vector<std::vector<double>> stddev_chi_sg;
  std::vector<std::vector<int>> count;
  std::vector<std::uint64_t> realization_seeds;
};

/// Mean and sample (n - 1) standard deviation of equally long series,
/// summed in the given order.
void ensemble_moments(const std::vector<std::vector<double>>& series, std::vector<double>& mean,
                      std::vector<double>& stddev);

/// Runs every (epsilon, realization) pair on `workers` threads and reduces in
/// fixed order. Realizations are shared across the grid.
PhaseDiagram phase_diagram(const FloquetConfig& config_base, const std::vector<double>& epsilon_grid,
                           const std::vector<DisorderRealization>& realizations,
                           int n_half_periods, const StateVector& psi0, int workers = 1);

struct LifetimeOptions {
  std::size_t window = 64;
  double threshold = 0.1;
};

/// Smallest index n whose RMS over samples [n, n + window) falls below
/// threshold x the RMS of the first window; series length if it never does.
/// Input is one sample per complete period. Throws if shorter than a window.
std::size_t extract_lifetime(std::span<const double> series, const LifetimeOptions& options = {});

}  // namespace floquet
