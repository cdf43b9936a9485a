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

#include "floquet/record.hpp"

#include <openssl/evp.h>

#include <numeric>
#include <string>

#include "floquet/observables.hpp"

namespace floquet {

std::vector<double> TimeSeriesRecord::magnetization() const {
  std::vector<double> m;
  m.reserve(points.size());
  for (const auto& p : points) m.push_back(p.magnetization);
  return m;
}

std::vector<double> TimeSeriesRecord::staggered_magnetization() const {
  std::vector<double> m;
  m.reserve(points.size());
  for (const auto& p : points) m.push_back((p.half_period_index % 2 ? -1.0 : 1.0) * p.magnetization);
  return m;
}

std::vector<double> TimeSeriesRecord::chi_sg() const {
  std::vector<double> c;
  c.reserve(points.size());
  for (const auto& p : points) c.push_back(p.chi_sg);
  return c;
}

std::vector<double> TimeSeriesRecord::complete_period_magnetization() const {
  std::vector<double> m;
  for (const auto& p : points) {
    if (p.half_period_index % 2 == 0) m.push_back(p.magnetization);
  }
  return m;
}

std::vector<double> TimeSeriesRecord::complete_period_chi_sg() const {
  std::vector<double> c;
  for (const auto& p : points) {
    if (p.half_period_index % 2 == 0) c.push_back(p.chi_sg);
  }
  return c;
}

ObservablePoint make_point(int half_period_index, double time_ns, std::vector<double> site_z,
                           RealMatrix correlators) {
  ObservablePoint p;
  p.half_period_index = half_period_index;
  p.time_ns = time_ns;
  p.magnetization = site_z.empty() ? 0.0
                                   : std::accumulate(site_z.begin(), site_z.end(), 0.0) /
                                         static_cast<double>(site_z.size());
  p.site_z = std::move(site_z);
  p.chi_sg = spin_glass_order(correlators);
  p.correlators = std::move(correlators);
  return p;
}

std::string content_hash(std::string_view content) {
  const std::string header = "blob " + std::to_string(content.size()) + std::string(1, '\0');
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr);
  EVP_DigestUpdate(ctx, header.data(), header.size());
  EVP_DigestUpdate(ctx, content.data(), content.size());
  EVP_DigestFinal_ex(ctx, digest, &length);
  EVP_MD_CTX_free(ctx);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 15]);
  }
  return out;
}

}  // namespace floquet
