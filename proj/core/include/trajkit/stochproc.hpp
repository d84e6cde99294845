// Copyright 2026 The trajkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trajkit/statekit.hpp"

namespace trajkit {

// Stream-id tags keep the record, fictitious-noise, initial-condition and
// bootstrap draws of one run in disjoint key ranges.
namespace streams {
inline constexpr std::uint64_t kRecord = 1ULL << 60;
inline constexpr std::uint64_t kFictitious = 2ULL << 60;
inline constexpr std::uint64_t kInitial = 3ULL << 60;
inline constexpr std::uint64_t kBootstrap = 4ULL << 60;
}  // namespace streams

/// Counter-based Gaussian/uniform source. Draw number `counter` of stream
/// (seed, stream_id) is a pure function of the three integers, so ensembles
/// evaluate to bit-identical results in any order or thread layout.
class NoiseStream {
 public:
  NoiseStream() = default;
  NoiseStream(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t counter = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  std::uint64_t counter() const { return counter_; }

  /// Raw 64 random bits for draw `counter()`; advances the counter.
  std::uint64_t next_bits();
  /// Uniform on the open interval (0, 1).
  double uniform();
  /// Standard normal. Consumes one counter value; pairs of counters share a
  /// Box-Muller transform.
  double normal();

  /// Value that draw `counter` of this stream produces, without advancing.
  double normal_at(std::uint64_t counter) const;

 private:
  std::uint64_t bits_at(std::uint64_t counter) const;
  double uniform_at(std::uint64_t counter) const;

  std::uint64_t seed_ = 0;
  std::uint64_t stream_id_ = 0;
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

/// dW ~ N(0, dt).
double wiener_increment(NoiseStream& stream, double dt);

/// Discretization of one time step, shared by every solver.
///
/// `ito` applies the first-order Ito expansion literally, including
/// multiplicative (1 + dt ...) weight factors. `likelihood` applies each step
/// as a first-order measurement operation (a positive map) and weights by the
/// exact Gaussian likelihood ratio. The two agree to O(dt); the second keeps
/// reference and ostensible solvers consistent for any finite record.
enum class Scheme { ito, likelihood };

std::string_view to_string(Scheme s);
Scheme scheme_from_string(std::string_view s);

enum class Channel { real, fictitious };

std::string_view to_string(Channel c);
Channel channel_from_string(std::string_view s);

/// Time-indexed measurement record r_1..r_k (or f_1..f_k) on a fixed step dt.
struct Record {
  double dt = 0.0;
  std::vector<double> values;
  Channel channel = Channel::real;
  std::string scenario_hash;

  double duration() const { return dt * static_cast<double>(values.size()); }
  std::size_t size() const { return values.size(); }
};

/// Per-step Gaussian reference law of variance variance_scale/dt. Static mode
/// uses mean_param; adaptive mode takes the mean from the trajectory state.
struct OstensibleDistribution {
  enum class Mode { static_mean, adaptive };
  Mode mode = Mode::static_mean;
  double mean_param = 0.0;
  double variance_scale = 1.0;

  static OstensibleDistribution fixed(double mean, double variance_scale = 1.0);
  static OstensibleDistribution adapting(double variance_scale = 1.0);

  void validate() const;
};

struct LogWeight {
  double log_p = 0.0;
};

/// r with r dt = dW + dt * mean_signal (homodyne channel).
double sample_real_record_quantum(double mean_signal, double dt, NoiseStream& stream);

/// r = mean + sqrt(beta) dW / dt (Gaussian-precision classical readout).
double sample_real_record_classical(double mean, double beta, double dt, NoiseStream& stream);

/// f with f dt = dW' + mu dt, dW' ~ N(0, variance_scale dt). `mu` is the
/// already-resolved mean (see resolve_mean).
double sample_fictitious(const OstensibleDistribution& dist, double mu, double dt, NoiseStream& stream);

/// Static mode returns the fixed parameter; adaptive mode evaluates `state_mean`.
template <class StateMean>
double resolve_mean(const OstensibleDistribution& dist, StateMean&& state_mean) {
  return dist.mode == OstensibleDistribution::Mode::adaptive ? static_cast<double>(state_mean())
                                                            : dist.mean_param;
}

/// log_p += ln(factor). A non-positive factor means dt is too large for the
/// multiplicative weight update and is reported as an error.
LogWeight log_weight_update(LogWeight w, double increment_factor);

/// exp(log_w - max log_w), the stabilized relative weights of an ensemble.
std::vector<double> relative_weights(std::span<const double> log_w);

/// Kish effective sample size (sum w)^2 / sum w^2 of stabilized weights.
double effective_sample_size(std::span<const double> log_w);

/// 64-bit FNV-1a, used for scenario and content hashes.
std::uint64_t fnv1a(std::string_view data, std::uint64_t h = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t v);

/// Full-precision (17 significant digit) formatting used by every CSV writer.
std::string format_double(double v);

void write_record(const std::filesystem::path& path, const Record& record);

/// Reads a record file. If `expected_dt` is positive the header dt must match
/// it; a non-empty `expected_hash` must match the scenario hash.
Record read_record(const std::filesystem::path& path, double expected_dt = 0.0,
                   std::string_view expected_hash = {});

}  // namespace trajkit
