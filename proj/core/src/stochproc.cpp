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

#include "trajkit/stochproc.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace trajkit {

namespace {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

}  // namespace

NoiseStream::NoiseStream(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t counter)
    : seed_(seed), stream_id_(stream_id), counter_(counter) {
  key_ = mix64(mix64(seed ^ 0x6a09e667f3bcc909ULL) + mix64(stream_id + kGolden));
}

std::uint64_t NoiseStream::bits_at(std::uint64_t counter) const {
  return mix64(key_ + (counter + 1) * kGolden);
}

double NoiseStream::uniform_at(std::uint64_t counter) const {
  // 53 random bits, shifted off zero.
  return (static_cast<double>(bits_at(counter) >> 11) + 0.5) * 0x1.0p-53;
}

double NoiseStream::normal_at(std::uint64_t counter) const {
  const std::uint64_t base = counter & ~std::uint64_t{1};
  const double radius = std::sqrt(-2.0 * std::log(uniform_at(base)));
  const double angle = 2.0 * std::numbers::pi * uniform_at(base + 1);
  return (counter & 1U) ? radius * std::sin(angle) : radius * std::cos(angle);
}

std::uint64_t NoiseStream::next_bits() { return bits_at(counter_++); }

double NoiseStream::uniform() { return uniform_at(counter_++); }

double NoiseStream::normal() { return normal_at(counter_++); }

double wiener_increment(NoiseStream& stream, double dt) {
  if (!(dt > 0.0)) throw Error("wiener_increment: dt must be positive");
  return std::sqrt(dt) * stream.normal();
}

std::string_view to_string(Scheme s) { return s == Scheme::ito ? "ito" : "likelihood"; }

Scheme scheme_from_string(std::string_view s) {
  if (s == "ito") return Scheme::ito;
  if (s == "likelihood") return Scheme::likelihood;
  throw Error("unknown scheme '" + std::string(s) + "' (expected ito or likelihood)");
}

std::string_view to_string(Channel c) { return c == Channel::real ? "real" : "fictitious"; }

Channel channel_from_string(std::string_view s) {
  if (s == "real") return Channel::real;
  if (s == "fictitious") return Channel::fictitious;
  throw Error("unknown record channel '" + std::string(s) + "'");
}

OstensibleDistribution OstensibleDistribution::fixed(double mean, double variance_scale) {
  OstensibleDistribution d{Mode::static_mean, mean, variance_scale};
  d.validate();
  return d;
}

OstensibleDistribution OstensibleDistribution::adapting(double variance_scale) {
  OstensibleDistribution d{Mode::adaptive, 0.0, variance_scale};
  d.validate();
  return d;
}

void OstensibleDistribution::validate() const {
  if (!(variance_scale > 0.0)) throw Error("ostensible distribution: variance_scale must be positive");
  if (!std::isfinite(mean_param)) throw Error("ostensible distribution: non-finite mean");
}

double sample_real_record_quantum(double mean_signal, double dt, NoiseStream& stream) {
  return wiener_increment(stream, dt) / dt + mean_signal;
}

double sample_real_record_classical(double mean, double beta, double dt, NoiseStream& stream) {
  if (!(beta > 0.0)) throw Error("sample_real_record_classical: beta must be positive");
  return mean + std::sqrt(beta) * wiener_increment(stream, dt) / dt;
}

double sample_fictitious(const OstensibleDistribution& dist, double mu, double dt, NoiseStream& stream) {
  return std::sqrt(dist.variance_scale) * wiener_increment(stream, dt) / dt + mu;
}

LogWeight log_weight_update(LogWeight w, double increment_factor) {
  if (!(increment_factor > 0.0)) {
    throw Error("log_weight_update: non-positive weight factor (dt too large for the weight update)");
  }
  w.log_p += std::log(increment_factor);
  return w;
}

std::vector<double> relative_weights(std::span<const double> log_w) {
  if (log_w.empty()) return {};
  const double top = *std::max_element(log_w.begin(), log_w.end());
  if (!std::isfinite(top)) throw Error("relative_weights: degenerate log-weights");
  std::vector<double> w(log_w.size());
  for (std::size_t i = 0; i < log_w.size(); ++i) w[i] = std::exp(log_w[i] - top);
  return w;
}

double effective_sample_size(std::span<const double> log_w) {
  const auto w = relative_weights(log_w);
  double s = 0.0, s2 = 0.0;
  for (double v : w) {
    s += v;
    s2 += v * v;
  }
  return s2 > 0.0 ? s * s / s2 : 0.0;
}

std::uint64_t fnv1a(std::string_view data, std::uint64_t h) {
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = digits[v & 0xF];
  return s;
}

std::string format_double(double v) {
  char buf[40];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  if (ec != std::errc{}) throw Error("format_double: conversion failed");
  return std::string(buf, end);
}

namespace {

double parse_double(std::string_view s, const std::string& what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw Error("record: cannot parse " + what + " '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

void write_record(const std::filesystem::path& path, const Record& record) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("write_record: cannot open " + path.string());
  out << "# dt=" << format_double(record.dt) << " channel=" << to_string(record.channel)
      << " scenario=" << (record.scenario_hash.empty() ? "-" : record.scenario_hash) << '\n';
  for (double v : record.values) out << format_double(v) << '\n';
  if (!out) throw Error("write_record: write failed for " + path.string());
}

Record read_record(const std::filesystem::path& path, double expected_dt, std::string_view expected_hash) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("read_record: cannot open " + path.string());
  std::string header;
  if (!std::getline(in, header)) throw Error("read_record: empty file " + path.string());

  Record rec;
  bool have_dt = false, have_channel = false, have_scenario = false;
  std::istringstream hs(header);
  std::string tok;
  hs >> tok;
  if (tok != "#") throw Error("read_record: malformed header in " + path.string());
  while (hs >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw Error("read_record: malformed header field '" + tok + "'");
    const std::string key = tok.substr(0, eq);
    const std::string val = tok.substr(eq + 1);
    if (key == "dt") {
      rec.dt = parse_double(val, "dt");
      have_dt = true;
    } else if (key == "channel") {
      rec.channel = channel_from_string(val);
      have_channel = true;
    } else if (key == "scenario") {
      rec.scenario_hash = val == "-" ? std::string{} : val;
      have_scenario = true;
    } else {
      throw Error("read_record: unknown header field '" + key + "'");
    }
  }
  if (!have_dt || !have_channel || !have_scenario) {
    throw Error("read_record: header must carry dt, channel and scenario");
  }
  if (!(rec.dt > 0.0)) throw Error("read_record: dt must be positive");
  if (expected_dt > 0.0 && rec.dt != expected_dt) {
    throw Error("read_record: dt mismatch (file " + format_double(rec.dt) + ", expected " +
                format_double(expected_dt) + ")");
  }
  if (!expected_hash.empty() && rec.scenario_hash != expected_hash) {
    throw Error("read_record: scenario hash mismatch");
  }

  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const double v = parse_double(line, "value");
    if (!std::isfinite(v)) throw Error("read_record: non-finite value");
    rec.values.push_back(v);
  }
  return rec;
}

}  // namespace trajkit
