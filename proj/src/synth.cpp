#include "sicvpr/synth.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

namespace sicvpr {

void SynthConfig::validate() const {
  if (q_count < 1 || n_count < 1) throw ConfigError("synthetic shape must be at least 1x1");
  if (drift_amp < 0) throw ConfigError("drift_amp must be non-negative");
  if (q_count > n_count + drift_amp) {
    throw ConfigError("q_count must not exceed n_count + drift_amp");
  }
  if (!(noise_sigma >= 0.0)) throw ConfigError("noise_sigma must be non-negative");
  if (!(dropout >= 0.0 && dropout <= 1.0)) throw ConfigError("dropout must lie in [0, 1]");
  if (!std::isfinite(signal)) throw ConfigError("signal must be finite");
  if (allowance < 0) throw ConfigError("allowance must be non-negative");
}

double SynthRng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double SynthRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

int SynthRng::step() { return static_cast<int>(std::floor(3.0 * uniform())) - 1; }

std::uint64_t technique_stream_seed(std::uint64_t seed, std::size_t technique) {
  return seed + (static_cast<std::uint64_t>(technique) + 1) * 0x9E3779B97F4A7C15ULL;
}

GroundTruth generate_truth(const SynthConfig& config) {
  config.validate();
  SynthRng rng(config.seed);
  std::vector<std::optional<Index>> entries(static_cast<std::size_t>(config.q_count));
  Index drift = 0;
  for (Index q = 0; q < config.q_count; ++q) {
    // Keep q + drift inside [0, n_count).
    const Index lo = std::max(-config.drift_amp, -q);
    const Index hi = std::min(config.drift_amp, config.n_count - 1 - q);
    if (q > 0 && config.drift_amp > 0) drift += rng.step();
    drift = std::clamp(drift, lo, hi);
    entries[static_cast<std::size_t>(q)] = q + drift;
  }
  return GroundTruth(std::move(entries), config.allowance);
}

SimilarityMatrix generate_scores(const SynthConfig& config, const GroundTruth& truth,
                                 std::uint64_t stream_seed) {
  config.validate();
  SynthRng rng(stream_seed);
  const Index dropout_end = config.dropout_end < 0 ? config.q_count : config.dropout_end;
  ScoreMatrix values(config.q_count, config.n_count);
  for (Index q = 0; q < config.q_count; ++q) {
    const bool in_range = q >= config.dropout_begin && q < dropout_end;
    const bool dropped = rng.uniform() < (in_range ? config.dropout : 0.0);
    for (Index n = 0; n < config.n_count; ++n) {
      const double z = rng.normal();
      values(q, n) = config.noise_sigma > 0.0 ? config.noise_sigma * z : 0.0;
    }
    if (!dropped) {
      if (const auto c = truth.at(q)) values(q, *c) += config.signal;
    }
  }
  return SimilarityMatrix(std::move(values));
}

SynthData generate(const SynthConfig& config) {
  auto truth = generate_truth(config);
  auto matrix = generate_scores(config, truth, technique_stream_seed(config.seed, 0));
  return {std::move(matrix), std::move(truth)};
}

SynthSet generate_set(const SynthConfig& base, const std::vector<TechniqueProfile>& profiles) {
  auto truth = generate_truth(base);
  std::vector<Technique> techniques;
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    SynthConfig c = base;
    c.signal = profiles[i].signal;
    c.noise_sigma = profiles[i].noise_sigma;
    c.dropout = profiles[i].dropout;
    c.dropout_begin = profiles[i].dropout_begin;
    c.dropout_end = profiles[i].dropout_end;
    techniques.push_back(
        {profiles[i].id, generate_scores(c, truth, technique_stream_seed(base.seed, i))});
  }
  return {TechniqueSet(std::move(techniques)), std::move(truth)};
}

void write_config_echo(const SynthConfig& config, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "q_count=" << config.q_count << '\n'
      << "n_count=" << config.n_count << '\n'
      << "signal=" << format_double(config.signal) << '\n'
      << "noise_sigma=" << format_double(config.noise_sigma) << '\n'
      << "dropout=" << format_double(config.dropout) << '\n'
      << "dropout_begin=" << config.dropout_begin << '\n'
      << "dropout_end=" << config.dropout_end << '\n'
      << "drift_amp=" << config.drift_amp << '\n'
      << "allowance=" << config.allowance << '\n'
      << "seed=" << config.seed << '\n'
      << "rng=mt19937_64\n";
}

}  // namespace sicvpr
