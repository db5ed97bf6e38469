#include <spolight/simulator.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

namespace spolight {

void BinnedCountStream::validate() const {
  if (!(bin_width_ns > 0))
    throw std::domain_error("BinnedCountStream: bin_width_ns must be > 0");
  if (channels.empty() || channels.size() > 2)
    throw std::domain_error("BinnedCountStream: expected 1 or 2 channels");
  if (channels.size() == 2 && channels[0].size() != channels[1].size())
    throw std::domain_error("BinnedCountStream: channel lengths differ");
}

}  // namespace spolight

namespace spolight::sim {

namespace {

// Uniform in [0,1) from the standard-pinned mt19937_64 stream; the mapping
// (x >> 11) * 2^-53 is part of the reproducibility contract.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double exp_gap(std::mt19937_64& rng, double rate_per_ns) {
  return -std::log1p(-uniform01(rng)) / rate_per_ns;
}

std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t stage_seed(std::uint64_t master, std::uint64_t stage) {
  std::uint64_t state = master;
  std::uint64_t out = 0;
  for (std::uint64_t i = 0; i <= stage; ++i) out = splitmix64_next(state);
  return out;
}

void EventTimes::validate() const {
  if (!(duration_ns >= 0))
    throw std::domain_error("EventTimes: duration must be >= 0");
  double prev = 0.0;
  for (double t : times) {
    if (!(t >= prev) || !(t < duration_ns))
      throw std::domain_error("EventTimes: times must be nondecreasing inside [0, duration)");
    prev = t;
  }
}

void SimConfig::validate() const {
  if (!(photon_flux_hz >= 0)) throw std::domain_error("SimConfig: photon_flux_hz must be >= 0");
  if (!(duration_s > 0)) throw std::domain_error("SimConfig: duration_s must be > 0");
  if (!(bin_width_ns > 0)) throw std::domain_error("SimConfig: bin_width_ns must be > 0");
  if (!(dead_time_ns >= 0)) throw std::domain_error("SimConfig: dead_time_ns must be >= 0");
  if (!(quantum_efficiency >= 0) || !(quantum_efficiency <= 1))
    throw std::domain_error("SimConfig: quantum_efficiency must lie in [0,1]");
  if (topology == Topology::beam_splitter && !(split_ratio > 0 && split_ratio < 1))
    throw std::invalid_argument(
        "SimConfig: beam_splitter topology needs split_ratio strictly inside (0,1)");
}

EventTimes simulate_source(double flux_hz, double duration_s, std::uint64_t seed) {
  if (!(flux_hz >= 0)) throw std::domain_error("simulate_source: flux must be >= 0");
  if (!(duration_s > 0)) throw std::domain_error("simulate_source: duration must be > 0");
  EventTimes out;
  out.duration_ns = duration_s * 1e9;
  if (flux_hz == 0) return out;
  const double rate_per_ns = flux_hz * 1e-9;
  out.times.reserve(static_cast<std::size_t>(flux_hz * duration_s * 1.05) + 16);
  std::mt19937_64 rng(seed);
  double t = exp_gap(rng, rate_per_ns);
  while (t < out.duration_ns) {
    out.times.push_back(t);
    t += exp_gap(rng, rate_per_ns);
  }
  return out;
}

EventTimes apply_detector(const EventTimes& ev, double efficiency, double dead_time_ns,
                          std::uint64_t seed) {
  ev.validate();
  if (!(efficiency >= 0) || !(efficiency <= 1))
    throw std::domain_error("apply_detector: efficiency must lie in [0,1]");
  if (!(dead_time_ns >= 0))
    throw std::domain_error("apply_detector: dead_time_ns must be >= 0");
  EventTimes out;
  out.duration_ns = ev.duration_ns;
  out.times.reserve(ev.times.size());
  std::mt19937_64 rng(seed);
  double last_registered = -std::numeric_limits<double>::infinity();
  for (double t : ev.times) {
    if (uniform01(rng) >= efficiency) continue;      // quantum efficiency loss
    if (t - last_registered < dead_time_ns) continue;  // dead, not extended
    out.times.push_back(t);
    last_registered = t;
  }
  return out;
}

std::pair<EventTimes, EventTimes> beam_split(const EventTimes& ev, double ratio,
                                             std::uint64_t seed) {
  ev.validate();
  if (!(ratio >= 0) || !(ratio <= 1))
    throw std::domain_error("beam_split: ratio must lie in [0,1]");
  std::pair<EventTimes, EventTimes> out;
  out.first.duration_ns = out.second.duration_ns = ev.duration_ns;
  std::mt19937_64 rng(seed);
  for (double t : ev.times) {
    if (uniform01(rng) < ratio)
      out.first.times.push_back(t);
    else
      out.second.times.push_back(t);
  }
  return out;
}

std::vector<std::uint32_t> bin_events(const EventTimes& ev, double bin_width_ns) {
  ev.validate();
  if (!(bin_width_ns > 0)) throw std::domain_error("bin_events: bin_width_ns must be > 0");
  const auto nbins = static_cast<std::size_t>(std::ceil(ev.duration_ns / bin_width_ns));
  std::vector<std::uint32_t> counts(nbins, 0);
  for (double t : ev.times) {
    // t/w can round up across the boundary when t sits within half an ulp of
    // it; clamp so the duration edge cannot index past the last bin
    auto idx = static_cast<std::size_t>(t / bin_width_ns);
    if (idx >= nbins) idx = nbins - 1;
    ++counts[idx];
  }
  return counts;
}

struct ExperimentStream::Impl {
  SimConfig cfg;
  double duration_ns = 0;
  double rate_per_ns = 0;
  std::size_t total_bins = 0;
  std::size_t produced = 0;

  std::mt19937_64 src_rng, split_rng, det_rng[2];
  double next_event = std::numeric_limits<double>::infinity();
  double last_registered[2] = {-std::numeric_limits<double>::infinity(),
                               -std::numeric_limits<double>::infinity()};

  explicit Impl(const SimConfig& c)
      : cfg(c),
        src_rng(stage_seed(c.seed, 0)),
        split_rng(stage_seed(c.seed, 1)),
        det_rng{std::mt19937_64(stage_seed(c.seed, 2)), std::mt19937_64(stage_seed(c.seed, 3))} {
    cfg.validate();
    duration_ns = cfg.duration_s * 1e9;
    rate_per_ns = cfg.photon_flux_hz * 1e-9;
    total_bins = static_cast<std::size_t>(std::ceil(duration_ns / cfg.bin_width_ns));
    next_event = rate_per_ns > 0 ? exp_gap(src_rng, rate_per_ns)
                                 : std::numeric_limits<double>::infinity();
  }

  std::size_t next_chunk(BinnedCountStream& chunk, std::size_t max_bins) {
    const std::size_t n = std::min(max_bins, total_bins - produced);
    const std::size_t n_channels = cfg.topology == Topology::beam_splitter ? 2 : 1;
    chunk.bin_width_ns = cfg.bin_width_ns;
    chunk.channels.assign(n_channels, std::vector<std::uint32_t>(n, 0));
    if (n == 0) return 0;

    // Chunk membership is decided by the computed bin index, so any chunking
    // is bit-identical to one whole run even when t/w rounds across a
    // boundary.
    while (next_event < duration_ns) {
      auto bin = static_cast<std::size_t>(next_event / cfg.bin_width_ns);
      if (bin >= total_bins) bin = total_bins - 1;
      if (bin >= produced + n) break;  // belongs to a later chunk
      const double t = next_event;
      next_event = t + exp_gap(src_rng, rate_per_ns);

      std::size_t ch = 0;
      if (cfg.topology == Topology::beam_splitter)
        ch = uniform01(split_rng) < cfg.split_ratio ? 0 : 1;
      if (uniform01(det_rng[ch]) >= cfg.quantum_efficiency) continue;
      if (t - last_registered[ch] < cfg.dead_time_ns) continue;
      last_registered[ch] = t;
      ++chunk.channels[ch][bin - produced];
    }
    produced += n;
    return n;
  }
};

ExperimentStream::ExperimentStream(const SimConfig& cfg) : impl_(std::make_unique<Impl>(cfg)) {}
ExperimentStream::~ExperimentStream() = default;
ExperimentStream::ExperimentStream(ExperimentStream&&) noexcept = default;
ExperimentStream& ExperimentStream::operator=(ExperimentStream&&) noexcept = default;

std::size_t ExperimentStream::total_bins() const { return impl_->total_bins; }
std::size_t ExperimentStream::bins_produced() const { return impl_->produced; }

std::size_t ExperimentStream::next(BinnedCountStream& chunk, std::size_t max_bins) {
  return impl_->next_chunk(chunk, max_bins);
}

BinnedCountStream run_experiment(const SimConfig& cfg) {
  ExperimentStream stream(cfg);
  BinnedCountStream out;
  const std::size_t n = stream.next(out, stream.total_bins());
  (void)n;
  return out;
}

}  // namespace spolight::sim
