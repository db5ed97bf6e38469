#pragma once
#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include <spolight/count_stream.hpp>

namespace spolight::sim {

/// Event timestamps in ns, nondecreasing, all inside [0, duration_ns).
struct EventTimes {
  std::vector<double> times;
  double duration_ns = 0.0;

  void validate() const;
};

enum class Topology { single_detector, beam_splitter };

/// Full detection-chain configuration. Defaults follow the experimental
/// calibration: 2e5 counts/s, 63.5 ns dead time, 12.5 ns bins, 50/50 split.
struct SimConfig {
  double photon_flux_hz = 2e5;
  double duration_s = 1.0;
  double quantum_efficiency = 1.0;
  double dead_time_ns = 63.5;
  double bin_width_ns = 12.5;
  double split_ratio = 0.5;  ///< probability a photon goes to channel 1
  Topology topology = Topology::beam_splitter;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Deterministic per-stage sub-seed: splitmix64 stream seeded with the
/// master seed, output number (stage+1). Stages: 0 source, 1 splitter,
/// 2 detector channel 1, 3 detector channel 2.
std::uint64_t stage_seed(std::uint64_t master, std::uint64_t stage);

/// Homogeneous Poisson process of the given rate via exponential
/// inter-arrival sampling (mt19937_64, inverse CDF). Same seed, same times.
EventTimes simulate_source(double flux_hz, double duration_s, std::uint64_t seed);

/// Independent Bernoulli(efficiency) thinning followed by non-paralyzable
/// dead time: an event closer than dead_time_ns after the last registered
/// event is discarded (a discarded event does not extend the dead window).
EventTimes apply_detector(const EventTimes& ev, double efficiency, double dead_time_ns,
                          std::uint64_t seed);

/// Bernoulli partition of the events: channel 1 with probability ratio,
/// channel 2 otherwise. No photon appears in both outputs.
std::pair<EventTimes, EventTimes> beam_split(const EventTimes& ev, double ratio,
                                             std::uint64_t seed);

/// Counts per half-open bin [k w, (k+1) w); boundary events belong to the
/// later bin; ceil(duration/w) bins in total.
std::vector<std::uint32_t> bin_events(const EventTimes& ev, double bin_width_ns);

/// Chunked runner for the full chain source -> (split) -> per-channel
/// detector -> binning. Chunk boundaries do not affect the output: draining
/// in chunks is bit-identical to one run_experiment call.
class ExperimentStream {
 public:
  explicit ExperimentStream(const SimConfig& cfg);
  ~ExperimentStream();
  ExperimentStream(ExperimentStream&&) noexcept;
  ExperimentStream& operator=(ExperimentStream&&) noexcept;

  std::size_t total_bins() const;
  std::size_t bins_produced() const;

  /// Fills `chunk` with up to max_bins further bins; returns the number of
  /// bins produced (0 once the stream is exhausted).
  std::size_t next(BinnedCountStream& chunk, std::size_t max_bins);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// The whole chain in one piece (materializes every bin; for long runs at
/// ns-scale bins prefer ExperimentStream).
BinnedCountStream run_experiment(const SimConfig& cfg);

}  // namespace spolight::sim
