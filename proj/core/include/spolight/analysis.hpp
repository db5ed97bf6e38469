#pragma once
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <spolight/count_stream.hpp>

namespace spolight::analysis {

enum class Mode { auto_correlation, cross_correlation };

/// Delayed correlation K(d) and reduced covariance R(d) = K(d) - 1, with
/// run-split standard errors where applicable. delay_ns mirrors delays in
/// physical units (d * bin_width).
struct CorrelationResult {
  Mode mode = Mode::cross_correlation;
  int channel = 0;  ///< source channel for auto mode
  std::vector<std::size_t> delays;
  std::vector<double> delay_ns;
  std::vector<double> K;
  std::vector<double> R;
  std::vector<double> stderr_R;
};

/// K(d) = [sum_t A(t) B(t+d) / (T-d)] / ([sum A / T] [sum B / T]) over the
/// whole stream; A,B are the two channels (cross) or one channel with itself
/// (auto). Throws if either mean is zero or a delay reaches the stream end.
/// Auto-correlation at d = 0 includes the self-product and is biased high;
/// default delay grids start at 1 for auto mode.
CorrelationResult correlation(const BinnedCountStream& stream,
                              std::span<const std::size_t> delays, Mode mode, int channel = 0);

/// Variance-to-mean ratio of the counts (population variance, denominator T).
double empirical_fano(std::span<const std::uint32_t> counts);

/// Splits the stream into n_runs contiguous equal segments (trailing
/// remainder dropped), evaluates K per segment, and reports the segment mean
/// with stderr = sample standard deviation / sqrt(n_runs).
CorrelationResult run_split(const BinnedCountStream& stream, std::size_t n_runs,
                            std::span<const std::size_t> delays, Mode mode, int channel = 0);

/// Streaming correlation over chunked input: add() consumes consecutive
/// chunks of one continuous stream (bridging products across chunk edges),
/// result() matches correlation() on the concatenated stream exactly.
class CorrelationAccumulator {
 public:
  CorrelationAccumulator(std::vector<std::size_t> delays, Mode mode, int channel = 0);
  ~CorrelationAccumulator();
  CorrelationAccumulator(CorrelationAccumulator&&) noexcept;
  CorrelationAccumulator& operator=(CorrelationAccumulator&&) noexcept;

  void add(const BinnedCountStream& chunk);
  std::size_t bins_consumed() const;
  CorrelationResult result() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Streaming mean/Fano over chunked counts.
struct FanoAccumulator {
  std::uint64_t sum = 0;
  std::uint64_t sum_sq = 0;
  std::uint64_t bins = 0;

  void add(std::span<const std::uint32_t> counts);
  double mean() const;
  double fano() const;
};

}  // namespace spolight::analysis
