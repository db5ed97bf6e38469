#include <spolight/analysis.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace spolight::analysis {

namespace {

struct ChannelPair {
  std::span<const std::uint32_t> a;
  std::span<const std::uint32_t> b;
};

ChannelPair pick_channels(const BinnedCountStream& stream, Mode mode, int channel) {
  stream.validate();
  if (mode == Mode::cross_correlation) {
    if (stream.channels.size() != 2)
      throw std::invalid_argument("correlation: cross mode needs a 2-channel stream");
    return {stream.channels[0], stream.channels[1]};
  }
  if (channel < 0 || channel >= static_cast<int>(stream.channels.size()))
    throw std::invalid_argument(fmt::format("correlation: no channel {}", channel));
  return {stream.channels[channel], stream.channels[channel]};
}

std::uint64_t span_sum(std::span<const std::uint32_t> v) {
  std::uint64_t s = 0;
  for (std::uint32_t c : v) s += c;
  return s;
}

// sum_t A(t) B(t+d) for each delay, iterating only the occupied bins of A.
std::vector<std::uint64_t> delayed_products(std::span<const std::uint32_t> a,
                                            std::span<const std::uint32_t> b,
                                            std::span<const std::size_t> delays) {
  std::vector<std::uint64_t> products(delays.size(), 0);
  const std::size_t t_len = a.size();
  for (std::size_t j = 0; j < t_len; ++j) {
    const std::uint64_t av = a[j];
    if (av == 0) continue;
    for (std::size_t di = 0; di < delays.size(); ++di) {
      const std::size_t target = j + delays[di];
      if (target < t_len) products[di] += av * b[target];
    }
  }
  return products;
}

// K(d) = [P_d/(T-d)] / [(SA/T)(SB/T)] evaluated as one long double quotient
// so that integer rescaling of the counts leaves it exactly invariant.
double k_statistic(std::uint64_t product, std::size_t t_len, std::size_t delay, std::uint64_t sa,
                   std::uint64_t sb) {
  const long double num = static_cast<long double>(product) * static_cast<long double>(t_len)
                          * static_cast<long double>(t_len);
  const long double den = static_cast<long double>(t_len - delay) * static_cast<long double>(sa)
                          * static_cast<long double>(sb);
  return static_cast<double>(num / den);
}

void check_delays(std::span<const std::size_t> delays, std::size_t t_len) {
  if (delays.empty()) throw std::invalid_argument("correlation: empty delay list");
  for (std::size_t d : delays)
    if (d >= t_len)
      throw std::invalid_argument(
          fmt::format("correlation: delay {} reaches past the {} available bins", d, t_len));
}

CorrelationResult shell(const BinnedCountStream& stream, std::span<const std::size_t> delays,
                        Mode mode, int channel) {
  CorrelationResult r;
  r.mode = mode;
  r.channel = channel;
  r.delays.assign(delays.begin(), delays.end());
  r.delay_ns.reserve(delays.size());
  for (std::size_t d : delays) r.delay_ns.push_back(static_cast<double>(d) * stream.bin_width_ns);
  return r;
}

}  // namespace

CorrelationResult correlation(const BinnedCountStream& stream,
                              std::span<const std::size_t> delays, Mode mode, int channel) {
  const ChannelPair ch = pick_channels(stream, mode, channel);
  check_delays(delays, ch.a.size());
  const std::uint64_t sa = span_sum(ch.a);
  const std::uint64_t sb = mode == Mode::auto_correlation ? sa : span_sum(ch.b);
  if (sa == 0 || sb == 0)
    throw std::runtime_error("correlation: a channel has zero mean, K is undefined");

  CorrelationResult r = shell(stream, delays, mode, channel);
  const auto products = delayed_products(ch.a, ch.b, delays);
  for (std::size_t i = 0; i < delays.size(); ++i) {
    const double k = k_statistic(products[i], ch.a.size(), delays[i], sa, sb);
    r.K.push_back(k);
    r.R.push_back(k - 1.0);
    r.stderr_R.push_back(0.0);
  }
  return r;
}

double empirical_fano(std::span<const std::uint32_t> counts) {
  if (counts.empty()) throw std::invalid_argument("empirical_fano: empty counts");
  std::uint64_t s = 0, sq = 0;
  for (std::uint32_t c : counts) {
    s += c;
    sq += static_cast<std::uint64_t>(c) * c;
  }
  if (s == 0) throw std::runtime_error("empirical_fano: zero mean");
  const long double t_len = static_cast<long double>(counts.size());
  const long double mean = static_cast<long double>(s) / t_len;
  const long double var = static_cast<long double>(sq) / t_len - mean * mean;
  return static_cast<double>(var / mean);
}

CorrelationResult run_split(const BinnedCountStream& stream, std::size_t n_runs,
                            std::span<const std::size_t> delays, Mode mode, int channel) {
  const ChannelPair ch = pick_channels(stream, mode, channel);
  if (n_runs < 2) throw std::invalid_argument("run_split: n_runs must be >= 2");
  check_delays(delays, ch.a.size());
  const std::size_t seg = ch.a.size() / n_runs;  // trailing remainder dropped
  const std::size_t max_delay = *std::max_element(delays.begin(), delays.end());
  if (seg < max_delay + 2)
    throw std::invalid_argument(fmt::format(
        "run_split: segments of {} bins are too short for delay {}", seg, max_delay));

  std::vector<std::vector<double>> ks(delays.size());
  for (std::size_t r = 0; r < n_runs; ++r) {
    const auto a = ch.a.subspan(r * seg, seg);
    const auto b = ch.b.subspan(r * seg, seg);
    const std::uint64_t sa = span_sum(a);
    const std::uint64_t sb = mode == Mode::auto_correlation ? sa : span_sum(b);
    if (sa == 0 || sb == 0)
      throw std::runtime_error(fmt::format("run_split: segment {} has a zero-mean channel", r));
    const auto products = delayed_products(a, b, delays);
    for (std::size_t i = 0; i < delays.size(); ++i)
      ks[i].push_back(k_statistic(products[i], seg, delays[i], sa, sb));
  }

  CorrelationResult out = shell(stream, delays, mode, channel);
  for (std::size_t i = 0; i < delays.size(); ++i) {
    // accumulate around the first segment so identical segments give m = k
    // and stderr = 0 exactly
    double shift_sum = 0.0;
    for (double k : ks[i]) shift_sum += k - ks[i][0];
    const double m = ks[i][0] + shift_sum / static_cast<double>(n_runs);
    double ss = 0.0;
    for (double k : ks[i]) ss += (k - m) * (k - m);
    const double sd = std::sqrt(ss / static_cast<double>(n_runs - 1));
    out.K.push_back(m);
    out.R.push_back(m - 1.0);
    out.stderr_R.push_back(sd / std::sqrt(static_cast<double>(n_runs)));
  }
  return out;
}

struct CorrelationAccumulator::Impl {
  std::vector<std::size_t> delays;
  Mode mode;
  int channel;
  std::size_t max_delay = 0;

  std::vector<std::uint64_t> products;
  std::uint64_t sa = 0, sb = 0;
  std::size_t t_len = 0;
  double bin_width_ns = 0.0;

  // Last max_delay bins of the consumed stream, to bridge chunk boundaries.
  std::vector<std::uint32_t> tail_a, tail_b;

  Impl(std::vector<std::size_t> d, Mode m, int c)
      : delays(std::move(d)), mode(m), channel(c), products(delays.size(), 0) {
    if (delays.empty()) throw std::invalid_argument("CorrelationAccumulator: empty delay list");
    max_delay = *std::max_element(delays.begin(), delays.end());
  }

  void add(const BinnedCountStream& chunk) {
    const ChannelPair ch = pick_channels(chunk, mode, channel);
    if (t_len == 0)
      bin_width_ns = chunk.bin_width_ns;
    else if (bin_width_ns != chunk.bin_width_ns)
      throw std::invalid_argument("CorrelationAccumulator: bin width changed between chunks");

    const std::size_t len = ch.a.size();
    // Pairs with both sides inside this chunk.
    const auto inner = delayed_products(ch.a, ch.b, delays);
    for (std::size_t i = 0; i < delays.size(); ++i) products[i] += inner[i];
    // Pairs whose A side is in the tail of earlier chunks.
    for (std::size_t i = 0; i < delays.size(); ++i) {
      const std::size_t d = delays[i];
      const std::size_t reach = std::min(d, tail_a.size());
      for (std::size_t k = 1; k <= reach; ++k) {
        if (d - k >= len) continue;
        products[i] += static_cast<std::uint64_t>(tail_a[tail_a.size() - k]) * ch.b[d - k];
      }
    }
    sa += span_sum(ch.a);
    sb = mode == Mode::auto_correlation ? sa : sb + span_sum(ch.b);
    t_len += len;

    append_tail(tail_a, ch.a);
    if (mode == Mode::cross_correlation) append_tail(tail_b, ch.b);
  }

  void append_tail(std::vector<std::uint32_t>& tail, std::span<const std::uint32_t> chunk) const {
    if (chunk.size() >= max_delay) {
      tail.assign(chunk.end() - max_delay, chunk.end());
      return;
    }
    tail.insert(tail.end(), chunk.begin(), chunk.end());
    if (tail.size() > max_delay) tail.erase(tail.begin(), tail.end() - max_delay);
  }

  CorrelationResult result() const {
    if (t_len == 0) throw std::runtime_error("CorrelationAccumulator: no chunks added");
    check_delays(delays, t_len);
    if (sa == 0 || sb == 0)
      throw std::runtime_error("CorrelationAccumulator: a channel has zero mean");
    BinnedCountStream meta;
    meta.bin_width_ns = bin_width_ns;
    meta.channels.resize(1);
    CorrelationResult r = shell(meta, delays, mode, channel);
    for (std::size_t i = 0; i < delays.size(); ++i) {
      const double k = k_statistic(products[i], t_len, delays[i], sa, sb);
      r.K.push_back(k);
      r.R.push_back(k - 1.0);
      r.stderr_R.push_back(0.0);
    }
    return r;
  }
};

CorrelationAccumulator::CorrelationAccumulator(std::vector<std::size_t> delays, Mode mode,
                                               int channel)
    : impl_(std::make_unique<Impl>(std::move(delays), mode, channel)) {}
CorrelationAccumulator::~CorrelationAccumulator() = default;
CorrelationAccumulator::CorrelationAccumulator(CorrelationAccumulator&&) noexcept = default;
CorrelationAccumulator& CorrelationAccumulator::operator=(CorrelationAccumulator&&) noexcept =
    default;

void CorrelationAccumulator::add(const BinnedCountStream& chunk) { impl_->add(chunk); }
std::size_t CorrelationAccumulator::bins_consumed() const { return impl_->t_len; }
CorrelationResult CorrelationAccumulator::result() const { return impl_->result(); }

void FanoAccumulator::add(std::span<const std::uint32_t> counts) {
  for (std::uint32_t c : counts) {
    sum += c;
    sum_sq += static_cast<std::uint64_t>(c) * c;
  }
  bins += counts.size();
}

double FanoAccumulator::mean() const {
  if (bins == 0) throw std::runtime_error("FanoAccumulator: no counts added");
  return static_cast<double>(static_cast<long double>(sum) / static_cast<long double>(bins));
}

double FanoAccumulator::fano() const {
  if (bins == 0) throw std::runtime_error("FanoAccumulator: no counts added");
  if (sum == 0) throw std::runtime_error("FanoAccumulator: zero mean");
  const long double t_len = static_cast<long double>(bins);
  const long double m = static_cast<long double>(sum) / t_len;
  const long double var = static_cast<long double>(sum_sq) / t_len - m * m;
  return static_cast<double>(var / m);
}

}  // namespace spolight::analysis
