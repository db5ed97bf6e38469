#pragma once
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <spolight/analysis.hpp>
#include <spolight/count_stream.hpp>
#include <spolight/counting.hpp>

namespace spolight::io {

/// Streaming writer for the binned-count CSV:
///   # spolight-binned v1
///   # bin_width_ns=<decimal>
///   # channels=<1|2>
///   bin,ch1[,ch2]
///   0,....
/// Rows carry ascending contiguous bin indices from 0.
class BinnedCsvWriter {
 public:
  BinnedCsvWriter(std::ostream& out, double bin_width_ns, int n_channels);
  void add_chunk(const BinnedCountStream& chunk);
  std::size_t rows_written() const { return next_bin_; }

 private:
  std::ostream& out_;
  int n_channels_;
  std::size_t next_bin_ = 0;
};

void write_binned_csv(std::ostream& out, const BinnedCountStream& stream);

/// Strict parser of the grammar above; any deviation throws with a
/// "malformed binned CSV" diagnostic naming the offending line.
BinnedCountStream read_binned_csv(std::istream& in);

/// Correlation CSV: header delay_bins,delay_ns,K,R,stderr_R; one row per
/// delay, 9 significant digits.
void write_correlation_csv(std::ostream& out, const analysis::CorrelationResult& result);

/// Sweep CSV: header s,lambda,x,value; undefined values print as nan.
void write_sweep_csv(std::ostream& out, std::span<const counting::SweepRow> rows);

/// A parsed numeric table (for plotting): named columns, double cells.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  int column_index(const std::string& name) const;  // -1 when missing
};

/// Reads a generic numeric CSV, skipping '#' comment lines.
Table read_csv_table(std::istream& in);

}  // namespace spolight::io
