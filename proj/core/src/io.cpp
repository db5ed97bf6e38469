#include <spolight/io.hpp>

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace spolight::io {

namespace {

[[noreturn]] void malformed(std::size_t line_no, const std::string& what) {
  throw std::runtime_error(fmt::format("malformed binned CSV: line {}: {}", line_no, what));
}

bool get_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

std::uint64_t parse_uint(std::string_view field, std::size_t line_no) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size())
    malformed(line_no, fmt::format("expected a nonnegative integer, got '{}'", field));
  return value;
}

}  // namespace

BinnedCsvWriter::BinnedCsvWriter(std::ostream& out, double bin_width_ns, int n_channels)
    : out_(out), n_channels_(n_channels) {
  if (n_channels != 1 && n_channels != 2)
    throw std::invalid_argument("BinnedCsvWriter: channels must be 1 or 2");
  if (!(bin_width_ns > 0))
    throw std::invalid_argument("BinnedCsvWriter: bin_width_ns must be > 0");
  fmt::print(out_, "# spolight-binned v1\n# bin_width_ns={}\n# channels={}\n", bin_width_ns,
             n_channels);
  fmt::print(out_, n_channels == 2 ? "bin,ch1,ch2\n" : "bin,ch1\n");
}

void BinnedCsvWriter::add_chunk(const BinnedCountStream& chunk) {
  chunk.validate();
  if (static_cast<int>(chunk.channels.size()) != n_channels_)
    throw std::invalid_argument("BinnedCsvWriter: chunk channel count mismatch");
  const std::size_t n = chunk.bins();
  for (std::size_t i = 0; i < n; ++i) {
    if (n_channels_ == 2)
      fmt::print(out_, "{},{},{}\n", next_bin_ + i, chunk.channels[0][i], chunk.channels[1][i]);
    else
      fmt::print(out_, "{},{}\n", next_bin_ + i, chunk.channels[0][i]);
  }
  next_bin_ += n;
}

void write_binned_csv(std::ostream& out, const BinnedCountStream& stream) {
  stream.validate();
  BinnedCsvWriter writer(out, stream.bin_width_ns, static_cast<int>(stream.channels.size()));
  writer.add_chunk(stream);
}

BinnedCountStream read_binned_csv(std::istream& in) {
  std::string line;
  if (!get_line(in, line) || line != "# spolight-binned v1")
    malformed(1, "expected magic '# spolight-binned v1'");

  if (!get_line(in, line) || !line.starts_with("# bin_width_ns="))
    malformed(2, "expected '# bin_width_ns=<decimal>'");
  BinnedCountStream out;
  try {
    std::size_t used = 0;
    out.bin_width_ns = std::stod(line.substr(15), &used);
    if (used != line.size() - 15) throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    malformed(2, "bin_width_ns is not a decimal number");
  }
  if (!(out.bin_width_ns > 0)) malformed(2, "bin_width_ns must be > 0");

  if (!get_line(in, line) || !line.starts_with("# channels="))
    malformed(3, "expected '# channels=<1|2>'");
  const std::string ch_str = line.substr(11);
  if (ch_str != "1" && ch_str != "2") malformed(3, "channels must be 1 or 2");
  const int n_channels = ch_str == "2" ? 2 : 1;
  out.channels.resize(n_channels);

  if (!get_line(in, line)) malformed(4, "missing column header");
  const std::string expected_header = n_channels == 2 ? "bin,ch1,ch2" : "bin,ch1";
  if (line != expected_header)
    malformed(4, fmt::format("expected header '{}', got '{}'", expected_header, line));

  std::size_t line_no = 4;
  std::size_t expected_bin = 0;
  while (get_line(in, line)) {
    ++line_no;
    if (line.empty()) malformed(line_no, "empty row");
    std::string_view row = line;
    std::size_t field_idx = 0;
    std::size_t start = 0;
    std::uint64_t fields[3] = {0, 0, 0};
    while (true) {
      const std::size_t comma = row.find(',', start);
      const std::string_view field =
          comma == std::string_view::npos ? row.substr(start) : row.substr(start, comma - start);
      if (field_idx >= 3) malformed(line_no, "too many columns");
      fields[field_idx++] = parse_uint(field, line_no);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (field_idx != static_cast<std::size_t>(n_channels) + 1)
      malformed(line_no, fmt::format("expected {} columns, got {}", n_channels + 1, field_idx));
    if (fields[0] != expected_bin)
      malformed(line_no,
                fmt::format("bin index {} out of order (expected {})", fields[0], expected_bin));
    for (int c = 0; c < n_channels; ++c) {
      if (fields[c + 1] > std::numeric_limits<std::uint32_t>::max())
        malformed(line_no, "count does not fit in 32 bits");
      out.channels[c].push_back(static_cast<std::uint32_t>(fields[c + 1]));
    }
    ++expected_bin;
  }
  if (expected_bin == 0) malformed(line_no + 1, "no data rows");
  return out;
}

void write_correlation_csv(std::ostream& out, const analysis::CorrelationResult& result) {
  fmt::print(out, "delay_bins,delay_ns,K,R,stderr_R\n");
  for (std::size_t i = 0; i < result.delays.size(); ++i)
    fmt::print(out, "{},{:.9g},{:.9g},{:.9g},{:.9g}\n", result.delays[i], result.delay_ns[i],
               result.K[i], result.R[i], result.stderr_R[i]);
}

void write_sweep_csv(std::ostream& out, std::span<const counting::SweepRow> rows) {
  fmt::print(out, "s,lambda,x,value\n");
  for (const counting::SweepRow& row : rows) {
    const double v = row.value.value_or(std::numeric_limits<double>::quiet_NaN());
    fmt::print(out, "{:.9g},{:.9g},{:.9g},{:.9g}\n", row.s, row.lambda, row.x, v);
  }
}

int Table::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return static_cast<int>(i);
  return -1;
}

Table read_csv_table(std::istream& in) {
  Table table;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (get_line(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      fields.push_back(line.substr(start, comma == std::string::npos ? comma : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (!have_header) {
      table.columns = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != table.columns.size())
      throw std::runtime_error(
          fmt::format("malformed CSV table: line {}: expected {} columns, got {}", line_no,
                      table.columns.size(), fields.size()));
    std::vector<double> row;
    row.reserve(fields.size());
    for (const std::string& f : fields) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(f, &used));
        if (used != f.size()) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        throw std::runtime_error(
            fmt::format("malformed CSV table: line {}: '{}' is not numeric", line_no, f));
      }
    }
    table.rows.push_back(std::move(row));
  }
  if (!have_header) throw std::runtime_error("malformed CSV table: no header row");
  return table;
}

}  // namespace spolight::io
