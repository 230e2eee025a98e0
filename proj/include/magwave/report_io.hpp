#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "magwave/config.hpp"

namespace magwave {

using Json = nlohmann::ordered_json;

Json to_json(const ProfileDescriptor& p);
Json to_json(const FieldDescriptor& field);
Json to_json(const GridSpec& grid);
Json to_json(const EigenOptions& opts);
Json to_json(const RunConfig& cfg);

/// eigenvalues[], residuals[], flags[], grid, profile, field.
Json spectrum_json(const SpectrumResult& s, const GridSpec& grid, const ProfileDescriptor& p,
                   const FieldDescriptor& field);
Json to_json(const SweepResult& s);
Json to_json(const ConvergenceReport& r);

/// Comma-separated table with a mandatory header; doubles use 17 significant digits.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header);

  CsvWriter& operator<<(double v);
  CsvWriter& operator<<(long long v);
  CsvWriter& operator<<(int v) { return *this << static_cast<long long>(v); }
  CsvWriter& operator<<(bool v) { return *this << static_cast<long long>(v); }
  CsvWriter& operator<<(const std::string& v);
  /// Ends the current row; throws ArgumentError if the column count is off.
  void end_row();

 private:
  void sep();

  std::ostream& out_;
  std::size_t columns_;
  std::size_t filled_ = 0;
};

void write_spectrum_csv(std::ostream& out, const SpectrumResult& s);
void write_sweep_csv(std::ostream& out, const SweepResult& s);
/// Whitespace-separated columns alpha, lambda1_magnetic, lambda1_nonmagnetic.
void write_sweep_gnuplot(std::ostream& out, const SweepResult& s);

}  // namespace magwave
