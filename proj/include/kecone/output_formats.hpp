#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "kecone/metric_geometry.hpp"
#include "kecone/ode_core.hpp"
#include "kecone/reference_solutions.hpp"
#include "kecone/shooting.hpp"

namespace kecone::io {

/// Empty cells are written as blank CSV fields and JSON nulls.
using Cell = std::variant<std::monostate, double, std::string>;

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;
};

/// "%.12g", the fixed formatting used for every data file.
std::string format_number(double value);

/// Header row plus one line per row, comma separated, LF line endings.
void write_csv(std::ostream& os, const Table& table);

/// A JSON array with one object per row, keys from the header. Numbers are
/// rounded to the same 12 significant digits as the CSV form.
void write_json(std::ostream& os, const Table& table);

Table trajectory_table(std::span<const PhaseState> samples);
Table sweep_table(std::span<const SweepRecord> records);
Table profile_table(const MetricProfile& profile);
/// Columns r, f_scaled, h_scaled, f_target, h_target.
Table bubble_table(std::span<const BubbleRow> rows);
/// Closed-form samples on `samples` uniform points of [param_min, param_max].
/// Columns param, a, b, c, f with f = ab.
Table reference_table(ReferenceModel model, double param_min, double param_max,
                      std::size_t samples);

/// Flat `key = value` block.
void write_report_text(std::ostream& os, const ComparisonReport& report);
void write_report_json(std::ostream& os, const ComparisonReport& report);

/// Plain-text gnuplot script plotting columns of a CSV data file against its
/// first column.
std::string gnuplot_script(const Table& table, const std::string& data_path,
                           const std::string& title);

}  // namespace kecone::io
