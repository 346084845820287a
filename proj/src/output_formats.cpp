#include "kecone/output_formats.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace kecone::io {

namespace {

Cell optional_cell(const std::optional<double>& v) {
    if (v) {
        return *v;
    }
    return std::monostate{};
}

std::string csv_field(const Cell& cell) {
    if (const auto* d = std::get_if<double>(&cell)) {
        return format_number(*d);
    }
    if (const auto* s = std::get_if<std::string>(&cell)) {
        return *s;
    }
    return {};
}

// strtod, unlike stod, accepts subnormal results.
double rounded(double value) { return std::strtod(format_number(value).c_str(), nullptr); }

nlohmann::json json_value(const Cell& cell) {
    if (const auto* d = std::get_if<double>(&cell)) {
        if (!std::isfinite(*d)) {
            return nullptr;
        }
        return rounded(*d);
    }
    if (const auto* s = std::get_if<std::string>(&cell)) {
        return *s;
    }
    return nullptr;
}

}  // namespace

std::string format_number(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

void write_csv(std::ostream& os, const Table& table) {
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        os << (i ? "," : "") << table.header[i];
    }
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            os << (i ? "," : "") << csv_field(row[i]);
        }
        os << '\n';
    }
}

void write_json(std::ostream& os, const Table& table) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& row : table.rows) {
        nlohmann::json obj = nlohmann::json::object();
        for (std::size_t i = 0; i < row.size() && i < table.header.size(); ++i) {
            obj[table.header[i]] = json_value(row[i]);
        }
        out.push_back(std::move(obj));
    }
    os << out.dump(1) << '\n';
}

Table trajectory_table(std::span<const PhaseState> samples) {
    Table t{{"r", "f", "h"}, {}};
    t.rows.reserve(samples.size());
    for (const auto& s : samples) {
        t.rows.push_back({s.r, s.f, s.h});
    }
    return t;
}

Table sweep_table(std::span<const SweepRecord> records) {
    Table t{{"tau", "alpha_sq", "beta", "t_max", "stabilization_residual", "status"}, {}};
    t.rows.reserve(records.size());
    for (const auto& r : records) {
        t.rows.push_back({r.tau, optional_cell(r.alpha_sq), optional_cell(r.beta),
                          optional_cell(r.t_max), optional_cell(r.stabilization_residual),
                          std::string(to_string(r.status))});
    }
    return t;
}

Table profile_table(const MetricProfile& profile) {
    Table t{{"t", "r", "f", "R", "a", "b", "c", "c_sq"}, {}};
    t.rows.reserve(profile.size());
    for (const auto& row : profile.rows()) {
        t.rows.push_back({row.t, row.r, row.f, row.R, row.a, row.b, row.c, row.c_sq()});
    }
    return t;
}

Table bubble_table(std::span<const BubbleRow> rows) {
    Table t{{"r", "f_scaled", "h_scaled", "f_target", "h_target"}, {}};
    t.rows.reserve(rows.size());
    for (const auto& row : rows) {
        const BubbleTarget target = eval_bubble_targets(row.r);
        t.rows.push_back({row.r, row.f_scaled, row.h_scaled, target.f_limit, target.h_limit});
    }
    return t;
}

Table reference_table(ReferenceModel model, double param_min, double param_max,
                      std::size_t samples) {
    if (samples == 0) {
        throw std::invalid_argument("reference: samples must be positive");
    }
    if (!(param_min <= param_max)) {
        throw std::invalid_argument("reference: param-min must not exceed param-max");
    }
    Table t{{"param", "a", "b", "c", "f"}, {}};
    t.rows.reserve(samples);
    for (double p : linear_grid(param_min, param_max, samples)) {
        const MetricCoefficients abc = eval_abc_of_t(model, p);
        const double f = abc.a * abc.b;
        t.rows.push_back(
            {p, abc.a, abc.b, abc.c, std::isfinite(f) ? Cell{f} : Cell{std::monostate{}}});
    }
    return t;
}

void write_report_text(std::ostream& os, const ComparisonReport& report) {
    os << "model = " << to_string(report.model) << '\n'
       << "sup_error_f = " << format_number(report.sup_error_f) << '\n'
       << "sup_error_R = " << format_number(report.sup_error_R) << '\n'
       << "sup_error_csq = " << format_number(report.sup_error_csq) << '\n'
       << "sample_count = " << report.sample_count << '\n';
}

void write_report_json(std::ostream& os, const ComparisonReport& report) {
    nlohmann::json j = {
        {"model", std::string(to_string(report.model))},
        {"sup_error_f", rounded(report.sup_error_f)},
        {"sup_error_R", rounded(report.sup_error_R)},
        {"sup_error_csq", rounded(report.sup_error_csq)},
        {"sample_count", report.sample_count},
    };
    os << j.dump(1) << '\n';
}

std::string gnuplot_script(const Table& table, const std::string& data_path,
                           const std::string& title) {
    std::ostringstream os;
    os << "# gnuplot script for " << data_path << '\n'
       << "set datafile separator ','\n"
       << "set key autotitle columnhead\n"
       << "set title '" << title << "'\n";
    if (!table.header.empty()) {
        os << "set xlabel '" << table.header.front() << "'\n";
    }
    os << "plot";
    bool first = true;
    for (std::size_t col = 2; col <= table.header.size(); ++col) {
        if (table.header[col - 1] == "status") {
            continue;
        }
        os << (first ? " " : ", \\\n     ") << "'" << data_path << "' using 1:" << col
           << " with linespoints";
        first = false;
    }
    os << '\n';
    return os.str();
}

}  // namespace kecone::io
