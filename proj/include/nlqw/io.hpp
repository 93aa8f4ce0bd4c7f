#pragma once

// CSV and JSON output. CSV numbers carry 12 significant digits; JSON uses
// shortest round-trip decimals. Both are byte-stable for identical input.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "edge_map.hpp"
#include "error.hpp"
#include "evolution.hpp"
#include "experiments.hpp"
#include "lattice.hpp"

namespace nlqw {

enum class Format { csv, json };

inline Format format_from_string(const std::string& s)
{
    if (s == "csv")
        return Format::csv;
    if (s == "json")
        return Format::json;
    throw usage_error("unknown output format '" + s + "' (expected csv or json)");
}

/// One table cell. monostate renders as an empty CSV field / JSON null.
using Cell = std::variant<std::monostate, std::int64_t, double, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row)
    {
        if (row.size() != columns.size())
            throw usage_error("table row width does not match header");
        rows.push_back(std::move(row));
    }
};

inline std::string format_sig12(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

namespace detail {

inline std::string csv_cell(const Cell& c)
{
    struct V {
        std::string operator()(std::monostate) const { return {}; }
        std::string operator()(std::int64_t v) const { return std::to_string(v); }
        std::string operator()(double v) const { return format_sig12(v); }
        std::string operator()(const std::string& s) const
        {
            if (s.find_first_of(",\"\n") == std::string::npos)
                return s;
            std::string q = "\"";
            for (char ch : s) {
                if (ch == '"')
                    q += '"';
                q += ch;
            }
            return q + '"';
        }
    };
    return std::visit(V{}, c);
}

inline nlohmann::json json_cell(const Cell& c)
{
    struct V {
        nlohmann::json operator()(std::monostate) const { return nullptr; }
        nlohmann::json operator()(std::int64_t v) const { return v; }
        nlohmann::json operator()(double v) const
        {
            if (!std::isfinite(v))
                return nullptr;
            return v;
        }
        nlohmann::json operator()(const std::string& s) const { return s; }
    };
    return std::visit(V{}, c);
}

} // namespace detail

inline void write_csv(std::ostream& os, const Table& t)
{
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            os << (i ? "," : "") << detail::csv_cell(row[i]);
        os << '\n';
    }
}

/// {"columns": [...], "rows": [[...], ...]}
inline nlohmann::json table_to_json(const Table& t)
{
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : t.rows) {
        nlohmann::json r = nlohmann::json::array();
        for (const auto& c : row)
            r.push_back(detail::json_cell(c));
        rows.push_back(std::move(r));
    }
    return {{"columns", t.columns}, {"rows", std::move(rows)}};
}

inline void write_table(std::ostream& os, const Table& t, Format f)
{
    if (f == Format::csv)
        write_csv(os, t);
    else
        os << table_to_json(t).dump(1) << '\n';
}

// --------------------------------------------------------------------------
// Schemas

/// t, linf, l2
inline Table trajectory_table(const Trajectory& tr)
{
    Table t{{"t", "linf", "l2"}, {}};
    for (const auto& o : tr.recorded)
        t.add({o.time, o.linf, o.l2});
    return t;
}

/// t, linf, log10t, log10linf; the logs are blank where undefined.
inline Table decay_table(const TimeSeries& linf)
{
    Table t{{"t", "linf", "log10t", "log10linf"}, {}};
    for (std::size_t i = 0; i < linf.size(); ++i) {
        const double v = linf.value[i];
        const Cell lt = linf.t[i] > 0 ? Cell{std::log10(static_cast<double>(linf.t[i]))} : Cell{};
        const Cell lv = v > 0.0 ? Cell{std::log10(v)} : Cell{};
        t.add({linf.t[i], v, lt, lv});
    }
    return t;
}

inline Table series_table(const TimeSeries& s, const std::string& value_column)
{
    Table t{{"t", value_column}, {}};
    for (std::size_t i = 0; i < s.size(); ++i)
        t.add({s.t[i], s.value[i]});
    return t;
}

/// t, site, component, amplitude (magnitude |u_j|)
inline Table peaks_table(const PeakTrack& tr)
{
    Table t{{"t", "site", "component", "amplitude"}, {}};
    for (const auto& p : tr.points)
        t.add({p.t, static_cast<std::int64_t>(p.site),
               static_cast<std::int64_t>(index_of(p.component)), std::abs(p.value)});
    return t;
}

inline Table intervals_table(const BasinDecomposition& b)
{
    Table t{{"m", "index", "lo", "hi"}, {}};
    for (std::size_t i = 0; i < b.intervals.size(); ++i)
        t.add({static_cast<std::int64_t>(b.m), static_cast<std::int64_t>(i), b.intervals[i].lo,
               b.intervals[i].hi});
    return t;
}

inline Table points_table(const std::vector<double>& xs, const std::string& column)
{
    Table t{{"index", column}, {}};
    for (std::size_t i = 0; i < xs.size(); ++i)
        t.add({static_cast<std::int64_t>(i + 1), xs[i]});
    return t;
}

// --------------------------------------------------------------------------
// Snapshots

/// {"time": t, "origin": o, "cells": [[re1, im1, re2, im2], ...]}, trimmed.
inline nlohmann::json snapshot_to_json(const FieldView& v)
{
    const SpinorField f = SpinorField{v}.trimmed();
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& s : f.cells())
        cells.push_back({s.c1.real(), s.c1.imag(), s.c2.real(), s.c2.imag()});
    return {{"time", v.time()}, {"origin", f.origin()}, {"cells", std::move(cells)}};
}

inline SpinorField snapshot_from_json(const nlohmann::json& j)
{
    try {
        std::vector<Spinor> cells;
        for (const auto& c : j.at("cells")) {
            if (c.size() != 4)
                throw usage_error("snapshot cell must have 4 entries");
            cells.push_back({{c[0].get<double>(), c[1].get<double>()},
                             {c[2].get<double>(), c[3].get<double>()}});
        }
        return SpinorField{j.at("origin").get<site_t>(), std::move(cells),
                           j.at("time").get<std::int64_t>()};
    } catch (const nlohmann::json::exception& e) {
        throw usage_error(std::string("malformed snapshot: ") + e.what());
    }
}

// --------------------------------------------------------------------------
// Files

inline void write_text_file(const std::string& path, const std::string& content)
{
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os)
        throw io_error("cannot open '" + path + "' for writing");
    os << content;
    os.flush();
    if (!os)
        throw io_error("write to '" + path + "' failed");
}

inline std::string render(const Table& t, Format f)
{
    std::ostringstream os;
    write_table(os, t, f);
    return os.str();
}

} // namespace nlqw
