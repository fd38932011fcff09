#include "paretokit/front_io.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>

namespace paretokit {

std::string format_real(double v)
{
    char buf[64];
    const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf, static_cast<std::size_t>(len));
}

Front FrontTable::front() const
{
    Front out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.solution);
    return out;
}

FrontTable FrontTable::from_front(const Front& front)
{
    FrontTable t;
    if (!front.empty()) {
        t.n = front.front().x.size();
        t.m = front.front().f.size();
    }
    for (std::size_t i = 0; i < front.size(); ++i) {
        t.rows.push_back(FrontRecord{{}, {}, std::to_string(i), front[i]});
    }
    return t;
}

std::string csv_field(const std::string& raw)
{
    if (raw.find_first_of(",\"\n") == std::string::npos) return raw;
    std::string out = "\"";
    for (char c : raw) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

void write_front_csv(std::ostream& out, const FrontTable& table)
{
    if (table.with_method) out << "method,param_json,";
    out << "id";
    for (Eigen::Index i = 0; i < table.n; ++i) out << ",x_" << i + 1;
    for (Eigen::Index i = 0; i < table.m; ++i) out << ",f_" << i + 1;
    out << ",feasible\n";
    for (const auto& r : table.rows) {
        if (r.solution.x.size() != table.n || r.solution.f.size() != table.m) {
            throw DimensionMismatch("front row " + r.id + " does not match the table shape");
        }
        if (table.with_method) out << csv_field(r.method) << ',' << csv_field(r.param_json) << ',';
        out << csv_field(r.id);
        for (Eigen::Index i = 0; i < table.n; ++i) out << ',' << format_real(r.solution.x[i]);
        for (Eigen::Index i = 0; i < table.m; ++i) out << ',' << format_real(r.solution.f[i]);
        out << ',' << (r.solution.feasible ? 1 : 0) << '\n';
    }
}

void write_front_csv(std::ostream& out, const Front& front)
{
    write_front_csv(out, FrontTable::from_front(front));
}

namespace {

double parse_real(const std::string& s, std::size_t row)
{
    double v = 0.0;
    const auto* first = s.data();
    const auto* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || s.empty()) throw ParseError(row, "'" + s + "' is not a number");
    return v;
}

} // namespace

FrontTable read_front_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line)) throw ParseError(1, "missing header");
    const auto header = split_csv_line(line);

    FrontTable t;
    std::size_t col = 0;
    if (header.size() >= 2 && header[0] == "method" && header[1] == "param_json") {
        t.with_method = true;
        col = 2;
    }
    if (col >= header.size() || header[col] != "id") throw ParseError(1, "expected an 'id' column");
    const std::size_t id_col = col++;
    const std::size_t x_begin = col;
    while (col < header.size() && header[col] == "x_" + std::to_string(col - x_begin + 1)) ++col;
    const std::size_t f_begin = col;
    while (col < header.size() && header[col] == "f_" + std::to_string(col - f_begin + 1)) ++col;
    t.n = static_cast<Eigen::Index>(f_begin - x_begin);
    t.m = static_cast<Eigen::Index>(col - f_begin);
    if (t.m == 0) throw ParseError(1, "no f_ columns");
    std::size_t feasible_col = header.size();
    if (col < header.size()) {
        if (header[col] != "feasible" || col + 1 != header.size()) {
            throw ParseError(1, "unexpected column '" + header[col] + "'");
        }
        feasible_col = col;
    }

    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            throw ParseError(row, "expected " + std::to_string(header.size()) + " fields, got " +
                                      std::to_string(fields.size()));
        }
        FrontRecord r;
        if (t.with_method) {
            r.method = fields[0];
            r.param_json = fields[1];
        }
        r.id = fields[id_col];
        r.solution.x.resize(t.n);
        r.solution.f.resize(t.m);
        for (Eigen::Index i = 0; i < t.n; ++i) r.solution.x[i] = parse_real(fields[x_begin + static_cast<std::size_t>(i)], row);
        for (Eigen::Index i = 0; i < t.m; ++i) {
            r.solution.f[i] = parse_real(fields[f_begin + static_cast<std::size_t>(i)], row);
            if (!std::isfinite(r.solution.f[i])) throw ParseError(row, "objective value is not finite");
        }
        if (feasible_col < fields.size()) {
            const auto& fv = fields[feasible_col];
            if (fv == "1" || fv == "true") {
                r.solution.feasible = true;
            } else if (fv == "0" || fv == "false") {
                r.solution.feasible = false;
            } else {
                throw ParseError(row, "feasible must be 0 or 1");
            }
        }
        t.rows.push_back(std::move(r));
    }
    return t;
}

} // namespace paretokit
