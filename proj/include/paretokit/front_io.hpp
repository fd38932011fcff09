#ifndef PARETOKIT_FRONT_IO_HPP
#define PARETOKIT_FRONT_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "paretokit/core.hpp"

namespace paretokit {

// One row of a front CSV. `method` and `param_json` are only written when the
// table carries sweep metadata.
struct FrontRecord {
    std::string method;
    std::string param_json;
    std::string id;
    Solution solution;
};

// Front CSV layout:
//   [method,param_json,]id,x_1..x_n,f_1..f_M,feasible
// Reals are written with 17 significant digits; feasible is 1 or 0.
struct FrontTable {
    bool with_method = false;
    Eigen::Index n = 0;
    Eigen::Index m = 0;
    std::vector<FrontRecord> rows;

    [[nodiscard]] Front front() const;
    [[nodiscard]] static FrontTable from_front(const Front& front);
};

[[nodiscard]] std::string format_real(double v);

void write_front_csv(std::ostream& out, const FrontTable& table);
void write_front_csv(std::ostream& out, const Front& front);

/// Parses a front CSV. Throws ParseError (1-based row number, header is row 1).
[[nodiscard]] FrontTable read_front_csv(std::istream& in);

[[nodiscard]] std::vector<std::string> split_csv_line(const std::string& line);
[[nodiscard]] std::string csv_field(const std::string& raw);

} // namespace paretokit

#endif
