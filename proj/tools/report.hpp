#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace oscfar::cli {

enum class Format { plain, csv, json };

// Flat tabular report shared by all subcommands. Field values are integers,
// doubles, booleans or short tokens (no commas, quotes or whitespace), so the
// CSV needs no quoting.
using Value = std::variant<std::int64_t, std::uint64_t, double, bool, std::string>;
using Row = std::vector<std::pair<std::string, Value>>;

struct Report {
    std::string command;
    Row parameters;
    std::vector<Row> results;
    std::vector<std::string> notes;
};

// Doubles are printed with 17 significant digits in every format.
std::string format_value(const Value& v);

void write_report(const Report& report, Format format, std::ostream& out);

}  // namespace oscfar::cli
