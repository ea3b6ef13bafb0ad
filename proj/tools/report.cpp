#include "report.hpp"

#include <cmath>
#include <cstdio>

namespace oscfar::cli {

namespace {

std::string json_string(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"':
                out += "\\\"";
                break;
            case '\\':
                out += "\\\\";
                break;
            case '\n':
                out += "\\n";
                break;
            default:
                out += c;
        }
    }
    return out + "\"";
}

std::string json_value(const Value& v) {
    if (const auto* s = std::get_if<std::string>(&v)) {
        return json_string(*s);
    }
    if (const auto* d = std::get_if<double>(&v); d != nullptr && !std::isfinite(*d)) {
        return "null";
    }
    return format_value(v);
}

void json_object(const Row& row, std::ostream& out, const char* indent) {
    out << "{";
    for (std::size_t i = 0; i < row.size(); ++i) {
        out << (i == 0 ? "\n" : ",\n") << indent << "  " << json_string(row[i].first) << ": "
            << json_value(row[i].second);
    }
    out << (row.empty() ? "}" : "\n" + std::string(indent) + "}");
}

}  // namespace

std::string format_value(const Value& v) {
    struct Visitor {
        std::string operator()(std::int64_t x) const { return std::to_string(x); }
        std::string operator()(std::uint64_t x) const { return std::to_string(x); }
        std::string operator()(bool x) const { return x ? "true" : "false"; }
        std::string operator()(const std::string& x) const { return x; }
        std::string operator()(double x) const {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", x);
            return buf;
        }
    };
    return std::visit(Visitor{}, v);
}

void write_report(const Report& report, Format format, std::ostream& out) {
    switch (format) {
        case Format::plain: {
            for (const auto& note : report.notes) {
                out << "# " << note << "\n";
            }
            for (std::size_t r = 0; r < report.results.size(); ++r) {
                if (r > 0) {
                    out << "\n";
                }
                for (const auto& [key, value] : report.results[r]) {
                    out << key << " = " << format_value(value) << "\n";
                }
            }
            break;
        }
        case Format::csv: {
            if (report.results.empty()) {
                break;
            }
            const Row& first = report.results.front();
            for (std::size_t i = 0; i < first.size(); ++i) {
                out << (i ? "," : "") << first[i].first;
            }
            out << "\n";
            for (const auto& row : report.results) {
                for (std::size_t i = 0; i < row.size(); ++i) {
                    out << (i ? "," : "") << format_value(row[i].second);
                }
                out << "\n";
            }
            break;
        }
        case Format::json: {
            out << "{\n  \"command\": " << json_string(report.command) << ",\n  \"parameters\": ";
            json_object(report.parameters, out, "  ");
            out << ",\n  \"results\": [";
            for (std::size_t r = 0; r < report.results.size(); ++r) {
                out << (r ? ",\n    " : "\n    ");
                json_object(report.results[r], out, "    ");
            }
            out << (report.results.empty() ? "]" : "\n  ]");
            if (!report.notes.empty()) {
                out << ",\n  \"notes\": [";
                for (std::size_t i = 0; i < report.notes.size(); ++i) {
                    out << (i ? ", " : "") << json_string(report.notes[i]);
                }
                out << "]";
            }
            out << "\n}\n";
            break;
        }
    }
}

}  // namespace oscfar::cli
