#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

#include "wbq/errors.hpp"

namespace wbq {

// Shortest decimal form that parses back to the same double; dot separator,
// locale independent.
inline std::string csv_num(double v) {
    char buf[64];
    for (int prec : {15, 16, 17}) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

// Header-first CSV writer with minimal quoting (fields containing comma,
// quote or newline get quoted, embedded quotes doubled).
class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header)
        : out_(path) {
        if (!out_) throw ConfigError("cannot open output file: " + path);
        columns_ = header.size();
        write_row(header);
    }

    void row(const std::vector<std::string>& fields) {
        if (fields.size() != columns_)
            throw ModelError("csv row width " + std::to_string(fields.size()) +
                             " does not match header width " + std::to_string(columns_));
        write_row(fields);
    }

  private:
    void write_row(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out_ << ',';
            out_ << quote(fields[i]);
        }
        out_ << '\n';
    }

    static std::string quote(const std::string& f) {
        if (f.find_first_of(",\"\n") == std::string::npos) return f;
        std::string q = "\"";
        for (char c : f) {
            if (c == '"') q += '"';
            q += c;
        }
        q += '"';
        return q;
    }

    std::ofstream out_;
    std::size_t columns_;
};

}  // namespace wbq
