#include "moa/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace moa {

namespace {

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path);
    }
    std::ostringstream content;
    content << in.rdbuf();
    return content.str();
}

std::vector<std::string> split_lines(const std::string& content) {
    std::vector<std::string> lines;
    std::string::size_type start = 0;
    while (start <= content.size()) {
        auto end = content.find('\n', start);
        if (end == std::string::npos) end = content.size();
        std::string line = content.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
        if (end == content.size()) break;
        start = end + 1;
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    return lines;
}

std::vector<std::string> split_tokens(const std::string& line, char separator) {
    std::vector<std::string> tokens;
    std::string::size_type start = 0;
    while (start <= line.size()) {
        auto end = line.find(separator, start);
        if (end == std::string::npos) end = line.size();
        std::string token = line.substr(start, end - start);
        const auto first = token.find_first_not_of(" \t");
        if (first == std::string::npos) {
            token.clear();
        } else {
            const auto last = token.find_last_not_of(" \t");
            token = token.substr(first, last - first + 1);
        }
        tokens.push_back(std::move(token));
        if (end == line.size()) break;
        start = end + 1;
    }
    return tokens;
}

double parse_real(const std::string& token, std::size_t line_number) {
    double value = 0.0;
    auto res = std::from_chars(token.data(), token.data() + token.size(), value);
    if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
        throw IoError("non-numeric token '" + token + "' on line " + std::to_string(line_number));
    }
    return value;
}

std::int64_t parse_int(const std::string& token, std::size_t line_number) {
    std::int64_t value = 0;
    auto res = std::from_chars(token.data(), token.data() + token.size(), value);
    if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
        throw IoError("non-integer token '" + token + "' on line " + std::to_string(line_number));
    }
    return value;
}

std::vector<std::string> whitespace_tokens(const std::string& line) {
    std::vector<std::string> tokens;
    std::istringstream in(line);
    std::string token;
    while (in >> token) tokens.push_back(token);
    return tokens;
}

std::string lowercase(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

DenseArray parse_matrix_market(const std::vector<std::string>& lines) {
    const auto header = whitespace_tokens(lines[0]);
    if (header.size() != 5 || header[0] != "%%MatrixMarket" || lowercase(header[1]) != "matrix") {
        throw IoError("malformed MatrixMarket header: " + lines[0]);
    }
    const std::string format = lowercase(header[2]);
    const std::string field = lowercase(header[3]);
    const std::string symmetry = lowercase(header[4]);
    if (format != "coordinate" && format != "array") {
        throw IoError("unsupported MatrixMarket format '" + format + "'");
    }
    if (field != "real") {
        throw IoError("unsupported MatrixMarket field '" + field + "' (only real)");
    }
    if (symmetry != "general" && symmetry != "symmetric") {
        throw IoError("unsupported MatrixMarket symmetry '" + symmetry + "'");
    }
    const bool symmetric = symmetry == "symmetric";

    std::size_t pos = 1;
    while (pos < lines.size() && (lines[pos].empty() || lines[pos][0] == '%')) ++pos;
    if (pos >= lines.size()) {
        throw IoError("MatrixMarket file has no size line");
    }
    const auto size_tokens = whitespace_tokens(lines[pos]);
    const std::size_t size_line = pos + 1;

    if (format == "coordinate") {
        if (size_tokens.size() != 3) {
            throw IoError("coordinate size line must be 'rows cols nnz', got: " + lines[pos]);
        }
        const std::int64_t rows = parse_int(size_tokens[0], size_line);
        const std::int64_t cols = parse_int(size_tokens[1], size_line);
        const std::int64_t nnz = parse_int(size_tokens[2], size_line);
        if (rows <= 0 || cols <= 0) {
            throw IoError("matrix dimensions must be positive");
        }
        std::vector<double> data(static_cast<std::size_t>(rows * cols), 0.0);
        std::set<std::pair<std::int64_t, std::int64_t>> filled;
        std::int64_t count = 0;
        for (++pos; pos < lines.size(); ++pos) {
            if (lines[pos].empty() || lines[pos][0] == '%') continue;
            const auto entry = whitespace_tokens(lines[pos]);
            if (entry.size() != 3) {
                throw IoError("coordinate entry must be 'row col value' on line " + std::to_string(pos + 1));
            }
            const std::int64_t row = parse_int(entry[0], pos + 1) - 1;
            const std::int64_t col = parse_int(entry[1], pos + 1) - 1;
            const double value = parse_real(entry[2], pos + 1);
            if (row < 0 || row >= rows || col < 0 || col >= cols) {
                throw IoError("coordinate (" + entry[0] + ", " + entry[1] + ") out of range on line " +
                              std::to_string(pos + 1));
            }
            if (!filled.insert({row, col}).second) {
                throw IoError("duplicate coordinate entry (" + entry[0] + ", " + entry[1] + ") on line " +
                              std::to_string(pos + 1));
            }
            data[static_cast<std::size_t>(row * cols + col)] = value;
            if (symmetric && row != col) {
                if (!filled.insert({col, row}).second) {
                    throw IoError("duplicate coordinate entry (" + entry[1] + ", " + entry[0] +
                                  ") on line " + std::to_string(pos + 1));
                }
                data[static_cast<std::size_t>(col * cols + row)] = value;
            }
            ++count;
        }
        if (count != nnz) {
            throw IoError("expected " + std::to_string(nnz) + " coordinate entries, found " +
                          std::to_string(count));
        }
        return DenseArray(Shape{rows, cols}, std::move(data));
    }

    if (size_tokens.size() != 2) {
        throw IoError("array size line must be 'rows cols', got: " + lines[pos]);
    }
    const std::int64_t rows = parse_int(size_tokens[0], size_line);
    const std::int64_t cols = parse_int(size_tokens[1], size_line);
    if (rows <= 0 || cols <= 0) {
        throw IoError("matrix dimensions must be positive");
    }
    std::vector<double> values;
    for (++pos; pos < lines.size(); ++pos) {
        if (lines[pos].empty() || lines[pos][0] == '%') continue;
        for (const auto& token : whitespace_tokens(lines[pos])) {
            values.push_back(parse_real(token, pos + 1));
        }
    }

    std::vector<double> data(static_cast<std::size_t>(rows * cols), 0.0);
    if (symmetric) {
        // Packed lower triangle, column by column.
        if (rows != cols) {
            throw IoError("symmetric array matrix must be square");
        }
        const std::int64_t expected = rows * (rows + 1) / 2;
        if (static_cast<std::int64_t>(values.size()) != expected) {
            throw IoError("symmetric array data has " + std::to_string(values.size()) +
                          " values, expected " + std::to_string(expected));
        }
        std::size_t v = 0;
        for (std::int64_t col = 0; col < cols; ++col) {
            for (std::int64_t row = col; row < rows; ++row, ++v) {
                data[static_cast<std::size_t>(row * cols + col)] = values[v];
                data[static_cast<std::size_t>(col * cols + row)] = values[v];
            }
        }
    } else {
        // Column-major per the array format; stored row-major here.
        if (static_cast<std::int64_t>(values.size()) != rows * cols) {
            throw IoError("array data has " + std::to_string(values.size()) + " values, expected " +
                          std::to_string(rows * cols));
        }
        std::size_t v = 0;
        for (std::int64_t col = 0; col < cols; ++col) {
            for (std::int64_t row = 0; row < rows; ++row, ++v) {
                data[static_cast<std::size_t>(row * cols + col)] = values[v];
            }
        }
    }
    return DenseArray(Shape{rows, cols}, std::move(data));
}

DenseArray parse_csv_matrix(const std::vector<std::string>& lines) {
    std::vector<double> data;
    std::int64_t cols = -1;
    std::int64_t rows = 0;
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        if (lines[ln].empty()) continue;
        const auto tokens = split_tokens(lines[ln], ',');
        if (cols == -1) {
            cols = static_cast<std::int64_t>(tokens.size());
        } else if (static_cast<std::int64_t>(tokens.size()) != cols) {
            throw IoError("CSV row on line " + std::to_string(ln + 1) + " has " +
                          std::to_string(tokens.size()) + " columns, expected " + std::to_string(cols));
        }
        for (const auto& token : tokens) {
            data.push_back(parse_real(token, ln + 1));
        }
        ++rows;
    }
    if (rows == 0) {
        throw IoError("CSV matrix file is empty");
    }
    return DenseArray(Shape{rows, cols}, std::move(data));
}

}  // namespace

DenseArray load_matrix(const std::string& path) {
    const auto lines = split_lines(read_file(path));
    if (lines.empty()) {
        throw IoError("matrix file " + path + " is empty");
    }
    if (lines[0].rfind("%%MatrixMarket", 0) == 0) {
        return parse_matrix_market(lines);
    }
    return parse_csv_matrix(lines);
}

DenseArray load_vector(const std::string& path, bool* empty_warning) {
    const auto lines = split_lines(read_file(path));
    std::vector<double> values;
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        if (lines[ln].empty()) continue;
        for (const auto& token : split_tokens(lines[ln], ',')) {
            if (token.empty()) {
                throw IoError("empty value on line " + std::to_string(ln + 1));
            }
            values.push_back(parse_real(token, ln + 1));
        }
    }
    if (empty_warning) *empty_warning = values.empty();
    return make_vector(std::move(values));
}

std::string format_report(const SolveReport& report, ReportFormat format) {
    if (format == ReportFormat::Json) {
        nlohmann::json out;
        out["solution"] = report.solution;
        out["iterations"] = report.iterations;
        out["converged"] = report.converged;
        out["residual_history"] = report.residual_history;
        return out.dump(2) + "\n";
    }
    std::string out;
    for (std::size_t k = 0; k < report.solution.size(); ++k) {
        if (k > 0) out += ',';
        out += format_double(report.solution[k]);
    }
    out += '\n';
    for (double r : report.residual_history) {
        out += format_double(r);
        out += '\n';
    }
    return out;
}

void write_report(const SolveReport& report, const std::string& path, ReportFormat format) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open " + path + " for writing");
    }
    out << format_report(report, format);
    if (!out) {
        throw IoError("failed writing " + path);
    }
}

}  // namespace moa
