#include "ace/csvio.hpp"

#include <cstdint>
#include <cstdio>
#include <stdexcept>

namespace ace::csv {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Writer::Writer(std::vector<std::string> header) : columns_(header.size()) {
    if (header.empty()) throw std::invalid_argument("CSV needs a header");
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out_ += ',';
        out_ += header[i];
    }
    out_ += '\n';
}

void Writer::begin_row() {
    if (in_row_ != 0 && in_row_ != columns_)
        throw std::logic_error("CSV row has wrong arity");
    if (in_row_ == columns_) {
        out_ += '\n';
        ++rows_;
    }
    in_row_ = 0;
}

void Writer::add(std::string_view value) {
    if (in_row_ == columns_) throw std::logic_error("CSV row overflow");
    if (in_row_) out_ += ',';
    out_ += value;
    ++in_row_;
}

void Writer::add(double value) { add(std::string_view(format_double(value))); }

void Writer::add(long long value) { add(std::string_view(std::to_string(value))); }

void Writer::add(std::uint64_t value) { add(std::string_view(std::to_string(value))); }

std::string Writer::str() const {
    std::string s = out_;
    if (in_row_ == columns_) s += '\n';
    return s;
}

int Table::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

Table parse(std::string_view text) {
    Table table;
    std::size_t pos = 0;
    bool first = true;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::size_t f = 0;
        while (true) {
            std::size_t comma = line.find(',', f);
            if (comma == std::string_view::npos) {
                fields.emplace_back(line.substr(f));
                break;
            }
            fields.emplace_back(line.substr(f, comma - f));
            f = comma + 1;
        }
        if (first) {
            table.header = std::move(fields);
            first = false;
        } else {
            if (fields.size() != table.header.size())
                throw std::invalid_argument("CSV row arity mismatch");
            table.rows.push_back(std::move(fields));
        }
    }
    return table;
}

}  // namespace ace::csv
