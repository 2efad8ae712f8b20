#pragma once

// Minimal CSV emission and parsing for the experiment outputs. Numbers are
// printed with up to 17 significant digits so every double survives a
// write/read round trip and repeated runs stay byte-identical.

#include <string>
#include <string_view>
#include <vector>

namespace ace::csv {

std::string format_double(double v);

class Writer {
public:
    explicit Writer(std::vector<std::string> header);

    void begin_row();
    void add(std::string_view value);
    void add(double value);
    void add(long long value);
    void add(int value) { add(static_cast<long long>(value)); }
    void add(std::uint64_t value);

    /// Finished CSV text: header plus all rows, LF line endings.
    std::string str() const;

    std::size_t rows() const { return rows_ + (in_row_ == columns_ ? 1 : 0); }

private:
    std::size_t columns_;
    std::size_t rows_ = 0;
    std::size_t in_row_ = 0;
    std::string out_;
};

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(std::string_view name) const;  // -1 when absent
};

Table parse(std::string_view text);

}  // namespace ace::csv
