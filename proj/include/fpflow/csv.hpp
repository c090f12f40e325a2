#pragma once

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

namespace fpflow {

/// Minimal CSV writer: '#' comment header block, one header row, '.' decimal
/// separator, LF line endings.
class CsvFile {
public:
    explicit CsvFile(const std::string& path) : out_(path, std::ios::binary) {
        if (!out_) throw std::runtime_error("cannot open CSV output file: " + path);
        out_ << std::setprecision(17);
    }

    void comment(const std::string& text) { out_ << "# " << text << "\n"; }

    void header(const std::vector<std::string>& names) { write_row(names); }

    void row(const std::vector<std::string>& cells) { write_row(cells); }

    void row(const std::vector<double>& cells) {
        std::vector<std::string> s;
        s.reserve(cells.size());
        for (double v : cells) s.push_back(format(v));
        write_row(s);
    }

    static std::string format(double v) {
        std::ostringstream os;
        os << std::setprecision(17) << v;
        return os.str();
    }

private:
    void write_row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ",";
            out_ << cells[i];
        }
        out_ << "\n";
    }

    std::ofstream out_;
};

}  // namespace fpflow
