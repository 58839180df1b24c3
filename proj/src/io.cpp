#include "hcstab/io.hpp"

#include <fstream>
#include <sstream>

namespace hcstab {

json matrix_to_json(const FiniteMetricSpace& m) {
    json j;
    j["labels"] = m.labels();
    j["dist"] = m.matrix();
    return j;
}

FiniteMetricSpace matrix_from_json(const json& j, const MetricOptions& options) {
    if (!j.is_object() || !j.contains("labels") || !j.contains("dist"))
        throw Error("BadMatrixFormat", "expected {\"labels\":[...],\"dist\":[[...]]}");
    std::vector<std::string> labels = j.at("labels").get<std::vector<std::string>>();
    std::vector<std::vector<double>> dist =
        j.at("dist").get<std::vector<std::vector<double>>>();
    return build_metric(std::move(labels), std::move(dist), options);
}

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

std::string format_double(double v) {
    // shortest representation that round-trips
    json j = v;
    return j.dump();
}

}  // namespace

std::string matrix_to_csv(const FiniteMetricSpace& m) {
    std::ostringstream os;
    for (int i = 0; i < m.size(); ++i) os << (i ? "," : "") << csv_escape(m.labels()[i]);
    os << "\n";
    for (int i = 0; i < m.size(); ++i) {
        for (int j = 0; j < m.size(); ++j) os << (j ? "," : "") << format_double(m.d(i, j));
        os << "\n";
    }
    return os.str();
}

FiniteMetricSpace matrix_from_csv(const std::string& text, const MetricOptions& options) {
    std::istringstream is(text);
    std::string line;
    std::vector<std::vector<std::string>> rows;
    while (std::getline(is, line)) {
        if (line.empty() || line == "\r") continue;
        rows.push_back(split_csv_line(line));
    }
    if (rows.empty()) throw Error("BadMatrixFormat", "empty CSV input");
    std::vector<std::string> labels = rows[0];
    const std::size_t n = labels.size();
    if (rows.size() != n + 1)
        throw Error("BadMatrixFormat", "CSV body must be square with a header row");
    std::vector<std::vector<double>> dist(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i + 1].size() != n)
            throw Error("BadMatrixFormat", "CSV row width mismatch");
        for (std::size_t j = 0; j < n; ++j) {
            try {
                std::size_t pos = 0;
                dist[i][j] = std::stod(rows[i + 1][j], &pos);
                if (pos != rows[i + 1][j].size())
                    throw std::invalid_argument("trailing characters");
            } catch (const std::exception&) {
                throw Error("BadMatrixFormat",
                            "non-numeric CSV entry: " + rows[i + 1][j]);
            }
        }
    }
    return build_metric(std::move(labels), std::move(dist), options);
}

json dendrogram_to_json(const Dendrogram& theta) {
    json j;
    j["labels"] = theta.labels;
    j["breakpoints"] = theta.breakpoints;
    json parts = json::array();
    for (const auto& p : theta.partitions) {
        json blocks = json::array();
        for (const auto& b : p.blocks) {
            json block = json::array();
            for (int i : b) block.push_back(theta.labels[i]);
            blocks.push_back(std::move(block));
        }
        parts.push_back(std::move(blocks));
    }
    j["partitions"] = std::move(parts);
    return j;
}

Dendrogram dendrogram_from_json(const json& j) {
    if (!j.is_object() || !j.contains("labels") || !j.contains("breakpoints") ||
        !j.contains("partitions"))
        throw Error("BadDendrogramFormat",
                    "expected {\"labels\",\"breakpoints\",\"partitions\"}");
    std::vector<std::string> labels = j.at("labels").get<std::vector<std::string>>();
    std::vector<double> breakpoints = j.at("breakpoints").get<std::vector<double>>();

    auto index_of = [&labels](const std::string& name) {
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == name) return static_cast<int>(i);
        throw Error("BadDendrogramFormat", "unknown label: " + name);
    };

    std::vector<Partition> partitions;
    for (const auto& part : j.at("partitions")) {
        Partition p;
        for (const auto& block : part) {
            std::vector<int> b;
            for (const auto& name : block) b.push_back(index_of(name.get<std::string>()));
            p.blocks.push_back(std::move(b));
        }
        p.canonicalize();
        partitions.push_back(std::move(p));
    }
    return validate_dendrogram(std::move(labels), std::move(breakpoints),
                               std::move(partitions));
}

json merge_table_to_json(const MergeTable& table) {
    json j;
    j["labels"] = table.labels;
    json rows = json::array();
    for (const auto& row : table.rows) {
        json r;
        r["block_a"] = row.block_a;
        r["block_b"] = row.block_b;
        r["height"] = row.height;
        r["merged_size"] = row.merged_size;
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    return j;
}

std::string merge_table_to_csv(const MergeTable& table) {
    std::ostringstream os;
    os << "block_a,block_b,height,merged_size\n";
    auto join = [](const std::vector<std::string>& names) {
        std::string out;
        for (std::size_t i = 0; i < names.size(); ++i)
            out += (i ? "|" : "") + names[i];
        return out;
    };
    for (const auto& row : table.rows)
        os << csv_escape(join(row.block_a)) << "," << csv_escape(join(row.block_b)) << ","
           << format_double(row.height) << "," << row.merged_size << "\n";
    return os.str();
}

FiniteMetricSpace load_matrix(const std::string& path, const MetricOptions& options) {
    std::string text = read_file(path);
    if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0)
        return matrix_from_csv(text, options);
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw Error("BadMatrixFormat", "invalid JSON in " + path);
    return matrix_from_json(j, options);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("FileNotFound", "cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("FileWriteFailed", "cannot write " + path);
    out << content;
}

}  // namespace hcstab
