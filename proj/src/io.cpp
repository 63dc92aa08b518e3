#include "blaschke/io.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "blaschke/errors.hpp"

namespace blaschke {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, sep)) out.push_back(trim(cell));
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

double parse_number(const std::string& s, const char* what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParameterError(std::string("cannot parse ") + what + " '" + s + "'");
    }
}

ClosedCircularSet set_from_json(const json& j, Metric metric) {
    if (!j.is_object() || !j.contains("kind")) throw ParameterError("set description needs a \"kind\"");
    const std::string kind = j.at("kind").get<std::string>();
    if (j.contains("metric")) {
        const std::string m = j.at("metric").get<std::string>();
        if (m == "chord") metric = Metric::Chord;
        else if (m == "arc") metric = Metric::Arc;
        else throw ParameterError("unknown metric '" + m + "'");
    }
    const auto depth = [&](const char* key) { return j.value(key, std::size_t{0}); };
    if (kind == "points") return ClosedCircularSet::from_generator(FinitePoints{j.at("angles").get<std::vector<double>>()}, metric);
    if (kind == "arcs") {
        ClosedArcs arcs;
        for (const auto& a : j.at("arcs")) arcs.arcs.emplace_back(a.at(0).get<double>(), a.at(1).get<double>());
        return ClosedCircularSet::from_generator(arcs, metric);
    }
    if (kind == "geometric_tail") return ClosedCircularSet::from_generator(GeometricTail{depth("depth")}, metric);
    if (kind == "power_tail")
        return ClosedCircularSet::from_generator(PowerTail{j.value("gamma", 2.0), depth("depth")}, metric);
    if (kind == "log_tail") return ClosedCircularSet::from_generator(LogTail{depth("depth")}, metric);
    if (kind == "cantor") {
        Cantor c;
        c.omega = j.value("omega", c.omega);
        c.depth = j.value("depth", 0);
        c.arc_start = j.value("arc_start", c.arc_start);
        c.arc_length = j.value("arc_length", c.arc_length);
        return ClosedCircularSet::from_generator(c, metric);
    }
    if (kind == "circle") return ClosedCircularSet::full_circle(metric);
    if (kind == "union") {
        const auto& parts = j.at("parts");
        if (!parts.is_array() || parts.empty()) throw ParameterError("union needs a non-empty \"parts\" array");
        ClosedCircularSet E = set_from_json(parts.at(0), metric);
        for (std::size_t i = 1; i < parts.size(); ++i) E = ClosedCircularSet::unite(E, set_from_json(parts.at(i), metric));
        return E;
    }
    throw ParameterError("unknown set kind '" + kind + "'");
}

}  // namespace

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

ClosedCircularSet parse_set_json(const std::string& text) {
    try {
        return set_from_json(json::parse(text), Metric::Chord);
    } catch (const json::exception& e) {
        throw ParameterError(std::string("bad set description: ") + e.what());
    }
}

ClosedCircularSet load_set(const std::filesystem::path& path) { return parse_set_json(read_file(path)); }

std::vector<ZeroEntry> parse_zeros_csv(const std::string& text) {
    std::vector<ZeroEntry> out;
    std::istringstream in(text);
    std::string line;
    bool header_seen = false;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto cells = split(line, ',');
        if (!header_seen) {
            header_seen = true;
            if (cells.size() < 2 || cells[0] != "re" || cells[1] != "im")
                throw ParameterError("zeros CSV must start with the header re,im[,multiplicity]");
            continue;
        }
        if (cells.size() < 2 || cells.size() > 3)
            throw ParameterError("zeros CSV line " + std::to_string(lineno) + ": expected 2 or 3 columns");
        ZeroEntry z;
        z.point = {parse_number(cells[0], "re"), parse_number(cells[1], "im")};
        if (cells.size() == 3) {
            const double m = parse_number(cells[2], "multiplicity");
            if (m != std::floor(m) || m < 1.0) throw ParameterError("multiplicity must be a positive integer");
            z.multiplicity = static_cast<int>(m);
        }
        out.push_back(z);
    }
    validate_zeros(out);
    return out;
}

std::vector<ZeroEntry> load_zeros(const std::filesystem::path& path) { return parse_zeros_csv(read_file(path)); }

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) { row(header); }

CsvWriter& CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw std::logic_error("CSV row width does not match the header");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ += ',';
        out_ += cells[i];
    }
    out_ += '\n';
    return *this;
}

void CsvWriter::save(const std::filesystem::path& path) const { write_file(path, out_); }

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParameterError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParameterError("cannot write " + path.string());
    out << content;
}

std::string git_blob_sha1(const std::string& content) {
    const std::string blob = "blob " + std::to_string(content.size()) + '\0' + content;
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(blob.data(), blob.size(), md, &len, EVP_sha1(), nullptr) != 1)
        throw std::runtime_error("SHA-1 digest failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

std::string Manifest::str() const {
    std::string out;
    for (const auto& [k, v] : entries) out += k + "=" + v + "\n";
    return out;
}

Manifest Manifest::parse(const std::string& text) {
    Manifest m;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParameterError("manifest line without '=': " + line);
        m.entries[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return m;
}

}  // namespace blaschke
