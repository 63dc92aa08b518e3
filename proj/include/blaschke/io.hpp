#pragma once

// Set descriptions (JSON), zero lists and tables (CSV), run manifests.

#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "blaschke/canonical_products.hpp"
#include "blaschke/circle_geometry.hpp"

namespace blaschke {

/// Formats a double with 17 significant digits.
std::string format_double(double x);

/// Builds a set from its JSON description, e.g.
///   {"kind": "cantor", "omega": 0.333, "depth": 8}
///   {"kind": "points", "angles": [0, 3.14159]}
///   {"kind": "arcs", "arcs": [[0.0, 0.5], [2.0, 0.0]]}
///   {"kind": "union", "parts": [ ... ]}
/// Other kinds: geometric_tail, power_tail (gamma), log_tail, circle.
/// An optional "metric" is "chord" (default) or "arc".
ClosedCircularSet parse_set_json(const std::string& text);
ClosedCircularSet load_set(const std::filesystem::path& path);

/// CSV with header re,im[,multiplicity]; multiplicity defaults to 1.
std::vector<ZeroEntry> parse_zeros_csv(const std::string& text);
std::vector<ZeroEntry> load_zeros(const std::filesystem::path& path);

class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);
    CsvWriter& row(const std::vector<std::string>& cells);
    std::string str() const { return out_; }
    void save(const std::filesystem::path& path) const;

private:
    std::size_t columns_;
    std::string out_;
};

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

/// SHA-1 of "blob <size>\0<content>", as git hash-object prints it.
std::string git_blob_sha1(const std::string& content);

/// key=value lines, sorted by key.
struct Manifest {
    std::map<std::string, std::string> entries;

    std::string str() const;
    static Manifest parse(const std::string& text);
};

}  // namespace blaschke
