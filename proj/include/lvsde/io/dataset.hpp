#pragma once

#include "lvsde/core.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lvsde::io {

/// A malformed input file; row and column are 1-based (0 when not applicable).
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t row, std::size_t column);
    std::size_t row() const { return row_; }
    std::size_t column() const { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

enum class InputFormat { Vectors, DistanceMatrix };

struct LoadOptions {
    InputFormat format = InputFormat::Vectors;
    /// Column holding class labels; negative values count from the end.
    std::optional<int> label_column;
    /// Whether the first row is a header; detected when unset.
    std::optional<bool> header;
};

/// Splits on commas when the line has any, otherwise on whitespace.
std::vector<std::string> split_fields(std::string_view line);

DataSet<double> parse_dataset(std::istream& in, const LoadOptions& options,
                              std::vector<std::string>* warnings = nullptr);

DataSet<double> load_dataset(const std::filesystem::path& path, const LoadOptions& options,
                             std::vector<std::string>* warnings = nullptr);

/// FNV-1a 64-bit hash of a file's bytes, as 16 lowercase hex digits.
std::string file_checksum(const std::filesystem::path& path);
std::string checksum(std::string_view bytes);

} // namespace lvsde::io
