#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sparsity {

/// Fixed 17-significant-digit rendering used in every output file.
std::string fmt_double(double v);

std::string join(const std::vector<std::uint64_t>& xs, std::string_view sep = ",");
std::string join(const std::vector<std::int64_t>& xs, std::string_view sep = ",");
std::string join(const std::vector<unsigned>& xs, std::string_view sep = ",");

std::vector<std::string> split(std::string_view s, char sep);
std::string trim(std::string_view s);

}  // namespace sparsity
