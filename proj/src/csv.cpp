#include "oneshot/csv.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace oneshot::csv {

std::string fixed17(double x) {
    std::array<char, 64> buf{};
    const int n = std::snprintf(buf.data(), buf.size(), "%.17g", x);
    return {buf.data(), static_cast<std::size_t>(n)};
}

std::string shortest(double x) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return {buf.data(), res.ptr};
}

}  // namespace oneshot::csv
