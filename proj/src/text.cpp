#include "oneshot/text.hpp"

#include "oneshot/csv.hpp"
#include "oneshot/errors.hpp"

#include <charconv>
#include <cmath>

namespace oneshot::text {

namespace {

template <typename T>
T parse_number(std::string_view field, std::string_view value, const char* kind) {
    const auto v = trim(value);
    T out{};
    // from_chars rejects a leading '+', which hand-written files do contain.
    const char* first = v.data();
    if (!v.empty() && v.front() == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, v.data() + v.size(), out);
    if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) {
        throw ValidationError(std::string(field), "expected " + std::string(kind) + ", got '" + std::string(v) + "'");
    }
    return out;
}

}  // namespace

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    if (trim(s).empty()) return out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

double parse_double(std::string_view field, std::string_view value) {
    const double x = parse_number<double>(field, value, "a real number");
    if (!std::isfinite(x)) throw ValidationError(std::string(field), "must be finite");
    return x;
}

int parse_int(std::string_view field, std::string_view value) { return parse_number<int>(field, value, "an integer"); }

std::uint64_t parse_u64(std::string_view field, std::string_view value) {
    if (!trim(value).empty() && trim(value).front() == '-') {
        throw ValidationError(std::string(field), "expected an unsigned integer");
    }
    return parse_number<std::uint64_t>(field, value, "an unsigned integer");
}

bool parse_bool(std::string_view field, std::string_view value) {
    const auto v = trim(value);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ValidationError(std::string(field), "expected true/false, got '" + std::string(v) + "'");
}

std::vector<double> parse_double_list(std::string_view field, std::string_view value) {
    std::vector<double> out;
    for (auto piece : split(value, ',')) out.push_back(parse_double(field, piece));
    return out;
}

std::vector<int> parse_int_list(std::string_view field, std::string_view value) {
    std::vector<int> out;
    for (auto piece : split(value, ',')) out.push_back(parse_int(field, piece));
    return out;
}

std::string join(const std::vector<double>& values, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += sep;
        out += csv::shortest(values[i]);
    }
    return out;
}

std::string join(const std::vector<int>& values, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += sep;
        out += std::to_string(values[i]);
    }
    return out;
}

}  // namespace oneshot::text
