#pragma once

#include <optional>
#include <string>

namespace oneshot::csv {

// %.17g, used for traces.
[[nodiscard]] std::string fixed17(double x);

// Shortest decimal that round-trips.
[[nodiscard]] std::string shortest(double x);

[[nodiscard]] inline std::string fixed17(const std::optional<double>& x) { return x ? fixed17(*x) : std::string(); }
[[nodiscard]] inline std::string shortest(const std::optional<double>& x) { return x ? shortest(*x) : std::string(); }

}  // namespace oneshot::csv
