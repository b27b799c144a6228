#pragma once

// Plain-text matrix container:
//
//     oneshot-matrix v1 <rows> <cols>
//     a11 a12 ...
//     ...
//
// row-major, %.17g. A problem directory holds B.mat, M.mat, H.mat, F.mat,
// optionally g.mat, and problem.txt with the replica count (B.mat and H.mat
// store the replicated block).

#include "oneshot/linear_forward.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>

namespace oneshot {

void write_matrix(std::ostream& out, const Matrix& m);
// Throws ParseError (line numbers are 1-based within the stream).
[[nodiscard]] Matrix read_matrix(std::istream& in);

void save_matrix(const std::filesystem::path& path, const Matrix& m);
[[nodiscard]] Matrix load_matrix(const std::filesystem::path& path);

struct StoredProblem {
    LinearInverseProblem problem;
    std::optional<Vector> g;
};

void save_problem(const std::filesystem::path& dir, const LinearInverseProblem& problem,
                  const std::optional<Vector>& g = std::nullopt);
[[nodiscard]] StoredProblem load_problem(const std::filesystem::path& dir);

}  // namespace oneshot
