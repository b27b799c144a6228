#include "oneshot/errors.hpp"
#include "oneshot/matrix_io.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <limits>
#include <random>
#include <sstream>

using namespace oneshot;

namespace {

std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("oneshot_test_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

}  // namespace

TEST(MatrixIo, RoundTripIsBitwise) {
    std::mt19937_64 rng(5);
    Matrix m = testing_support::random_matrix(rng, 7, 4);
    m(0, 0) = std::numeric_limits<double>::denorm_min();
    m(1, 1) = -0.0;
    m(2, 2) = 1e308;
    m(3, 3) = 0.1;
    std::stringstream buf;
    write_matrix(buf, m);
    const Matrix back = read_matrix(buf);
    ASSERT_EQ(back.rows(), 7);
    ASSERT_EQ(back.cols(), 4);
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        EXPECT_EQ(std::memcmp(&m.data()[i], &back.data()[i], sizeof(double)), 0) << i;
    }
}

TEST(MatrixIo, OutputIsByteReproducible) {
    std::mt19937_64 rng(6);
    const Matrix m = testing_support::random_matrix(rng, 5, 5);
    std::ostringstream a, b;
    write_matrix(a, m);
    write_matrix(b, m);
    EXPECT_EQ(a.str(), b.str());
    EXPECT_EQ(a.str().rfind("oneshot-matrix v1 5 5\n", 0), 0u);
}

TEST(MatrixIo, EmptyShapesRoundTrip) {
    std::stringstream buf;
    write_matrix(buf, Matrix(0, 3));
    const Matrix back = read_matrix(buf);
    EXPECT_EQ(back.rows(), 0);
    EXPECT_EQ(back.cols(), 3);
}

TEST(MatrixIo, MalformedInputReportsLine) {
    auto line_of = [](const std::string& s) -> std::size_t {
        std::istringstream in(s);
        try {
            (void)read_matrix(in);
        } catch (const ParseError& e) {
            return e.line();
        }
        return 0;
    };
    EXPECT_EQ(line_of(""), 1u);
    EXPECT_EQ(line_of("matrix 2 2\n1 2\n3 4\n"), 1u);
    EXPECT_EQ(line_of("oneshot-matrix v2 1 1\n1\n"), 1u);
    EXPECT_EQ(line_of("oneshot-matrix v1 2 2\n1 2\n3 x\n"), 3u);
    EXPECT_EQ(line_of("oneshot-matrix v1 2 2\n1 2\n3\n"), 3u);
    EXPECT_EQ(line_of("oneshot-matrix v1 1 2\n1 2\n3\n"), 3u);
    EXPECT_EQ(line_of("oneshot-matrix v1 2 1\n1\n\n2\n"), 0u);
}

TEST(MatrixIo, ProblemDirectoryRoundTrip) {
    std::mt19937_64 rng(7);
    const Matrix b = testing_support::random_B(rng, 5, 0.4);
    const Matrix h = testing_support::random_matrix(rng, 3, 5);
    const Matrix m = testing_support::random_matrix(rng, 10, 2);
    const Vector f = testing_support::random_vector(rng, 10);
    const Vector g = testing_support::random_vector(rng, 6);
    const auto problem = LinearInverseProblem::block_replicated(b, m, h, f, 2);

    const auto dir = scratch_dir("problem_dir");
    save_problem(dir, problem, g);
    const auto stored = load_problem(dir);
    EXPECT_EQ(stored.problem.replicas(), 2);
    EXPECT_EQ(stored.problem.B_block(), b);
    EXPECT_EQ(stored.problem.H_block(), h);
    EXPECT_EQ(stored.problem.M(), m);
    EXPECT_EQ(stored.problem.F(), f);
    ASSERT_TRUE(stored.g.has_value());
    EXPECT_EQ(*stored.g, g);

    std::filesystem::remove(dir / "g.mat");
    std::filesystem::remove(dir / "problem.txt");
    EXPECT_THROW((void)load_problem(dir), DimensionError);  // replicas default to 1: M has too many rows
    std::filesystem::remove_all(dir);
}

TEST(MatrixIo, MissingFileIsIoError) {
    const auto dir = scratch_dir("missing");
    EXPECT_THROW((void)load_matrix(dir / "nope.mat"), IoError);
    EXPECT_THROW((void)load_problem(dir), IoError);
}
