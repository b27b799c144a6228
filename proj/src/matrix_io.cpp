#include "oneshot/matrix_io.hpp"

#include "oneshot/csv.hpp"
#include "oneshot/errors.hpp"
#include "oneshot/text.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace oneshot {

namespace {

constexpr const char* kMagic = "oneshot-matrix";

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    return out;
}

Vector as_vector(const Matrix& m, const char* name) {
    if (m.cols() != 1) throw DimensionError(std::string(name) + " must be a single column");
    return m.col(0);
}

}  // namespace

void write_matrix(std::ostream& out, const Matrix& m) {
    out << kMagic << " v1 " << m.rows() << ' ' << m.cols() << '\n';
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out << ' ';
            out << csv::fixed17(m(i, j));
        }
        out << '\n';
    }
}

Matrix read_matrix(std::istream& in) {
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line)) throw ParseError(line_no, "empty matrix file");
    std::istringstream header(line);
    std::string magic, version;
    long rows = -1, cols = -1;
    header >> magic >> version >> rows >> cols;
    if (magic != kMagic || version != "v1" || header.fail() || rows < 0 || cols < 0) {
        throw ParseError(line_no, "expected header 'oneshot-matrix v1 <rows> <cols>'");
    }
    std::string extra;
    if (header >> extra) throw ParseError(line_no, "trailing text after header");

    Matrix m(rows, cols);
    const long total = rows * cols;
    long filled = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view rest = line;
        while (true) {
            rest = text::trim(rest);
            if (rest.empty()) break;
            const auto end = rest.find_first_of(" \t");
            const auto token = rest.substr(0, end);
            if (filled == total) throw ParseError(line_no, "more than " + std::to_string(total) + " entries");
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
            if (ec != std::errc() || ptr != token.data() + token.size()) {
                throw ParseError(line_no, "bad number '" + std::string(token) + "'");
            }
            m(filled / cols, filled % cols) = v;
            ++filled;
            if (end == std::string_view::npos) break;
            rest = rest.substr(end);
        }
    }
    if (filled != total) {
        throw ParseError(line_no, "expected " + std::to_string(total) + " entries, found " + std::to_string(filled));
    }
    return m;
}

void save_matrix(const std::filesystem::path& path, const Matrix& m) {
    auto out = open_out(path);
    write_matrix(out, m);
    if (!out) throw IoError("write failed: " + path.string());
}

Matrix load_matrix(const std::filesystem::path& path) {
    auto in = open_in(path);
    try {
        return read_matrix(in);
    } catch (const ParseError& e) {
        throw ParseError(e.line(), path.string() + ": " + e.what());
    }
}

void save_problem(const std::filesystem::path& dir, const LinearInverseProblem& problem,
                  const std::optional<Vector>& g) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
    save_matrix(dir / "B.mat", problem.B_block());
    save_matrix(dir / "M.mat", problem.M());
    save_matrix(dir / "H.mat", problem.H_block());
    save_matrix(dir / "F.mat", problem.F());
    if (g) save_matrix(dir / "g.mat", *g);
    auto out = open_out(dir / "problem.txt");
    out << "replicas = " << problem.replicas() << '\n';
}

StoredProblem load_problem(const std::filesystem::path& dir) {
    int replicas = 1;
    if (std::filesystem::exists(dir / "problem.txt")) {
        auto in = open_in(dir / "problem.txt");
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const auto t = text::trim(line);
            if (t.empty() || t.front() == '#') continue;
            const auto eq = t.find('=');
            if (eq == std::string_view::npos || text::trim(t.substr(0, eq)) != "replicas") {
                throw ParseError(line_no, "problem.txt: expected 'replicas = <n>'");
            }
            replicas = text::parse_int("replicas", t.substr(eq + 1));
        }
    }
    Matrix B = load_matrix(dir / "B.mat");
    Matrix M = load_matrix(dir / "M.mat");
    Matrix H = load_matrix(dir / "H.mat");
    Vector F = as_vector(load_matrix(dir / "F.mat"), "F");
    std::optional<Vector> g;
    if (std::filesystem::exists(dir / "g.mat")) g = as_vector(load_matrix(dir / "g.mat"), "g");
    auto problem = LinearInverseProblem::block_replicated(std::move(B), std::move(M), std::move(H), std::move(F),
                                                          replicas);
    return {std::move(problem), std::move(g)};
}

}  // namespace oneshot
