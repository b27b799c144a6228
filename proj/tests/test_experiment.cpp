#include "oneshot/errors.hpp"
#include "oneshot/experiment.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace oneshot;

namespace {

std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("oneshot_exp_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// 16 x 16 mesh, one source: every run below takes milliseconds.
const char* kSmallCavity = R"(
[cavity]
mesh_h = 0.125
n_sources = 1
)";

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST(ExperimentSpec, MinimalDocumentGetsDefaults) {
    const auto spec = parse_spec("[run]\nkind = TauSweep\nschemes = UsualGD\ntaus = 0.1\n");
    EXPECT_EQ(spec.kind, ExperimentKind::TauSweep);
    ASSERT_EQ(spec.schemes.size(), 1u);
    EXPECT_EQ(spec.schemes[0], SchemeKind::UsualGD);
    EXPECT_EQ(spec.taus, std::vector<double>{0.1});
    EXPECT_EQ(spec.ks, std::vector<int>{1});
    EXPECT_EQ(spec.alphas, std::vector<double>{0.0});
    EXPECT_EQ(spec.max_outer, 1000);
    EXPECT_EQ(spec.tau_scale, TauScale::Absolute);
    EXPECT_EQ(spec.cavity, CavityConfig{});
    EXPECT_EQ(spec.output_dir, "out");
}

TEST(ExperimentSpec, UnknownKeyNamesLineAndKey) {
    try {
        (void)parse_spec("[run]\nkind = TauSweep\n\ntaau=2\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 4u);
        EXPECT_NE(std::string(e.what()).find("taau"), std::string::npos);
    }
}

TEST(ExperimentSpec, StructuralErrors) {
    auto line_of = [](const std::string& s) -> std::size_t {
        try {
            (void)parse_spec(s);
        } catch (const ParseError& e) {
            return e.line();
        }
        return 0;
    };
    EXPECT_EQ(line_of("kind = TauSweep\n"), 1u);
    EXPECT_EQ(line_of("[run]\n[plot]\n"), 2u);
    EXPECT_EQ(line_of("[run]\nkind TauSweep\n"), 2u);
    EXPECT_EQ(line_of("[run]\ntaus = 1\ntaus = 2\n"), 3u);
    EXPECT_EQ(line_of("[cavity]\nomega = 6\nmanifest = x.txt\n"), 3u);
}

TEST(ExperimentSpec, ValidationNamesField) {
    auto field_of = [](const std::string& s) -> std::string {
        try {
            (void)parse_spec(s);
        } catch (const ValidationError& e) {
            return e.field();
        }
        return "";
    };
    const std::string head = "[run]\nschemes = UsualGD\ntaus = 0.1\n";
    EXPECT_EQ(field_of(head + "kind = NoiseStudy\n"), "noise_levels");
    EXPECT_EQ(field_of(head + "kind = MeshRobustness\n"), "mesh_hs");
    EXPECT_EQ(field_of(head + "kind = DeltaDependence\n"), "deltas");
    EXPECT_EQ(field_of(head + "kind = KComparison\n"), "schemes");
    EXPECT_EQ(field_of(head + "kind = Sweep\n"), "kind");
    EXPECT_EQ(field_of(head + "ks = 0\n"), "ks");
    EXPECT_EQ(field_of(head + "alphas = 0, 0\n"), "alphas");
    EXPECT_EQ(field_of(head + "max_outer = many\n"), "max_outer");
    EXPECT_EQ(field_of("[run]\nschemes = GD\ntaus = 0.1\n"), "schemes");
    EXPECT_EQ(field_of("[run]\nschemes = UsualGD\n"), "taus");
    EXPECT_EQ(field_of(head + "[cavity]\ndelta = -1\n"), "delta");
    EXPECT_EQ(field_of(head + "theta0 = 1\n"), "theta0");
    try {
        (void)parse_spec(head + "\nmax_outer = -3\n");
    } catch (const ValidationError& e) {
        EXPECT_EQ(e.field(), "max_outer");
    }
}

TEST(ExperimentSpec, SerializeRoundTrip) {
    const std::vector<std::string> docs = {
        "[run]\nkind = TauSweep\nschemes = UsualGD\ntaus = 0.1\n",
        R"(# full document
[run]
kind = KComparison
schemes = UsualGD, KStepOneShot, SemiImplicitKStepOneShot
taus = 0.9, 0.3333333333333333
tau_scale = gd_threshold
ks = 1, 2, 3, 4, 10
alphas = 0, 2e-4
max_outer = 250
tol_cost = 1e-12
reach_cost = 1e-9
output_dir = results/k
[cavity]
mesh_h = 0.05
delta = 0.02
inclusions = -0.4, 0.3, 0.25; 0.35, 0.35, 0.2
sigma_exact = 10, 11
source_radius = 1.4
rng_seed = 12345678901234567890
random_background = false
)",
        "[run]\nkind = MeshRobustness\nschemes = SemiImplicitGD\ntaus = 1\nmesh_hs = 0.1, 0.05\nnoise_levels = 0.03\n",
        "[run]\nkind = BoundReport\nks = 1, 2\nalphas = 0, 0.1\noptimize_case_parameters = true\ntheta0 = 0.5\n",
    };
    for (const auto& doc : docs) {
        const auto spec = parse_spec(doc);
        const std::string text = serialize(spec);
        EXPECT_EQ(parse_spec(text), spec) << text;
        EXPECT_EQ(serialize(parse_spec(text)), text);
    }
}

TEST(ExperimentSpec, CavityManifestIsLoadedRelativeToSpec) {
    const auto dir = scratch_dir("manifest_ref");
    std::filesystem::create_directories(dir);
    CavityConfig c;
    c.delta = 0.02;
    c.rng_seed = 99;
    std::ofstream(dir / "cavity.txt") << cavity_manifest(c);
    std::ofstream(dir / "exp.cfg") << "[run]\nschemes = UsualGD\ntaus = 0.1\n[cavity]\nmanifest = cavity.txt\nmesh_h = 0.05\n";
    const auto spec = parse_spec_file(dir / "exp.cfg");
    CavityConfig expected = c;
    expected.mesh_h = 0.05;
    EXPECT_EQ(spec.cavity, expected);
    std::filesystem::remove_all(dir);
    EXPECT_THROW((void)parse_spec_file(dir / "exp.cfg"), IoError);
}

TEST(RunExperiment, TauSweepReportsDivergedCells) {
    auto spec = parse_spec(std::string("[run]\nkind = TauSweep\nschemes = UsualGD, KStepOneShot\n"
                                       "taus = 0.5, 1.5\ntau_scale = gd_threshold\nmax_outer = 300\n") +
                           kSmallCavity);
    spec.output_dir = scratch_dir("tausweep").string();
    const auto outputs = run_experiment(spec);
    ASSERT_EQ(outputs.files.size(), 6u);  // 4 traces, summary, manifest
    const std::string summary = slurp(outputs.directory / "summary.csv");
    EXPECT_EQ(count_lines(summary), 5u);
    EXPECT_NE(summary.find("trace_UsualGD_tau1.5_k1_a0_e0.csv,,,0,UsualGD,1,1.5,"), std::string::npos) << summary;
    EXPECT_NE(summary.find(",diverged,"), std::string::npos);
    EXPECT_NE(summary.find(",max_outer,"), std::string::npos);

    const std::string trace = slurp(outputs.directory / "trace_UsualGD_tau0.5_k1_a0_e0.csv");
    EXPECT_EQ(trace.rfind("n,cost,grad_norm,rel_err_sigma,acc_inner,wall_ms,status\n", 0), 0u);
    EXPECT_EQ(count_lines(trace), 302u);

    // The manifest reparses to the same spec.
    EXPECT_EQ(parse_spec_file(outputs.directory / "manifest.txt"), spec);
    std::filesystem::remove_all(outputs.directory);
}

TEST(RunExperiment, OutputsAreByteReproducible) {
    auto spec = parse_spec(std::string("[run]\nkind = NoiseStudy\nschemes = SemiImplicitKStepOneShot\nks = 2\n"
                                       "taus = 0.8\ntau_scale = gd_threshold\nalphas = 0, 1e-3\n"
                                       "noise_levels = 0.01, 0.05\nmax_outer = 100\n") +
                           kSmallCavity);
    spec.output_dir = scratch_dir("repro_a").string();
    const auto a = run_experiment(spec);
    spec.output_dir = scratch_dir("repro_b").string();
    const auto b = run_experiment(spec);
    ASSERT_EQ(a.files, b.files);
    ASSERT_EQ(a.files.size(), 6u);
    for (const auto& f : a.files) {
        if (f == "manifest.txt") continue;  // records output_dir
        EXPECT_EQ(slurp(a.directory / f), slurp(b.directory / f)) << f;
    }
    std::filesystem::remove_all(a.directory);
    std::filesystem::remove_all(b.directory);
}

TEST(RunExperiment, ZeroNoiseStudyMatchesCleanRun) {
    const std::string run = "schemes = SemiImplicitGD\ntaus = 0.9\ntau_scale = gd_threshold\nmax_outer = 50\n";
    auto noisy = parse_spec("[run]\nkind = NoiseStudy\nnoise_levels = 0\n" + run + kSmallCavity);
    auto clean = parse_spec("[run]\nkind = TauSweep\n" + run + kSmallCavity);
    noisy.output_dir = scratch_dir("noise0").string();
    clean.output_dir = scratch_dir("clean").string();
    const auto a = run_experiment(noisy);
    const auto b = run_experiment(clean);
    ASSERT_EQ(a.files, b.files);
    for (const auto& f : a.files) {
        if (f == "manifest.txt") continue;
        EXPECT_EQ(slurp(a.directory / f), slurp(b.directory / f)) << f;
    }
    std::filesystem::remove_all(a.directory);
    std::filesystem::remove_all(b.directory);
}

TEST(RunExperiment, KComparisonReportsReachIterations) {
    auto spec = parse_spec(std::string("[run]\nkind = KComparison\nschemes = UsualGD, KStepOneShot\nks = 2, 4\n"
                                       "taus = 0.5\ntau_scale = gd_threshold\nmax_outer = 3000\ntol_cost = 1e-12\n") +
                           kSmallCavity);
    spec.output_dir = scratch_dir("kcomp").string();
    const auto outputs = run_experiment(spec);
    std::istringstream summary(slurp(outputs.directory / "summary.csv"));
    std::string line;
    std::getline(summary, line);
    int rows = 0;
    while (std::getline(summary, line)) {
        ++rows;
        EXPECT_NE(line.find("converged_cost"), std::string::npos) << line;
        // n_reach and acc_inner_reach are filled
        EXPECT_EQ(line.find(",,", line.find("converged_cost")), std::string::npos) << line;
    }
    EXPECT_EQ(rows, 3);
    std::filesystem::remove_all(outputs.directory);
}

TEST(RunExperiment, BoundReportAndCertifySweep) {
    auto bounds = parse_spec(std::string("[run]\nkind = BoundReport\nks = 1, 2\nalphas = 0, 0.01\n") + kSmallCavity);
    bounds.output_dir = scratch_dir("bounds").string();
    const auto b = run_experiment(bounds);
    const std::string table = slurp(b.directory / "bounds.csv");
    EXPECT_EQ(count_lines(table), 5u);
    EXPECT_EQ(table.rfind("k,alpha,normB,normM,normH,sBk,", 0), 0u);

    auto cert = parse_spec(std::string("[run]\nkind = CertifySweep\ntaus = 0.5, 1.5\ntau_scale = gd_threshold\n"
                                       "ks = 3\nwrite_spectrum = true\n") +
                           kSmallCavity);
    cert.output_dir = scratch_dir("certify").string();
    const auto c = run_experiment(cert);
    const std::string summary = slurp(c.directory / "summary.csv");
    EXPECT_NE(summary.find("0.5,"), std::string::npos);
    EXPECT_NE(summary.find(",true\n"), std::string::npos);
    EXPECT_NE(summary.find(",false\n"), std::string::npos);
    EXPECT_TRUE(std::filesystem::exists(c.directory / "spectrum_tau0.5_k3_a0.csv"));
    std::filesystem::remove_all(b.directory);
    std::filesystem::remove_all(c.directory);
}
