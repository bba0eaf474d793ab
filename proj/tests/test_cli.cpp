#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "support.hpp"

// HOPECLF_CLI comes from the build: the path of the hopeclf executable.

using testsup::TempDir;
using testsup::read_file;
using testsup::write_file;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

RunResult run_cli(const TempDir& dir, const std::string& args) {
    static int n = 0;
    std::string out = dir.file("stdout" + std::to_string(n));
    std::string err = dir.file("stderr" + std::to_string(n));
    ++n;
    std::string cmd = std::string(HOPECLF_CLI) + " " + args + " > " + out +
                      " 2> " + err;
    int status = std::system(cmd.c_str());
    RunResult res;
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    res.out = read_file(out);
    res.err = read_file(err);
    return res;
}

} // namespace

TEST_CASE("cli round trip") {
    TempDir dir("cli");
    testsup::SyntheticCorpus corpus = testsup::make_synthetic(3, 40);
    std::string train = dir.file("train.csv");
    std::string dev = dir.file("dev.csv");
    write_file(train, testsup::to_csv(corpus, 0, 60));
    write_file(dev, testsup::to_csv(corpus, 60, 80));

    RunResult stats = run_cli(dir, "stats --input " + train);
    CHECK(stats.exit_code == 0);
    CHECK(stats.out.find("Hope\t") != std::string::npos);
    CHECK(stats.out.find("Not Hope\t") != std::string::npos);
    CHECK(stats.out.find("total\t60") != std::string::npos);

    RunResult cleaned = run_cli(dir, "clean --input " + train);
    CHECK(cleaned.exit_code == 0);
    CHECK(cleaned.out.find("train-0\t") != std::string::npos);

    std::string bundle = dir.file("model.bundle");
    RunResult train_run =
        run_cli(dir, "train --input " + train +
                         " --model svm-linear --vectorizer tfidf --output " +
                         bundle);
    CHECK(train_run.exit_code == 0);
    CHECK(std::filesystem::exists(bundle));

    std::string report_path = dir.file("report.tsv");
    RunResult eval = run_cli(dir, "eval --input " + dev + " --bundle " +
                                      bundle + " --output " + report_path);
    CHECK(eval.exit_code == 0);
    CHECK(eval.out.find("weighted_precision\t") != std::string::npos);
    CHECK(read_file(report_path).find("macro_f1\t") != std::string::npos);

    RunResult predict =
        run_cli(dir, "predict --input " + dev + " --bundle " + bundle);
    CHECK(predict.exit_code == 0);
    CHECK(predict.out.rfind("id\tlabel\n", 0) == 0);
    CHECK(predict.out.find("test-0\t") != std::string::npos);
}

TEST_CASE("cli experiment command") {
    TempDir dir("cliexp");
    testsup::SyntheticCorpus corpus = testsup::make_synthetic(5, 50);
    write_file(dir.file("train.csv"), testsup::to_csv(corpus, 0, 70));
    write_file(dir.file("dev.csv"), testsup::to_csv(corpus, 70, 85));
    write_file(dir.file("test.csv"), testsup::to_csv(corpus, 85, 100));
    write_file(dir.file("exp.json"),
               "{\n"
               "  \"data\": {\"train\": \"" + dir.file("train.csv") +
                   "\", \"dev\": \"" + dir.file("dev.csv") +
                   "\", \"test\": \"" + dir.file("test.csv") + "\"},\n"
               "  \"ngram\": {\"max_n\": 2},\n"
               "  \"models\": [\"nb\", \"logreg\"]\n"
               "}\n");

    std::string out_dir = dir.file("artifacts");
    RunResult run = run_cli(dir, "experiment --config " + dir.file("exp.json") +
                                     " --output " + out_dir + " --jobs 2");
    CHECK(run.exit_code == 0);
    CHECK(run.out.find("rank") != std::string::npos);
    for (const char* name : {"leaderboard.tsv", "leaderboard.txt",
                             "timings.tsv", "best_model.bundle",
                             "test_report.tsv"}) {
        CAPTURE(name);
        CHECK(std::filesystem::exists(std::string(out_dir) + "/" + name));
    }
}

TEST_CASE("cli exit codes") {
    TempDir dir("cliexit");
    write_file(dir.file("bad.csv"), "body,label\nxx,Hope\n");
    write_file(dir.file("tiny.csv"), "text,label\nposab posac,Hope\n");

    CHECK(run_cli(dir, "--help").exit_code == 0);
    CHECK(run_cli(dir, "stats --help").exit_code == 0);
    // usage error: unknown flag
    CHECK(run_cli(dir, "stats --nope x").exit_code == 1);
    // usage error: missing required option
    CHECK(run_cli(dir, "stats").exit_code == 1);
    // data error: file does not exist
    CHECK(run_cli(dir, "stats --input " + dir.file("absent.csv")).exit_code ==
          2);
    // data error: wrong column name
    CHECK(run_cli(dir, "stats --input " + dir.file("bad.csv")).exit_code == 2);
    // training error: one class only
    RunResult one_class =
        run_cli(dir, "train --input " + dir.file("tiny.csv") +
                         " --model logreg --output " + dir.file("m.bundle"));
    CHECK(one_class.exit_code == 3);
    CHECK(one_class.err.find("error:") != std::string::npos);
}
