#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "hopeclf/errors.hpp"
#include "hopeclf/metrics.hpp"

using namespace hopeclf;

namespace {

// 5 Hope + 5 Not Hope gold; 3 + 4 correct
std::pair<std::vector<Label>, std::vector<Label>> fixture() {
    std::vector<Label> gold, pred;
    for (int i = 0; i < 5; ++i) gold.push_back(Label::Hope);
    for (int i = 0; i < 5; ++i) gold.push_back(Label::NotHope);
    pred = {Label::Hope,    Label::Hope,    Label::Hope,
            Label::NotHope, Label::NotHope, // gold Hope
            Label::Hope,    Label::NotHope, Label::NotHope,
            Label::NotHope, Label::NotHope}; // gold Not Hope
    return {gold, pred};
}

} // namespace

TEST_CASE("metrics fixture values") {
    auto [gold, pred] = fixture();
    EvalReport r = evaluate(gold, pred);
    CHECK(r.confusion.counts[0][0] == 3);
    CHECK(r.confusion.counts[0][1] == 2);
    CHECK(r.confusion.counts[1][0] == 1);
    CHECK(r.confusion.counts[1][1] == 4);
    CHECK(r.confusion.total() == 10);

    CHECK(r.per_class[0].precision == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(r.per_class[0].recall == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(r.per_class[0].f1 ==
          doctest::Approx(0.6666666666666665).epsilon(1e-15));
    CHECK(r.per_class[0].support == 5);
    CHECK(r.per_class[1].precision ==
          doctest::Approx(0.6666666666666666).epsilon(1e-15));
    CHECK(r.per_class[1].recall == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(r.per_class[1].f1 ==
          doctest::Approx(0.7272727272727272).epsilon(1e-15));

    CHECK(r.macro_f1 == doctest::Approx(0.6969696969696968).epsilon(1e-15));
    CHECK(r.macro_precision ==
          doctest::Approx(0.7083333333333333).epsilon(1e-15));
    CHECK(r.macro_recall == doctest::Approx(0.7).epsilon(1e-15));
    // balanced supports: weighted averages coincide with macro
    CHECK(r.weighted_f1 == doctest::Approx(r.macro_f1).epsilon(1e-15));
    CHECK(r.accuracy == doctest::Approx(0.7).epsilon(1e-15));
    CHECK_FALSE(r.zero_division);
}

TEST_CASE("weighted averages follow support") {
    // gold: 3 Hope, 1 Not Hope; predictions all Hope
    std::vector<Label> gold = {Label::Hope, Label::Hope, Label::Hope,
                               Label::NotHope};
    std::vector<Label> pred(4, Label::Hope);
    EvalReport r = evaluate(gold, pred);
    CHECK(r.per_class[0].precision == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(r.per_class[0].recall == 1.0);
    CHECK(r.per_class[1].precision == 0.0);
    CHECK(r.per_class[1].recall == 0.0);
    CHECK(r.per_class[1].f1 == 0.0);
    CHECK(r.zero_division);
    CHECK(r.weighted_recall == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(r.weighted_precision ==
          doctest::Approx(0.75 * 0.75).epsilon(1e-15));
    CHECK(r.macro_recall == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("evaluate validates input") {
    CHECK_THROWS_AS(evaluate({}, {}), DataError);
    CHECK_THROWS_AS(evaluate({Label::Hope}, {}), DataError);
}

TEST_CASE("table style") {
    auto [gold, pred] = fixture();
    std::string table = format_report(evaluate(gold, pred), ReportStyle::Table);
    CHECK(table ==
          "weighted_precision\tweighted_recall\tweighted_f1\tmacro_precision"
          "\tmacro_recall\tmacro_f1\taccuracy\n"
          "0.71\t0.70\t0.70\t0.71\t0.70\t0.70\t0.70\n");
}

TEST_CASE("machine style round-trips exactly") {
    auto [gold, pred] = fixture();
    EvalReport r = evaluate(gold, pred);
    std::string machine = format_report(r, ReportStyle::Machine);
    EvalReport back = parse_report(machine);
    CHECK(back.macro_f1 == r.macro_f1);
    CHECK(back.weighted_precision == r.weighted_precision);
    CHECK(back.accuracy == r.accuracy);
    CHECK(back.per_class[0].f1 == r.per_class[0].f1);
    CHECK(back.per_class[1].support == 5);
    CHECK(back.confusion.counts[0][1] == 2);
    CHECK(back.zero_division == r.zero_division);
    // byte-stable through a full cycle
    CHECK(format_report(back, ReportStyle::Machine) == machine);
}

TEST_CASE("machine style carries full precision") {
    auto [gold, pred] = fixture();
    std::string machine =
        format_report(evaluate(gold, pred), ReportStyle::Machine);
    CHECK(machine.find("macro_f1\t0.69696969696969679\n") !=
          std::string::npos);
    CHECK(machine.find("support_hope\t5\n") != std::string::npos);
    CHECK(machine.find("confusion_hope_not_hope\t2\n") != std::string::npos);
    CHECK(machine.find("zero_division\t0\n") != std::string::npos);
}

TEST_CASE("parse_report rejects damage") {
    auto [gold, pred] = fixture();
    std::string machine =
        format_report(evaluate(gold, pred), ReportStyle::Machine);
    CHECK_THROWS_AS(parse_report(""), DataError);
    std::string missing = machine.substr(machine.find('\n') + 1);
    CHECK_THROWS_AS(parse_report(missing), DataError);
    std::string mangled = machine;
    mangled.replace(mangled.find("\t0."), 3, "\tzz");
    CHECK_THROWS_AS(parse_report(mangled), DataError);
}

TEST_CASE("format_real round-trips doubles") {
    for (double v : {0.1, 1.0 / 3.0, 0.6969696969696968, 1e-17, 12345.678}) {
        CHECK(std::stod(format_real(v)) == v);
    }
    CHECK(format_real(1.0) == "1");
}
