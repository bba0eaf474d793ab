#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hopeclf/corpus.hpp"
#include "hopeclf/errors.hpp"
#include "support.hpp"

using namespace hopeclf;
using testsup::TempDir;
using testsup::write_file;

namespace {

Dataset load_text(const std::string& body, FileFormat fmt,
                  bool require_label = false, Split split = Split::Train) {
    static TempDir dir("corpus");
    static int n = 0;
    std::string ext = fmt == FileFormat::Jsonl ? ".jsonl"
                      : fmt == FileFormat::Tsv ? ".tsv"
                                               : ".csv";
    std::string path = dir.file("in" + std::to_string(n++) + ext);
    write_file(path, body);
    LoadSchema schema;
    schema.require_label = require_label;
    return load_dataset(path, fmt, schema, split);
}

} // namespace

TEST_CASE("csv basics and ids") {
    Dataset ds = load_text("text,label\nstay strong,Hope\nbad day,Not Hope\n",
                           FileFormat::Csv);
    REQUIRE(ds.size() == 2);
    CHECK(ds.documents[0].id == "train-0");
    CHECK(ds.documents[1].id == "train-1");
    CHECK(ds.documents[0].text == "stay strong");
    CHECK(ds.documents[0].label == Label::Hope);
    CHECK(ds.documents[1].label == Label::NotHope);
    CHECK(ds.fully_labeled());
}

TEST_CASE("csv quoting") {
    Dataset ds = load_text(
        "text,label\n\"a, b\",Hope\n\"say \"\"hi\"\"\",Hope\n\"two\nlines\",Hope\n",
        FileFormat::Csv);
    REQUIRE(ds.size() == 3);
    CHECK(ds.documents[0].text == "a, b");
    CHECK(ds.documents[1].text == "say \"hi\"");
    CHECK(ds.documents[2].text == "two\nlines");
}

TEST_CASE("csv crlf and blank lines") {
    Dataset ds = load_text("text,label\r\nok then,Hope\r\n\r\nmore,Hope\r\n",
                           FileFormat::Csv);
    REQUIRE(ds.size() == 2);
    CHECK(ds.documents[0].text == "ok then");
    CHECK(ds.documents[1].text == "more");
}

TEST_CASE("csv quoted empty field still makes a row") {
    Dataset ds = load_text("text,label\n\"\",Hope\n", FileFormat::Csv);
    REQUIRE(ds.size() == 1);
    CHECK(ds.documents[0].text.empty());
    CHECK_FALSE(ds.warnings.empty());
}

TEST_CASE("csv unterminated quote") {
    CHECK_THROWS_AS(load_text("text,label\n\"oops,Hope\n", FileFormat::Csv),
                    DataError);
}

TEST_CASE("csv ragged row reports data row number") {
    try {
        load_text("text,label\ngood,Hope\nonlytext\n", FileFormat::Csv);
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("row 1") != std::string::npos);
    }
}

TEST_CASE("header lookup is case-insensitive") {
    Dataset ds = load_text("Text,LABEL\nfine,Hope\n", FileFormat::Csv);
    REQUIRE(ds.size() == 1);
    CHECK(ds.documents[0].label == Label::Hope);
}

TEST_CASE("missing column is an error") {
    CHECK_THROWS_AS(load_text("body,label\nx,Hope\n", FileFormat::Csv),
                    DataError);
}

TEST_CASE("label spellings") {
    Dataset ds = load_text(
        "text,label\naa,HOPE\nbb,hope\ncc,0\ndd,Not Hope\nee,not  hope\nff,1\n",
        FileFormat::Csv);
    REQUIRE(ds.size() == 6);
    for (int i = 0; i < 3; ++i) CHECK(ds.documents[i].label == Label::Hope);
    for (int i = 3; i < 6; ++i) CHECK(ds.documents[i].label == Label::NotHope);
    CHECK_THROWS_AS(load_text("text,label\naa,maybe\n", FileFormat::Csv),
                    DataError);
}

TEST_CASE("empty label field means unlabeled") {
    Dataset ds = load_text("text,label\naa,\nbb,Hope\n", FileFormat::Csv);
    REQUIRE(ds.size() == 2);
    CHECK_FALSE(ds.documents[0].label.has_value());
    CHECK_FALSE(ds.fully_labeled());
    CHECK_THROWS_AS(
        load_text("text,label\naa,\n", FileFormat::Csv, /*require_label=*/true),
        DataError);
}

TEST_CASE("tsv does not split on commas") {
    Dataset ds =
        load_text("text\tlabel\na, b\tHope\n", FileFormat::Tsv);
    REQUIRE(ds.size() == 1);
    CHECK(ds.documents[0].text == "a, b");
}

TEST_CASE("jsonl labels as string int or null") {
    Dataset ds = load_text(
        "{\"text\":\"aa\",\"label\":\"Hope\"}\n"
        "{\"text\":\"bb\",\"label\":1}\n"
        "{\"text\":\"cc\",\"label\":null}\n",
        FileFormat::Jsonl);
    REQUIRE(ds.size() == 3);
    CHECK(ds.documents[0].label == Label::Hope);
    CHECK(ds.documents[1].label == Label::NotHope);
    CHECK_FALSE(ds.documents[2].label.has_value());
}

TEST_CASE("jsonl parse error names the line") {
    try {
        load_text("{\"text\":\"aa\"}\nnot json\n", FileFormat::Jsonl);
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("save and reload round-trips") {
    TempDir dir("roundtrip");
    Dataset ds = load_text("text,label\n\"a, \"\"b\"\"\",Hope\nplain,Not Hope\n",
                           FileFormat::Csv);
    LoadSchema schema;
    for (FileFormat fmt :
         {FileFormat::Csv, FileFormat::Tsv, FileFormat::Jsonl}) {
        std::string path = dir.file(std::string("out.") + format_name(fmt));
        save_dataset(ds, path, fmt, schema);
        Dataset back = load_dataset(path, fmt, schema, Split::Train);
        REQUIRE(back.size() == ds.size());
        for (std::size_t i = 0; i < ds.size(); ++i) {
            CHECK(back.documents[i].text == ds.documents[i].text);
            CHECK(back.documents[i].label == ds.documents[i].label);
        }
    }
}

TEST_CASE("stats counts unlabeled rows") {
    Dataset ds = load_text("text,label\naa,Hope\nbb,\ncc,Not Hope\ndd,Hope\n",
                           FileFormat::Csv);
    ClassCounts counts = stats(ds);
    CHECK(counts.hope == 2);
    CHECK(counts.not_hope == 1);
    CHECK(counts.unlabeled == 1);
    CHECK(counts.total == 4);
}

TEST_CASE("split integrity finds normalized overlap") {
    Dataset train = load_text("text,label\nStay  Strong,Hope\nunique one,Hope\n",
                              FileFormat::Csv, false, Split::Train);
    Dataset dev = load_text("text,label\nstay strong,Hope\n", FileFormat::Csv,
                            false, Split::Dev);
    Dataset test = load_text("text,label\nnothing shared,Hope\n",
                             FileFormat::Csv, false, Split::Test);
    std::vector<SplitCollision> hits = check_split_integrity(train, dev, test);
    REQUIRE(hits.size() == 1);
    CHECK(hits[0].normalized_text == "stay strong");
    CHECK(hits[0].first == Split::Train);
    CHECK(hits[0].second == Split::Dev);
    Dataset clean_dev = load_text("text,label\nall fresh,Hope\n",
                                  FileFormat::Csv, false, Split::Dev);
    CHECK(check_split_integrity(train, clean_dev, test).empty());
}

TEST_CASE("format names parse both ways") {
    CHECK(parse_format("csv") == FileFormat::Csv);
    CHECK(parse_format("tsv") == FileFormat::Tsv);
    CHECK(parse_format("jsonl") == FileFormat::Jsonl);
    CHECK_THROWS_AS(parse_format("xml"), DataError);
    CHECK(std::string(format_name(FileFormat::Csv)) == "csv");
}
