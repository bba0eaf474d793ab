#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hopeclf/errors.hpp"

namespace hopeclf {

// Canonical label order: Hope before Not Hope. Index 0/1 is used throughout
// (priors, confusion matrices, tie-breaking).
enum class Label : int { Hope = 0, NotHope = 1 };

inline constexpr int kNumLabels = 2;

inline int label_index(Label l) { return static_cast<int>(l); }
Label label_from_index(int index);

// Accepts "Hope" / "Not Hope" case-insensitively (inner whitespace collapsed)
// plus the numeric forms "0" / "1". Throws DataError otherwise.
Label parse_label(const std::string& text);
const char* label_name(Label l); // "Hope" / "Not Hope"

enum class Split { Train, Dev, Test };
const char* split_name(Split s); // "train" / "dev" / "test"

struct Document {
    std::string id;
    std::string text;
    std::optional<Label> label;
};

struct Dataset {
    Split split = Split::Train;
    std::vector<Document> documents;
    std::vector<std::string> warnings; // non-fatal oddities noticed on load

    std::size_t size() const { return documents.size(); }
    bool fully_labeled() const;
    std::vector<Label> labels() const; // throws DataError on unlabeled rows
    std::vector<std::string> texts() const;
};

enum class FileFormat { Csv, Tsv, Jsonl };
FileFormat parse_format(const std::string& name); // "csv" / "tsv" / "jsonl"
const char* format_name(FileFormat f);

struct LoadSchema {
    std::string text_column = "text";
    std::string label_column = "label";
    bool require_label = false;
};

// Loads a dataset and assigns row ids "<split>-<row index>" (0-based).
// CSV/TSV expect a header row; JSONL expects one object per line with a
// "text" key and an optional "label" key.
Dataset load_dataset(const std::string& path, FileFormat format,
                     const LoadSchema& schema, Split split);

// Writes documents back out in the given format (text column plus a label
// column when every row is labeled).
void save_dataset(const Dataset& dataset, const std::string& path,
                  FileFormat format, const LoadSchema& schema);

struct ClassCounts {
    std::int64_t hope = 0;
    std::int64_t not_hope = 0;
    std::int64_t unlabeled = 0;
    std::int64_t total = 0;
};

ClassCounts stats(const Dataset& dataset);

struct SplitCollision {
    std::string normalized_text;
    Split first;
    Split second;
};

// Reports texts shared between splits after normalization (lowercase, runs of
// whitespace collapsed to one space). One entry per shared text per pair.
std::vector<SplitCollision> check_split_integrity(const Dataset& train,
                                                  const Dataset& dev,
                                                  const Dataset& test);

} // namespace hopeclf
