#include "hopeclf/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace hopeclf {

namespace {

std::string ascii_lower(std::string s) {
    for (char& c : s)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return s;
}

// Trim plus collapse internal whitespace runs to single spaces.
std::string squash_whitespace(const std::string& s) {
    std::string out;
    bool in_space = true; // swallow leading spaces
    for (unsigned char c : s) {
        if (std::isspace(c)) {
            in_space = true;
        } else {
            if (in_space && !out.empty()) out.push_back(' ');
            in_space = false;
            out.push_back(static_cast<char>(c));
        }
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// RFC-4180-style parser shared by CSV and TSV: quoted fields, doubled quotes,
// embedded newlines. Returns one vector of fields per record.
std::vector<std::vector<std::string>> parse_delimited(const std::string& data,
                                                      char delim,
                                                      const std::string& path) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> fields;
    std::string field;
    bool in_quotes = false;
    bool record_active = false; // any character seen on the current record
    std::size_t i = 0;
    const std::size_t n = data.size();
    auto end_field = [&]() {
        fields.push_back(std::move(field));
        field.clear();
    };
    auto end_record = [&]() {
        end_field();
        records.push_back(std::move(fields));
        fields.clear();
        record_active = false;
    };
    while (i < n) {
        char c = data[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < n && data[i + 1] == '"') {
                    field.push_back('"');
                    i += 2;
                } else {
                    in_quotes = false;
                    ++i;
                }
            } else {
                field.push_back(c);
                ++i;
            }
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < n && data[i + 1] == '\n') ++i;
            ++i;
            // Blank lines between records are skipped, not empty records.
            if (record_active) end_record();
        } else {
            record_active = true;
            if (c == '"' && field.empty()) {
                in_quotes = true;
            } else if (c == delim) {
                end_field();
            } else {
                field.push_back(c);
            }
            ++i;
        }
    }
    if (in_quotes)
        throw DataError(path + ": unterminated quoted field at end of file");
    if (record_active) end_record();
    return records;
}

std::size_t find_column(const std::vector<std::string>& header,
                        const std::string& name, const std::string& path,
                        bool required) {
    std::string want = ascii_lower(name);
    for (std::size_t i = 0; i < header.size(); ++i)
        if (ascii_lower(squash_whitespace(header[i])) == want) return i;
    if (required)
        throw DataError(path + ": header has no \"" + name + "\" column");
    return header.size(); // sentinel: not present
}

void write_delimited_field(std::ostream& out, const std::string& value,
                           char delim) {
    bool needs_quotes = value.find(delim) != std::string::npos ||
                        value.find('"') != std::string::npos ||
                        value.find('\n') != std::string::npos ||
                        value.find('\r') != std::string::npos;
    if (!needs_quotes) {
        out << value;
        return;
    }
    out << '"';
    for (char c : value) {
        if (c == '"') out << "\"\"";
        else out << c;
    }
    out << '"';
}

} // namespace

Label label_from_index(int index) {
    if (index == 0) return Label::Hope;
    if (index == 1) return Label::NotHope;
    throw DataError("label index out of range: " + std::to_string(index));
}

Label parse_label(const std::string& text) {
    std::string norm = ascii_lower(squash_whitespace(text));
    if (norm == "hope" || norm == "0") return Label::Hope;
    if (norm == "not hope" || norm == "1") return Label::NotHope;
    throw DataError("unknown label: \"" + text + "\"");
}

const char* label_name(Label l) {
    return l == Label::Hope ? "Hope" : "Not Hope";
}

const char* split_name(Split s) {
    switch (s) {
    case Split::Train: return "train";
    case Split::Dev: return "dev";
    default: return "test";
    }
}

bool Dataset::fully_labeled() const {
    return std::all_of(documents.begin(), documents.end(),
                       [](const Document& d) { return d.label.has_value(); });
}

std::vector<Label> Dataset::labels() const {
    std::vector<Label> out;
    out.reserve(documents.size());
    for (const Document& d : documents) {
        if (!d.label)
            throw DataError("document " + d.id + " has no label");
        out.push_back(*d.label);
    }
    return out;
}

std::vector<std::string> Dataset::texts() const {
    std::vector<std::string> out;
    out.reserve(documents.size());
    for (const Document& d : documents) out.push_back(d.text);
    return out;
}

FileFormat parse_format(const std::string& name) {
    std::string norm = ascii_lower(squash_whitespace(name));
    if (norm == "csv") return FileFormat::Csv;
    if (norm == "tsv") return FileFormat::Tsv;
    if (norm == "jsonl") return FileFormat::Jsonl;
    throw DataError("unknown format: \"" + name + "\" (expected csv, tsv or jsonl)");
}

const char* format_name(FileFormat f) {
    switch (f) {
    case FileFormat::Csv: return "csv";
    case FileFormat::Tsv: return "tsv";
    default: return "jsonl";
    }
}

namespace {

Dataset load_delimited(const std::string& path, char delim,
                       const LoadSchema& schema, Split split) {
    Dataset ds;
    ds.split = split;
    std::string data = read_file(path);
    if (data.empty()) return ds;
    auto records = parse_delimited(data, delim, path);
    if (records.empty()) return ds;

    const auto& header = records[0];
    std::size_t text_col = find_column(header, schema.text_column, path, true);
    std::size_t label_col = find_column(header, schema.label_column, path,
                                        schema.require_label);

    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        std::size_t row = r - 1; // 0-based data row index
        if (rec.size() != header.size())
            throw DataError(path + ": row " + std::to_string(row) + " has " +
                            std::to_string(rec.size()) + " fields, expected " +
                            std::to_string(header.size()));
        Document doc;
        doc.id = std::string(split_name(split)) + "-" + std::to_string(row);
        doc.text = rec[text_col];
        if (label_col < rec.size()) {
            const std::string& raw = rec[label_col];
            if (!squash_whitespace(raw).empty()) {
                try {
                    doc.label = parse_label(raw);
                } catch (const DataError& e) {
                    throw DataError(path + ": row " + std::to_string(row) +
                                    ": " + e.what());
                }
            }
        }
        if (schema.require_label && !doc.label)
            throw DataError(path + ": row " + std::to_string(row) +
                            " has no label");
        if (doc.text.empty())
            ds.warnings.push_back("row " + std::to_string(row) +
                                  " has empty text");
        ds.documents.push_back(std::move(doc));
    }
    return ds;
}

Dataset load_jsonl(const std::string& path, const LoadSchema& schema,
                   Split split) {
    Dataset ds;
    ds.split = split;
    std::string data = read_file(path);
    std::istringstream in(data);
    std::string line;
    std::size_t row = 0;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (squash_whitespace(line).empty()) continue;
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw DataError(path + ": line " + std::to_string(lineno) +
                            ": invalid JSON: " + e.what());
        }
        if (!obj.is_object())
            throw DataError(path + ": line " + std::to_string(lineno) +
                            ": expected a JSON object");
        if (!obj.contains(schema.text_column) ||
            !obj[schema.text_column].is_string())
            throw DataError(path + ": line " + std::to_string(lineno) +
                            ": missing string \"" + schema.text_column +
                            "\" key");
        Document doc;
        doc.id = std::string(split_name(split)) + "-" + std::to_string(row);
        doc.text = obj[schema.text_column].get<std::string>();
        if (obj.contains(schema.label_column) &&
            !obj[schema.label_column].is_null()) {
            const auto& lab = obj[schema.label_column];
            try {
                if (lab.is_string())
                    doc.label = parse_label(lab.get<std::string>());
                else if (lab.is_number_integer())
                    doc.label = label_from_index(lab.get<int>());
                else
                    throw DataError("label must be a string or integer");
            } catch (const DataError& e) {
                throw DataError(path + ": line " + std::to_string(lineno) +
                                ": " + e.what());
            }
        }
        if (schema.require_label && !doc.label)
            throw DataError(path + ": line " + std::to_string(lineno) +
                            " has no label");
        if (doc.text.empty())
            ds.warnings.push_back("row " + std::to_string(row) +
                                  " has empty text");
        ds.documents.push_back(std::move(doc));
        ++row;
    }
    return ds;
}

} // namespace

Dataset load_dataset(const std::string& path, FileFormat format,
                     const LoadSchema& schema, Split split) {
    switch (format) {
    case FileFormat::Csv: return load_delimited(path, ',', schema, split);
    case FileFormat::Tsv: return load_delimited(path, '\t', schema, split);
    default: return load_jsonl(path, schema, split);
    }
}

void save_dataset(const Dataset& dataset, const std::string& path,
                  FileFormat format, const LoadSchema& schema) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    bool labeled = dataset.fully_labeled();
    if (format == FileFormat::Jsonl) {
        for (const Document& d : dataset.documents) {
            nlohmann::json obj;
            obj[schema.text_column] = d.text;
            if (labeled) obj[schema.label_column] = label_name(*d.label);
            out << obj.dump() << '\n';
        }
        return;
    }
    char delim = format == FileFormat::Csv ? ',' : '\t';
    write_delimited_field(out, schema.text_column, delim);
    if (labeled) {
        out << delim;
        write_delimited_field(out, schema.label_column, delim);
    }
    out << '\n';
    for (const Document& d : dataset.documents) {
        write_delimited_field(out, d.text, delim);
        if (labeled) {
            out << delim;
            write_delimited_field(out, label_name(*d.label), delim);
        }
        out << '\n';
    }
}

ClassCounts stats(const Dataset& dataset) {
    ClassCounts counts;
    for (const Document& d : dataset.documents) {
        if (!d.label) ++counts.unlabeled;
        else if (*d.label == Label::Hope) ++counts.hope;
        else ++counts.not_hope;
        ++counts.total;
    }
    return counts;
}

std::vector<SplitCollision> check_split_integrity(const Dataset& train,
                                                  const Dataset& dev,
                                                  const Dataset& test) {
    auto normalize = [](const std::string& s) {
        return ascii_lower(squash_whitespace(s));
    };
    auto texts_of = [&](const Dataset& ds) {
        std::set<std::string> out;
        for (const Document& d : ds.documents) out.insert(normalize(d.text));
        return out;
    };
    std::set<std::string> norm_train = texts_of(train);
    std::set<std::string> norm_dev = texts_of(dev);
    std::set<std::string> norm_test = texts_of(test);

    std::vector<SplitCollision> collisions;
    auto compare = [&](const std::set<std::string>& a, Split sa,
                       const std::set<std::string>& b, Split sb) {
        for (const std::string& t : a)
            if (b.count(t)) collisions.push_back({t, sa, sb});
    };
    compare(norm_train, Split::Train, norm_dev, Split::Dev);
    compare(norm_train, Split::Train, norm_test, Split::Test);
    compare(norm_dev, Split::Dev, norm_test, Split::Test);
    return collisions;
}

} // namespace hopeclf
