#include "hopeclf/metrics.hpp"

#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>

namespace hopeclf {

std::int64_t ConfusionMatrix::total() const {
    std::int64_t t = 0;
    for (const auto& row : counts)
        for (std::int64_t c : row) t += c;
    return t;
}

std::string format_real(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

namespace {

std::string format_fixed2(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", value);
    return buf;
}

// Ratio with explicit zero-division bookkeeping.
double ratio(double num, double denom, bool& flag) {
    if (denom == 0.0) {
        flag = true;
        return 0.0;
    }
    return num / denom;
}

} // namespace

EvalReport evaluate(const std::vector<Label>& gold,
                    const std::vector<Label>& predicted) {
    if (gold.empty())
        throw DataError("cannot evaluate an empty label set");
    if (gold.size() != predicted.size())
        throw DataError("gold/predicted length mismatch: " +
                        std::to_string(gold.size()) + " vs " +
                        std::to_string(predicted.size()));

    EvalReport rep;
    for (std::size_t i = 0; i < gold.size(); ++i)
        ++rep.confusion.counts[label_index(gold[i])][label_index(predicted[i])];

    const auto& m = rep.confusion.counts;
    double correct = 0.0;
    for (int c = 0; c < kNumLabels; ++c) correct += static_cast<double>(m[c][c]);

    double support_total = static_cast<double>(gold.size());
    for (int c = 0; c < kNumLabels; ++c) {
        double tp = static_cast<double>(m[c][c]);
        double pred_c = 0.0, gold_c = 0.0;
        for (int o = 0; o < kNumLabels; ++o) {
            pred_c += static_cast<double>(m[o][c]);
            gold_c += static_cast<double>(m[c][o]);
        }
        ClassMetrics& cm = rep.per_class[c];
        cm.support = static_cast<std::int64_t>(gold_c);
        cm.precision = ratio(tp, pred_c, rep.zero_division);
        cm.recall = ratio(tp, gold_c, rep.zero_division);
        cm.f1 = ratio(2.0 * cm.precision * cm.recall,
                      cm.precision + cm.recall, rep.zero_division);

        rep.macro_precision += cm.precision / kNumLabels;
        rep.macro_recall += cm.recall / kNumLabels;
        rep.macro_f1 += cm.f1 / kNumLabels;
        rep.weighted_precision += cm.precision * gold_c / support_total;
        rep.weighted_recall += cm.recall * gold_c / support_total;
        rep.weighted_f1 += cm.f1 * gold_c / support_total;
    }
    rep.accuracy = correct / support_total;
    return rep;
}

std::string format_report(const EvalReport& rep, ReportStyle style) {
    std::ostringstream out;
    if (style == ReportStyle::Table) {
        out << "weighted_precision\tweighted_recall\tweighted_f1\t"
               "macro_precision\tmacro_recall\tmacro_f1\taccuracy\n";
        out << format_fixed2(rep.weighted_precision) << '\t'
            << format_fixed2(rep.weighted_recall) << '\t'
            << format_fixed2(rep.weighted_f1) << '\t'
            << format_fixed2(rep.macro_precision) << '\t'
            << format_fixed2(rep.macro_recall) << '\t'
            << format_fixed2(rep.macro_f1) << '\t'
            << format_fixed2(rep.accuracy) << '\n';
        return out.str();
    }
    out << "accuracy\t" << format_real(rep.accuracy) << '\n';
    out << "macro_precision\t" << format_real(rep.macro_precision) << '\n';
    out << "macro_recall\t" << format_real(rep.macro_recall) << '\n';
    out << "macro_f1\t" << format_real(rep.macro_f1) << '\n';
    out << "weighted_precision\t" << format_real(rep.weighted_precision) << '\n';
    out << "weighted_recall\t" << format_real(rep.weighted_recall) << '\n';
    out << "weighted_f1\t" << format_real(rep.weighted_f1) << '\n';
    const char* slug[kNumLabels] = {"hope", "not_hope"};
    for (int c = 0; c < kNumLabels; ++c) {
        out << "precision_" << slug[c] << '\t'
            << format_real(rep.per_class[c].precision) << '\n';
        out << "recall_" << slug[c] << '\t'
            << format_real(rep.per_class[c].recall) << '\n';
        out << "f1_" << slug[c] << '\t' << format_real(rep.per_class[c].f1)
            << '\n';
        out << "support_" << slug[c] << '\t' << rep.per_class[c].support
            << '\n';
    }
    for (int g = 0; g < kNumLabels; ++g)
        for (int p = 0; p < kNumLabels; ++p)
            out << "confusion_" << slug[g] << '_' << slug[p] << '\t'
                << rep.confusion.counts[g][p] << '\n';
    out << "zero_division\t" << (rep.zero_division ? 1 : 0) << '\n';
    return out.str();
}

EvalReport parse_report(const std::string& machine_text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(machine_text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::size_t tab = line.find('\t');
        if (tab == std::string::npos)
            throw DataError("report line " + std::to_string(lineno) +
                            ": expected key<TAB>value");
        kv[line.substr(0, tab)] = line.substr(tab + 1);
    }
    auto need = [&](const std::string& key) -> const std::string& {
        auto it = kv.find(key);
        if (it == kv.end())
            throw DataError("report is missing key \"" + key + "\"");
        return it->second;
    };
    auto real = [&](const std::string& key) {
        const std::string& v = need(key);
        char* end = nullptr;
        double d = std::strtod(v.c_str(), &end);
        if (end == v.c_str() || *end != '\0')
            throw DataError("report key \"" + key + "\" has a bad number: " + v);
        return d;
    };
    auto integer = [&](const std::string& key) {
        const std::string& v = need(key);
        char* end = nullptr;
        long long d = std::strtoll(v.c_str(), &end, 10);
        if (end == v.c_str() || *end != '\0')
            throw DataError("report key \"" + key + "\" has a bad integer: " + v);
        return static_cast<std::int64_t>(d);
    };

    EvalReport rep;
    rep.accuracy = real("accuracy");
    rep.macro_precision = real("macro_precision");
    rep.macro_recall = real("macro_recall");
    rep.macro_f1 = real("macro_f1");
    rep.weighted_precision = real("weighted_precision");
    rep.weighted_recall = real("weighted_recall");
    rep.weighted_f1 = real("weighted_f1");
    const char* slug[kNumLabels] = {"hope", "not_hope"};
    for (int c = 0; c < kNumLabels; ++c) {
        rep.per_class[c].precision = real(std::string("precision_") + slug[c]);
        rep.per_class[c].recall = real(std::string("recall_") + slug[c]);
        rep.per_class[c].f1 = real(std::string("f1_") + slug[c]);
        rep.per_class[c].support = integer(std::string("support_") + slug[c]);
    }
    for (int g = 0; g < kNumLabels; ++g)
        for (int p = 0; p < kNumLabels; ++p)
            rep.confusion.counts[g][p] = integer(std::string("confusion_") +
                                                 slug[g] + "_" + slug[p]);
    rep.zero_division = integer("zero_division") != 0;
    return rep;
}

} // namespace hopeclf
