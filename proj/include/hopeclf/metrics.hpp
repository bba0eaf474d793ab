#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "hopeclf/corpus.hpp"

namespace hopeclf {

struct ConfusionMatrix {
    // counts[gold][predicted] in canonical label order.
    std::array<std::array<std::int64_t, kNumLabels>, kNumLabels> counts{};

    std::int64_t total() const;
};

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::int64_t support = 0;
};

struct EvalReport {
    std::array<ClassMetrics, kNumLabels> per_class{};
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f1 = 0.0;
    double weighted_precision = 0.0;
    double weighted_recall = 0.0;
    double weighted_f1 = 0.0;
    double accuracy = 0.0;
    ConfusionMatrix confusion;
    bool zero_division = false; // some ratio had an empty denominator
};

// Precision/recall/F1 per class with macro (unweighted) and weighted
// (support-weighted) averages. Zero-denominator ratios score 0 and set the
// zero_division flag. Throws DataError on empty or mismatched inputs.
EvalReport evaluate(const std::vector<Label>& gold,
                    const std::vector<Label>& predicted);

enum class ReportStyle {
    Table,   // two tab-separated lines: header and values at 2 decimals
    Machine, // key<TAB>value lines, reals at full precision
};

std::string format_report(const EvalReport& report, ReportStyle style);

// Parses the machine style back; round-trips exactly.
EvalReport parse_report(const std::string& machine_text);

// Shared numeric formatting: %.17g, enough digits to round-trip a double.
std::string format_real(double value);

} // namespace hopeclf
