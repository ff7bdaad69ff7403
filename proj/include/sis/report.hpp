#pragma once

#include <optional>
#include <string>

#include "sis/criteria.hpp"
#include "sis/wavelets.hpp"

namespace sis {

struct ReportMeta {
    std::string example;
    std::string G_expr;
    IntMatrix dilation;
    std::uint64_t seed = 0;
    std::string config_hash;
    bool deterministic = false;  // omit wall-clock fields
};

/// Criteria suite as a JSON document (fixed key order; byte-identical for
/// identical config + seed + kernel backend when deterministic).
std::string criteria_report_json(const SuiteResult& result, const ReportMeta& meta, const DensityProbe& probe);

/// Per-criterion trace as CSV rows (j, eps, value, se, denom).
std::string criterion_trace_csv(const CriterionReport& rep);

struct WaveletReportData {
    CalderonCheck calderon;
    bool calderon_expected_pass = true;
    VerdictTrace semiorth;
    std::vector<std::pair<int, VerdictTrace>> origin;
    std::optional<double> decomposition_max_dev;  // vs the paired core, when registered
    double decomposition_tol = 1e-6;
};

std::string wavelet_report_json(const WaveletReportData& data, const ReportMeta& meta);

struct DilationReportData {
    bool accepted = false;
    std::string error;
    int dim = 0;
    long long det_abs = 0;
    std::vector<std::vector<long long>> digits;
};

std::string dilation_report_json(const DilationReportData& data, const ReportMeta& meta);

}  // namespace sis
