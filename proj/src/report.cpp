#include "sis/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "sis/kernels.hpp"

namespace sis {

namespace {

using json = nlohmann::ordered_json;

json meta_json(const ReportMeta& meta) {
    json m;
    m["example"] = meta.example;
    if (!meta.G_expr.empty()) m["G"] = meta.G_expr;
    if (!meta.dilation.empty()) m["dilation"] = meta.dilation;
    m["seed"] = meta.seed;
    m["kernels"] = std::string(kernels::backend_name());
    if (!meta.config_hash.empty()) m["config_hash"] = meta.config_hash;
    if (!meta.deterministic) {
        const auto now = std::chrono::system_clock::now();
        m["timestamp"] = static_cast<std::int64_t>(
            std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count());
    }
    return m;
}

json trace_json(const std::vector<LevelStat>& trace) {
    json rows = json::array();
    // cap the emitted rows; full traces go to the CSV export
    const std::size_t max_rows = 160;
    for (std::size_t i = 0; i < trace.size() && i < max_rows; ++i) {
        const auto& t = trace[i];
        json row;
        row["j"] = t.j;
        if (t.eps >= 0.0) row["eps"] = t.eps;
        row["value"] = t.value;
        if (t.se > 0.0) row["se"] = t.se;
        row["denom"] = t.denom;
        rows.push_back(std::move(row));
    }
    return rows;
}

json report_json(const CriterionReport& rep) {
    json r;
    r["id"] = to_string(rep.id);
    r["verdict"] = to_string(rep.verdict);
    r["score"] = rep.score;
    r["tolerance"] = rep.tolerance;
    if (!rep.note.empty()) r["note"] = rep.note;
    r["trace"] = trace_json(rep.trace);
    return r;
}

json verdict_trace_json(const VerdictTrace& t) {
    json r;
    r["verdict"] = to_string(t.verdict);
    r["score"] = t.score;
    if (!t.note.empty()) r["note"] = t.note;
    r["trace"] = trace_json(t.trace);
    return r;
}

}  // namespace

std::string criteria_report_json(const SuiteResult& result, const ReportMeta& meta,
                                 const DensityProbe& probe) {
    json doc;
    doc["schema"] = "criteria-report/1";
    doc["meta"] = meta_json(meta);
    {
        json p;
        p["jmax"] = probe.j_max;
        p["samples"] = probe.samples_per_level;
        p["epsilon"] = probe.epsilon;
        p["window"] = probe.window;
        p["box_radius"] = probe.box_radius;
        doc["probe"] = std::move(p);
    }
    {
        json h;
        h["refinable"] = result.hypothesis.refinable;
        h["refinability_violation"] = result.hypothesis.refinability_violation;
        h["support_in_G"] = result.hypothesis.support_in_G;
        h["G_invariant"] = result.hypothesis.G_invariant;
        doc["hypothesis"] = std::move(h);
    }
    json crits = json::array();
    for (const auto& r : result.reports) crits.push_back(report_json(r));
    doc["criteria"] = std::move(crits);
    if (result.projection) doc["projection_norm"] = report_json(*result.projection);
    doc["consensus"] = to_string(result.consensus);
    if (result.ground_truth) doc["ground_truth"] = *result.ground_truth ? "complete" : "incomplete";
    if (result.matches_ground_truth) doc["match"] = *result.matches_ground_truth;
    return doc.dump(2) + "\n";
}

std::string criterion_trace_csv(const CriterionReport& rep) {
    std::ostringstream os;
    os << "criterion,j,eps,value,se,denom\n";
    char buf[64];
    for (const auto& t : rep.trace) {
        os << to_string(rep.id) << "," << t.j << ",";
        if (t.eps >= 0.0) {
            std::snprintf(buf, sizeof buf, "%.17g", t.eps);
            os << buf;
        }
        std::snprintf(buf, sizeof buf, "%.17g", t.value);
        os << "," << buf;
        std::snprintf(buf, sizeof buf, "%.17g", t.se);
        os << "," << buf << "," << t.denom << "\n";
    }
    return os.str();
}

std::string wavelet_report_json(const WaveletReportData& data, const ReportMeta& meta) {
    json doc;
    doc["schema"] = "wavelet-report/1";
    doc["meta"] = meta_json(meta);
    {
        json c;
        c["verdict"] = to_string(data.calderon.verdict);
        c["expected"] = data.calderon_expected_pass ? "PASS" : "FAIL";
        c["max_abs_dev"] = data.calderon.max_abs_dev;
        c["samples"] = data.calderon.samples;
        c["boundary_skipped"] = data.calderon.boundary_skipped;
        doc["calderon"] = std::move(c);
    }
    doc["semiorthogonality"] = verdict_trace_json(data.semiorth);
    json origin = json::array();
    for (const auto& [alpha, t] : data.origin) {
        json o;
        o["alpha"] = alpha;
        o["verdict"] = to_string(t.verdict);
        o["score"] = t.score;
        if (!t.note.empty()) o["note"] = t.note;
        origin.push_back(std::move(o));
    }
    doc["origin"] = std::move(origin);
    if (data.decomposition_max_dev) {
        json d;
        d["max_abs_dev"] = *data.decomposition_max_dev;
        d["tolerance"] = data.decomposition_tol;
        d["ok"] = *data.decomposition_max_dev <= data.decomposition_tol;
        doc["core_decomposition"] = std::move(d);
    }
    return doc.dump(2) + "\n";
}

std::string dilation_report_json(const DilationReportData& data, const ReportMeta& meta) {
    json doc;
    doc["schema"] = "dilation-report/1";
    doc["meta"] = meta_json(meta);
    doc["accepted"] = data.accepted;
    if (!data.error.empty()) doc["error"] = data.error;
    if (data.accepted) {
        doc["dim"] = data.dim;
        doc["det_abs"] = data.det_abs;
        doc["digits"] = data.digits;
    }
    return doc.dump(2) + "\n";
}

}  // namespace sis
