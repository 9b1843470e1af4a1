#include "padbench/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "padbench/error.hpp"

namespace padbench {

namespace {

using nlohmann::json;

json optional_to_json(const std::optional<double>& v) {
    if (!v) return nullptr;
    return *v;
}

std::optional<double> optional_from_json(const json& j, const char* key) {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    return j[key].get<double>();
}

json counts_to_json(const SubsetCounts& c) {
    return json{{"bona_fide", c.bona_fide}, {"attacks", c.attacks}};
}

SubsetCounts counts_from_json(const json& j) {
    SubsetCounts c;
    c.bona_fide = j.at("bona_fide").get<std::size_t>();
    c.attacks = j.at("attacks").get<std::size_t>();
    return c;
}

std::string hash_to_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace

std::string report_to_json(const EvaluationReport& r) {
    json doc;
    doc["protocol"] = r.protocol;
    doc["extractor"] = r.extractor_id;
    doc["config_hash"] = hash_to_hex(r.config_hash);
    doc["degenerate"] = r.degenerate;
    doc["warnings"] = r.warnings;
    doc["threshold"] = optional_to_json(r.threshold);
    doc["dev_eer"] = optional_to_json(r.dev_eer);

    json test;
    test["bpcer"] = r.test.counts.bona_fide > 0 ? json(r.test.bpcer) : json(nullptr);
    test["apcer"] = optional_to_json(r.test.apcer);
    test["acer"] = optional_to_json(r.test.acer);
    test["far_pooled"] = optional_to_json(r.test.far_pooled);
    test["hter"] = optional_to_json(r.test.hter);
    test["apcer_by_pai"] = r.test.apcer_by_pai;
    doc["test"] = test;

    json counts;
    counts["train"] = counts_to_json(r.train_counts);
    counts["dev"] = counts_to_json(r.dev_counts);
    counts["test"] = counts_to_json(r.test_counts);
    doc["counts"] = counts;
    return doc.dump(2) + "\n";
}

EvaluationReport report_from_json(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::parse_error, std::string("report: ") + e.what());
    }
    EvaluationReport r;
    r.protocol = doc.at("protocol").get<std::string>();
    r.extractor_id = doc.value("extractor", "");
    if (doc.contains("config_hash"))
        r.config_hash = std::stoull(doc["config_hash"].get<std::string>(), nullptr, 16);
    r.degenerate = doc.value("degenerate", false);
    if (doc.contains("warnings"))
        r.warnings = doc["warnings"].get<std::vector<std::string>>();
    r.threshold = optional_from_json(doc, "threshold");
    r.dev_eer = optional_from_json(doc, "dev_eer");
    if (doc.contains("test")) {
        const json& t = doc["test"];
        if (t.contains("bpcer") && !t["bpcer"].is_null()) r.test.bpcer = t["bpcer"].get<double>();
        r.test.apcer = optional_from_json(t, "apcer");
        r.test.acer = optional_from_json(t, "acer");
        r.test.far_pooled = optional_from_json(t, "far_pooled");
        r.test.hter = optional_from_json(t, "hter");
        if (t.contains("apcer_by_pai"))
            r.test.apcer_by_pai = t["apcer_by_pai"].get<std::map<std::string, double>>();
    }
    if (doc.contains("counts")) {
        const json& c = doc["counts"];
        r.train_counts = counts_from_json(c.at("train"));
        r.dev_counts = counts_from_json(c.at("dev"));
        r.test_counts = counts_from_json(c.at("test"));
        r.test.counts = r.test_counts;
    }
    if (r.threshold) r.test.threshold = *r.threshold;
    return r;
}

EvaluationReport load_report(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io_error, "cannot open report '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return report_from_json(text);
}

std::string format_rate(double percent) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", percent);
    return buf;
}

std::string render_report_table(const std::vector<EvaluationReport>& reports) {
    const std::vector<std::string> headers = {"Protocol", "HTER (%)", "ACER (%)",
                                              "APCER (%)", "BPCER (%)", "dev EER (%)"};
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : reports) {
        auto cell = [](const std::optional<double>& v) {
            return v ? format_rate(*v) : std::string("-");
        };
        std::optional<double> bpcer;
        if (r.test.counts.bona_fide > 0) bpcer = r.test.bpcer;
        rows.push_back({r.protocol + (r.degenerate ? " (degenerate)" : ""), cell(r.test.hter),
                        cell(r.test.acer), cell(r.test.apcer), cell(bpcer), cell(r.dev_eer)});
    }

    std::vector<std::size_t> widths(headers.size());
    for (std::size_t c = 0; c < headers.size(); ++c) {
        widths[c] = headers[c].size();
        for (const auto& row : rows) widths[c] = std::max(widths[c], row[c].size());
    }

    std::ostringstream out;
    auto emit_row = [&](const std::vector<std::string>& row) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << (c == 0 ? "| " : " ");
            out << row[c] << std::string(widths[c] - row[c].size(), ' ') << " |";
        }
        out << "\n";
    };
    auto rule = [&]() {
        for (std::size_t c = 0; c < widths.size(); ++c)
            out << (c == 0 ? "|" : "") << std::string(widths[c] + 2, '-') << "|";
        out << "\n";
    };
    rule();
    emit_row(headers);
    rule();
    for (const auto& row : rows) emit_row(row);
    rule();
    return out.str();
}

}  // namespace padbench
