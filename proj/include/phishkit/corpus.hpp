#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace phishkit {

enum class Source { baseline_archive, deployment_archive, llm_generated, synthetic };

inline std::string to_string(Source s) {
    switch (s) {
        case Source::baseline_archive: return "baseline-archive";
        case Source::deployment_archive: return "deployment-archive";
        case Source::llm_generated: return "llm-generated";
        case Source::synthetic: return "synthetic";
    }
    return "baseline-archive";
}

inline Source source_from_string(const std::string& s) {
    if (s == "baseline-archive") return Source::baseline_archive;
    if (s == "deployment-archive") return Source::deployment_archive;
    if (s == "llm-generated") return Source::llm_generated;
    if (s == "synthetic") return Source::synthetic;
    throw std::invalid_argument("unknown source tag: " + s);
}

struct Email {
    std::string id;
    std::string sender;
    std::string subject;
    std::string body;
    int label = 0;  // 0 legitimate, 1 phishing
    Source source = Source::baseline_archive;

    bool operator==(const Email&) const = default;

    // Subject and body joined into the single text the pipeline consumes.
    std::string text() const {
        if (subject.empty()) return body;
        if (body.empty()) return subject;
        return subject + " " + body;
    }
};

struct Dataset {
    std::vector<Email> emails;

    std::size_t size() const { return emails.size(); }

    std::map<int, std::size_t> class_counts() const {
        std::map<int, std::size_t> counts;
        for (const auto& e : emails) ++counts[e.label];
        return counts;
    }
};

struct SplitSpec {
    double train_fraction = 0.8;
    std::uint64_t seed = 0;
    bool stratified = true;
};

enum class DataFormat { csv, jsonl };

struct SkippedRow {
    std::size_t line = 0;
    std::string reason;
};

struct LoadResult {
    Dataset dataset;
    std::size_t dropped_empty = 0;  // records with empty body and subject
    std::vector<SkippedRow> skipped;
};

namespace detail {

struct CsvRecord {
    std::vector<std::string> fields;
    std::size_t line = 0;  // physical line where the record starts
};

// RFC 4180: quoted fields may hold commas, doubled quotes, and newlines.
inline std::vector<CsvRecord> parse_csv(std::istream& in) {
    std::vector<CsvRecord> records;
    std::vector<std::string> fields;
    std::string field;
    bool in_quotes = false;
    bool any_data = false;
    std::size_t line = 1, record_line = 1;

    const auto end_field = [&] {
        fields.push_back(field);
        field.clear();
    };
    const auto end_record = [&] {
        end_field();
        if (fields.size() > 1 || !fields[0].empty())
            records.push_back({fields, record_line});
        fields.clear();
        any_data = false;
        record_line = line;
    };

    char c;
    while (in.get(c)) {
        if (in_quotes) {
            if (c == '"') {
                if (in.peek() == '"') {
                    field.push_back('"');
                    in.get(c);
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
        } else if (c == '"' && field.empty()) {
            in_quotes = true;
            any_data = true;
        } else if (c == ',') {
            end_field();
            any_data = true;
        } else if (c == '\n') {
            if (!field.empty() && field.back() == '\r') field.pop_back();
            ++line;
            if (any_data || !field.empty() || !fields.empty()) end_record();
            record_line = line;
        } else {
            field.push_back(c);
            any_data = true;
        }
    }
    if (in_quotes) throw std::runtime_error("unterminated quoted field at line " +
                                            std::to_string(record_line));
    if (!field.empty() && field.back() == '\r') field.pop_back();
    if (any_data || !field.empty() || !fields.empty()) end_record();
    return records;
}

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

inline std::string lower_copy(std::string s) {
    for (char& c : s)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return s;
}

inline std::optional<int> parse_label(const nlohmann::json& v) {
    if (v.is_number_integer()) {
        const int l = v.get<int>();
        if (l == 0 || l == 1) return l;
        return std::nullopt;
    }
    if (v.is_string()) {
        const std::string s = lower_copy(v.get<std::string>());
        if (s == "0" || s == "legitimate" || s == "legit" || s == "ham") return 0;
        if (s == "1" || s == "phishing" || s == "phish" || s == "spam") return 1;
    }
    return std::nullopt;
}

}  // namespace detail

// Loads a labeled email dataset. CSV columns resolve case-insensitively:
// body from {body, content, text}, subject from {subject}, sender from
// {sender, from}, label from {label, class}, id from {id}. A forced label
// overrides any label column. Rows that fail to parse are skipped and
// reported with their line number; rows with empty subject and body are
// dropped and counted.
inline LoadResult load_dataset(const std::string& path, DataFormat format,
                               std::optional<int> forced_label = std::nullopt,
                               Source default_source = Source::baseline_archive) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dataset file: " + path);

    LoadResult result;
    std::size_t next_id = 0;
    const auto fresh_id = [&] { return "row" + std::to_string(next_id++); };

    if (format == DataFormat::csv) {
        const auto records = detail::parse_csv(in);
        if (records.empty()) throw std::runtime_error("empty csv file: " + path);

        const auto& header = records.front().fields;
        int body_col = -1, subject_col = -1, sender_col = -1, label_col = -1, id_col = -1;
        for (std::size_t i = 0; i < header.size(); ++i) {
            const std::string h = detail::lower_copy(header[i]);
            const int col = static_cast<int>(i);
            if (h == "body" || h == "content" || h == "text") body_col = col;
            else if (h == "subject") subject_col = col;
            else if (h == "sender" || h == "from") sender_col = col;
            else if (h == "label" || h == "class") label_col = col;
            else if (h == "id") id_col = col;
        }
        if (body_col < 0)
            throw std::runtime_error(path + ": no body/content/text column in csv header");
        if (label_col < 0 && !forced_label)
            throw std::runtime_error(path + ": no label/class column and no forced label");

        for (std::size_t r = 1; r < records.size(); ++r) {
            const auto& rec = records[r];
            if (rec.fields.size() != header.size()) {
                result.skipped.push_back({rec.line, "field count mismatch"});
                continue;
            }
            const auto get = [&](int col) {
                return col >= 0 ? rec.fields[static_cast<std::size_t>(col)] : std::string();
            };
            Email e;
            e.subject = get(subject_col);
            e.body = get(body_col);
            e.sender = get(sender_col);
            e.source = default_source;
            if (forced_label) {
                e.label = *forced_label;
            } else {
                const auto l = detail::parse_label(nlohmann::json(get(label_col)));
                if (!l) {
                    result.skipped.push_back({rec.line, "unparseable label"});
                    continue;
                }
                e.label = *l;
            }
            if (e.subject.empty() && e.body.empty()) {
                ++result.dropped_empty;
                continue;
            }
            e.id = id_col >= 0 && !get(id_col).empty() ? get(id_col) : fresh_id();
            result.dataset.emails.push_back(std::move(e));
        }
    } else {
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(line);
            } catch (const nlohmann::json::exception&) {
                result.skipped.push_back({lineno, "invalid json"});
                continue;
            }
            if (!j.is_object()) {
                result.skipped.push_back({lineno, "record is not an object"});
                continue;
            }
            if (j.contains("meta")) continue;  // experiment file header line
            Email e;
            e.subject = j.value("subject", std::string());
            e.body = j.value("body", std::string());
            e.sender = j.value("sender", std::string());
            if (forced_label) {
                e.label = *forced_label;
            } else if (j.contains("label")) {
                const auto l = detail::parse_label(j["label"]);
                if (!l) {
                    result.skipped.push_back({lineno, "unparseable label"});
                    continue;
                }
                e.label = *l;
            } else {
                result.skipped.push_back({lineno, "missing label"});
                continue;
            }
            if (e.subject.empty() && e.body.empty()) {
                ++result.dropped_empty;
                continue;
            }
            e.source = j.contains("source") ? source_from_string(j["source"].get<std::string>())
                                            : default_source;
            e.id = j.contains("id") && j["id"].is_string() && !j["id"].get<std::string>().empty()
                       ? j["id"].get<std::string>()
                       : fresh_id();
            result.dataset.emails.push_back(std::move(e));
        }
    }
    return result;
}

inline void save_dataset(const Dataset& d, const std::string& path, DataFormat format) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write dataset file: " + path);
    if (format == DataFormat::csv) {
        out << "id,sender,subject,body,label\n";
        for (const auto& e : d.emails) {
            out << detail::csv_escape(e.id) << ',' << detail::csv_escape(e.sender) << ','
                << detail::csv_escape(e.subject) << ',' << detail::csv_escape(e.body) << ','
                << e.label << '\n';
        }
    } else {
        for (const auto& e : d.emails) {
            nlohmann::json j;
            j["id"] = e.id;
            j["sender"] = e.sender;
            j["subject"] = e.subject;
            j["body"] = e.body;
            j["label"] = e.label;
            j["source"] = to_string(e.source);
            out << j.dump() << '\n';
        }
    }
}

namespace detail {

// Per-class index groups in ascending label order, each shuffled with the
// shared engine. Depends only on row positions, never on email ids.
inline std::map<int, std::vector<std::size_t>> shuffled_class_indices(const Dataset& d,
                                                                      std::uint64_t seed) {
    std::map<int, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < d.emails.size(); ++i) groups[d.emails[i].label].push_back(i);
    std::mt19937_64 rng(seed);
    for (auto& [label, idx] : groups) std::shuffle(idx.begin(), idx.end(), rng);
    return groups;
}

}  // namespace detail

// 80:20-style split preserving per-class proportions within one record.
inline std::pair<Dataset, Dataset> stratified_split(const Dataset& d, const SplitSpec& spec) {
    if (spec.train_fraction <= 0.0 || spec.train_fraction >= 1.0)
        throw std::invalid_argument("train_fraction must be in (0,1)");
    if (d.emails.empty()) throw std::invalid_argument("cannot split an empty dataset");

    std::vector<bool> in_train(d.emails.size(), false);
    if (spec.stratified) {
        for (auto& [label, idx] : detail::shuffled_class_indices(d, spec.seed)) {
            if (idx.size() < 2)
                throw std::invalid_argument("class " + std::to_string(label) +
                                            " has fewer than 2 members; cannot stratify");
            auto n_train = static_cast<std::size_t>(
                std::llround(spec.train_fraction * static_cast<double>(idx.size())));
            n_train = std::clamp<std::size_t>(n_train, 1, idx.size() - 1);
            for (std::size_t i = 0; i < n_train; ++i) in_train[idx[i]] = true;
        }
    } else {
        std::vector<std::size_t> idx(d.emails.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::mt19937_64 rng(spec.seed);
        std::shuffle(idx.begin(), idx.end(), rng);
        auto n_train = static_cast<std::size_t>(
            std::llround(spec.train_fraction * static_cast<double>(idx.size())));
        n_train = std::clamp<std::size_t>(n_train, 1, idx.size() - 1);
        for (std::size_t i = 0; i < n_train; ++i) in_train[idx[i]] = true;
    }

    std::pair<Dataset, Dataset> out;
    for (std::size_t i = 0; i < d.emails.size(); ++i)
        (in_train[i] ? out.first : out.second).emails.push_back(d.emails[i]);
    return out;
}

struct FoldIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> validation;
};

// Stratified k-fold over a label vector: per class, shuffled indices are
// dealt round-robin so every fold's class ratio matches the whole within
// one record.
inline std::vector<FoldIndices> stratified_kfold_labels(const std::vector<int>& labels, int k,
                                                        std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("k must be >= 2");
    std::map<int, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < labels.size(); ++i) groups[labels[i]].push_back(i);
    for (const auto& [label, idx] : groups)
        if (idx.size() < static_cast<std::size_t>(k))
            throw std::invalid_argument("class " + std::to_string(label) +
                                        " has fewer than k members");

    std::mt19937_64 rng(seed);
    std::vector<std::vector<std::size_t>> folds(static_cast<std::size_t>(k));
    for (auto& [label, idx] : groups) {
        std::shuffle(idx.begin(), idx.end(), rng);
        for (std::size_t i = 0; i < idx.size(); ++i)
            folds[i % static_cast<std::size_t>(k)].push_back(idx[i]);
    }

    std::vector<FoldIndices> out(static_cast<std::size_t>(k));
    for (std::size_t f = 0; f < folds.size(); ++f) {
        std::sort(folds[f].begin(), folds[f].end());
        out[f].validation = folds[f];
        for (std::size_t g = 0; g < folds.size(); ++g)
            if (g != f)
                out[f].train.insert(out[f].train.end(), folds[g].begin(), folds[g].end());
        std::sort(out[f].train.begin(), out[f].train.end());
    }
    return out;
}

inline std::vector<FoldIndices> stratified_kfold(const Dataset& d, int k, std::uint64_t seed) {
    std::vector<int> labels;
    labels.reserve(d.emails.size());
    for (const auto& e : d.emails) labels.push_back(e.label);
    return stratified_kfold_labels(labels, k, seed);
}

}  // namespace phishkit
