#pragma once

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>

#include <json.hpp>

#include "error.hpp"
#include "index.hpp"

namespace ontoir {

inline constexpr int index_format_version = 1;

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw io_error("cannot open " + path.string() + " for writing");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
        throw io_error("failed writing " + path.string());
    }
}

inline std::string read_file(const std::filesystem::path& path, const std::string& name)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw format_error(name, "missing or unreadable");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn)
{
    std::size_t start = 0;
    std::size_t number = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        fn(text.substr(start, end - start), ++number);
        start = end + 1;
    }
}

inline std::string dump(const nlohmann::ordered_json& j, int indent = -1)
{
    return j.dump(indent, ' ', false, nlohmann::json::error_handler_t::replace);
}

} // namespace detail

inline std::string manifest_json(const Index& index)
{
    nlohmann::ordered_json j;
    j["format_version"] = index_format_version;
    j["kind"] = kind_name(index.kind());
    j["doc_count"] = index.size();
    return detail::dump(j, 2) + "\n";
}

inline std::string docs_jsonl(const Index& index)
{
    std::string out;
    for (const auto& doc : index.docs()) {
        nlohmann::ordered_json j;
        j["id"] = doc.id;
        auto fields = nlohmann::ordered_json::array();
        for (const auto& fv : doc.fields) {
            fields.push_back({field_name(fv.field), fv.text});
        }
        j["fields"] = std::move(fields);
        out += detail::dump(j);
        out += '\n';
    }
    return out;
}

// `field<TAB>term<TAB>id,id,...`, sorted by field name then term, bytewise.
inline std::string postings_tsv(const Index& index)
{
    std::vector<Field> fields(all_fields.begin(), all_fields.end());
    std::sort(fields.begin(), fields.end(), [](Field a, Field b) { return field_name(a) < field_name(b); });
    std::string out;
    for (auto f : fields) {
        for (const auto& [term, list] : index.dictionary(f)) {
            out += field_name(f);
            out += '\t';
            out += term;
            out += '\t';
            for (std::size_t i = 0; i < list.size(); ++i) {
                if (i > 0) {
                    out += ',';
                }
                out += std::to_string(list[i]);
            }
            out += '\n';
        }
    }
    return out;
}

/// Writes manifest.json, docs.jsonl and postings.tsv into `dir`, creating it
/// if needed. Output bytes depend only on the index contents.
inline void write_index(const Index& index, const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw io_error("cannot create index directory " + dir.string() + (ec ? ": " + ec.message() : ""));
    }
    detail::write_file(dir / "docs.jsonl", docs_jsonl(index));
    detail::write_file(dir / "postings.tsv", postings_tsv(index));
    // Manifest last: its presence marks a complete index.
    detail::write_file(dir / "manifest.json", manifest_json(index));
}

inline Index read_index(const std::filesystem::path& dir)
{
    auto manifest_text = detail::read_file(dir / "manifest.json", "manifest.json");
    nlohmann::json manifest;
    try {
        manifest = nlohmann::json::parse(manifest_text);
    } catch (const nlohmann::json::exception& e) {
        throw format_error("manifest.json", e.what());
    }
    if (!manifest.is_object() || !manifest.contains("format_version") || !manifest["format_version"].is_number_integer()) {
        throw format_error("manifest.json", "no integer format_version");
    }
    if (manifest["format_version"].get<long long>() != index_format_version) {
        throw version_error("manifest.json", "unsupported format_version " + manifest["format_version"].dump() +
                                                 " (expected " + std::to_string(index_format_version) + ")");
    }
    if (!manifest.contains("kind") || !manifest["kind"].is_string() ||
        !parse_kind_name(manifest["kind"].get<std::string>())) {
        throw format_error("manifest.json", "kind must be BASIC or RULES");
    }
    if (!manifest.contains("doc_count") || !manifest["doc_count"].is_number_unsigned()) {
        throw format_error("manifest.json", "no doc_count");
    }
    auto kind = *parse_kind_name(manifest["kind"].get<std::string>());
    auto doc_count = manifest["doc_count"].get<std::size_t>();

    std::vector<IndexedDoc> docs;
    auto docs_text = detail::read_file(dir / "docs.jsonl", "docs.jsonl");
    detail::for_each_line(docs_text, [&](std::string_view line, std::size_t number) {
        auto where = "line " + std::to_string(number) + ": ";
        try {
            auto j = nlohmann::json::parse(line);
            IndexedDoc doc;
            doc.id = j.at("id").get<DocId>();
            for (const auto& pair : j.at("fields")) {
                if (!pair.is_array() || pair.size() != 2) {
                    throw format_error("docs.jsonl", where + "field entries are [name, text] pairs");
                }
                auto field = parse_field_name(pair[0].get<std::string>());
                if (!field) {
                    throw format_error("docs.jsonl", where + "unknown field " + pair[0].dump());
                }
                doc.fields.push_back({*field, pair[1].get<std::string>()});
            }
            if (doc.id != docs.size()) {
                throw format_error("docs.jsonl", where + "expected id " + std::to_string(docs.size()));
            }
            docs.push_back(std::move(doc));
        } catch (const nlohmann::json::exception& e) {
            throw format_error("docs.jsonl", where + e.what());
        }
    });
    if (docs.size() != doc_count) {
        throw format_error("docs.jsonl", "holds " + std::to_string(docs.size()) + " documents, manifest says " +
                                             std::to_string(doc_count));
    }

    std::array<Index::Dictionary, 4> postings;
    auto postings_text = detail::read_file(dir / "postings.tsv", "postings.tsv");
    detail::for_each_line(postings_text, [&](std::string_view line, std::size_t number) {
        auto where = "line " + std::to_string(number) + ": ";
        auto tab1 = line.find('\t');
        auto tab2 = tab1 == std::string_view::npos ? tab1 : line.find('\t', tab1 + 1);
        if (tab2 == std::string_view::npos) {
            throw format_error("postings.tsv", where + "expected three tab-separated columns");
        }
        auto field = parse_field_name(line.substr(0, tab1));
        if (!field) {
            throw format_error("postings.tsv", where + "unknown field");
        }
        auto term = std::string(line.substr(tab1 + 1, tab2 - tab1 - 1));
        std::vector<DocId> list;
        auto ids = line.substr(tab2 + 1);
        std::size_t pos = 0;
        while (pos <= ids.size()) {
            auto comma = ids.find(',', pos);
            if (comma == std::string_view::npos) {
                comma = ids.size();
            }
            auto item = ids.substr(pos, comma - pos);
            DocId id = 0;
            auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), id);
            if (ec != std::errc{} || ptr != item.data() + item.size() || item.empty()) {
                throw format_error("postings.tsv", where + "bad doc id '" + std::string(item) + "'");
            }
            list.push_back(id);
            pos = comma + 1;
        }
        auto& dict = postings[static_cast<std::size_t>(*field)];
        if (!dict.empty() && dict.rbegin()->first >= term) {
            throw format_error("postings.tsv", where + "terms out of order");
        }
        dict.emplace(std::move(term), std::move(list));
    });

    try {
        return Index::from_parts(kind, std::move(docs), std::move(postings));
    } catch (const argument_error& e) {
        throw format_error("postings.tsv", e.what());
    }
}

} // namespace ontoir
