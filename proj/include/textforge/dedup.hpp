#pragma once

#include "textforge/error.hpp"
#include "textforge/jsonl.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace textforge {

namespace detail {

inline std::string to_hex(const unsigned char * digest, unsigned int len) {
    static const char * hex = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

} // namespace detail

// MD5 of a byte sequence, lowercase hex. MD5 is deliberate: the digests only
// deduplicate corpus files, nothing security-sensitive.
inline std::string content_hash(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_md5(), nullptr) != 1) {
        throw error("MD5 digest failed");
    }
    return detail::to_hex(digest, len);
}

inline std::string content_hash_file(const std::filesystem::path & path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("cannot read " + path.string());
    EVP_MD_CTX * ctx = EVP_MD_CTX_new();
    if (!ctx || EVP_DigestInit_ex(ctx, EVP_md5(), nullptr) != 1) {
        EVP_MD_CTX_free(ctx);
        throw error("MD5 init failed");
    }
    char buf[1 << 16];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        if (EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount())) != 1) {
            EVP_MD_CTX_free(ctx);
            throw error("MD5 update failed");
        }
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    const int ok = EVP_DigestFinal_ex(ctx, digest, &len);
    EVP_MD_CTX_free(ctx);
    if (ok != 1) throw error("MD5 final failed");
    return detail::to_hex(digest, len);
}

struct hash_entry {
    std::string id;
    std::string image_ref;
    std::string digest;
};

struct hash_failure {
    std::string id;
    std::string message;
};

struct hash_result {
    std::vector<hash_entry> entries;
    std::vector<hash_failure> failures;
};

// Hash a batch of files; unreadable files are recorded as failures and
// processing continues.
inline hash_result hash_files(const std::vector<std::pair<std::string, std::filesystem::path>> & files) {
    hash_result result;
    for (const auto & [id, path] : files) {
        try {
            std::string digest = content_hash_file(path);
            result.entries.push_back(hash_entry{id, path.string(), std::move(digest)});
        } catch (const error & e) {
            result.failures.push_back(hash_failure{id, e.what()});
        }
    }
    return result;
}

// Regular files under root, ids are slash-separated paths relative to root,
// sorted for reproducibility.
inline std::vector<std::pair<std::string, std::filesystem::path>>
walk_files(const std::filesystem::path & root) {
    std::vector<std::pair<std::string, std::filesystem::path>> files;
    for (const auto & entry : std::filesystem::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file() && !entry.is_symlink()) continue;
        files.emplace_back(entry.path().lexically_relative(root).generic_string(), entry.path());
    }
    std::sort(files.begin(), files.end());
    return files;
}

struct manifest_row {
    std::string id;
    std::string digest;
    std::string image_ref;
    bool kept = false;
    std::optional<std::string> duplicate_of;
};

struct dedup_manifest {
    std::vector<manifest_row> rows;       // input order
    std::set<std::string> unique_ids;     // retained set

    std::size_t kept_count() const { return unique_ids.size(); }
};

// First occurrence per digest wins; later ids are recorded with the id they
// duplicate. Duplicate ids are an error.
inline dedup_manifest dedup(const std::vector<hash_entry> & entries) {
    dedup_manifest manifest;
    std::map<std::string, std::string> first_by_digest;
    std::set<std::string> seen_ids;
    for (const hash_entry & e : entries) {
        if (!seen_ids.insert(e.id).second) {
            throw input_error("duplicate id in dedup input: " + e.id);
        }
        manifest_row row{e.id, e.digest, e.image_ref, false, std::nullopt};
        auto [it, inserted] = first_by_digest.emplace(e.digest, e.id);
        if (inserted) {
            row.kept = true;
            manifest.unique_ids.insert(e.id);
        } else {
            row.duplicate_of = it->second;
        }
        manifest.rows.push_back(std::move(row));
    }
    return manifest;
}

inline json to_json(const manifest_row & row) {
    json j{{"id", row.id}, {"digest", row.digest}, {"image", row.image_ref}, {"kept", row.kept}};
    if (row.duplicate_of) j["duplicate_of"] = *row.duplicate_of;
    return j;
}

inline void save_manifest(std::ostream & out, const dedup_manifest & manifest) {
    for (const manifest_row & row : manifest.rows) out << to_json(row).dump() << '\n';
}

} // namespace textforge
