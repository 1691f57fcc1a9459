#pragma once

#include "textforge/error.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <string>
#include <system_error>

namespace textforge {

using json = nlohmann::json;

namespace jsonl {

// Calls fn(line_number, record) for every non-blank line. Line numbers are
// 1-based. Parse failures become input_error with the offending line number.
inline void for_each_record(std::istream & in,
                            const std::function<void(std::size_t, const json &)> & fn) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json record = json::parse(line, nullptr, false);
        if (record.is_discarded()) {
            throw input_error("line " + std::to_string(line_no) + ": invalid JSON");
        }
        fn(line_no, record);
    }
}

inline const json & require_field(const json & record, std::size_t line_no, const char * name) {
    auto it = record.find(name);
    if (it == record.end()) {
        throw input_error("line " + std::to_string(line_no) + ": missing field " + name);
    }
    return *it;
}

} // namespace jsonl

// Writes to `<path>.tmp` and renames into place on commit, so a failed run
// never leaves a partial output file behind.
class atomic_file_writer {
  public:
    explicit atomic_file_writer(std::filesystem::path path)
        : path_(std::move(path)), tmp_(path_.string() + ".tmp"), out_(tmp_, std::ios::binary) {
        if (!out_) throw input_error("cannot open " + tmp_.string() + " for writing");
    }

    ~atomic_file_writer() {
        if (!committed_) {
            out_.close();
            std::error_code ec;
            std::filesystem::remove(tmp_, ec);
        }
    }

    atomic_file_writer(const atomic_file_writer &) = delete;
    atomic_file_writer & operator=(const atomic_file_writer &) = delete;

    std::ostream & stream() { return out_; }

    void write_record(const json & record) { out_ << record.dump() << '\n'; }

    void commit() {
        out_.flush();
        if (!out_) throw input_error("write failed for " + tmp_.string());
        out_.close();
        std::filesystem::rename(tmp_, path_);
        committed_ = true;
    }

  private:
    std::filesystem::path path_;
    std::filesystem::path tmp_;
    std::ofstream out_;
    bool committed_ = false;
};

} // namespace textforge
