#pragma once

#include "textforge/ocr.hpp"
#include "textforge/span.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

namespace fixtures {

// PaddleOCR results of the book-cover walkthrough (already normalized).
inline textforge::ocr_document paddle_doc() {
    textforge::ocr_document doc;
    doc.id = "cover-001-paddle";
    doc.image_ref = "cover-001.jpg";
    doc.width = 1000;
    doc.height = 1000;
    doc.engine = "PaddleOCR";
    doc.tokens = {
        {"BABIES", {0.084, 0.067, 0.496, 0.190}, {}},
        {"COME", {0.504, 0.049, 0.711, 0.130}, {}},
        {"FROM", {0.150, 0.193, 0.367, 0.270}, {}},
        {"AIRPORTS", {0.350, 0.138, 0.934, 0.298}, {}},
        {"Arrivals=", {0.128, 0.318, 0.381, 0.400}, {}},
        {"Written by Erin Dealey lllustrated by Luciana Navarro Powel",
         {0.136, 0.909, 0.887, 0.930},
         {}},
    };
    return doc;
}

// EasyOCR results of the same cover, typos and all.
inline textforge::ocr_document easy_doc() {
    textforge::ocr_document doc;
    doc.id = "cover-001-easy";
    doc.image_ref = "cover-001.jpg";
    doc.width = 1000;
    doc.height = 1000;
    doc.engine = "EasyOCR";
    doc.tokens = {
        {"BABI-S CONE", {0.063, 0.032, 0.733, 0.208}, {}},
        {"FROM", {0.144, 0.186, 0.371, 0.279}, {}},
        {"AIRPORTS", {0.353, 0.124, 0.940, 0.304}, {}},
        {"Arrivals", {0.120, 0.310, 0.340, 0.398}, {}},
        {"Writien", {0.133, 0.907, 0.225, 0.933}, {}},
        {"by ", {0.219, 0.902, 0.268, 0.939}, {}},
        {"Erin Dealey", {0.261, 0.902, 0.408, 0.938}, {}},
        {"Illustrated by Luciana Navarro Powell", {0.438, 0.905, 0.893, 0.938}, {}},
    };
    return doc;
}

// The four title-word boxes whose union is the A1 answer box.
inline std::vector<textforge::bbox> title_boxes() {
    return {{0.084, 0.067, 0.496, 0.190},
            {0.504, 0.049, 0.711, 0.130},
            {0.150, 0.193, 0.367, 0.270},
            {0.350, 0.138, 0.934, 0.298}};
}

inline textforge::bbox a1_box() { return {0.084, 0.049, 0.934, 0.298}; }

// Unique scratch directory, removed on destruction.
class temp_dir {
  public:
    explicit temp_dir(const std::string & tag) {
        static std::mt19937_64 rng(std::random_device{}());
        path_ = std::filesystem::temp_directory_path() /
                ("textforge-" + tag + "-" + std::to_string(rng()));
        std::filesystem::create_directories(path_);
    }

    ~temp_dir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }

    const std::filesystem::path & path() const { return path_; }

    std::filesystem::path file(const std::string & name) const { return path_ / name; }

    std::filesystem::path write(const std::string & name, const std::string & content) const {
        const std::filesystem::path p = path_ / name;
        std::ofstream out(p, std::ios::binary);
        out << content;
        return p;
    }

  private:
    std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path & p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

// Minimal XML tag-balance check, enough to catch malformed SVG output.
inline bool xml_balanced(const std::string & doc) {
    std::vector<std::string> stack;
    std::size_t i = 0;
    while (i < doc.size()) {
        if (doc[i] != '<') {
            ++i;
            continue;
        }
        const std::size_t close = doc.find('>', i);
        if (close == std::string::npos) return false;
        std::string tag = doc.substr(i + 1, close - i - 1);
        i = close + 1;
        if (tag.empty() || tag[0] == '?' || tag[0] == '!') continue;
        if (tag[0] == '/') {
            if (stack.empty()) return false;
            if (stack.back() != tag.substr(1)) return false;
            stack.pop_back();
            continue;
        }
        if (tag.back() == '/') continue; // self-closing
        const std::size_t space = tag.find_first_of(" \t\n");
        stack.push_back(space == std::string::npos ? tag : tag.substr(0, space));
    }
    return stack.empty();
}

} // namespace fixtures
