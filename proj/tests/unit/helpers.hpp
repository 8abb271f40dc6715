#pragma once

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "grouprep/context.hpp"
#include "grouprep/embedding.hpp"

namespace testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("grouprep_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

private:
    std::filesystem::path path_;
};

inline grouprep::EmbeddingSpace make_space(
    std::size_t dim, std::initializer_list<std::pair<std::string, grouprep::Vector>> rows, int decade = 1900) {
    grouprep::EmbeddingSpace s(decade, dim);
    for (const auto& [w, v] : rows) s.set(w, v);
    return s;
}

inline grouprep::ContextTable make_table(int decade, const std::string& group,
                                         std::initializer_list<std::pair<std::string, std::uint64_t>> counts) {
    grouprep::ContextTable t(decade, group);
    for (const auto& [w, c] : counts) t.add(w, c);
    return t;
}

inline std::filesystem::path testdata() { return std::filesystem::path(GROUPREP_TESTDATA); }

}  // namespace testing

