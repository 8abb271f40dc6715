#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "grouprep/roster.hpp"

namespace grouprep {

using Vector = std::vector<double>;

// Pre-trained vectors of one decade. Rows are stored contiguously.
class EmbeddingSpace {
public:
    EmbeddingSpace() = default;
    EmbeddingSpace(int decade, std::size_t dim) : decade_(decade), dim_(dim) {}

    int decade() const noexcept { return decade_; }
    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return words_.size(); }
    const std::vector<std::string>& words() const noexcept { return words_; }

    // Inserts or replaces; returns false when the word was already present.
    bool set(std::string_view word, std::span<const double> values);

    bool contains(std::string_view word) const { return index_.find(word) != index_.end(); }
    std::optional<std::span<const double>> find(std::string_view word) const;
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * dim_, dim_}; }

    std::size_t duplicate_words = 0;       // set by load_space
    std::vector<std::string> zero_vectors;  // words whose vector is all zeros

private:
    int decade_ = 0;
    std::size_t dim_ = 0;
    std::vector<std::string> words_;
    std::vector<double> data_;
    std::unordered_map<std::string, std::size_t, StringHash, std::equal_to<>> index_;
};

// Text format "word v1 ... vd" per line, optionally preceded by a
// "count dim" header. Throws Errc::DimensionMismatch / Errc::EmptyFile.
EmbeddingSpace parse_space(std::string_view text, int decade);
EmbeddingSpace load_space(const std::filesystem::path& path, int decade);
std::string serialize_space(const EmbeddingSpace& space);

double dot(std::span<const double> u, std::span<const double> v);
double norm(std::span<const double> u);

// Throws Errc::ZeroNorm.
double cosine(std::span<const double> u, std::span<const double> v);

struct MeanVector {
    Vector mean;
    std::vector<std::string> used;
};

// Mean of the vectors of `words` found in the space, in the given order.
// Throws Errc::TooFewWords when fewer than `min_present` are found.
MeanVector mean_vector(std::span<const std::string> words, const EmbeddingSpace& space, std::size_t min_present = 1);

}  // namespace grouprep
